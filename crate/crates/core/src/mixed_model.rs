//! The decomposed operad `PaPB′₊` of triples `[u, x, µ]`, its map `ρ` into the shifted operad of
//! parenthesized braids, and the chord-diagram analogue `PaPCD^φ₊` with `ρ_φ`.
//!
//! A triple is stored as its canonical representative in which all three components read the
//! same labels: the leaves of `u` are the terrestrial labels of `µ` in order, and the source and
//! target of `x` are exactly `U(µ(*_o, …, *_o))` for the source and target of `µ`.

use std::fmt;

use rand::Rng;
use serde_json::{json, Value};

use crate::associator::{lift_phi_tilde, Associator};
use crate::braid_engine::BraidWord;
use crate::chord_diagrams::{random_grouplike, PaCDMorphism};
use crate::colored_operads::{random_morphism, CoPBMorphism};
use crate::error::{Error, Result};
use crate::operad_axioms::PartialOperad;
use crate::report::SuiteReport;
use crate::parenthesized_operads::{papb_insert, random_papb, PaPBMorphism};
use crate::trees_magma::{
    close_open_inputs, forget_parenthesization_u, graft, mc, omega_map, random_bitree, random_closed_tree, x, y,
    Color, Point, Slot, Tree,
};

/// Operations the middle component needs: parenthesized braids or parenthesized chord diagrams.
pub trait Middle: Clone + fmt::Debug + fmt::Display {
    fn identity(t: &Tree, degree: usize) -> Result<Self>;
    fn src(&self) -> &Tree;
    fn tgt(&self) -> &Tree;
    fn insert_closed(&self, i: usize, inner: &Self) -> Result<Self>;
    fn relabel_closed(&self, g: &dyn Fn(usize) -> usize) -> Result<Self>;
    fn then(&self, next: &Self) -> Result<Self>;
    fn inverse(&self) -> Result<Self>;
    fn same(&self, other: &Self) -> bool;
}

impl Middle for PaPBMorphism {
    fn identity(t: &Tree, _: usize) -> Result<Self> {
        PaPBMorphism::identity(t)
    }
    fn src(&self) -> &Tree {
        &self.src
    }
    fn tgt(&self) -> &Tree {
        &self.tgt
    }
    fn insert_closed(&self, i: usize, inner: &Self) -> Result<Self> {
        papb_insert(self, Slot::Closed(i), inner)
    }
    fn relabel_closed(&self, g: &dyn Fn(usize) -> usize) -> Result<Self> {
        Ok(self.relabel(g, &|j| j))
    }
    fn then(&self, next: &Self) -> Result<Self> {
        PaPBMorphism::then(self, next)
    }
    fn inverse(&self) -> Result<Self> {
        Ok(PaPBMorphism::inverse(self))
    }
    fn same(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl fmt::Display for PaCDMorphism {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "{} --[{}]--> {}", self.src, self.element, self.tgt)
    }
}

impl Middle for PaCDMorphism {
    fn identity(t: &Tree, degree: usize) -> Result<Self> {
        PaCDMorphism::identity(t, degree)
    }
    fn src(&self) -> &Tree {
        &self.src
    }
    fn tgt(&self) -> &Tree {
        &self.tgt
    }
    fn insert_closed(&self, i: usize, inner: &Self) -> Result<Self> {
        self.insert(i, inner)
    }
    fn relabel_closed(&self, g: &dyn Fn(usize) -> usize) -> Result<Self> {
        self.relabel(g)
    }
    fn then(&self, next: &Self) -> Result<Self> {
        PaCDMorphism::then(self, next)
    }
    fn inverse(&self) -> Result<Self> {
        PaCDMorphism::inverse(self)
    }
    fn same(&self, other: &Self) -> bool {
        self == other
    }
}

/// `U(µ(*_o, …, *_o))`.
pub fn closed_shadow(mu: &Tree) -> Result<Tree> {
    forget_parenthesization_u(&close_open_inputs(mu))
}

/// `[u, x, µ]`: `u` a parenthesized permutation on the terrestrial labels (a closed tree read
/// through its `x` leaves), `x` the aerial part, `µ` a pair of bitrees with equal orders.
#[derive(Clone, Debug)]
pub struct Triple<M> {
    pub u_src: Tree,
    pub u_tgt: Tree,
    pub x: M,
    pub mu_src: Tree,
    pub mu_tgt: Tree,
}

pub type PrimeMorphism = Triple<PaPBMorphism>;
pub type PaPCDMorphism = Triple<PaCDMorphism>;

impl<M: Middle> Triple<M> {
    /// Checks the object condition at both ends.
    pub fn new(u_src: Tree, u_tgt: Tree, x: M, mu_src: Tree, mu_tgt: Tree) -> Result<Self> {
        for t in [&mu_src, &mu_tgt] {
            t.validate()?;
            if t.color() != Color::Open {
                return Err(Error::ColorMismatch(format!("{t} is not a bitree")));
            }
        }
        for t in [&u_src, &u_tgt] {
            t.validate()?;
            if t.color() != Color::Closed {
                return Err(Error::ColorMismatch(format!("{t} is not a parenthesized permutation")));
            }
        }
        let order = mu_src.open_labels();
        if mu_tgt.open_labels() != order || u_src.closed_labels() != order || u_tgt.closed_labels() != order {
            return Err(Error::ObjectMismatch(format!("terrestrial orders of {u_src}, {u_tgt}, {mu_src}, {mu_tgt}")));
        }
        if closed_shadow(&mu_src)? != *x.src() || closed_shadow(&mu_tgt)? != *x.tgt() {
            return Err(Error::ObjectMismatch(format!("object condition fails for {x} over {mu_src} → {mu_tgt}")));
        }
        Ok(Triple { u_src, u_tgt, x, mu_src, mu_tgt })
    }

    pub fn arity(&self) -> (usize, usize) {
        self.mu_src.arity()
    }

    /// The operad identity `[1, *_c, 1] ∈ (1, 0)`.
    pub fn unit(degree: usize) -> Result<Self> {
        Self::new(x(1), x(1), M::identity(&Tree::UnitC, degree)?, y(1), y(1))
    }

    pub fn identity(u: &Tree, mu: &Tree, degree: usize) -> Result<Self> {
        Self::new(u.clone(), u.clone(), M::identity(&closed_shadow(mu)?, degree)?, mu.clone(), mu.clone())
    }

    /// Composition in the groupoid, `self` first.
    pub fn then(&self, next: &Self) -> Result<Self> {
        if self.u_tgt != next.u_src || self.mu_tgt != next.mu_src {
            return Err(Error::ObjectMismatch(format!("{} vs {}", self.mu_tgt, next.mu_src)));
        }
        Self::new(self.u_src.clone(), next.u_tgt.clone(), self.x.then(&next.x)?, self.mu_src.clone(), next.mu_tgt.clone())
    }

    pub fn inverse(&self) -> Result<Self> {
        Self::new(self.u_tgt.clone(), self.u_src.clone(), self.x.inverse()?, self.mu_tgt.clone(), self.mu_src.clone())
    }

    pub fn relabel(&self, closed: &dyn Fn(usize) -> usize, open: &dyn Fn(usize) -> usize) -> Result<Self> {
        let id = |l: usize| l;
        Self::new(
            self.u_src.relabel(open, &id),
            self.u_tgt.relabel(open, &id),
            self.x.relabel_closed(closed)?,
            self.mu_src.relabel(closed, open),
            self.mu_tgt.relabel(closed, open),
        )
    }

    pub fn same(&self, o: &Self) -> bool {
        self.u_src == o.u_src && self.u_tgt == o.u_tgt && self.mu_src == o.mu_src && self.mu_tgt == o.mu_tgt && self.x.same(&o.x)
    }

    /// Right-module action: `[u, x ∘_i z, µ ∘_i 1]`.
    pub fn insert_closed(&self, i: usize, z: &M) -> Result<Self> {
        Self::new(
            self.u_src.clone(),
            self.u_tgt.clone(),
            self.x.insert_closed(i, z)?,
            graft(&self.mu_src, Slot::Closed(i), z.src())?,
            graft(&self.mu_tgt, Slot::Closed(i), z.tgt())?,
        )
    }
}

impl<M: Middle> fmt::Display for Triple<M> {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "[{} → {} | {} | {} → {}]", self.u_src, self.u_tgt, self.x, self.mu_src, self.mu_tgt)
    }
}

/// Element of `P[n](m) = P(n + m)`: shifted labels `1..=n`, ordinary labels `n+1..=n+m`.
#[derive(Clone, Debug)]
pub struct Shifted<M> {
    pub shifted: usize,
    pub ordinary: usize,
    pub payload: M,
}

/// Sends terrestrial `y_j` to `x_j`, aerial `x_i` to `x_{n+i}`, `µ_o` to `µ_c` and erases `f`.
pub fn close_bitree(t: &Tree, n: usize) -> Tree {
    fn go(t: &Tree, n: usize) -> Tree {
        match t {
            Tree::Y(j) => Tree::X(*j),
            Tree::X(i) => Tree::X(n + i),
            Tree::UnitO | Tree::UnitC => Tree::UnitC,
            Tree::F(a) => go(a, n),
            Tree::Mc(a, b) | Tree::Mo(a, b) => mc(go(a, n), go(b, n)),
        }
    }
    go(t, n).normalize_units()
}

/// Letters moving every terrestrial point to the left, aerial strands passing over.
fn block_letters(points: &[Point]) -> Vec<i64> {
    let mut terr: Vec<bool> = points.iter().map(|p| matches!(p, Point::T(_))).collect();
    let mut out = Vec::new();
    while let Some(k) = (0..terr.len().saturating_sub(1)).find(|&k| !terr[k] && terr[k + 1]) {
        terr.swap(k, k + 1);
        out.push(k as i64 + 1);
    }
    out
}

/// `m_c(ι(u), x)` for `u` on the terrestrial labels and `x` aerial, in `PaB(n + m)`.
fn concat<M: Middle>(u: &M, xm: &M, degree: usize) -> Result<M> {
    M::identity(&mc(x(1), x(2)), degree)?.insert_closed(2, xm)?.insert_closed(1, u)
}

/// Shuffle-type morphism `σ^µ_{m_c(u, U(µ))}` in `PaB(n + m)`.
pub fn shuffle_to_blocks(mu: &Tree, u: &Tree) -> Result<PaPBMorphism> {
    let n = mu.arity().0;
    let letters = block_letters(omega_map(mu).points());
    let xs = closed_shadow(mu)?.relabel(&|i| i + n, &|j| j);
    let tgt = mc(u.clone(), xs).normalize_units();
    let src = close_bitree(mu, n);
    PaPBMorphism::new(src, tgt, BraidWord::new(mu.arity().0 + mu.arity().1, letters)?)
}

fn iota(e_u_src: &Tree, e_u_tgt: &Tree) -> Result<PaPBMorphism> {
    PaPBMorphism::new(e_u_src.clone(), e_u_tgt.clone(), BraidWord::identity(e_u_src.arity().1))
}

/// `ρ[u, x, µ] = σ ∘ m_c(ι(u), x) ∘ σ`, conjugating the concatenation by shuffle-type braids.
pub fn rho(e: &PrimeMorphism) -> Result<Shifted<PaPBMorphism>> {
    let (n, m) = e.arity();
    let s = shuffle_to_blocks(&e.mu_src, &e.u_src)?;
    let t = shuffle_to_blocks(&e.mu_tgt, &e.u_tgt)?;
    let mid = concat(&iota(&e.u_src, &e.u_tgt)?, &e.x, 0)?;
    Ok(Shifted { shifted: n, ordinary: m, payload: s.then(&mid)?.then(&t.inverse())? })
}

/// `ρ_φ`: the same shape, with shuffles and the permutation part pushed through `φ̃₊`.
pub fn rho_phi(a: &Associator, e: &PaPCDMorphism) -> Result<Shifted<PaCDMorphism>> {
    let (n, m) = e.arity();
    let s = lift_phi_tilde(a, &shuffle_to_blocks(&e.mu_src, &e.u_src)?)?;
    let t = lift_phi_tilde(a, &shuffle_to_blocks(&e.mu_tgt, &e.u_tgt)?)?;
    let u = lift_phi_tilde(a, &iota(&e.u_src, &e.u_tgt)?)?;
    let mid = concat(&u, &e.x, a.degree)?;
    Ok(Shifted { shifted: n, ordinary: m, payload: s.then(&mid)?.then(&t.inverse()?)? })
}

/// Crossings in a `ρ` payload that are not an aerial strand passing over a terrestrial one.
pub fn terrestrial_violations(payload: &PaPBMorphism, n: usize) -> usize {
    let mut strands: Vec<usize> = payload.src.closed_labels();
    let mut bad = 0;
    for &l in payload.braid().letters() {
        let k = l.unsigned_abs() as usize - 1;
        let (a, b) = (strands[k] <= n, strands[k + 1] <= n);
        // σ_k puts position k over k+1
        let ok = match (a, b) {
            (true, true) => false,
            (false, false) => true,
            (false, true) => l > 0,
            (true, false) => l < 0,
        };
        bad += usize::from(!ok);
        strands.swap(k, k + 1);
    }
    bad
}

/// `γ([u,x,µ]; [v_1,y_1,σ_1], …) = [u(v), σ⁻¹·ρ[u,x,µ](y_1, …), µ(σ_1, …)]`, with `ρ` given.
fn gamma<M: Middle>(outer: &Triple<M>, rho: &M, inners: &[Triple<M>]) -> Result<Triple<M>> {
    let (r, s) = outer.arity();
    if inners.len() != r {
        return Err(Error::OutOfRange { index: inners.len(), max: r });
    }
    let (mut u_s, mut u_t) = (outer.u_src.clone(), outer.u_tgt.clone());
    let (mut mu_s, mut mu_t) = (outer.mu_src.clone(), outer.mu_tgt.clone());
    let mut mid = rho.clone();
    let (mut off_t, mut off_c) = (0isize, 0isize);
    let mut total = 0;
    for (j, v) in inners.iter().enumerate() {
        let (k, l) = v.arity();
        let slot_t = (j as isize + 1 + off_t) as usize;
        let slot_c = (j as isize + 1 + off_c) as usize;
        u_s = graft(&u_s, Slot::Closed(slot_t), &v.u_src)?;
        u_t = graft(&u_t, Slot::Closed(slot_t), &v.u_tgt)?;
        mu_s = graft(&mu_s, Slot::Open(slot_t), &v.mu_src)?;
        mu_t = graft(&mu_t, Slot::Open(slot_t), &v.mu_tgt)?;
        mid = mid.insert_closed(slot_c, &v.x)?;
        off_t += k as isize - 1;
        off_c += l as isize - 1;
        total += l;
    }
    // blocks of the inner aerial parts come after the outer ones
    let mid = mid.relabel_closed(&|c| if c <= total { c + s } else { c - total })?;
    Triple::new(u_s, u_t, mid, mu_s, mu_t)
}

pub fn compose_prime(outer: &PrimeMorphism, inners: &[PrimeMorphism]) -> Result<PrimeMorphism> {
    gamma(outer, &rho(outer)?.payload, inners)
}

pub fn compose_papcd(a: &Associator, outer: &PaPCDMorphism, inners: &[PaPCDMorphism]) -> Result<PaPCDMorphism> {
    gamma(outer, &rho_phi(a, outer)?.payload, inners)
}

fn open_insert<M: Middle>(
    outer: &Triple<M>,
    j: usize,
    inner: &Triple<M>,
    degree: usize,
    compose: &dyn Fn(&Triple<M>, &[Triple<M>]) -> Result<Triple<M>>,
) -> Result<Triple<M>> {
    let r = outer.arity().0;
    if j == 0 || j > r {
        return Err(Error::OutOfRange { index: j, max: r });
    }
    let unit = Triple::unit(degree)?;
    let inners: Vec<Triple<M>> = (1..=r).map(|k| if k == j { inner.clone() } else { unit.clone() }).collect();
    compose(outer, &inners)
}

/// `outer ∘_j inner` on open inputs.
pub fn prime_insert_open(outer: &PrimeMorphism, j: usize, inner: &PrimeMorphism) -> Result<PrimeMorphism> {
    open_insert(outer, j, inner, 0, &compose_prime)
}

pub fn papcd_insert_open(a: &Associator, outer: &PaPCDMorphism, j: usize, inner: &PaPCDMorphism) -> Result<PaPCDMorphism> {
    open_insert(outer, j, inner, a.degree, &|o, i| compose_papcd(a, o, i))
}

/// The equivalence onto colored braids: `µ` gives the endpoints, `x` the aerial braid.
pub fn to_copb(e: &PrimeMorphism) -> Result<CoPBMorphism> {
    CoPBMorphism::new(omega_map(&e.mu_src), omega_map(&e.mu_tgt), e.x.braid().clone())
}

/// `x ↦ φ̃₊(x)`, other components unchanged.
pub fn apply_phi(a: &Associator, e: &PrimeMorphism) -> Result<PaPCDMorphism> {
    Triple::new(e.u_src.clone(), e.u_tgt.clone(), lift_phi_tilde(a, &e.x)?, e.mu_src.clone(), e.mu_tgt.clone())
}

/// Random morphism with `n` terrestrial and `m` aerial inputs.
pub fn random_prime(rng: &mut impl Rng, n: usize, m: usize, max_len: usize) -> PrimeMorphism {
    let c = random_morphism(rng, n, m, max_len);
    let mu_s = random_bitree(rng, c.src.points());
    let mu_t = random_bitree(rng, c.tgt.points());
    let order = mu_s.open_labels();
    let u_s = random_closed_tree(rng, &order);
    let u_t = random_closed_tree(rng, &order);
    let xm = PaPBMorphism::new(closed_shadow(&mu_s).unwrap(), closed_shadow(&mu_t).unwrap(), c.braid.clone()).unwrap();
    Triple::new(u_s, u_t, xm, mu_s, mu_t).expect("object condition holds by construction")
}

/// Random morphism out of the target of `e`.
pub fn random_prime_from(rng: &mut impl Rng, e: &PrimeMorphism, max_len: usize) -> PrimeMorphism {
    let c = crate::colored_operads::random_morphism_from(rng, &omega_map(&e.mu_tgt), max_len);
    let mu_t = random_bitree(rng, c.tgt.points());
    let u_t = random_closed_tree(rng, &mu_t.open_labels());
    let xm = PaPBMorphism::new(e.x.tgt.clone(), closed_shadow(&mu_t).unwrap(), c.braid.clone()).unwrap();
    Triple::new(e.u_tgt.clone(), u_t, xm, e.mu_tgt.clone(), mu_t).expect("object condition holds by construction")
}

/// Random element of `PaPCD^φ₊` whose chord part is a random grouplike.
pub fn random_papcd(rng: &mut impl Rng, n: usize, m: usize, degree: usize) -> PaPCDMorphism {
    let e = random_prime(rng, n, m, 2);
    let alpha = PaCDMorphism::new(e.x.src.clone(), e.x.tgt.clone(), random_grouplike(rng, m, degree, 2)).unwrap();
    Triple::new(e.u_src, e.u_tgt, alpha, e.mu_src, e.mu_tgt).unwrap()
}

/// Closed trees with the given leaf order.
pub fn parenthesizations(labels: &[usize]) -> Vec<Tree> {
    match labels.len() {
        0 => vec![Tree::UnitC],
        1 => vec![Tree::X(labels[0])],
        k => (1..k)
            .flat_map(|cut| {
                let (l, r) = (parenthesizations(&labels[..cut]), parenthesizations(&labels[cut..]));
                l.iter().flat_map(|a| r.iter().map(move |b| mc(a.clone(), b.clone()))).collect::<Vec<_>>()
            })
            .collect(),
    }
}

/// Objects `(u, µ)` of arity `(n, m)`, without units.
pub fn prime_objects(n: usize, m: usize) -> Vec<(Tree, Tree)> {
    crate::trees_magma::enumerate(n, m, false)
        .into_iter()
        .flat_map(|mu| parenthesizations(&mu.open_labels()).into_iter().map(move |u| (u, mu.clone())))
        .collect()
}

/// Elements of the two-colored operad: closed inputs take the middle operad itself.
#[derive(Clone, Debug)]
pub enum Mixed<M> {
    Closed(M),
    Open(Triple<M>),
}

impl<M: Middle> fmt::Display for Mixed<M> {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mixed::Closed(m) => write!(fm, "{m}"),
            Mixed::Open(t) => write!(fm, "{t}"),
        }
    }
}

/// `PaPB′₊` as a two-colored operad.
pub struct MixedOperad;

impl PartialOperad for MixedOperad {
    type El = Mixed<PaPBMorphism>;
    fn arity(&self, e: &Self::El) -> (usize, usize) {
        match e {
            Mixed::Closed(m) => (0, m.src.arity().1),
            Mixed::Open(t) => t.arity(),
        }
    }
    fn closed_output(&self, e: &Self::El) -> bool {
        matches!(e, Mixed::Closed(_))
    }
    fn insert(&self, outer: &Self::El, slot: Slot, inner: &Self::El) -> Result<Self::El> {
        match (outer, slot, inner) {
            (Mixed::Closed(a), Slot::Closed(i), Mixed::Closed(b)) => Ok(Mixed::Closed(papb_insert(a, Slot::Closed(i), b)?)),
            (Mixed::Open(a), Slot::Closed(i), Mixed::Closed(b)) => Ok(Mixed::Open(a.insert_closed(i, b)?)),
            (Mixed::Open(a), Slot::Open(j), Mixed::Open(b)) => Ok(Mixed::Open(prime_insert_open(a, j, b)?)),
            _ => Err(Error::ColorMismatch(format!("cannot insert {inner} into {slot:?} of {outer}"))),
        }
    }
    fn relabel(&self, e: &Self::El, closed: &dyn Fn(usize) -> usize, open: &dyn Fn(usize) -> usize) -> Self::El {
        match e {
            Mixed::Closed(m) => Mixed::Closed(m.relabel(closed, &|j| j)),
            Mixed::Open(t) => Mixed::Open(t.relabel(closed, open).expect("relabeling")),
        }
    }
    fn equal(&self, a: &Self::El, b: &Self::El) -> bool {
        match (a, b) {
            (Mixed::Closed(a), Mixed::Closed(b)) => a.equals(b),
            (Mixed::Open(a), Mixed::Open(b)) => a.same(b),
            _ => false,
        }
    }
    fn unit(&self, closed: bool) -> Option<Self::El> {
        Some(if closed {
            Mixed::Closed(PaPBMorphism::identity(&x(1)).ok()?)
        } else {
            Mixed::Open(Triple::unit(0).ok()?)
        })
    }
}

/// `PaPCD^φ₊` as an operad; a separate type since the element type differs.
pub struct PaPCDOperad<'a> {
    pub assoc: &'a Associator,
}

impl PartialOperad for PaPCDOperad<'_> {
    type El = Mixed<PaCDMorphism>;
    fn arity(&self, e: &Self::El) -> (usize, usize) {
        match e {
            Mixed::Closed(m) => (0, m.src.arity().1),
            Mixed::Open(t) => t.arity(),
        }
    }
    fn closed_output(&self, e: &Self::El) -> bool {
        matches!(e, Mixed::Closed(_))
    }
    fn insert(&self, outer: &Self::El, slot: Slot, inner: &Self::El) -> Result<Self::El> {
        match (outer, slot, inner) {
            (Mixed::Closed(a), Slot::Closed(i), Mixed::Closed(b)) => Ok(Mixed::Closed(a.insert(i, b)?)),
            (Mixed::Open(a), Slot::Closed(i), Mixed::Closed(b)) => Ok(Mixed::Open(a.insert_closed(i, b)?)),
            (Mixed::Open(a), Slot::Open(j), Mixed::Open(b)) => Ok(Mixed::Open(papcd_insert_open(self.assoc, a, j, b)?)),
            _ => Err(Error::ColorMismatch(format!("cannot insert {inner} into {slot:?} of {outer}"))),
        }
    }
    fn relabel(&self, e: &Self::El, closed: &dyn Fn(usize) -> usize, open: &dyn Fn(usize) -> usize) -> Self::El {
        match e {
            Mixed::Closed(m) => Mixed::Closed(m.relabel(closed).expect("relabeling")),
            Mixed::Open(t) => Mixed::Open(t.relabel(closed, open).expect("relabeling")),
        }
    }
    fn equal(&self, a: &Self::El, b: &Self::El) -> bool {
        match (a, b) {
            (Mixed::Closed(a), Mixed::Closed(b)) => a == b,
            (Mixed::Open(a), Mixed::Open(b)) => a.same(b),
            _ => false,
        }
    }
    fn unit(&self, closed: bool) -> Option<Self::El> {
        let d = self.assoc.degree;
        Some(if closed {
            Mixed::Closed(PaCDMorphism::identity(&x(1), d).ok()?)
        } else {
            Mixed::Open(Triple::unit(d).ok()?)
        })
    }
}

pub fn prime_to_json(e: &PrimeMorphism) -> Value {
    json!({
        "u": [e.u_src.to_string(), e.u_tgt.to_string()],
        "x": {"src": e.x.src.to_string(), "tgt": e.x.tgt.to_string(), "braid": e.x.braid().letters()},
        "mu": [e.mu_src.to_string(), e.mu_tgt.to_string()],
    })
}

pub fn prime_from_json(v: &Value) -> Result<PrimeMorphism> {
    let bad = || Error::Parse(format!("not a triple: {v}"));
    let tree = |p: &Value| -> Result<Tree> { Tree::parse(p.as_str().ok_or_else(bad)?) };
    let pair = |k: &str| -> Result<(Tree, Tree)> {
        let a = v.get(k).and_then(|p| p.as_array()).filter(|a| a.len() == 2).ok_or_else(bad)?;
        Ok((tree(&a[0])?, tree(&a[1])?))
    };
    let (u_s, u_t) = pair("u")?;
    let (mu_s, mu_t) = pair("mu")?;
    let xv = v.get("x").ok_or_else(bad)?;
    let (xs, xt) = (tree(xv.get("src").ok_or_else(bad)?)?, tree(xv.get("tgt").ok_or_else(bad)?)?);
    let letters: Vec<i64> = serde_json::from_value(xv.get("braid").cloned().ok_or_else(bad)?).map_err(|_| bad())?;
    let braid = BraidWord::new(xs.arity().1, letters)?;
    Triple::new(u_s, u_t, PaPBMorphism::new(xs, xt, braid)?, mu_s, mu_t)
}

pub fn papcd_to_json(e: &PaPCDMorphism) -> Value {
    json!({
        "u": [e.u_src.to_string(), e.u_tgt.to_string()],
        "x": {"src": e.x.src.to_string(), "tgt": e.x.tgt.to_string(), "series": e.x.element.to_json()},
        "mu": [e.mu_src.to_string(), e.mu_tgt.to_string()],
    })
}

/// Random element of the two-colored operad, closed with probability `p_closed`.
pub fn random_mixed(rng: &mut impl Rng, max_points: usize, max_len: usize, p_closed: f64) -> Mixed<PaPBMorphism> {
    if rng.gen_bool(p_closed) {
        let m = rng.gen_range(0..=max_points.min(3));
        Mixed::Closed(random_papb(rng, 0, m, max_len, true))
    } else {
        let total = rng.gen_range(1..=max_points);
        let n = rng.gen_range(0..=total);
        Mixed::Open(random_prime(rng, n, total - n, max_len))
    }
}

pub fn random_mixed_cd(rng: &mut impl Rng, max_points: usize, degree: usize, p_closed: f64) -> Mixed<PaCDMorphism> {
    if rng.gen_bool(p_closed) {
        let m = rng.gen_range(0..=max_points.min(3));
        let b = random_papb(rng, 0, m, 2, true);
        Mixed::Closed(PaCDMorphism::new(b.src, b.tgt, random_grouplike(rng, m, degree, 2)).unwrap())
    } else {
        let total = rng.gen_range(1..=max_points);
        let n = rng.gen_range(0..=total);
        Mixed::Open(random_papcd(rng, n, total - n, degree))
    }
}

/// Randomized operad axioms for either mixed model; `sample(rng, closed)` draws an element of
/// the requested output color.
pub fn mixed_suite<O, R>(op: &O, rng: &mut R, instances: usize, sample: &dyn Fn(&mut R, bool) -> O::El) -> SuiteReport
where
    O: PartialOperad,
    O::El: fmt::Display,
    R: Rng,
{
    use crate::operad_axioms::{equivariance, parallel, sequential, unitality};
    use crate::trees_magma::random_labels;
    let mut rep = SuiteReport::new("mixed operad axioms");
    let pick = |rng: &mut R, e: &O::El| -> Option<Slot> {
        let (n, m) = op.arity(e);
        if n + m == 0 {
            return None;
        }
        let k = rng.gen_range(0..n + m);
        Some(if k < n { Slot::Open(k + 1) } else { Slot::Closed(k - n + 1) })
    };
    for _ in 0..instances {
        let a = sample(rng, false);
        rep.record(unitality(op, &a).unwrap_or(false), || format!("unit {a}"));
        let Some(s) = pick(rng, &a) else { continue };
        let b = sample(rng, matches!(s, Slot::Closed(_)));
        if let Some(t) = pick(rng, &b) {
            let c = sample(rng, matches!(t, Slot::Closed(_)));
            rep.record(sequential(op, &a, s, &b, t, &c).unwrap_or(false), || format!("seq {a} {s:?} {b} {t:?} {c}"));
        }
        let (n, m) = op.arity(&a);
        let others: Vec<Slot> = (1..=n).map(Slot::Open).chain((1..=m).map(Slot::Closed)).filter(|&x| x != s).collect();
        if !others.is_empty() {
            let s2 = others[rng.gen_range(0..others.len())];
            let c = sample(rng, matches!(s2, Slot::Closed(_)));
            rep.record(parallel(op, &a, s, &b, s2, &c).unwrap_or(false), || format!("par {a} {s:?} {b} {s2:?} {c}"));
        }
        let (bn, bm) = op.arity(&b);
        let (sc, so) = (random_labels(rng, m), random_labels(rng, n));
        let (tc, to) = (random_labels(rng, bm), random_labels(rng, bn));
        rep.record(equivariance(op, &a, s, &b, (&sc, &so), (&tc, &to)).unwrap_or(false), || format!("equiv {a} {s:?} {b}"));
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::associator::solve_associator;
    use crate::braid_engine::braids_equal;
    use crate::chord_diagrams::DKElement;
    use crate::colored_operads::{copb_insert, objects};
    use crate::exact_algebra::int;
    use crate::trees_magma::{f, mo};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeMap;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(11)
    }

    fn copb_of(z: &PaPBMorphism) -> CoPBMorphism {
        CoPBMorphism::new(omega_map(&z.src), omega_map(&z.tgt), z.braid().clone()).unwrap()
    }

    fn random_inners(rng: &mut ChaCha8Rng, r: usize) -> Vec<PrimeMorphism> {
        (0..r)
            .map(|_| {
                let n = rng.gen_range(0..=2);
                let m = rng.gen_range(usize::from(n == 0)..=2 - n.min(1));
                random_prime(rng, n, m, 2)
            })
            .collect()
    }

    #[test]
    fn rho_examples() {
        let id = PrimeMorphism::unit(0).unwrap();
        let r = rho(&id).unwrap();
        assert_eq!((r.shifted, r.ordinary), (1, 0));
        assert!(r.payload.equals(&PaPBMorphism::identity(&x(1)).unwrap()));

        let mut g = rng();
        for _ in 0..20 {
            let k0 = g.gen_range(1..=3);
            let e = random_prime(&mut g, 0, k0, 4);
            assert!(rho(&e).unwrap().payload.equals(&e.x));
        }
        // two terrestrial, one aerial between them
        let mu = mo(mo(y(1), f(x(1))), y(2));
        let u = mc(x(1), x(2));
        let s = shuffle_to_blocks(&mu, &u).unwrap();
        assert_eq!(s.src, mc(mc(x(1), x(3)), x(2)));
        assert_eq!(s.tgt, mc(mc(x(1), x(2)), x(3)));
        assert_eq!(s.braid().letters(), &[2]);
    }

    #[test]
    fn terrestrial_strands_never_cross() {
        let mut g = rng();
        for _ in 0..100 {
            let n = g.gen_range(0..=3);
            let m = g.gen_range(0..=4 - n);
            let e = random_prime(&mut g, n, m, 5);
            let r = rho(&e).unwrap();
            assert_eq!(terrestrial_violations(&r.payload, n), 0, "{e}");
        }
    }

    #[test]
    fn rho_separates_parallel_morphisms() {
        let mut g = rng();
        for _ in 0..50 {
            let k0 = g.gen_range(0..=2);
            let k1 = g.gen_range(2..=3);
            let e = random_prime(&mut g, k0, k1, 3);
            let m = e.x.tgt.arity().1;
            let letters: Vec<i64> = (0..g.gen_range(1..=3))
                .flat_map(|_| {
                    let k = g.gen_range(1..m as i64);
                    let s = if g.gen_bool(0.5) { 1 } else { -1 };
                    [s * k, s * k]
                })
                .collect();
            let pure = BraidWord::new(m, letters).unwrap();
            let lp = PaPBMorphism::new(e.x.tgt.clone(), e.x.tgt.clone(), pure.clone()).unwrap();
            let e2 = e
                .then(&Triple::new(e.u_tgt.clone(), e.u_tgt.clone(), lp, e.mu_tgt.clone(), e.mu_tgt.clone()).unwrap())
                .unwrap();
            let (a, b) = (rho(&e).unwrap().payload, rho(&e2).unwrap().payload);
            assert_eq!(a.equals(&b), braids_equal(&pure, &BraidWord::identity(m)).unwrap());
        }
    }

    #[test]
    fn identities_and_full_composition() {
        let mut g = rng();
        let unit = PrimeMorphism::unit(0).unwrap();
        for _ in 0..40 {
            let n = g.gen_range(1..=3);
            let k0 = g.gen_range(0..=2);
            let e = random_prime(&mut g, n, k0, 3);
            assert!(compose_prime(&e, &vec![unit.clone(); n]).unwrap().same(&e));
            assert!(compose_prime(&unit, &[e.clone()]).unwrap().same(&e));

            let inners = random_inners(&mut g, n);
            let full = compose_prime(&e, &inners).unwrap();
            // iterated insertions in increasing slot order reproduce the label order of γ
            let mut it = e.clone();
            let mut slot = 1;
            for v in &inners {
                it = prime_insert_open(&it, slot, v).unwrap();
                slot += v.arity().0;
            }
            assert!(full.same(&it), "{full}\n{it}");
        }
    }

    #[test]
    fn prime_operad_axioms() {
        let mut g = rng();
        let rep = mixed_suite(&MixedOperad, &mut g, 150, &|r, closed| random_mixed(r, 3, 2, if closed { 1.0 } else { 0.0 }));
        assert!(rep.passed() && rep.checked > 450, "{rep}");
    }

    #[test]
    fn equivalence_to_colored_braids() {
        let mut g = rng();
        for _ in 0..100 {
            let n = g.gen_range(0..=2);
            let k0 = g.gen_range(0..=3 - n);
            let e = random_prime(&mut g, n, k0, 3);
            let e2 = random_prime_from(&mut g, &e, 3);
            let lhs = to_copb(&e.then(&e2).unwrap()).unwrap();
            assert!(lhs.equals(&to_copb(&e).unwrap().then(&to_copb(&e2).unwrap()).unwrap()));

            let (en, em) = e.arity();
            if en > 0 {
                let j = g.gen_range(1..=en);
                let v = random_inners(&mut g, 1).pop().unwrap();
                let lhs = to_copb(&prime_insert_open(&e, j, &v).unwrap()).unwrap();
                let rhs = copb_insert(&to_copb(&e).unwrap(), Slot::Open(j), &to_copb(&v).unwrap()).unwrap();
                assert!(lhs.equals(&rhs), "{e} ∘{j} {v}");
            }
            if em > 0 {
                let i = g.gen_range(1..=em);
                let k0 = g.gen_range(0..=2);
                let z = random_papb(&mut g, 0, k0, 2, true);
                let lhs = to_copb(&e.insert_closed(i, &z).unwrap()).unwrap();
                let rhs = copb_insert(&to_copb(&e).unwrap(), Slot::Closed(i), &copb_of(&z)).unwrap();
                assert!(lhs.equals(&rhs));
            }
        }
        let id = PrimeMorphism::unit(0).unwrap();
        assert!(to_copb(&id).unwrap().equals(&CoPBMorphism::identity(&omega_map(&y(1)))));
    }

    fn catalan(k: usize) -> usize {
        (0..k).fold(1, |c, i| c * 2 * (2 * i + 1) / (i + 2))
    }

    fn bitree_count(p: &[bool]) -> usize {
        // p[k] = terrestrial
        if p.len() == 1 {
            return 1;
        }
        let split: usize = (1..p.len()).map(|c| bitree_count(&p[..c]) * bitree_count(&p[c..])).sum();
        split + if p.iter().all(|t| !t) { catalan(p.len() - 1) } else { 0 }
    }

    #[test]
    fn object_fibers_over_colored_braids() {
        for n in 0..=4usize {
            for m in 0..=4 - n {
                if n + m == 0 {
                    continue;
                }
                let mut fibers: BTreeMap<String, usize> = BTreeMap::new();
                for (_, mu) in prime_objects(n, m) {
                    *fibers.entry(format!("{:?}", omega_map(&mu))).or_default() += 1;
                }
                let objs = objects(n, m);
                assert_eq!(fibers.len(), objs.len(), "({n}, {m})");
                for o in objs {
                    let pat: Vec<bool> = o.points().iter().map(|p| matches!(p, Point::T(_))).collect();
                    let expect = catalan(n.saturating_sub(1)) * bitree_count(&pat);
                    assert_eq!(fibers[&format!("{o:?}")], expect, "{o:?}");
                }
            }
        }
    }

    #[test]
    fn rho_phi_examples() {
        let a = solve_associator(&int(1), 2).unwrap();
        let id = PaPCDMorphism::unit(2).unwrap();
        assert!(rho_phi(&a, &id).unwrap().payload.element == DKElement::one(1, 2));

        let mut g = rng();
        for _ in 0..10 {
            let k0 = g.gen_range(1..=3);
            let e = random_papcd(&mut g, 0, k0, 2);
            assert_eq!(rho_phi(&a, &e).unwrap().payload, e.x);
        }
        let flat = Associator::trivial(int(0), 2);
        for _ in 0..10 {
            let k0 = g.gen_range(0..=2);
            let k1 = g.gen_range(0..=2);
            let e = apply_phi(&flat, &random_prime(&mut g, k0, k1, 3)).unwrap();
            let r = rho_phi(&flat, &e).unwrap();
            assert_eq!(r.payload.element, DKElement::one(r.shifted + r.ordinary, 2));
        }
    }

    #[test]
    fn apply_phi_is_an_operad_map() {
        let a = solve_associator(&int(1), 2).unwrap();
        let mut g = rng();
        for _ in 0..20 {
            let n = g.gen_range(1..=2);
            let k0 = g.gen_range(0..=2);
            let e = random_prime(&mut g, n, k0, 2);
            let inners = random_inners(&mut g, n);
            let lhs = apply_phi(&a, &compose_prime(&e, &inners).unwrap()).unwrap();
            let mapped: Vec<_> = inners.iter().map(|v| apply_phi(&a, v).unwrap()).collect();
            let rhs = compose_papcd(&a, &apply_phi(&a, &e).unwrap(), &mapped).unwrap();
            assert!(lhs.same(&rhs), "{lhs}\n{rhs}");
            let e2 = random_prime_from(&mut g, &e, 2);
            let lhs = apply_phi(&a, &e.then(&e2).unwrap()).unwrap();
            assert!(lhs.same(&apply_phi(&a, &e).unwrap().then(&apply_phi(&a, &e2).unwrap()).unwrap()));
        }
        let id = PrimeMorphism::unit(0).unwrap();
        assert!(apply_phi(&a, &id).unwrap().same(&PaPCDMorphism::unit(2).unwrap()));
    }

    #[test]
    fn papcd_operad_axioms() {
        let a = solve_associator(&int(1), 2).unwrap();
        let mut g = rng();
        let op = PaPCDOperad { assoc: &a };
        let rep = mixed_suite(&op, &mut g, 60, &|r, closed| random_mixed_cd(r, 3, 2, if closed { 1.0 } else { 0.0 }));
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn json_round_trip() {
        let mut g = rng();
        for _ in 0..20 {
            let e = random_prime(&mut g, 2, 2, 4);
            assert!(prime_from_json(&prime_to_json(&e)).unwrap().same(&e));
        }
    }
}
