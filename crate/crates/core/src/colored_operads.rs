//! Colored braids and colored permutation-braids stored in normal form
//! `(source, target, aerial braid)`, with both operadic insertions, unit restrictions
//! and the ζ decomposition.
//!
//! Aerial strands pass over everything that sits inside a terrestrial corridor: an aerial strand
//! moving right across an inflated corridor crosses its aerial contents positively.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::braid_engine::{braids_equal, cable, underlying_permutation, BraidWord, Permutation};
use crate::error::{Error, Result};
use crate::operad_axioms::{equivariance, parallel, sequential, unitality, PartialOperad};
use crate::report::SuiteReport;
use crate::trees_magma::{random_labels, Point, ShuffleObject, Slot};

/// Morphism of colored braids: aerial label orders at both ends and a braid.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoBMorphism {
    pub source: Permutation,
    pub target: Permutation,
    pub braid: BraidWord,
}

impl CoBMorphism {
    pub fn new(source: Permutation, target: Permutation, braid: BraidWord) -> Result<Self> {
        let m = CoBMorphism { source, target, braid };
        m.as_copb()?;
        Ok(m)
    }

    /// The morphism determined by a source order and a braid.
    pub fn from_braid(source: Permutation, braid: BraidWord) -> Result<Self> {
        let perm = underlying_permutation(&braid);
        let mut target = vec![0; source.len()];
        for (p, &l) in source.images().iter().enumerate() {
            target[perm.apply(p + 1) - 1] = l;
        }
        Self::new(source, Permutation::new(target)?, braid)
    }

    pub fn identity(order: Permutation) -> Self {
        let m = order.len();
        CoBMorphism { source: order.clone(), target: order, braid: BraidWord::identity(m) }
    }

    pub fn arity(&self) -> usize {
        self.source.len()
    }

    pub fn as_copb(&self) -> Result<CoPBMorphism> {
        let obj = |p: &Permutation| ShuffleObject::from_parts(&"A".repeat(p.len()), &[], p.images());
        CoPBMorphism::new(obj(&self.source)?, obj(&self.target)?, self.braid.clone())
    }

    pub fn from_copb(m: &CoPBMorphism) -> Result<Self> {
        if m.arity().0 != 0 {
            return Err(Error::ColorMismatch("colored braid with terrestrial points".into()));
        }
        Self::new(
            Permutation::new(m.src.aerial_labels())?,
            Permutation::new(m.tgt.aerial_labels())?,
            m.braid.clone(),
        )
    }
}

/// Morphism of colored permutation-braids in normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoPBMorphism {
    pub src: ShuffleObject,
    pub tgt: ShuffleObject,
    pub braid: BraidWord,
}

impl fmt::Display for CoPBMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} --({})--> {}", self.src, self.braid, self.tgt)
    }
}

impl CoPBMorphism {
    pub fn new(src: ShuffleObject, tgt: ShuffleObject, braid: BraidWord) -> Result<Self> {
        if src.arity() != tgt.arity() {
            return Err(Error::ObjectMismatch(format!("arity of {src} vs {tgt}")));
        }
        if src.terrestrial_labels() != tgt.terrestrial_labels() {
            return Err(Error::IllFormed(format!("terrestrial orders differ: {src} vs {tgt}")));
        }
        let (sa, ta) = (src.aerial_labels(), tgt.aerial_labels());
        if braid.strands() != sa.len() {
            return Err(Error::StrandMismatch(braid.strands(), sa.len()));
        }
        let perm = underlying_permutation(&braid);
        if (0..sa.len()).any(|p| ta[perm.apply(p + 1) - 1] != sa[p]) {
            return Err(Error::IllFormed(format!("braid {braid} does not carry {src} to {tgt}")));
        }
        Ok(CoPBMorphism { src, tgt, braid })
    }

    /// The morphism from `src` along `braid`, with target pattern `pattern`.
    pub fn from_braid(src: ShuffleObject, pattern: &str, braid: BraidWord) -> Result<Self> {
        let perm = underlying_permutation(&braid);
        let sa = src.aerial_labels();
        let mut ta = vec![0; sa.len()];
        for (p, &l) in sa.iter().enumerate() {
            ta[perm.apply(p + 1) - 1] = l;
        }
        let tgt = ShuffleObject::from_parts(pattern, &src.terrestrial_labels(), &ta)?;
        Self::new(src, tgt, braid)
    }

    pub fn identity(obj: &ShuffleObject) -> Self {
        CoPBMorphism { src: obj.clone(), tgt: obj.clone(), braid: BraidWord::identity(obj.arity().1) }
    }

    pub fn arity(&self) -> (usize, usize) {
        self.src.arity()
    }

    pub fn inverse(&self) -> Self {
        CoPBMorphism { src: self.tgt.clone(), tgt: self.src.clone(), braid: self.braid.inverse() }
    }

    /// `self` first, then `next`.
    pub fn then(&self, next: &CoPBMorphism) -> Result<Self> {
        copb_compose(next, self)
    }

    /// Equality of morphisms: same endpoints and equal braids.
    pub fn equals(&self, other: &CoPBMorphism) -> bool {
        self.src == other.src
            && self.tgt == other.tgt
            && braids_equal(&self.braid, &other.braid).unwrap_or(false)
    }

    /// Right action of relabelings on both endpoints.
    pub fn relabel(&self, closed: &dyn Fn(usize) -> usize, open: &dyn Fn(usize) -> usize) -> Self {
        CoPBMorphism {
            src: self.src.relabel(closed, open),
            tgt: self.tgt.relabel(closed, open),
            braid: self.braid.clone(),
        }
    }
}

/// `g ∘ f`: first `f`, then `g`.
pub fn copb_compose(g: &CoPBMorphism, f: &CoPBMorphism) -> Result<CoPBMorphism> {
    if f.tgt != g.src {
        return Err(Error::ObjectMismatch(format!("{} vs {}", f.tgt, g.src)));
    }
    Ok(CoPBMorphism { src: f.src.clone(), tgt: g.tgt.clone(), braid: f.braid.concat(&g.braid)? })
}

/// Cables the strand carrying aerial label `i` and splices `inner` at the top of the cable.
pub fn copb_insert_closed(outer: &CoPBMorphism, i: usize, inner: &CoBMorphism) -> Result<CoPBMorphism> {
    let m = outer.arity().1;
    let pos = outer
        .src
        .aerial_position(i)
        .ok_or(Error::OutOfRange { index: i, max: m })?;
    let k = inner.arity();
    let inner_obj = inner.as_copb()?;
    let strands = m + k - 1;
    let braid = inner.braid.shifted(pos - 1, strands).concat(&cable(&outer.braid, pos, k)?)?;
    CoPBMorphism::new(
        outer.src.insert(Slot::Closed(i), &inner_obj.src)?,
        outer.tgt.insert(Slot::Closed(i), &inner_obj.tgt)?,
        braid,
    )
}

/// Crossings produced while every terrestrial point of `obj` slides to the left, when the
/// corridor of terrestrial label `j` holds `width` aerial strands.
fn corridor_crossings(obj: &ShuffleObject, j: usize, width: usize) -> Vec<i64> {
    let mut toks: Vec<Point> = obj.points().to_vec();
    let mut letters = Vec::new();
    let mut q = 0;
    while q < toks.len() {
        if let Point::T(l) = toks[q] {
            let mut at = q;
            while at > 0 && matches!(toks[at - 1], Point::A(_)) {
                if l == j {
                    let k = toks[..at - 1].iter().filter(|p| matches!(p, Point::A(_))).count() as i64 + 1;
                    letters.extend((0..width as i64).map(|t| k + t));
                }
                toks.swap(at - 1, at);
                at -= 1;
            }
        }
        q += 1;
    }
    letters
}

/// Replaces terrestrial slot `j` by the whole configuration of `inner`.
pub fn copb_insert_open(outer: &CoPBMorphism, j: usize, inner: &CoPBMorphism) -> Result<CoPBMorphism> {
    let (n, m) = outer.arity();
    if j == 0 || j > n {
        return Err(Error::OutOfRange { index: j, max: n });
    }
    let w = inner.arity().1;
    let strands = m + w;
    let before = |obj: &ShuffleObject| {
        let q = obj.points().iter().position(|p| *p == Point::T(j)).unwrap();
        obj.points()[..q].iter().filter(|p| matches!(p, Point::A(_))).count()
    };
    let down = BraidWord::new(strands, corridor_crossings(&outer.src, j, w))?;
    let up = BraidWord::new(strands, corridor_crossings(&outer.tgt, j, w))?.inverse();
    let braid = inner
        .braid
        .shifted(before(&outer.src), strands)
        .concat(&down)?
        .concat(&outer.braid.shifted(w, strands))?
        .concat(&up)?;
    CoPBMorphism::new(
        outer.src.insert(Slot::Open(j), &inner.src)?,
        outer.tgt.insert(Slot::Open(j), &inner.tgt)?,
        braid,
    )
}

/// Either insertion, dispatched on the slot color.
pub fn copb_insert(outer: &CoPBMorphism, slot: Slot, inner: &CoPBMorphism) -> Result<CoPBMorphism> {
    match slot {
        Slot::Closed(i) => copb_insert_closed(outer, i, &CoBMorphism::from_copb(inner)?),
        Slot::Open(j) => copb_insert_open(outer, j, inner),
    }
}

/// Composition with a nullary unit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnitSlot {
    /// `*_c` at an aerial label: forgets that aerial strand.
    Closed(usize),
    /// `*_o` at a terrestrial label: forgets that terrestrial point.
    Open(usize),
}

pub fn restrict_unit(m: &CoPBMorphism, which: UnitSlot) -> Result<CoPBMorphism> {
    match which {
        UnitSlot::Closed(i) => copb_insert_closed(m, i, &CoBMorphism::identity(Permutation::identity(0))),
        UnitSlot::Open(j) => copb_insert_open(m, j, &CoPBMorphism::identity(&ShuffleObject::new(vec![])?)),
    }
}

/// Morphism of `Sh`: exists iff both label orders agree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ShuffleMorphism {
    pub src: ShuffleObject,
    pub tgt: ShuffleObject,
}

impl ShuffleMorphism {
    pub fn new(src: ShuffleObject, tgt: ShuffleObject) -> Option<Self> {
        let ok = src.terrestrial_labels() == tgt.terrestrial_labels() && src.aerial_labels() == tgt.aerial_labels();
        ok.then_some(ShuffleMorphism { src, tgt })
    }
}

/// The unique morphism whose aerial strands do not cross, when label orders agree.
pub fn shuffle_type_morphism(x: &ShuffleObject, y: &ShuffleObject) -> Option<CoPBMorphism> {
    ShuffleMorphism::new(x.clone(), y.clone())?;
    Some(CoPBMorphism { src: x.clone(), tgt: y.clone(), braid: BraidWord::identity(x.arity().1) })
}

/// Representative of `(CoP(n) × CoB(m)) ×_{Σn×Σm} Sh(n,m)` with labels folded into the shuffle.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ZetaTriple {
    /// Terrestrial label order (a discrete, identity morphism).
    pub terrestrial: Permutation,
    pub aerial: CoBMorphism,
    pub shuffle: ShuffleMorphism,
}

pub fn zeta(t: &ZetaTriple) -> Result<CoPBMorphism> {
    let s = &t.shuffle;
    if s.src.terrestrial_labels() != t.terrestrial.images() || s.src.aerial_labels() != t.aerial.source.images() {
        return Err(Error::ObjectMismatch("labels of the shuffle disagree with the braid data".into()));
    }
    let tgt = ShuffleObject::from_parts(&s.tgt.pattern(), t.terrestrial.images(), t.aerial.target.images())?;
    CoPBMorphism::new(s.src.clone(), tgt, t.aerial.braid.clone())
}

pub fn zeta_inverse(m: &CoPBMorphism) -> Result<ZetaTriple> {
    let terrestrial = Permutation::new(m.src.terrestrial_labels())?;
    let aerial = CoBMorphism::new(
        Permutation::new(m.src.aerial_labels())?,
        Permutation::new(m.tgt.aerial_labels())?,
        m.braid.clone(),
    )?;
    let tgt = ShuffleObject::from_parts(&m.tgt.pattern(), terrestrial.images(), aerial.source.images())?;
    let shuffle = ShuffleMorphism::new(m.src.clone(), tgt).expect("labels agree by construction");
    Ok(ZetaTriple { terrestrial, aerial, shuffle })
}

/// Groupoid composition carried out on triples: `t1` first, then `t2`.
pub fn compose_triples(t2: &ZetaTriple, t1: &ZetaTriple) -> Result<ZetaTriple> {
    if t1.terrestrial != t2.terrestrial || t1.aerial.target != t2.aerial.source || t1.shuffle.tgt.pattern() != t2.shuffle.src.pattern() {
        return Err(Error::ObjectMismatch("triples are not composable".into()));
    }
    let aerial = CoBMorphism::new(t1.aerial.source.clone(), t2.aerial.target.clone(), t1.aerial.braid.concat(&t2.aerial.braid)?)?;
    let tgt = ShuffleObject::from_parts(&t2.shuffle.tgt.pattern(), t1.terrestrial.images(), t1.aerial.source.images())?;
    Ok(ZetaTriple {
        terrestrial: t1.terrestrial.clone(),
        aerial,
        shuffle: ShuffleMorphism::new(t1.shuffle.src.clone(), tgt).expect("labels agree"),
    })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..=p.len() {
            let mut q = p.clone();
            q.insert(k, n);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// All interleaving patterns with `n` terrestrial and `m` aerial slots.
pub fn shuffle_patterns(n: usize, m: usize) -> Vec<String> {
    if n == 0 || m == 0 {
        return vec!["T".repeat(n) + &"A".repeat(m)];
    }
    let mut out: Vec<String> = shuffle_patterns(n - 1, m).into_iter().map(|s| format!("T{s}")).collect();
    out.extend(shuffle_patterns(n, m - 1).into_iter().map(|s| format!("A{s}")));
    out
}

/// All objects of arity `(n, m)`.
pub fn objects(n: usize, m: usize) -> Vec<ShuffleObject> {
    let mut out = Vec::new();
    for pat in shuffle_patterns(n, m) {
        for t in permutations(n) {
            for a in permutations(m) {
                out.push(ShuffleObject::from_parts(&pat, &t, &a).expect("valid parts"));
            }
        }
    }
    out
}

pub fn random_object(rng: &mut impl Rng, n: usize, m: usize) -> ShuffleObject {
    let pats = shuffle_patterns(n, m);
    let pat = &pats[rng.gen_range(0..pats.len())];
    ShuffleObject::from_parts(pat, &random_labels(rng, n), &random_labels(rng, m)).expect("valid parts")
}

pub fn random_braid(rng: &mut impl Rng, strands: usize, max_len: usize) -> BraidWord {
    if strands < 2 {
        return BraidWord::identity(strands);
    }
    let len = rng.gen_range(0..=max_len);
    let letters = (0..len)
        .map(|_| {
            let i = rng.gen_range(1..strands) as i64;
            if rng.gen_bool(0.5) {
                i
            } else {
                -i
            }
        })
        .collect();
    BraidWord::new(strands, letters).expect("letters in range")
}

/// Random morphism with a given source.
pub fn random_morphism_from(rng: &mut impl Rng, src: &ShuffleObject, max_len: usize) -> CoPBMorphism {
    let (n, m) = src.arity();
    let pats = shuffle_patterns(n, m);
    let pat = &pats[rng.gen_range(0..pats.len())];
    CoPBMorphism::from_braid(src.clone(), pat, random_braid(rng, m, max_len)).expect("consistent")
}

pub fn random_morphism(rng: &mut impl Rng, n: usize, m: usize, max_len: usize) -> CoPBMorphism {
    let src = random_object(rng, n, m);
    random_morphism_from(rng, &src, max_len)
}

/// CoPB₊ as a two-colored operad; the flag marks closed-output elements.
pub struct CoPBOperad;

impl PartialOperad for CoPBOperad {
    type El = (bool, CoPBMorphism);

    fn arity(&self, e: &Self::El) -> (usize, usize) {
        e.1.arity()
    }
    fn closed_output(&self, e: &Self::El) -> bool {
        e.0
    }
    fn insert(&self, outer: &Self::El, slot: Slot, inner: &Self::El) -> Result<Self::El> {
        if inner.0 != matches!(slot, Slot::Closed(_)) {
            return Err(Error::ColorMismatch(format!("{slot:?}")));
        }
        Ok((outer.0, copb_insert(&outer.1, slot, &inner.1)?))
    }
    fn relabel(&self, e: &Self::El, closed: &dyn Fn(usize) -> usize, open: &dyn Fn(usize) -> usize) -> Self::El {
        (e.0, e.1.relabel(closed, open))
    }
    fn equal(&self, a: &Self::El, b: &Self::El) -> bool {
        a.0 == b.0 && a.1.equals(&b.1)
    }
    fn unit(&self, closed: bool) -> Option<Self::El> {
        let p = if closed { Point::A(1) } else { Point::T(1) };
        Some((closed, CoPBMorphism::identity(&ShuffleObject::new(vec![p]).unwrap())))
    }
}

fn random_element(rng: &mut impl Rng, closed: bool, max_total: usize, max_len: usize) -> (bool, CoPBMorphism) {
    let total = rng.gen_range(0..=max_total);
    let n = if closed { 0 } else { rng.gen_range(0..=total) };
    (closed, random_morphism(rng, n, total - n, max_len))
}

/// Random element with at least one input.
fn random_outer(rng: &mut impl Rng, max_len: usize) -> (bool, CoPBMorphism) {
    let closed = rng.gen_bool(0.3);
    let total = rng.gen_range(1..=3);
    let n = if closed { 0 } else { rng.gen_range(0..=total) };
    (closed, random_morphism(rng, n, total - n, max_len))
}

/// Randomized operad-axiom suite: unitality, both associativities, equivariance,
/// compatibility of insertion with composition, and unit restriction after insertion.
pub fn axiom_suite(rng: &mut impl Rng, instances: usize, max_len: usize) -> SuiteReport {
    let op = CoPBOperad;
    let mut rep = SuiteReport::new("CoPB operad axioms");
    for _ in 0..instances {
        let a = random_outer(rng, max_len);
        let (n, m) = a.1.arity();
        let closed_slot = m > 0 && (n == 0 || rng.gen_bool(0.5));
        let s = if closed_slot { Slot::Closed(rng.gen_range(1..=m)) } else { Slot::Open(rng.gen_range(1..=n)) };
        let b = random_element(rng, closed_slot, 2, max_len);
        let (bn, bm) = b.1.arity();

        rep.record(unitality(&op, &a).unwrap_or(false), || format!("unit {}", a.1));

        if bn + bm > 0 {
            let t_closed = bm > 0 && (bn == 0 || rng.gen_bool(0.5));
            let t = if t_closed { Slot::Closed(rng.gen_range(1..=bm)) } else { Slot::Open(rng.gen_range(1..=bn)) };
            let c = random_element(rng, t_closed, 2, max_len);
            rep.record(sequential(&op, &a, s, &b, t, &c).unwrap_or(false), || format!("seq {} {s:?} {} {t:?} {}", a.1, b.1, c.1));
        }

        let others: Vec<Slot> = (1..=n).map(Slot::Open).chain((1..=m).map(Slot::Closed)).filter(|&x| x != s).collect();
        if !others.is_empty() {
            let s2 = others[rng.gen_range(0..others.len())];
            let c = random_element(rng, matches!(s2, Slot::Closed(_)), 2, max_len);
            rep.record(parallel(&op, &a, s, &b, s2, &c).unwrap_or(false), || format!("par {} {s:?} {} {s2:?} {}", a.1, b.1, c.1));
        }

        let (sc, so) = (random_labels(rng, m), random_labels(rng, n));
        let (tc, to) = (random_labels(rng, bm), random_labels(rng, bn));
        rep.record(
            equivariance(&op, &a, s, &b, (&sc, &so), (&tc, &to)).unwrap_or(false),
            || format!("equiv {} {s:?} {}", a.1, b.1),
        );

        let a2 = random_morphism_from(rng, &a.1.tgt, max_len);
        let b2 = random_morphism_from(rng, &b.1.tgt, max_len);
        let lhs = copb_insert(&a.1.then(&a2).unwrap(), s, &b.1.then(&b2).unwrap());
        let rhs = copb_insert(&a.1, s, &b.1).and_then(|x| x.then(&copb_insert(&a2, s, &b2)?));
        rep.record(
            matches!((&lhs, &rhs), (Ok(l), Ok(r)) if l.equals(r)),
            || format!("interchange {} {s:?} {}", a.1, b.1),
        );

        if m > 0 {
            let i = rng.gen_range(1..=m);
            let ok = copb_insert_closed(&a.1, i, &CoBMorphism::identity(Permutation::identity(2)))
                .and_then(|x| restrict_unit(&x, UnitSlot::Closed(i + 1)))
                .map(|x| x.equals(&a.1))
                .unwrap_or(false);
            rep.record(ok, || format!("insert-forget {} at {i}", a.1));
        }
    }
    rep
}

/// Composition transported through ζ agrees with direct composition on random pairs.
pub fn zeta_suite(rng: &mut impl Rng, instances: usize, max_len: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("zeta transport");
    for _ in 0..instances {
        let n = rng.gen_range(0..=3);
        let m = rng.gen_range(0..=4 - n.min(3));
        let f = random_morphism(rng, n, m, max_len);
        let g = random_morphism_from(rng, &f.tgt, max_len);
        let direct = copb_compose(&g, &f).unwrap();
        let ok = zeta_inverse(&g)
            .and_then(|tg| compose_triples(&tg, &zeta_inverse(&f)?))
            .and_then(|t| zeta(&t))
            .map(|z| z == direct)
            .unwrap_or(false);
        rep.record(ok, || format!("{f} then {g}"));
    }
    rep
}

/// Exhaustive round trip `ζ⁻¹ ∘ ζ = id` over all objects with `n, m ≤ 2` and braid words up to `max_len`.
pub fn zeta_exhaustive(max_len: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("zeta round trip");
    for n in 0..=2 {
        for m in 0..=2 {
            let words = all_words(m, max_len);
            for src in objects(n, m) {
                for pat in shuffle_patterns(n, m) {
                    for w in &words {
                        let Ok(mor) = CoPBMorphism::from_braid(src.clone(), &pat, w.clone()) else {
                            rep.record(false, || format!("construct {src} {w}"));
                            continue;
                        };
                        let t = zeta_inverse(&mor).unwrap();
                        let back = zeta(&t).unwrap();
                        let again = zeta_inverse(&back).unwrap();
                        rep.record(back == mor && again == t, || mor.to_string());
                    }
                }
            }
        }
    }
    rep
}

/// Every braid word on `strands` strands with at most `max_len` letters.
pub fn all_words(strands: usize, max_len: usize) -> Vec<BraidWord> {
    let alphabet: Vec<i64> = (1..strands as i64).flat_map(|i| [i, -i]).collect();
    let mut out = vec![BraidWord::identity(strands)];
    let mut layer = vec![Vec::<i64>::new()];
    for _ in 0..max_len {
        if alphabet.is_empty() {
            break;
        }
        let next: Vec<Vec<i64>> = layer
            .iter()
            .flat_map(|w| alphabet.iter().map(move |&l| [w.as_slice(), &[l]].concat()))
            .collect();
        out.extend(next.iter().map(|w| BraidWord::new(strands, w.clone()).unwrap()));
        layer = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid_engine::braids_equal;

    fn obj(p: &str, t: &[usize], a: &[usize]) -> ShuffleObject {
        ShuffleObject::from_parts(p, t, a).unwrap()
    }

    #[test]
    fn object_counts() {
        assert_eq!(objects(2, 1).len(), 6);
        assert_eq!(shuffle_patterns(2, 3).len(), 10);
        assert_eq!(shuffle_patterns(2, 1), vec!["TTA", "TAT", "ATT"]);
    }

    #[test]
    fn composition_examples() {
        let x = obj("TA", &[1], &[1]);
        let y = obj("AT", &[1], &[1]);
        let f = shuffle_type_morphism(&x, &y).unwrap();
        let g = shuffle_type_morphism(&y, &x).unwrap();
        assert_eq!(copb_compose(&g, &f).unwrap(), CoPBMorphism::identity(&x));
        assert_eq!(copb_compose(&f, &CoPBMorphism::identity(&x)).unwrap(), f);
        let a = obj("AA", &[], &[1, 2]);
        let s = CoPBMorphism::from_braid(a.clone(), "AA", BraidWord::parse("s1", 2).unwrap()).unwrap();
        let t = CoPBMorphism::from_braid(s.tgt.clone(), "AA", BraidWord::parse("S1", 2).unwrap()).unwrap();
        let c = s.then(&t).unwrap();
        assert!(c.equals(&CoPBMorphism::identity(&a)));
        assert!(copb_compose(&f, &f).is_err());
    }

    #[test]
    fn closed_insertion_examples() {
        let x = obj("TA", &[1], &[1]);
        let id = CoPBMorphism::identity(&x);
        let one = CoBMorphism::identity(Permutation::identity(1));
        assert_eq!(copb_insert_closed(&id, 1, &one).unwrap(), id);
        let s1 = CoBMorphism::from_braid(Permutation::identity(2), BraidWord::parse("s1", 2).unwrap()).unwrap();
        let r = copb_insert_closed(&id, 1, &s1).unwrap();
        assert_eq!(r.braid, BraidWord::parse("s1", 2).unwrap());
        assert_eq!(r.tgt, obj("TAA", &[1], &[2, 1]));
        let big = random_morphism(&mut rand::thread_rng(), 2, 3, 6);
        assert_eq!(copb_insert_closed(&big, 1, &s1).unwrap().arity(), (2, 4));
    }

    #[test]
    fn open_insertion_examples() {
        let psi = CoPBMorphism::new(obj("AT", &[1], &[1]), obj("TA", &[1], &[1]), BraidWord::identity(1)).unwrap();
        let fx = CoPBMorphism::identity(&obj("A", &[], &[1]));
        let r = copb_insert_open(&psi, 1, &fx).unwrap();
        assert_eq!(r.src, obj("AA", &[], &[1, 2]));
        assert_eq!(r.tgt, obj("AA", &[], &[2, 1]));
        assert_eq!(r.braid, BraidWord::parse("s1", 2).unwrap());

        let unit = CoPBMorphism::identity(&obj("T", &[1], &[]));
        assert_eq!(copb_insert_open(&psi, 1, &unit).unwrap(), psi);
        let big = random_morphism(&mut rand::thread_rng(), 2, 3, 6);
        let small = random_morphism(&mut rand::thread_rng(), 1, 1, 0);
        assert_eq!(copb_insert_open(&big, 1, &small).unwrap().arity(), (2, 4));
        let terr = CoPBMorphism::identity(&obj("TT", &[2, 1], &[]));
        let r = copb_insert_open(&big, 2, &terr).unwrap();
        assert_eq!(r.braid, big.braid);
    }

    #[test]
    fn unit_restrictions() {
        let a = CoPBMorphism::identity(&obj("A", &[], &[1]));
        let r = restrict_unit(&a, UnitSlot::Closed(1)).unwrap();
        assert_eq!(r, CoPBMorphism::identity(&ShuffleObject::new(vec![]).unwrap()));
        let big = random_morphism(&mut rand::thread_rng(), 2, 2, 6);
        let r = restrict_unit(&big, UnitSlot::Open(1)).unwrap();
        assert_eq!(r.braid, big.braid);
        assert!(restrict_unit(&big, UnitSlot::Open(3)).is_err());
    }

    #[test]
    fn zeta_examples() {
        let x = obj("ATA", &[1], &[2, 1]);
        let id = CoPBMorphism::identity(&x);
        let t = zeta_inverse(&id).unwrap();
        assert_eq!(t.aerial, CoBMorphism::identity(Permutation::new(vec![2, 1]).unwrap()));
        assert_eq!(zeta(&t).unwrap(), id);
        assert!(shuffle_type_morphism(&x, &obj("AAT", &[1], &[1, 2])).is_none());
        let s = shuffle_type_morphism(&x, &obj("AAT", &[1], &[2, 1])).unwrap();
        assert!(s.braid.is_empty());
    }

    #[test]
    fn operad_axioms_hold() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let rep = axiom_suite(&mut rng, 60, 6);
        assert!(rep.passed(), "{rep}");
        let rep = zeta_suite(&mut rng, 40, 6);
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn zeta_round_trip_small() {
        let rep = zeta_exhaustive(2);
        assert!(rep.passed(), "{rep}");
        assert!(rep.checked > 0);
    }

    #[test]
    fn cob_round_trip() {
        let m = CoBMorphism::from_braid(Permutation::new(vec![2, 3, 1]).unwrap(), BraidWord::parse("s1 s2", 3).unwrap()).unwrap();
        let back = CoBMorphism::from_copb(&m.as_copb().unwrap()).unwrap();
        assert_eq!(back, m);
        assert!(braids_equal(&back.braid, &m.braid).unwrap());
    }
}
