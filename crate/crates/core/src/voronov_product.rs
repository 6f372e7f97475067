//! Voronov product of two operads in groupoids along a morphism `Com → P`, and the instance
//! `CD̂₊ ×₀ PaP₊`.
//!
//! Open-output operations of arity `(n, m)` are pairs `(p, q)` with `p ∈ P(m)`, `q ∈ Q(n)`;
//! closed-output operations are elements of `P`. Both factors are single-colored and use their
//! closed slots.

use std::fmt;

use rand::Rng;
use serde_json::{json, Value};

use crate::chord_diagrams::{random_grouplike, ChordOperad, DKElement};
use crate::error::{Error, Result};
use crate::operad_axioms::PartialOperad;
use crate::report::SuiteReport;
use crate::trees_magma::{graft, random_closed_tree, random_labels, x, Color, Slot, Tree};

/// An operad in groupoids: partial insertion plus composition of morphisms.
pub trait GroupoidOperad: PartialOperad {
    /// `a` followed by `b`.
    fn then(&self, a: &Self::El, b: &Self::El) -> Result<Self::El>;
}

impl GroupoidOperad for ChordOperad {
    fn then(&self, a: &DKElement, b: &DKElement) -> Result<DKElement> {
        a.mul(b)
    }
}

/// Morphism of parenthesized permutations: two parenthesizations of one leaf order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PaPMorphism {
    pub src: Tree,
    pub tgt: Tree,
}

impl PaPMorphism {
    pub fn new(src: Tree, tgt: Tree) -> Result<Self> {
        for t in [&src, &tgt] {
            t.validate()?;
            if t.color() != Color::Closed {
                return Err(Error::ColorMismatch(format!("{t} is not a parenthesized permutation")));
            }
        }
        if src.closed_labels() != tgt.closed_labels() {
            return Err(Error::ObjectMismatch(format!("{src} and {tgt} have different orders")));
        }
        Ok(PaPMorphism { src, tgt })
    }

    pub fn arity(&self) -> usize {
        self.src.arity().1
    }
}

impl fmt::Display for PaPMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} → {}", self.src, self.tgt)
    }
}

pub struct PaPOperad;

impl PartialOperad for PaPOperad {
    type El = PaPMorphism;
    fn arity(&self, e: &PaPMorphism) -> (usize, usize) {
        (0, e.arity())
    }
    fn closed_output(&self, _: &PaPMorphism) -> bool {
        true
    }
    fn insert(&self, outer: &PaPMorphism, slot: Slot, inner: &PaPMorphism) -> Result<PaPMorphism> {
        if !matches!(slot, Slot::Closed(_)) {
            return Err(Error::ColorMismatch("parenthesized permutations are single-colored".into()));
        }
        PaPMorphism::new(graft(&outer.src, slot, &inner.src)?, graft(&outer.tgt, slot, &inner.tgt)?)
    }
    fn relabel(&self, e: &PaPMorphism, closed: &dyn Fn(usize) -> usize, open: &dyn Fn(usize) -> usize) -> PaPMorphism {
        PaPMorphism { src: e.src.relabel(closed, open), tgt: e.tgt.relabel(closed, open) }
    }
    fn equal(&self, a: &PaPMorphism, b: &PaPMorphism) -> bool {
        a == b
    }
    fn unit(&self, closed: bool) -> Option<PaPMorphism> {
        closed.then(|| PaPMorphism { src: x(1), tgt: x(1) })
    }
}

impl GroupoidOperad for PaPOperad {
    fn then(&self, a: &PaPMorphism, b: &PaPMorphism) -> Result<PaPMorphism> {
        if a.tgt != b.src {
            return Err(Error::ObjectMismatch(format!("{} vs {}", a.tgt, b.src)));
        }
        PaPMorphism::new(a.src.clone(), b.tgt.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VoronovElement<P, Q> {
    Closed(P),
    Open(P, Q),
}

impl<P: fmt::Display, Q: fmt::Display> fmt::Display for VoronovElement<P, Q> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VoronovElement::Closed(p) => write!(f, "{p}"),
            VoronovElement::Open(p, q) => write!(f, "({p} ; {q})"),
        }
    }
}

/// `P ⊗ Q` with `Com → P` given by the images of the arity 0 and arity 2 generators.
pub struct Voronov<P: PartialOperad, Q: PartialOperad> {
    pub p: P,
    pub q: Q,
    pub com0: P::El,
    pub com2: P::El,
    /// Drop every component with no inputs at all (`×₀`).
    pub drop_empty: bool,
}

pub type VorEl<P, Q> = VoronovElement<<P as PartialOperad>::El, <Q as PartialOperad>::El>;

impl<P: PartialOperad, Q: PartialOperad> Voronov<P, Q> {
    /// `µ(a, b)` with the inputs of `b` after those of `a`.
    pub fn merge(&self, a: &P::El, b: &P::El) -> Result<P::El> {
        let right = self.p.insert(&self.com2, Slot::Closed(2), b)?;
        self.p.insert(&right, Slot::Closed(1), a)
    }

    fn p_arity(&self, a: &P::El) -> usize {
        self.p.arity(a).1
    }

    fn q_arity(&self, b: &Q::El) -> usize {
        self.q.arity(b).1
    }

    pub fn check(&self, e: &VorEl<P, Q>) -> Result<()> {
        if self.drop_empty && PartialOperad::arity(self, e) == (0, 0) {
            return Err(Error::IllFormed("component without inputs".into()));
        }
        Ok(())
    }

    pub fn open(&self, p: P::El, q: Q::El) -> Result<VorEl<P, Q>> {
        let e = VoronovElement::Open(p, q);
        self.check(&e)?;
        Ok(e)
    }

    pub fn insert_closed(&self, e: &VorEl<P, Q>, i: usize, z: &P::El) -> Result<VorEl<P, Q>> {
        let m = PartialOperad::arity(self, e).1;
        if i == 0 || i > m {
            return Err(Error::OutOfRange { index: i, max: m });
        }
        let out = match e {
            VoronovElement::Closed(a) => VoronovElement::Closed(self.p.insert(a, Slot::Closed(i), z)?),
            VoronovElement::Open(a, b) => VoronovElement::Open(self.p.insert(a, Slot::Closed(i), z)?, b.clone()),
        };
        self.check(&out)?;
        Ok(out)
    }

    pub fn insert_open(&self, e: &VorEl<P, Q>, j: usize, inner: &VorEl<P, Q>) -> Result<VorEl<P, Q>> {
        match (e, inner) {
            (VoronovElement::Open(a, b), VoronovElement::Open(a2, b2)) => {
                let n = self.q_arity(b);
                if j == 0 || j > n {
                    return Err(Error::OutOfRange { index: j, max: n });
                }
                self.open(self.merge(a, a2)?, self.q.insert(b, Slot::Closed(j), b2)?)
            }
            _ => Err(Error::ColorMismatch("open insertion needs open-output operations".into())),
        }
    }
}

impl<P: PartialOperad, Q: PartialOperad> PartialOperad for Voronov<P, Q> {
    type El = VorEl<P, Q>;

    fn arity(&self, e: &Self::El) -> (usize, usize) {
        match e {
            VoronovElement::Closed(a) => (0, self.p_arity(a)),
            VoronovElement::Open(a, b) => (self.q_arity(b), self.p_arity(a)),
        }
    }
    fn closed_output(&self, e: &Self::El) -> bool {
        matches!(e, VoronovElement::Closed(_))
    }
    fn insert(&self, outer: &Self::El, slot: Slot, inner: &Self::El) -> Result<Self::El> {
        match (slot, inner) {
            (Slot::Closed(i), VoronovElement::Closed(z)) => self.insert_closed(outer, i, z),
            (Slot::Open(j), _) => self.insert_open(outer, j, inner),
            _ => Err(Error::ColorMismatch("open-output operation in a closed slot".into())),
        }
    }
    fn relabel(&self, e: &Self::El, closed: &dyn Fn(usize) -> usize, open: &dyn Fn(usize) -> usize) -> Self::El {
        let id = |l: usize| l;
        match e {
            VoronovElement::Closed(a) => VoronovElement::Closed(self.p.relabel(a, closed, &id)),
            VoronovElement::Open(a, b) => VoronovElement::Open(self.p.relabel(a, closed, &id), self.q.relabel(b, open, &id)),
        }
    }
    fn equal(&self, a: &Self::El, b: &Self::El) -> bool {
        match (a, b) {
            (VoronovElement::Closed(a), VoronovElement::Closed(b)) => self.p.equal(a, b),
            (VoronovElement::Open(a, b), VoronovElement::Open(a2, b2)) => self.p.equal(a, a2) && self.q.equal(b, b2),
            _ => false,
        }
    }
    fn unit(&self, closed: bool) -> Option<Self::El> {
        Some(if closed {
            VoronovElement::Closed(self.p.unit(true)?)
        } else {
            VoronovElement::Open(self.com0.clone(), self.q.unit(true)?)
        })
    }
}

impl<P: GroupoidOperad, Q: GroupoidOperad> GroupoidOperad for Voronov<P, Q> {
    fn then(&self, a: &Self::El, b: &Self::El) -> Result<Self::El> {
        match (a, b) {
            (VoronovElement::Closed(a), VoronovElement::Closed(b)) => Ok(VoronovElement::Closed(self.p.then(a, b)?)),
            (VoronovElement::Open(a, b), VoronovElement::Open(a2, b2)) => {
                Ok(VoronovElement::Open(self.p.then(a, a2)?, self.q.then(b, b2)?))
            }
            _ => Err(Error::ColorMismatch("composing operations of different output colors".into())),
        }
    }
}

pub type CdPap = Voronov<ChordOperad, PaPOperad>;

/// `CD̂₊ ×₀ PaP₊` truncated at degree `n`; `Com` goes to the empty chord diagrams.
pub fn build_cd_pap_instance(n: usize) -> CdPap {
    Voronov {
        p: ChordOperad { degree: n },
        q: PaPOperad,
        com0: DKElement::one(0, n),
        com2: DKElement::one(2, n),
        drop_empty: true,
    }
}

pub fn random_pap(rng: &mut impl Rng, n: usize) -> PaPMorphism {
    let labels = random_labels(rng, n);
    PaPMorphism::new(random_closed_tree(rng, &labels), random_closed_tree(rng, &labels)).unwrap()
}

/// Random element of the instance: closed with probability `p_closed`, at most `max` inputs.
pub fn random_cd_pap(rng: &mut impl Rng, v: &CdPap, max: usize, p_closed: f64) -> VorEl<ChordOperad, PaPOperad> {
    let deg = v.p.degree;
    if rng.gen_bool(p_closed) {
        let m = rng.gen_range(1..=max);
        VoronovElement::Closed(random_grouplike(rng, m, deg, 2))
    } else {
        let total = rng.gen_range(1..=max);
        let n = rng.gen_range(0..=total);
        VoronovElement::Open(random_grouplike(rng, total - n, deg, 2), random_pap(rng, n))
    }
}

/// A morphism with the same arity whose source is the target of `e`.
pub fn random_cd_pap_from(rng: &mut impl Rng, v: &CdPap, e: &VorEl<ChordOperad, PaPOperad>) -> VorEl<ChordOperad, PaPOperad> {
    let deg = v.p.degree;
    match e {
        VoronovElement::Closed(a) => VoronovElement::Closed(random_grouplike(rng, a.strands(), deg, 2)),
        VoronovElement::Open(a, b) => {
            let tgt = random_closed_tree(rng, &b.tgt.closed_labels());
            VoronovElement::Open(random_grouplike(rng, a.strands(), deg, 2), PaPMorphism::new(b.tgt.clone(), tgt).unwrap())
        }
    }
}

/// Unit, associativity, equivariance and interchange with groupoid composition.
pub fn axiom_suite(rng: &mut impl Rng, v: &CdPap, instances: usize, max: usize) -> SuiteReport {
    use crate::operad_axioms::{equivariance, parallel, sequential, unitality};
    let mut rep = SuiteReport::new("Voronov product axioms");
    let pick = |rng: &mut _, e: &VorEl<ChordOperad, PaPOperad>| -> Option<Slot> {
        let (n, m) = v.arity(e);
        (n + m > 0).then(|| {
            let k = Rng::gen_range(rng, 0..n + m);
            if k < n {
                Slot::Open(k + 1)
            } else {
                Slot::Closed(k - n + 1)
            }
        })
    };
    let sample = |rng: &mut _, closed: bool| random_cd_pap(rng, v, max, if closed { 1.0 } else { 0.0 });
    for _ in 0..instances {
        let closed = rng.gen_bool(0.2);
        let a = sample(rng, closed);
        rep.record(unitality(v, &a).unwrap_or(false), || format!("unit {a}"));
        let Some(s) = pick(rng, &a) else { continue };
        let b = sample(rng, matches!(s, Slot::Closed(_)));
        if let Some(t) = pick(rng, &b) {
            let c = sample(rng, matches!(t, Slot::Closed(_)));
            rep.record(sequential(v, &a, s, &b, t, &c).unwrap_or(false), || format!("seq {a} {s:?} {b} {t:?} {c}"));
        }
        let (n, m) = v.arity(&a);
        let others: Vec<Slot> = (1..=n).map(Slot::Open).chain((1..=m).map(Slot::Closed)).filter(|&o| o != s).collect();
        if !others.is_empty() {
            let s2 = others[rng.gen_range(0..others.len())];
            let c = sample(rng, matches!(s2, Slot::Closed(_)));
            rep.record(parallel(v, &a, s, &b, s2, &c).unwrap_or(false), || format!("par {a} {s:?} {b} {s2:?} {c}"));
        }
        let (bn, bm) = v.arity(&b);
        let (sc, so) = (random_labels(rng, m), random_labels(rng, n));
        let (tc, to) = (random_labels(rng, bm), random_labels(rng, bn));
        rep.record(equivariance(v, &a, s, &b, (&sc, &so), (&tc, &to)).unwrap_or(false), || format!("equiv {a} {s:?} {b}"));

        let a2 = random_cd_pap_from(rng, v, &a);
        let b2 = random_cd_pap_from(rng, v, &b);
        let lhs = v.then(&a, &a2).and_then(|x| v.insert(&x, s, &v.then(&b, &b2)?));
        let rhs = v.insert(&a, s, &b).and_then(|x| v.then(&x, &v.insert(&a2, s, &b2)?));
        rep.record(matches!((&lhs, &rhs), (Ok(l), Ok(r)) if v.equal(l, r)), || format!("interchange {a} {s:?} {b}"));
    }
    rep
}

pub fn to_json(e: &VorEl<ChordOperad, PaPOperad>) -> Value {
    match e {
        VoronovElement::Closed(a) => json!({ "p": a.to_json() }),
        VoronovElement::Open(a, b) => json!({ "p": a.to_json(), "q": [b.src.to_string(), b.tgt.to_string()] }),
    }
}

pub fn from_json(v: &Value) -> Result<VorEl<ChordOperad, PaPOperad>> {
    let bad = || Error::Parse(format!("not a Voronov pair: {v}"));
    let p = serde_json::from_value(v.get("p").cloned().ok_or_else(bad)?).map_err(|_| bad())?;
    let p = DKElement::from_json(&p)?;
    match v.get("q") {
        None => Ok(VoronovElement::Closed(p)),
        Some(q) => {
            let q = q.as_array().filter(|a| a.len() == 2).ok_or_else(bad)?;
            let t = |x: &Value| Tree::parse(x.as_str().ok_or_else(bad)?);
            Ok(VoronovElement::Open(p, PaPMorphism::new(t(&q[0])?, t(&q[1])?)?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees_magma::mc;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn closed_merge_of_empty_diagrams() {
        let v = build_cd_pap_instance(2);
        assert_eq!(v.merge(&DKElement::one(1, 2), &DKElement::one(2, 2)).unwrap(), DKElement::one(3, 2));
        assert_eq!(v.merge(&v.com0, &DKElement::one(0, 2)).unwrap(), DKElement::one(0, 2));
    }

    #[test]
    fn merge_is_juxtaposition_and_commutative() {
        let v = build_cd_pap_instance(3);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let (m, m2) = (rng.gen_range(0..=3), rng.gen_range(0..=3));
            let a = random_grouplike(&mut rng, m, 3, 3);
            let b = random_grouplike(&mut rng, m2, 3, 3);
            let ab = v.merge(&a, &b).unwrap();
            let ba = v.merge(&b, &a).unwrap();
            let swap = |l: usize| if l <= m2 { l + m } else { l - m2 };
            assert_eq!(ba.relabel(&swap).unwrap(), ab);
            // juxtaposition: a on the first strands, b shifted past them
            let expect = a.shift(0, m + m2).unwrap().mul(&b.shift(m, m + m2).unwrap()).unwrap();
            assert_eq!(ab, expect);
        }
    }

    #[test]
    fn arity_bookkeeping_and_units() {
        let v = build_cd_pap_instance(2);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let e = v.open(random_grouplike(&mut rng, 2, 2, 2), random_pap(&mut rng, 2)).unwrap();
        let z = random_grouplike(&mut rng, 3, 2, 2);
        assert_eq!(v.arity(&v.insert_closed(&e, 1, &z).unwrap()), (2, 4));
        assert_eq!(v.insert_closed(&e, 2, &DKElement::one(1, 2)).unwrap(), e);
        let inner = v.open(random_grouplike(&mut rng, 1, 2, 2), random_pap(&mut rng, 3)).unwrap();
        assert_eq!(v.arity(&v.insert_open(&e, 2, &inner).unwrap()), (4, 3));
        assert_eq!(v.insert_open(&e, 1, &v.unit(false).unwrap()).unwrap(), e);
        assert!(v.insert_closed(&e, 3, &z).is_err());
    }

    #[test]
    fn empty_components_are_removed_but_pure_closed_ones_stay() {
        let v = build_cd_pap_instance(2);
        assert!(v.open(DKElement::one(0, 2), PaPMorphism::new(Tree::UnitC, Tree::UnitC).unwrap()).is_err());
        // (0, m) components exist: a chord diagram with the empty permutation
        let e = v.open(DKElement::t(2, 2, 1, 2).exp().unwrap(), PaPMorphism::new(Tree::UnitC, Tree::UnitC).unwrap()).unwrap();
        assert_eq!(v.arity(&e), (0, 2));
        let one = v.open(DKElement::one(1, 2), PaPMorphism::new(x(1), x(1)).unwrap()).unwrap();
        assert_eq!(v.arity(&v.insert_open(&one, 1, &e).unwrap()), (0, 3));
        let pap = PaPMorphism::new(mc(x(1), x(2)), mc(x(1), x(2))).unwrap();
        assert!(PaPMorphism::new(mc(x(1), x(2)), mc(x(2), x(1))).is_err());
        assert_eq!(pap.arity(), 2);
    }

    #[test]
    fn operad_axioms() {
        let v = build_cd_pap_instance(2);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let rep = axiom_suite(&mut rng, &v, 100, 3);
        assert!(rep.passed() && rep.checked > 300, "{rep}");
    }

    #[test]
    fn json_round_trip() {
        let v = build_cd_pap_instance(2);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let e = random_cd_pap(&mut rng, &v, 3, 0.3);
            assert_eq!(from_json(&to_json(&e)).unwrap(), e);
        }
    }
}
