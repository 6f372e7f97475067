//! Drinfeld associators up to a truncation degree: the operad map from parenthesized braids
//! to chord diagrams determined by `(µ, Φ)`, pentagon and hexagon residuals, and a degreewise
//! solver.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::chord_diagrams::{dk_coproduct, num_generators, pair_index, tensor_square, DKElement, PaCDMorphism};
use crate::error::{Error, Result};
use crate::exact_algebra::{int, solve_exact, LinearSystem, NCSeries, Rational, SeriesJson, SparseVec, Word};
use crate::parenthesized_operads::{
    check_perm, coherence_diagrams, evaluate, to_generator_word, Generator, GeneratorModel, PaPBMorphism,
};
use crate::trees_magma::{Color, Slot, Tree};

/// Largest arity accepted by [`phi_eval`].
pub const MAX_ARITY: usize = 8;

/// `Φ` is a series in two letters: `0 = t12`, `1 = t13`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Associator {
    pub mu: Rational,
    pub degree: usize,
    pub phi: NCSeries,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssociatorJson {
    pub mu: String,
    pub degree: usize,
    pub phi: SeriesJson,
}

impl Associator {
    pub fn new(mu: Rational, degree: usize, phi: NCSeries) -> Result<Self> {
        if phi.alphabet() != 2 {
            return Err(Error::AlphabetMismatch(phi.alphabet(), 2));
        }
        Ok(Associator { mu, degree, phi: phi.truncate(degree) })
    }

    /// `Φ = 1`.
    pub fn trivial(mu: Rational, degree: usize) -> Self {
        Associator { mu, degree, phi: NCSeries::one(2, degree) }
    }

    /// `Φ` inside the algebra on three strands.
    pub fn phi_element(&self) -> DKElement {
        let g = num_generators(3);
        let images = [pair_index(3, 1, 2), pair_index(3, 1, 3)].map(|l| NCSeries::generator(g, self.degree, l));
        let s = self.phi.substitute(&images, g, self.degree).expect("two images for two letters");
        DKElement::from_series(3, &s).expect("three-strand alphabet")
    }

    /// `e^{µ t12 / 2}` on two strands.
    pub fn braiding(&self) -> DKElement {
        DKElement::t(2, self.degree, 1, 2).scale(&(&self.mu / int(2))).exp().expect("no constant term")
    }

    /// `Φ` rewritten in the letters `0 = t12`, `1 = t23` through `t13 = c − t12 − t23`, dropping
    /// the central `c`. Exact when the degree-1 part vanishes.
    pub fn phi_t12_t23(&self) -> NCSeries {
        let a = NCSeries::generator(2, self.degree, 0);
        let b = NCSeries::generator(2, self.degree, 1);
        let t13 = a.add(&b).unwrap().scale(&-Rational::one());
        self.phi.substitute(&[a, t13], 2, self.degree).unwrap()
    }

    pub fn to_json(&self) -> AssociatorJson {
        AssociatorJson { mu: crate::exact_algebra::format_rational(&self.mu), degree: self.degree, phi: self.phi.to_json() }
    }

    pub fn from_json(j: &AssociatorJson) -> Result<Self> {
        Self::new(crate::exact_algebra::parse_rational(&j.mu)?, j.degree, NCSeries::from_json(&j.phi)?)
    }
}

/// Evaluates closed generator words in parenthesized chord diagrams: `τ ↦ e^{µt12/2}`, `α_c ↦ Φ`.
pub struct PhiModel {
    degree: usize,
    tau: DKElement,
    alpha: DKElement,
}

impl PhiModel {
    pub fn new(a: &Associator) -> Self {
        PhiModel { degree: a.degree, tau: a.braiding(), alpha: a.phi_element() }
    }
}

impl GeneratorModel for PhiModel {
    type Mor = PaCDMorphism;

    fn generator(&self, g: Generator) -> Result<PaCDMorphism> {
        match g {
            Generator::Tau => PaCDMorphism::new(g.source(), g.target(), self.tau.clone()),
            Generator::AlphaC => PaCDMorphism::new(g.source(), g.target(), self.alpha.clone()),
            _ => Err(Error::ColorMismatch(format!("{} has open inputs", g.name()))),
        }
    }
    fn identity(&self, t: &Tree) -> Result<PaCDMorphism> {
        PaCDMorphism::identity(t, self.degree)
    }
    fn compose(&self, first: &PaCDMorphism, second: &PaCDMorphism) -> Result<PaCDMorphism> {
        first.then(second)
    }
    fn inverse(&self, m: &PaCDMorphism) -> Result<PaCDMorphism> {
        m.inverse()
    }
    fn insert(&self, outer: &PaCDMorphism, slot: Slot, inner: &PaCDMorphism) -> Result<PaCDMorphism> {
        match slot {
            Slot::Closed(i) => outer.insert(i, inner),
            Slot::Open(_) => Err(Error::ColorMismatch("open insertion into chord diagrams".into())),
        }
    }
    fn relabel(&self, m: &PaCDMorphism, closed: &[usize], open: &[usize]) -> Result<PaCDMorphism> {
        check_perm(closed, m.src.arity().1)?;
        check_perm(open, 0)?;
        m.relabel(&|l| closed[l - 1])
    }
    fn equal(&self, a: &PaCDMorphism, b: &PaCDMorphism) -> bool {
        a == b
    }
}

/// The lift of `φ` to parenthesized chord diagrams: identity on objects.
pub fn lift_phi_tilde(a: &Associator, y: &PaPBMorphism) -> Result<PaCDMorphism> {
    if y.color() != Color::Closed {
        return Err(Error::ColorMismatch(format!("{y} is not a parenthesized braid")));
    }
    if y.arity().1 > MAX_ARITY {
        return Err(Error::OutOfRange { index: y.arity().1, max: MAX_ARITY });
    }
    let m = evaluate(&PhiModel::new(a), &to_generator_word(y)?)?;
    debug_assert!(m.src == y.src && m.tgt == y.tgt);
    Ok(m)
}

pub fn phi_eval(a: &Associator, y: &PaPBMorphism) -> Result<DKElement> {
    Ok(lift_phi_tilde(a, y)?.element)
}

fn diagram_residual(a: &Associator, name: &str) -> DKElement {
    let d = coherence_diagrams().into_iter().find(|d| d.name == name).expect("known diagram");
    let (l, r) = d.words().expect("diagram paths agree");
    let model = PhiModel::new(a);
    let lv = evaluate(&model, &l).expect("closed diagram");
    let rv = evaluate(&model, &r).expect("closed diagram");
    lv.element.sub(&rv.element).unwrap()
}

/// Difference of the two paths of the closed pentagon, on four strands.
pub fn check_pentagon(a: &Associator) -> DKElement {
    diagram_residual(a, "pentagon (closed)")
}

/// Differences of the two paths of each hexagon, on three strands.
pub fn check_hexagons(a: &Associator) -> [DKElement; 2] {
    [diagram_residual(a, "hexagon"), diagram_residual(a, "hexagon (inverse associators)")]
}

/// Identifies one coefficient of one constraint.
type Key = (usize, Word, Word);

/// All constraint coefficients: pentagon, hexagons, and `Δ(Φ) − Φ⊗Φ`.
fn constraints(a: &Associator) -> BTreeMap<Key, Rational> {
    let mut out = BTreeMap::new();
    let [h1, h2] = check_hexagons(a);
    for (k, e) in [check_pentagon(a), h1, h2].into_iter().enumerate() {
        for (w, c) in e.series().terms() {
            out.insert((k, w.clone(), Vec::new()), c.clone());
        }
    }
    let phi = a.phi_element();
    let mut defect = dk_coproduct(&phi);
    for (key, c) in tensor_square(&phi) {
        *defect.entry(key).or_insert_with(Rational::zero) -= c;
    }
    for ((u, v), c) in defect {
        if !c.is_zero() {
            out.insert((3, u, v), c);
        }
    }
    out
}

fn key_degree(k: &Key) -> usize {
    k.1.len() + k.2.len()
}

/// Every constraint coefficient, for reporting; empty exactly when `a` is an associator.
pub fn residuals(a: &Associator) -> BTreeMap<String, Rational> {
    let names = ["pentagon", "hexagon1", "hexagon2", "grouplike"];
    constraints(a).into_iter().map(|((k, u, v), c)| (format!("{} {u:?} {v:?}", names[k]), c)).collect()
}

fn words_of_length(d: usize) -> Vec<Word> {
    (0..1usize << d).map(|i| (0..d).map(|b| (i >> (d - 1 - b)) & 1).collect()).collect()
}

fn with_phi(mu: &Rational, degree: usize, phi: NCSeries) -> Associator {
    Associator { mu: mu.clone(), degree, phi: phi.truncate(degree) }
}

fn push_system(sys: &mut LinearSystem, columns: &[BTreeMap<Key, Rational>], base: &BTreeMap<Key, Rational>) {
    let mut rows: BTreeMap<&Key, SparseVec> = BTreeMap::new();
    for (j, col) in columns.iter().enumerate() {
        for (k, c) in col {
            if !c.is_zero() {
                rows.entry(k).or_default().insert(j, c.clone());
            }
        }
    }
    for k in base.keys() {
        rows.entry(k).or_default();
    }
    for (k, coefs) in rows {
        let rhs = -base.get(k).cloned().unwrap_or_else(Rational::zero);
        sys.push(coefs, rhs);
    }
}

/// Degree by degree: the degree-`d` constraints are affine in `Φ_d` once lower degrees are fixed.
pub fn solve_associator(mu: &Rational, degree: usize) -> Result<Associator> {
    let mut phi = NCSeries::one(2, degree);
    for d in 1..=degree {
        let only_d = |m: BTreeMap<Key, Rational>| -> BTreeMap<Key, Rational> {
            m.into_iter().filter(|(k, _)| key_degree(k) == d).collect()
        };
        let base = only_d(constraints(&with_phi(mu, d, phi.clone())));
        let words = words_of_length(d);
        let columns: Vec<_> = words
            .iter()
            .map(|w| {
                let mut p = phi.clone();
                p.add_term(w.clone(), Rational::one());
                let mut col = only_d(constraints(&with_phi(mu, d, p)));
                for (k, c) in &base {
                    *col.entry(k.clone()).or_insert_with(Rational::zero) -= c;
                }
                col
            })
            .collect();
        let mut sys = LinearSystem::new(words.len());
        push_system(&mut sys, &columns, &base);
        let x = solve_exact(&sys).particular().ok_or(Error::Inconsistent)?.to_vec();
        for (w, c) in words.into_iter().zip(x) {
            phi.add_term(w, c);
        }
    }
    let a = Associator::new(mu.clone(), degree, phi)?;
    if !constraints(&a).is_empty() {
        return Err(Error::Inconsistent);
    }
    Ok(a)
}

/// Linearizes every constraint at `Φ = 1` over all unknowns of degrees `1..=degree` at once and
/// solves a single system; the nonlinear remainder is then checked to vanish. Exact through
/// degree 3, where the forced `Φ_1 = 0` leaves no products of unknowns.
pub fn solve_associator_one_shot(mu: &Rational, degree: usize) -> Result<Associator> {
    let words: Vec<Word> = (1..=degree).flat_map(words_of_length).collect();
    let base = constraints(&Associator::trivial(mu.clone(), degree));
    let nodes: Vec<i64> = (0..=degree as i64).collect();
    // derivative at 0 of the Lagrange basis polynomials on the nodes
    let weights: Vec<Rational> = nodes
        .iter()
        .map(|&k| {
            if k == 0 {
                -nodes[1..].iter().map(|&j| Rational::new(1.into(), j.into())).fold(Rational::zero(), |a, b| a + b)
            } else {
                let num = nodes.iter().filter(|&&j| j != 0 && j != k).fold(int(1), |a, &j| a * int(-j));
                let den = nodes.iter().filter(|&&j| j != k).fold(int(1), |a, &j| a * int(k - j));
                num / den
            }
        })
        .collect();
    let columns: Vec<BTreeMap<Key, Rational>> = words
        .iter()
        .map(|w| {
            let mut col: BTreeMap<Key, Rational> = BTreeMap::new();
            for (&s, wt) in nodes.iter().zip(&weights) {
                let mut p = NCSeries::one(2, degree);
                p.add_term(w.clone(), int(s));
                for (k, c) in constraints(&with_phi(mu, degree, p)) {
                    *col.entry(k).or_insert_with(Rational::zero) += c * wt;
                }
            }
            col.retain(|_, c| !c.is_zero());
            col
        })
        .collect();
    let mut sys = LinearSystem::new(words.len());
    push_system(&mut sys, &columns, &base);
    let x = solve_exact(&sys).particular().ok_or(Error::Inconsistent)?.to_vec();
    let mut phi = NCSeries::one(2, degree);
    for (w, c) in words.into_iter().zip(x) {
        phi.add_term(w, c);
    }
    let a = Associator::new(mu.clone(), degree, phi)?;
    if !constraints(&a).is_empty() {
        return Err(Error::Inconsistent);
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chord_diagrams::grouplike_check;
    use crate::exact_algebra::rat;
    use crate::parenthesized_operads::{papb_insert, random_papb, random_papb_from, word_via, PaPBModel};
    use crate::trees_magma::{mc, x};
    use rand::{Rng, SeedableRng};

    fn bracket(n: usize) -> NCSeries {
        NCSeries::from_terms(2, n, [(vec![0, 1], int(1)), (vec![1, 0], int(-1))]).unwrap()
    }

    #[test]
    fn evaluation_examples() {
        let a = Associator::trivial(int(1), 3);
        let t12 = DKElement::t(2, 3, 1, 2);
        let id = PaPBMorphism::identity(&mc(x(1), x(2))).unwrap();
        assert_eq!(phi_eval(&a, &id).unwrap(), DKElement::one(2, 3));
        let tau = Generator::Tau.morphism();
        assert_eq!(phi_eval(&a, &tau).unwrap(), t12.scale(&rat(1, 2)).exp().unwrap());
        let back = tau.relabel(&|l| 3 - l, &|l| l);
        assert_eq!(phi_eval(&a, &tau.then(&back).unwrap()).unwrap(), t12.exp().unwrap());
        let lift = lift_phi_tilde(&a, &tau).unwrap();
        assert_eq!((lift.src, lift.tgt), (mc(x(1), x(2)), mc(x(2), x(1))));
    }

    #[test]
    fn trivial_associator_residuals() {
        for n in 1..=3 {
            assert!(constraints(&Associator::trivial(int(0), n)).is_empty());
        }
        let a = Associator::trivial(int(1), 2);
        assert!(check_pentagon(&a).is_zero());
        let [h1, h2] = check_hexagons(&a);
        assert!(!(h1.is_zero() && h2.is_zero()));
    }

    #[test]
    fn solver_degree_two_and_three() {
        let a = solve_associator(&int(1), 3).unwrap();
        assert!(check_pentagon(&a).is_zero());
        assert!(check_hexagons(&a).iter().all(|h| h.is_zero()));
        assert!(grouplike_check(&a.phi_element()));
        assert!(a.phi.part(1).is_zero());
        // the two solvers agree, and the degree-2 part is c·[t12, t13]
        let b = solve_associator_one_shot(&int(1), 2).unwrap();
        assert_eq!(a.phi.truncate(2), b.phi);
        let c = a.phi.coef(&[0, 1]);
        assert_eq!(a.phi.part(2), bracket(3).part(2).scale(&c));
        assert_eq!(c, rat(1, 24));
        assert!(a.phi.part(3).is_zero());
        assert_eq!(solve_associator_one_shot(&int(1), 3).unwrap(), a);
    }

    #[test]
    fn solver_degree_four() {
        let a = solve_associator(&int(1), 4).unwrap();
        assert!(check_pentagon(&a).is_zero() && residuals(&a).is_empty());
        assert_eq!(a.phi.truncate(3), solve_associator(&int(1), 3).unwrap().phi);
        assert_eq!(a.phi.coef(&[1, 0, 1, 0]), rat(19, 5760));
    }

    #[test]
    fn degree_two_coefficient_scales_with_mu_squared() {
        let c1 = solve_associator(&int(1), 2).unwrap().phi.coef(&[0, 1]);
        for mu in [int(2), rat(-1, 3)] {
            let c = solve_associator(&mu, 2).unwrap().phi.coef(&[0, 1]);
            assert_eq!(c, &c1 * &mu * &mu);
        }
    }

    #[test]
    fn convention_change_is_exact() {
        let a = solve_associator(&int(1), 3).unwrap();
        let b = a.phi_t12_t23();
        let g = num_generators(3);
        let images = [pair_index(3, 1, 2), pair_index(3, 2, 3)].map(|l| NCSeries::generator(g, 3, l));
        let e = DKElement::from_series(3, &b.substitute(&images, g, 3).unwrap()).unwrap();
        assert_eq!(e, a.phi_element());
    }

    #[test]
    fn json_round_trip() {
        let a = solve_associator(&int(1), 2).unwrap();
        let j = serde_json::to_string(&a.to_json()).unwrap();
        assert_eq!(Associator::from_json(&serde_json::from_str(&j).unwrap()).unwrap(), a);
    }

    #[test]
    fn phi_is_a_functor_and_an_operad_map() {
        let a = solve_associator(&int(1), 3).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let m = rng.gen_range(1..=3);
            let y1 = random_papb(&mut rng, 0, m, 4, true);
            let y2 = random_papb_from(&mut rng, &y1.tgt, 4);
            let lhs = lift_phi_tilde(&a, &y1.then(&y2).unwrap()).unwrap();
            let rhs = lift_phi_tilde(&a, &y1).unwrap().then(&lift_phi_tilde(&a, &y2).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
            // a second word through a different intermediate object
            let z = random_papb_from(&mut rng, &y1.src, 3);
            let w = word_via(&y1, &z).unwrap();
            assert!(evaluate(&PaPBModel, &w).unwrap().equals(&y1));
            assert_eq!(evaluate(&PhiModel::new(&a), &w).unwrap(), lift_phi_tilde(&a, &y1).unwrap());
            // insertion
            let i = rng.gen_range(1..=m);
            let k = rng.gen_range(1..=2);
            let inner = random_papb(&mut rng, 0, k, 3, true);
            let ins = papb_insert(&y1, Slot::Closed(i), &inner).unwrap();
            let lhs = lift_phi_tilde(&a, &ins).unwrap();
            let rhs = lift_phi_tilde(&a, &y1).unwrap().insert(i, &lift_phi_tilde(&a, &inner).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}
