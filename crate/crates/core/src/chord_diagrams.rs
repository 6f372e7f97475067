//! Truncated Drinfeld–Kohno algebras: normal forms modulo the infinitesimal braid relations,
//! coproduct and grouplike test, doubling insertion, restriction, and the chord-diagram
//! operad with its parenthesized pullback.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use once_cell::sync::Lazy;
use parking_lot::RwLock;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_algebra::{format_rational, parse_rational, series_exp, Echelon, NCSeries, PivotRule, Rational, SparseVec, Word};
use crate::operad_axioms::PartialOperad;
use crate::trees_magma::{graft, Color, Slot, Tree};

/// Number of generators `t_ij` on `r` strands.
pub fn num_generators(r: usize) -> usize {
    r * r.saturating_sub(1) / 2
}

/// Letter of `t_ij`, pairs ordered lexicographically; `t_ji = t_ij`.
pub fn pair_index(r: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    assert!(1 <= i && i < j && j <= r, "bad chord t{i}{j} on {r} strands");
    (1..i).map(|a| r - a).sum::<usize>() + (j - i - 1)
}

pub fn pair_of(r: usize, idx: usize) -> (usize, usize) {
    let mut k = idx;
    for i in 1..r {
        if k < r - i {
            return (i, i + 1 + k);
        }
        k -= r - i;
    }
    panic!("letter {idx} outside the {r}-strand alphabet")
}

fn word_index(w: &[usize], g: usize) -> usize {
    w.iter().fold(0, |acc, &l| acc * g + l)
}

fn index_word(mut idx: usize, g: usize, d: usize) -> Word {
    let mut w = vec![0; d];
    for k in (0..d).rev() {
        w[k] = idx % g;
        idx /= g;
    }
    w
}

/// Degree-2 relators `[t_ij, t_kl]` (disjoint) and `[t_ik, t_ij + t_jk]`, as maps word → coefficient.
pub fn relations(r: usize) -> Vec<BTreeMap<Word, Rational>> {
    let p = |i, j| pair_index(r, i, j);
    let comm = |a: &[usize], b: &[usize]| {
        let mut m: BTreeMap<Word, Rational> = BTreeMap::new();
        for &x in a {
            for &y in b {
                *m.entry(vec![x, y]).or_insert_with(Rational::zero) += Rational::one();
                *m.entry(vec![y, x]).or_insert_with(Rational::zero) -= Rational::one();
            }
        }
        m.retain(|_, c| !c.is_zero());
        m
    };
    let mut out = Vec::new();
    for i in 1..=r {
        for j in i + 1..=r {
            for k in 1..=r {
                for l in k + 1..=r {
                    if [k, l].iter().all(|s| *s != i && *s != j) && (i, j) < (k, l) {
                        out.push(comm(&[p(i, j)], &[p(k, l)]));
                    }
                }
            }
        }
    }
    for i in 1..=r {
        for j in 1..=r {
            for k in 1..=r {
                if i != j && j != k && i != k && i < k {
                    out.push(comm(&[p(i, k)], &[p(i, j), p(j, k)]));
                }
            }
        }
    }
    out
}

type Basis = Arc<Echelon>;

static IDEAL_CACHE: Lazy<RwLock<HashMap<(usize, usize), Basis>>> = Lazy::new(Default::default);

fn compute_ideal(r: usize, d: usize) -> Echelon {
    let g = num_generators(r);
    let mut ech = Echelon::new(PivotRule::Largest);
    if d < 2 || g == 0 {
        return ech;
    }
    let rels = relations(r);
    let total = g.pow((d - 2) as u32);
    for left_len in 0..=d - 2 {
        let right_len = d - 2 - left_len;
        for uv in 0..total {
            let u = index_word(uv / g.pow(right_len as u32), g, left_len);
            let v = index_word(uv % g.pow(right_len as u32), g, right_len);
            for rel in &rels {
                let row: SparseVec = rel
                    .iter()
                    .map(|(w, c)| (word_index(&[u.as_slice(), w, &v].concat(), g), c.clone()))
                    .collect();
                ech.insert(&row);
            }
        }
    }
    ech
}

/// Echelon basis of the degree-`d` part of the relation ideal on `r` strands (cached).
pub fn ideal_basis(r: usize, d: usize) -> Basis {
    if let Some(b) = IDEAL_CACHE.read().get(&(r, d)) {
        return b.clone();
    }
    let b = Arc::new(compute_ideal(r, d));
    IDEAL_CACHE.write().entry((r, d)).or_insert(b).clone()
}

/// Same basis, computed without the cache.
pub fn ideal_basis_uncached(r: usize, d: usize) -> Echelon {
    compute_ideal(r, d)
}

/// Dimension of the degree-`d` part of the truncated enveloping algebra on `r` strands.
pub fn dk_dimension(r: usize, d: usize) -> usize {
    num_generators(r).pow(d as u32) - ideal_basis(r, d).rank()
}

/// Unique representative modulo the relation ideal, degree by degree.
pub fn dk_normal_form(s: &NCSeries, r: usize) -> NCSeries {
    let g = num_generators(r);
    assert_eq!(s.alphabet(), g, "series alphabet does not match {r} strands");
    let mut by_degree: BTreeMap<usize, SparseVec> = BTreeMap::new();
    let mut out = NCSeries::zero(g, s.degree());
    for (w, c) in s.terms() {
        if w.len() < 2 {
            out.add_term(w.clone(), c.clone());
        } else {
            by_degree.entry(w.len()).or_default().insert(word_index(w, g), c.clone());
        }
    }
    for (d, v) in by_degree {
        for (idx, c) in ideal_basis(r, d).reduce(&v) {
            out.add_term(index_word(idx, g, d), c);
        }
    }
    out
}

/// Element of the truncated enveloping algebra on `r` strands, kept in normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DKElement {
    r: usize,
    series: NCSeries,
}

impl DKElement {
    pub fn from_series(r: usize, s: &NCSeries) -> Result<Self> {
        if s.alphabet() != num_generators(r) {
            return Err(Error::AlphabetMismatch(s.alphabet(), num_generators(r)));
        }
        Ok(DKElement { r, series: dk_normal_form(s, r) })
    }

    pub fn zero(r: usize, n: usize) -> Self {
        DKElement { r, series: NCSeries::zero(num_generators(r), n) }
    }

    pub fn one(r: usize, n: usize) -> Self {
        DKElement { r, series: NCSeries::one(num_generators(r), n) }
    }

    pub fn scalar(r: usize, n: usize, c: Rational) -> Self {
        DKElement { r, series: NCSeries::scalar(num_generators(r), n, c) }
    }

    /// The chord `t_ij`.
    pub fn t(r: usize, n: usize, i: usize, j: usize) -> Self {
        DKElement { r, series: NCSeries::generator(num_generators(r), n, pair_index(r, i, j)) }
    }

    pub fn strands(&self) -> usize {
        self.r
    }

    pub fn degree(&self) -> usize {
        self.series.degree()
    }

    pub fn series(&self) -> &NCSeries {
        &self.series
    }

    pub fn is_zero(&self) -> bool {
        self.series.is_zero()
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.r != o.r {
            return Err(Error::StrandMismatch(self.r, o.r));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(DKElement { r: self.r, series: self.series.add(&o.series)? })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(DKElement { r: self.r, series: self.series.sub(&o.series)? })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        DKElement { r: self.r, series: self.series.scale(c) }
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Self::from_series(self.r, &self.series.mul(&o.series)?)
    }

    pub fn truncate(&self, n: usize) -> Self {
        DKElement { r: self.r, series: self.series.truncate(n) }
    }

    pub fn part(&self, d: usize) -> Self {
        DKElement { r: self.r, series: self.series.part(d) }
    }

    pub fn exp(&self) -> Result<Self> {
        Self::from_series(self.r, &series_exp(&self.series, self.degree())?)
    }

    pub fn inverse(&self) -> Result<Self> {
        Self::from_series(self.r, &self.series.inverse()?)
    }

    /// Algebra map sending each chord to a combination of chords on `target` strands.
    pub fn map_chords(&self, target: usize, image: &dyn Fn(usize, usize) -> Vec<(usize, usize)>) -> Result<Self> {
        let g2 = num_generators(target);
        let n = self.degree();
        let images: Vec<NCSeries> = (0..num_generators(self.r))
            .map(|idx| {
                let (i, j) = pair_of(self.r, idx);
                let mut s = NCSeries::zero(g2, n);
                for (a, b) in image(i, j) {
                    s.add_term(vec![pair_index(target, a, b)], Rational::one());
                }
                s
            })
            .collect();
        Self::from_series(target, &self.series.substitute(&images, g2, n)?)
    }

    /// Relabels strands: `t_ij ↦ t_{σ(i)σ(j)}`.
    pub fn relabel(&self, sigma: &dyn Fn(usize) -> usize) -> Result<Self> {
        self.map_chords(self.r, &|i, j| vec![(sigma(i), sigma(j))])
    }

    /// The same element on more strands, strand `i` becoming `i + offset`.
    pub fn shift(&self, offset: usize, target: usize) -> Result<Self> {
        self.map_chords(target, &|i, j| vec![(i + offset, j + offset)])
    }

    pub fn to_json(&self) -> DKJson {
        DKJson {
            strands: self.r,
            degree: self.degree(),
            terms: self
                .series
                .terms()
                .iter()
                .map(|(w, c)| DKTermJson {
                    coef: format_rational(c),
                    word: w.iter().map(|&l| {
                        let (i, j) = pair_of(self.r, l);
                        [i, j]
                    }).collect(),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &DKJson) -> Result<Self> {
        let mut s = NCSeries::zero(num_generators(j.strands), j.degree);
        for t in &j.terms {
            let mut w = Vec::new();
            for &[a, b] in &t.word {
                if a == b || a == 0 || b == 0 || a.max(b) > j.strands {
                    return Err(Error::Parse(format!("bad chord t{a}{b}")));
                }
                w.push(pair_index(j.strands, a, b));
            }
            s.add_term(w, parse_rational(&t.coef)?);
        }
        Self::from_series(j.strands, &s)
    }

    /// Parses `"t12*t13 - 1/24*t13*t12 + 1"`; chords may also be written `t(1,2)`.
    pub fn parse(text: &str, r: usize, n: usize) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("{m} in `{text}`"));
        let mut s = NCSeries::zero(num_generators(r), n);
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() || compact == "0" {
            return Ok(DKElement { r, series: s });
        }
        let mut terms = Vec::new();
        let mut cur = String::new();
        let mut depth = 0;
        for c in compact.chars() {
            match c {
                '(' => depth += 1,
                ')' => depth -= 1,
                '+' | '-' if depth == 0 && !cur.is_empty() && !cur.ends_with('*') => {
                    terms.push(std::mem::take(&mut cur));
                }
                _ => {}
            }
            cur.push(c);
        }
        terms.push(cur);
        for term in terms {
            let (sign, body) = match term.strip_prefix('-') {
                Some(b) => (-Rational::one(), b),
                None => (Rational::one(), term.strip_prefix('+').unwrap_or(&term)),
            };
            let mut coef = sign;
            let mut word = Vec::new();
            for factor in body.split('*') {
                if let Some(rest) = factor.strip_prefix('t') {
                    let (a, b) = if let Some(inner) = rest.strip_prefix('(').and_then(|x| x.strip_suffix(')')) {
                        let (a, b) = inner.split_once(',').ok_or_else(|| bad("bad chord"))?;
                        (a.parse().map_err(|_| bad("bad chord"))?, b.parse().map_err(|_| bad("bad chord"))?)
                    } else {
                        let d: Vec<usize> = rest.chars().map(|c| c.to_digit(10).map(|v| v as usize)).collect::<Option<_>>().ok_or_else(|| bad("bad chord"))?;
                        if d.len() != 2 {
                            return Err(bad("bad chord"));
                        }
                        (d[0], d[1])
                    };
                    if a == b || a == 0 || b == 0 || a.max(b) > r {
                        return Err(bad("chord out of range"));
                    }
                    word.push(pair_index(r, a, b));
                } else {
                    coef *= parse_rational(factor)?;
                }
            }
            s.add_term(word, coef);
        }
        Self::from_series(r, &s)
    }
}

impl fmt::Display for DKElement {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.series.is_zero() {
            return write!(fm, "0");
        }
        let chord = |l: usize| {
            let (i, j) = pair_of(self.r, l);
            if j < 10 {
                format!("t{i}{j}")
            } else {
                format!("t({i},{j})")
            }
        };
        let mut first = true;
        for (w, c) in self.series.terms() {
            let neg = c.is_negative();
            let a = c.abs();
            match (first, neg) {
                (true, true) => write!(fm, "-")?,
                (true, false) => {}
                (false, true) => write!(fm, " - ")?,
                (false, false) => write!(fm, " + ")?,
            }
            first = false;
            let word: Vec<String> = w.iter().map(|&l| chord(l)).collect();
            match (w.is_empty(), a.is_one()) {
                (true, _) => write!(fm, "{}", format_rational(&a))?,
                (false, true) => write!(fm, "{}", word.join("*"))?,
                (false, false) => write!(fm, "{}*{}", format_rational(&a), word.join("*"))?,
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DKTermJson {
    pub coef: String,
    pub word: Vec<[usize; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DKJson {
    pub strands: usize,
    pub degree: usize,
    pub terms: Vec<DKTermJson>,
}

/// Element of the truncated tensor square, in normal form on both sides.
pub type TensorSquare = BTreeMap<(Word, Word), Rational>;

fn normalize_tensor(x: TensorSquare, r: usize, n: usize) -> TensorSquare {
    let g = num_generators(r);
    let mut step: TensorSquare = BTreeMap::new();
    let mut by_right: BTreeMap<Word, NCSeries> = BTreeMap::new();
    for ((u, v), c) in x {
        by_right.entry(v).or_insert_with(|| NCSeries::zero(g, n)).add_term(u, c);
    }
    for (v, left) in by_right {
        for (u, c) in dk_normal_form(&left, r).terms() {
            *step.entry((u.clone(), v.clone())).or_insert_with(Rational::zero) += c;
        }
    }
    let mut by_left: BTreeMap<Word, NCSeries> = BTreeMap::new();
    for ((u, v), c) in step {
        by_left.entry(u).or_insert_with(|| NCSeries::zero(g, n)).add_term(v, c);
    }
    let mut out = TensorSquare::new();
    for (u, right) in by_left {
        for (v, c) in dk_normal_form(&right, r).terms() {
            if u.len() + v.len() <= n && !c.is_zero() {
                out.insert((u.clone(), v.clone()), c.clone());
            }
        }
    }
    out
}

/// Coproduct with every chord primitive.
pub fn dk_coproduct(e: &DKElement) -> TensorSquare {
    let mut out = TensorSquare::new();
    for (w, c) in e.series.terms() {
        for mask in 0u32..(1 << w.len()) {
            let (mut a, mut b) = (Vec::new(), Vec::new());
            for (k, &l) in w.iter().enumerate() {
                if mask & (1 << k) != 0 {
                    a.push(l);
                } else {
                    b.push(l);
                }
            }
            *out.entry((a, b)).or_insert_with(Rational::zero) += c;
        }
    }
    out.retain(|_, c| !c.is_zero());
    normalize_tensor(out, e.r, e.degree())
}

/// `g ⊗ g` up to the truncation degree.
pub fn tensor_square(g: &DKElement) -> TensorSquare {
    let n = g.degree();
    let mut sq = TensorSquare::new();
    for (u, a) in g.series.terms() {
        for (v, b) in g.series.terms() {
            if u.len() + v.len() <= n {
                sq.insert((u.clone(), v.clone()), a * b);
            }
        }
    }
    normalize_tensor(sq, g.r, n)
}

/// `Δ(g) = g ⊗ g` up to the truncation degree.
pub fn grouplike_check(g: &DKElement) -> bool {
    dk_coproduct(g) == tensor_square(g)
}

/// Doubling of strand `k` into `s` strands, other strands shifted past the block.
pub fn dk_double(u: &DKElement, k: usize, s: usize) -> Result<DKElement> {
    let r = u.r;
    if k == 0 || k > r {
        return Err(Error::OutOfRange { index: k, max: r });
    }
    let target = r + s - 1;
    let place = |a: usize| if a < k { a } else { a + s - 1 };
    u.map_chords(target, &|i, j| match (i == k, j == k) {
        (false, false) => vec![(place(i), place(j))],
        _ => {
            let other = if i == k { j } else { i };
            (k..k + s).map(|l| (place(other), l)).collect()
        }
    })
}

/// `u ∘_k v = d_k(u) · shift_k(v)`.
pub fn dk_insert(u: &DKElement, k: usize, v: &DKElement) -> Result<DKElement> {
    let s = v.r;
    let d = dk_double(u, k, s)?;
    let n = u.degree().min(v.degree());
    d.truncate(n).mul(&v.shift(k - 1, u.r + s - 1)?.truncate(n))
}

/// Deletes strand `k`: monomials with a chord on it vanish.
pub fn dk_restrict(u: &DKElement, k: usize) -> Result<DKElement> {
    dk_insert(u, k, &DKElement::one(0, u.degree()))
}

/// The truncated chord-diagram operad, unit the empty diagram on one strand.
pub struct ChordOperad {
    pub degree: usize,
}

impl PartialOperad for ChordOperad {
    type El = DKElement;

    fn arity(&self, e: &DKElement) -> (usize, usize) {
        (0, e.r)
    }
    fn closed_output(&self, _: &DKElement) -> bool {
        true
    }
    fn insert(&self, outer: &DKElement, slot: Slot, inner: &DKElement) -> Result<DKElement> {
        match slot {
            Slot::Closed(k) => dk_insert(outer, k, inner),
            Slot::Open(_) => Err(Error::ColorMismatch("chord diagrams have no open inputs".into())),
        }
    }
    fn relabel(&self, e: &DKElement, closed: &dyn Fn(usize) -> usize, _: &dyn Fn(usize) -> usize) -> DKElement {
        e.relabel(closed).expect("relabeling a normal form")
    }
    fn equal(&self, a: &DKElement, b: &DKElement) -> bool {
        a == b
    }
    fn unit(&self, closed: bool) -> Option<DKElement> {
        closed.then(|| DKElement::one(1, self.degree))
    }
}

/// Random element with small integer coefficients and constant term `c0`.
pub fn random_element(rng: &mut impl Rng, r: usize, n: usize, terms: usize, c0: i64) -> DKElement {
    let g = num_generators(r);
    let mut s = NCSeries::scalar(g, n, Rational::from_integer(c0.into()));
    if g > 0 {
        for _ in 0..terms {
            let len = rng.gen_range(1..=n.max(1));
            let w: Word = (0..len).map(|_| rng.gen_range(0..g)).collect();
            s.add_term(w, Rational::from_integer(rng.gen_range(-3i64..=3).into()));
        }
    }
    DKElement::from_series(r, &s).expect("alphabet matches")
}

/// Random grouplike element: a product of exponentials of scaled chords.
pub fn random_grouplike(rng: &mut impl Rng, r: usize, n: usize, factors: usize) -> DKElement {
    let mut g = DKElement::one(r, n);
    if r < 2 {
        return g;
    }
    for _ in 0..factors {
        let i = rng.gen_range(1..r);
        let j = rng.gen_range(i + 1..=r);
        let c = Rational::new(rng.gen_range(-3i64..=3).into(), rng.gen_range(1i64..=3).into());
        let e = DKElement::t(r, n, i, j).scale(&c).exp().unwrap();
        g = g.mul(&e).unwrap();
    }
    g
}

/// Morphism of the parenthesized pullback: any two closed trees of equal arity, and a grouplike.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PaCDMorphism {
    pub src: Tree,
    pub tgt: Tree,
    pub element: DKElement,
}

impl PaCDMorphism {
    pub fn new(src: Tree, tgt: Tree, element: DKElement) -> Result<Self> {
        if src.color() != Color::Closed || tgt.color() != Color::Closed {
            return Err(Error::ColorMismatch("parenthesized chord diagrams use closed trees".into()));
        }
        let m = src.arity().1;
        if tgt.arity().1 != m || element.strands() != m {
            return Err(Error::ObjectMismatch(format!("{src}, {tgt} on {} strands", element.strands())));
        }
        Ok(PaCDMorphism { src, tgt, element })
    }

    pub fn identity(t: &Tree, n: usize) -> Result<Self> {
        Self::new(t.clone(), t.clone(), DKElement::one(t.arity().1, n))
    }

    /// `self`, then `next`: the product in the same order.
    pub fn then(&self, next: &PaCDMorphism) -> Result<Self> {
        if self.tgt != next.src {
            return Err(Error::ObjectMismatch(format!("{} vs {}", self.tgt, next.src)));
        }
        Self::new(self.src.clone(), next.tgt.clone(), self.element.mul(&next.element)?)
    }

    pub fn inverse(&self) -> Result<Self> {
        Self::new(self.tgt.clone(), self.src.clone(), self.element.inverse()?)
    }

    pub fn insert(&self, i: usize, inner: &PaCDMorphism) -> Result<Self> {
        let slot = Slot::Closed(i);
        Self::new(graft(&self.src, slot, &inner.src)?, graft(&self.tgt, slot, &inner.tgt)?, dk_insert(&self.element, i, &inner.element)?)
    }

    pub fn relabel(&self, closed: &dyn Fn(usize) -> usize) -> Result<Self> {
        let id = |j: usize| j;
        Self::new(self.src.relabel(closed, &id), self.tgt.relabel(closed, &id), self.element.relabel(closed)?)
    }
}

/// Randomized checks: ideal ranks against an independent reduction, multiplicativity of
/// doubling, grouplike closure, and the operad axioms.
pub fn axiom_suite(rng: &mut impl Rng, instances: usize, n: usize, max_r: usize) -> crate::report::SuiteReport {
    use crate::operad_axioms::{equivariance, parallel, sequential, unitality};
    use crate::trees_magma::random_labels;
    let op = ChordOperad { degree: n };
    let mut rep = crate::report::SuiteReport::new("chord-diagram operad axioms");
    let el = |rng: &mut _, r| random_element(rng, r, n, 4, 1);
    for _ in 0..instances {
        let ra = rng.gen_range(1..=3usize);
        let rb = rng.gen_range(0..=(max_r + 1 - ra).min(3));
        let a = el(rng, ra);
        let b = el(rng, rb);
        let s = Slot::Closed(rng.gen_range(1..=ra));
        rep.record(unitality(&op, &a).unwrap_or(false), || format!("unit {a}"));
        if rb > 0 && ra + rb <= max_r + 1 {
            let rc = rng.gen_range(0..=(max_r + 2).saturating_sub(ra + rb).min(2));
            let c = el(rng, rc);
            let t = Slot::Closed(rng.gen_range(1..=rb));
            rep.record(sequential(&op, &a, s, &b, t, &c).unwrap_or(false), || format!("seq {a} | {b} | {c}"));
        }
        if ra >= 2 {
            let others: Vec<usize> = (1..=ra).filter(|&k| Slot::Closed(k) != s).collect();
            let s2 = Slot::Closed(others[rng.gen_range(0..others.len())]);
            let rc = rng.gen_range(0..=2usize);
            if ra + rb + rc <= max_r + 2 {
                let c = el(rng, rc);
                rep.record(parallel(&op, &a, s, &b, s2, &c).unwrap_or(false), || format!("par {a} | {b} | {c}"));
            }
        }
        let (sa, sb) = (random_labels(rng, ra), random_labels(rng, rb));
        rep.record(
            equivariance(&op, &a, s, &b, (&sa, &[]), (&sb, &[])).unwrap_or(false),
            || format!("equiv {a} | {b}"),
        );
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::{int, rat};
    use rand::SeedableRng;

    fn el(s: &str, r: usize, n: usize) -> DKElement {
        DKElement::parse(s, r, n).unwrap()
    }

    #[test]
    fn pair_indexing_round_trips() {
        for r in 2..6 {
            for idx in 0..num_generators(r) {
                let (i, j) = pair_of(r, idx);
                assert_eq!(pair_index(r, i, j), idx);
                assert_eq!(pair_index(r, j, i), idx);
            }
        }
        assert_eq!(pair_index(3, 1, 2), 0);
        assert_eq!(pair_index(3, 2, 3), 2);
    }

    #[test]
    fn defining_relations_vanish() {
        assert!(el("t12*t13 + t12*t23 - t13*t12 - t23*t12", 3, 2).is_zero());
        assert!(el("t12*t34 - t34*t12", 4, 2).is_zero());
        assert!(!el("t12*t13 - t13*t12", 3, 2).is_zero());
    }

    /// Independent count: rank of the span of relators, then the central-times-free decomposition.
    #[test]
    fn degree_two_dimension_on_three_strands() {
        assert_eq!(dk_dimension(3, 2), 7);
        // Up(3) = Q[c] ⊗ Free(two generators): dim_d = Σ_{k≤d} 2^k = 2^{d+1} − 1
        for d in 0..=4 {
            assert_eq!(dk_dimension(3, d), (1 << (d + 1)) - 1, "degree {d}");
        }
        // raw reduction of the 9 degree-2 words modulo the relators
        let mut ech = Echelon::new(PivotRule::Smallest);
        for rel in relations(3) {
            ech.insert(&rel.iter().map(|(w, c)| (word_index(w, 3), c.clone())).collect());
        }
        assert_eq!(9 - ech.rank(), 7);
    }

    /// Brute force: span of `u · rel · v` built by series multiplication, reduced with the
    /// opposite pivot rule.
    fn brute_rank(r: usize, d: usize) -> usize {
        let g = num_generators(r);
        let words = |len: usize| (0..g.pow(len as u32)).map(move |i| index_word(i, g, len));
        let mut ech = Echelon::new(PivotRule::Smallest);
        if d < 2 {
            return 0;
        }
        for rel in relations(r) {
            let rel = NCSeries::from_terms(g, d, rel.into_iter()).unwrap();
            for a in 0..=d - 2 {
                for u in words(a) {
                    for v in words(d - 2 - a) {
                        let uu = NCSeries::from_terms(g, d, [(u.clone(), int(1))]).unwrap();
                        let vv = NCSeries::from_terms(g, d, [(v.clone(), int(1))]).unwrap();
                        let p = uu.mul(&rel).unwrap().mul(&vv).unwrap();
                        ech.insert(&p.terms().iter().map(|(w, c)| (word_index(w, g), c.clone())).collect());
                    }
                }
            }
        }
        ech.rank()
    }

    #[test]
    fn ranks_match_brute_force() {
        for r in 2..=4 {
            for d in 0..=4 {
                assert_eq!(ideal_basis(r, d).rank(), brute_rank(r, d), "r={r} d={d}");
            }
        }
        assert_eq!(ideal_basis_uncached(4, 4).rank(), ideal_basis(4, 4).rank());
        assert_eq!(dk_dimension(2, 4), 1);
    }

    #[test]
    fn normal_form_is_idempotent() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let e = random_element(&mut rng, 4, 3, 6, 0);
            assert_eq!(DKElement::from_series(4, e.series()).unwrap(), e);
        }
    }

    #[test]
    fn grouplike_examples() {
        assert!(grouplike_check(&DKElement::one(3, 4)));
        assert!(grouplike_check(&DKElement::t(2, 4, 1, 2).exp().unwrap()));
        let g = DKElement::one(2, 2).add(&DKElement::t(2, 2, 1, 2)).unwrap();
        assert!(!grouplike_check(&g));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let a = random_grouplike(&mut rng, 3, 3, 3);
            let b = random_grouplike(&mut rng, 2, 3, 2);
            assert!(grouplike_check(&a.mul(&random_grouplike(&mut rng, 3, 3, 2)).unwrap()));
            assert!(grouplike_check(&dk_insert(&a, 2, &b).unwrap()));
        }
    }

    #[test]
    fn insertion_examples() {
        let t12 = DKElement::t(2, 3, 1, 2);
        let one2 = DKElement::one(2, 3);
        assert_eq!(dk_insert(&t12, 1, &one2).unwrap(), el("t13 + t23", 3, 3));
        assert_eq!(dk_insert(&t12, 2, &DKElement::one(1, 3)).unwrap(), t12);
        assert!(dk_restrict(&t12, 2).unwrap().is_zero());
        let t3 = DKElement::t(3, 3, 1, 2);
        assert_eq!(dk_restrict(&t3, 3).unwrap(), DKElement::t(2, 3, 1, 2));
        assert!(dk_insert(&t12, 3, &one2).is_err());
    }

    #[test]
    fn doubling_is_multiplicative_and_restriction_inverts_width_one() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let u = random_element(&mut rng, 3, 3, 4, 1);
            let v = random_element(&mut rng, 3, 3, 4, 0);
            let k = rng.gen_range(1..=3);
            let s = rng.gen_range(0..=2);
            let lhs = dk_double(&u.mul(&v).unwrap(), k, s).unwrap();
            let rhs = dk_double(&u, k, s).unwrap().mul(&dk_double(&v, k, s).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
            let fat = dk_double(&u, k, 2).unwrap();
            assert_eq!(dk_restrict(&fat, k + 1).unwrap(), u);
        }
    }

    #[test]
    fn operad_axioms() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        let rep = axiom_suite(&mut rng, 25, 3, 4);
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn text_and_json() {
        let e = el("t12*t13 - 1/24*t13*t12", 3, 3);
        assert_eq!(DKElement::parse(&e.to_string(), 3, 3).unwrap(), e);
        let j = serde_json::to_string(&e.to_json()).unwrap();
        assert_eq!(DKElement::from_json(&serde_json::from_str(&j).unwrap()).unwrap(), e);
        assert!(DKElement::parse("t14", 3, 2).is_err());
        assert_eq!(el("2*t(1,2)", 2, 1).series().coef(&[0]), int(2));
        assert_eq!(el("1/2", 2, 1).series().constant(), rat(1, 2));
    }

    #[test]
    fn pacd_morphisms() {
        let a = Tree::parse("mc(x1,x2)").unwrap();
        let b = Tree::parse("mc(x2,x1)").unwrap();
        let m = PaCDMorphism::new(a.clone(), b.clone(), DKElement::t(2, 3, 1, 2).exp().unwrap()).unwrap();
        let id = PaCDMorphism::identity(&a, 3).unwrap();
        assert_eq!(id.then(&m).unwrap(), m);
        assert_eq!(m.then(&m.inverse().unwrap()).unwrap(), id);
        assert!(grouplike_check(&m.then(&PaCDMorphism::new(b, a, DKElement::t(2, 3, 1, 2).exp().unwrap()).unwrap()).unwrap().element));
    }
}
