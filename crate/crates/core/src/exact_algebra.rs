//! Exact rationals, truncated noncommutative series and sparse exact linear algebra.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"p"` or a plain integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational `{s}`"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub type Word = Vec<usize>;

/// Truncated series in noncommuting variables `0..alphabet`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NCSeries {
    alphabet: usize,
    degree: usize,
    terms: BTreeMap<Word, Rational>,
}

impl NCSeries {
    pub fn zero(alphabet: usize, degree: usize) -> Self {
        NCSeries { alphabet, degree, terms: BTreeMap::new() }
    }

    pub fn one(alphabet: usize, degree: usize) -> Self {
        Self::scalar(alphabet, degree, Rational::one())
    }

    pub fn scalar(alphabet: usize, degree: usize, c: Rational) -> Self {
        let mut s = Self::zero(alphabet, degree);
        s.add_term(Vec::new(), c);
        s
    }

    pub fn generator(alphabet: usize, degree: usize, i: usize) -> Self {
        assert!(i < alphabet, "generator {i} outside alphabet {alphabet}");
        let mut s = Self::zero(alphabet, degree);
        s.add_term(vec![i], Rational::one());
        s
    }

    pub fn from_terms(
        alphabet: usize,
        degree: usize,
        terms: impl IntoIterator<Item = (Word, Rational)>,
    ) -> Result<Self> {
        let mut s = Self::zero(alphabet, degree);
        for (w, c) in terms {
            if let Some(&bad) = w.iter().find(|&&l| l >= alphabet) {
                return Err(Error::OutOfRange { index: bad, max: alphabet.saturating_sub(1) });
            }
            s.add_term(w, c);
        }
        Ok(s)
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Word, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coef(&self, w: &[usize]) -> Rational {
        self.terms.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant(&self) -> Rational {
        self.coef(&[])
    }

    /// Adds `c·w`; words longer than the truncation degree are dropped.
    pub fn add_term(&mut self, w: Word, c: Rational) {
        if w.len() > self.degree || c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn truncate(&self, degree: usize) -> Self {
        let mut s = Self::zero(self.alphabet, degree);
        for (w, c) in &self.terms {
            s.add_term(w.clone(), c.clone());
        }
        s
    }

    /// Homogeneous part of the given degree.
    pub fn part(&self, d: usize) -> Self {
        let mut s = Self::zero(self.alphabet, self.degree);
        for (w, c) in self.terms.iter().filter(|(w, _)| w.len() == d) {
            s.add_term(w.clone(), c.clone());
        }
        s
    }

    fn check_alphabet(&self, other: &Self) -> Result<()> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch(self.alphabet, other.alphabet));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_alphabet(other)?;
        let mut s = self.truncate(self.degree.min(other.degree));
        for (w, c) in &other.terms {
            s.add_term(w.clone(), c.clone());
        }
        Ok(s)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut s = Self::zero(self.alphabet, self.degree);
        for (w, x) in &self.terms {
            s.add_term(w.clone(), x * c);
        }
        s
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        series_mul(self, other, self.degree.min(other.degree))
    }

    /// Applies a letter substitution `i ↦ images[i]` as an algebra map.
    pub fn substitute(&self, images: &[NCSeries], alphabet: usize, degree: usize) -> Result<Self> {
        let mut out = Self::zero(alphabet, degree);
        for (w, c) in &self.terms {
            let mut acc = Self::scalar(alphabet, degree, c.clone());
            for &l in w {
                acc = series_mul(&acc, &images[l], degree)?;
                if acc.is_zero() {
                    break;
                }
            }
            out = out.add(&acc)?;
        }
        Ok(out)
    }

    /// Inverse of a series with invertible constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c = self.constant();
        if c.is_zero() {
            return Err(Error::IllFormed("series without constant term is not invertible".into()));
        }
        let cinv = c.recip();
        let mut x = self.scale(&cinv);
        x.add_term(Vec::new(), -Rational::one());
        // (1 + x)^{-1} = Σ (-x)^k
        let minus_x = x.scale(&-Rational::one());
        let mut total = Self::one(self.alphabet, self.degree);
        let mut power = Self::one(self.alphabet, self.degree);
        for _ in 0..self.degree {
            power = power.mul(&minus_x)?;
            total = total.add(&power)?;
        }
        Ok(total.scale(&cinv))
    }

    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            alphabet: self.alphabet,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(w, c)| TermJson { coef: format_rational(c), word: w.clone() })
                .collect(),
        }
    }

    pub fn from_json(j: &SeriesJson) -> Result<Self> {
        let terms = j
            .terms
            .iter()
            .map(|t| Ok((t.word.clone(), parse_rational(&t.coef)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(j.alphabet, j.degree, terms)
    }
}

impl fmt::Display for NCSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, c) in &self.terms {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let word = w.iter().map(|l| format!("g{l}")).collect::<Vec<_>>().join("*");
            match (w.is_empty(), a.is_one()) {
                (true, _) => write!(f, "{}", format_rational(&a))?,
                (false, true) => write!(f, "{word}")?,
                (false, false) => write!(f, "{}*{word}", format_rational(&a))?,
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coef: String,
    pub word: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub alphabet: usize,
    pub degree: usize,
    pub terms: Vec<TermJson>,
}

/// Product truncated at `n`.
pub fn series_mul(a: &NCSeries, b: &NCSeries, n: usize) -> Result<NCSeries> {
    a.check_alphabet(b)?;
    let n = n.min(a.degree).min(b.degree);
    let mut out = NCSeries::zero(a.alphabet, n);
    for (u, cu) in &a.terms {
        if u.len() > n {
            continue;
        }
        for (v, cv) in &b.terms {
            if u.len() + v.len() > n {
                continue;
            }
            let mut w = u.clone();
            w.extend_from_slice(v);
            out.add_term(w, cu * cv);
        }
    }
    Ok(out)
}

/// `Σ_{k=0..n} x^k / k!` for `x` without constant term.
pub fn series_exp(x: &NCSeries, n: usize) -> Result<NCSeries> {
    if !x.constant().is_zero() {
        return Err(Error::NonzeroConstant);
    }
    let x = x.truncate(n.min(x.degree));
    let n = x.degree;
    let mut total = NCSeries::one(x.alphabet, n);
    let mut power = NCSeries::one(x.alphabet, n);
    for k in 1..=n {
        power = series_mul(&power, &x, n)?.scale(&int(k as i64).recip());
        if power.is_zero() {
            break;
        }
        total = total.add(&power)?;
    }
    Ok(total)
}

pub type SparseVec = BTreeMap<usize, Rational>;

/// Which column becomes the pivot of a new row.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PivotRule {
    Smallest,
    Largest,
}

/// Sparse reduced row echelon form, grown one vector at a time.
#[derive(Clone, Debug)]
pub struct Echelon {
    rule: PivotRule,
    rows: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new(rule: PivotRule) -> Self {
        Echelon { rule, rows: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &BTreeMap<usize, SparseVec> {
        &self.rows
    }

    pub fn pivots(&self) -> impl Iterator<Item = &usize> {
        self.rows.keys()
    }

    /// Remainder of `v` modulo the row space; no pivot column survives.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut v = v.clone();
        let hits: Vec<usize> = v.keys().filter(|k| self.rows.contains_key(k)).copied().collect();
        for p in hits {
            if let Some(c) = v.get(&p).cloned() {
                axpy(&mut v, &-c, &self.rows[&p]);
            }
        }
        v
    }

    /// Adds `v` to the row space; returns whether the rank grew.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let r = self.reduce(v);
        let pivot = match self.rule {
            PivotRule::Smallest => r.keys().next().copied(),
            PivotRule::Largest => r.keys().next_back().copied(),
        };
        let Some(p) = pivot else { return false };
        let inv = r[&p].recip();
        let r: SparseVec = r.into_iter().map(|(k, c)| (k, c * &inv)).collect();
        for row in self.rows.values_mut() {
            if let Some(c) = row.get(&p).cloned() {
                axpy(row, &-c, &r);
            }
        }
        self.rows.insert(p, r);
        true
    }
}

fn axpy(v: &mut SparseVec, a: &Rational, w: &SparseVec) {
    for (k, c) in w {
        let e = v.entry(*k).or_insert_with(Rational::zero);
        *e += a * c;
        if e.is_zero() {
            v.remove(k);
        }
    }
}

/// Rows `Σ a_j x_j = b` over columns `0..num_columns`.
#[derive(Clone, Debug, Default)]
pub struct LinearSystem {
    pub num_columns: usize,
    pub rows: Vec<(SparseVec, Rational)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Consistent { particular: Vec<Rational>, nullspace: Vec<Vec<Rational>> },
    Inconsistent,
}

impl Solution {
    pub fn particular(&self) -> Option<&[Rational]> {
        match self {
            Solution::Consistent { particular, .. } => Some(particular),
            Solution::Inconsistent => None,
        }
    }
}

impl LinearSystem {
    pub fn new(num_columns: usize) -> Self {
        LinearSystem { num_columns, rows: Vec::new() }
    }

    pub fn push(&mut self, coefs: SparseVec, rhs: Rational) {
        debug_assert!(coefs.keys().all(|&k| k < self.num_columns));
        self.rows.push((coefs, rhs));
    }

    /// Residual `Σ a_j x_j − b` of each row.
    pub fn residuals(&self, x: &[Rational]) -> Vec<Rational> {
        self.rows
            .iter()
            .map(|(a, b)| a.iter().map(|(j, c)| c * &x[*j]).fold(-b.clone(), |s, t| s + t))
            .collect()
    }
}

/// Exact Gauss–Jordan solve. Free coordinates of the particular solution are zero.
pub fn solve_exact(sys: &LinearSystem) -> Solution {
    let n = sys.num_columns;
    let mut ech = Echelon::new(PivotRule::Smallest);
    for (a, b) in &sys.rows {
        let mut v = a.clone();
        if !b.is_zero() {
            v.insert(n, b.clone());
        }
        ech.insert(&v);
    }
    if ech.rows.contains_key(&n) {
        return Solution::Inconsistent;
    }
    let mut particular = vec![Rational::zero(); n];
    for (p, row) in &ech.rows {
        particular[*p] = row.get(&n).cloned().unwrap_or_else(Rational::zero);
    }
    let nullspace = (0..n)
        .filter(|j| !ech.rows.contains_key(j))
        .map(|f| {
            let mut v = vec![Rational::zero(); n];
            v[f] = Rational::one();
            for (p, row) in &ech.rows {
                if let Some(c) = row.get(&f) {
                    v[*p] = -c.clone();
                }
            }
            v
        })
        .collect();
    Solution::Consistent { particular, nullspace }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn t(alphabet: usize, n: usize) -> NCSeries {
        NCSeries::generator(alphabet, n, 0)
    }

    #[test]
    fn telescoping_product() {
        let one = NCSeries::one(1, 2);
        let a = one.add(&t(1, 2)).unwrap();
        let b = one.sub(&t(1, 2)).unwrap();
        let p = series_mul(&a, &b, 2).unwrap();
        let expected = NCSeries::from_terms(1, 2, [(vec![], int(1)), (vec![0, 0], int(-1))]).unwrap();
        assert_eq!(p, expected);
    }

    #[test]
    fn product_is_noncommutative() {
        let a = NCSeries::generator(2, 2, 0);
        let b = NCSeries::generator(2, 2, 1);
        assert_ne!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        assert_eq!(a.mul(&b).unwrap().coef(&[0, 1]), int(1));
    }

    #[test]
    fn alphabet_mismatch_is_an_error() {
        let a = NCSeries::one(2, 2);
        let b = NCSeries::one(3, 2);
        assert_eq!(series_mul(&a, &b, 2), Err(Error::AlphabetMismatch(2, 3)));
    }

    #[test]
    fn exp_taylor_coefficients() {
        assert_eq!(series_exp(&NCSeries::zero(1, 3), 3).unwrap(), NCSeries::one(1, 3));
        let e = series_exp(&t(1, 2), 2).unwrap();
        let expected = NCSeries::from_terms(
            1,
            2,
            [(vec![], int(1)), (vec![0], int(1)), (vec![0, 0], rat(1, 2))],
        )
        .unwrap();
        assert_eq!(e, expected);
        assert_eq!(series_exp(&NCSeries::one(1, 2), 2), Err(Error::NonzeroConstant));
    }

    #[test]
    fn exp_times_exp_of_negative_is_one() {
        let x = t(1, 4);
        let p = series_mul(&series_exp(&x, 4).unwrap(), &series_exp(&x.scale(&int(-1)), 4).unwrap(), 4);
        assert_eq!(p.unwrap(), NCSeries::one(1, 4));
    }

    #[test]
    fn inverse_of_one_plus_x() {
        let x = NCSeries::one(2, 3).add(&NCSeries::generator(2, 3, 1)).unwrap();
        assert_eq!(x.mul(&x.inverse().unwrap()).unwrap(), NCSeries::one(2, 3));
    }

    #[test]
    fn small_systems() {
        let mut sys = LinearSystem::new(2);
        sys.push([(0, int(1)), (1, int(1))].into(), int(2));
        sys.push([(0, int(1)), (1, int(-1))].into(), int(0));
        assert_eq!(
            solve_exact(&sys),
            Solution::Consistent { particular: vec![int(1), int(1)], nullspace: vec![] }
        );

        let mut sys = LinearSystem::new(2);
        sys.push([(0, int(1)), (1, int(1))].into(), int(1));
        let Solution::Consistent { particular, nullspace } = solve_exact(&sys) else { panic!() };
        assert_eq!(nullspace.len(), 1);
        assert!(sys.residuals(&particular).iter().all(Zero::is_zero));
        assert!(sys.residuals(&nullspace[0]).iter().all(|r| *r == int(-1)));

        let mut sys = LinearSystem::new(1);
        sys.push([(0, int(1))].into(), int(1));
        sys.push([(0, int(2))].into(), int(3));
        assert_eq!(solve_exact(&sys), Solution::Inconsistent);
    }

    #[test]
    fn random_square_system_has_zero_residual() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 20;
        let mut sys = LinearSystem::new(n);
        // unit lower times unit upper triangular: invertible by construction
        let mut l = vec![vec![0i64; n]; n];
        let mut u = vec![vec![0i64; n]; n];
        for i in 0..n {
            l[i][i] = 1;
            u[i][i] = 1;
            for j in 0..i {
                l[i][j] = rng.gen_range(-3..=3);
            }
            for j in i + 1..n {
                u[i][j] = rng.gen_range(-3..=3);
            }
        }
        for i in 0..n {
            let mut row = SparseVec::new();
            for j in 0..n {
                let a: i64 = (0..n).map(|k| l[i][k] * u[k][j]).sum();
                if a != 0 {
                    row.insert(j, int(a));
                }
            }
            sys.push(row, int(rng.gen_range(-10..=10)));
        }
        let Solution::Consistent { particular, nullspace } = solve_exact(&sys) else { panic!() };
        assert!(nullspace.is_empty());
        assert!(sys.residuals(&particular).iter().all(Zero::is_zero));
    }

    #[test]
    fn rational_text_round_trip() {
        for s in ["0", "-3", "1/24", "-7/2"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert!(parse_rational("1/0").is_err());
    }
}
