//! Braid words, the Artin action on free groups, permutations, cabling and strand deletion.
//!
//! `σ_i` takes the strand at position `i` over the strand at position `i+1`.
//! Words are read left to right, top to bottom.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation of `{1..n}`; `images[i-1]` is the image of `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;
    fn try_from(images: Vec<usize>) -> Result<Self> {
        Permutation::new(images)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.images
    }
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i == 0 || i > n || seen[i - 1] {
                return Err(Error::IllFormed(format!("{images:?} is not a permutation")));
            }
            seen[i - 1] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { images: (1..=n).collect() }
    }

    pub fn transposition(n: usize, i: usize) -> Self {
        let mut p = Self::identity(n);
        p.images.swap(i - 1, i);
        p
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(k, &i)| i == k + 1)
    }

    /// `self` first, then `other`: `i ↦ other(self(i))`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len());
        Permutation { images: self.images.iter().map(|&i| other.apply(i)).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.len()];
        for (k, &i) in self.images.iter().enumerate() {
            images[i - 1] = k + 1;
        }
        Permutation { images }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images.iter().map(|i| i.to_string()).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// Word in the Artin generators of `B_n`; `k > 0` is `σ_k`, `k < 0` is `σ_{|k|}⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "BraidJson", into = "BraidJson")]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct BraidJson {
    strands: usize,
    word: Vec<i64>,
}

impl TryFrom<BraidJson> for BraidWord {
    type Error = Error;
    fn try_from(j: BraidJson) -> Result<Self> {
        BraidWord::new(j.strands, j.word)
    }
}

impl From<BraidWord> for BraidJson {
    fn from(b: BraidWord) -> Self {
        BraidJson { strands: b.strands, word: b.letters }
    }
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i64>) -> Result<Self> {
        for &l in &letters {
            if l == 0 || l.unsigned_abs() as usize >= strands {
                return Err(Error::BadLetter(l));
            }
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn identity(strands: usize) -> Self {
        BraidWord { strands, letters: Vec::new() }
    }

    pub fn sigma(strands: usize, i: i64) -> Result<Self> {
        Self::new(strands, vec![i])
    }

    /// Parses `"s1 S2 s1"`; lowercase is positive, uppercase inverse.
    pub fn parse(text: &str, strands: usize) -> Result<Self> {
        let mut letters = Vec::new();
        for tok in text.split(|c: char| c.is_whitespace() || c == ',' || c == '.') {
            if tok.is_empty() || tok == "e" || tok == "1" {
                continue;
            }
            let (sign, rest) = match tok.split_at(1) {
                ("s", r) => (1, r),
                ("S", r) => (-1, r),
                _ => return Err(Error::Parse(format!("bad braid letter `{tok}`"))),
            };
            let i: i64 = rest.parse().map_err(|_| Error::Parse(format!("bad braid letter `{tok}`")))?;
            letters.push(sign * i);
        }
        Self::new(strands, letters)
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i64] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &BraidWord) -> Result<BraidWord> {
        if self.strands != other.strands {
            return Err(Error::StrandMismatch(self.strands, other.strands));
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(BraidWord { strands: self.strands, letters })
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord { strands: self.strands, letters: self.letters.iter().rev().map(|l| -l).collect() }
    }

    /// Same word on `strands + offset + extra` strands, indices moved up by `offset`.
    pub fn shifted(&self, offset: usize, strands: usize) -> BraidWord {
        assert!(self.strands + offset <= strands || self.letters.is_empty());
        BraidWord {
            strands,
            letters: self.letters.iter().map(|l| l + l.signum() * offset as i64).collect(),
        }
    }

    /// Final position of the strand starting at `pos`.
    pub fn track(&self, pos: usize) -> usize {
        let mut p = pos;
        for &l in &self.letters {
            let i = l.unsigned_abs() as usize;
            if p == i {
                p = i + 1;
            } else if p == i + 1 {
                p = i;
            }
        }
        p
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|&l| if l > 0 { format!("s{l}") } else { format!("S{}", -l) })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Freely reduced word in `x_1..x_n`; `k > 0` is `x_k`, `k < 0` is `x_{|k|}⁻¹`.
pub type FreeGroupWord = Vec<i64>;

pub fn free_reduce(w: &[i64]) -> FreeGroupWord {
    let mut out: Vec<i64> = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

fn invert_word(w: &[i64]) -> Vec<i64> {
    w.iter().rev().map(|l| -l).collect()
}

fn substitute(w: &[i64], images: &[FreeGroupWord]) -> FreeGroupWord {
    let mut out = Vec::new();
    for &l in w {
        let img = &images[l.unsigned_abs() as usize - 1];
        if l > 0 {
            out.extend_from_slice(img);
        } else {
            out.extend(invert_word(img));
        }
    }
    free_reduce(&out)
}

/// Images of `x_1..x_n` under the automorphism of the braid word.
fn generator_images(b: &BraidWord) -> Vec<FreeGroupWord> {
    let n = b.strands as i64;
    let mut images: Vec<FreeGroupWord> = (1..=n).map(|i| vec![i]).collect();
    for &l in &b.letters {
        let i = l.abs();
        let sub: Vec<FreeGroupWord> = (1..=n)
            .map(|k| match (l > 0, k == i, k == i + 1) {
                (true, true, _) => vec![i, i + 1, -i],
                (true, _, true) => vec![i],
                (false, true, _) => vec![i + 1],
                (false, _, true) => vec![-(i + 1), i, i + 1],
                _ => vec![k],
            })
            .collect();
        for img in images.iter_mut() {
            *img = substitute(img, &sub);
        }
    }
    images
}

/// Action of the braid on a free-group word over `x_1..x_strands`.
pub fn artin_action(b: &BraidWord, w: &[i64]) -> Result<FreeGroupWord> {
    if let Some(&l) = w.iter().find(|l| l.unsigned_abs() as usize > b.strands || **l == 0) {
        return Err(Error::OutOfRange { index: l.unsigned_abs() as usize, max: b.strands });
    }
    Ok(substitute(w, &generator_images(b)))
}

/// Decides equality in `B_n` through faithfulness of the Artin action.
pub fn braids_equal(a: &BraidWord, b: &BraidWord) -> Result<bool> {
    let c = a.concat(&b.inverse())?;
    Ok(generator_images(&c).iter().enumerate().all(|(k, img)| img == &vec![k as i64 + 1]))
}

/// `images[p]` is the final position of the strand starting at `p`.
pub fn underlying_permutation(b: &BraidWord) -> Permutation {
    let mut at: Vec<usize> = (1..=b.strands).collect(); // at[pos-1] = strand now at pos
    for &l in &b.letters {
        let i = l.unsigned_abs() as usize;
        at.swap(i - 1, i);
    }
    let mut images = vec![0; b.strands];
    for (pos, &s) in at.iter().enumerate() {
        images[s - 1] = pos + 1;
    }
    Permutation { images }
}

/// Replaces the strand starting at `pos` by `width` parallel strands.
pub fn cable(b: &BraidWord, pos: usize, width: usize) -> Result<BraidWord> {
    if pos == 0 || pos > b.strands {
        return Err(Error::OutOfRange { index: pos, max: b.strands });
    }
    let k = width as i64;
    let mut p = pos as i64;
    let mut letters = Vec::new();
    let shift = |j: i64, p: i64| if j > p { j + k - 1 } else { j };
    for &l in &b.letters {
        let i = l.abs();
        let s = l.signum();
        if i == p {
            // cabled strand at i crosses the strand at i+1
            letters.extend((0..k).rev().map(|t| s * (i + t)));
            p = i + 1;
        } else if i + 1 == p {
            letters.extend((0..k).map(|t| s * (i + t)));
            p = i;
        } else {
            letters.push(s * shift(i, p));
        }
    }
    BraidWord::new(b.strands + width - 1, letters)
}

/// Removes the strand starting at `pos` together with all its crossings.
pub fn delete_strand(b: &BraidWord, pos: usize) -> Result<BraidWord> {
    cable(b, pos, 0)
}
