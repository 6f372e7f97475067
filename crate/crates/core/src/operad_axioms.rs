//! Generic checks of the two-colored operad axioms, shared by every model in the crate.
//!
//! Elements carry an arity `(n, m)`: `n` open inputs and `m` closed inputs. Each check computes
//! the label bijection predicted by the partial-composition shifts and compares the two sides
//! after relabeling.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::trees_magma::{Shifts, Slot};

pub trait PartialOperad {
    type El: Clone + std::fmt::Debug;

    fn arity(&self, e: &Self::El) -> (usize, usize);
    /// Whether `e` may fill a closed slot.
    fn closed_output(&self, e: &Self::El) -> bool;
    fn insert(&self, outer: &Self::El, slot: Slot, inner: &Self::El) -> Result<Self::El>;
    fn relabel(&self, e: &Self::El, closed: &dyn Fn(usize) -> usize, open: &dyn Fn(usize) -> usize) -> Self::El;
    fn equal(&self, a: &Self::El, b: &Self::El) -> bool;
    /// Identity operation of the given color, if the model has one.
    fn unit(&self, closed: bool) -> Option<Self::El>;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Lab {
    Closed(usize),
    Open(usize),
}

fn labels(arity: (usize, usize)) -> Vec<Lab> {
    (1..=arity.0).map(Lab::Open).chain((1..=arity.1).map(Lab::Closed)).collect()
}

fn is_slot(l: Lab, s: Slot) -> bool {
    matches!((l, s), (Lab::Closed(a), Slot::Closed(b)) | (Lab::Open(a), Slot::Open(b)) if a == b)
}

fn outer(sh: &Shifts, l: Lab) -> Lab {
    match l {
        Lab::Closed(i) => Lab::Closed(sh.outer_closed(i)),
        Lab::Open(j) => Lab::Open(sh.outer_open(j)),
    }
}

fn inner(sh: &Shifts, l: Lab) -> Lab {
    match l {
        Lab::Closed(i) => Lab::Closed(sh.inner_closed(i)),
        Lab::Open(j) => Lab::Open(sh.inner_open(j)),
    }
}

fn slot_of(l: Lab) -> Slot {
    match l {
        Lab::Closed(i) => Slot::Closed(i),
        Lab::Open(j) => Slot::Open(j),
    }
}

fn lab_of(s: Slot) -> Lab {
    match s {
        Slot::Closed(i) => Lab::Closed(i),
        Slot::Open(j) => Lab::Open(j),
    }
}

/// Relabels `x` by the bijection `from[k] ↦ to[k]` and compares with `y`.
fn matches_after<O: PartialOperad>(op: &O, x: &O::El, y: &O::El, pairs: &[(Lab, Lab)]) -> bool {
    let mut closed = BTreeMap::new();
    let mut open = BTreeMap::new();
    for &(a, b) in pairs {
        match (a, b) {
            (Lab::Closed(a), Lab::Closed(b)) => closed.insert(a, b),
            (Lab::Open(a), Lab::Open(b)) => open.insert(a, b),
            _ => return false,
        };
    }
    if op.arity(x) != op.arity(y) {
        return false;
    }
    let r = op.relabel(x, &|i| closed.get(&i).copied().unwrap_or(i), &|j| open.get(&j).copied().unwrap_or(j));
    op.equal(&r, y)
}

fn sh<O: PartialOperad>(op: &O, slot: Slot, a: &O::El, b: &O::El) -> Shifts {
    Shifts { slot, outer: op.arity(a), inner: op.arity(b) }
}

/// `(a ∘_s b) ∘_t c = a ∘_s (b ∘_t c)` for a slot `t` of `b`.
pub fn sequential<O: PartialOperad>(op: &O, a: &O::El, s: Slot, b: &O::El, t: Slot, c: &O::El) -> Result<bool> {
    let ab = op.insert(a, s, b)?;
    let s1 = sh(op, s, a, b);
    let t1 = slot_of(inner(&s1, lab_of(t)));
    let lhs = op.insert(&ab, t1, c)?;
    let s2 = sh(op, t1, &ab, c);

    let bc = op.insert(b, t, c)?;
    let s3 = sh(op, t, b, c);
    let rhs = op.insert(a, s, &bc)?;
    let s4 = sh(op, s, a, &bc);

    let mut pairs = Vec::new();
    for l in labels(op.arity(a)).into_iter().filter(|&l| !is_slot(l, s)) {
        pairs.push((outer(&s2, outer(&s1, l)), outer(&s4, l)));
    }
    for l in labels(op.arity(b)).into_iter().filter(|&l| !is_slot(l, t)) {
        pairs.push((outer(&s2, inner(&s1, l)), inner(&s4, outer(&s3, l))));
    }
    for l in labels(op.arity(c)) {
        pairs.push((inner(&s2, l), inner(&s4, inner(&s3, l))));
    }
    Ok(matches_after(op, &lhs, &rhs, &pairs))
}

/// `(a ∘_s b) ∘_{s2} c` agrees with `(a ∘_{s2} c) ∘_s b` up to the induced relabeling.
pub fn parallel<O: PartialOperad>(op: &O, a: &O::El, s: Slot, b: &O::El, s2: Slot, c: &O::El) -> Result<bool> {
    let s1 = sh(op, s, a, b);
    let ab = op.insert(a, s, b)?;
    let t = slot_of(outer(&s1, lab_of(s2)));
    let r1 = op.insert(&ab, t, c)?;
    let st = sh(op, t, &ab, c);

    let s2h = sh(op, s2, a, c);
    let ac = op.insert(a, s2, c)?;
    let u = slot_of(outer(&s2h, lab_of(s)));
    let r2 = op.insert(&ac, u, b)?;
    let su = sh(op, u, &ac, b);

    let mut pairs = Vec::new();
    for l in labels(op.arity(a)).into_iter().filter(|&l| !is_slot(l, s) && !is_slot(l, s2)) {
        pairs.push((outer(&st, outer(&s1, l)), outer(&su, outer(&s2h, l))));
    }
    for l in labels(op.arity(b)) {
        pairs.push((outer(&st, inner(&s1, l)), inner(&su, l)));
    }
    for l in labels(op.arity(c)) {
        pairs.push((inner(&st, l), outer(&su, inner(&s2h, l))));
    }
    Ok(matches_after(op, &r1, &r2, &pairs))
}

/// `(a·σ) ∘_{σ(s)} (b·τ) = (a ∘_s b)·(σ ∘_s τ)` for label permutations given as image lists.
pub fn equivariance<O: PartialOperad>(
    op: &O,
    a: &O::El,
    s: Slot,
    b: &O::El,
    sigma: (&[usize], &[usize]),
    tau: (&[usize], &[usize]),
) -> Result<bool> {
    let act = |p: &[usize], l: usize| p[l - 1];
    let move_lab = |(c, o): (&[usize], &[usize]), l: Lab| match l {
        Lab::Closed(i) => Lab::Closed(act(c, i)),
        Lab::Open(j) => Lab::Open(act(o, j)),
    };
    let r = op.insert(a, s, b)?;
    let sr = sh(op, s, a, b);
    let a2 = op.relabel(a, &|i| act(sigma.0, i), &|j| act(sigma.1, j));
    let b2 = op.relabel(b, &|i| act(tau.0, i), &|j| act(tau.1, j));
    let s2 = slot_of(move_lab(sigma, lab_of(s)));
    let r2 = op.insert(&a2, s2, &b2)?;
    let sr2 = sh(op, s2, &a2, &b2);
    let mut pairs = Vec::new();
    for l in labels(op.arity(a)).into_iter().filter(|&l| !is_slot(l, s)) {
        pairs.push((outer(&sr, l), outer(&sr2, move_lab(sigma, l))));
    }
    for l in labels(op.arity(b)) {
        pairs.push((inner(&sr, l), inner(&sr2, move_lab(tau, l))));
    }
    Ok(matches_after(op, &r, &r2, &pairs))
}

/// `a ∘_s 1 = a` for every slot, and `1 ∘_1 a = a`.
pub fn unitality<O: PartialOperad>(op: &O, a: &O::El) -> Result<bool> {
    let (n, m) = op.arity(a);
    let slots = (1..=n).map(Slot::Open).chain((1..=m).map(Slot::Closed));
    for s in slots {
        let Some(u) = op.unit(matches!(s, Slot::Closed(_))) else { continue };
        if !op.equal(&op.insert(a, s, &u)?, a) {
            return Ok(false);
        }
    }
    let closed = op.closed_output(a);
    if let Some(u) = op.unit(closed) {
        let s = if closed { Slot::Closed(1) } else { Slot::Open(1) };
        if !op.equal(&op.insert(&u, s, a)?, a) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All slots of `e` that `inner` may fill.
pub fn slots_for<O: PartialOperad>(op: &O, e: &O::El, inner: &O::El) -> Vec<Slot> {
    let (n, m) = op.arity(e);
    if op.closed_output(inner) {
        (1..=m).map(Slot::Closed).collect()
    } else {
        (1..=n).map(Slot::Open).collect()
    }
}
