//! Bicolored magma trees (objects of the parenthesized operads), their grafting with unit
//! reduction, the map to shuffle objects, and exhaustive enumeration.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::braid_engine::Permutation;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Color {
    Closed,
    Open,
}

/// Element of the free two-colored operad on `µ_c`, `µ_o`, `f`, with units.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tree {
    /// Closed input `x_i`.
    X(usize),
    /// Open input `y_j`.
    Y(usize),
    UnitC,
    UnitO,
    Mc(Box<Tree>, Box<Tree>),
    Mo(Box<Tree>, Box<Tree>),
    F(Box<Tree>),
}

/// Parenthesized permutation: a closed-colored tree.
pub type MagmaTree = Tree;

/// Which input to substitute into.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Slot {
    Closed(usize),
    Open(usize),
}

pub fn mc(a: Tree, b: Tree) -> Tree {
    Tree::Mc(Box::new(a), Box::new(b))
}

pub fn mo(a: Tree, b: Tree) -> Tree {
    Tree::Mo(Box::new(a), Box::new(b))
}

pub fn f(a: Tree) -> Tree {
    Tree::F(Box::new(a))
}

pub fn x(i: usize) -> Tree {
    Tree::X(i)
}

pub fn y(j: usize) -> Tree {
    Tree::Y(j)
}

/// Left comb `µ(µ(µ(l1,l2),l3),…)` over closed labels; the unit when empty.
pub fn left_comb_closed(labels: &[usize]) -> Tree {
    labels.iter().map(|&i| x(i)).reduce(mc).unwrap_or(Tree::UnitC)
}

/// Left comb over open labels; the unit when empty.
pub fn left_comb_open(labels: &[usize]) -> Tree {
    labels.iter().map(|&j| y(j)).reduce(mo).unwrap_or(Tree::UnitO)
}

impl Tree {
    pub fn color(&self) -> Color {
        match self {
            Tree::X(_) | Tree::UnitC | Tree::Mc(..) => Color::Closed,
            _ => Color::Open,
        }
    }

    /// Closed labels, left to right.
    pub fn closed_labels(&self) -> Vec<usize> {
        let mut v = Vec::new();
        self.walk(&mut |t| {
            if let Tree::X(i) = t {
                v.push(*i)
            }
        });
        v
    }

    /// Open labels, left to right.
    pub fn open_labels(&self) -> Vec<usize> {
        let mut v = Vec::new();
        self.walk(&mut |t| {
            if let Tree::Y(j) = t {
                v.push(*j)
            }
        });
        v
    }

    /// `(n, m)`: open and closed input counts.
    pub fn arity(&self) -> (usize, usize) {
        (self.open_labels().len(), self.closed_labels().len())
    }

    fn walk(&self, visit: &mut impl FnMut(&Tree)) {
        visit(self);
        match self {
            Tree::Mc(a, b) | Tree::Mo(a, b) => {
                a.walk(visit);
                b.walk(visit);
            }
            Tree::F(a) => a.walk(visit),
            _ => {}
        }
    }

    pub fn has_units(&self) -> bool {
        let mut found = false;
        self.walk(&mut |t| found |= matches!(t, Tree::UnitC | Tree::UnitO));
        found
    }

    /// Color discipline and label bijectivity.
    pub fn validate(&self) -> Result<()> {
        self.check_colors()?;
        for (labels, what) in [(self.closed_labels(), "closed"), (self.open_labels(), "open")] {
            let mut sorted = labels.clone();
            sorted.sort_unstable();
            if sorted.iter().enumerate().any(|(k, &l)| l != k + 1) {
                return Err(Error::IllFormed(format!("{what} labels {labels:?} are not 1..n")));
            }
        }
        Ok(())
    }

    fn check_colors(&self) -> Result<()> {
        let want = |t: &Tree, c: Color| {
            if t.color() == c {
                t.check_colors()
            } else {
                Err(Error::ColorMismatch(format!("{t} under {self}")))
            }
        };
        match self {
            Tree::Mc(a, b) => want(a, Color::Closed).and(want(b, Color::Closed)),
            Tree::Mo(a, b) => want(a, Color::Open).and(want(b, Color::Open)),
            Tree::F(a) => want(a, Color::Closed),
            _ => Ok(()),
        }
    }

    /// Relabels inputs: `x_i ↦ x_{closed(i)}`, `y_j ↦ y_{open(j)}`.
    pub fn relabel(&self, closed: &dyn Fn(usize) -> usize, open: &dyn Fn(usize) -> usize) -> Tree {
        match self {
            Tree::X(i) => Tree::X(closed(*i)),
            Tree::Y(j) => Tree::Y(open(*j)),
            Tree::Mc(a, b) => mc(a.relabel(closed, open), b.relabel(closed, open)),
            Tree::Mo(a, b) => mo(a.relabel(closed, open), b.relabel(closed, open)),
            Tree::F(a) => f(a.relabel(closed, open)),
            t => t.clone(),
        }
    }

    /// Relabels by permutations acting on labels.
    pub fn act(&self, closed: &Permutation, open: &Permutation) -> Tree {
        self.relabel(&|i| closed.apply(i), &|j| open.apply(j))
    }

    pub fn children(&self) -> Vec<&Tree> {
        match self {
            Tree::Mc(a, b) | Tree::Mo(a, b) => vec![a, b],
            Tree::F(a) => vec![a],
            _ => vec![],
        }
    }

    pub fn subtree(&self, path: &[usize]) -> Option<&Tree> {
        match path.split_first() {
            None => Some(self),
            Some((&k, rest)) => self.children().get(k).and_then(|c| c.subtree(rest)),
        }
    }

    /// Replaces the subtree at `path`.
    pub fn replace(&self, path: &[usize], new: Tree) -> Tree {
        match path.split_first() {
            None => new,
            Some((&k, rest)) => match self {
                Tree::Mc(a, b) if k == 0 => mc(a.replace(rest, new), (**b).clone()),
                Tree::Mc(a, b) => mc((**a).clone(), b.replace(rest, new)),
                Tree::Mo(a, b) if k == 0 => mo(a.replace(rest, new), (**b).clone()),
                Tree::Mo(a, b) => mo((**a).clone(), b.replace(rest, new)),
                Tree::F(a) => f(a.replace(rest, new)),
                t => panic!("no child {k} in {t}"),
            },
        }
    }

    /// Unit normal form: `µ(*, T) → T`, `µ(T, *) → T`, `f(*_c) → *_o`.
    pub fn normalize_units(&self) -> Tree {
        match self {
            Tree::Mc(a, b) => match (a.normalize_units(), b.normalize_units()) {
                (Tree::UnitC, t) | (t, Tree::UnitC) => t,
                (a, b) => mc(a, b),
            },
            Tree::Mo(a, b) => match (a.normalize_units(), b.normalize_units()) {
                (Tree::UnitO, t) | (t, Tree::UnitO) => t,
                (a, b) => mo(a, b),
            },
            Tree::F(a) => match a.normalize_units() {
                Tree::UnitC => Tree::UnitO,
                a => f(a),
            },
            t => t.clone(),
        }
    }

    /// Performs one unit rewrite at a redex chosen by `pick` among all redexes.
    pub fn unit_step(&self, pick: &mut dyn FnMut(usize) -> usize) -> Option<Tree> {
        let mut redexes = Vec::new();
        collect_redexes(self, &mut Vec::new(), &mut redexes);
        if redexes.is_empty() {
            return None;
        }
        let path = &redexes[pick(redexes.len())];
        let t = self.subtree(path).unwrap();
        let rewritten = match t {
            Tree::Mc(a, b) | Tree::Mo(a, b) => {
                if matches!(**a, Tree::UnitC | Tree::UnitO) {
                    (**b).clone()
                } else {
                    (**a).clone()
                }
            }
            Tree::F(_) => Tree::UnitO,
            _ => unreachable!(),
        };
        Some(self.replace(path, rewritten))
    }

    pub fn parse(text: &str) -> Result<Tree> {
        let mut p = Parser { s: text.as_bytes(), i: 0 };
        let t = p.tree()?;
        p.ws();
        if p.i != p.s.len() {
            return Err(Error::Parse(format!("trailing input in `{text}`")));
        }
        t.check_colors()?;
        Ok(t)
    }
}

fn collect_redexes(t: &Tree, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let is_redex = match t {
        Tree::Mc(a, b) => matches!(**a, Tree::UnitC) || matches!(**b, Tree::UnitC),
        Tree::Mo(a, b) => matches!(**a, Tree::UnitO) || matches!(**b, Tree::UnitO),
        Tree::F(a) => matches!(**a, Tree::UnitC),
        _ => false,
    };
    if is_redex {
        out.push(path.clone());
    }
    for (k, c) in t.children().into_iter().enumerate() {
        path.push(k);
        collect_redexes(c, path, out);
        path.pop();
    }
}

struct Parser<'a> {
    s: &'a [u8],
    i: usize,
}

impl Parser<'_> {
    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn eat(&mut self, c: u8) -> Result<()> {
        self.ws();
        if self.s.get(self.i) == Some(&c) {
            self.i += 1;
            Ok(())
        } else {
            Err(Error::Parse(format!("expected `{}` at offset {}", c as char, self.i)))
        }
    }

    fn ident(&mut self) -> String {
        self.ws();
        let start = self.i;
        while self.i < self.s.len() && (self.s[self.i].is_ascii_alphanumeric() || self.s[self.i] == b'*') {
            self.i += 1;
        }
        String::from_utf8_lossy(&self.s[start..self.i]).into_owned()
    }

    fn tree(&mut self) -> Result<Tree> {
        let id = self.ident();
        let label = |rest: &str| -> Result<usize> {
            match rest.parse::<usize>() {
                Ok(l) if l > 0 => Ok(l),
                _ => Err(Error::Parse(format!("bad label `{id}`"))),
            }
        };
        match id.as_str() {
            "mc" | "mo" => {
                self.eat(b'(')?;
                let a = self.tree()?;
                self.eat(b',')?;
                let b = self.tree()?;
                self.eat(b')')?;
                Ok(if id == "mc" { mc(a, b) } else { mo(a, b) })
            }
            "f" => {
                self.eat(b'(')?;
                let a = self.tree()?;
                self.eat(b')')?;
                Ok(f(a))
            }
            "*c" => Ok(Tree::UnitC),
            "*o" => Ok(Tree::UnitO),
            s if s.starts_with('x') => Ok(Tree::X(label(&s[1..])?)),
            s if s.starts_with('y') => Ok(Tree::Y(label(&s[1..])?)),
            _ => Err(Error::Parse(format!("unknown tree symbol `{id}`"))),
        }
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tree::X(i) => write!(fm, "x{i}"),
            Tree::Y(j) => write!(fm, "y{j}"),
            Tree::UnitC => write!(fm, "*c"),
            Tree::UnitO => write!(fm, "*o"),
            Tree::Mc(a, b) => write!(fm, "mc({a},{b})"),
            Tree::Mo(a, b) => write!(fm, "mo({a},{b})"),
            Tree::F(a) => write!(fm, "f({a})"),
        }
    }
}

impl Serialize for Tree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Tree {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Tree::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Label shifts of a partial composition `outer ∘_slot inner`.
///
/// Closed slot `i`: inner closed labels move to `i..i+k-1`, later outer closed labels shift by `k-1`.
/// Open slot `j`: inner open labels move to `j..j+n'-1`, later outer open labels shift by `n'-1`,
/// inner closed labels are placed after all outer closed labels.
#[derive(Clone, Copy, Debug)]
pub struct Shifts {
    pub slot: Slot,
    pub outer: (usize, usize),
    pub inner: (usize, usize),
}

impl Shifts {
    pub fn outer_closed(&self, i: usize) -> usize {
        match self.slot {
            Slot::Closed(s) if i > s => i + self.inner.1 - 1,
            _ => i,
        }
    }
    pub fn outer_open(&self, j: usize) -> usize {
        match self.slot {
            Slot::Open(s) if j > s => j + self.inner.0 - 1,
            _ => j,
        }
    }
    pub fn inner_closed(&self, i: usize) -> usize {
        match self.slot {
            Slot::Closed(s) => i + s - 1,
            Slot::Open(_) => i + self.outer.1,
        }
    }
    pub fn inner_open(&self, j: usize) -> usize {
        match self.slot {
            Slot::Open(s) => j + s - 1,
            Slot::Closed(_) => j,
        }
    }
    pub fn result_arity(&self) -> (usize, usize) {
        match self.slot {
            Slot::Closed(_) => (self.outer.0, self.outer.1 + self.inner.1 - 1),
            Slot::Open(_) => (self.outer.0 + self.inner.0 - 1, self.outer.1 + self.inner.1),
        }
    }
}

pub fn check_slot(slot: Slot, arity: (usize, usize)) -> Result<()> {
    let (idx, max) = match slot {
        Slot::Closed(i) => (i, arity.1),
        Slot::Open(j) => (j, arity.0),
    };
    if idx == 0 || idx > max {
        return Err(Error::OutOfRange { index: idx, max });
    }
    Ok(())
}

/// Substitutes `inner` for the input `slot` of `outer`, relabels, and reduces units.
pub fn graft(outer: &Tree, slot: Slot, inner: &Tree) -> Result<Tree> {
    check_slot(slot, outer.arity())?;
    let want = match slot {
        Slot::Closed(_) => Color::Closed,
        Slot::Open(_) => Color::Open,
    };
    if inner.color() != want {
        return Err(Error::ColorMismatch(format!("cannot graft {inner} into {slot:?}")));
    }
    let sh = Shifts { slot, outer: outer.arity(), inner: inner.arity() };
    let inner = inner.relabel(&|i| sh.inner_closed(i), &|j| sh.inner_open(j));
    Ok(substitute(outer, slot, &inner, &sh).normalize_units())
}

fn substitute(t: &Tree, slot: Slot, inner: &Tree, sh: &Shifts) -> Tree {
    match t {
        Tree::X(i) if slot == Slot::Closed(*i) => inner.clone(),
        Tree::Y(j) if slot == Slot::Open(*j) => inner.clone(),
        Tree::X(i) => Tree::X(sh.outer_closed(*i)),
        Tree::Y(j) => Tree::Y(sh.outer_open(*j)),
        Tree::Mc(a, b) => mc(substitute(a, slot, inner, sh), substitute(b, slot, inner, sh)),
        Tree::Mo(a, b) => mo(substitute(a, slot, inner, sh), substitute(b, slot, inner, sh)),
        Tree::F(a) => f(substitute(a, slot, inner, sh)),
        u => u.clone(),
    }
}

/// A point of a configuration: terrestrial (on the boundary) or aerial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    T(usize),
    A(usize),
}

/// Interleaving of labeled terrestrial and aerial points, read left to right.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "ShuffleJson", into = "ShuffleJson")]
pub struct ShuffleObject {
    points: Vec<Point>,
}

#[derive(Serialize, Deserialize)]
struct ShuffleJson {
    pattern: String,
    terrestrial: Vec<usize>,
    aerial: Vec<usize>,
}

impl TryFrom<ShuffleJson> for ShuffleObject {
    type Error = Error;
    fn try_from(j: ShuffleJson) -> Result<Self> {
        let (mut t, mut a) = (j.terrestrial.iter(), j.aerial.iter());
        let mut points = Vec::new();
        for c in j.pattern.chars() {
            let p = match c {
                'T' => t.next().map(|&l| Point::T(l)),
                'A' => a.next().map(|&l| Point::A(l)),
                _ => return Err(Error::Parse(format!("bad pattern letter `{c}`"))),
            };
            points.push(p.ok_or_else(|| Error::Parse("pattern longer than labels".into()))?);
        }
        if t.next().is_some() || a.next().is_some() {
            return Err(Error::Parse("pattern shorter than labels".into()));
        }
        ShuffleObject::new(points)
    }
}

impl From<ShuffleObject> for ShuffleJson {
    fn from(s: ShuffleObject) -> Self {
        ShuffleJson { pattern: s.pattern(), terrestrial: s.terrestrial_labels(), aerial: s.aerial_labels() }
    }
}

impl ShuffleObject {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        let s = ShuffleObject { points };
        Permutation::new(s.terrestrial_labels())?;
        Permutation::new(s.aerial_labels())?;
        Ok(s)
    }

    pub fn from_parts(pattern: &str, terrestrial: &[usize], aerial: &[usize]) -> Result<Self> {
        ShuffleJson { pattern: pattern.into(), terrestrial: terrestrial.to_vec(), aerial: aerial.to_vec() }
            .try_into()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn pattern(&self) -> String {
        self.points.iter().map(|p| if matches!(p, Point::T(_)) { 'T' } else { 'A' }).collect()
    }

    pub fn terrestrial_labels(&self) -> Vec<usize> {
        self.points.iter().filter_map(|p| if let Point::T(l) = p { Some(*l) } else { None }).collect()
    }

    pub fn aerial_labels(&self) -> Vec<usize> {
        self.points.iter().filter_map(|p| if let Point::A(l) = p { Some(*l) } else { None }).collect()
    }

    pub fn arity(&self) -> (usize, usize) {
        let n = self.points.iter().filter(|p| matches!(p, Point::T(_))).count();
        (n, self.points.len() - n)
    }

    /// 1-based position of aerial label `i` among the aerial points.
    pub fn aerial_position(&self, i: usize) -> Option<usize> {
        self.aerial_labels().iter().position(|&l| l == i).map(|p| p + 1)
    }

    /// Same labels, all terrestrial points moved to the left.
    pub fn terrestrial_left(&self) -> ShuffleObject {
        let mut points: Vec<Point> = self.points.iter().filter(|p| matches!(p, Point::T(_))).copied().collect();
        points.extend(self.points.iter().filter(|p| matches!(p, Point::A(_))));
        ShuffleObject { points }
    }

    pub fn relabel(&self, closed: &dyn Fn(usize) -> usize, open: &dyn Fn(usize) -> usize) -> ShuffleObject {
        ShuffleObject {
            points: self
                .points
                .iter()
                .map(|p| match p {
                    Point::T(l) => Point::T(open(*l)),
                    Point::A(l) => Point::A(closed(*l)),
                })
                .collect(),
        }
    }

    /// Replaces the point named by `slot` with the points of `inner`.
    pub fn insert(&self, slot: Slot, inner: &ShuffleObject) -> Result<ShuffleObject> {
        check_slot(slot, self.arity())?;
        if matches!(slot, Slot::Closed(_)) && inner.arity().0 != 0 {
            return Err(Error::ColorMismatch("closed insertion of an object with terrestrial points".into()));
        }
        let sh = Shifts { slot, outer: self.arity(), inner: inner.arity() };
        let inner = inner.relabel(&|i| sh.inner_closed(i), &|j| sh.inner_open(j));
        let mut points = Vec::new();
        for p in &self.points {
            match (*p, slot) {
                (Point::A(i), Slot::Closed(s)) if i == s => points.extend_from_slice(&inner.points),
                (Point::T(j), Slot::Open(s)) if j == s => points.extend_from_slice(&inner.points),
                (Point::A(i), _) => points.push(Point::A(sh.outer_closed(i))),
                (Point::T(j), _) => points.push(Point::T(sh.outer_open(j))),
            }
        }
        Ok(ShuffleObject { points })
    }
}

impl fmt::Display for ShuffleObject {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .points
            .iter()
            .map(|p| match p {
                Point::T(l) => format!("T{l}"),
                Point::A(l) => format!("A{l}"),
            })
            .collect();
        write!(fm, "[{}]", parts.join(" "))
    }
}

/// Forgets parenthesization, keeping the left-to-right pattern and labels.
pub fn omega_map(t: &Tree) -> ShuffleObject {
    let mut points = Vec::new();
    t.walk(&mut |s| match s {
        Tree::X(i) => points.push(Point::A(*i)),
        Tree::Y(j) => points.push(Point::T(*j)),
        _ => {}
    });
    ShuffleObject { points }
}

/// Erases `f` and turns `µ_o` into `µ_c`; requires no open inputs.
pub fn forget_parenthesization_u(t: &Tree) -> Result<Tree> {
    match t {
        Tree::Y(j) => Err(Error::ColorMismatch(format!("open input y{j} present"))),
        Tree::UnitO | Tree::UnitC => Ok(Tree::UnitC),
        Tree::X(i) => Ok(Tree::X(*i)),
        Tree::F(a) => forget_parenthesization_u(a),
        Tree::Mc(a, b) | Tree::Mo(a, b) => {
            Ok(mc(forget_parenthesization_u(a)?, forget_parenthesization_u(b)?).normalize_units())
        }
    }
}

/// Replaces every open input by `*_o` and reduces.
pub fn close_open_inputs(t: &Tree) -> Tree {
    t.map_open_leaves(&|_| Tree::UnitO).normalize_units()
}

impl Tree {
    fn map_open_leaves(&self, g: &dyn Fn(usize) -> Tree) -> Tree {
        match self {
            Tree::Y(j) => g(*j),
            Tree::Mc(a, b) => mc(a.map_open_leaves(g), b.map_open_leaves(g)),
            Tree::Mo(a, b) => mo(a.map_open_leaves(g), b.map_open_leaves(g)),
            Tree::F(a) => f(a.map_open_leaves(g)),
            t => t.clone(),
        }
    }
}

fn submasks(mask: u32) -> impl Iterator<Item = u32> {
    let mut s = mask;
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let cur = s;
        if s == 0 {
            done = true;
        } else {
            s = (s - 1) & mask;
        }
        Some(cur)
    })
}

fn closed_trees(mask: u32) -> Vec<Tree> {
    if mask.count_ones() == 1 {
        return vec![Tree::X(mask.trailing_zeros() as usize + 1)];
    }
    let mut out = Vec::new();
    for a in submasks(mask).filter(|&a| a != 0 && a != mask) {
        for l in closed_trees(a) {
            for r in closed_trees(mask & !a) {
                out.push(mc(l.clone(), r));
            }
        }
    }
    out
}

fn open_trees(ys: u32, xs: u32) -> Vec<Tree> {
    let mut out = Vec::new();
    if ys == 0 && xs != 0 {
        out.extend(closed_trees(xs).into_iter().map(f));
    }
    if ys.count_ones() == 1 && xs == 0 {
        out.push(Tree::Y(ys.trailing_zeros() as usize + 1));
    }
    if ys.count_ones() + xs.count_ones() >= 2 {
        for ya in submasks(ys) {
            for xa in submasks(xs) {
                let (yb, xb) = (ys & !ya, xs & !xa);
                if (ya == 0 && xa == 0) || (yb == 0 && xb == 0) {
                    continue;
                }
                for l in open_trees(ya, xa) {
                    for r in open_trees(yb, xb) {
                        out.push(mo(l.clone(), r));
                    }
                }
            }
        }
    }
    out
}

/// All open-colored normal-form trees of arity `(n, m)`, sorted.
pub fn enumerate(n: usize, m: usize, with_units: bool) -> Vec<Tree> {
    let mut out = if n + m == 0 {
        if with_units {
            vec![Tree::UnitO]
        } else {
            vec![]
        }
    } else {
        open_trees((1u32 << n) - 1, (1u32 << m) - 1)
    };
    out.sort();
    out
}

/// All closed-colored normal-form trees of arity `m`, sorted.
pub fn enumerate_closed(m: usize, with_units: bool) -> Vec<Tree> {
    let mut out = if m == 0 {
        if with_units {
            vec![Tree::UnitC]
        } else {
            vec![]
        }
    } else {
        closed_trees((1u32 << m) - 1)
    };
    out.sort();
    out
}

/// Uniformly random permutation of `1..=n` as a label list.
pub fn random_labels(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (1..=n).collect();
    for i in (1..n).rev() {
        v.swap(i, rng.gen_range(0..=i));
    }
    v
}

/// Random closed tree whose leaves read `labels` left to right.
pub fn random_closed_tree(rng: &mut impl Rng, labels: &[usize]) -> Tree {
    match labels.len() {
        0 => Tree::UnitC,
        1 => Tree::X(labels[0]),
        k => {
            let cut = rng.gen_range(1..k);
            mc(random_closed_tree(rng, &labels[..cut]), random_closed_tree(rng, &labels[cut..]))
        }
    }
}

/// Random open tree built only from `µ_o` and open inputs reading `labels`.
pub fn random_open_tree(rng: &mut impl Rng, labels: &[usize]) -> Tree {
    match labels.len() {
        0 => Tree::UnitO,
        1 => Tree::Y(labels[0]),
        k => {
            let cut = rng.gen_range(1..k);
            mo(random_open_tree(rng, &labels[..cut]), random_open_tree(rng, &labels[cut..]))
        }
    }
}

/// Random open tree with the given left-to-right point sequence.
pub fn random_bitree(rng: &mut impl Rng, points: &[Point]) -> Tree {
    if points.is_empty() {
        return Tree::UnitO;
    }
    if points.len() == 1 {
        return match points[0] {
            Point::T(j) => Tree::Y(j),
            Point::A(i) => f(Tree::X(i)),
        };
    }
    let all_aerial = points.iter().all(|p| matches!(p, Point::A(_)));
    if all_aerial && rng.gen_bool(0.5) {
        let labels: Vec<usize> = points.iter().map(|p| if let Point::A(i) = p { *i } else { 0 }).collect();
        return f(random_closed_tree(rng, &labels));
    }
    let cut = rng.gen_range(1..points.len());
    mo(random_bitree(rng, &points[..cut]), random_bitree(rng, &points[cut..]))
}

/// Random open tree `µ` with terrestrial order `ys` such that closing the open inputs and
/// forgetting gives exactly `closed` (a closed tree, or `*_c`).
pub fn random_bitree_over(rng: &mut impl Rng, closed: &Tree, ys: &[usize]) -> Tree {
    if matches!(closed, Tree::UnitC) {
        return random_open_tree(rng, ys);
    }
    if ys.is_empty() {
        return match closed {
            Tree::Mc(a, b) if rng.gen_bool(0.5) => {
                mo(random_bitree_over(rng, a, &[]), random_bitree_over(rng, b, &[]))
            }
            t => f(t.clone()),
        };
    }
    let cut = rng.gen_range(0..=ys.len());
    let (l, r) = ys.split_at(cut);
    match closed {
        Tree::Mc(a, b) if rng.gen_bool(0.5) => mo(random_bitree_over(rng, a, l), random_bitree_over(rng, b, r)),
        _ if !l.is_empty() && (r.is_empty() || rng.gen_bool(0.5)) => {
            mo(random_open_tree(rng, l), random_bitree_over(rng, closed, r))
        }
        _ if !r.is_empty() => mo(random_bitree_over(rng, closed, l), random_open_tree(rng, r)),
        _ => mo(random_open_tree(rng, ys), f(closed.clone())),
    }
}
