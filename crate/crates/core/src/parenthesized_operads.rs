//! Parenthesized permutation-braids: morphisms over magma trees, the named generators,
//! generator words with their evaluation in any model, the coherence diagrams, and the
//! decomposition of an arbitrary morphism into generators.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::braid_engine::{BraidWord, Permutation};
use crate::colored_operads::{copb_insert, random_morphism, shuffle_type_morphism, CoPBMorphism};
use crate::error::{Error, Result};
use crate::trees_magma::{
    f, graft, left_comb_closed, left_comb_open, mc, mo, omega_map, random_bitree, random_closed_tree, x, y,
    Color, Slot, Tree,
};

/// Morphism of PaPB₊: two trees and a morphism between their images in CoPB₊.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PaPBMorphism {
    pub src: Tree,
    pub tgt: Tree,
    pub underlying: CoPBMorphism,
}

impl fmt::Display for PaPBMorphism {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "{} --({})--> {}", self.src, self.underlying.braid, self.tgt)
    }
}

impl PaPBMorphism {
    pub fn new(src: Tree, tgt: Tree, braid: BraidWord) -> Result<Self> {
        let underlying = CoPBMorphism::new(omega_map(&src), omega_map(&tgt), braid)?;
        Self::from_parts(src, tgt, underlying)
    }

    pub fn from_parts(src: Tree, tgt: Tree, underlying: CoPBMorphism) -> Result<Self> {
        src.validate()?;
        tgt.validate()?;
        if src.color() != tgt.color() {
            return Err(Error::ColorMismatch(format!("{src} vs {tgt}")));
        }
        if omega_map(&src) != underlying.src || omega_map(&tgt) != underlying.tgt {
            return Err(Error::ObjectMismatch(format!("trees {src}, {tgt} over {underlying}")));
        }
        Ok(PaPBMorphism { src, tgt, underlying })
    }

    pub fn identity(t: &Tree) -> Result<Self> {
        Self::new(t.clone(), t.clone(), BraidWord::identity(t.arity().1))
    }

    pub fn braid(&self) -> &BraidWord {
        &self.underlying.braid
    }

    pub fn arity(&self) -> (usize, usize) {
        self.src.arity()
    }

    pub fn color(&self) -> Color {
        self.src.color()
    }

    pub fn then(&self, next: &PaPBMorphism) -> Result<Self> {
        if self.tgt != next.src {
            return Err(Error::ObjectMismatch(format!("{} vs {}", self.tgt, next.src)));
        }
        Self::from_parts(self.src.clone(), next.tgt.clone(), self.underlying.then(&next.underlying)?)
    }

    pub fn inverse(&self) -> Self {
        PaPBMorphism { src: self.tgt.clone(), tgt: self.src.clone(), underlying: self.underlying.inverse() }
    }

    pub fn equals(&self, other: &PaPBMorphism) -> bool {
        self.src == other.src && self.tgt == other.tgt && self.underlying.equals(&other.underlying)
    }

    pub fn relabel(&self, closed: &dyn Fn(usize) -> usize, open: &dyn Fn(usize) -> usize) -> Self {
        PaPBMorphism {
            src: self.src.relabel(closed, open),
            tgt: self.tgt.relabel(closed, open),
            underlying: self.underlying.relabel(closed, open),
        }
    }
}

pub fn papb_compose(g: &PaPBMorphism, f: &PaPBMorphism) -> Result<PaPBMorphism> {
    f.then(g)
}

pub fn papb_insert(outer: &PaPBMorphism, slot: Slot, inner: &PaPBMorphism) -> Result<PaPBMorphism> {
    let want = if matches!(slot, Slot::Closed(_)) { Color::Closed } else { Color::Open };
    if inner.color() != want {
        return Err(Error::ColorMismatch(format!("{} into {slot:?}", inner.src)));
    }
    PaPBMorphism::from_parts(
        graft(&outer.src, slot, &inner.src)?,
        graft(&outer.tgt, slot, &inner.tgt)?,
        copb_insert(&outer.underlying, slot, &inner.underlying)?,
    )
}

/// Generating morphisms; the generating objects are `µ_c`, `µ_o` and `f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Generator {
    Tau,
    AlphaC,
    AlphaO,
    P,
    Psi,
}

impl Generator {
    pub const ALL: [Generator; 5] = [Generator::Tau, Generator::AlphaC, Generator::AlphaO, Generator::P, Generator::Psi];

    pub fn name(self) -> &'static str {
        match self {
            Generator::Tau => "tau",
            Generator::AlphaC => "alpha_c",
            Generator::AlphaO => "alpha_o",
            Generator::P => "p",
            Generator::Psi => "psi",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "tau" | "τ" => Generator::Tau,
            "alpha_c" | "α_c" => Generator::AlphaC,
            "alpha_o" | "α_o" => Generator::AlphaO,
            "p" => Generator::P,
            "psi" | "ψ" => Generator::Psi,
            _ => return None,
        })
    }

    pub fn source(self) -> Tree {
        match self {
            Generator::Tau => mc(x(1), x(2)),
            Generator::AlphaC => mc(mc(x(1), x(2)), x(3)),
            Generator::AlphaO => mo(mo(y(1), y(2)), y(3)),
            Generator::P => mo(f(x(1)), f(x(2))),
            Generator::Psi => mo(f(x(1)), y(1)),
        }
    }

    pub fn target(self) -> Tree {
        match self {
            Generator::Tau => mc(x(2), x(1)),
            Generator::AlphaC => mc(x(1), mc(x(2), x(3))),
            Generator::AlphaO => mo(y(1), mo(y(2), y(3))),
            Generator::P => f(mc(x(1), x(2))),
            Generator::Psi => mo(y(1), f(x(1))),
        }
    }

    pub fn color(self) -> Color {
        self.source().color()
    }

    pub fn morphism(self) -> PaPBMorphism {
        let m = self.source().arity().1;
        let braid = match self {
            Generator::Tau => BraidWord::sigma(2, 1).unwrap(),
            _ => BraidWord::identity(m),
        };
        PaPBMorphism::new(self.source(), self.target(), braid).expect("generators are well formed")
    }
}

/// The generating objects `µ_c`, `µ_o`, `f`.
pub fn generating_objects() -> [(&'static str, Tree); 3] {
    [("mu_c", mc(x(1), x(2))), ("mu_o", mo(y(1), y(2))), ("f", f(x(1)))]
}

pub fn generators() -> Vec<(Generator, PaPBMorphism)> {
    Generator::ALL.iter().map(|&g| (g, g.morphism())).collect()
}

/// Expression over the generators: diagrammatic composition, inverses, identities,
/// partial composition (slot color taken from the inner word) and relabeling.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GeneratorWord {
    Gen(Generator),
    Id(Tree),
    Inv(Box<GeneratorWord>),
    Compose(Vec<GeneratorWord>),
    Insert(Box<GeneratorWord>, usize, Box<GeneratorWord>),
    /// New label of old label `l` is `closed[l-1]` (resp. `open[l-1]`).
    Relabel(Box<GeneratorWord>, Vec<usize>, Vec<usize>),
}

impl GeneratorWord {
    pub fn inv(self) -> Self {
        GeneratorWord::Inv(Box::new(self))
    }

    pub fn insert(self, slot: usize, inner: GeneratorWord) -> Self {
        GeneratorWord::Insert(Box::new(self), slot, Box::new(inner))
    }

    pub fn output_color(&self) -> Color {
        match self {
            GeneratorWord::Gen(g) => g.color(),
            GeneratorWord::Id(t) => t.color(),
            GeneratorWord::Inv(w) | GeneratorWord::Relabel(w, ..) | GeneratorWord::Insert(w, ..) => w.output_color(),
            GeneratorWord::Compose(ws) => ws.first().map_or(Color::Open, |w| w.output_color()),
        }
    }

    fn slot(&self, i: usize) -> Slot {
        match self.output_color() {
            Color::Closed => Slot::Closed(i),
            Color::Open => Slot::Open(i),
        }
    }

    /// Source tree, computed without evaluating morphisms.
    pub fn source(&self) -> Result<Tree> {
        self.end(false)
    }

    pub fn target(&self) -> Result<Tree> {
        self.end(true)
    }

    fn end(&self, target: bool) -> Result<Tree> {
        match self {
            GeneratorWord::Gen(g) => Ok(if target { g.target() } else { g.source() }),
            GeneratorWord::Id(t) => Ok(t.clone()),
            GeneratorWord::Inv(w) => w.end(!target),
            GeneratorWord::Compose(ws) => {
                let w = if target { ws.last() } else { ws.first() };
                w.ok_or_else(|| Error::IllFormed("empty composition".into()))?.end(target)
            }
            GeneratorWord::Insert(a, i, b) => graft(&a.end(target)?, b.slot(*i), &b.end(target)?),
            GeneratorWord::Relabel(w, c, o) => Ok(w.end(target)?.relabel(&|l| c[l - 1], &|l| o[l - 1])),
        }
    }

    /// Number of occurrences of `g`, inverted or not.
    pub fn count(&self, g: Generator) -> usize {
        match self {
            GeneratorWord::Gen(h) => usize::from(*h == g),
            GeneratorWord::Id(_) => 0,
            GeneratorWord::Inv(w) | GeneratorWord::Relabel(w, ..) => w.count(g),
            GeneratorWord::Compose(ws) => ws.iter().map(|w| w.count(g)).sum(),
            GeneratorWord::Insert(a, _, b) => a.count(g) + b.count(g),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut p = WordParser { s: text, i: 0 };
        let w = p.word()?;
        p.ws();
        if p.i != text.len() {
            return Err(Error::Parse(format!("trailing input at {} in `{text}`", p.i)));
        }
        Ok(w)
    }
}

impl fmt::Display for GeneratorWord {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[usize]| v.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(",");
        match self {
            GeneratorWord::Gen(g) => write!(fm, "{}", g.name()),
            GeneratorWord::Id(t) => write!(fm, "(id {t})"),
            GeneratorWord::Inv(w) => write!(fm, "(inv {w})"),
            GeneratorWord::Compose(ws) => {
                write!(fm, "(compose")?;
                for w in ws {
                    write!(fm, " {w}")?;
                }
                write!(fm, ")")
            }
            GeneratorWord::Insert(a, i, b) => write!(fm, "(op-insert {a} {i} {b})"),
            GeneratorWord::Relabel(w, c, o) => write!(fm, "(relabel {w} [{}] [{}])", list(c), list(o)),
        }
    }
}

struct WordParser<'a> {
    s: &'a str,
    i: usize,
}

impl WordParser<'_> {
    fn ws(&mut self) {
        while self.rest().starts_with(char::is_whitespace) {
            self.i += self.rest().chars().next().unwrap().len_utf8();
        }
    }

    fn rest(&self) -> &str {
        &self.s[self.i..]
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at offset {} in `{}`", self.i, self.s))
    }

    fn atom(&mut self) -> &str {
        self.ws();
        let start = self.i;
        let len = self.rest().find(|c: char| c.is_whitespace() || c == '(' || c == ')').unwrap_or(self.rest().len());
        self.i += len;
        &self.s[start..self.i]
    }

    fn expect(&mut self, c: char) -> Result<()> {
        self.ws();
        if self.rest().starts_with(c) {
            self.i += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected `{c}`")))
        }
    }

    fn word(&mut self) -> Result<GeneratorWord> {
        self.ws();
        if !self.rest().starts_with('(') {
            let a = self.atom().to_string();
            return Generator::from_name(&a).map(GeneratorWord::Gen).ok_or_else(|| self.err(&format!("unknown generator `{a}`")));
        }
        self.i += 1;
        let head = self.atom().to_string();
        let w = match head.as_str() {
            "id" => GeneratorWord::Id(self.tree()?),
            "inv" => self.word()?.inv(),
            "compose" => {
                let mut ws = Vec::new();
                loop {
                    self.ws();
                    if self.rest().starts_with(')') || self.rest().is_empty() {
                        break;
                    }
                    ws.push(self.word()?);
                }
                if ws.is_empty() {
                    return Err(self.err("empty composition"));
                }
                GeneratorWord::Compose(ws)
            }
            "op-insert" => {
                let a = self.word()?;
                let i = self.atom().parse().map_err(|_| self.err("expected slot number"))?;
                a.insert(i, self.word()?)
            }
            "relabel" => {
                let w = self.word()?;
                let c = self.list()?;
                let o = self.list()?;
                GeneratorWord::Relabel(Box::new(w), c, o)
            }
            h => return Err(self.err(&format!("unknown form `{h}`"))),
        };
        self.expect(')')?;
        Ok(w)
    }

    fn list(&mut self) -> Result<Vec<usize>> {
        self.expect('[')?;
        let end = self.rest().find(']').ok_or_else(|| self.err("unclosed list"))?;
        let body = &self.rest()[..end];
        let v = body
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| t.parse().map_err(|_| self.err("bad label")))
            .collect::<Result<Vec<usize>>>()?;
        self.i += end + 1;
        Ok(v)
    }

    fn tree(&mut self) -> Result<Tree> {
        self.ws();
        let mut depth = 0usize;
        let mut end = self.rest().len();
        for (k, c) in self.rest().char_indices() {
            match c {
                '(' => depth += 1,
                ')' if depth == 0 => {
                    end = k;
                    break;
                }
                ')' => depth -= 1,
                c if c.is_whitespace() && depth == 0 => {
                    end = k;
                    break;
                }
                _ => {}
            }
        }
        let text = self.rest()[..end].to_string();
        self.i += end;
        match generating_objects().into_iter().find(|(n, _)| *n == text) {
            Some((_, t)) => Ok(t),
            None => Tree::parse(&text),
        }
    }
}

/// A target for evaluating generator words.
pub trait GeneratorModel {
    type Mor: Clone;

    fn generator(&self, g: Generator) -> Result<Self::Mor>;
    fn identity(&self, t: &Tree) -> Result<Self::Mor>;
    /// `first`, then `second`.
    fn compose(&self, first: &Self::Mor, second: &Self::Mor) -> Result<Self::Mor>;
    fn inverse(&self, m: &Self::Mor) -> Result<Self::Mor>;
    fn insert(&self, outer: &Self::Mor, slot: Slot, inner: &Self::Mor) -> Result<Self::Mor>;
    fn relabel(&self, m: &Self::Mor, closed: &[usize], open: &[usize]) -> Result<Self::Mor>;
    fn equal(&self, a: &Self::Mor, b: &Self::Mor) -> bool;
}

pub fn evaluate<M: GeneratorModel>(model: &M, w: &GeneratorWord) -> Result<M::Mor> {
    match w {
        GeneratorWord::Gen(g) => model.generator(*g),
        GeneratorWord::Id(t) => model.identity(t),
        GeneratorWord::Inv(v) => model.inverse(&evaluate(model, v)?),
        GeneratorWord::Compose(ws) => {
            let mut acc = evaluate(model, ws.first().ok_or_else(|| Error::IllFormed("empty composition".into()))?)?;
            for v in &ws[1..] {
                acc = model.compose(&acc, &evaluate(model, v)?)?;
            }
            Ok(acc)
        }
        GeneratorWord::Insert(a, i, b) => model.insert(&evaluate(model, a)?, b.slot(*i), &evaluate(model, b)?),
        GeneratorWord::Relabel(v, c, o) => model.relabel(&evaluate(model, v)?, c, o),
    }
}

/// Words evaluated inside PaPB₊ itself.
pub struct PaPBModel;

impl GeneratorModel for PaPBModel {
    type Mor = PaPBMorphism;

    fn generator(&self, g: Generator) -> Result<PaPBMorphism> {
        Ok(g.morphism())
    }
    fn identity(&self, t: &Tree) -> Result<PaPBMorphism> {
        PaPBMorphism::identity(t)
    }
    fn compose(&self, first: &PaPBMorphism, second: &PaPBMorphism) -> Result<PaPBMorphism> {
        first.then(second)
    }
    fn inverse(&self, m: &PaPBMorphism) -> Result<PaPBMorphism> {
        Ok(m.inverse())
    }
    fn insert(&self, outer: &PaPBMorphism, slot: Slot, inner: &PaPBMorphism) -> Result<PaPBMorphism> {
        papb_insert(outer, slot, inner)
    }
    fn relabel(&self, m: &PaPBMorphism, closed: &[usize], open: &[usize]) -> Result<PaPBMorphism> {
        check_perm(closed, m.arity().1)?;
        check_perm(open, m.arity().0)?;
        Ok(m.relabel(&|l| closed[l - 1], &|l| open[l - 1]))
    }
    fn equal(&self, a: &PaPBMorphism, b: &PaPBMorphism) -> bool {
        a.equals(b)
    }
}

pub(crate) fn check_perm(p: &[usize], n: usize) -> Result<()> {
    if p.len() != n {
        return Err(Error::ObjectMismatch(format!("relabeling {p:?} on {n} labels")));
    }
    Permutation::new(p.to_vec()).map(|_| ())
}

/// One generator (or its inverse) applied at the subtree reached by `path`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Step {
    pub path: Vec<usize>,
    pub gen: Generator,
    pub inverse: bool,
}

pub fn step(path: &[usize], gen: Generator, inverse: bool) -> Step {
    Step { path: path.to_vec(), gen, inverse }
}

type Binding = (BTreeMap<usize, Tree>, BTreeMap<usize, Tree>);

fn bind(pattern: &Tree, t: &Tree, b: &mut Binding) -> bool {
    match (pattern, t) {
        (Tree::X(i), s) if s.color() == Color::Closed => b.0.insert(*i, s.clone()).is_none(),
        (Tree::Y(j), s) if s.color() == Color::Open => b.1.insert(*j, s.clone()).is_none(),
        (Tree::Mc(p, q), Tree::Mc(s, u)) | (Tree::Mo(p, q), Tree::Mo(s, u)) => bind(p, s, b) && bind(q, u, b),
        (Tree::F(p), Tree::F(s)) => bind(p, s, b),
        _ => false,
    }
}

fn step_ends(s: &Step) -> (Tree, Tree) {
    if s.inverse {
        (s.gen.target(), s.gen.source())
    } else {
        (s.gen.source(), s.gen.target())
    }
}

fn match_step(t: &Tree, s: &Step) -> Result<(Tree, Binding)> {
    let sub = t.subtree(&s.path).ok_or_else(|| Error::IllFormed(format!("no subtree {:?} in {t}", s.path)))?;
    let (pat, _) = step_ends(s);
    let mut b = Binding::default();
    if !bind(&pat, sub, &mut b) {
        return Err(Error::ObjectMismatch(format!("{} does not apply to {sub}", s.gen.name())));
    }
    Ok((sub.clone(), b))
}

fn substitute(pattern: &Tree, b: &Binding) -> Tree {
    match pattern {
        Tree::X(i) => b.0[i].clone(),
        Tree::Y(j) => b.1[j].clone(),
        Tree::Mc(p, q) => mc(substitute(p, b), substitute(q, b)),
        Tree::Mo(p, q) => mo(substitute(p, b), substitute(q, b)),
        Tree::F(p) => f(substitute(p, b)),
        t => t.clone(),
    }
}

/// Tree reached by applying a step.
pub fn apply_step(t: &Tree, s: &Step) -> Result<Tree> {
    let (_, b) = match_step(t, s)?;
    let (_, out) = step_ends(s);
    Ok(t.replace(&s.path, substitute(&out, &b)))
}

/// Relabels to consecutive labels preserving the relative order of labels.
fn standardize(t: &Tree) -> Tree {
    let rank = |mut v: Vec<usize>| {
        v.sort_unstable();
        v.into_iter().enumerate().map(|(k, l)| (l, k + 1)).collect::<BTreeMap<_, _>>()
    };
    let (c, o) = (rank(t.closed_labels()), rank(t.open_labels()));
    t.relabel(&|i| c[&i], &|j| o[&j])
}

fn is_leaf(t: &Tree) -> bool {
    matches!(t, Tree::X(_) | Tree::Y(_))
}

fn plug(w: GeneratorWord, slot: usize, t: &Tree) -> GeneratorWord {
    if is_leaf(t) {
        w
    } else {
        w.insert(slot, GeneratorWord::Id(standardize(t)))
    }
}

fn wrap(t: &Tree, path: &[usize], inner: GeneratorWord) -> GeneratorWord {
    let Some((&k, rest)) = path.split_first() else { return inner };
    match t {
        Tree::Mc(a, b) | Tree::Mo(a, b) => {
            let node = if matches!(t, Tree::Mc(..)) { mc(x(1), x(2)) } else { mo(y(1), y(2)) };
            let id = GeneratorWord::Id(node);
            if k == 0 {
                plug(id, 2, b).insert(1, wrap(a, rest, inner))
            } else {
                plug(id.insert(2, wrap(b, rest, inner)), 1, a)
            }
        }
        Tree::F(a) => GeneratorWord::Id(f(x(1))).insert(1, wrap(a, rest, inner)),
        _ => inner,
    }
}

fn leaf_pairs(a: &Tree, b: &Tree, c: &mut BTreeMap<usize, usize>, o: &mut BTreeMap<usize, usize>) -> bool {
    match (a, b) {
        (Tree::X(i), Tree::X(k)) => c.insert(*i, *k).is_none(),
        (Tree::Y(i), Tree::Y(k)) => o.insert(*i, *k).is_none(),
        (Tree::Mc(p, q), Tree::Mc(s, u)) | (Tree::Mo(p, q), Tree::Mo(s, u)) => {
            leaf_pairs(p, s, c, o) && leaf_pairs(q, u, c, o)
        }
        (Tree::F(p), Tree::F(s)) => leaf_pairs(p, s, c, o),
        (Tree::UnitC, Tree::UnitC) | (Tree::UnitO, Tree::UnitO) => true,
        _ => false,
    }
}

/// Relabels `w` so that its source becomes exactly `t`.
fn align(w: GeneratorWord, t: &Tree) -> Result<GeneratorWord> {
    let src = w.source()?;
    let (mut c, mut o) = (BTreeMap::new(), BTreeMap::new());
    if !leaf_pairs(&src, t, &mut c, &mut o) {
        return Err(Error::ObjectMismatch(format!("{src} vs {t}")));
    }
    let c: Vec<usize> = c.values().copied().collect();
    let o: Vec<usize> = o.values().copied().collect();
    let ident = |v: &[usize]| v.iter().enumerate().all(|(k, &l)| l == k + 1);
    if ident(&c) && ident(&o) {
        Ok(w)
    } else {
        Ok(GeneratorWord::Relabel(Box::new(w), c, o))
    }
}

/// Word of the morphism applying `s` inside `t`, identity elsewhere; its source is `t`.
pub fn whisker(t: &Tree, s: &Step) -> Result<GeneratorWord> {
    let (_, b) = match_step(t, s)?;
    let mut w = GeneratorWord::Gen(s.gen);
    if s.inverse {
        w = w.inv();
    }
    for (i, sub) in b.0.iter().rev() {
        w = plug(w, *i, sub);
    }
    for (j, sub) in b.1.iter().rev() {
        w = plug(w, *j, sub);
    }
    align(wrap(t, &s.path, w), t)
}

/// Composite word of a sequence of steps from `start`.
pub fn steps_word(start: &Tree, steps: &[Step]) -> Result<GeneratorWord> {
    let mut t = start.clone();
    let mut ws = Vec::new();
    for s in steps {
        ws.push(whisker(&t, s)?);
        t = apply_step(&t, s)?;
    }
    Ok(match ws.len() {
        0 => GeneratorWord::Id(start.clone()),
        1 => ws.pop().unwrap(),
        _ => GeneratorWord::Compose(ws),
    })
}

pub fn steps_end(start: &Tree, steps: &[Step]) -> Result<Tree> {
    steps.iter().try_fold(start.clone(), |t, s| apply_step(&t, s))
}

pub fn invert_steps(steps: &[Step]) -> Vec<Step> {
    steps.iter().rev().map(|s| Step { inverse: !s.inverse, ..s.clone() }).collect()
}

/// A coherence diagram: two step sequences from a common start with a common end.
#[derive(Clone, Debug)]
pub struct CoherenceDiagram {
    pub name: &'static str,
    pub family: &'static str,
    pub start: Tree,
    pub left: Vec<Step>,
    pub right: Vec<Step>,
}

impl CoherenceDiagram {
    pub fn words(&self) -> Result<(GeneratorWord, GeneratorWord)> {
        let (a, b) = (steps_end(&self.start, &self.left)?, steps_end(&self.start, &self.right)?);
        if a != b {
            return Err(Error::IllFormed(format!("{}: paths end at {a} and {b}", self.name)));
        }
        Ok((steps_word(&self.start, &self.left)?, steps_word(&self.start, &self.right)?))
    }

    pub fn check<M: GeneratorModel>(&self, model: &M) -> Result<bool> {
        let (l, r) = self.words()?;
        Ok(model.equal(&evaluate(model, &l)?, &evaluate(model, &r)?))
    }
}

/// The defining relations, grouped into six families.
pub fn coherence_diagrams() -> Vec<CoherenceDiagram> {
    use Generator::*;
    let s = step;
    let root: &[usize] = &[];
    vec![
        CoherenceDiagram {
            name: "pentagon (closed)",
            family: "pentagons",
            start: mc(mc(mc(x(1), x(2)), x(3)), x(4)),
            left: vec![s(&[0], AlphaC, false), s(root, AlphaC, false), s(&[1], AlphaC, false)],
            right: vec![s(root, AlphaC, false), s(root, AlphaC, false)],
        },
        CoherenceDiagram {
            name: "pentagon (open)",
            family: "pentagons",
            start: mo(mo(mo(y(1), y(2)), y(3)), y(4)),
            left: vec![s(&[0], AlphaO, false), s(root, AlphaO, false), s(&[1], AlphaO, false)],
            right: vec![s(root, AlphaO, false), s(root, AlphaO, false)],
        },
        CoherenceDiagram {
            name: "hexagon",
            family: "hexagons",
            start: mc(mc(x(1), x(2)), x(3)),
            left: vec![s(&[0], Tau, false), s(root, AlphaC, false), s(&[1], Tau, false)],
            right: vec![s(root, AlphaC, false), s(root, Tau, false), s(root, AlphaC, false)],
        },
        CoherenceDiagram {
            name: "hexagon (inverse associators)",
            family: "hexagons",
            start: mc(x(1), mc(x(2), x(3))),
            left: vec![s(&[1], Tau, false), s(root, AlphaC, true), s(&[0], Tau, false)],
            right: vec![s(root, AlphaC, true), s(root, Tau, false), s(root, AlphaC, true)],
        },
        CoherenceDiagram {
            name: "f monoidal",
            family: "f-monoidal",
            start: mo(mo(f(x(1)), f(x(2))), f(x(3))),
            left: vec![s(&[0], P, false), s(root, P, false), s(&[0], AlphaC, false)],
            right: vec![s(root, AlphaO, false), s(&[1], P, false), s(root, P, false)],
        },
        CoherenceDiagram {
            name: "half-braiding",
            family: "f-center",
            start: mo(mo(f(x(1)), y(1)), y(2)),
            left: vec![s(&[0], Psi, false), s(root, AlphaO, false), s(&[1], Psi, false)],
            right: vec![s(root, AlphaO, false), s(root, Psi, false), s(root, AlphaO, false)],
        },
        CoherenceDiagram {
            name: "f braided",
            family: "f-braided",
            start: mo(f(x(1)), f(x(2))),
            left: vec![s(root, Psi, false), s(root, P, false)],
            right: vec![s(root, P, false), s(&[0], Tau, false)],
        },
        CoherenceDiagram {
            name: "f monoidal for half-braidings",
            family: "f-monoid-center",
            start: mo(f(x(1)), mo(f(x(2)), y(1))),
            left: vec![s(&[1], Psi, false), s(root, AlphaO, true), s(&[0], Psi, false)],
            right: vec![
                s(root, AlphaO, true),
                s(&[0], P, false),
                s(root, Psi, false),
                s(&[1], P, true),
                s(root, AlphaO, true),
            ],
        },
    ]
}

fn first_path(t: &Tree, pred: &dyn Fn(&Tree) -> bool, path: &mut Vec<usize>) -> bool {
    if pred(t) {
        return true;
    }
    for (k, c) in t.children().into_iter().enumerate() {
        path.push(k);
        if first_path(c, pred, path) {
            return true;
        }
        path.pop();
    }
    false
}

fn find(t: &Tree, pred: &dyn Fn(&Tree) -> bool) -> Option<Vec<usize>> {
    let mut p = Vec::new();
    first_path(t, pred, &mut p).then_some(p)
}

struct Walk {
    tree: Tree,
    steps: Vec<Step>,
}

impl Walk {
    fn push(&mut self, s: Step) -> Result<()> {
        self.tree = apply_step(&self.tree, &s)?;
        self.steps.push(s);
        Ok(())
    }

    fn push_at(&mut self, prefix: &[usize], s: Step) -> Result<()> {
        let path = [prefix, &s.path].concat();
        self.push(Step { path, ..s })
    }
}

fn zeros(k: usize) -> Vec<usize> {
    vec![0; k]
}

/// Atoms of a left comb, left to right.
fn comb_atoms(t: &Tree) -> Vec<Tree> {
    let mut out = Vec::new();
    let mut cur = t;
    while let Tree::Mo(a, b) | Tree::Mc(a, b) = cur {
        out.push((**b).clone());
        cur = a;
    }
    out.push(cur.clone());
    out.reverse();
    out
}

/// Steps bringing a closed tree to the left comb on the same leaf order.
pub fn closed_comb_steps(t: &Tree) -> Result<(Vec<Step>, Tree)> {
    let mut w = Walk { tree: t.clone(), steps: Vec::new() };
    while let Some(p) = find(&w.tree, &|s| matches!(s, Tree::Mc(_, b) if matches!(**b, Tree::Mc(..)))) {
        w.push(step(&p, Generator::AlphaC, true))?;
    }
    Ok((w.steps, w.tree))
}

/// Steps realizing a braid on a closed left comb of `m` leaves, via `α_c^{±1}` and `τ^{±1}`.
pub fn braid_steps(m: usize, braid: &BraidWord) -> Vec<Step> {
    let mut out = Vec::new();
    for &l in braid.letters() {
        let k = l.unsigned_abs() as usize;
        if k == 1 {
            out.push(step(&zeros(m - 2), Generator::Tau, l < 0));
        } else {
            let p = zeros(m - k - 1);
            out.push(step(&p, Generator::AlphaC, false));
            out.push(step(&[p.as_slice(), &[1]].concat(), Generator::Tau, l < 0));
            out.push(step(&p, Generator::AlphaC, true));
        }
    }
    out
}

/// Canonical object `µ_o(left comb of y's, f(left comb of x's))` with the given orders.
pub fn canonical_object(terrestrial: &[usize], aerial: &[usize]) -> Tree {
    let ys = left_comb_open(terrestrial);
    let xs = left_comb_closed(aerial);
    match (terrestrial.is_empty(), aerial.is_empty()) {
        (_, true) => ys,
        (true, false) => f(xs),
        (false, false) => mo(ys, f(xs)),
    }
}

/// Shuffle-type steps from an open tree to its canonical object, using only `p^{±1}`, `α_o^{±1}`, `ψ`.
pub fn open_normal_steps(t: &Tree) -> Result<(Vec<Step>, Tree)> {
    use Generator::*;
    let mut w = Walk { tree: t.clone(), steps: Vec::new() };
    while let Some(p) = find(&w.tree, &|s| matches!(s, Tree::F(a) if matches!(**a, Tree::Mc(..)))) {
        w.push(step(&p, P, true))?;
    }
    while let Some(p) = find(&w.tree, &|s| matches!(s, Tree::Mo(_, b) if matches!(**b, Tree::Mo(..)))) {
        w.push(step(&p, AlphaO, true))?;
    }
    loop {
        let atoms = comb_atoms(&w.tree);
        let k = atoms.len();
        let Some(i) = (0..k.saturating_sub(1)).find(|&i| matches!(atoms[i], Tree::F(_)) && matches!(atoms[i + 1], Tree::Y(_))) else {
            break;
        };
        if i == 0 {
            w.push(step(&zeros(k - 2), Psi, false))?;
        } else {
            let p = zeros(k - i - 2);
            w.push(step(&p, AlphaO, false))?;
            w.push_at(&p, step(&[1], Psi, false))?;
            w.push(step(&p, AlphaO, true))?;
        }
    }
    let atoms = comb_atoms(&w.tree);
    let n = atoms.iter().filter(|a| matches!(a, Tree::Y(_))).count();
    let m = atoms.len() - n;
    for kk in 2..=m {
        let p = zeros(m - kk);
        if n > 0 {
            w.push(step(&p, AlphaO, false))?;
            w.push_at(&p, step(&[1], P, false))?;
        } else {
            w.push(step(&p, P, false))?;
        }
    }
    Ok((w.steps, w.tree))
}

/// Generator word whose evaluation in PaPB₊ is `m`.
pub fn to_generator_word(m: &PaPBMorphism) -> Result<GeneratorWord> {
    let (n, k) = m.arity();
    let (steps, canon_src) = match m.color() {
        Color::Closed => closed_comb_steps(&m.src)?,
        Color::Open => open_normal_steps(&m.src)?,
    };
    let (tsteps, canon_tgt) = match m.color() {
        Color::Closed => closed_comb_steps(&m.tgt)?,
        Color::Open => open_normal_steps(&m.tgt)?,
    };
    let prefix: Vec<usize> = match (m.color(), n) {
        (Color::Closed, _) => vec![],
        (Color::Open, 0) => vec![0],
        (Color::Open, _) => vec![1, 0],
    };
    let letters: Vec<Step> = if k >= 2 {
        braid_steps(k, m.braid()).into_iter().map(|s| Step { path: [prefix.as_slice(), &s.path].concat(), ..s }).collect()
    } else {
        Vec::new()
    };
    if steps_end(&canon_src, &letters)? != canon_tgt {
        return Err(Error::Inconsistent);
    }
    let mut all = steps;
    all.extend(letters);
    all.extend(invert_steps(&tsteps));
    steps_word(&m.src, &all)
}

/// `Y = µ′ ∘ X ∘ µ` with `X = µ_o(X_o, f(X_c))`.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub mu: PaPBMorphism,
    pub x_o: PaPBMorphism,
    pub x_c: PaPBMorphism,
    pub mu_prime: PaPBMorphism,
}

impl Decomposition {
    /// The middle morphism `µ_o(X_o, f(X_c))`, built by operadic insertion.
    pub fn middle(&self) -> Result<PaPBMorphism> {
        let (n, m) = (self.x_o.arity().0, self.x_c.arity().1);
        let fc = papb_insert(&PaPBMorphism::identity(&f(x(1)))?, Slot::Closed(1), &self.x_c)?;
        match (n, m) {
            (_, 0) => Ok(self.x_o.clone()),
            (0, _) => Ok(fc),
            _ => {
                let base = PaPBMorphism::identity(&mo(y(1), f(x(1))))?;
                let with_c = papb_insert(&base, Slot::Closed(1), &self.x_c)?;
                papb_insert(&with_c, Slot::Open(1), &self.x_o)
            }
        }
    }

    pub fn recompose(&self) -> Result<PaPBMorphism> {
        self.mu.then(&self.middle()?)?.then(&self.mu_prime)
    }
}

fn split_concatenated(t: &Tree, n: usize, m: usize) -> Result<(Tree, Tree)> {
    match (t, n, m) {
        (t, _, 0) => Ok((t.clone(), Tree::UnitC)),
        (Tree::F(c), 0, _) => Ok((Tree::UnitO, (**c).clone())),
        (Tree::Mo(o, fc), _, _) if n > 0 => match &**fc {
            Tree::F(c) if o.arity().1 == 0 => Ok(((**o).clone(), (**c).clone())),
            _ => Err(Error::IllFormed(format!("{t} is not of the form µ_o(x_o, f(x_c))"))),
        },
        _ => Err(Error::IllFormed(format!("{t} is not of the form µ_o(x_o, f(x_c))"))),
    }
}

/// Decomposes an open morphism through the intermediate objects `x1p`, `x2p`
/// (left-combed canonical objects when `None`).
pub fn decompose(m: &PaPBMorphism, x1p: Option<&Tree>, x2p: Option<&Tree>) -> Result<Decomposition> {
    if m.color() != Color::Open {
        return Err(Error::ColorMismatch("decomposition needs an open morphism".into()));
    }
    let (n, k) = m.arity();
    let (s, t) = (&m.underlying.src, &m.underlying.tgt);
    let x1 = x1p.cloned().unwrap_or_else(|| canonical_object(&s.terrestrial_labels(), &s.aerial_labels()));
    let x2 = x2p.cloned().unwrap_or_else(|| canonical_object(&t.terrestrial_labels(), &t.aerial_labels()));
    let shuffle = |a: &Tree, b: &Tree| -> Result<PaPBMorphism> {
        let u = shuffle_type_morphism(&omega_map(a), &omega_map(b))
            .ok_or_else(|| Error::ObjectMismatch(format!("label orders of {a} and {b} differ")))?;
        PaPBMorphism::from_parts(a.clone(), b.clone(), u)
    };
    let mu = shuffle(&m.src, &x1)?;
    let mu_prime = shuffle(&x2, &m.tgt)?;
    let (o1, c1) = split_concatenated(&x1, n, k)?;
    let (o2, c2) = split_concatenated(&x2, n, k)?;
    let x_o = PaPBMorphism::new(o1, o2, BraidWord::identity(0))?;
    let x_c = PaPBMorphism::new(c1, c2, m.braid().clone())?;
    Ok(Decomposition { mu, x_o, x_c, mu_prime })
}

/// Random morphism with `n` terrestrial and `m` aerial points; closed-colored when `n = 0` and `closed`.
pub fn random_papb(rng: &mut impl Rng, n: usize, m: usize, max_len: usize, closed: bool) -> PaPBMorphism {
    let u = random_morphism(rng, n, m, max_len);
    let tree = |rng: &mut _, o: &crate::trees_magma::ShuffleObject| {
        if closed && n == 0 {
            random_closed_tree(rng, &o.aerial_labels())
        } else {
            random_bitree(rng, o.points())
        }
    };
    let src = tree(rng, &u.src);
    let tgt = tree(rng, &u.tgt);
    PaPBMorphism::from_parts(src, tgt, u).expect("trees built over the endpoints")
}

/// Random morphism out of `src`, of the same color.
pub fn random_papb_from(rng: &mut impl Rng, src: &Tree, max_len: usize) -> PaPBMorphism {
    let u = crate::colored_operads::random_morphism_from(rng, &omega_map(src), max_len);
    let tgt = if src.color() == Color::Closed {
        random_closed_tree(rng, &u.tgt.aerial_labels())
    } else {
        random_bitree(rng, u.tgt.points())
    };
    PaPBMorphism::from_parts(src.clone(), tgt, u).expect("tree built over the target")
}

/// Another generator word for `m`, passing through the target of `first`.
pub fn word_via(m: &PaPBMorphism, first: &PaPBMorphism) -> Result<GeneratorWord> {
    let rest = first.inverse().then(m)?;
    Ok(GeneratorWord::Compose(vec![to_generator_word(first)?, to_generator_word(&rest)?]))
}

/// Self-evaluation of `to_generator_word` on random morphisms with `n + m ≤ max_points`.
pub fn self_evaluation_suite(rng: &mut impl Rng, instances: usize, max_points: usize, max_len: usize) -> crate::report::SuiteReport {
    let mut rep = crate::report::SuiteReport::new("generator-word self-evaluation");
    for _ in 0..instances {
        let total = rng.gen_range(1..=max_points);
        let closed = rng.gen_bool(0.3);
        let n = if closed { 0 } else { rng.gen_range(0..=total) };
        let y = random_papb(rng, n, total - n, max_len, closed);
        let ok = to_generator_word(&y).and_then(|w| evaluate(&PaPBModel, &w)).map(|e| e.equals(&y)).unwrap_or(false);
        rep.record(ok, || y.to_string());
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid_engine::{braids_equal, underlying_permutation};
    use rand::SeedableRng;

    fn t(s: &str) -> Tree {
        Tree::parse(s).unwrap()
    }

    #[test]
    fn generator_signatures() {
        assert_eq!(underlying_permutation(Generator::Tau.morphism().braid()).images(), &[2, 1]);
        let a = Generator::AlphaC.morphism();
        assert_eq!(a.src, t("mc(mc(x1,x2),x3)"));
        assert_eq!(a.tgt, t("mc(x1,mc(x2,x3))"));
        let psi = Generator::Psi.morphism();
        assert_eq!((psi.src.to_string(), psi.tgt.to_string()), ("mo(f(x1),y1)".into(), "mo(y1,f(x1))".into()));
        assert_eq!(Generator::P.morphism().arity(), (0, 2));
        assert_eq!(Generator::Psi.morphism().arity(), (1, 1));
    }

    #[test]
    fn composition_examples() {
        let psi = Generator::Psi.morphism();
        assert!(psi.then(&psi.inverse()).unwrap().equals(&PaPBMorphism::identity(&psi.src).unwrap()));
        let tau = Generator::Tau.morphism();
        let back = tau.relabel(&|i| 3 - i, &|j| j);
        let sq = tau.then(&back).unwrap();
        assert_eq!(sq.src, sq.tgt);
        assert!(braids_equal(sq.braid(), &BraidWord::parse("s1 s1", 2).unwrap()).unwrap());
        assert!(!braids_equal(sq.braid(), &BraidWord::identity(2)).unwrap());
    }

    #[test]
    fn word_text_round_trip() {
        let w = GeneratorWord::parse("(compose (op-insert alpha_o 2 (id mo(y1,f(x1)))) (inv psi))").unwrap();
        assert_eq!(GeneratorWord::parse(&w.to_string()).unwrap(), w);
        let w = GeneratorWord::parse("(relabel tau [2,1] [])").unwrap();
        assert_eq!(w.to_string(), "(relabel tau [2,1] [])");
        let w = GeneratorWord::parse("(op-insert alpha_o 2 (id f))").unwrap();
        assert_eq!(w.source().unwrap(), t("mo(mo(y1,f(x1)),y2)"));
        assert!(GeneratorWord::parse("(compose tau").is_err());
        assert!(GeneratorWord::parse("sigma").is_err());
    }

    #[test]
    fn diagrams_hold_in_papb() {
        let ds = coherence_diagrams();
        assert_eq!(ds.len(), 8);
        for d in &ds {
            assert!(d.check(&PaPBModel).unwrap(), "{}", d.name);
        }
        let fam: std::collections::BTreeSet<_> = ds.iter().map(|d| d.family).collect();
        assert_eq!(fam.len(), 6);
    }

    #[test]
    fn broken_diagram_is_detected() {
        let mut d = coherence_diagrams().remove(2);
        d.right[1].inverse = true;
        assert!(!d.check(&PaPBModel).unwrap());
    }

    #[test]
    fn whisker_source_is_the_tree() {
        let tr = t("mo(y2,mo(f(mc(x2,x1)),y1))");
        let s = step(&[1], Generator::Psi, false);
        let w = whisker(&tr, &s).unwrap();
        let e = evaluate(&PaPBModel, &w).unwrap();
        assert_eq!(e.src, tr);
        assert_eq!(e.tgt, t("mo(y2,mo(y1,f(mc(x2,x1))))"));
        assert!(e.braid().is_empty());
    }

    #[test]
    fn words_for_small_morphisms() {
        let tau = Generator::Tau.morphism();
        assert_eq!(to_generator_word(&tau).unwrap(), GeneratorWord::Gen(Generator::Tau));

        let sq = PaPBMorphism::new(t("mc(x1,x2)"), t("mc(x1,x2)"), BraidWord::parse("s1 s1", 2).unwrap()).unwrap();
        let w = to_generator_word(&sq).unwrap();
        assert_eq!(w.count(Generator::Tau), 2);
        assert!(evaluate(&PaPBModel, &w).unwrap().equals(&sq));

        let sh = PaPBMorphism::new(
            t("mo(f(mc(x1,x2)),mo(y1,f(x3)))"),
            t("mo(mo(y1,f(x1)),f(mc(x2,x3)))"),
            BraidWord::identity(3),
        )
        .unwrap();
        let w = to_generator_word(&sh).unwrap();
        assert_eq!(w.count(Generator::Tau), 0);
        assert_eq!(w.count(Generator::AlphaC), 0);
        assert!(evaluate(&PaPBModel, &w).unwrap().equals(&sh));
    }

    #[test]
    fn decomposition_round_trips() {
        let id = PaPBMorphism::identity(&t("mo(y1,f(x1))")).unwrap();
        let d = decompose(&id, None, None).unwrap();
        for part in [&d.mu, &d.x_o, &d.x_c, &d.mu_prime] {
            assert!(part.src == part.tgt && part.braid().is_empty());
        }
        let psi = Generator::Psi.morphism();
        let d = decompose(&psi, None, None).unwrap();
        assert!(d.recompose().unwrap().equals(&psi));
        assert!(d.x_o.src == d.x_o.tgt && d.x_c.braid().is_empty());
        assert_ne!(d.mu.src, d.mu.tgt);
        // the target of ψ already has the concatenated form
        assert_eq!(d.mu_prime.src, d.mu_prime.tgt);

        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let y = random_papb(&mut rng, 2, 2, 6, false);
            let d = decompose(&y, None, None).unwrap();
            assert!(d.recompose().unwrap().equals(&y), "{y}");
        }
    }

    #[test]
    fn self_evaluation() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let rep = self_evaluation_suite(&mut rng, 100, 4, 6);
        assert!(rep.passed(), "{rep}");
    }
}
