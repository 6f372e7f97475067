//! Finite-table checker for algebras over parenthesized permutations and braids.
//!
//! An algebra is given by two finite categories `M` (closed) and `N` (open), functors
//! `m_c: M×M → M`, `m_o: N×N → N`, `F: M → N` and component tables for the five generating
//! isomorphisms. Generator words are evaluated to tables of components indexed by object
//! assignments, so every coherence diagram is checked on every object tuple.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parenthesized_operads::{coherence_diagrams, evaluate, Generator, GeneratorModel, GeneratorWord};
use crate::trees_magma::{graft, Color, Shifts, Slot, Tree};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MorphismJson {
    pub name: String,
    pub src: String,
    pub tgt: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CategoryJson {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismJson>,
    /// Object name to identity morphism name.
    pub identities: BTreeMap<String, String>,
    /// `[f, g, h]`: `f` followed by `g` is `h`.
    pub compose: Vec<[String; 3]>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BifunctorJson {
    pub objects: Vec<[String; 3]>,
    pub morphisms: Vec<[String; 3]>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FunctorJson {
    pub objects: Vec<[String; 2]>,
    pub morphisms: Vec<[String; 2]>,
}

/// Component rows list the closed objects, then the open objects, then the morphism.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlgebraJson {
    #[serde(rename = "M")]
    pub m: CategoryJson,
    #[serde(rename = "N")]
    pub n: CategoryJson,
    pub m_c: BifunctorJson,
    pub m_o: BifunctorJson,
    #[serde(rename = "F")]
    pub f: FunctorJson,
    pub a_c: Vec<Vec<String>>,
    pub a_o: Vec<Vec<String>>,
    pub t: Vec<Vec<String>>,
    pub p: Vec<Vec<String>>,
    pub psi: Vec<Vec<String>>,
}

#[derive(Clone, Debug)]
pub struct FiniteCategory {
    pub objects: Vec<String>,
    pub names: Vec<String>,
    pub src: Vec<usize>,
    pub tgt: Vec<usize>,
    pub id: Vec<usize>,
    comp: HashMap<(usize, usize), usize>,
    inv: Vec<Option<usize>>,
}

fn lookup(names: &HashMap<&str, usize>, s: &str, what: &str) -> Result<usize> {
    names.get(s).copied().ok_or_else(|| Error::Table(format!("unknown {what} {s}")))
}

impl FiniteCategory {
    pub fn from_json(j: &CategoryJson, label: &str) -> Result<Self> {
        let obj: HashMap<&str, usize> = j.objects.iter().enumerate().map(|(k, o)| (o.as_str(), k)).collect();
        let mor: HashMap<&str, usize> = j.morphisms.iter().enumerate().map(|(k, m)| (m.name.as_str(), k)).collect();
        if obj.len() != j.objects.len() || mor.len() != j.morphisms.len() {
            return Err(Error::Table(format!("{label}: duplicate names")));
        }
        let src = j.morphisms.iter().map(|m| lookup(&obj, &m.src, "object")).collect::<Result<Vec<_>>>()?;
        let tgt = j.morphisms.iter().map(|m| lookup(&obj, &m.tgt, "object")).collect::<Result<Vec<_>>>()?;
        let id = j
            .objects
            .iter()
            .map(|o| {
                let name = j.identities.get(o).ok_or_else(|| Error::Table(format!("{label}: no identity for {o}")))?;
                lookup(&mor, name, "morphism")
            })
            .collect::<Result<Vec<_>>>()?;
        let mut comp = HashMap::new();
        for [f, g, h] in &j.compose {
            let (f, g, h) = (lookup(&mor, f, "morphism")?, lookup(&mor, g, "morphism")?, lookup(&mor, h, "morphism")?);
            if comp.insert((f, g), h).is_some_and(|old| old != h) {
                return Err(Error::Table(format!("{label}: conflicting composites")));
            }
        }
        let mut c = FiniteCategory { objects: j.objects.clone(), names: j.morphisms.iter().map(|m| m.name.clone()).collect(), src, tgt, id, comp, inv: vec![] };
        c.validate(label)?;
        c.inv = (0..c.names.len())
            .map(|f| (0..c.names.len()).find(|&g| c.comp.get(&(f, g)) == Some(&c.id[c.src[f]]) && c.comp.get(&(g, f)) == Some(&c.id[c.tgt[f]])))
            .collect();
        Ok(c)
    }

    fn validate(&self, label: &str) -> Result<()> {
        let nm = self.names.len();
        for (o, &i) in self.id.iter().enumerate() {
            if self.src[i] != o || self.tgt[i] != o {
                return Err(Error::Table(format!("{label}: identity of {} has wrong ends", self.objects[o])));
            }
        }
        for f in 0..nm {
            for g in (0..nm).filter(|&g| self.src[g] == self.tgt[f]) {
                let h = *self.comp.get(&(f, g)).ok_or_else(|| {
                    Error::Table(format!("{label}: composite of {} and {} missing", self.names[f], self.names[g]))
                })?;
                if self.src[h] != self.src[f] || self.tgt[h] != self.tgt[g] {
                    return Err(Error::Table(format!("{label}: composite of {} and {} has wrong ends", self.names[f], self.names[g])));
                }
            }
            if self.comp[&(self.id[self.src[f]], f)] != f || self.comp[&(f, self.id[self.tgt[f]])] != f {
                return Err(Error::Table(format!("{label}: identity law fails at {}", self.names[f])));
            }
        }
        for f in 0..nm {
            for g in (0..nm).filter(|&g| self.src[g] == self.tgt[f]) {
                for h in (0..nm).filter(|&h| self.src[h] == self.tgt[g]) {
                    let fg = self.comp[&(f, g)];
                    let gh = self.comp[&(g, h)];
                    if self.comp[&(fg, h)] != self.comp[&(f, gh)] {
                        return Err(Error::Table(format!("{label}: associativity fails")));
                    }
                }
            }
        }
        Ok(())
    }

    /// `f` followed by `g`.
    pub fn then(&self, f: usize, g: usize) -> Result<usize> {
        self.comp.get(&(f, g)).copied().ok_or_else(|| Error::ObjectMismatch(format!("{} then {}", self.names[f], self.names[g])))
    }

    pub fn inverse(&self, f: usize) -> Result<usize> {
        self.inv[f].ok_or_else(|| Error::Table(format!("{} is not invertible", self.names[f])))
    }

    pub fn hom(&self, f: usize) -> (usize, usize) {
        (self.src[f], self.tgt[f])
    }
}

#[derive(Clone, Debug)]
struct Bifunctor {
    obj: HashMap<(usize, usize), usize>,
    mor: HashMap<(usize, usize), usize>,
}

#[derive(Clone, Debug)]
struct Functor {
    obj: Vec<usize>,
    mor: Vec<usize>,
}

/// Validated algebra data.
#[derive(Clone, Debug)]
pub struct AlgebraData {
    pub m: FiniteCategory,
    pub n: FiniteCategory,
    mc: Bifunctor,
    mo: Bifunctor,
    f: Functor,
    comps: HashMap<Generator, HashMap<Vec<usize>, usize>>,
}

fn names_of(c: &FiniteCategory) -> (HashMap<&str, usize>, HashMap<&str, usize>) {
    (
        c.objects.iter().enumerate().map(|(k, o)| (o.as_str(), k)).collect(),
        c.names.iter().enumerate().map(|(k, o)| (o.as_str(), k)).collect(),
    )
}

fn bifunctor(j: &BifunctorJson, c: &FiniteCategory, label: &str) -> Result<Bifunctor> {
    let (obj, mor) = names_of(c);
    let mut b = Bifunctor { obj: HashMap::new(), mor: HashMap::new() };
    for [a, x, r] in &j.objects {
        b.obj.insert((lookup(&obj, a, "object")?, lookup(&obj, x, "object")?), lookup(&obj, r, "object")?);
    }
    for [a, x, r] in &j.morphisms {
        b.mor.insert((lookup(&mor, a, "morphism")?, lookup(&mor, x, "morphism")?), lookup(&mor, r, "morphism")?);
    }
    let (no, nm) = (c.objects.len(), c.names.len());
    for a in 0..no {
        for x in 0..no {
            if !b.obj.contains_key(&(a, x)) {
                return Err(Error::Table(format!("{label}: missing object ({}, {})", c.objects[a], c.objects[x])));
            }
        }
    }
    for f in 0..nm {
        for g in 0..nm {
            let h = *b.mor.get(&(f, g)).ok_or_else(|| Error::Table(format!("{label}: missing morphism ({}, {})", c.names[f], c.names[g])))?;
            if c.hom(h) != (b.obj[&(c.src[f], c.src[g])], b.obj[&(c.tgt[f], c.tgt[g])]) {
                return Err(Error::Table(format!("{label}: image of ({}, {}) has wrong ends", c.names[f], c.names[g])));
            }
        }
    }
    for a in 0..no {
        for x in 0..no {
            if b.mor[&(c.id[a], c.id[x])] != c.id[b.obj[&(a, x)]] {
                return Err(Error::Table(format!("{label}: identities not preserved")));
            }
        }
    }
    for f in 0..nm {
        for g in (0..nm).filter(|&g| c.src[g] == c.tgt[f]) {
            for f2 in 0..nm {
                for g2 in (0..nm).filter(|&g2| c.src[g2] == c.tgt[f2]) {
                    let lhs = b.mor[&(c.then(f, g)?, c.then(f2, g2)?)];
                    if lhs != c.then(b.mor[&(f, f2)], b.mor[&(g, g2)])? {
                        return Err(Error::Table(format!("{label}: composition not preserved")));
                    }
                }
            }
        }
    }
    Ok(b)
}

fn functor(j: &FunctorJson, m: &FiniteCategory, n: &FiniteCategory) -> Result<Functor> {
    let ((mobj, mmor), (nobj, nmor)) = (names_of(m), names_of(n));
    let mut obj = vec![usize::MAX; m.objects.len()];
    let mut mor = vec![usize::MAX; m.names.len()];
    for [a, b] in &j.objects {
        obj[lookup(&mobj, a, "object")?] = lookup(&nobj, b, "object")?;
    }
    for [a, b] in &j.morphisms {
        mor[lookup(&mmor, a, "morphism")?] = lookup(&nmor, b, "morphism")?;
    }
    if obj.contains(&usize::MAX) || mor.contains(&usize::MAX) {
        return Err(Error::Table("F: table is not total".into()));
    }
    for f in 0..m.names.len() {
        if n.hom(mor[f]) != (obj[m.src[f]], obj[m.tgt[f]]) {
            return Err(Error::Table(format!("F: image of {} has wrong ends", m.names[f])));
        }
        for g in (0..m.names.len()).filter(|&g| m.src[g] == m.tgt[f]) {
            if mor[m.then(f, g)?] != n.then(mor[f], mor[g])? {
                return Err(Error::Table("F: composition not preserved".into()));
            }
        }
    }
    for (a, &i) in m.id.iter().enumerate() {
        if mor[i] != n.id[obj[a]] {
            return Err(Error::Table("F: identities not preserved".into()));
        }
    }
    Ok(Functor { obj, mor })
}

/// All assignments of `m` closed objects then `n` open objects.
fn assignments(m: usize, n: usize, nm: usize, nn: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for k in 0..m + n {
        let base = if k < m { nm } else { nn };
        out = out.into_iter().flat_map(|v| (0..base).map(move |o| [v.clone(), vec![o]].concat())).collect();
    }
    out
}

impl AlgebraData {
    pub fn from_json(j: &AlgebraJson) -> Result<Self> {
        let m = FiniteCategory::from_json(&j.m, "M")?;
        let n = FiniteCategory::from_json(&j.n, "N")?;
        let mc = bifunctor(&j.m_c, &m, "m_c")?;
        let mo = bifunctor(&j.m_o, &n, "m_o")?;
        let f = functor(&j.f, &m, &n)?;
        let mut d = AlgebraData { m, n, mc, mo, f, comps: HashMap::new() };
        for (g, rows) in [
            (Generator::AlphaC, &j.a_c),
            (Generator::AlphaO, &j.a_o),
            (Generator::Tau, &j.t),
            (Generator::P, &j.p),
            (Generator::Psi, &j.psi),
        ] {
            let table = d.component_table(g, rows)?;
            d.comps.insert(g, table);
        }
        for g in Generator::ALL {
            d.check_natural(g)?;
        }
        Ok(d)
    }

    fn cat(&self, c: Color) -> &FiniteCategory {
        match c {
            Color::Closed => &self.m,
            Color::Open => &self.n,
        }
    }

    fn component_table(&self, g: Generator, rows: &[Vec<String>]) -> Result<HashMap<Vec<usize>, usize>> {
        let (n, m) = g.source().arity();
        let ((mobj, _), (nobj, _)) = (names_of(&self.m), names_of(&self.n));
        let (_, tmor) = names_of(self.cat(g.color()));
        let mut table = HashMap::new();
        for row in rows {
            if row.len() != m + n + 1 {
                return Err(Error::Table(format!("{}: row {row:?} has the wrong length", g.name())));
            }
            let a = (0..m + n)
                .map(|k| lookup(if k < m { &mobj } else { &nobj }, &row[k], "object"))
                .collect::<Result<Vec<_>>>()?;
            table.insert(a, lookup(&tmor, &row[m + n], "morphism")?);
        }
        let c = self.cat(g.color());
        for a in assignments(m, n, self.m.objects.len(), self.n.objects.len()) {
            let &k = table.get(&a).ok_or_else(|| Error::Table(format!("{}: no component at {}", g.name(), self.show(&a, m))))?;
            let want = (self.obj(&g.source(), &a, m)?, self.obj(&g.target(), &a, m)?);
            if c.hom(k) != want {
                return Err(Error::Table(format!(
                    "{}: component at {} must go {} → {}, {} does not",
                    g.name(),
                    self.show(&a, m),
                    c.objects[want.0],
                    c.objects[want.1],
                    c.names[k]
                )));
            }
            c.inverse(k)?;
        }
        Ok(table)
    }

    fn check_natural(&self, g: Generator) -> Result<()> {
        let (n, m) = g.source().arity();
        let c = self.cat(g.color());
        for fs in assignments(m, n, self.m.names.len(), self.n.names.len()) {
            let srcs: Vec<usize> = fs.iter().enumerate().map(|(k, &f)| if k < m { self.m.src[f] } else { self.n.src[f] }).collect();
            let tgts: Vec<usize> = fs.iter().enumerate().map(|(k, &f)| if k < m { self.m.tgt[f] } else { self.n.tgt[f] }).collect();
            let lhs = c.then(self.mor(&g.source(), &fs, m)?, self.comps[&g][&tgts])?;
            let rhs = c.then(self.comps[&g][&srcs], self.mor(&g.target(), &fs, m)?)?;
            if lhs != rhs {
                return Err(Error::Table(format!("{}: not natural at {:?}", g.name(), fs)));
            }
        }
        Ok(())
    }

    fn show(&self, a: &[usize], m: usize) -> String {
        let parts: Vec<&str> = a.iter().enumerate().map(|(k, &o)| if k < m { self.m.objects[o].as_str() } else { self.n.objects[o].as_str() }).collect();
        format!("({})", parts.join(", "))
    }

    /// Value of a tree on objects; `a` lists the closed labels' objects then the open ones.
    pub fn obj(&self, t: &Tree, a: &[usize], m: usize) -> Result<usize> {
        Ok(match t {
            Tree::X(i) => a[i - 1],
            Tree::Y(j) => a[m + j - 1],
            Tree::Mc(l, r) => self.mc.obj[&(self.obj(l, a, m)?, self.obj(r, a, m)?)],
            Tree::Mo(l, r) => self.mo.obj[&(self.obj(l, a, m)?, self.obj(r, a, m)?)],
            Tree::F(s) => self.f.obj[self.obj(s, a, m)?],
            Tree::UnitC | Tree::UnitO => return Err(Error::Table("units are not part of the algebra data".into())),
        })
    }

    /// Value of a tree on morphisms.
    pub fn mor(&self, t: &Tree, fs: &[usize], m: usize) -> Result<usize> {
        Ok(match t {
            Tree::X(i) => fs[i - 1],
            Tree::Y(j) => fs[m + j - 1],
            Tree::Mc(l, r) => self.mc.mor[&(self.mor(l, fs, m)?, self.mor(r, fs, m)?)],
            Tree::Mo(l, r) => self.mo.mor[&(self.mor(l, fs, m)?, self.mor(r, fs, m)?)],
            Tree::F(s) => self.f.mor[self.mor(s, fs, m)?],
            Tree::UnitC | Tree::UnitO => return Err(Error::Table("units are not part of the algebra data".into())),
        })
    }
}

/// A natural transformation between tree functors, as its table of components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaMor {
    pub src: Tree,
    pub tgt: Tree,
    pub comps: BTreeMap<Vec<usize>, usize>,
}

impl ThetaMor {
    fn arity(&self) -> (usize, usize) {
        self.src.arity()
    }
}

/// `θ`: generator words evaluated in the algebra.
pub struct Theta<'a>(pub &'a AlgebraData);

impl Theta<'_> {
    fn all(&self, t: &Tree) -> Vec<Vec<usize>> {
        let (n, m) = t.arity();
        assignments(m, n, self.0.m.objects.len(), self.0.n.objects.len())
    }
}

impl GeneratorModel for Theta<'_> {
    type Mor = ThetaMor;

    fn generator(&self, g: Generator) -> Result<ThetaMor> {
        Ok(ThetaMor { src: g.source(), tgt: g.target(), comps: self.0.comps[&g].iter().map(|(k, v)| (k.clone(), *v)).collect() })
    }

    fn identity(&self, t: &Tree) -> Result<ThetaMor> {
        let (d, m) = (self.0, t.arity().1);
        let c = d.cat(t.color());
        let comps = self.all(t).into_iter().map(|a| Ok((a.clone(), c.id[d.obj(t, &a, m)?]))).collect::<Result<_>>()?;
        Ok(ThetaMor { src: t.clone(), tgt: t.clone(), comps })
    }

    fn compose(&self, first: &ThetaMor, second: &ThetaMor) -> Result<ThetaMor> {
        if first.tgt != second.src {
            return Err(Error::ObjectMismatch(format!("{} vs {}", first.tgt, second.src)));
        }
        let c = self.0.cat(first.src.color());
        let comps = first.comps.iter().map(|(a, &f)| Ok((a.clone(), c.then(f, second.comps[a])?))).collect::<Result<_>>()?;
        Ok(ThetaMor { src: first.src.clone(), tgt: second.tgt.clone(), comps })
    }

    fn inverse(&self, e: &ThetaMor) -> Result<ThetaMor> {
        let c = self.0.cat(e.src.color());
        let comps = e.comps.iter().map(|(a, &f)| Ok((a.clone(), c.inverse(f)?))).collect::<Result<_>>()?;
        Ok(ThetaMor { src: e.tgt.clone(), tgt: e.src.clone(), comps })
    }

    /// Horizontal composition: the inner components whiskered by the outer source, then the
    /// outer components at the inner targets.
    fn insert(&self, outer: &ThetaMor, slot: Slot, inner: &ThetaMor) -> Result<ThetaMor> {
        let d = self.0;
        let sh = Shifts { slot, outer: outer.arity(), inner: inner.arity() };
        let src = graft(&outer.src, slot, &inner.src)?;
        let tgt = graft(&outer.tgt, slot, &inner.tgt)?;
        let (rn, rm) = sh.result_arity();
        let ((on, om), (inn, im)) = (outer.arity(), inner.arity());
        let pos_c = |l: usize| l - 1;
        let pos_o = |l: usize| rm + l - 1;
        let c = d.cat(outer.src.color());
        let mut comps = BTreeMap::new();
        for a in assignments(rm, rn, d.m.objects.len(), d.n.objects.len()) {
            let ai: Vec<usize> = (1..=im).map(|l| a[pos_c(sh.inner_closed(l))]).chain((1..=inn).map(|l| a[pos_o(sh.inner_open(l))])).collect();
            let eta = inner.comps[&ai];
            let mid = d.obj(&inner.tgt, &ai, im)?;
            let mut ao = Vec::with_capacity(om + on);
            let mut fo = Vec::with_capacity(om + on);
            for l in 1..=om {
                if slot == Slot::Closed(l) {
                    ao.push(mid);
                    fo.push(eta);
                } else {
                    let o = a[pos_c(sh.outer_closed(l))];
                    ao.push(o);
                    fo.push(d.m.id[o]);
                }
            }
            for l in 1..=on {
                if slot == Slot::Open(l) {
                    ao.push(mid);
                    fo.push(eta);
                } else {
                    let o = a[pos_o(sh.outer_open(l))];
                    ao.push(o);
                    fo.push(d.n.id[o]);
                }
            }
            let whisker = d.mor(&outer.src, &fo, om)?;
            comps.insert(a, c.then(whisker, outer.comps[&ao])?);
        }
        Ok(ThetaMor { src, tgt, comps })
    }

    fn relabel(&self, e: &ThetaMor, closed: &[usize], open: &[usize]) -> Result<ThetaMor> {
        let (n, m) = e.arity();
        let src = e.src.relabel(&|l| closed[l - 1], &|l| open[l - 1]);
        let tgt = e.tgt.relabel(&|l| closed[l - 1], &|l| open[l - 1]);
        let comps = e
            .comps
            .iter()
            .map(|(a, &f)| {
                let mut b = vec![0; m + n];
                for l in 1..=m {
                    b[closed[l - 1] - 1] = a[l - 1];
                }
                for l in 1..=n {
                    b[m + open[l - 1] - 1] = a[m + l - 1];
                }
                (b, f)
            })
            .collect();
        Ok(ThetaMor { src, tgt, comps })
    }

    fn equal(&self, a: &ThetaMor, b: &ThetaMor) -> bool {
        a == b
    }
}

pub fn theta_eval(d: &AlgebraData, w: &GeneratorWord) -> Result<ThetaMor> {
    evaluate(&Theta(d), w)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub diagram: String,
    pub objects: Vec<String>,
    pub left: String,
    pub right: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyReport {
    pub family: String,
    pub diagrams: Vec<String>,
    pub instances: usize,
    pub failures: Vec<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoherenceReport {
    pub families: Vec<FamilyReport>,
    pub instances: usize,
}

impl CoherenceReport {
    pub fn passed(&self) -> bool {
        self.families.iter().all(|f| f.failures.is_empty())
    }

    pub fn failures(&self) -> impl Iterator<Item = &Witness> {
        self.families.iter().flat_map(|f| &f.failures)
    }
}

impl std::fmt::Display for CoherenceReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for fam in &self.families {
            let status = if fam.failures.is_empty() { "pass" } else { "FAIL" };
            writeln!(f, "{}: {status} ({} instances, {} failures)", fam.family, fam.instances, fam.failures.len())?;
            for w in &fam.failures {
                writeln!(f, "  {} at ({}): {} ≠ {}", w.diagram, w.objects.join(", "), w.left, w.right)?;
            }
        }
        write!(f, "total instances: {}", self.instances)
    }
}

/// Both paths of every diagram at every object tuple.
pub fn check_coherence(d: &AlgebraData) -> Result<CoherenceReport> {
    let theta = Theta(d);
    let mut families: Vec<FamilyReport> = Vec::new();
    for diag in coherence_diagrams() {
        let (l, r) = diag.words()?;
        let (l, r) = (evaluate(&theta, &l)?, evaluate(&theta, &r)?);
        let c = d.cat(diag.start.color());
        let m = diag.start.arity().1;
        let idx = match families.iter().position(|f| f.family == diag.family) {
            Some(k) => k,
            None => {
                families.push(FamilyReport { family: diag.family.into(), diagrams: vec![], instances: 0, failures: vec![] });
                families.len() - 1
            }
        };
        let fam = &mut families[idx];
        fam.diagrams.push(diag.name.into());
        for (a, &f) in &l.comps {
            fam.instances += 1;
            let g = r.comps[a];
            if f != g {
                let objects = a.iter().enumerate().map(|(k, &o)| if k < m { d.m.objects[o].clone() } else { d.n.objects[o].clone() }).collect();
                fam.failures.push(Witness { diagram: diag.name.into(), objects, left: c.names[f].clone(), right: c.names[g].clone() });
            }
        }
    }
    let instances = families.iter().map(|f| f.instances).sum();
    Ok(CoherenceReport { families, instances })
}

/// Instance count predicted from the object counts alone.
pub fn expected_instances(d: &AlgebraData) -> usize {
    coherence_diagrams()
        .iter()
        .map(|diag| {
            let (n, m) = diag.start.arity();
            d.m.objects.len().pow(m as u32) * d.n.objects.len().pow(n as u32)
        })
        .sum()
}

pub mod examples {
    //! Small algebras: a discrete abelian group, a group with a sign symmetry, and a
    //! nonabelian group whose symmetry cannot be typed.

    use super::*;

    /// Group `G` (elements `0..k`, product table) as a monoidal category whose morphisms
    /// `x → x` are `±1` when `signed`, identities only otherwise.
    fn group_category(k: usize, signed: bool) -> CategoryJson {
        let objects: Vec<String> = (0..k).map(|x| x.to_string()).collect();
        let signs: &[&str] = if signed { &["+", "-"] } else { &["+"] };
        let name = |x: usize, s: &str| format!("{s}{x}");
        let morphisms = (0..k)
            .flat_map(|x| signs.iter().map(move |s| MorphismJson { name: name(x, s), src: x.to_string(), tgt: x.to_string() }))
            .collect();
        let identities = (0..k).map(|x| (x.to_string(), name(x, "+"))).collect();
        let mut compose = vec![];
        for x in 0..k {
            for s in signs {
                for u in signs {
                    let v = if s == u { "+" } else { "-" };
                    compose.push([name(x, s), name(x, u), name(x, v)]);
                }
            }
        }
        CategoryJson { objects, morphisms, identities, compose }
    }

    fn sign_mul(a: &str, b: &str) -> &'static str {
        if (a == "-") != (b == "-") {
            "-"
        } else {
            "+"
        }
    }

    fn tensor(k: usize, signed: bool, mul: &dyn Fn(usize, usize) -> usize) -> BifunctorJson {
        let signs: &[&str] = if signed { &["+", "-"] } else { &["+"] };
        let mut objects = vec![];
        let mut morphisms = vec![];
        for x in 0..k {
            for y in 0..k {
                let z = mul(x, y);
                objects.push([x.to_string(), y.to_string(), z.to_string()]);
                for s in signs {
                    for u in signs {
                        morphisms.push([format!("{s}{x}"), format!("{u}{y}"), format!("{}{z}", sign_mul(s, u))]);
                    }
                }
            }
        }
        BifunctorJson { objects, morphisms }
    }

    /// `M` and `N` on the same group; `F` is the identity on objects and forgets signs when
    /// `N` is unsigned. The symmetry and half-braiding carry `sign`.
    fn build(
        k: usize,
        m_signed: bool,
        n_signed: bool,
        mul: &dyn Fn(usize, usize) -> usize,
        sign: &dyn Fn(usize, usize) -> bool,
    ) -> AlgebraJson {
        let (mcat, ncat) = (group_category(k, m_signed), group_category(k, n_signed));
        let f = FunctorJson {
            objects: (0..k).map(|x| [x.to_string(), x.to_string()]).collect(),
            morphisms: mcat
                .morphisms
                .iter()
                .map(|m| [m.name.clone(), if n_signed { m.name.clone() } else { format!("+{}", m.src) }])
                .collect(),
        };
        let id = |x: usize| format!("+{x}");
        let s = |x: usize, y: usize, on: bool| format!("{}{}", if on && sign(x, y) { "-" } else { "+" }, mul(x, y));
        let mut a3 = vec![];
        let (mut t, mut p, mut psi) = (vec![], vec![], vec![]);
        for x in 0..k {
            for y in 0..k {
                t.push(vec![x.to_string(), y.to_string(), s(x, y, m_signed)]);
                p.push(vec![x.to_string(), y.to_string(), id(mul(x, y))]);
                psi.push(vec![x.to_string(), y.to_string(), s(x, y, n_signed)]);
                for z in 0..k {
                    a3.push(vec![x.to_string(), y.to_string(), z.to_string(), id(mul(mul(x, y), z))]);
                }
            }
        }
        AlgebraJson {
            m_c: tensor(k, m_signed, mul),
            m_o: tensor(k, n_signed, mul),
            m: mcat,
            n: ncat,
            f,
            a_c: a3.clone(),
            a_o: a3,
            t,
            p,
            psi,
        }
    }

    fn negate(rows: &mut [Vec<String>], at: &[&str]) {
        for row in rows.iter_mut().filter(|r| r[..at.len()] == *at) {
            let last = row.last_mut().unwrap();
            *last = last.replacen('+', "-", 1);
        }
    }

    /// `ℤ/2` as a discrete category; every structure map is an identity.
    pub fn z2_discrete() -> AlgebraJson {
        build(2, false, false, &|x, y| (x + y) % 2, &|_, _| false)
    }

    /// `ℤ/2`-graded lines: automorphisms `±1`, symmetry `(-1)^{xy}`.
    pub fn z2_graded() -> AlgebraJson {
        build(2, true, true, &|x, y| (x + y) % 2, &|x, y| x * y == 1)
    }

    /// Signed `ℤ/2`-graded lines on the closed side, discrete `ℤ/2` on the open side.
    pub fn z2_graded_forgetful() -> AlgebraJson {
        build(2, true, false, &|x, y| (x + y) % 2, &|x, y| x * y == 1)
    }

    /// `z2_graded_forgetful` with `a_c(1, 1, 1)` negated: a pentagon cocycle that breaks
    /// the hexagons only.
    pub fn z2_hexagon_breaking() -> AlgebraJson {
        let mut j = z2_graded_forgetful();
        negate(&mut j.a_c, &["1", "1", "1"]);
        j
    }

    /// `z2_graded` with the associator component at `(1, 0, 0)` negated.
    pub fn z2_graded_bad_associator() -> AlgebraJson {
        let mut j = z2_graded();
        negate(&mut j.a_c, &["1", "0", "0"]);
        j
    }

    /// `S₃` as a discrete category with identity "symmetries"; these cannot be typed.
    pub fn s3_discrete() -> AlgebraJson {
        // permutations of {0,1,2} in lexicographic order
        let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let mul = move |a: usize, b: usize| {
            let (p, q) = (perms[a], perms[b]);
            let r = [p[q[0]], p[q[1]], p[q[2]]];
            perms.iter().position(|&s| s == r).unwrap()
        };
        let mut j = build(6, false, false, &mul, &|_, _| false);
        // the only morphism out of xy is its identity
        for row in &mut j.t {
            let (x, y): (usize, usize) = (row[0].parse().unwrap(), row[1].parse().unwrap());
            row[2] = format!("+{}", mul(x, y));
        }
        j
    }

    pub fn by_name(name: &str) -> Option<AlgebraJson> {
        Some(match name {
            "z2" | "z2-discrete" => z2_discrete(),
            "z2-graded" => z2_graded(),
            "z2-graded-bad" => z2_graded_bad_associator(),
            "z2-forgetful" => z2_graded_forgetful(),
            "z2-hexagon-bad" => z2_hexagon_breaking(),
            "s3" | "s3-discrete" => s3_discrete(),
            _ => return None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::examples::*;
    use super::*;
    use crate::parenthesized_operads::{random_papb, random_papb_from, to_generator_word, word_via};
    use crate::trees_magma::{f, x};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn load(j: AlgebraJson) -> AlgebraData {
        AlgebraData::from_json(&j).unwrap()
    }

    #[test]
    fn discrete_z2_passes_everything() {
        let d = load(z2_discrete());
        let rep = check_coherence(&d).unwrap();
        assert!(rep.passed(), "{rep}");
        assert_eq!(rep.families.len(), 6);
        assert_eq!(rep.instances, expected_instances(&d));
        // 2 pentagons on 4 objects, 2 hexagons on 3, f-monoidal 3, half-braiding 3, f-braided 2, last 3
        assert_eq!(rep.instances, 16 + 16 + 8 + 8 + 8 + 8 + 4 + 8);
    }

    #[test]
    fn graded_z2_passes_and_a_bad_associator_fails() {
        let d = load(z2_graded());
        assert!(check_coherence(&d).unwrap().passed());

        let bad = load(z2_graded_bad_associator());
        let rep = check_coherence(&bad).unwrap();
        let pent = rep.families.iter().find(|f| f.family == "pentagons").unwrap();
        let closed: Vec<&Witness> = pent.failures.iter().filter(|w| w.diagram == "pentagon (closed)").collect();
        assert!(closed.iter().any(|w| w.objects == ["1", "1", "0", "0"]));
        // the failing tuples are exactly those where the coboundary of the perturbation is -1
        let a = |x: usize, y: usize, z: usize| (x, y, z) == (1, 0, 0);
        for xs in assignments(4, 0, 2, 2) {
            let (p, q, r, s) = (xs[0], xs[1], xs[2], xs[3]);
            let flips = [a(q, r, s), a(p, (q + r) % 2, s), a(p, q, r), a((p + q) % 2, r, s), a(p, q, (r + s) % 2)];
            let odd = flips.iter().filter(|&&b| b).count() % 2 == 1;
            let names: Vec<String> = xs.iter().map(|o| o.to_string()).collect();
            assert_eq!(closed.iter().any(|w| w.objects == names), odd, "{names:?}");
        }
    }

    #[test]
    fn a_cocycle_perturbation_breaks_only_the_hexagons() {
        assert!(check_coherence(&load(z2_graded_forgetful())).unwrap().passed());
        let rep = check_coherence(&load(z2_hexagon_breaking())).unwrap();
        let failing: Vec<&str> = rep.families.iter().filter(|f| !f.failures.is_empty()).map(|f| f.family.as_str()).collect();
        assert_eq!(failing, ["hexagons"]);
        // the three associator indices of a hexagon at (x, y, z) are (x,y,z), (y,z,x), (y,x,z)
        let hits = |x: usize, y: usize, z: usize| [(x, y, z), (y, z, x), (y, x, z)].iter().filter(|&&t| t == (1, 1, 1)).count();
        let expect: Vec<Vec<String>> = assignments(3, 0, 2, 2)
            .into_iter()
            .filter(|a| hits(a[0], a[1], a[2]) % 2 == 1)
            .map(|a| a.iter().map(|o| o.to_string()).collect())
            .collect();
        for name in ["hexagon", "hexagon (inverse associators)"] {
            let got: Vec<Vec<String>> = rep.failures().filter(|w| w.diagram == name).map(|w| w.objects.clone()).collect();
            assert_eq!(got, expect, "{name}");
        }
    }

    #[test]
    fn nonabelian_symmetry_is_rejected_at_typing() {
        let err = AlgebraData::from_json(&s3_discrete()).unwrap_err();
        assert!(matches!(&err, Error::Table(m) if m.starts_with("tau: component")), "{err}");
    }

    #[test]
    fn malformed_tables_are_rejected() {
        let mut j = z2_graded();
        j.m.compose.retain(|c| c[0] != "-1" || c[1] != "-1");
        assert!(AlgebraData::from_json(&j).is_err());
        let mut j = z2_graded();
        j.t[1][2] = "+0".into();
        assert!(AlgebraData::from_json(&j).is_err());
    }

    #[test]
    fn generator_evaluation() {
        let d = load(z2_graded());
        let t = theta_eval(&d, &GeneratorWord::Gen(Generator::Tau)).unwrap();
        assert_eq!(d.m.names[t.comps[&vec![1, 1]]], "-0");
        assert_eq!(d.m.names[t.comps[&vec![1, 0]]], "+1");
    }

    #[test]
    fn half_braiding_on_f_is_f_of_the_symmetry() {
        let d = load(z2_graded());
        let psi_f = GeneratorWord::Insert(Box::new(GeneratorWord::Gen(Generator::Psi)), 1, Box::new(GeneratorWord::Id(f(x(1)))));
        let p_swapped = GeneratorWord::Relabel(Box::new(GeneratorWord::Gen(Generator::P)), vec![2, 1], vec![]);
        let f_tau = GeneratorWord::Insert(Box::new(GeneratorWord::Id(f(x(1)))), 1, Box::new(GeneratorWord::Gen(Generator::Tau)));
        let lhs = theta_eval(&d, &GeneratorWord::Compose(vec![psi_f, p_swapped])).unwrap();
        let rhs = theta_eval(&d, &GeneratorWord::Compose(vec![GeneratorWord::Gen(Generator::P), f_tau])).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn evaluation_does_not_depend_on_the_decomposition() {
        let d = load(z2_graded());
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..50 {
            let n = rng.gen_range(0..=2);
            let m = rng.gen_range(usize::from(n == 0)..=2);
            let closed = n == 0 && rng.gen_bool(0.5);
            let y = random_papb(&mut rng, n, m, 4, closed);
            let first = random_papb_from(&mut rng, &y.src, 3);
            let a = theta_eval(&d, &to_generator_word(&y).unwrap()).unwrap();
            let b = theta_eval(&d, &word_via(&y, &first).unwrap()).unwrap();
            assert_eq!(a, b, "{y}");
        }
    }
}
