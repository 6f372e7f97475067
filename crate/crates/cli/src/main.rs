use std::io::Read;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use papb::algebra_checker::{check_coherence, examples, AlgebraData, AlgebraJson};
use papb::associator::{
    check_hexagons, check_pentagon, phi_eval, solve_associator, solve_associator_one_shot, Associator, AssociatorJson,
};
use papb::braid_engine::{braids_equal, cable, underlying_permutation, BraidWord};
use papb::chord_diagrams::{dk_dimension, dk_insert, dk_restrict, DKElement};
use papb::colored_operads::{copb_compose, copb_insert, restrict_unit, CoPBMorphism, UnitSlot};
use papb::exact_algebra::parse_rational;
use papb::mixed_model::{apply_phi, compose_prime, papcd_to_json, prime_from_json, prime_to_json, rho};
use papb::parenthesized_operads::{
    coherence_diagrams, decompose, self_evaluation_suite, to_generator_word, PaPBModel, PaPBMorphism,
};
use papb::report::SuiteReport;
use papb::trees_magma::{enumerate, enumerate_closed, graft, omega_map, Slot, Tree};
use papb::voronov_product::{axiom_suite as voronov_suite, build_cd_pap_instance};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "papb", version, about = "Parenthesized permutations and braids: computation and verification")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    #[command(subcommand)]
    Braid(BraidCmd),
    #[command(subcommand)]
    Tree(TreeCmd),
    #[command(subcommand)]
    Copb(CopbCmd),
    #[command(subcommand)]
    Papb(PapbCmd),
    #[command(subcommand)]
    Cd(CdCmd),
    #[command(subcommand)]
    Assoc(AssocCmd),
    #[command(subcommand)]
    Mixed(MixedCmd),
    #[command(subcommand)]
    Voronov(VoronovCmd),
    #[command(subcommand)]
    Coherence(CoherenceCmd),
}

#[derive(Subcommand)]
enum BraidCmd {
    /// Decide equality of two braid words.
    Eq {
        a: String,
        b: String,
        #[arg(long)]
        strands: usize,
    },
    /// Underlying permutation of a braid word.
    Perm {
        word: String,
        #[arg(long)]
        strands: usize,
    },
    /// Replace one strand by a parallel cable.
    Cable {
        word: String,
        #[arg(long)]
        strands: usize,
        #[arg(long)]
        pos: usize,
        #[arg(long)]
        width: usize,
    },
}

#[derive(Subcommand)]
enum TreeCmd {
    /// Graft `inner` into `outer` at a slot such as c2 or o1.
    Graft { outer: String, slot: String, inner: String },
    /// Shuffle object of a bicolored tree.
    Omega { tree: String },
    /// All trees with the given numbers of terrestrial (open) and aerial (closed) inputs.
    Enum {
        #[arg(long, default_value_t = 0)]
        open: usize,
        #[arg(long)]
        closed: usize,
        #[arg(long)]
        units: bool,
        /// Only closed-colored trees.
        #[arg(long)]
        closed_only: bool,
    },
}

/// JSON arguments: literal JSON, `@path`, or `-` for stdin.
#[derive(Subcommand)]
enum CopbCmd {
    /// Composite `f` then `g`.
    Compose { f: String, g: String },
    Insert { outer: String, slot: String, inner: String },
    /// Plug a nullary unit at a slot (c<i> forgets an aerial strand, o<j> a terrestrial point).
    Restrict { morphism: String, slot: String },
}

#[derive(Subcommand)]
enum PapbCmd {
    /// `Y = µ′ ∘ µ_o(X_o, f(X_c)) ∘ µ` for an open morphism.
    Decompose { morphism: String },
    /// Generator word of a morphism.
    Words { morphism: String },
    /// Checks the generator relations and random word round trips in the model itself.
    CoherenceSelftest {
        #[arg(long, default_value_t = 100)]
        instances: usize,
    },
}

#[derive(Args)]
struct CdShape {
    #[arg(long)]
    strands: usize,
    #[arg(long)]
    degree: usize,
}

#[derive(Subcommand)]
enum CdCmd {
    /// Normal form of a chord expression such as "t12*t13 - 1/24*t13*t12".
    Normalize {
        expr: String,
        #[command(flatten)]
        shape: CdShape,
    },
    /// Doubling insertion `u ∘_k v`.
    Insert {
        u: String,
        k: usize,
        v: String,
        #[command(flatten)]
        shape: CdShape,
        #[arg(long)]
        inner_strands: usize,
    },
    /// Deletes strand k.
    Restrict {
        u: String,
        k: usize,
        #[command(flatten)]
        shape: CdShape,
    },
    /// Dimension of a graded piece.
    Dims {
        #[command(flatten)]
        shape: CdShape,
    },
}

#[derive(Subcommand)]
enum AssocCmd {
    /// Solve for an associator; prints associator JSON.
    Solve {
        #[arg(long)]
        mu: String,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        one_shot: bool,
    },
    /// Pentagon and hexagon residuals of an associator (stdin when --in is absent).
    Check {
        #[arg(long = "in")]
        input: Option<String>,
    },
    /// Image of a closed parenthesized-braid morphism.
    Eval {
        morphism: String,
        #[arg(long = "in")]
        input: Option<String>,
    },
}

#[derive(Subcommand)]
enum MixedCmd {
    /// The braid `ρ(e)` of a triple.
    Rho { triple: String },
    /// Full composition `γ(e; e_1, …, e_n)`; `inners` is a JSON array.
    Compose { outer: String, inners: String },
    /// Image of a triple under an associator.
    ApplyPhi {
        triple: String,
        #[arg(long = "in")]
        input: Option<String>,
    },
}

#[derive(Subcommand)]
enum VoronovCmd {
    /// Operad axioms of the chord-diagram × parenthesized-permutation instance.
    Check {
        #[arg(long, default_value_t = 2)]
        degree: usize,
        #[arg(long, default_value_t = 100)]
        instances: usize,
    },
}

#[derive(Subcommand)]
enum CoherenceCmd {
    /// Checks algebra data on finite categories against every coherence diagram.
    Check {
        #[arg(long = "in", conflicts_with = "example")]
        input: Option<String>,
        #[arg(long)]
        example: Option<String>,
    },
}

/// Outcome of a verification: exit 0 when `ok`, 1 otherwise.
struct Out {
    ok: bool,
    text: String,
    json: Value,
}

fn ok(text: impl Into<String>, json: Value) -> Out {
    Out { ok: true, text: text.into(), json }
}

fn read_source(arg: &str) -> Result<String> {
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else if let Some(path) = arg.strip_prefix('@') {
        std::fs::read_to_string(path).with_context(|| format!("reading {path}"))
    } else {
        Ok(arg.to_string())
    }
}

fn json_arg(arg: &str) -> Result<Value> {
    serde_json::from_str(&read_source(arg)?).with_context(|| format!("invalid JSON in {arg}"))
}

fn file_or_stdin(input: &Option<String>) -> Result<Value> {
    match input {
        Some(p) => json_arg(&format!("@{p}")),
        None => json_arg("-"),
    }
}

fn slot(s: &str) -> Result<Slot> {
    let (kind, rest) = s.split_at(s.len().min(1));
    let k: usize = rest.parse().map_err(|_| anyhow!("bad slot {s}: expected c<i> or o<j>"))?;
    match kind {
        "c" => Ok(Slot::Closed(k)),
        "o" => Ok(Slot::Open(k)),
        _ => bail!("bad slot {s}: expected c<i> or o<j>"),
    }
}

fn copb(arg: &str) -> Result<CoPBMorphism> {
    let m: CoPBMorphism = serde_json::from_value(json_arg(arg)?)?;
    Ok(CoPBMorphism::new(m.src, m.tgt, m.braid)?)
}

fn copb_out(m: &CoPBMorphism) -> Out {
    ok(m.to_string(), serde_json::to_value(m).expect("serializable"))
}

/// `{"src": tree, "tgt": tree, "braid": [letters]}`
fn papb_morphism(arg: &str) -> Result<PaPBMorphism> {
    let v = json_arg(arg)?;
    let tree = |k: &str| -> Result<Tree> {
        Ok(Tree::parse(v.get(k).and_then(Value::as_str).ok_or_else(|| anyhow!("missing \"{k}\""))?)?)
    };
    let (src, tgt) = (tree("src")?, tree("tgt")?);
    let letters: Vec<i64> = serde_json::from_value(v.get("braid").cloned().unwrap_or(json!([])))?;
    Ok(PaPBMorphism::new(src.clone(), tgt, BraidWord::new(src.arity().1, letters)?)?)
}

fn papb_json(m: &PaPBMorphism) -> Value {
    json!({"src": m.src.to_string(), "tgt": m.tgt.to_string(), "braid": m.braid().letters()})
}

fn associator(v: Value) -> Result<Associator> {
    let j: AssociatorJson = serde_json::from_value(v).context("not associator JSON")?;
    Ok(Associator::from_json(&j)?)
}

fn suite_out(reps: Vec<SuiteReport>) -> Out {
    let ok = reps.iter().all(SuiteReport::passed);
    let text = reps.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n");
    Out { ok, text, json: serde_json::to_value(&reps).expect("serializable") }
}

fn chord(e: &DKElement) -> Out {
    ok(e.to_string(), serde_json::to_value(e.to_json()).expect("serializable"))
}

fn braid(cmd: BraidCmd) -> Result<Out> {
    Ok(match cmd {
        BraidCmd::Eq { a, b, strands } => {
            let eq = braids_equal(&BraidWord::parse(&a, strands)?, &BraidWord::parse(&b, strands)?)?;
            Out { ok: eq, text: if eq { "equal" } else { "not equal" }.into(), json: json!({ "equal": eq }) }
        }
        BraidCmd::Perm { word, strands } => {
            let p = underlying_permutation(&BraidWord::parse(&word, strands)?);
            ok(p.to_string(), json!(p.images()))
        }
        BraidCmd::Cable { word, strands, pos, width } => {
            let c = cable(&BraidWord::parse(&word, strands)?, pos, width)?;
            ok(c.to_string(), json!({"strands": c.strands(), "word": c.letters()}))
        }
    })
}

fn tree(cmd: TreeCmd) -> Result<Out> {
    Ok(match cmd {
        TreeCmd::Graft { outer, slot: s, inner } => {
            let t = graft(&Tree::parse(&outer)?, slot(&s)?, &Tree::parse(&inner)?)?;
            ok(t.to_string(), json!(t.to_string()))
        }
        TreeCmd::Omega { tree } => {
            let o = omega_map(&Tree::parse(&tree)?);
            ok(o.to_string(), serde_json::to_value(&o)?)
        }
        TreeCmd::Enum { open, closed, units, closed_only } => {
            let ts = if closed_only { enumerate_closed(closed, units) } else { enumerate(open, closed, units) };
            let names: Vec<String> = ts.iter().map(ToString::to_string).collect();
            ok(format!("{}\n{} trees", names.join("\n"), names.len()), json!(names))
        }
    })
}

fn copb_cmd(cmd: CopbCmd) -> Result<Out> {
    Ok(match cmd {
        CopbCmd::Compose { f, g } => copb_out(&copb_compose(&copb(&g)?, &copb(&f)?)?),
        CopbCmd::Insert { outer, slot: s, inner } => copb_out(&copb_insert(&copb(&outer)?, slot(&s)?, &copb(&inner)?)?),
        CopbCmd::Restrict { morphism, slot: s } => {
            let which = match slot(&s)? {
                Slot::Closed(i) => UnitSlot::Closed(i),
                Slot::Open(j) => UnitSlot::Open(j),
            };
            copb_out(&restrict_unit(&copb(&morphism)?, which)?)
        }
    })
}

fn papb_cmd(cmd: PapbCmd, seed: u64) -> Result<Out> {
    Ok(match cmd {
        PapbCmd::Decompose { morphism } => {
            let m = papb_morphism(&morphism)?;
            let d = decompose(&m, None, None)?;
            let back = d.recompose()?.equals(&m);
            let parts = [("mu", &d.mu), ("x_o", &d.x_o), ("x_c", &d.x_c), ("mu_prime", &d.mu_prime)];
            let text = parts.iter().map(|(k, p)| format!("{k}: {p}")).chain([format!("recomposes: {back}")]);
            let mut j: serde_json::Map<String, Value> = parts.iter().map(|(k, p)| (k.to_string(), papb_json(p))).collect();
            j.insert("recomposes".into(), json!(back));
            Out { ok: back, text: text.collect::<Vec<_>>().join("\n"), json: Value::Object(j) }
        }
        PapbCmd::Words { morphism } => {
            let w = to_generator_word(&papb_morphism(&morphism)?)?;
            ok(w.to_string(), json!(w.to_string()))
        }
        PapbCmd::CoherenceSelftest { instances } => {
            let mut rep = SuiteReport::new("generator relations");
            for d in coherence_diagrams() {
                rep.record(d.check(&PaPBModel).unwrap_or(false), || d.name.to_string());
            }
            let words = self_evaluation_suite(&mut ChaCha8Rng::seed_from_u64(seed), instances, 4, 6);
            suite_out(vec![rep, words])
        }
    })
}

fn cd_cmd(cmd: CdCmd) -> Result<Out> {
    Ok(match cmd {
        CdCmd::Normalize { expr, shape } => chord(&DKElement::parse(&expr, shape.strands, shape.degree)?),
        CdCmd::Insert { u, k, v, shape, inner_strands } => {
            let u = DKElement::parse(&u, shape.strands, shape.degree)?;
            chord(&dk_insert(&u, k, &DKElement::parse(&v, inner_strands, shape.degree)?)?)
        }
        CdCmd::Restrict { u, k, shape } => chord(&dk_restrict(&DKElement::parse(&u, shape.strands, shape.degree)?, k)?),
        CdCmd::Dims { shape } => {
            let d = dk_dimension(shape.strands, shape.degree);
            ok(d.to_string(), json!(d))
        }
    })
}

fn assoc_cmd(cmd: AssocCmd) -> Result<Out> {
    Ok(match cmd {
        AssocCmd::Solve { mu, degree, one_shot } => {
            let mu = parse_rational(&mu)?;
            let a = if one_shot { solve_associator_one_shot(&mu, degree)? } else { solve_associator(&mu, degree)? };
            let j = serde_json::to_value(a.to_json())?;
            ok(j.to_string(), j)
        }
        AssocCmd::Check { input } => {
            let a = associator(file_or_stdin(&input)?)?;
            let [h1, h2] = check_hexagons(&a);
            let res = [("pentagon", check_pentagon(&a)), ("hexagon1", h1), ("hexagon2", h2)];
            let text = res.iter().map(|(k, r)| format!("{k}: {r}")).collect::<Vec<_>>().join(", ");
            let json = res.iter().map(|(k, r)| (k.to_string(), json!(r.to_string()))).collect();
            Out { ok: res.iter().all(|(_, r)| r.is_zero()), text, json: Value::Object(json) }
        }
        AssocCmd::Eval { morphism, input } => {
            let y = papb_morphism(&morphism)?;
            let a = associator(file_or_stdin(&input)?)?;
            chord(&phi_eval(&a, &y)?)
        }
    })
}

fn mixed_cmd(cmd: MixedCmd) -> Result<Out> {
    Ok(match cmd {
        MixedCmd::Rho { triple } => {
            let r = rho(&prime_from_json(&json_arg(&triple)?)?)?;
            let j = json!({"shifted": r.shifted, "ordinary": r.ordinary, "payload": papb_json(&r.payload)});
            ok(format!("[{} shifted, {} ordinary] {}", r.shifted, r.ordinary, r.payload), j)
        }
        MixedCmd::Compose { outer, inners } => {
            let outer = prime_from_json(&json_arg(&outer)?)?;
            let inners = match json_arg(&inners)? {
                Value::Array(vs) => vs.iter().map(prime_from_json).collect::<Result<Vec<_>, _>>()?,
                _ => bail!("inners must be a JSON array of triples"),
            };
            let c = compose_prime(&outer, &inners)?;
            ok(c.to_string(), prime_to_json(&c))
        }
        MixedCmd::ApplyPhi { triple, input } => {
            let e = prime_from_json(&json_arg(&triple)?)?;
            let a = associator(file_or_stdin(&input)?)?;
            let img = apply_phi(&a, &e)?;
            ok(img.to_string(), papcd_to_json(&img))
        }
    })
}

fn coherence_cmd(cmd: CoherenceCmd) -> Result<Out> {
    let CoherenceCmd::Check { input, example } = cmd;
    let j: AlgebraJson = match (input, example) {
        (_, Some(name)) => examples::by_name(&name).ok_or_else(|| anyhow!("unknown example {name}"))?,
        (input, None) => serde_json::from_value(file_or_stdin(&input)?).context("not algebra JSON")?,
    };
    let data = match AlgebraData::from_json(&j) {
        Ok(d) => d,
        Err(e) => {
            return Ok(Out { ok: false, text: format!("rejected: {e}"), json: json!({"rejected": e.to_string()}) })
        }
    };
    let rep = check_coherence(&data)?;
    Ok(Out { ok: rep.passed(), text: rep.to_string(), json: serde_json::to_value(&rep)? })
}

fn run(cli: Cli) -> Result<Out> {
    match cli.cmd {
        Cmd::Braid(c) => braid(c),
        Cmd::Tree(c) => tree(c),
        Cmd::Copb(c) => copb_cmd(c),
        Cmd::Papb(c) => papb_cmd(c, cli.seed),
        Cmd::Cd(c) => cd_cmd(c),
        Cmd::Assoc(c) => assoc_cmd(c),
        Cmd::Mixed(c) => mixed_cmd(c),
        Cmd::Voronov(VoronovCmd::Check { degree, instances }) => {
            let v = build_cd_pap_instance(degree);
            Ok(suite_out(vec![voronov_suite(&mut ChaCha8Rng::seed_from_u64(cli.seed), &v, instances, 3)]))
        }
        Cmd::Coherence(c) => coherence_cmd(c),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let as_json = cli.json;
    match run(cli) {
        Ok(out) => {
            if as_json {
                println!("{}", out.json);
            } else {
                println!("{}", out.text);
            }
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
