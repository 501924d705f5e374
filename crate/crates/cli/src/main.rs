//! `metlie`: file-based front-end to the library.
//!
//! Every verb prints one JSON report. Exit status 0 means the answer was
//! computed (including mathematical "no" answers), 1 an input error and 2
//! an unsupported case.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use metlie::classify::{
    build_family, classify_index2, invariant, isomorphic_family, FamilyJson, FamilySpec, DEFAULT_ORBIT_BOUND,
};
use metlie::decomp::{euclidean_decomposable, induced_ideal, verify_witness, Decision, DecompWitness, DecompWitnessJson, WitnessCheck};
use metlie::json::{matrix_to_json, parse, render, to_rats};
use metlie::liecore::{AlgebraJson, Check, MetricLieAlgebra, Subspace};
use metlie::twofold::{extension_equivalent, extract, regularity, TwofoldData, TwofoldJson};
use metlie::Error;

#[derive(Parser)]
#[command(name = "metlie", version, about = "Twofold extensions and metric Lie algebras in exact arithmetic")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for randomized procedures.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest m for the signed-permutation orbit search.
    #[arg(long, global = true, default_value_t = DEFAULT_ORBIT_BOUND)]
    orbit_bound: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
}

#[derive(Subcommand)]
enum Verb {
    /// Check antisymmetry, Jacobi, invariance and nondegeneracy.
    Verify { input: PathBuf },
    /// Build the metric Lie algebra of twofold data or a family descriptor.
    Build { input: PathBuf },
    /// Basis of the centre.
    Centre { input: PathBuf },
    /// Basis of the derived algebra.
    Derived { input: PathBuf },
    /// Signature of the inner product.
    Signature { input: PathBuf },
    /// Decide whether the centre is exactly the dual of l.
    Regular { input: PathBuf },
    /// Decide extension equivalence of two data on the same representation.
    Equivalent { first: PathBuf, second: PathBuf },
    /// Verify a decomposition witness, or run the Euclidean decision.
    DecomposeCheck { input: PathBuf, witness: Option<PathBuf> },
    /// Canonical orbit invariant of a family member.
    Invariant { input: PathBuf },
    /// Decide isomorphism of two family members, with a witness when possible.
    Isomorphic { first: PathBuf, second: PathBuf },
    /// Classify an index-two family member.
    #[command(name = "classify-index2")]
    ClassifyIndex2 { input: PathBuf },
    /// Write an algebra as a twofold extension.
    Extract { input: PathBuf },
}

/// A failure tied to the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(path: Option<&Path>, e: Error) -> Self {
        let code = if matches!(e, Error::Unsupported(_)) { 2 } else { 1 };
        let message = match path {
            Some(p) => format!("{}: {e}", p.display()),
            None => e.to_string(),
        };
        Failure { code, message }
    }
}

type Run<T> = Result<T, Failure>;

fn at<T>(path: &Path, r: metlie::Result<T>) -> Run<T> {
    r.map_err(|e| Failure::new(Some(path), e))
}

fn plain<T>(r: metlie::Result<T>) -> Run<T> {
    r.map_err(|e| Failure::new(None, e))
}

enum Input {
    Algebra(MetricLieAlgebra),
    Data(TwofoldData),
    Family(FamilySpec),
}

fn read(path: &Path) -> Run<String> {
    fs::read_to_string(path).map_err(|e| Failure { code: 1, message: format!("{}: cannot read: {e}", path.display()) })
}

/// Loads any of the three schemas, told apart by their keys.
fn load(path: &Path) -> Run<Input> {
    let text = read(path)?;
    let value: Value = at(path, parse(&text))?;
    let has = |k: &str| value.get(k).is_some();
    if has("family") {
        let j: FamilyJson = at(path, parse(&text))?;
        Ok(Input::Family(at(path, FamilySpec::from_json(j))?))
    } else if has("gramA") {
        let j: TwofoldJson = at(path, parse(&text))?;
        Ok(Input::Data(at(path, TwofoldData::from_json(j))?))
    } else if has("gram") {
        let j: AlgebraJson = at(path, parse(&text))?;
        Ok(Input::Algebra(at(path, MetricLieAlgebra::from_json(j))?))
    } else {
        Err(Failure {
            code: 1,
            message: format!("{}: expected an algebra (`gram`), twofold data (`gramA`) or a family (`family`)", path.display()),
        })
    }
}

fn load_data(path: &Path) -> Run<TwofoldData> {
    match load(path)? {
        Input::Data(d) => Ok(d),
        Input::Family(s) => {
            warn_inadmissible(&s);
            at(path, build_family(&s))
        }
        Input::Algebra(_) => Err(Failure { code: 1, message: format!("{}: expected twofold data or a family", path.display()) }),
    }
}

fn load_algebra(path: &Path) -> Run<MetricLieAlgebra> {
    match load(path)? {
        Input::Algebra(g) => Ok(g),
        _ => Ok(load_data(path)?.build()),
    }
}

fn load_family(path: &Path) -> Run<FamilySpec> {
    match load(path)? {
        Input::Family(s) => Ok(s),
        _ => Err(Failure { code: 1, message: format!("{}: expected a family descriptor", path.display()) }),
    }
}

fn warn_inadmissible(s: &FamilySpec) {
    if !s.admissible().unwrap_or(false) {
        eprintln!("warning: the weights are not admissible; the algebra is decomposable");
    }
}

fn check_json(c: &Check) -> Value {
    match c {
        Check::Pass => json!("pass"),
        Check::Fail { .. } => json!("fail"),
    }
}

fn subspace_json(s: &Subspace) -> Value {
    json!({ "dim": s.dim(), "basis": s.basis().iter().map(|v| to_rats(v)).collect::<Vec<_>>() })
}

fn verify_report(g: &MetricLieAlgebra) -> Value {
    let r = g.verify();
    let checks = [("antisymmetry", &r.antisymmetry), ("jacobi", &r.jacobi), ("invariance", &r.invariance), ("nondegeneracy", &r.nondegeneracy)];
    let mut out = serde_json::Map::new();
    let mut failures = serde_json::Map::new();
    for (name, c) in checks {
        out.insert(name.into(), check_json(c));
        if let Check::Fail { at } = c {
            failures.insert(name.into(), json!(at));
        }
    }
    out.insert("passed".into(), json!(r.passed()));
    if !failures.is_empty() {
        out.insert("failures".into(), Value::Object(failures));
    }
    Value::Object(out)
}

fn decision_report(d: &TwofoldData) -> Run<(Value, u8)> {
    Ok(match plain(euclidean_decomposable(d))? {
        Decision::Decomposable(w) => {
            let ideal = match &w {
                Some(w) => Some(subspace_json(&plain(induced_ideal(d, w))?)),
                None => None,
            };
            (json!({ "decision": "decomposable", "witness": w.map(|w| w.to_json()), "ideal": ideal }), 0)
        }
        Decision::Indecomposable => (json!({ "decision": "indecomposable" }), 0),
        Decision::Undecided(reason) => (json!({ "decision": "undecided", "reason": reason }), 2),
    })
}

fn run(cli: &Cli) -> Run<(Value, u8)> {
    let bound = cli.orbit_bound;
    let report = match &cli.verb {
        Verb::Verify { input } => verify_report(&load_algebra(input)?),
        Verb::Build { input } => serde_json::to_value(load_algebra(input)?.to_json()).expect("serializable"),
        Verb::Centre { input } => subspace_json(&load_algebra(input)?.centre()),
        Verb::Derived { input } => subspace_json(&load_algebra(input)?.derived()),
        Verb::Signature { input } => {
            let s = plain(load_algebra(input)?.signature())?;
            json!({ "negative": s.negative, "positive": s.positive, "nullity": s.nullity, "index": s.index() })
        }
        Verb::Regular { input } => {
            let r = regularity(&load_data(input)?);
            let w: Vec<Value> = r.witnesses.iter().map(|(l0, a0)| json!({ "L0": to_rats(l0), "A0": to_rats(a0) })).collect();
            json!({ "regular": r.regular, "witnesses": w })
        }
        Verb::Equivalent { first, second } => {
            let (d1, d2) = (load_data(first)?, load_data(second)?);
            let tau = plain(extension_equivalent(&d1, &d2))?;
            json!({ "equivalent": tau.is_some(), "tau": tau.map(|t| t.to_json()) })
        }
        Verb::DecomposeCheck { input, witness } => {
            let d = load_data(input)?;
            let Some(wpath) = witness else { return decision_report(&d) };
            let j: DecompWitnessJson = at(wpath, parse(&read(wpath)?))?;
            let w = at(wpath, DecompWitness::from_json(j, d.l(), d.a()))?;
            match at(wpath, verify_witness(&d, &w))? {
                WitnessCheck::Holds => {
                    let ideal = plain(induced_ideal(&d, &w))?;
                    let g = d.build();
                    json!({ "holds": true, "ideal": subspace_json(&ideal), "nondegenerate": g.is_nondegenerate_ideal(&ideal) })
                }
                WitnessCheck::Fails { condition, detail } => json!({ "holds": false, "condition": condition, "detail": detail }),
            }
        }
        Verb::Invariant { input } => {
            serde_json::to_value(plain(invariant(&load_family(input)?, bound))?.to_json()).expect("serializable")
        }
        Verb::Isomorphic { first, second } => {
            let (s1, s2) = (load_family(first)?, load_family(second)?);
            let out = plain(isomorphic_family(&s1, &s2, bound))?;
            let witness = out.witness.map(|w| {
                json!({ "S": matrix_to_json(&w.s), "U": matrix_to_json(&w.u), "tau": w.tau.to_json(), "F": matrix_to_json(&w.f) })
            });
            let mut v = json!({ "isomorphic": out.isomorphic, "witness": witness });
            if let Some(reason) = out.reason {
                v["reason"] = json!(reason);
            }
            v
        }
        Verb::ClassifyIndex2 { input } => {
            serde_json::to_value(plain(classify_index2(&load_family(input)?, bound))?).expect("serializable")
        }
        Verb::Extract { input } => {
            let ex = at(input, extract(&load_algebra(input)?))?;
            json!({ "data": ex.data.to_json(), "frame": matrix_to_json(&ex.frame) })
        }
    };
    Ok((report, 0))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Format::Json = cli.format;
    match run(&cli) {
        Ok((report, code)) => {
            let text = render(&report);
            match &cli.out {
                Some(p) => {
                    if let Err(e) = fs::write(p, text) {
                        eprintln!("error: {}: cannot write: {e}", p.display());
                        return ExitCode::from(1);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
