use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

use metlie::cochain::{Cochain, Rep};
use metlie::json::{parse, render};
use metlie::linalg::{q, Matrix};
use metlie::twofold::{TwofoldData, TwofoldJson};

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("metlie-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn metlie(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_metlie")).args(args).output().expect("binary runs")
}

fn report(args: &[&str]) -> Value {
    let out = metlie(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn verify_abelian_plane() {
    let r = report(&["verify", &data("abelian2.json")]);
    assert_eq!(r["jacobi"], "pass");
    assert_eq!(r["passed"], true);
    assert!(r.get("failures").is_none());
}

#[test]
fn verify_reports_the_failing_triple() {
    let r = report(&["verify", &data("heisenberg_bad.json")]);
    assert_eq!(r["passed"], false);
    assert_eq!(r["invariance"], "fail");
    assert_eq!(r["failures"]["invariance"], serde_json::json!([0, 1, 2]));
}

#[test]
fn oscillators_with_permuted_weights() {
    let r = report(&["isomorphic", &data("osc123.json"), &data("osc132.json")]);
    assert_eq!(r["isomorphic"], true);
    let f = r["witness"]["F"].as_array().unwrap();
    assert_eq!(f.len(), 8);

    let r = report(&["isomorphic", &data("osc123.json"), &data("osc124.json")]);
    assert_eq!(r["isomorphic"], false);
    assert!(r["witness"].is_null());
}

#[test]
fn classify_index2_cases() {
    let r = report(&["classify-index2", &data("l2_21.json")]);
    assert_eq!(r, serde_json::json!({"case": 1, "lambda": ["1", "2"]}));

    let r = report(&["classify-index2", &data("osc_plane3.json")]);
    assert_eq!(r["case"], 2);
    assert_eq!(r["invariant"]["kind"], "GRASSMANNIAN");
}

#[test]
fn family_d_signature_and_centre() {
    let r = report(&["signature", &data("d2.json")]);
    assert_eq!((r["negative"].as_u64(), r["positive"].as_u64()), (Some(2), Some(7)));
    let r = report(&["centre", &data("d2.json")]);
    assert_eq!(r["dim"], 2);
    let r = report(&["regular", &data("d2.json")]);
    assert_eq!(r["regular"], true);
    let r = report(&["decompose-check", &data("d2.json")]);
    assert_eq!(r["decision"], "indecomposable");
}

#[test]
fn zero_weight_is_split_off() {
    let r = report(&["decompose-check", &data("osc_zero.json")]);
    assert_eq!(r["decision"], "decomposable");
    assert_eq!(r["ideal"]["dim"], 1);
}

#[test]
fn input_errors_exit_one_and_name_the_field() {
    let out = metlie(&["invariant", &data("bad_rational.json")]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad_rational.json"), "{err}");
    assert!(err.contains("line 2"), "{err}");
    assert!(err.contains("lambda[1][0]"), "{err}");

    let out = metlie(&["verify", &data("unknown_field.json")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("colour"));

    let out = metlie(&["verify", &data("missing.json")]);
    assert_eq!(out.status.code(), Some(1));

    // invariant needs a family, not an algebra
    let out = metlie(&["invariant", &data("abelian2.json")]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn orbit_bound_exceeded_exits_two() {
    let out = metlie(&["--orbit-bound", "2", "invariant", &data("osc_plane3.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let r = report(&["--orbit-bound", "3", "invariant", &data("osc_plane3.json")]);
    assert_eq!(r["invariant"]["kind"], "GRASSMANNIAN");
}

#[test]
fn output_is_byte_identical() {
    for args in [
        vec!["isomorphic", "osc123.json", "osc132.json"],
        vec!["invariant", "osc_plane3.json"],
        vec!["build", "d2.json"],
        vec!["extract", "d2.json"],
    ] {
        let paths: Vec<String> = args[1..].iter().map(|a| data(a)).collect();
        let mut full = vec![args[0]];
        full.extend(paths.iter().map(String::as_str));
        let a = metlie(&full);
        let b = metlie(&full);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn out_flag_writes_the_report() {
    let path = scratch("verify.json");
    let out = metlie(&["verify", &data("abelian2.json"), "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r["passed"], true);
}

#[test]
fn build_verify_extract_round_trip() {
    let built = scratch("d2_algebra.json");
    let out = metlie(&["build", &data("d2.json"), "--out", built.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let built = built.to_str().unwrap();
    assert_eq!(report(&["verify", built])["passed"], true);

    let extracted = report(&["extract", built]);
    let data_path = scratch("d2_extracted.json");
    std::fs::write(&data_path, render(&extracted["data"])).unwrap();
    let data_path = data_path.to_str().unwrap();
    assert_eq!(report(&["verify", data_path])["passed"], true);
    assert_eq!(report(&["signature", data_path]), report(&["signature", built]));
    assert_eq!(report(&["regular", data_path])["regular"], true);
    let r = report(&["equivalent", data_path, data_path]);
    assert_eq!(r["equivalent"], true);
}

#[test]
fn equivalent_recovers_a_shift() {
    let rep = Rep::trivial(2, Matrix::identity(2)).unwrap();
    let mut alpha = Cochain::zero(2, 2, 2);
    alpha.set(&[0, 1], vec![q(1), q(0)]).unwrap();
    let d1 = TwofoldData::new(rep, alpha, metlie::cochain::ScalarForm::zero(3, 2)).unwrap();
    let mut tau = Cochain::zero(1, 2, 2);
    tau.set(&[0], vec![q(0), q(2)]).unwrap();
    tau.set(&[1], vec![q(1), q(-1)]).unwrap();
    let d2 = d1.act(&tau).unwrap();

    let (p1, p2) = (scratch("shift1.json"), scratch("shift2.json"));
    std::fs::write(&p1, render(&d1.to_json())).unwrap();
    std::fs::write(&p2, render(&d2.to_json())).unwrap();
    let r = report(&["equivalent", p1.to_str().unwrap(), p2.to_str().unwrap()]);
    assert_eq!(r["equivalent"], true);
    let tau_json = parse(&r["tau"].to_string()).unwrap();
    let found = Cochain::from_json(tau_json, 2, 2, "tau").unwrap();
    let moved: TwofoldJson = d1.act(&found).unwrap().to_json();
    assert_eq!(serde_json::to_value(moved).unwrap(), serde_json::to_value(d2.to_json()).unwrap());

    let mut other = d1.to_json();
    other.alpha.entries.clear();
    let p3 = scratch("shift3.json");
    std::fs::write(&p3, render(&other)).unwrap();
    let r = report(&["equivalent", p1.to_str().unwrap(), p3.to_str().unwrap()]);
    assert_eq!(r["equivalent"], false);
    assert!(r["tau"].is_null());
}
