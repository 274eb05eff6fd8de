use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_witnesskit"));
    c.env_remove("WITNESSKIT_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)))
}

fn write_witness(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name);
    let p = path.to_str().unwrap().to_string();
    let mut all = vec!["build-witness"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--out", &p]);
    let o = run(&all);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    p
}

/// `(trace, class, margin)` per CSV row; the params column is quoted JSON.
fn rows(out: &Output) -> Vec<(f64, String, Option<f64>)> {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    text.lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.rsplitn(7, ',').collect();
            // reversed: margin, npt_floor, bound, is_ppt, class, trace, rest
            let margin = if f[0].is_empty() { None } else { Some(f[0].parse().unwrap()) };
            (f[5].parse().unwrap(), f[4].to_string(), margin)
        })
        .collect()
}

fn trace_of(w: &Value) -> f64 {
    let n = w["rows"].as_u64().unwrap() as usize;
    let re = w["re"].as_array().unwrap();
    (0..n).map(|i| re[i * n + i].as_f64().unwrap()).sum()
}

#[test]
fn canonical_witness_trace() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_witness(dir.path(), "w.json", &["--kind", "canonical", "--d", "4", "--n", "2"]);
    let w: Value = serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
    // Tr I − Tr Φ − Tr(UUᵀ) = 16 − 4 − 4.
    assert!((trace_of(&w) - 8.0).abs() < 1e-12);
    assert_eq!(w["provenance"]["kind"], "canonical");
    assert_eq!(w["d1"], 4);
}

#[test]
fn embedded_provenance_records_combo() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_witness(dir.path(), "w.json", &["--kind", "embedded", "--d1", "4", "--d2", "5", "--combo", "0,1,2,4", "--n", "2"]);
    let w: Value = serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
    assert_eq!(w["provenance"]["combo"], serde_json::json!([0, 1, 2, 4]));
    assert_eq!(w["d2"], 5);
}

#[test]
fn usage_errors_exit_two() {
    let o = run(&["build-witness", "--kind", "canonical", "--d", "4", "--lambda", "1.5,1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("1.5"));
    assert_eq!(run(&["build-witness", "--kind", "partition", "--d", "8", "--mu", "2,1"]).status.code(), Some(2));
    assert_eq!(run(&["verify-witness", "--in", "/nonexistent/w.json"]).status.code(), Some(2));
    assert_eq!(run(&["enumerate", "--partitions", "3", "--tol", "bogus=1"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn verify_canonical_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_witness(dir.path(), "w.json", &["--kind", "canonical", "--d", "4", "--n", "2"]);
    let a = run(&["verify-witness", "--in", &p, "--seed", "7", "--restarts", "200"]);
    assert_eq!(a.status.code(), Some(0));
    let r = json(&a);
    assert_eq!(r["result"]["report"]["is_ew"], true);
    assert!(r["result"]["report"]["min_value"].as_f64().unwrap() >= -1e-8);
    assert_eq!(r["seed"], 7);
    assert_eq!(r["provenance"]["kind"], "canonical");
    assert!(r["tolerances"]["cert"].is_number());
    assert_eq!(r["version"], env!("CARGO_PKG_VERSION"));
    let b = run(&["verify-witness", "--in", &p, "--seed", "7", "--restarts", "200"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn extended_witness_field_dependence() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_witness(dir.path(), "w.json", &["--kind", "extended", "--d", "4"]);
    let c = run(&["verify-witness", "--in", &p, "--field", "complex", "--restarts", "40"]);
    assert_eq!(c.status.code(), Some(1));
    assert_eq!(json(&c)["result"]["report"]["is_ew"], false);
    let r = run(&["verify-witness", "--in", &p, "--field", "real", "--restarts", "40"]);
    assert_eq!(r.status.code(), Some(0));
}

#[test]
fn sweep_canonical_respects_bound() {
    let o = run(&["sweep", "--family", "canonical", "--d", "4", "--n", "2", "--draws", "1000", "--seed", "3"]);
    assert!(o.status.success());
    let r = rows(&o);
    assert_eq!(r.len(), 1000);
    let min = r.iter().map(|x| x.0).fold(f64::INFINITY, f64::min);
    assert!(min >= -0.2 - 1e-10);
    assert!(String::from_utf8_lossy(&o.stderr).contains("min_margin="));
}

#[test]
fn sweep_partition_respects_bound() {
    let o = run(&["sweep", "--family", "partition", "--d", "8", "--mu", "2,2", "--draws", "300"]);
    assert!(o.status.success());
    let min = rows(&o).iter().map(|x| x.0).fold(f64::INFINITY, f64::min);
    assert!(min >= -1.0 / 9.0 - 1e-10);
}

#[test]
fn boundary_sweep_saturates() {
    for args in [
        &["--family", "canonical", "--d", "6", "--n", "3"][..],
        &["--family", "partition", "--d", "8", "--mu", "2,2"][..],
    ] {
        let mut all = vec!["sweep", "--mode", "boundary", "--draws", "50"];
        all.extend_from_slice(args);
        let o = run(&all);
        assert!(o.status.success());
        for (_, class, margin) in rows(&o) {
            assert_eq!(class, "ppt_entangled_detected");
            assert!(margin.unwrap().abs() <= 1e-12);
        }
    }
}

#[test]
fn npt_sweep_and_no_bound_family() {
    let o = run(&["sweep", "--family", "canonical", "--d", "4", "--n", "2", "--mode", "npt-violating", "--draws", "200"]);
    assert!(o.status.success());
    for (t, class, _) in rows(&o) {
        assert!(t >= -1.0 - 1e-10);
        assert!(class != "bound_violated");
    }
    let o = run(&["sweep", "--family", "extended", "--d", "4", "--draws", "10"]);
    assert!(o.status.success());
    assert!(rows(&o).iter().all(|(_, c, m)| c == "no-bound" && m.is_none()));
}

#[test]
fn seed_from_environment() {
    let args = ["sweep", "--family", "canonical", "--d", "5", "--n", "2", "--draws", "20"];
    let a = bin().args(args).env("WITNESSKIT_SEED", "11").output().unwrap();
    let mut with_flag = args.to_vec();
    with_flag.extend_from_slice(&["--seed", "11"]);
    let b = run(&with_flag);
    assert_eq!(a.stdout, b.stdout);
    let c = run(&args);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn build_state_and_classify() {
    let dir = tempfile::tempdir().unwrap();
    let w = write_witness(dir.path(), "w.json", &["--kind", "canonical", "--d", "4", "--n", "2"]);
    let s = dir.path().join("s.json");
    let o = run(&["build-state", "--family", "canonical", "--d", "4", "--n", "2", "--a0", "1", "--out", s.to_str().unwrap()]);
    assert!(o.status.success());
    let rec: Value = serde_json::from_str(&std::fs::read_to_string(&s).unwrap()).unwrap();
    assert_eq!(rec["result"]["family"], "canonical");
    assert_eq!(rec["result"]["params"]["a0"], 1.0);
    assert_eq!(rec["result"]["conditions"]["ppt_ok"], true);

    let c = run(&["classify", "--witness", &w, "--state", s.to_str().unwrap()]);
    assert_eq!(c.status.code(), Some(0));
    let r = json(&c);
    assert_eq!(r["result"]["detection"]["class"], "ppt_entangled_detected");
    assert!((r["result"]["detection"]["trace"].as_f64().unwrap() + 0.2).abs() < 1e-12);
    assert_eq!(r["result"]["conditions_held"], true);

    // Rebuilding from the emitted coefficients reproduces the operator.
    let params = dir.path().join("p.json");
    std::fs::write(&params, rec["result"]["params"].to_string()).unwrap();
    let again = run(&["build-state", "--family", "canonical", "--params", params.to_str().unwrap()]);
    assert_eq!(json(&again)["result"]["state"], rec["result"]["state"]);
}

#[test]
fn classify_flags_false_family_claim() {
    let dir = tempfile::tempdir().unwrap();
    let w = write_witness(dir.path(), "w.json", &["--kind", "canonical", "--d", "4", "--n", "2"]);
    // Maximally entangled state labelled as a valid family member.
    let mut re = vec![0.0; 256];
    for i in 0..4 {
        for j in 0..4 {
            re[(5 * i) * 16 + 5 * j] = 0.25;
        }
    }
    let state = serde_json::json!({
        "state": { "d1": 4, "d2": 4, "rows": 16, "cols": 16, "re": re, "im": vec![0.0; 256] },
        "conditions": { "positivity_ok": true, "ppt_ok": true, "violated": [], "min_margin": 0.0, "evaluated": 1 },
    });
    let s = dir.path().join("s.json");
    std::fs::write(&s, state.to_string()).unwrap();
    let o = run(&["classify", "--witness", &w, "--state", s.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    // Without the claim the same state is simply classified.
    std::fs::write(&s, state["state"].to_string()).unwrap();
    let o = run(&["classify", "--witness", &w, "--state", s.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["result"]["detection"]["class"], "npt_window");
}

#[test]
fn enumerate_counts() {
    let p = json(&run(&["enumerate", "--partitions", "5"]));
    assert_eq!(p["result"]["count"], 7);
    let c = json(&run(&["enumerate", "--combos", "5", "4"]));
    assert_eq!(c["result"]["count"], 5);
    assert_eq!(c["result"]["items"][0], serde_json::json!([0, 1, 2, 3]));
}

#[test]
fn decompose_roundtrip() {
    let o = run(&["decompose", "--d", "4", "--upper", "2,0,0,0,0,3"]);
    assert!(o.status.success());
    let r = json(&o);
    assert!(r["result"]["reconstruction_error"].as_f64().unwrap() < 1e-12);
    let mut l: Vec<f64> = r["result"]["form"]["lambdas"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    l.sort_by(f64::total_cmp);
    assert!((l[0] - 2.0).abs() < 1e-12 && (l[1] - 3.0).abs() < 1e-12);
}
