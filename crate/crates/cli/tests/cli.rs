use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_prefcheck"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("bad json ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

struct Exported {
    dir: TempDir,
}

impl Exported {
    fn new() -> Self {
        let dir = TempDir::new().unwrap();
        let out = run(&["catalog", "--export", dir.path().to_str().unwrap(), "--entry", "eu3", "--entry", "fragile_unit", "--entry", "pareto2", "--entry", "appx1", "--entry", "split_hm", "--entry", "flimsy_0_3"]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
        Exported { dir }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn arg(&self, name: &str) -> String {
        self.path(name).to_str().unwrap().to_string()
    }
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn status_of(report: &Value, axiom: &str) -> String {
    report["verdicts"].as_array().unwrap().iter().find(|v| v["axiom"] == axiom).unwrap()["status"].as_str().unwrap().to_string()
}

#[test]
fn fragile_unit_reports_fragile() {
    let ex = Exported::new();
    let out = run(&["--json", "axioms", &ex.arg("fragile_unit.json"), "--axiom", "fragile"]);
    assert_eq!(code(&out), 0);
    assert_eq!(status_of(&json(&out), "fragile"), "holds");
}

#[test]
fn expectation_flags_gate_the_exit_code() {
    let ex = Exported::new();
    let pareto = ex.arg("pareto2.json");
    assert_eq!(code(&run(&["axioms", &pareto, "--axiom", "complete", "--expect", "complete=fails"])), 0);
    let out = run(&["--json", "axioms", &pareto, "--axiom", "complete", "--expect", "complete=holds"]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["mismatches"][0]["subject"], "complete");
    assert_eq!(code(&run(&["axioms", &pareto, "--expect", "complete"])), 2);
    assert_eq!(code(&run(&["axioms", &pareto, "--expect", "no_such=holds"])), 2);
    assert_eq!(code(&run(&["axioms", &pareto, "--axiom", "no_such"])), 2);
}

#[test]
fn eu3_default_run_succeeds() {
    let ex = Exported::new();
    let out = run(&["--json", "axioms", &ex.arg("eu3.json")]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    for ax in ["reflexive", "complete", "transitive", "mixture_continuous", "archimedean", "strong_archimedean", "linear", "convex", "concave", "independent"] {
        assert_eq!(status_of(&report, ax), "holds", "{ax}");
    }
}

#[test]
fn theorem_subcommand() {
    let ex = Exported::new();
    let out = run(&["--json", "theorem", "P3", &ex.arg("pareto2.json")]);
    assert_eq!(code(&out), 0);
    let r = &json(&out)["theorems"][0];
    assert_eq!(r["applicable"], true);
    assert_eq!(r["consistent"], true);

    let out = run(&["--json", "theorem", "T1", &ex.arg("appx1.json")]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["theorems"][0]["applicable"], false);

    let out = run(&["--json", "theorem", "T4", &ex.arg("quotient_split.json")]);
    assert_eq!(code(&out), 0);
    let rep = &json(&out)["theorems"][0]["representation"];
    assert_eq!(rep["calibrated"], true);
    assert_eq!(rep["verified"], true);

    assert_eq!(code(&run(&["theorem", "T9", &ex.arg("eu3.json")])), 2);
    assert_eq!(code(&run(&["theorem", "all", &ex.arg("flimsy_0_3.json")])), 0);
}

#[test]
fn represent_subcommand() {
    let ex = Exported::new();
    let out = run(&["--json", "represent", &ex.arg("eu3.json"), "--anchors", "0,2"]);
    assert_eq!(code(&out), 0);
    let r = json(&out);
    assert_eq!(r["utility"]["values"]["(0, 1, 0)"], "1/2");
    assert_eq!(r["verification"]["order_agreement"], true);
    assert!(!r["trace"].as_array().unwrap().is_empty());

    assert_eq!(code(&run(&["represent", &ex.arg("eu3.json"), "--anchors", "1,1"])), 2);
    assert_eq!(code(&run(&["represent", &ex.arg("eu3.json"), "--anchors", "0,99"])), 2);
    assert_eq!(code(&run(&["represent", &ex.arg("eu3.json"), "--anchors", "zero"])), 2);

    let out = run(&["--json", "represent", &ex.arg("split_hm.json"), "--quotient"]);
    assert_eq!(code(&out), 0);
    let values = &json(&out)["utility"]["values"];
    for (p, u) in [("(1/4, 0)", "1/4"), ("(1/2, 0)", "1/2"), ("(1, 0)", "1"), ("(0, 1/2)", "0")] {
        assert_eq!(values[p], u, "{p}");
    }
}

#[test]
fn catalog_subcommand() {
    assert_eq!(code(&run(&["catalog"])), 0);
    let out = run(&["--json", "catalog", "--entry", "appx2"]);
    assert_eq!(code(&out), 0);
    let entries = json(&out)["entries"].as_array().unwrap().clone();
    assert_eq!(entries.len(), 1);
    assert!(entries[0]["mismatches"].as_array().unwrap().is_empty());
    assert_eq!(code(&run(&["catalog", "--entry", "no_such"])), 2);
}

#[test]
fn exported_files_round_trip_through_every_subcommand() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&run(&["catalog", "--export", dir.path().to_str().unwrap()])), 0);
    let mut names: Vec<String> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    assert_eq!(names.len(), 11);
    for name in &names {
        let p = dir.path().join(name);
        let p = p.to_str().unwrap();
        let out = run(&["axioms", p]);
        assert_eq!(code(&out), 0, "{name}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn malformed_models_exit_two() {
    let dir = TempDir::new().unwrap();
    let bad = write(dir.path(), "bad.json", "{ not json");
    let out = run(&["axioms", &bad]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("malformed"));
    let extra = write(
        dir.path(),
        "extra.json",
        r#"{"space":{"kind":"simplex","dim":1},"relation":{"kind":"multi_utility","utilities":[["1","0"]]},"universe":{"points":[["1","0"]]},"colour":"red"}"#,
    );
    assert_eq!(code(&run(&["axioms", &extra])), 2);
    let outside = write(
        dir.path(),
        "outside.json",
        r#"{"space":{"kind":"simplex","dim":1},"relation":{"kind":"multi_utility","utilities":[["1","0"]]},"universe":{"points":[["2","-1"]]}}"#,
    );
    assert_eq!(code(&run(&["axioms", &outside])), 2);
    assert_eq!(code(&run(&["axioms", dir.path().join("missing.json").to_str().unwrap()])), 2);
}

#[test]
fn grid_and_depth_override_the_universe() {
    let ex = Exported::new();
    let eu3 = ex.arg("eu3.json");
    let base = json(&run(&["--json", "axioms", &eu3, "--axiom", "complete"]));
    let bare = json(&run(&["--json", "axioms", &eu3, "--axiom", "complete", "--closure-depth", "0"]));
    let fine = json(&run(&["--json", "axioms", &eu3, "--axiom", "complete", "--grid", "1/3,2/3"]));
    assert_eq!(bare["universe"]["closure"], 3);
    assert_eq!(base["universe"]["closure"], 12);
    assert_eq!(fine["universe"]["closure"], 9);
    assert_eq!(code(&run(&["axioms", &eu3, "--grid", "0,1/2"])), 2);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let ex = Exported::new();
    for args in [vec!["--json", "axioms"], vec!["--pretty", "theorem", "all"], vec!["--json", "represent"]] {
        let mut full: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        full.push(ex.arg("eu3.json"));
        let full: Vec<&str> = full.iter().map(String::as_str).collect();
        let a = run(&full);
        let b = run(&full);
        assert_eq!(a.stdout, b.stdout);
    }
    let a = run(&["--json", "catalog"]);
    let b = run(&["--json", "catalog"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn fuzz_is_seeded_and_sound() {
    let a = bin().args(["--json", "fuzz", "--count", "6"]).env("PREFCHECK_SEED", "11").output().unwrap();
    let b = bin().args(["--json", "fuzz", "--count", "6"]).env("PREFCHECK_SEED", "11").output().unwrap();
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let r = json(&a);
    assert_eq!(r["seed"], 11);
    assert!(r["refutations"].as_array().unwrap().is_empty());
    let bad = bin().args(["fuzz", "--count", "1"]).env("PREFCHECK_SEED", "minus one").output().unwrap();
    assert_eq!(code(&bad), 2);
}
