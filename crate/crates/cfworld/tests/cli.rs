use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn cfworld(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cfworld")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn solve_tstar_under_x2() {
    let o = cfworld(&["solve", "--model", &fixture("tstar.json"), "--context", "U=0", "--set", "X2<-1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "(0,1,1)\n");
}

#[test]
fn eval_exit_codes() {
    let m = fixture("tstar.json");
    let ok = cfworld(&["eval", "--model", &m, "--context", "U=0", "--formula", "[X3<-1](X1=1 & X2=0)"]);
    assert_eq!((ok.status.code(), stdout(&ok).as_str()), (Some(0), "true\n"));
    let no = cfworld(&["eval", "--model", &m, "--context", "U=0", "--formula", "X1=1"]);
    assert_eq!((no.status.code(), stdout(&no).as_str()), (Some(1), "false\n"));
    let bad = cfworld(&["eval", "--model", &m, "--context", "U=0", "--formula", "[X1<-1](X2=1"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("position"));
}

#[test]
fn eval_in_the_example() {
    let s = fixture("example-c5.json");
    let ante = "[X1<-1; X2<-1](X3=1) & [X1<-1; X3<-1](X2=1) & [X1<-1](X2=0)";
    assert_eq!(cfworld(&["eval", "--structure", &s, "--world", "0,0,0", "--formula", ante]).status.code(), Some(0));
    let o = cfworld(&["eval", "--structure", &s, "--world", "0,0,0", "--formula", "[X1<-1](X2=1)"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn classify_reports() {
    let o = cfworld(&["classify", "--model", &fixture("tstar.json")]);
    let out = stdout(&o);
    assert!(out.contains("class: Tun") && out.contains("not recursive"), "{out}");
    let o = cfworld(&["classify", "--model", &fixture("forestfire.json")]);
    assert!(stdout(&o).contains("recursive: order L, ML, F"), "{}", stdout(&o));
    let o = cfworld(&["classify", "--structure", &fixture("example-c5.json")]);
    assert!(stdout(&o).contains("recursive: false"));
    assert_eq!(cfworld(&["classify"]).status.code(), Some(2));
}

#[test]
fn translate_and_certify_both_ways() {
    let m = scratch("ff-structure.json");
    let o = cfworld(&["translate", "--to", "structure", "--in", &fixture("forestfire.json"), "--out", m.to_str().unwrap(), "--certify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let t = scratch("ff-model.json");
    let o = cfworld(&["translate", "--to", "model", "--in", m.to_str().unwrap(), "--world", "0,0,0,0", "--out", t.to_str().unwrap(), "--certify"]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), String::from_utf8_lossy(&o.stderr));
    let o = cfworld(&["translate", "--to", "model", "--in", m.to_str().unwrap(), "--per-world", "--out", t.to_str().unwrap(), "--certify"]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), String::from_utf8_lossy(&o.stderr));
    // T* has no structure, the Example has no model
    let o = cfworld(&["translate", "--to", "structure", "--in", &fixture("tstar.json"), "--out", m.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = cfworld(&["translate", "--to", "model", "--in", &fixture("example-c5.json"), "--world", "0,0,0", "--out", t.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn axcheck_verdicts_and_witness() {
    let w = scratch("c5-witness.json");
    let r = scratch("c5-report.json");
    let o = cfworld(&["axcheck", "--schema", "C5", "--class", "Mf+", "--witness", w.to_str().unwrap(), "--report", r.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let witness = cfworld::format::read_structure(&std::fs::read_to_string(&w).unwrap()).unwrap();
    assert!(witness.world_count() > 0);
    let rep: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&r).unwrap()).unwrap();
    assert_eq!(rep["subcommand"], "axcheck");
    assert_eq!(rep["verdict"], "countermodel");
    assert_eq!(rep["passed"], false);
    assert_eq!(rep["witnesses"][0], w.display().to_string());

    assert_eq!(cfworld(&["axcheck", "--schema", "C5", "--class", "Mrec"]).status.code(), Some(0));
    assert_eq!(cfworld(&["axcheck", "--schema", "C4", "--class", "T", "--mode", "random"]).status.code(), Some(2));
    assert_eq!(cfworld(&["axcheck", "--schema", "C9", "--class", "T"]).status.code(), Some(2));
    assert_eq!(cfworld(&["axcheck", "--schema", "C4", "--class", "Q"]).status.code(), Some(2));
}

#[test]
fn random_runs_record_their_seed() {
    let r = scratch("random-report.json");
    let o = cfworld(&[
        "axcheck", "--schema", "C4", "--class", "Tun", "--mode", "random", "--budget", "200", "--seed", "11",
        "--report", r.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rep: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&r).unwrap()).unwrap();
    assert_eq!(rep["seed"], 11);
    assert_eq!(rep["verdict"], "not-found");
    assert!(rep["wall_time_ms"].as_f64().unwrap() >= 0.0);
}

#[test]
fn prove_exit_codes() {
    assert_eq!(cfworld(&["prove", "--script", &fixture("lemma-a1.json")]).status.code(), Some(0));
    let o = cfworld(&["prove", "--script", &fixture("neg-phi.json"), "--without", "A4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("line 8:"), "{}", stdout(&o));
    assert_eq!(cfworld(&["prove", "--script", "/nonexistent.json"]).status.code(), Some(2));
}

#[test]
fn reports_hash_their_inputs() {
    let r = scratch("solve-report.json");
    let m = fixture("tstar.json");
    let o = cfworld(&["solve", "--model", &m, "--context", "U=0", "--report", r.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let rep: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&r).unwrap()).unwrap();
    let want = cfworld::report::sha256_hex(&std::fs::read(&m).unwrap());
    assert_eq!(rep["inputs"][0]["sha256"], want.as_str());
    assert_eq!(rep["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(rep["details"]["solutions"][0], "(0,0,0)");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(cfworld(&[]).status.code(), Some(2));
    assert_eq!(cfworld(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(cfworld(&["--version"]).status.code(), Some(0));
}

#[test]
fn paper_suite_subset() {
    let o = cfworld(&["paper-suite", "--only", "model/"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("PASS")).count(), 5);
    assert_eq!(cfworld(&["paper-suite", "--only", "nothing-matches"]).status.code(), Some(2));
}
