use std::fs;
use std::process::{Command, Output};

use cubekit::report::PipelineReport;

fn cubekit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubekit")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn broken_presentation_exits_2_with_witness() {
    let o = cubekit(&["verify", &data("broken.json")]);
    assert_eq!(o.status.code(), Some(2));
    let out = stdout(&o);
    assert!(out.contains("C2 FAIL"), "{out}");
    assert!(out.contains("witness [C2]"), "{out}");
    // later stages refuse to run
    let o = cubekit(&["all", &data("broken.json"), "--format", "json"]);
    assert_eq!(o.status.code(), Some(2));
    let r: PipelineReport = serde_json::from_slice(&o.stdout).unwrap();
    assert!(r.homology.is_none() && r.cube_counts.is_empty());
}

#[test]
fn usage_and_io_errors_exit_1() {
    assert_eq!(cubekit(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(cubekit(&["verify"]).status.code(), Some(1));
    assert_eq!(cubekit(&["verify", "/nonexistent/p.json"]).status.code(), Some(1));
    assert_eq!(cubekit(&["verify", "--builtin", "nope"]).status.code(), Some(1));
    assert_eq!(cubekit(&["cover", "--spec", "D:2,D:3"]).status.code(), Some(1));
    assert_eq!(cubekit(&["ktheory", "--builtin", "f2-3", "--kunneth-k0", "Z^^2"]).status.code(), Some(1));
    assert_eq!(cubekit(&["--help"]).status.code(), Some(0));
}

#[test]
fn full_report_round_trips_and_ends_with_ktheory() {
    let o = cubekit(&["all", "--builtin", "gamma357", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys.last().unwrap().as_str(), "ktheory");
    let r: PipelineReport = serde_json::from_str(&text).unwrap();
    assert_eq!(r.cube_counts, vec![18, 104, 192]);
    assert_eq!(r.homology.as_ref().unwrap()[3].to_string(), "Z^7");
    assert!(r.timings.is_none());
    assert_eq!(serde_json::to_string_pretty(&r).unwrap() + "\n", text);
}

#[test]
fn output_is_deterministic_and_hash_tracks_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("p.json");
    fs::write(&f, cubekit::fixtures::builtin_text("gamma234").unwrap()).unwrap();
    let f = f.to_str().unwrap();
    let a = cubekit(&["all", f, "--format", "json"]);
    let b = cubekit(&["all", f, "--format", "json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = cubekit(&["all", "--builtin", "gamma234", "--format", "json"]);
    assert_eq!(a.stdout, c.stdout, "same bytes, same report");
    let r: PipelineReport = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(r.input_hash.unwrap().len(), 64);
}

#[test]
fn seed_is_echoed_and_timings_are_opt_in() {
    let o = cubekit(&["kgraph", "--builtin", "f2-3", "--seed", "7", "--format", "json", "--timings"]);
    let r: PipelineReport = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r.seed, Some(7));
    assert!(r.timings.unwrap().contains_key("kgraph"));
    let o = cubekit(&["kgraph", "--builtin", "f2-3", "--exhaustive-uce", "--format", "json"]);
    let r: PipelineReport = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r.seed, None);
    assert!(r.kgraph.unwrap().uce.pass);
}

#[test]
fn dumps() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m");
    let s = dir.path().join("s");
    let o = cubekit(&[
        "homology",
        "--builtin",
        "gamma357",
        "--dump-matrices",
        m.to_str().unwrap(),
        "--dump-snf",
        s.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let m1 = fs::read_to_string(m.join("M1.txt")).unwrap();
    let mut lines = m1.lines();
    assert_eq!(lines.next(), Some("192 192"));
    assert_eq!(lines.count(), 192);
    // divisors of the first boundary: units, then the torsion of H_0
    let d1 = fs::read_to_string(s.join("d1.txt")).unwrap();
    let d: Vec<&str> = d1.lines().collect();
    assert_eq!(d.iter().filter(|x| **x == "1").count(), 182);
    assert_eq!(d[182..], ["4", "4", "12"]);

    let c = dir.path().join("c");
    let o = cubekit(&["cellular", "--builtin", "f2-3", "--dump-complex", c.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("H_3 = Z^8"));
    assert!(c.join("boundary1.txt").exists());
    assert_eq!(fs::read_to_string(c.join("simplex_counts.txt")).unwrap().lines().count(), 4);
}

#[test]
fn cubes_listing() {
    let o = cubekit(&["cubes", "--builtin", "f2-3", "--dim", "2", "--format", "json", "--list"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["count"], 48);
    assert_eq!(v["cubes"].as_array().unwrap().len(), 48);
    assert_eq!(cubekit(&["cubes", "--builtin", "f2-3", "--dim", "4"]).status.code(), Some(1));
}

#[test]
fn cover_with_hypothesis_warning() {
    let o = cubekit(&["cover", "--spec", "T:1,T:1,D:2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("M_1 = [[0, 2], [2, 0]]"), "{out}");
    assert!(out.contains("M_2 = [[0, 2], [2, 0]]"), "{out}");
    assert!(out.contains("M_3 = [[4, 0], [0, 4]]"), "{out}");
    assert!(out.contains("warning: direction 1 is T:1"), "{out}");
    let o = cubekit(&["cover", "--spec", "T:2,D:3,D:3", "--k-theory", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["g"], 5);
    assert_eq!(v["closed_form_ktheory"]["k1"], "(Z/5)^2");
}

#[test]
fn out_flag_and_thread_cap() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("r.txt");
    let o = Command::new(env!("CARGO_BIN_EXE_cubekit"))
        .args(["verify", "--builtin", "f2-3", "--out", f.to_str().unwrap()])
        .env("CUBEKIT_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert!(fs::read_to_string(&f).unwrap().contains("C3: pass"));
    if !cfg!(feature = "parallel") {
        return;
    }
    let o = Command::new(env!("CARGO_BIN_EXE_cubekit"))
        .args(["verify", "--builtin", "f2-3"])
        .env("CUBEKIT_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}
