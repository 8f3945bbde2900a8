use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn tritri(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tritri")).args(args).env_remove("TRITRI_FORCE_EXACT").output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn fixture(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../harness/fixtures").join(name);
    p.to_str().unwrap().to_owned()
}

const PIERCING: [&str; 18] = ["0", "0", "0", "4", "0", "0", "0", "4", "0", "1", "1", "-1", "1", "1", "2", "3", "3", "2"];

#[test]
fn pair_reports_piercing_edges() {
    let o = tritri(&[&["pair"][..], &PIERCING].concat());
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["coplanar"], false);
    assert_eq!(v["points"].as_array().unwrap().len(), 2);
    assert_eq!(v["segments"], serde_json::json!([[0, 1]]));
}

#[test]
fn pair_backends_agree() {
    let outputs: Vec<Value> = ["float", "rational", "implicit"]
        .iter()
        .map(|b| json(&tritri(&[&["pair", "--backend", b][..], &PIERCING].concat())))
        .collect();
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], outputs[2]);
}

#[test]
fn pair_rational_literals() {
    // a vertex at exactly one third lies on the edge; 0.1 is read exactly
    let args = ["pair", "--backend", "rational", "0", "0", "0", "1", "0", "0", "0", "1", "0", "1/3", "2/3", "0", "1/3", "2/3", "1", "0.1", "5", "1"];
    let v = json(&tritri(&args));
    assert_eq!(v["points"].as_array().unwrap().len(), 1);
    assert_eq!(v["points"][0]["kind"], "VE");
    // the float parser sees 1/3 as a usage error
    assert_eq!(code(&tritri(&["pair", "0", "0", "0", "1", "0", "0", "0", "1", "0", "1/3", "2/3", "0", "1", "1", "1", "0", "5", "1"])), 1);
}

#[test]
fn pair_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pair.txt");
    std::fs::write(&path, PIERCING.join(" ")).unwrap();
    let o = tritri(&["pair", "--file", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["points"].as_array().unwrap().len(), 2);
}

#[test]
fn force_exact_env_does_not_change_output() {
    let args = [&["pair"][..], &PIERCING].concat();
    let plain = tritri(&args);
    let forced = Command::new(env!("CARGO_BIN_EXE_tritri")).args(&args).env("TRITRI_FORCE_EXACT", "1").output().unwrap();
    assert_eq!(plain.stdout, forced.stdout);
}

#[test]
fn usage_and_degenerate_exit_codes() {
    assert_eq!(code(&tritri(&["pair", "0", "0", "0"])), 1);
    assert_eq!(code(&tritri(&["pair", "0", "0", "0", "1", "0", "0", "2", "0", "0", "0", "0", "1", "1", "0", "1", "0", "1", "1"])), 2);
    assert_eq!(code(&tritri(&["pair", "nan", "0", "0", "1", "0", "0", "0", "1", "0", "0", "0", "1", "1", "0", "1", "0", "1", "1"])), 1);
    assert_eq!(code(&tritri(&[&["--schema-version", "2", "pair"][..], &PIERCING].concat())), 1);
    assert_eq!(code(&tritri(&["fuzz", "--family", "nope"])), 1);
    assert_eq!(code(&tritri(&["frobnicate"])), 1);
    assert_eq!(code(&tritri(&["--help"])), 0);
}

#[test]
fn scan_tetrahedron() {
    let report = |extra: &[&str]| {
        let o = tritri(&[&["scan", &fixture("tetrahedron.off")][..], extra].concat());
        assert_eq!(code(&o), 0);
        json(&o)
    };
    assert_eq!(report(&[])["intersecting_pairs"], 0);
    assert_eq!(report(&["--ignore-shared-simplices=false"])["intersecting_pairs"], 6);
    assert_eq!(report(&["--ignore-shared-simplices", "false", "--backend", "implicit"])["intersecting_pairs"], 6);
    assert_eq!(report(&["--workers", "3"])["candidate_pairs"], 6);
}

#[test]
fn scan_stream_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("pairs.jsonl");
    let o = tritri(&["scan", &fixture("tetrahedron.off"), "--ignore-shared-simplices=false", "--output", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let lines: Vec<Value> = std::fs::read_to_string(&out).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 6);
    assert!(lines.iter().all(|l| l["record"] == "pair"));

    assert_eq!(code(&tritri(&["scan", dir.path().join("missing.off").to_str().unwrap()])), 2);
    let bad = dir.path().join("bad.off");
    std::fs::write(&bad, "OFF\n3 1 0\n0 0 0\n1 0 0\n").unwrap();
    let o = tritri(&["scan", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));
    assert_eq!(code(&tritri(&["scan", &fixture("tetrahedron.off"), "--format", "ply"])), 1);
}

#[test]
fn scan_timeout() {
    let o = tritri(&["scan", &fixture("two_spheres.off"), "--timeout", "0"]);
    assert_eq!(code(&o), 3);
    let v = json(&o);
    assert_eq!(v["timed_out"], true);
    assert!(v["classified_pairs"].as_u64().unwrap() < v["candidate_pairs"].as_u64().unwrap());
}

#[test]
fn fuzz_and_replay() {
    let o = tritri(&["fuzz", "--family", "sharedEdge", "--seed", "3", "--count", "200", "--backends", "float,implicit"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["stats"]["cases"], 200);

    let dir = tempfile::tempdir().unwrap();
    let case = dir.path().join("case.json");
    let failure = serde_json::json!({
        "schema_version": 1,
        "t0": [[0.0, 0.0, 0.0], [4.0, 0.0, 0.0], [0.0, 4.0, 0.0]],
        "t1": [[1.0, 1.0, -1.0], [1.0, 1.0, 2.0], [3.0, 3.0, 2.0]],
        "reason": "recorded",
        "classifier_outputs": {},
    });
    std::fs::write(&case, failure.to_string()).unwrap();
    let o = tritri(&["fuzz", "--replay", case.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json(&o)["verdict"], "pass");
    assert_eq!(code(&tritri(&["fuzz"])), 1);
}

#[test]
fn bench_specs() {
    let dir = tempfile::tempdir().unwrap();
    let specs = dir.path().join("specs.txt");
    std::fs::write(&specs, "# sizes\ngeneralPosition 1 100\nnearDegenerate:-40 2 50\n").unwrap();
    let o = tritri(&["bench", specs.to_str().unwrap(), "--repetitions", "1"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
    assert_eq!(v["rows"][1]["case_name"], "nearDegenerate:-40/2/50");

    let o = tritri(&["bench", specs.to_str().unwrap(), "--repetitions", "1", "--table"]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 3);

    std::fs::write(&specs, "").unwrap();
    let o = tritri(&["bench", specs.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["rows"], serde_json::json!([]));

    std::fs::write(&specs, "generalPosition 1 10\ngeneralPosition x 10\n").unwrap();
    let o = tritri(&["bench", specs.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}
