//! The checked-in fixture files match their generators, and the recorded
//! two-sphere counts match both the oracle and the scanner.
//!
//! Set `TRITRI_REGENERATE_FIXTURES=1` to rewrite the files.

use std::collections::BTreeMap;
use std::path::PathBuf;

use tritri_harness::fixtures::{tetrahedron, two_spheres};
use tritri_harness::{load_mesh, oracle_scan, scan, LoadOptions, Mesh, OracleScanCounts, ScanOptions};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn regenerate() -> bool {
    std::env::var_os("TRITRI_REGENERATE_FIXTURES").is_some()
}

fn check_file(name: &str, contents: &str) {
    let path = fixture(name);
    if regenerate() {
        std::fs::write(&path, contents).unwrap();
    }
    let on_disk = std::fs::read_to_string(&path).unwrap();
    assert!(on_disk == contents, "{name} is stale; regenerate it");
}

fn load(name: &str) -> Mesh {
    load_mesh(&fixture(name), None, LoadOptions::default()).unwrap()
}

#[test]
fn off_files_match_generators() {
    check_file("tetrahedron.off", &tetrahedron().to_off());
    check_file("two_spheres.off", &two_spheres().to_off());
    assert_eq!(load("two_spheres.off").vertices, two_spheres().vertices);
}

#[test]
fn two_sphere_counts_are_oracle_verified() {
    let mesh = load("two_spheres.off");
    let mut expected = BTreeMap::new();
    for ignore in [true, false] {
        expected.insert(format!("ignore_shared_simplices={ignore}"), oracle_scan(&mesh, ignore).unwrap());
    }
    check_file("two_spheres.json", &(serde_json::to_string_pretty(&expected).unwrap() + "\n"));

    for ignore in [true, false] {
        let recorded: OracleScanCounts = expected[&format!("ignore_shared_simplices={ignore}")];
        let opts = ScanOptions {
            ignore_shared_simplices: ignore,
            ..Default::default()
        };
        let r = scan(&mesh, &opts).unwrap().report;
        let got = OracleScanCounts {
            candidate_pairs: r.candidate_pairs,
            intersecting_pairs: r.intersecting_pairs,
            intersection_point_total: r.intersection_point_total,
            intersection_segment_total: r.intersection_segment_total,
            coplanar_pair_count: r.coplanar_pair_count,
        };
        assert_eq!(got, recorded, "ignore_shared_simplices={ignore}");
    }
}

#[test]
fn tetrahedron_adjacency_modes() {
    let mesh = load("tetrahedron.off");
    let count = |ignore| {
        let opts = ScanOptions {
            ignore_shared_simplices: ignore,
            ..Default::default()
        };
        scan(&mesh, &opts).unwrap().report.intersecting_pairs
    };
    assert_eq!(count(true), 0);
    assert_eq!(count(false), 6);
}
