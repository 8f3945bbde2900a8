//! Mesh scanning, differential fuzzing and benchmarking around the `tritri`
//! classifier.

pub mod backend;
pub mod bench;
pub mod broad;
pub mod fixtures;
pub mod fuzz;
pub mod generate;
pub mod mesh;
pub mod scan;

pub use backend::{Backend, Engine};
pub use bench::{bench, parse_spec_file, BenchReport, BenchRow};
pub use broad::{brute_force_pairs, candidate_pairs, CandidatePair};
pub use fuzz::{check_pair, fuzz, replay, FailureCase, FuzzReport, FuzzVerdict};
pub use generate::{Family, GeneratorSpec};
pub use mesh::{load_mesh, parse_mesh, LoadOptions, Mesh, MeshError, MeshFormat};
pub use scan::{oracle_scan, scan, OracleScanCounts, ScanOptions, ScanOutcome, ScanRecord, ScanReport};

/// Version of the JSON output schema, echoed in every emitted record.
pub const SCHEMA_VERSION: u32 = 1;

/// JSON Schema describing every record the command-line tool emits.
pub const OUTPUT_SCHEMA: &str = include_str!("../schema/output.v1.json");
