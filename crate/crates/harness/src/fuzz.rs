//! Differential fuzzing of every backend against the oracle.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use tritri::oracle::{canonicalize, compare, oracle_classify, Comparison, OracleReport};
use tritri::{Error, IntersectionResult, Point3, Triangle};

use crate::backend::{to_handles, to_rational, Backend, Engine};
use crate::generate::{FloatTriangle, GeneratorSpec};
use crate::SCHEMA_VERSION;

/// Classifier output for one backend.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassifierOutput {
    Result(IntersectionResult),
    Error(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleSummary {
    pub coplanar: bool,
    pub points: Vec<String>,
    pub segments: Vec<[String; 2]>,
}

impl From<&OracleReport> for OracleSummary {
    fn from(r: &OracleReport) -> Self {
        OracleSummary {
            coplanar: r.coplanar,
            points: r.points.iter().map(|p| p.to_string()).collect(),
            segments: r
                .segments
                .iter()
                .map(|(a, b)| [a.to_string(), b.to_string()])
                .collect(),
        }
    }
}

/// Everything needed to reproduce one failing pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureCase {
    pub schema_version: u32,
    pub spec: Option<GeneratorSpec>,
    /// Position of the pair in the generated sequence.
    pub index: Option<usize>,
    pub t0: [[f64; 3]; 3],
    pub t1: [[f64; 3]; 3],
    pub reason: String,
    pub classifier_outputs: BTreeMap<Backend, ClassifierOutput>,
    pub oracle_output: Option<OracleSummary>,
}

impl FailureCase {
    pub fn triangles(&self) -> (FloatTriangle, FloatTriangle) {
        let t = |v: &[[f64; 3]; 3]| {
            Triangle::new(Point3::from(v[0]), Point3::from(v[1]), Point3::from(v[2]))
        };
        (t(&self.t0), t(&self.t1))
    }
}

fn coords(t: &FloatTriangle) -> [[f64; 3]; 3] {
    t.vertices.map(|p| [p.x, p.y, p.z])
}

/// Statistics of a passing run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairStats {
    pub cases: usize,
    pub intersecting: usize,
    pub coplanar: usize,
    pub points: usize,
    pub segments: usize,
}

impl PairStats {
    fn of(r: &IntersectionResult) -> Self {
        PairStats {
            cases: 1,
            intersecting: !r.is_empty() as usize,
            coplanar: r.coplanar as usize,
            points: r.points.len(),
            segments: r.segments.len(),
        }
    }

    fn add(self, o: PairStats) -> Self {
        PairStats {
            cases: self.cases + o.cases,
            intersecting: self.intersecting + o.intersecting,
            coplanar: self.coplanar + o.coplanar,
            points: self.points + o.points,
            segments: self.segments + o.segments,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum FuzzVerdict {
    Pass { stats: PairStats },
    Fail { failure: Box<FailureCase> },
}

impl FuzzVerdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, FuzzVerdict::Pass { .. })
    }
}

/// Runs every backend on one pair and compares against the oracle and
/// against each other. On success returns the first backend's result.
pub fn check_pair(
    engine: &Engine,
    backends: &[Backend],
    t0: &FloatTriangle,
    t1: &FloatTriangle,
) -> Result<IntersectionResult, Box<FailureCase>> {
    let outputs: Vec<(Backend, tritri::Result<IntersectionResult>)> = backends
        .iter()
        .map(|&b| (b, engine.classify(b, t0, t1)))
        .collect();
    let oracle = oracle_classify(&to_rational(t0), &to_rational(t1));

    let fail = |reason: String| {
        Box::new(FailureCase {
            schema_version: SCHEMA_VERSION,
            spec: None,
            index: None,
            t0: coords(t0),
            t1: coords(t1),
            reason,
            classifier_outputs: outputs
                .iter()
                .map(|(b, r)| {
                    let out = match r {
                        Ok(r) => ClassifierOutput::Result(r.clone()),
                        Err(e) => ClassifierOutput::Error(e.to_string()),
                    };
                    (*b, out)
                })
                .collect(),
            oracle_output: oracle.as_ref().ok().map(OracleSummary::from),
        })
    };

    let oracle = match &oracle {
        Ok(o) => o,
        Err(Error::DegenerateTriangle(reason)) => {
            // every backend must reject the same input
            for (b, r) in &outputs {
                if !matches!(r, Err(Error::DegenerateTriangle(_))) {
                    return Err(fail(format!(
                        "{b} accepted a degenerate triangle ({reason})"
                    )));
                }
            }
            return Ok(IntersectionResult::empty(false));
        }
        Err(e) => return Err(fail(format!("oracle failed: {e}"))),
    };

    let mut first: Option<&IntersectionResult> = None;
    for (b, r) in &outputs {
        let r = match r {
            Ok(r) => r,
            Err(e) => return Err(fail(format!("{b} failed: {e}"))),
        };
        if let Err(e) = r.validate() {
            return Err(fail(format!("{b} produced an invalid result: {e}")));
        }
        if let Some(f) = first {
            if f != r {
                return Err(fail(format!("{b} disagrees with {}", backends[0])));
            }
            // identical descriptors name identical exact points
            continue;
        }
        first = Some(r);
        let canonical = match b {
            Backend::Float => canonicalize(&engine.float, r, t0, t1),
            Backend::Rational => {
                canonicalize(&engine.rational, r, &to_rational(t0), &to_rational(t1))
            }
            Backend::Implicit => {
                canonicalize(&engine.implicit, r, &to_handles(t0), &to_handles(t1))
            }
        };
        let canonical = match canonical {
            Ok(c) => c,
            Err(e) => return Err(fail(format!("{b} result does not canonicalize: {e}"))),
        };
        if let Comparison::Mismatch(m) = compare(&canonical, oracle) {
            return Err(fail(format!(
                "{b} differs from the oracle (first = {b}, second = oracle):\n{m}"
            )));
        }
    }
    Ok(first
        .cloned()
        .unwrap_or_else(|| IntersectionResult::empty(oracle.coplanar)))
}

/// Fuzzes one generator spec. Pairs are checked in parallel on the current
/// rayon pool; the reported failure is always the lowest-index one.
pub fn fuzz(engine: &Engine, spec: &GeneratorSpec, backends: &[Backend]) -> FuzzVerdict {
    let pairs = spec.pairs();
    let outcomes: Vec<Result<PairStats, Box<FailureCase>>> = pairs
        .par_iter()
        .map(|(t0, t1)| check_pair(engine, backends, t0, t1).map(|r| PairStats::of(&r)))
        .collect();
    let mut stats = PairStats::default();
    for (i, o) in outcomes.into_iter().enumerate() {
        match o {
            Ok(s) => stats = stats.add(s),
            Err(mut f) => {
                f.spec = Some(*spec);
                f.index = Some(i);
                return FuzzVerdict::Fail { failure: f };
            }
        }
    }
    FuzzVerdict::Pass { stats }
}

/// Re-checks a recorded failure.
pub fn replay(engine: &Engine, case: &FailureCase, backends: &[Backend]) -> FuzzVerdict {
    let (t0, t1) = case.triangles();
    match check_pair(engine, backends, &t0, &t1) {
        Ok(r) => FuzzVerdict::Pass {
            stats: PairStats::of(&r),
        },
        Err(mut f) => {
            f.spec = case.spec;
            f.index = case.index;
            FuzzVerdict::Fail { failure: f }
        }
    }
}

/// Record printed for one fuzz run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzReport {
    pub schema_version: u32,
    pub spec: Option<GeneratorSpec>,
    pub backends: Vec<Backend>,
    #[serde(flatten)]
    pub verdict: FuzzVerdict,
}

impl FuzzReport {
    pub fn new(spec: Option<GeneratorSpec>, backends: &[Backend], verdict: FuzzVerdict) -> Self {
        FuzzReport {
            schema_version: SCHEMA_VERSION,
            spec,
            backends: backends.to_vec(),
            verdict,
        }
    }
}
