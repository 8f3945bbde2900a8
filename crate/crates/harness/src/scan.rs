//! Narrow phase over a whole mesh.

use std::io::{self, Write};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use tritri::{IntersectionKind, IntersectionResult, KernelConfig, SimplexRef};

use crate::backend::{Backend, Engine};
use crate::broad::{candidate_pairs, CandidatePair};
use crate::mesh::Mesh;
use crate::SCHEMA_VERSION;

/// Candidates are classified in blocks; the timeout is checked between
/// blocks so a partial result is always a prefix of the full one.
const BLOCK: usize = 2048;

#[derive(Debug, Clone)]
pub struct ScanOptions {
    pub backend: Backend,
    /// Drop results made only of the contacts implied by shared mesh
    /// vertices and edges.
    pub ignore_shared_simplices: bool,
    /// Narrow-phase threads; 0 uses every core.
    pub workers: usize,
    pub timeout: Option<Duration>,
    pub config: KernelConfig,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            backend: Backend::Float,
            ignore_shared_simplices: true,
            workers: 1,
            timeout: None,
            config: KernelConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Elapsed {
    pub broad: f64,
    pub narrow: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub schema_version: u32,
    pub mesh_name: String,
    pub face_count: usize,
    pub skipped_faces: usize,
    pub candidate_pairs: usize,
    /// Candidates actually classified; less than `candidate_pairs` only
    /// after a timeout.
    pub classified_pairs: usize,
    pub intersecting_pairs: usize,
    pub intersection_point_total: usize,
    pub intersection_segment_total: usize,
    pub coplanar_pair_count: usize,
    pub timed_out: bool,
    pub elapsed: Elapsed,
}

/// One line of the result stream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "snake_case")]
pub enum ScanRecord {
    SkippedFace {
        schema_version: u32,
        face: usize,
        reason: String,
    },
    Pair {
        schema_version: u32,
        f0: usize,
        f1: usize,
        result: IntersectionResult,
    },
}

#[derive(Debug, Clone)]
pub struct ScanOutcome {
    pub report: ScanReport,
    pub records: Vec<ScanRecord>,
}

impl ScanOutcome {
    /// JSON-lines result stream. Contains no timings, so equal inputs give
    /// equal bytes.
    pub fn write_stream(&self, mut w: impl Write) -> io::Result<()> {
        for r in &self.records {
            serde_json::to_writer(&mut w, r)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn stream_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.write_stream(&mut out).expect("writing to memory");
        out
    }
}

/// True when every point is a vertex both faces reference by the same mesh
/// index. Such a result is the shared vertex, or the shared edge with its
/// two endpoints; two shared vertices always span a shared edge.
pub fn adjacency_only(m: &Mesh, pair: &CandidatePair, r: &IntersectionResult) -> bool {
    if pair.shared_simplices == 0 || pair.shared_simplices == 3 || r.points.is_empty() {
        return false;
    }
    let (a, b) = (m.faces[pair.f0], m.faces[pair.f1]);
    r.points.iter().all(|p| {
        p.kind == IntersectionKind::VV && local(p.id0).map(|i| a[i]) == local(p.id1).map(|j| b[j])
    })
}

fn local(id: SimplexRef) -> Option<usize> {
    id.decode().ok().map(|(_, _, k)| k)
}

pub fn scan(m: &Mesh, opts: &ScanOptions) -> tritri::Result<ScanOutcome> {
    let engine = Engine::new(opts.config.clone());
    let start = Instant::now();

    let mut records = Vec::new();
    let mut skip = vec![false; m.faces.len()];
    for (f, s) in skip.iter_mut().enumerate() {
        if let Err(e) = engine.validate(opts.backend, &m.triangle(f)) {
            *s = true;
            log::debug!("skipping face {f}: {e}");
            records.push(ScanRecord::SkippedFace {
                schema_version: SCHEMA_VERSION,
                face: f,
                reason: e.to_string(),
            });
        }
    }
    let candidates: Vec<CandidatePair> = candidate_pairs(m)
        .into_iter()
        .filter(|p| !skip[p.f0] && !skip[p.f1])
        .collect();
    let broad = start.elapsed();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers)
        .build()
        .expect("thread pool");
    let narrow_start = Instant::now();
    let mut results = Vec::with_capacity(candidates.len());
    let mut timed_out = false;
    for block in candidates.chunks(BLOCK) {
        if opts.timeout.is_some_and(|t| start.elapsed() >= t) {
            timed_out = true;
            break;
        }
        let out: Vec<tritri::Result<IntersectionResult>> = pool.install(|| {
            block
                .par_iter()
                .map(|p| engine.classify(opts.backend, &m.triangle(p.f0), &m.triangle(p.f1)))
                .collect()
        });
        for (p, r) in block.iter().zip(out) {
            results.push((*p, r?));
        }
    }
    let narrow = narrow_start.elapsed();

    let mut report = ScanReport {
        schema_version: SCHEMA_VERSION,
        mesh_name: m.name.clone(),
        face_count: m.faces.len(),
        skipped_faces: records.len(),
        candidate_pairs: candidates.len(),
        classified_pairs: results.len(),
        intersecting_pairs: 0,
        intersection_point_total: 0,
        intersection_segment_total: 0,
        coplanar_pair_count: 0,
        timed_out,
        elapsed: Elapsed {
            broad: broad.as_secs_f64(),
            narrow: narrow.as_secs_f64(),
        },
    };
    for (p, r) in results {
        if r.is_empty() || (opts.ignore_shared_simplices && adjacency_only(m, &p, &r)) {
            continue;
        }
        report.intersecting_pairs += 1;
        report.intersection_point_total += r.points.len();
        report.intersection_segment_total += r.segments.len();
        report.coplanar_pair_count += r.coplanar as usize;
        records.push(ScanRecord::Pair {
            schema_version: SCHEMA_VERSION,
            f0: p.f0,
            f1: p.f1,
            result: r,
        });
    }
    Ok(ScanOutcome { report, records })
}

/// Scan totals computed with the oracle instead of the classifier.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleScanCounts {
    pub candidate_pairs: usize,
    pub intersecting_pairs: usize,
    pub intersection_point_total: usize,
    pub intersection_segment_total: usize,
    pub coplanar_pair_count: usize,
}

/// Recomputes the scan totals of `m` with the oracle. Adjacency contacts
/// are recognized geometrically: the oracle's report equals the shared
/// vertex, or the shared edge and its endpoints.
pub fn oracle_scan(m: &Mesh, ignore_shared_simplices: bool) -> tritri::Result<OracleScanCounts> {
    use tritri::oracle::{oracle_classify, OracleReport};

    let candidates = candidate_pairs(m);
    let reports: Vec<tritri::Result<OracleReport>> = candidates
        .par_iter()
        .map(|p| {
            let t0 = m.triangle(p.f0).map(|v| v.to_rational());
            let t1 = m.triangle(p.f1).map(|v| v.to_rational());
            oracle_classify(&t0, &t1)
        })
        .collect();
    let mut counts = OracleScanCounts {
        candidate_pairs: candidates.len(),
        ..Default::default()
    };
    for (p, r) in candidates.iter().zip(reports) {
        let r = r?;
        if r.points.is_empty() {
            continue;
        }
        if ignore_shared_simplices && matches!(p.shared_simplices, 1 | 2) {
            let shared: Vec<_> = m.faces[p.f0]
                .iter()
                .filter(|v| m.faces[p.f1].contains(v))
                .map(|&v| m.vertices[v].to_rational())
                .collect();
            let mut contact = OracleReport {
                coplanar: r.coplanar,
                points: shared.iter().cloned().collect(),
                ..Default::default()
            };
            if let [a, b] = &shared[..] {
                contact.segments.insert((a.clone().min(b.clone()), a.clone().max(b.clone())));
            }
            if contact == r {
                continue;
            }
        }
        counts.intersecting_pairs += 1;
        counts.intersection_point_total += r.points.len();
        counts.intersection_segment_total += r.segments.len();
        counts.coplanar_pair_count += r.coplanar as usize;
    }
    Ok(counts)
}
