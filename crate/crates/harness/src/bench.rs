//! Timing and predicate-count reports.

use std::fmt::Write as _;
use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use tritri::{KernelConfig, PredicateCounters, PredicateCounts};

use crate::backend::{Backend, Engine};
use crate::generate::{Family, GeneratorSpec};
use crate::SCHEMA_VERSION;

pub const DEFAULT_REPETITIONS: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub case_name: String,
    pub pair_count: usize,
    pub intersection_point_total: usize,
    /// Median over the repetitions.
    pub narrow_phase_seconds: f64,
    pub predicate_call_counts: PredicateCounts,
    pub exact_fallback_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub schema_version: u32,
    pub backend: Backend,
    pub repetitions: usize,
    pub rows: Vec<BenchRow>,
}

fn median(mut xs: Vec<f64>) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2.0
    }
}

/// Times the classifier on each spec's pairs, single-threaded on the calling
/// thread. Counters come from one extra instrumented pass so they do not
/// disturb the timings.
pub fn bench(
    specs: &[GeneratorSpec],
    repetitions: usize,
    backend: Backend,
    config: &KernelConfig,
) -> BenchReport {
    let plain = Engine::new(config.clone());
    let mut rows = Vec::with_capacity(specs.len());
    for spec in specs {
        let pairs = spec.pairs();
        let mut points = 0;
        let times = (0..repetitions.max(1))
            .map(|_| {
                points = 0;
                let start = Instant::now();
                for (t0, t1) in &pairs {
                    // generated pairs are never degenerate
                    points += plain
                        .classify(backend, t0, t1)
                        .map_or(0, |r| r.points.len());
                }
                start.elapsed().as_secs_f64()
            })
            .collect();

        let counters = Arc::new(PredicateCounters::new());
        let instrumented = Engine::new(config.clone().with_counters(counters.clone()));
        for (t0, t1) in &pairs {
            let _ = instrumented.classify(backend, t0, t1);
        }
        let counts = counters.snapshot();

        rows.push(BenchRow {
            case_name: format!("{}/{}/{}", spec.family, spec.seed, spec.count),
            pair_count: pairs.len(),
            intersection_point_total: points,
            narrow_phase_seconds: median(times),
            predicate_call_counts: counts,
            exact_fallback_fraction: counts.fallback_fraction(),
        });
    }
    BenchReport {
        schema_version: SCHEMA_VERSION,
        backend,
        repetitions,
        rows,
    }
}

impl BenchReport {
    /// Aligned text table, one row per case.
    pub fn to_table(&self) -> String {
        let header = [
            "case",
            "pairs",
            "points",
            "seconds",
            "o3d",
            "o3d exact",
            "o2d",
            "o2d exact",
            "fallback",
        ];
        let cells: Vec<[String; 9]> = self
            .rows
            .iter()
            .map(|r| {
                let c = &r.predicate_call_counts;
                [
                    r.case_name.clone(),
                    r.pair_count.to_string(),
                    r.intersection_point_total.to_string(),
                    format!("{:.4}", r.narrow_phase_seconds),
                    c.orient3d.total.to_string(),
                    c.orient3d.exact_fallback.to_string(),
                    c.orient2d.total.to_string(),
                    c.orient2d.exact_fallback.to_string(),
                    format!("{:.3}%", 100.0 * r.exact_fallback_fraction),
                ]
            })
            .collect();
        let widths: Vec<usize> = (0..9)
            .map(|i| {
                cells
                    .iter()
                    .map(|c| c[i].len())
                    .chain([header[i].len()])
                    .max()
                    .unwrap()
            })
            .collect();
        let mut out = String::new();
        let mut line = |fields: Vec<&str>| {
            for (i, f) in fields.iter().enumerate() {
                if i == 0 {
                    let _ = write!(out, "{f:<w$}", w = widths[0]);
                } else {
                    let _ = write!(out, "  {f:>w$}", w = widths[i]);
                }
            }
            out.push('\n');
        };
        line(header.to_vec());
        for c in &cells {
            line(c.iter().map(String::as_str).collect());
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct SpecFileError {
    pub line: usize,
    pub message: String,
}

/// Bench spec files hold one `family seed count` triple per line; blank
/// lines and `#` comments are ignored.
pub fn parse_spec_file(text: &str) -> Result<Vec<GeneratorSpec>, SpecFileError> {
    let mut specs = Vec::new();
    for (i, l) in text.lines().enumerate() {
        let l = l.split('#').next().unwrap().trim();
        if l.is_empty() {
            continue;
        }
        let err = |message: String| SpecFileError {
            line: i + 1,
            message,
        };
        let toks: Vec<&str> = l.split_whitespace().collect();
        let [family, seed, count] = toks[..] else {
            return Err(err(format!("expected `family seed count`, found {l:?}")));
        };
        let family: Family = family.parse().map_err(err)?;
        let seed = seed
            .parse()
            .map_err(|_| err(format!("invalid seed {seed:?}")))?;
        let count = count
            .parse()
            .map_err(|_| err(format!("invalid count {count:?}")))?;
        specs.push(GeneratorSpec::new(family, seed, count));
    }
    Ok(specs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_file_parsing() {
        let specs =
            parse_spec_file("# cases\ngeneralPosition 1 100\n\nnearDegenerate:-50 2 10 # tiny\n")
                .unwrap();
        assert_eq!(specs.len(), 2);
        assert_eq!(specs[1].family, Family::NearDegenerate { ulp_log2: -50 });
        assert_eq!(parse_spec_file("generalPosition 1\n").unwrap_err().line, 1);
        assert_eq!(parse_spec_file("\nwobbly 1 2\n").unwrap_err().line, 2);
        assert!(parse_spec_file("").unwrap().is_empty());
    }

    #[test]
    fn empty_spec_list_gives_empty_report() {
        let r = bench(&[], 3, Backend::Float, &KernelConfig::default());
        assert!(r.rows.is_empty());
    }

    #[test]
    fn table_is_aligned() {
        let r = bench(
            &[GeneratorSpec::new(Family::GridSnapped, 1, 20)],
            1,
            Backend::Float,
            &KernelConfig::default(),
        );
        let table = r.to_table();
        let lines: Vec<&str> = table.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0].len(), lines[1].len());
    }

    #[test]
    fn median_of_even_and_odd() {
        assert_eq!(median(vec![3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(vec![4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
