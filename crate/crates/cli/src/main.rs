//! `tritri`: classify triangle pairs, scan meshes, fuzz and benchmark.
//!
//! Exit codes: 0 success, 1 usage error, 2 degenerate input or unreadable
//! mesh, 3 scan timeout, 4 fuzz mismatch.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{ArgAction, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow};
use serde::Serialize;
use tritri::{classify, Error, IntersectionResult, KernelConfig, Point3, RationalKernel, Triangle};
use tritri_harness::{
    bench, fuzz, load_mesh, parse_spec_file, replay, scan, Backend, Engine, FailureCase, Family,
    FuzzReport, FuzzVerdict, GeneratorSpec, LoadOptions, MeshFormat, ScanOptions, SCHEMA_VERSION,
};

#[derive(Parser)]
#[command(name = "tritri", version, about = "Exact triangle-triangle intersection classification")]
struct Cli {
    /// Output schema version; only version 1 exists.
    #[arg(long, global = true, default_value_t = SCHEMA_VERSION)]
    schema_version: u32,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Float,
    Rational,
    Implicit,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Backend {
        match b {
            BackendArg::Float => Backend::Float,
            BackendArg::Rational => Backend::Rational,
            BackendArg::Implicit => Backend::Implicit,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Off,
    Obj,
    #[value(alias = "stl")]
    StlBinary,
    StlAscii,
}

impl From<FormatArg> for MeshFormat {
    fn from(f: FormatArg) -> MeshFormat {
        match f {
            FormatArg::Off => MeshFormat::Off,
            FormatArg::Obj => MeshFormat::Obj,
            FormatArg::StlBinary => MeshFormat::StlBinary,
            FormatArg::StlAscii => MeshFormat::StlAscii,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Classify one triangle pair given as 18 coordinates.
    Pair {
        /// x y z of t0's three vertices, then of t1's.
        #[arg(allow_negative_numbers = true, num_args = 0..)]
        coords: Vec<String>,
        /// Read the 18 coordinates from a file instead.
        #[arg(long, conflicts_with = "coords")]
        file: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "float")]
        backend: BackendArg,
    },
    /// Classify every candidate face pair of a mesh.
    Scan {
        path: PathBuf,
        /// Defaults to the file extension.
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
        #[arg(long, value_enum, default_value = "float")]
        backend: BackendArg,
        #[arg(long, action = ArgAction::Set, num_args = 0..=1, default_value_t = true, default_missing_value = "true")]
        ignore_shared_simplices: bool,
        /// Narrow-phase threads; 0 uses every core.
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Seconds before the scan stops with a partial report.
        #[arg(long)]
        timeout: Option<f64>,
        /// Write the per-pair JSON-lines stream here.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Split polygons into triangle fans instead of rejecting them.
        #[arg(long)]
        triangulate: bool,
    },
    /// Check generated pairs against the oracle on several backends.
    Fuzz {
        #[arg(long, required_unless_present = "replay")]
        family: Option<Family>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, value_enum, value_delimiter = ',', default_values = ["float", "rational", "implicit"])]
        backends: Vec<BackendArg>,
        /// Re-check a failure file written by an earlier run.
        #[arg(long, conflicts_with = "family")]
        replay: Option<PathBuf>,
        /// Write the reproduction JSON of a failure here.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Threads; 0 uses every core.
        #[arg(long, default_value_t = 0)]
        workers: usize,
    },
    /// Time the classifier on generated pairs.
    Bench {
        /// One `family seed count` triple per line.
        specs: PathBuf,
        #[arg(long, default_value_t = tritri_harness::bench::DEFAULT_REPETITIONS)]
        repetitions: usize,
        #[arg(long, value_enum, default_value = "float")]
        backend: BackendArg,
        /// Print an aligned text table instead of JSON.
        #[arg(long)]
        table: bool,
    },
}

const USAGE: u8 = 1;
const DEGENERATE: u8 = 2;
const TIMEOUT: u8 = 3;
const MISMATCH: u8 = 4;

/// A failed command: diagnostic for standard error plus exit code.
struct Failure(u8, String);

fn usage(msg: impl Into<String>) -> Failure {
    Failure(USAGE, msg.into())
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { 0 });
        }
    };
    let result = if cli.schema_version != SCHEMA_VERSION {
        Err(usage(format!("unsupported schema version {}", cli.schema_version)))
    } else {
        run(cli.command)
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("tritri: {msg}");
            ExitCode::from(code)
        }
    }
}

fn run(command: Command) -> Outcome {
    let config = KernelConfig::from_env();
    match command {
        Command::Pair { coords, file, backend } => cmd_pair(coords, file, backend.into(), config),
        Command::Scan {
            path,
            format,
            backend,
            ignore_shared_simplices,
            workers,
            timeout,
            output,
            triangulate,
        } => {
            let timeout = match timeout {
                Some(t) if !(t >= 0.0 && t.is_finite()) => return Err(usage("timeout must be a non-negative number")),
                t => t.map(Duration::from_secs_f64),
            };
            let opts = ScanOptions {
                backend: backend.into(),
                ignore_shared_simplices,
                workers,
                timeout,
                config,
            };
            cmd_scan(&path, format.map(Into::into), LoadOptions { triangulate }, &opts, output.as_deref())
        }
        Command::Fuzz {
            family,
            seed,
            count,
            backends,
            replay,
            output,
            workers,
        } => {
            let backends: Vec<Backend> = backends.into_iter().map(Into::into).collect();
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .map_err(|e| usage(e.to_string()))?;
            pool.install(|| {
                let spec = family.map(|f| GeneratorSpec::new(f, seed, count));
                cmd_fuzz(spec, replay.as_deref(), &backends, output.as_deref(), config)
            })
        }
        Command::Bench {
            specs,
            repetitions,
            backend,
            table,
        } => cmd_bench(&specs, repetitions, backend.into(), table, config),
    }
}

fn print_json(value: &impl Serialize) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    serde_json::to_writer(&mut out, value)
        .map_err(io::Error::from)
        .and_then(|_| writeln!(out))
        .map_err(|e| usage(format!("cannot write output: {e}")))
}

#[derive(Serialize)]
struct PairOutput<'a> {
    schema_version: u32,
    #[serde(flatten)]
    result: &'a IntersectionResult,
}

fn cmd_pair(mut coords: Vec<String>, file: Option<PathBuf>, backend: Backend, config: KernelConfig) -> Outcome {
    if let Some(path) = file {
        let text = fs::read_to_string(&path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
        coords = text
            .lines()
            .flat_map(|l| l.split('#').next().unwrap().split_whitespace())
            .map(str::to_owned)
            .collect();
    }
    if coords.len() != 18 {
        return Err(usage(format!("expected 18 coordinates, found {}", coords.len())));
    }
    let result = if backend == Backend::Rational {
        let q = coords.iter().map(|c| parse_rational(c)).collect::<Result<Vec<_>, _>>()?;
        let p = |i: usize| Point3::new(q[3 * i].clone(), q[3 * i + 1].clone(), q[3 * i + 2].clone());
        let t0 = Triangle::new(p(0), p(1), p(2));
        let t1 = Triangle::new(p(3), p(4), p(5));
        classify(&RationalKernel::new(config), &t0, &t1)
    } else {
        let f = coords.iter().map(|c| parse_float(c)).collect::<Result<Vec<_>, _>>()?;
        let p = |i: usize| Point3::new(f[3 * i], f[3 * i + 1], f[3 * i + 2]);
        let t0 = Triangle::new(p(0), p(1), p(2));
        let t1 = Triangle::new(p(3), p(4), p(5));
        Engine::new(config).classify(backend, &t0, &t1)
    };
    match result {
        Ok(r) => {
            print_json(&PairOutput {
                schema_version: SCHEMA_VERSION,
                result: &r,
            })?;
            Ok(0)
        }
        Err(e @ Error::DegenerateTriangle(_)) => Err(Failure(DEGENERATE, e.to_string())),
        Err(e) => Err(usage(e.to_string())),
    }
}

fn parse_float(s: &str) -> Result<f64, Failure> {
    match s.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        Ok(_) => Err(usage(format!("coordinate {s:?} is not finite"))),
        Err(_) if s.contains('/') => Err(usage(format!(
            "rational literal {s:?} needs --backend rational"
        ))),
        Err(_) => Err(usage(format!("invalid coordinate {s:?}"))),
    }
}

/// `n/d`, an integer, or a decimal literal, all read exactly.
fn parse_rational(s: &str) -> Result<BigRational, Failure> {
    let bad = || usage(format!("invalid rational coordinate {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d == BigInt::from(0) {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if frac.starts_with(['+', '-']) || (int.trim_start_matches(['+', '-']).is_empty() && frac.is_empty()) {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let digits = match digits.as_str() {
        "+" | "-" => format!("{digits}0"),
        _ => digits,
    };
    let n: BigInt = digits.parse().map_err(|_| bad())?;
    let shift = exp - frac.len() as i32;
    let ten = BigRational::from_integer(10.into());
    let scale = if shift >= 0 {
        Pow::pow(&ten, shift.unsigned_abs())
    } else {
        BigRational::one() / Pow::pow(&ten, shift.unsigned_abs())
    };
    Ok(BigRational::from_integer(n) * scale)
}

fn cmd_scan(path: &Path, format: Option<MeshFormat>, load: LoadOptions, opts: &ScanOptions, output: Option<&Path>) -> Outcome {
    let mesh = load_mesh(path, format, load).map_err(|e| Failure(DEGENERATE, format!("{}: {e}", path.display())))?;
    let outcome = scan(&mesh, opts).map_err(|e| usage(e.to_string()))?;
    if let Some(out) = output {
        let file = fs::File::create(out).map_err(|e| usage(format!("cannot create {}: {e}", out.display())))?;
        let mut w = BufWriter::new(file);
        outcome
            .write_stream(&mut w)
            .and_then(|_| w.flush())
            .map_err(|e| usage(format!("cannot write {}: {e}", out.display())))?;
    }
    print_json(&outcome.report)?;
    if outcome.report.timed_out {
        eprintln!(
            "tritri: timed out after {} of {} candidate pairs",
            outcome.report.classified_pairs, outcome.report.candidate_pairs
        );
        return Ok(TIMEOUT);
    }
    Ok(0)
}

fn cmd_fuzz(
    spec: Option<GeneratorSpec>,
    replay_file: Option<&Path>,
    backends: &[Backend],
    output: Option<&Path>,
    config: KernelConfig,
) -> Outcome {
    let engine = Engine::new(config);
    let report = match (replay_file, spec) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            let case: FailureCase = serde_json::from_str(&text)
                .or_else(|_| {
                    // also accept a whole fuzz report
                    serde_json::from_str::<FuzzReport>(&text).map_err(|e| e.to_string()).and_then(|r| match r.verdict {
                        FuzzVerdict::Fail { failure } => Ok(*failure),
                        FuzzVerdict::Pass { .. } => Err("report holds no failure".to_owned()),
                    })
                })
                .map_err(|e| usage(format!("{}: not a failure case: {e}", path.display())))?;
            FuzzReport::new(case.spec, backends, replay(&engine, &case, backends))
        }
        (None, Some(spec)) => FuzzReport::new(Some(spec), backends, fuzz(&engine, &spec, backends)),
        (None, None) => return Err(usage("either --family or --replay is required")),
    };
    print_json(&report)?;
    match &report.verdict {
        FuzzVerdict::Pass { .. } => Ok(0),
        FuzzVerdict::Fail { failure } => {
            if let Some(out) = output {
                let json = serde_json::to_string_pretty(failure).expect("failure case serializes");
                fs::write(out, json).map_err(|e| usage(format!("cannot write {}: {e}", out.display())))?;
            }
            eprintln!("tritri: mismatch: {}", failure.reason);
            Ok(MISMATCH)
        }
    }
}

fn cmd_bench(specs: &Path, repetitions: usize, backend: Backend, table: bool, config: KernelConfig) -> Outcome {
    let text = fs::read_to_string(specs).map_err(|e| usage(format!("cannot read {}: {e}", specs.display())))?;
    let specs_list = parse_spec_file(&text).map_err(|e| usage(format!("{}: {e}", specs.display())))?;
    let report = bench(&specs_list, repetitions, backend, &config);
    if table {
        print!("{}", report.to_table());
    } else {
        print_json(&report)?;
    }
    Ok(0)
}
