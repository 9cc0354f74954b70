//! `delta` command line: streams bytes through a [`DeltaStream`] and writes
//! one record per emitted position.
//!
//! Exit codes: 0 success, 1 usage, 2 I/O, 3 capacity, 4 internal fault.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::rational::Rational;
use crate::stream::{DeltaReport, DeltaStream, EngineKind, PullbackStats, StepKind, StreamCounters, StreamError};
use crate::textgen::{generate, GenKind, GenSpec};

/// Inputs above this many bytes are refused by the oracle engine.
pub const DEFAULT_ORACLE_CAP: usize = 5_000;
pub const ORACLE_CAP_ENV: &str = "DELTA_ORACLE_CAP";

pub const CSV_HEADER: &str = "i,delta_num,delta_den,delta_float,maximizing_length,alpha,step_kind";

#[derive(Debug, Parser)]
#[command(
    name = "delta",
    version,
    about = "Online normalized substring complexity of a byte stream",
    args_conflicts_with_subcommands = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Command>,
    #[command(flatten)]
    pub run: RunConfig,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a generated test string to stdout (raw bytes).
    Gen(GenArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Jsonl,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Input file; stdin when absent.
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = EngineKind::Amortized)]
    pub engine: EngineKind,
    /// Emit every N-th position (the last position is always emitted).
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub emit_every: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Positions at which to write a hull snapshot (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub snapshot_at: Vec<usize>,
    /// Snapshot destination (JSON lines); stderr when absent.
    #[arg(long)]
    pub snapshot_out: Option<PathBuf>,
    /// Print pullback statistics to stderr at the end.
    #[arg(long)]
    pub stats: bool,
    /// Time the run and print a report instead of records.
    #[arg(long)]
    pub bench: bool,
    /// Drop every CR and LF byte from the input.
    #[arg(long)]
    pub strip_newline: bool,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    #[arg(long, value_parser = clap::value_parser!(GenKind))]
    pub kind: GenKind,
    #[arg(long)]
    pub length: usize,
    #[arg(long, default_value_t = 2)]
    pub alphabet: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Repeated pattern for the periodic kind.
    #[arg(long, default_value = "ab")]
    pub pattern: String,
    /// Output file; stdout when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Capacity(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io(_) => 2,
            CliError::Capacity(_) => 3,
            CliError::Internal(_) => 4,
        }
    }
}

impl From<StreamError> for CliError {
    fn from(e: StreamError) -> Self {
        match e {
            StreamError::Capacity(_) => CliError::Capacity(e.to_string()),
            StreamError::Internal(_) => CliError::Internal(e.to_string()),
        }
    }
}

fn io_err(what: &str) -> impl Fn(std::io::Error) -> CliError + '_ {
    move |e| CliError::Io(format!("{what}: {e}"))
}

/// One emitted position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub i: usize,
    pub delta_num: i64,
    pub delta_den: i64,
    pub delta_float: f64,
    pub maximizing_length: usize,
    pub alpha: usize,
    pub step_kind: StepKind,
}

impl From<&DeltaReport> for Record {
    fn from(r: &DeltaReport) -> Self {
        Record {
            i: r.position,
            delta_num: r.delta.numer(),
            delta_den: r.delta.denom(),
            delta_float: r.delta_float,
            maximizing_length: r.maximizing_length,
            alpha: r.alpha,
            step_kind: r.step_kind,
        }
    }
}

impl Record {
    pub fn delta(&self) -> Rational {
        Rational::new(self.delta_num, self.delta_den)
    }

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.i, self.delta_num, self.delta_den, self.delta_float, self.maximizing_length, self.alpha, self.step_kind
        )
    }

    pub fn from_csv(line: &str) -> Result<Record, String> {
        let f: Vec<&str> = line.trim_end().split(',').collect();
        if f.len() != 7 {
            return Err(format!("expected 7 fields, got {}", f.len()));
        }
        let bad = |name: &str| format!("bad {name} in {line:?}");
        Ok(Record {
            i: f[0].parse().map_err(|_| bad("i"))?,
            delta_num: f[1].parse().map_err(|_| bad("delta_num"))?,
            delta_den: f[2].parse().map_err(|_| bad("delta_den"))?,
            delta_float: f[3].parse().map_err(|_| bad("delta_float"))?,
            maximizing_length: f[4].parse().map_err(|_| bad("maximizing_length"))?,
            alpha: f[5].parse().map_err(|_| bad("alpha"))?,
            step_kind: f[6].parse()?,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Latencies {
    pub p50: u64,
    pub p99: u64,
    pub max: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchReport {
    pub engine: EngineKind,
    pub n: usize,
    pub wall_seconds: f64,
    pub latency_ns: Latencies,
    pub pullbacks: PullbackStats,
    pub counters: StreamCounters,
}

fn percentile(sorted: &[u64], pct: usize) -> u64 {
    if sorted.is_empty() {
        0
    } else {
        sorted[(sorted.len() - 1) * pct / 100]
    }
}

pub fn oracle_cap() -> Result<usize, CliError> {
    match std::env::var(ORACLE_CAP_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{ORACLE_CAP_ENV}={v:?} is not a byte count"))),
        Err(_) => Ok(DEFAULT_ORACLE_CAP),
    }
}

fn read_input(config: &RunConfig, stdin: &mut dyn Read) -> Result<Vec<u8>, CliError> {
    let mut bytes = match &config.input {
        Some(path) => std::fs::read(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?,
        None => {
            let mut buf = Vec::new();
            stdin.read_to_end(&mut buf).map_err(io_err("cannot read stdin"))?;
            buf
        }
    };
    if config.strip_newline {
        bytes.retain(|&b| b != b'\n' && b != b'\r');
    }
    Ok(bytes)
}

/// Streams the input and writes records, snapshots, stats and bench output.
pub fn run(config: &RunConfig, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    let bytes = read_input(config, stdin)?;
    if config.engine == EngineKind::Oracle {
        let cap = oracle_cap()?;
        if bytes.len() > cap {
            return Err(CliError::Capacity(format!(
                "oracle engine is capped at {cap} bytes but the input has {} (raise with {ORACLE_CAP_ENV})",
                bytes.len()
            )));
        }
    }

    let mut snapshot_sink: Option<Box<dyn Write>> = match &config.snapshot_out {
        Some(path) => Some(Box::new(BufWriter::new(
            File::create(path).map_err(|e| CliError::Io(format!("cannot create {}: {e}", path.display())))?,
        ))),
        None => None,
    };
    let wanted: BTreeSet<usize> = config.snapshot_at.iter().copied().collect();
    let mut out = BufWriter::new(stdout);
    let emit = !config.bench;
    if emit && config.format == Format::Csv {
        writeln!(out, "{CSV_HEADER}").map_err(io_err("write failed"))?;
    }

    let mut stream = DeltaStream::new(config.engine);
    let mut latencies = Vec::with_capacity(if config.bench { bytes.len() } else { 0 });
    let started = Instant::now();
    let n = bytes.len();
    for &b in &bytes {
        let report = if config.bench {
            let t = Instant::now();
            let r = stream.push(b)?;
            latencies.push(t.elapsed().as_nanos() as u64);
            r
        } else {
            stream.push(b)?
        };
        let i = report.position;
        if emit && ((i as u64).is_multiple_of(config.emit_every) || i == n) {
            let rec = Record::from(&report);
            match config.format {
                Format::Csv => writeln!(out, "{}", rec.to_csv()),
                Format::Jsonl => writeln!(out, "{}", serde_json::to_string(&rec).expect("plain record")),
            }
            .map_err(io_err("write failed"))?;
        }
        if wanted.contains(&i) {
            let snap = serde_json::to_string(&stream.snapshot().expect("nonempty stream")).expect("plain snapshot");
            let sink: &mut dyn Write = match snapshot_sink.as_mut() {
                Some(s) => s.as_mut(),
                None => &mut *stderr,
            };
            writeln!(sink, "{snap}").map_err(io_err("snapshot write failed"))?;
        }
    }
    let wall = started.elapsed().as_secs_f64();

    for &p in wanted.range(n + 1..) {
        writeln!(stderr, "warning: snapshot position {p} is beyond the input length {n}").map_err(io_err("write failed"))?;
    }
    if let Some(s) = snapshot_sink.as_mut() {
        s.flush().map_err(io_err("snapshot write failed"))?;
    }
    if config.stats {
        let stats = serde_json::to_string(&stream.stats()).expect("plain stats");
        writeln!(stderr, "{stats}").map_err(io_err("write failed"))?;
    }
    if config.bench {
        latencies.sort_unstable();
        let report = BenchReport {
            engine: config.engine,
            n,
            wall_seconds: wall,
            latency_ns: Latencies {
                p50: percentile(&latencies, 50),
                p99: percentile(&latencies, 99),
                max: latencies.last().copied().unwrap_or(0),
            },
            pullbacks: stream.stats(),
            counters: stream.counters(),
        };
        writeln!(out, "{}", serde_json::to_string(&report).expect("plain report")).map_err(io_err("write failed"))?;
    }
    out.flush().map_err(io_err("write failed"))
}

pub fn run_gen(args: &GenArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let spec = GenSpec::new(args.kind, args.length, args.alphabet, args.seed).with_pattern(args.pattern.as_bytes());
    let bytes = generate(&spec).map_err(|e| CliError::Usage(e.to_string()))?;
    match &args.output {
        Some(path) => std::fs::write(path, &bytes).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => stdout.write_all(&bytes).and_then(|_| stdout.flush()).map_err(io_err("write failed")),
    }
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn main_from<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                1
            } else {
                let _ = write!(stdout, "{text}");
                0
            };
        }
    };
    let result = match &cli.command {
        Some(Command::Gen(args)) => run_gen(args, stdout),
        None => run(&cli.run, stdin, stdout, stderr),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "delta: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str], input: &[u8]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("delta").chain(args.iter().copied());
        let code = main_from(argv, &mut &input[..], &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn csv_records_for_example_word() {
        let (code, out, _) = run_args(&["--engine", "amortized", "--emit-every", "1", "--format", "csv"], b"abaabbabbab");
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 12);
        let last = Record::from_csv(lines[11]).unwrap();
        assert_eq!((last.i, last.delta_num, last.delta_den), (11, 2, 1));
    }

    #[test]
    fn emit_every_keeps_final_record() {
        let (_, out, _) = run_args(&["--emit-every", "4"], b"abaabbabbab");
        let is: Vec<usize> = out.lines().skip(1).map(|l| Record::from_csv(l).unwrap().i).collect();
        assert_eq!(is, [4, 8, 11]);
    }

    #[test]
    fn csv_and_jsonl_agree() {
        let (_, csv, _) = run_args(&["--format", "csv"], b"0110100110010110");
        let (_, jsonl, _) = run_args(&["--format", "jsonl"], b"0110100110010110");
        let a: Vec<Record> = csv.lines().skip(1).map(|l| Record::from_csv(l).unwrap()).collect();
        let b: Vec<Record> = jsonl.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert_eq!(a, b);
        for r in &a {
            assert_eq!(Record::from_csv(&r.to_csv()).unwrap(), *r);
        }
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run_args(&["--emit-every", "0"], b"a").0, 1);
        assert_eq!(run_args(&["--engine", "fast"], b"a").0, 1);
        assert_eq!(run_args(&["--help"], b"").0, 0);
    }

    #[test]
    fn missing_file_exits_two() {
        let (code, _, err) = run_args(&["/nonexistent/input.txt"], b"");
        assert_eq!(code, 2);
        assert!(err.contains("cannot read"));
    }

    #[test]
    fn strip_newline_is_opt_in() {
        let (_, raw, _) = run_args(&[], b"ab\n");
        let (_, stripped, _) = run_args(&["--strip-newline"], b"ab\n");
        assert_eq!(raw.lines().count(), 4);
        assert_eq!(stripped.lines().count(), 3);
    }

    #[test]
    fn gen_writes_raw_bytes() {
        let (code, out, _) = run_args(&["gen", "--kind", "fibonacci", "--length", "8"], b"");
        assert_eq!((code, out.as_str()), (0, "abaababa"));
        assert_eq!(run_args(&["gen", "--kind", "unary", "--length", "0"], b"").0, 1);
    }
}
