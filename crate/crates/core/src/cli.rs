//! Command-line front end.
//!
//! Exit codes: 0 ok, 1 violation found, 2 usage or parse error,
//! 3 materialization or comparison budget refused, 4 search budget exhausted.
//! Records go to stdout, diagnostics to stderr.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::construction::{
    self, closed_form_bound, length_of, make_spec, ConstructionSpec, DEFAULT_CELL_BUDGET,
};
use crate::error::Error;
use crate::io::{read_sequence, write_row, write_sequence, Format};
use crate::model::VectorSequence;
use crate::par::{self, Exec};
use crate::search::{self, SearchOptions, SearchStatus};
use crate::verifier::{self, FullCheck, Violation, DEFAULT_MAX_COMPARISONS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_REFUSED: i32 = 3;
pub const EXIT_SEARCH_BUDGET: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "resetseq",
    version,
    about = "Non-dominating reset/increment vector sequences"
)]
pub struct Cli {
    /// Worker threads for verification and search (0 = all cores).
    #[arg(long, global = true, env = "RESETSEQ_THREADS", default_value_t = 0)]
    pub threads: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a range of the construction for a dimension.
    Generate(GenerateArgs),
    /// Print a single vector of the construction.
    Index(IndexArgs),
    /// Print exact lengths and the closed-form lower bound.
    Length(LengthArgs),
    /// Check a file or the construction for a dimension.
    Verify(VerifyArgs),
    /// Exhaustive search for maximal lengths in dimensions 1 to 3.
    Search(SearchArgs),
}

fn parse_decimal(s: &str) -> Result<BigUint, String> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("not an unsigned decimal integer: {s:?}"));
    }
    BigUint::parse_bytes(s.as_bytes(), 10).ok_or_else(|| format!("bad integer {s:?}"))
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub dim: usize,
    #[arg(long, default_value = "0", value_parser = parse_decimal)]
    pub from: BigUint,
    /// Number of vectors; defaults to the rest of the sequence.
    #[arg(long)]
    pub count: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Stream into this file instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Largest `count * dim` written to stdout.
    #[arg(long, default_value_t = DEFAULT_CELL_BUDGET)]
    pub max_cells: u64,
}

#[derive(Debug, Args)]
pub struct IndexArgs {
    #[arg(long)]
    pub dim: usize,
    #[arg(long, value_parser = parse_decimal)]
    pub at: BigUint,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct LengthArgs {
    #[arg(long)]
    pub dim: Option<usize>,
    /// One row per dimension from 2 up to this one.
    #[arg(long)]
    pub table: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Full,
    Sampled,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, conflicts_with = "dim", required_unless_present = "dim")]
    pub file: Option<PathBuf>,
    #[arg(long)]
    pub dim: Option<usize>,
    /// Input format; guessed from the file extension when absent.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long, value_enum, default_value_t = Mode::Full)]
    pub mode: Mode,
    /// Also require the wrap step (always on with --dim).
    #[arg(long)]
    pub cyclic: bool,
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_COMPARISONS)]
    pub max_comparisons: u64,
    #[arg(long, default_value_t = DEFAULT_CELL_BUDGET)]
    pub max_cells: u64,
    /// Longest construction walked step by step in sampled mode.
    #[arg(long, default_value_t = 100_000_000)]
    pub scan_limit: u64,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub dim: usize,
    #[arg(long)]
    pub cyclic: bool,
    /// Length budget: exact answers up to this length.
    #[arg(long, default_value_t = 16)]
    pub budget: usize,
    #[arg(long, default_value_t = search::DEFAULT_NODE_BUDGET)]
    pub node_budget: u64,
    #[arg(long)]
    pub symmetry_breaking: bool,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    execute(&cli, out, err)
}

pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let threads = cli.threads;
    // Output writers are not Send, so the pool only wraps the library calls.
    let exec = if threads == 1 {
        Exec::Sequential
    } else {
        Exec::Parallel
    };
    let ctx = Ctx { threads, exec };
    let res = match &cli.command {
        Command::Generate(a) => cmd_generate(a, out),
        Command::Index(a) => cmd_index(a, out),
        Command::Length(a) => cmd_length(a, out),
        Command::Verify(a) => cmd_verify(a, &ctx, out, err),
        Command::Search(a) => cmd_search(a, &ctx, out),
    };
    let _ = out.flush();
    match res {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

struct Ctx {
    threads: usize,
    exec: Exec,
}

impl Ctx {
    fn pooled<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        par::with_threads(self.threads, f)
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded { .. } => EXIT_REFUSED,
        Error::Rejected(_) => EXIT_VIOLATION,
        _ => EXIT_USAGE,
    }
}

fn cmd_generate(a: &GenerateArgs, out: &mut dyn Write) -> Result<i32, Error> {
    let spec = make_spec(a.dim)?;
    if &a.from >= spec.length() {
        return Err(Error::IndexOutOfRange {
            index: a.from.clone(),
            length: spec.length().clone(),
        });
    }
    let count = match a.count {
        Some(c) => c,
        None => (spec.length() - &a.from)
            .to_u64()
            .ok_or_else(|| Error::BudgetExceeded {
                what: "generating the rest of the sequence",
                required: spec.length() - &a.from,
                budget: a.max_cells,
            })?,
    };
    let cells = BigUint::from(count) * a.dim;
    if a.output.is_none() && cells > BigUint::from(a.max_cells) {
        return Err(Error::BudgetExceeded {
            what: "writing to stdout (pass --output to stream to a file)",
            required: cells,
            budget: a.max_cells,
        });
    }
    match &a.output {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            emit_range(&spec, &a.from, count, a.format, &mut w)?;
            w.flush()?;
        }
        None => {
            let mut w = BufWriter::new(out);
            emit_range(&spec, &a.from, count, a.format, &mut w)?;
            w.flush()?;
        }
    }
    Ok(EXIT_OK)
}

fn emit_range<W: Write>(
    spec: &ConstructionSpec,
    from: &BigUint,
    count: u64,
    f: Format,
    w: &mut W,
) -> Result<(), Error> {
    if spec.length_u64().is_some() {
        for v in spec.stream::<u64>(from, count)? {
            write_row(w, &v, f)?;
        }
    } else {
        for v in spec.stream::<BigUint>(from, count)? {
            write_row(w, &v, f)?;
        }
    }
    Ok(())
}

fn cmd_index(a: &IndexArgs, out: &mut dyn Write) -> Result<i32, Error> {
    let spec = make_spec(a.dim)?;
    let v = spec.index_at(&a.at)?;
    write_row(out, &v, a.format)?;
    Ok(EXIT_OK)
}

fn cmd_length(a: &LengthArgs, out: &mut dyn Write) -> Result<i32, Error> {
    match (a.dim, a.table) {
        (Some(d), _) => {
            writeln!(out, "{} {}", length_of(d)?, closed_form_bound(d)?)?;
        }
        (None, Some(max)) => {
            // Validate the whole range before printing anything.
            length_of(max)?;
            for d in construction::MIN_DIM..=max {
                writeln!(out, "{d} {} {}", length_of(d)?, closed_form_bound(d)?)?;
            }
        }
        (None, None) => unreachable!("clap enforces the group"),
    }
    Ok(EXIT_OK)
}

fn report(out: &mut dyn Write, v: &Option<Violation>, failed: &mut bool) -> std::io::Result<()> {
    if let Some(v) = v {
        writeln!(out, "{v}")?;
        *failed = true;
    }
    Ok(())
}

fn cmd_verify(
    a: &VerifyArgs,
    ctx: &Ctx,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Error> {
    let mut failed = false;
    match (a.dim, &a.file) {
        (Some(d), _) => {
            let spec = make_spec(d)?;
            match a.mode {
                Mode::Full => {
                    let seq = spec.materialize(a.max_cells)?;
                    check_materialized(&seq, true, a, ctx, out, &mut failed)?;
                }
                Mode::Sampled => {
                    if spec.length_u64().is_some_and(|l| l <= a.scan_limit) {
                        let v = verifier::check_cyclic_streaming(&spec)?;
                        report(out, &v, &mut failed)?;
                    } else {
                        writeln!(
                            err,
                            "note: sequence longer than --scan-limit; step checks skipped"
                        )?;
                    }
                    sampled(&spec, a, ctx, out, &mut failed)?;
                }
            }
        }
        (None, Some(path)) => {
            let seq = read_sequence(path, a.format)?;
            match a.mode {
                Mode::Full => check_materialized(&seq, a.cyclic, a, ctx, out, &mut failed)?,
                Mode::Sampled => {
                    let v = if a.cyclic {
                        verifier::check_cyclic(&seq)
                    } else {
                        verifier::check_valid(&seq)
                    };
                    report(out, &v, &mut failed)?;
                    sampled(&seq, a, ctx, out, &mut failed)?;
                }
            }
        }
        (None, None) => unreachable!("clap requires --file or --dim"),
    }
    Ok(if failed { EXIT_VIOLATION } else { EXIT_OK })
}

fn check_materialized(
    seq: &VectorSequence,
    cyclic: bool,
    a: &VerifyArgs,
    ctx: &Ctx,
    out: &mut dyn Write,
    failed: &mut bool,
) -> Result<(), Error> {
    let v = if cyclic {
        verifier::check_cyclic(seq)
    } else {
        verifier::check_valid(seq)
    };
    report(out, &v, failed)?;
    let opts = FullCheck {
        max_comparisons: a.max_comparisons,
        exec: ctx.exec,
    };
    let v = ctx.pooled(|| verifier::check_non_dominating_full(seq, &opts))?;
    report(out, &v, failed)?;
    Ok(())
}

fn sampled<S: verifier::RandomAccess>(
    seq: &S,
    a: &VerifyArgs,
    ctx: &Ctx,
    out: &mut dyn Write,
    failed: &mut bool,
) -> Result<(), Error> {
    let r =
        ctx.pooled(|| verifier::check_non_dominating_sampled(seq, a.samples, a.seed, ctx.exec))?;
    for v in &r.violations {
        writeln!(out, "{v}")?;
    }
    for (x, y) in &r.witness_failures {
        writeln!(out, "witness-failure {x} {y}")?;
    }
    writeln!(
        out,
        "sampled pairs_checked={} seed={} exhaustive={} violations={} witness_failures={}",
        r.pairs_checked,
        r.seed,
        r.exhaustive,
        r.violations.len(),
        r.witness_failures.len()
    )?;
    if !r.is_clean() {
        *failed = true;
    }
    Ok(())
}

fn cmd_search(a: &SearchArgs, ctx: &Ctx, out: &mut dyn Write) -> Result<i32, Error> {
    let opts = SearchOptions {
        length_budget: a.budget,
        node_budget: Some(a.node_budget),
        symmetry_breaking: a.symmetry_breaking,
        exec: ctx.exec,
    };
    let r = ctx.pooled(|| {
        if a.cyclic {
            search::max_cyclic_length(a.dim, &opts)
        } else {
            search::max_valid_length(a.dim, &opts)
        }
    })?;
    let status = match r.status {
        SearchStatus::Exact => "exact",
        SearchStatus::LengthBudgetReached => "length-budget-reached (lower bound only)",
        SearchStatus::NodeBudgetExhausted => "node-budget-exhausted (lower bound only)",
    };
    writeln!(out, "max_length {}", r.max_length)?;
    writeln!(out, "nodes_explored {}", r.nodes_explored)?;
    writeln!(out, "cap {}", r.cap_used)?;
    writeln!(out, "status {status}")?;
    write_sequence(out, &r.witness, Format::Csv)?;
    Ok(if r.is_exact() {
        EXIT_OK
    } else {
        EXIT_SEARCH_BUDGET
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut argv = vec!["resetseq"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn generate_base() {
        let (code, out, _) =
            run_args(&["generate", "--dim", "2", "--count", "4", "--format", "csv"]);
        assert_eq!(code, 0);
        assert_eq!(out, "1,1\n0,2\n1,0\n0,0\n");
    }

    #[test]
    fn generate_offset_and_errors() {
        assert_eq!(
            run_args(&["generate", "--dim", "4", "--from", "8", "--count", "1"]).1,
            "1,1,0,3\n"
        );
        assert_eq!(run_args(&["generate", "--dim", "1"]).0, EXIT_USAGE);
        assert_eq!(
            run_args(&["generate", "--dim", "4", "--from", "30", "--count", "7"]).0,
            EXIT_USAGE
        );
        assert_eq!(
            run_args(&["generate", "--dim", "4", "--from", "x"]).0,
            EXIT_USAGE
        );
        assert_eq!(run_args(&["generate", "--dim", "8"]).0, EXIT_REFUSED);
    }

    #[test]
    fn index_cmd() {
        assert_eq!(
            run_args(&["index", "--dim", "4", "--at", "0"]).1,
            "1,1,0,4\n"
        );
        assert_eq!(
            run_args(&["index", "--dim", "4", "--at", "36"]).0,
            EXIT_USAGE
        );
        assert_eq!(
            run_args(&["index", "--dim", "4", "--at", "+3"]).0,
            EXIT_USAGE
        );
        let (code, out, _) = run_args(&["index", "--dim", "12", "--at", "0"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim_end().split(',').count(), 12);
    }

    #[test]
    fn length_cmd() {
        assert_eq!(run_args(&["length", "--dim", "6"]).1, "2628 2048\n");
        assert_eq!(run_args(&["length", "--dim", "2"]).1, "4 4\n");
        let (code, out, _) = run_args(&["length", "--table", "10"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 9);
        assert_eq!(run_args(&["length"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["length", "--dim", "1"]).0, EXIT_USAGE);
    }

    #[test]
    fn verify_dims() {
        assert_eq!(run_args(&["verify", "--dim", "4", "--mode", "full"]).0, 0);
        let (code, out, _) = run_args(&[
            "verify",
            "--dim",
            "6",
            "--mode",
            "sampled",
            "--samples",
            "500",
            "--seed",
            "7",
        ]);
        assert_eq!(code, 0);
        assert!(out.contains("seed=7"));
        assert_eq!(
            run_args(&["verify", "--dim", "8", "--mode", "full"]).0,
            EXIT_REFUSED
        );
        assert_eq!(run_args(&["verify"]).0, EXIT_USAGE);
    }

    #[test]
    fn search_cmd() {
        let (code, out, _) = run_args(&["search", "--dim", "1"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("max_length 2\n"));
        assert_eq!(
            run_args(&["search", "--dim", "3", "--node-budget", "100"]).0,
            EXIT_SEARCH_BUDGET
        );
        assert_eq!(run_args(&["search", "--dim", "4"]).0, EXIT_USAGE);
    }
}
