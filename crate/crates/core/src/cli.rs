//! Batch front end: sequence tables, `q` and distance queries, quasi-isometry
//! scans and axiom audits, rendered as a table, CSV or JSON.
//!
//! Exit codes: 0 on success (or all checks passing), 1 when a verification
//! fails or the audit finds a counterexample, 2 on usage or parse errors.
//!
//! JSON output is a single object with a `config` echo; every integer is a
//! decimal string and every real is rounded to 12 significant digits. Given
//! the same arguments (and a non-zero seed) the output is byte-identical.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint};
use serde::Serialize;
use serde_json::json;

use crate::audit::{run_audit, AuditConfig, AuditReport};
use crate::metric::{distance, make_tuple, q_point, Base, CoprimeTuple, Distance};
use crate::qi::{qi_scan_parallel, EmbeddingSpec, QIReport};
use crate::sequences::{kfib_table, SeqParam};
use crate::serde_decimal::round_sig12;
use crate::QValue;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Header row of `verify-qi --format csv`.
pub const QI_CSV_HEADER: [&str; 11] = [
    "n",
    "m",
    "index_gap",
    "q_nm",
    "q_mn",
    "max_q",
    "lower_ok",
    "upper_ok",
    "lemma_lower_ok",
    "lemma_upper_ok",
    "log_display",
];

#[derive(Debug, Parser)]
#[command(name = "coprime-metric", version, about = "Exact q values, distances and quasi-isometry checks on coprime tuples")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, clap::Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print F_{k,n} for n in a range (negative indices allowed).
    Fib {
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        #[arg(long, allow_negative_numbers = true)]
        from: i64,
        #[arg(long, allow_negative_numbers = true)]
        to: i64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Minimal L1 representation of a target over a coprime tuple.
    Q {
        /// Comma-separated tuple, e.g. 5,8
        #[arg(long, allow_hyphen_values = true)]
        tuple: String,
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Distance between two coprime tuples.
    Dist {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        /// golden | metallic:<k> | real:<decimal>
        #[arg(long, default_value = "golden")]
        base: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Check the quasi-isometry bounds for every index pair up to max-index.
    VerifyQi {
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(2..))]
        ell: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        max_index: u64,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        threads: u64,
        /// Allow ell > 2 with k > 1, which has no proven bound.
        #[arg(long)]
        experimental: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Randomized audit of the metric axioms.
    Axioms {
        #[arg(long)]
        samples: usize,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        max_value: u64,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
        ell: u64,
        /// 0 draws a seed from entropy and reports it.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Io(io::Error),
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.into())
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

/// Parses `args` (including the program name) and runs the command.
/// `color` enables ANSI pass/fail markers in table output.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write, color: bool) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match execute(cli.command, stdout, stderr, color) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Io(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn execute(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write, color: bool) -> Result<i32, CliError> {
    match command {
        Command::Fib { k, from, to, out } => {
            let k = SeqParam::new(k).map_err(usage)?;
            let rows = kfib_table(k, from, to).map_err(usage)?;
            with_output(&out, stdout, |w| write_fib(w, out.format, k, from, to, &rows))?;
            Ok(EXIT_OK)
        }
        Command::Q { tuple, target, out } => {
            let tuple = parse_tuple(&tuple)?;
            let target = parse_target(&target)?;
            let q = q_point(&tuple, &target).map_err(usage)?;
            with_output(&out, stdout, |w| write_q(w, out.format, &tuple, &target, &q))?;
            Ok(EXIT_OK)
        }
        Command::Dist { a, b, base, out } => {
            let a = parse_tuple(&a)?;
            let b = parse_tuple(&b)?;
            let base: Base = base.parse().map_err(usage)?;
            let d = distance(&a, &b, base).map_err(usage)?;
            with_output(&out, stdout, |w| write_dist(w, out.format, &a, &b, &d))?;
            Ok(EXIT_OK)
        }
        Command::VerifyQi { k, ell, max_index, threads, experimental, out } => {
            let k = SeqParam::new(k).map_err(usage)?;
            let ell = usize::try_from(ell).map_err(usage)?;
            let spec = if experimental {
                EmbeddingSpec::experimental(k, ell)
            } else {
                EmbeddingSpec::new(k, ell)
            }
            .map_err(usage)?;
            let report = qi_scan_parallel(&spec, max_index, threads as usize).map_err(usage)?;
            with_output(&out, stdout, |w| write_qi(w, out.format, &report, color))?;
            let failures = report.failures().count();
            writeln!(
                stderr,
                "verify-qi k={k} ell={ell} max-index={max_index}: {} rows, {failures} failing, all_pass={}",
                report.rows.len(),
                report.all_pass
            )?;
            if spec.experimental {
                writeln!(stderr, "experimental combination: no proven bound, exit status ignores row failures")?;
                return Ok(EXIT_OK);
            }
            Ok(if report.all_pass { EXIT_OK } else { EXIT_FAILED })
        }
        Command::Axioms { samples, max_value, ell, seed, out } => {
            let seed = if seed == 0 { entropy_seed() } else { seed };
            writeln!(stderr, "axioms seed: {seed}")?;
            let config = AuditConfig {
                samples,
                max_value,
                ell: usize::try_from(ell).map_err(usage)?,
                seed,
            };
            let report = run_audit(config);
            for c in &report.counterexamples {
                writeln!(stderr, "counterexample (sample {}): {}: {}", c.sample, c.property, c.detail)?;
            }
            with_output(&out, stdout, |w| write_audit(w, out.format, &report))?;
            Ok(if report.passed { EXIT_OK } else { EXIT_FAILED })
        }
    }
}

fn entropy_seed() -> u64 {
    loop {
        let seed: u64 = rand::random();
        if seed != 0 {
            return seed;
        }
    }
}

fn with_output<F>(out: &OutputArgs, stdout: &mut dyn Write, body: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> Result<(), CliError>,
{
    match &out.output {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| CliError::Usage(format!("cannot create {}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            body(&mut w)?;
            w.flush()?;
            Ok(())
        }
        None => {
            body(stdout)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

/// Parses a comma-separated tuple literal such as `5,8,13`.
pub fn parse_tuple_literal(text: &str) -> Result<Vec<BigInt>, String> {
    text.split(',')
        .map(|part| {
            let part = part.trim();
            part.parse::<BigInt>()
                .map_err(|_| format!("malformed integer {part:?} in tuple {text:?}"))
        })
        .collect()
}

fn parse_tuple(text: &str) -> Result<CoprimeTuple, CliError> {
    let values = parse_tuple_literal(text).map_err(CliError::Usage)?;
    make_tuple(&values).map_err(|e| CliError::Usage(format!("{text}: {e}")))
}

fn parse_target(text: &str) -> Result<BigUint, CliError> {
    let value: BigInt = text
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("malformed target {text:?}")))?;
    match value.to_biguint() {
        Some(v) if v > BigUint::ZERO => Ok(v),
        _ => Err(CliError::Usage(format!("target must be positive, got {value}"))),
    }
}

/// Display form of a real: 12 significant digits.
pub fn format_real(x: f64) -> String {
    round_sig12(x).to_string()
}

fn format_coeffs(coeffs: &[BigInt]) -> String {
    let parts: Vec<String> = coeffs.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

fn write_json<T: Serialize>(w: &mut dyn Write, value: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *w, value).map_err(io::Error::from)?;
    writeln!(w)?;
    Ok(())
}

fn write_csv(w: &mut dyn Write, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    let mut writer = csv::Writer::from_writer(w);
    writer.write_record(header)?;
    for row in rows {
        writer.write_record(row)?;
    }
    writer.flush()?;
    Ok(())
}

fn write_table(w: &mut dyn Write, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (width, cell) in widths.iter_mut().zip(row) {
            *width = (*width).max(visible_width(cell));
        }
    }
    let line = |cells: Vec<&str>| -> String {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &width)| format!("{c}{}", " ".repeat(width - visible_width(c))))
            .collect();
        padded.join("  ").trim_end().to_string()
    };
    writeln!(w, "{}", line(header.to_vec()))?;
    for row in rows {
        writeln!(w, "{}", line(row.iter().map(String::as_str).collect()))?;
    }
    Ok(())
}

/// Width ignoring ANSI escape sequences.
fn visible_width(s: &str) -> usize {
    let mut width = 0;
    let mut in_escape = false;
    for c in s.chars() {
        match (in_escape, c) {
            (false, '\x1b') => in_escape = true,
            (true, 'm') => in_escape = false,
            (true, _) => {}
            (false, _) => width += 1,
        }
    }
    width
}

fn write_fib(
    w: &mut dyn Write,
    format: Format,
    k: SeqParam,
    from: i64,
    to: i64,
    rows: &[(i64, BigInt)],
) -> Result<(), CliError> {
    let cells: Vec<Vec<String>> = rows.iter().map(|(n, v)| vec![n.to_string(), v.to_string()]).collect();
    match format {
        Format::Json => write_json(
            w,
            &json!({
                "config": {"command": "fib", "k": k.to_string(), "from": from.to_string(), "to": to.to_string()},
                "rows": rows.iter().map(|(n, v)| json!({"n": n.to_string(), "value": v.to_string()})).collect::<Vec<_>>(),
            }),
        ),
        Format::Csv => write_csv(w, &["n", "value"], &cells),
        Format::Table => write_table(w, &["n", "F_{k,n}"], &cells),
    }
}

fn write_q(w: &mut dyn Write, format: Format, tuple: &CoprimeTuple, target: &BigUint, q: &QValue) -> Result<(), CliError> {
    match format {
        Format::Json => write_json(
            w,
            &json!({
                "config": {"command": "q", "tuple": tuple, "target": target.to_string()},
                "cardinality": tuple.cardinality().to_string(),
                "value": q.value.to_string(),
                "witness": q.witness.coeffs.iter().map(ToString::to_string).collect::<Vec<_>>(),
            }),
        ),
        Format::Csv => write_csv(
            w,
            &["tuple", "target", "value", "witness"],
            &[vec![tuple.to_string(), target.to_string(), q.value.to_string(), format_coeffs(&q.witness.coeffs)]],
        ),
        Format::Table => {
            writeln!(w, "tuple    {tuple}")?;
            writeln!(w, "target   {target}")?;
            writeln!(w, "q        {}", q.value)?;
            writeln!(w, "witness  {}", format_coeffs(&q.witness.coeffs))?;
            Ok(())
        }
    }
}

fn write_dist(w: &mut dyn Write, format: Format, a: &CoprimeTuple, b: &CoprimeTuple, d: &Distance) -> Result<(), CliError> {
    match format {
        Format::Json => write_json(
            w,
            &json!({
                "config": {"command": "dist", "a": a, "b": b, "base": d.base},
                "distance": d,
            }),
        ),
        Format::Csv => write_csv(
            w,
            &["a", "b", "base", "q_b(a)", "q_a(b)", "max_q", "log_value", "cross_cardinality"],
            &[vec![
                a.to_string(),
                b.to_string(),
                d.base.to_string(),
                d.q_by_second.to_string(),
                d.q_by_first.to_string(),
                d.max_q.to_string(),
                format_real(d.log_value),
                d.cross_cardinality.to_string(),
            ]],
        ),
        Format::Table => {
            writeln!(w, "a        {a}")?;
            writeln!(w, "b        {b}")?;
            writeln!(w, "q_b(a)   {}", d.q_by_second)?;
            writeln!(w, "q_a(b)   {}", d.q_by_first)?;
            writeln!(w, "max_q    {}", d.max_q)?;
            writeln!(w, "d        {} (base {})", format_real(d.log_value), d.base)?;
            if d.cross_cardinality {
                writeln!(w, "note     tuples differ in cardinality")?;
            }
            Ok(())
        }
    }
}

fn qi_cells(report: &QIReport, mark: impl Fn(bool) -> String) -> Vec<Vec<String>> {
    report
        .rows
        .iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                r.m.to_string(),
                r.index_gap.to_string(),
                r.q_nm.to_string(),
                r.q_mn.to_string(),
                r.max_q.to_string(),
                mark(r.lower_ok),
                mark(r.upper_ok),
                mark(r.lemma_lower_ok),
                mark(r.lemma_upper_ok),
                format_real(r.log_display),
            ]
        })
        .collect()
}

fn write_qi(w: &mut dyn Write, format: Format, report: &QIReport, color: bool) -> Result<(), CliError> {
    match format {
        Format::Json => write_json(
            w,
            &json!({
                "config": {
                    "command": "verify-qi",
                    "k": report.spec.k,
                    "ell": report.spec.ell.to_string(),
                    "max_index": report.max_index.to_string(),
                    "experimental": report.spec.experimental,
                    "base": report.base,
                },
                "rows": report.rows,
                "all_pass": report.all_pass,
            }),
        ),
        Format::Csv => write_csv(w, &QI_CSV_HEADER, &qi_cells(report, |b| b.to_string())),
        Format::Table => {
            let mark = |ok: bool| match (ok, color) {
                (true, true) => "\x1b[32mok\x1b[0m".to_string(),
                (false, true) => "\x1b[31mFAIL\x1b[0m".to_string(),
                (true, false) => "ok".to_string(),
                (false, false) => "FAIL".to_string(),
            };
            write_table(w, &QI_CSV_HEADER, &qi_cells(report, mark))?;
            writeln!(w, "all_pass: {} ({} rows, base {})", report.all_pass, report.rows.len(), report.base)?;
            Ok(())
        }
    }
}

fn write_audit(w: &mut dyn Write, format: Format, report: &AuditReport) -> Result<(), CliError> {
    let t = &report.tallies;
    let named = [
        ("submultiplicativity", t.submultiplicativity),
        ("triangle", t.triangle),
        ("symmetry", t.symmetry),
        ("identity", t.identity),
        ("membership", t.membership),
    ];
    let cells: Vec<Vec<String>> = named
        .iter()
        .map(|(name, tally)| vec![name.to_string(), tally.checked.to_string(), tally.violations.to_string()])
        .collect();
    match format {
        Format::Json => write_json(
            w,
            &json!({
                "config": {"command": "axioms", "audit": report.config},
                "tallies": report.tallies,
                "counterexamples": report.counterexamples,
                "all_pass": report.passed,
            }),
        ),
        Format::Csv => write_csv(w, &["property", "checked", "violations"], &cells),
        Format::Table => {
            write_table(w, &["property", "checked", "violations"], &cells)?;
            writeln!(
                w,
                "samples {} ell {} max-value {} seed {}: {} violations",
                report.config.samples,
                report.config.ell,
                report.config.max_value,
                report.config.seed,
                t.total_violations()
            )?;
            Ok(())
        }
    }
}
