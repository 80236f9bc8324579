//! The `gl2word` command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
//! 3 determinant not ±1.

use std::fmt::Write as _;
use std::io::{self, Write};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::cfrac::{expand, ContinuedFraction, Representation};
use crate::decomposer::{
    decompose, random_unimodular, verify, DecompositionTrace, TraceRecord, VerificationReport,
};
use crate::error::Error;
use crate::exact::{Mat2, Rational};
use crate::word::Word;

pub const FORMAT_ENV: &str = "GL2WORD_FORMAT";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NOT_UNIMODULAR: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RepChoice {
    First,
    Second,
    Both,
}

impl RepChoice {
    fn representations(self) -> &'static [Representation] {
        match self {
            RepChoice::First => &[Representation::First],
            RepChoice::Second => &[Representation::Second],
            RepChoice::Both => &[Representation::First, Representation::Second],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Decompose,
    Verify,
    Cfrac,
    Random,
    Eval,
}

/// A fully parsed invocation. Only the fields the command needs are set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliRequest {
    pub command: Command,
    pub matrix: Option<Mat2>,
    pub word: Option<Word>,
    pub rational: Option<Rational>,
    pub rep: RepChoice,
    pub format: Format,
    pub trace: bool,
    pub seed: Option<u64>,
    pub count: Option<usize>,
    pub length: Option<usize>,
    pub allow_c: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Usage(#[from] clap::Error),
    #[error("{0}")]
    Input(#[from] Error),
    #[error("invalid {FORMAT_ENV} value {0:?} (expected text or json)")]
    FormatEnv(String),
}

impl CliError {
    /// `--help` and `--version` come back as errors from clap but are not
    /// failures.
    pub fn is_informational(&self) -> bool {
        matches!(self, CliError::Usage(e) if matches!(
            e.kind(),
            clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
        ))
    }

    pub fn exit_code(&self) -> i32 {
        if self.is_informational() {
            EXIT_OK
        } else {
            EXIT_USAGE
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "gl2word",
    version,
    about = "Factor GL2(Z) matrices into words over A, B, C"
)]
struct Args {
    #[command(subcommand)]
    command: Sub,
    /// Continued-fraction representation used for b/d.
    #[arg(long, global = true, value_enum, default_value = "first")]
    rep: RepChoice,
    /// Output format; overrides GL2WORD_FORMAT.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Print every intermediate quantity.
    #[arg(long, global = true)]
    trace: bool,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Factor a matrix, e.g. "[-65, 17; 42, -11]".
    Decompose {
        #[arg(allow_hyphen_values = true)]
        matrix: String,
    },
    /// Check that a word evaluates to a matrix.
    Verify {
        #[arg(allow_hyphen_values = true)]
        matrix: String,
        word: String,
    },
    /// Both continued-fraction expansions of a rational and their convergents.
    Cfrac {
        #[arg(allow_hyphen_values = true)]
        rational: String,
    },
    /// Multiply out a word.
    Eval { word: String },
    /// Decompose and verify pseudo-random unimodular matrices.
    Random {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        length: usize,
        /// Include C among the random factors.
        #[arg(long)]
        allow_c: bool,
    },
}

fn resolve_format(flag: Option<Format>, env: Option<String>) -> Result<Format, CliError> {
    if let Some(f) = flag {
        return Ok(f);
    }
    match env.as_deref().map(str::trim) {
        None | Some("") => Ok(Format::Text),
        Some(v) => Format::from_str(v, true).map_err(|_| CliError::FormatEnv(v.to_string())),
    }
}

/// Parses arguments (without the program name), reading the default
/// output format from `GL2WORD_FORMAT`.
pub fn parse_args<I, S>(argv: I) -> Result<CliRequest, CliError>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    parse_args_with_env(argv, std::env::var(FORMAT_ENV).ok())
}

pub fn parse_args_with_env<I, S>(
    argv: I,
    env_format: Option<String>,
) -> Result<CliRequest, CliError>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let full = std::iter::once("gl2word".to_string()).chain(argv.into_iter().map(Into::into));
    let args = Args::try_parse_from(full)?;
    let mut req = CliRequest {
        command: Command::Decompose,
        matrix: None,
        word: None,
        rational: None,
        rep: args.rep,
        format: resolve_format(args.format, env_format)?,
        trace: args.trace,
        seed: None,
        count: None,
        length: None,
        allow_c: false,
    };
    match args.command {
        Sub::Decompose { matrix } => {
            req.matrix = Some(matrix.parse().map_err(Error::from)?);
        }
        Sub::Verify { matrix, word } => {
            req.command = Command::Verify;
            req.matrix = Some(matrix.parse().map_err(Error::from)?);
            req.word = Some(word.parse().map_err(Error::from)?);
        }
        Sub::Cfrac { rational } => {
            req.command = Command::Cfrac;
            req.rational = Some(rational.parse()?);
        }
        Sub::Eval { word } => {
            req.command = Command::Eval;
            req.word = Some(word.parse().map_err(Error::from)?);
        }
        Sub::Random {
            seed,
            count,
            length,
            allow_c,
        } => {
            req.command = Command::Random;
            req.seed = Some(seed);
            req.count = Some(count);
            req.length = Some(length);
            req.allow_c = allow_c;
        }
    }
    Ok(req)
}

/// Parses and runs; what the binary does.
pub fn main_with<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    match parse_args(argv) {
        Ok(req) => run(&req, out, err),
        Err(e) => {
            let code = e.exit_code();
            let sink: &mut dyn Write = if code == EXIT_OK { out } else { err };
            let _ = match &e {
                CliError::Usage(ce) => write!(sink, "{}", ce.render()),
                other => writeln!(sink, "error: {other}"),
            };
            code
        }
    }
}

pub fn run(req: &CliRequest, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match req.command {
        Command::Decompose => run_decompose(req, out, err),
        Command::Verify => run_verify(req, out),
        Command::Cfrac => run_cfrac(req, out),
        Command::Eval => run_eval(req, out),
        Command::Random => run_random(req, out, err),
    };
    match result {
        Ok(code) => code,
        Err(Outcome::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_VERIFY_FAILED
        }
        Err(Outcome::Fail(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

enum Outcome {
    Io(io::Error),
    Fail(i32, String),
}

impl From<io::Error> for Outcome {
    fn from(e: io::Error) -> Self {
        Outcome::Io(e)
    }
}

impl From<serde_json::Error> for Outcome {
    fn from(e: serde_json::Error) -> Self {
        Outcome::Io(e.into())
    }
}

fn require<'a, T>(field: &'a Option<T>, name: &str) -> Result<&'a T, Outcome> {
    field
        .as_ref()
        .ok_or_else(|| Outcome::Fail(EXIT_USAGE, format!("missing {name}")))
}

fn check_unimodular(m: &Mat2) -> Result<(), Outcome> {
    if m.is_unimodular() {
        Ok(())
    } else {
        Err(Outcome::Fail(
            EXIT_NOT_UNIMODULAR,
            Error::NotUnimodular(m.det()).to_string(),
        ))
    }
}

fn decompose_checked(
    m: &Mat2,
    rep: Representation,
) -> Result<(DecompositionTrace, VerificationReport), Outcome> {
    let trace = decompose(m, rep).map_err(|e| match e {
        Error::NotUnimodular(_) => Outcome::Fail(EXIT_NOT_UNIMODULAR, e.to_string()),
        other => Outcome::Fail(EXIT_VERIFY_FAILED, other.to_string()),
    })?;
    let report = verify(&trace);
    Ok((trace, report))
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), Outcome> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn rep_key(rep: Representation) -> &'static str {
    match rep {
        Representation::First => "first",
        Representation::Second => "second",
    }
}

/// Multi-line human-readable dump of a trace and its checks.
pub fn render_trace(trace: &DecompositionTrace, report: &VerificationReport) -> String {
    let mut s = String::new();
    let m = &trace.input;
    let _ = writeln!(s, "input: {m}");
    let _ = writeln!(s, "det: {}", m.det());
    match (&trace.cf, &trace.table) {
        (Some(cf), Some(table)) => {
            let _ = writeln!(
                s,
                "b/d: {} = {} ({})",
                Rational::new(m.b.clone(), m.d.clone()).expect("d != 0"),
                cf,
                cf.representation()
            );
            let _ = writeln!(s, "j: {}", cf.len());
            let _ = writeln!(s, "convergents:");
            for (k, (p, q)) in table.pairs().iter().enumerate() {
                let _ = writeln!(s, "  k={k} p={p} q={q}");
            }
        }
        _ => {
            let _ = writeln!(s, "d = 0: explicit family (b, c) = ({}, {})", m.b, m.c);
        }
    }
    let _ = writeln!(s, "sign exponent: {}", trace.sign_exponent);
    let _ = writeln!(s, "det exponent: {}", trace.det_exponent);
    if let Some(b_j) = &trace.b_j {
        let _ = writeln!(s, "b_j: {b_j}");
    }
    if !trace.chain.is_empty() {
        let _ = writeln!(s, "chain:");
        for (k, p) in trace.chain.iter().enumerate() {
            let _ = writeln!(s, "  P_{k} = {p}");
        }
    }
    let _ = writeln!(s, "word: {}", trace.word);
    let _ = writeln!(s, "checks:");
    for c in &report.checks {
        let _ = writeln!(s, "  {} {}", if c.passed { "pass" } else { "FAIL" }, c.name);
    }
    s
}

fn run_decompose(
    req: &CliRequest,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Outcome> {
    let m = require(&req.matrix, "matrix")?;
    check_unimodular(m)?;
    let reps = req.rep.representations();
    let mut results = Vec::with_capacity(reps.len());
    for &rep in reps {
        results.push((rep, decompose_checked(m, rep)?));
    }

    match req.format {
        Format::Text => {
            for (rep, (trace, report)) in &results {
                if reps.len() > 1 {
                    writeln!(out, "{}: {}", rep_key(*rep), trace.word)?;
                } else {
                    writeln!(out, "{}", trace.word)?;
                }
                if req.trace {
                    write!(out, "{}", render_trace(trace, report))?;
                }
            }
        }
        Format::Json => {
            let records: Vec<_> = results
                .iter()
                .map(|(rep, (t, r))| (rep_key(*rep), TraceRecord::new(t, r.passed())))
                .collect();
            if records.len() == 1 {
                write_json(out, &records[0].1)?;
            } else {
                let map: serde_json::Map<_, _> = records
                    .into_iter()
                    .map(|(k, r)| Ok((k.to_string(), serde_json::to_value(r)?)))
                    .collect::<Result<_, serde_json::Error>>()?;
                write_json(out, &map)?;
            }
        }
    }

    let mut ok = true;
    for (rep, (_, report)) in &results {
        for name in report.failures() {
            ok = false;
            writeln!(err, "verification failed ({}): {name}", rep_key(*rep))?;
        }
    }
    Ok(if ok { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

fn run_verify(req: &CliRequest, out: &mut dyn Write) -> Result<i32, Outcome> {
    let m = require(&req.matrix, "matrix")?;
    let w = require(&req.word, "word")?;
    check_unimodular(m)?;
    let evaluated = w.evaluate();
    let ok = evaluated == *m;
    match req.format {
        Format::Text if ok => writeln!(out, "ok: {w} = {m}")?,
        Format::Text => writeln!(out, "mismatch: {w} = {evaluated}, expected {m}")?,
        Format::Json => write_json(
            out,
            &json!({ "matrix": m, "word": w, "evaluated": evaluated, "verified": ok }),
        )?,
    }
    Ok(if ok { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

fn cf_json(cf: &ContinuedFraction) -> serde_json::Value {
    let table = cf.convergents();
    json!({
        "cf": cf.quotients().iter().map(|n| n.to_string()).collect::<Vec<_>>(),
        "text": cf.to_string(),
        "convergents": table
            .pairs()
            .iter()
            .map(|(p, q)| [p.to_string(), q.to_string()])
            .collect::<Vec<_>>(),
    })
}

fn run_cfrac(req: &CliRequest, out: &mut dyn Write) -> Result<i32, Outcome> {
    let x = require(&req.rational, "rational")?;
    let first = expand(x);
    let second = first.alternate();
    match req.format {
        Format::Text => {
            writeln!(out, "first:  {first}")?;
            writeln!(out, "second: {second}")?;
            for (name, cf) in [("first", &first), ("second", &second)] {
                writeln!(out, "convergents ({name}):")?;
                for (k, (p, q)) in cf.convergents().pairs().iter().enumerate() {
                    writeln!(out, "  k={k} p={p} q={q}")?;
                }
            }
        }
        Format::Json => write_json(
            out,
            &json!({ "rational": x.to_string(), "first": cf_json(&first), "second": cf_json(&second) }),
        )?,
    }
    Ok(EXIT_OK)
}

fn run_eval(req: &CliRequest, out: &mut dyn Write) -> Result<i32, Outcome> {
    let w = require(&req.word, "word")?;
    let m = w.evaluate();
    match req.format {
        Format::Text => writeln!(out, "{m}")?,
        Format::Json => write_json(out, &m)?,
    }
    Ok(EXIT_OK)
}

/// Item `i` uses seed `seed + i` (wrapping).
fn run_random(req: &CliRequest, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Outcome> {
    let seed = *require(&req.seed, "--seed")?;
    let count = *require(&req.count, "--count")?;
    let length = *require(&req.length, "--length")?;
    let reps = req.rep.representations();
    let mut failures = 0usize;
    let mut items = Vec::new();

    for i in 0..count {
        let item_seed = seed.wrapping_add(i as u64);
        let m = random_unimodular(item_seed, length, req.allow_c);
        let mut results = Vec::with_capacity(reps.len());
        for &rep in reps {
            results.push((rep, decompose_checked(&m, rep)?));
        }
        for (rep, (_, report)) in &results {
            for name in report.failures() {
                failures += 1;
                writeln!(
                    err,
                    "verification failed (seed {item_seed}, {}): {name}",
                    rep_key(*rep)
                )?;
            }
        }
        match req.format {
            Format::Text => {
                let words: Vec<String> = results
                    .iter()
                    .map(|(_, (t, _))| t.word.to_string())
                    .collect();
                writeln!(out, "{m}\t{}", words.join("\t"))?;
                if req.trace {
                    for (_, (t, r)) in &results {
                        write!(out, "{}", render_trace(t, r))?;
                    }
                }
            }
            Format::Json => {
                let mut traces = serde_json::Map::new();
                for (rep, (t, r)) in &results {
                    traces.insert(
                        rep_key(*rep).into(),
                        serde_json::to_value(TraceRecord::new(t, r.passed()))?,
                    );
                }
                items.push(json!({ "seed": item_seed.to_string(), "traces": traces }));
            }
        }
    }
    if req.format == Format::Json {
        write_json(out, &items)?;
    }
    Ok(if failures == 0 {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    })
}
