//! Argument parsing and subcommand dispatch.
//!
//! Exit codes: 0 on success, 1 when a validation or suite fails, 2 on
//! malformed input (bad flags, JSON, field specs or shapes).

use std::collections::BTreeSet;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use latslice_core::countlab::suites::{Budget, Suite, SuiteReport};
use latslice_core::countlab::{
    count_slice_fiber, fit_q_polynomial, CountError, EndCondition, FiberQuery, FitError,
};
use latslice_core::exactalg::{Field, FieldSpec, PrimeField, Rationals};
use latslice_core::lattice::LatticeError;
use latslice_core::reptheory::{dual_weight, invariant_dim, RepError, WeightSeq};
use latslice_core::slice::{chain_to_slice, slice_to_chain, validate_point, SliceError};
use serde_json::{json, Value};

use crate::format::{self, FormatError};
use crate::parallel;

#[derive(Debug, Parser)]
#[command(name = "latslice", version, about = "Lattice chains, slice points and point counts over exact fields")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the JSON result to this file instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    #[command(subcommand)]
    Lattice(LatticeCmd),
    #[command(subcommand)]
    Chain(ChainCmd),
    #[command(subcommand)]
    Slice(SliceCmd),
    #[command(subcommand)]
    Rep(RepCmd),
    #[command(subcommand)]
    Count(CountCmd),
    /// Run a verification suite, or `all` of them
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct Payload {
    /// Inline JSON, a file path, or `-` for standard input (the default)
    payload: Option<String>,
    /// Field spec, `Q` or `Fp:<p>`; must agree with the payload's own
    #[arg(long)]
    field: Option<String>,
}

#[derive(Debug, Subcommand)]
enum LatticeCmd {
    /// Hecke type of a pair at a point
    HeckeType {
        #[command(flatten)]
        input: Payload,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Coloured divisor of a pair
    Divisor {
        #[command(flatten)]
        input: Payload,
    },
    SplittingType {
        #[command(flatten)]
        input: Payload,
    },
    /// Whether the monomials below degree k span the quotient
    Trivial {
        #[command(flatten)]
        input: Payload,
        #[arg(long)]
        k: usize,
    },
    /// Split a lattice into parts supported on two disjoint point sets
    Factorize {
        #[command(flatten)]
        input: Payload,
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        s1: String,
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        s2: String,
    },
}

#[derive(Debug, Subcommand)]
enum ChainCmd {
    Validate {
        #[command(flatten)]
        input: Payload,
    },
    ToSlice {
        #[command(flatten)]
        input: Payload,
    },
}

#[derive(Debug, Subcommand)]
enum SliceCmd {
    ToChain {
        #[command(flatten)]
        input: Payload,
    },
    Validate {
        #[command(flatten)]
        input: Payload,
    },
}

#[derive(Debug, Subcommand)]
enum RepCmd {
    /// Dimension of the invariants in a tensor product of fundamental representations
    InvariantDim {
        #[arg(long)]
        m: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<usize>,
    },
    Dual {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        j: usize,
    },
}

#[derive(Debug, Subcommand)]
enum CountCmd {
    ChainFiber(CountArgs),
    /// Count slice points; only the trivial end condition applies
    SliceFiber(CountArgs),
    /// Fit an integer polynomial in q to counts
    Fit {
        /// Comma-separated `q:count` pairs
        #[arg(long, value_delimiter = ',', required = true)]
        samples: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        held_out: Vec<String>,
    },
}

#[derive(Debug, Args)]
struct CountArgs {
    #[arg(long)]
    field: String,
    #[arg(long)]
    m: usize,
    /// Checked against the weights when given
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    weights: Vec<usize>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    points: Vec<String>,
    /// any, trivial, or zk (also exact-zk)
    #[arg(long)]
    end: Option<String>,
    #[arg(long)]
    witnesses: bool,
    /// Worker threads; 0 uses every core
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    suite: String,
    #[arg(long, value_delimiter = ',')]
    qs: Option<Vec<u64>>,
    #[arg(long)]
    max_m: Option<usize>,
    #[arg(long)]
    random_chains: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

enum Fail {
    /// Exit 2.
    Malformed(String),
    /// Exit 1, with the message also reported as JSON.
    Invalid(String),
}

/// A JSON result and whether it counts as success.
type Outcome = Result<(Value, bool), Fail>;

fn malformed(e: impl std::fmt::Display) -> Fail {
    Fail::Malformed(e.to_string())
}

fn invalid(e: impl std::fmt::Display) -> Fail {
    Fail::Invalid(e.to_string())
}

impl From<FormatError> for Fail {
    fn from(e: FormatError) -> Self {
        malformed(e)
    }
}

fn lattice_fail(e: LatticeError) -> Fail {
    match e {
        LatticeError::RankMismatch(..) | LatticeError::FieldMismatch(..) | LatticeError::SupportsOverlap => malformed(e),
        _ => invalid(e),
    }
}

fn slice_fail(e: SliceError) -> Fail {
    match e {
        SliceError::InvalidChain(ref r) => {
            invalid(format!("invalid chain: {}", r.failures.iter().map(|f| f.to_string()).collect::<Vec<_>>().join("; ")))
        }
        SliceError::InvalidPoint(ref r) => {
            invalid(format!("invalid slice point: {}", r.failures.iter().map(|f| f.to_string()).collect::<Vec<_>>().join("; ")))
        }
        SliceError::NotTrivial => invalid(e),
        _ => malformed(e),
    }
}

fn count_fail(e: CountError) -> Fail {
    match e {
        CountError::Lattice(l) => lattice_fail(l),
        CountError::Slice(s) => slice_fail(s),
        _ => malformed(e),
    }
}

fn big(v: u128) -> Value {
    match u64::try_from(v) {
        Ok(x) => json!(x),
        Err(_) => json!(v.to_string()),
    }
}

macro_rules! with_field {
    ($spec:expr, |$f:ident| $body:expr) => {
        match $spec {
            FieldSpec::Rationals => {
                let $f = Rationals;
                $body
            }
            FieldSpec::Prime(p) => {
                let $f = PrimeField::new(p).map_err(malformed)?;
                $body
            }
        }
    };
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
}

impl Io<'_> {
    fn payload(&mut self, p: &Payload) -> Result<(Value, FieldSpec), Fail> {
        let text = match p.payload.as_deref() {
            None | Some("-") => {
                let mut s = String::new();
                self.stdin.read_to_string(&mut s).map_err(|e| malformed(format!("reading standard input: {e}")))?;
                s
            }
            Some(s) if s.trim_start().starts_with(['{', '[']) => s.to_string(),
            Some(path) => std::fs::read_to_string(path).map_err(|e| malformed(format!("{path}: {e}")))?,
        };
        let v = format::parse_json(&text)?;
        let flag = p.field.as_deref().map(FieldSpec::parse).transpose().map_err(|e| malformed(format!("--field: {e}")))?;
        let spec = format::record_field(&v, flag)?;
        Ok((v, spec))
    }
}

fn failures_value<T: std::fmt::Display>(fs: &[T]) -> Value {
    json!(fs.iter().map(|f| f.to_string()).collect::<Vec<_>>())
}

fn lattice_cmd(io: &mut Io, cmd: &LatticeCmd) -> Outcome {
    match cmd {
        LatticeCmd::HeckeType { input, x } => {
            let (v, spec) = io.payload(input)?;
            with_field!(spec, |f| {
                let (outer, inner) = format::lattice_pair(&f, &v)?;
                let x = f.parse_elem(x).map_err(|e| malformed(format!("--x: {e}")))?;
                let t = outer.hecke_type_at(&inner, &x).map_err(lattice_fail)?;
                Ok((json!({"x": format::elem_value(&f, &x), "type": t.entries()}), true))
            })
        }
        LatticeCmd::Divisor { input } => {
            let (v, spec) = io.payload(input)?;
            with_field!(spec, |f| {
                let (outer, inner) = format::lattice_pair(&f, &v)?;
                let d = outer.divisor_of_pair(&inner).map_err(lattice_fail)?;
                let parts: Vec<Value> =
                    d.iter().map(|(x, t)| json!({"x": format::elem_value(&f, x), "type": t.entries()})).collect();
                Ok((json!({"divisor": parts, "total": d.total()}), true))
            })
        }
        LatticeCmd::SplittingType { input } => {
            let (v, spec) = io.payload(input)?;
            with_field!(spec, |f| {
                let l = format::lattice(&f, &v, "")?;
                Ok((json!({"splitting_type": l.splitting_type()}), true))
            })
        }
        LatticeCmd::Trivial { input, k } => {
            let (v, spec) = io.payload(input)?;
            with_field!(spec, |f| {
                let l = format::lattice(&f, &v, "")?;
                let t = l.quotient_basis_trivial(*k).map_err(lattice_fail)?;
                Ok((json!({"trivial": t}), true))
            })
        }
        LatticeCmd::Factorize { input, s1, s2 } => {
            let (v, spec) = io.payload(input)?;
            with_field!(spec, |f| {
                let l = format::lattice(&f, &v, "")?;
                let set = |s: &str, flag: &str| -> Result<BTreeSet<_>, Fail> {
                    s.split(',')
                        .filter(|t| !t.trim().is_empty())
                        .map(|t| f.parse_elem(t).map_err(|e| malformed(format!("--{flag}: {e}"))))
                        .collect()
                };
                let (a, b) = l.factorize(&set(s1, "s1")?, &set(s2, "s2")?).map_err(lattice_fail)?;
                Ok((json!({"first": format::lattice_value(&a), "second": format::lattice_value(&b)}), true))
            })
        }
    }
}

fn chain_cmd(io: &mut Io, cmd: &ChainCmd) -> Outcome {
    match cmd {
        ChainCmd::Validate { input } => {
            let (v, spec) = io.payload(input)?;
            with_field!(spec, |f| {
                let report = format::chain(&f, &v)?.validate(&f);
                Ok((json!({"valid": report.is_valid(), "failures": failures_value(&report.failures)}), report.is_valid()))
            })
        }
        ChainCmd::ToSlice { input } => {
            let (v, spec) = io.payload(input)?;
            with_field!(spec, |f| {
                let p = chain_to_slice(&f, &format::chain(&f, &v)?).map_err(slice_fail)?;
                Ok((format::slice_value(&f, &p), true))
            })
        }
    }
}

fn slice_cmd(io: &mut Io, cmd: &SliceCmd) -> Outcome {
    match cmd {
        SliceCmd::ToChain { input } => {
            let (v, spec) = io.payload(input)?;
            with_field!(spec, |f| {
                let c = slice_to_chain(&f, &format::slice_point(&f, &v)?).map_err(slice_fail)?;
                Ok((format::chain_value(&f, &c), true))
            })
        }
        SliceCmd::Validate { input } => {
            let (v, spec) = io.payload(input)?;
            with_field!(spec, |f| {
                let report = validate_point(&f, &format::slice_point(&f, &v)?);
                Ok((json!({"valid": report.is_valid(), "failures": failures_value(&report.failures)}), report.is_valid()))
            })
        }
    }
}

fn rep_cmd(cmd: &RepCmd) -> Outcome {
    let rep = |e: RepError| malformed(e);
    match cmd {
        RepCmd::InvariantDim { m, weights } => {
            let w = WeightSeq::new(*m, weights.clone()).map_err(rep)?;
            let dim = match invariant_dim(&w) {
                Ok(d) => d,
                Err(RepError::NotInRootLattice { .. }) => 0,
                Err(e) => return Err(rep(e)),
            };
            Ok((json!({"dim": big(dim)}), true))
        }
        RepCmd::Dual { m, j } => Ok((json!({"dual": dual_weight(*m, *j).map_err(rep)?}), true)),
    }
}

fn parse_end(s: Option<&str>, default: EndCondition) -> Result<EndCondition, Fail> {
    match s {
        None => Ok(default),
        Some("zk") => Ok(EndCondition::ExactZk),
        Some(t) => EndCondition::parse(t).ok_or_else(|| malformed(format!("--end: unknown end condition {t:?}"))),
    }
}

fn query<F: Field>(f: F, a: &CountArgs, end: EndCondition) -> Result<FiberQuery<F>, Fail> {
    let w = WeightSeq::new(a.m, a.weights.clone()).map_err(|e| malformed(format!("--weights: {e}")))?;
    if let Some(k) = a.k {
        if w.k() != Some(k) {
            return Err(malformed(format!("--k {k} does not match weights summing to {} with m = {}", w.total(), a.m)));
        }
    }
    let points = a
        .points
        .iter()
        .map(|p| f.parse_elem(p).map_err(|e| malformed(format!("--points: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    FiberQuery::new(f, w, points, end).map_err(count_fail)
}

fn count_cmd(cmd: &CountCmd) -> Outcome {
    match cmd {
        CountCmd::ChainFiber(a) => {
            let spec = FieldSpec::parse(&a.field).map_err(|e| malformed(format!("--field: {e}")))?;
            let end = parse_end(a.end.as_deref(), EndCondition::Any)?;
            with_field!(spec, |f| {
                let q = query(f, a, end)?;
                let start = Instant::now();
                let r = parallel::count_chains(&q, a.witnesses, a.jobs).map_err(count_fail)?;
                let out = format::count_value(format::query_value(&q), &r, start.elapsed().as_millis(), |c| {
                    format::chain_value(&f, c)
                });
                Ok((out, true))
            })
        }
        CountCmd::SliceFiber(a) => {
            let spec = FieldSpec::parse(&a.field).map_err(|e| malformed(format!("--field: {e}")))?;
            let end = parse_end(a.end.as_deref(), EndCondition::Trivial)?;
            with_field!(spec, |f| {
                let q = query(f, a, end)?;
                let start = Instant::now();
                let r = count_slice_fiber(&q, a.witnesses).map_err(count_fail)?;
                let out = format::count_value(format::query_value(&q), &r, start.elapsed().as_millis(), |p| {
                    format::slice_value(&f, p)
                });
                Ok((out, true))
            })
        }
        CountCmd::Fit { samples, held_out } => {
            let pairs = |items: &[String], flag: &str| -> Result<Vec<(u64, u128)>, Fail> {
                items
                    .iter()
                    .map(|s| {
                        let bad = || malformed(format!("--{flag}: expected q:count, found {s:?}"));
                        let (q, c) = s.split_once(':').ok_or_else(bad)?;
                        Ok((q.trim().parse().map_err(|_| bad())?, c.trim().parse().map_err(|_| bad())?))
                    })
                    .collect()
            };
            let fit = fit_q_polynomial(&pairs(samples, "samples")?, &pairs(held_out, "held-out")?).map_err(|e| match e {
                FitError::Empty | FitError::DuplicateQ(_) => malformed(e),
                _ => invalid(e),
            })?;
            let p = &fit.poly;
            Ok((
                json!({
                    "polynomial": p.to_string(),
                    "coefficients": p.coeffs().iter().map(|&c| big(c)).collect::<Vec<_>>(),
                    "degree": p.degree(),
                    "leading": big(p.leading()),
                    "held_out_checked": fit.held_out_checked,
                }),
                true,
            ))
        }
    }
}

fn verify_cmd(a: &VerifyArgs) -> Outcome {
    let suites: Vec<Suite> = if a.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![Suite::parse(&a.suite).ok_or_else(|| {
            let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
            malformed(format!("unknown suite {:?}; expected one of {} or all", a.suite, names.join(", ")))
        })?]
    };
    let mut budget = Budget::default();
    if let Some(qs) = &a.qs {
        if let Some(q) = qs.iter().find(|&&q| !latslice_core::exactalg::is_prime(q)) {
            return Err(malformed(format!("--qs: {q} is not prime")));
        }
        budget.qs = qs.clone();
    }
    if let Some(m) = a.max_m {
        budget.max_m = m;
    }
    if let Some(n) = a.random_chains {
        budget.random_chains = n;
    }
    if let Some(s) = a.seed {
        budget.seed = s;
    }
    let reports: Vec<SuiteReport> = suites.iter().map(|&s| parallel::verify(s, &budget, a.jobs)).collect();
    let pass = reports.iter().all(SuiteReport::passed);
    let out = if reports.len() == 1 {
        format::suite_value(&reports[0])
    } else {
        json!({"suites": reports.iter().map(format::suite_value).collect::<Vec<_>>(), "pass": pass})
    };
    Ok((out, pass))
}

fn dispatch(cli: &Cli, io: &mut Io) -> Outcome {
    match &cli.command {
        Command::Lattice(c) => lattice_cmd(io, c),
        Command::Chain(c) => chain_cmd(io, c),
        Command::Slice(c) => slice_cmd(io, c),
        Command::Rep(c) => rep_cmd(c),
        Command::Count(c) => count_cmd(c),
        Command::Verify(a) => verify_cmd(a),
    }
}

fn emit(cli: &Cli, v: &Value, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let text = serde_json::to_string_pretty(v).expect("JSON values serialize") + "\n";
    match &cli.out {
        Some(path) => match std::fs::write(path, text) {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(stderr, "error: {}: {e}", path.display());
                2
            }
        },
        None => {
            let _ = stdout.write_all(text.as_bytes());
            0
        }
    }
}

/// Parses `args` (program name first) and runs the subcommand.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{e}");
                    2
                }
            };
        }
    };
    let mut io = Io { stdin };
    match dispatch(&cli, &mut io) {
        Ok((v, ok)) => match emit(&cli, &v, stdout, stderr) {
            0 if ok => 0,
            0 => 1,
            code => code,
        },
        Err(Fail::Malformed(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
        Err(Fail::Invalid(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            match emit(&cli, &json!({"error": msg}), stdout, stderr) {
                0 => 1,
                code => code,
            }
        }
    }
}
