//! The `cfx` command-line front end.
//!
//! Exit status: 0 success, 1 verification failure, 2 usage error, 3 domain error.

mod output;

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand};
use num_traits::{Signed, Zero};
use serde_json::{Map, Value};

use crate::cf::{
    convergents, depth_cap, estimate_limit, estimate_limit_two_precision, ExpansionSpec,
    DEPTH_CAP_ENV,
};
use crate::expansions::{
    make_classical, make_confluent_1f1, make_e_euler, make_exp_inv_n, make_exp_n,
    make_exp_n_shifted, make_inc_gamma, make_m_fraction, make_m_fraction_diagonal, make_rat_exp,
    same_convergents, same_convergents_within, FamilyId,
};
use crate::identities::{
    difference_formula, rate_bound, run_suite, CheckId, SuiteGrid, REFERENCE_TABLE_DIFF3,
};
use crate::numeric::{
    format_decimal, format_fraction, format_scientific, parse_complex_literal, BigInt, BigRational,
    Domain, HighPrecComplex, PrecisionContext, Scalar,
};
use crate::oracle::{exp_series, hyp_1f1, inc_gamma_ratio};
use crate::{Error, Result};

pub use output::{Format, OutputRecord, SCHEMA_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "cfx",
    version,
    about = "Continued fractions for e^n, e^(l/n), the incomplete gamma function and 1F1"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Raw and reduced convergents of one expansion.
    Convergents(ConvergentsArgs),
    /// Limit of an expansion, cross-checked against a series oracle.
    Eval(EvalArgs),
    /// Successive differences of the e^n fraction against their closed form.
    DiffTable(DiffTableArgs),
    /// Run the verification suite.
    Verify(VerifyArgs),
    /// Several expansions of one constant side by side.
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Default, Args)]
struct FamilyParams {
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    l: Option<u64>,
    /// The M of e^(1/M).
    #[arg(long)]
    m: Option<u64>,
    /// Complex literal `[-]ddd[.ddd][(+|-)ddd[.ddd]i]`.
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
}

#[derive(Debug, Args)]
struct ConvergentsArgs {
    #[arg(long)]
    expansion: String,
    #[command(flatten)]
    params: FamilyParams,
    #[arg(long, default_value_t = 50)]
    depth: u64,
    #[arg(long, default_value_t = 30)]
    digits: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long)]
    expansion: String,
    #[command(flatten)]
    params: FamilyParams,
    #[arg(long, default_value_t = 30)]
    digits: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args)]
struct DiffTableArgs {
    #[arg(long)]
    n: u64,
    #[arg(long, default_value_t = 50)]
    depth: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// `all` or a comma-separated list of suite ids.
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 6)]
    max_n: u64,
    #[arg(long, default_value_t = 50)]
    depth: u64,
    #[arg(long, default_value_t = 30)]
    digits: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args)]
struct CompareArgs {
    /// Constant being expanded: e, e2, e-inv (needs --n) or 1f1-diag (needs --z).
    #[arg(long)]
    value: String,
    /// Comma-separated expansion ids.
    #[arg(long, value_delimiter = ',')]
    expansions: Vec<String>,
    #[command(flatten)]
    params: FamilyParams,
    #[arg(long, default_value_t = 10)]
    depth: u64,
    #[arg(long, default_value_t = 25)]
    digits: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

/// Parses `args` (including the program name), runs the command and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let status = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return status;
        }
    };
    let (result, format) = match cli.command {
        Command::Convergents(a) => (cmd_convergents(&a), a.format),
        Command::Eval(a) => (cmd_eval(&a), a.format),
        Command::DiffTable(a) => (cmd_diff_table(&a), a.format),
        Command::Verify(a) => (cmd_verify(&a), a.format),
        Command::Compare(a) => (cmd_compare(&a), a.format),
    };
    match result {
        Ok((record, status)) => {
            if let Err(e) = record.write(format, out) {
                let _ = writeln!(err, "error: {e}");
                return EXIT_FAILED;
            }
            status
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_status(&e)
        }
    }
}

pub fn exit_status(e: &Error) -> i32 {
    match e {
        Error::Parameter(_)
        | Error::Parse(_)
        | Error::Precondition(_)
        | Error::InvalidTransform(_) => EXIT_USAGE,
        Error::Domain(_) | Error::Singular(_) | Error::DivisionByZero(_) => EXIT_DOMAIN,
        Error::NonConvergence { .. } | Error::Accuracy(_) => EXIT_FAILED,
    }
}

type Outcome = Result<(OutputRecord, i32)>;

fn require<T: Copy>(v: Option<T>, flag: &str, id: FamilyId) -> Result<T> {
    v.ok_or_else(|| Error::Parameter(format!("{id} requires --{flag}")))
}

fn require_str<'a>(v: &'a Option<String>, flag: &str, id: FamilyId) -> Result<&'a str> {
    v.as_deref()
        .ok_or_else(|| Error::Parameter(format!("{id} requires --{flag}")))
}

/// An expansion over the exact ring when its parameters are real rationals,
/// over the complex floats otherwise.
enum Built {
    Exact(ExpansionSpec<BigRational>),
    Complex(ExpansionSpec<HighPrecComplex>),
}

fn build_exact(id: FamilyId, p: &FamilyParams) -> Result<ExpansionSpec<BigRational>> {
    match id {
        FamilyId::EEuler => Ok(make_e_euler()),
        FamilyId::ExpN => make_exp_n(require(p.n, "n", id)?),
        FamilyId::ExpNShifted => make_exp_n_shifted(require(p.n, "n", id)?),
        FamilyId::RatExp => make_rat_exp(require(p.l, "l", id)?, require(p.n, "n", id)?),
        FamilyId::ExpInvN => make_exp_inv_n(require(p.n, "n", id)?),
        FamilyId::EOneOverM => make_classical(id, Some(require(p.m, "m", id)?)),
        FamilyId::ERegular | FamilyId::EOver | FamilyId::ESporadic | FamilyId::ESquared => {
            make_classical(id, None)
        }
        _ => unreachable!("z families are built by build_z"),
    }
}

fn build_z<T: Domain>(id: FamilyId, z: &T, b: Option<&T>) -> Result<ExpansionSpec<T>> {
    match id {
        FamilyId::IncGamma => make_inc_gamma(z),
        FamilyId::Confluent1F1 => make_confluent_1f1(z),
        FamilyId::MFractionDiagonal => make_m_fraction_diagonal(z),
        FamilyId::MFraction => make_m_fraction(b.expect("checked by caller"), z),
        _ => unreachable!("only z families"),
    }
}

/// The `z` (and `b`) literals of a z family, exact parts.
fn z_literals(id: FamilyId, p: &FamilyParams) -> Result<(ParsedLiteral, Option<ParsedLiteral>)> {
    let z = parse_literal(require_str(&p.z, "z", id)?)?;
    let b = if id == FamilyId::MFraction {
        Some(parse_literal(require_str(&p.b, "b", id)?)?)
    } else {
        None
    };
    Ok((z, b))
}

type ParsedLiteral = (BigRational, BigRational);

fn parse_literal(s: &str) -> Result<ParsedLiteral> {
    parse_complex_literal(s).map_err(|_| Error::Parameter(format!("invalid complex literal {s:?}")))
}

fn is_real(v: &ParsedLiteral) -> bool {
    v.1.is_zero()
}

fn complex_at(v: &ParsedLiteral, ctx: PrecisionContext) -> HighPrecComplex {
    HighPrecComplex::from_rationals(&v.0, &v.1, ctx)
}

fn build_complex_at(
    id: FamilyId,
    z: &ParsedLiteral,
    b: Option<&ParsedLiteral>,
    ctx: PrecisionContext,
) -> Result<ExpansionSpec<HighPrecComplex>> {
    let zc = complex_at(z, ctx);
    let bc = b.map(|b| complex_at(b, ctx));
    build_z(id, &zc, bc.as_ref())
}

fn build(
    id: FamilyId,
    p: &FamilyParams,
    ctx: PrecisionContext,
    force_complex: bool,
) -> Result<Built> {
    if !id.takes_z() {
        return Ok(Built::Exact(build_exact(id, p)?));
    }
    let (z, b) = z_literals(id, p)?;
    let real = is_real(&z) && b.as_ref().is_none_or(is_real);
    if real && !force_complex {
        return Ok(Built::Exact(build_z(id, &z.0, b.as_ref().map(|b| &b.0))?));
    }
    Ok(Built::Complex(build_complex_at(id, &z, b.as_ref(), ctx)?))
}

fn parse_id(s: &str) -> Result<FamilyId> {
    s.parse()
}

fn check_depth(depth: u64) -> Result<()> {
    let cap = depth_cap();
    if depth > cap {
        return Err(Error::Parameter(format!(
            "--depth {depth} exceeds the cap {cap} (set {DEPTH_CAP_ENV} to raise it)"
        )));
    }
    Ok(())
}

fn check_digits(digits: u32) -> Result<()> {
    if digits == 0 || digits > 10_000 {
        return Err(Error::Parameter(format!(
            "--digits must be in 1..=10000, got {digits}"
        )));
    }
    Ok(())
}

fn family_params(record: &mut OutputRecord, id: FamilyId, p: &FamilyParams) {
    record.param("expansion", id.as_str());
    if let Some(n) = p.n {
        record.param("n", n.to_string());
    }
    if let Some(l) = p.l {
        record.param("l", l.to_string());
    }
    if let Some(m) = p.m {
        record.param("m", m.to_string());
    }
    if let Some(z) = &p.z {
        record.param("z", z.clone());
    }
    if let Some(b) = &p.b {
        record.param("b", b.clone());
    }
}

fn ctx_for(digits: u32) -> PrecisionContext {
    PrecisionContext::with_digits(digits + 5)
}

/// The rate bound column applies to the e^n fraction (and its n = 1 alias).
fn bound_for(id: FamilyId, p: &FamilyParams, k: u64) -> Value {
    let n = match id {
        FamilyId::EEuler => 1,
        FamilyId::ExpN => match p.n {
            Some(n) => n,
            None => return Value::Null,
        },
        _ => return Value::Null,
    };
    if k == 0 {
        return Value::Null;
    }
    format_scientific(&rate_bound(n, k), 6).into()
}

const CONVERGENT_COLUMNS: [&str; 7] = ["k", "p", "q", "value", "decimal", "difference", "bound"];

fn cmd_convergents(a: &ConvergentsArgs) -> Outcome {
    let id = parse_id(&a.expansion)?;
    check_depth(a.depth)?;
    check_digits(a.digits)?;
    let mut record = OutputRecord::new("convergents", &CONVERGENT_COLUMNS);
    family_params(&mut record, id, &a.params);
    record.param("depth", a.depth.to_string());
    record.param("digits", a.digits.to_string());
    match build(id, &a.params, ctx_for(a.digits), false)? {
        Built::Exact(spec) => {
            let mut prev: Option<BigRational> = None;
            for c in convergents(&spec, a.depth)? {
                let diff = match (&prev, &c.value) {
                    (Some(p), Some(v)) => format_fraction(&(v.clone() - p)).into(),
                    _ => Value::Null,
                };
                record.push_row(vec![
                    c.k.into(),
                    format_fraction(&c.p).into(),
                    format_fraction(&c.q).into(),
                    c.value
                        .as_ref()
                        .map_or(Value::Null, |v| format_fraction(v).into()),
                    c.value
                        .as_ref()
                        .map_or(Value::Null, |v| format_decimal(v, a.digits).into()),
                    diff,
                    bound_for(id, &a.params, c.k),
                ]);
                prev = c.value;
            }
        }
        Built::Complex(spec) => {
            let mut prev: Option<HighPrecComplex> = None;
            for c in convergents(&spec, a.depth)? {
                let diff = match (&prev, &c.value) {
                    (Some(p), Some(v)) => (v.clone() - p).to_decimal(a.digits).into(),
                    _ => Value::Null,
                };
                record.push_row(vec![
                    c.k.into(),
                    c.p.to_decimal(a.digits).into(),
                    c.q.to_decimal(a.digits).into(),
                    Value::Null,
                    c.value
                        .as_ref()
                        .map_or(Value::Null, |v| v.to_decimal(a.digits).into()),
                    diff,
                    Value::Null,
                ]);
                prev = c.value;
            }
        }
    }
    Ok((record, EXIT_OK))
}

/// Series value of the constant an expansion represents, where one exists.
fn oracle_value(
    id: FamilyId,
    p: &FamilyParams,
    ctx: PrecisionContext,
    digits: u32,
) -> Result<Option<HighPrecComplex>> {
    let real = |q: BigRational| -> Result<Option<HighPrecComplex>> {
        Ok(Some(
            exp_series(&HighPrecComplex::from_rational(&q, ctx), digits)?.value,
        ))
    };
    let ratio = |l: u64, n: u64| BigRational::new(BigInt::from(l), BigInt::from(n));
    match id {
        FamilyId::EEuler | FamilyId::ERegular | FamilyId::EOver | FamilyId::ESporadic => {
            real(ratio(1, 1))
        }
        FamilyId::ESquared => real(ratio(2, 1)),
        FamilyId::ExpN => real(ratio(require(p.n, "n", id)?, 1)),
        FamilyId::RatExp => real(ratio(require(p.l, "l", id)?, require(p.n, "n", id)?)),
        FamilyId::ExpInvN => real(ratio(1, require(p.n, "n", id)?)),
        FamilyId::EOneOverM => real(ratio(1, require(p.m, "m", id)?)),
        FamilyId::ExpNShifted => Ok(None),
        FamilyId::IncGamma | FamilyId::Confluent1F1 | FamilyId::MFractionDiagonal => {
            let (z, _) = z_literals(id, p)?;
            let z = complex_at(&z, ctx);
            if id == FamilyId::IncGamma {
                Ok(Some(inc_gamma_ratio(&z, digits)?))
            } else {
                Ok(Some(
                    hyp_1f1(&(z.clone() + &z.one_like()), &z, digits)?.value,
                ))
            }
        }
        FamilyId::MFraction => {
            let (z, b) = z_literals(id, p)?;
            let (z, b) = (
                complex_at(&z, ctx),
                complex_at(&b.expect("m-fraction has b"), ctx),
            );
            Ok(Some(
                hyp_1f1(&(b.clone() + &b.one_like()), &z, digits)?.value,
            ))
        }
    }
}

fn cmd_eval(a: &EvalArgs) -> Outcome {
    let id = parse_id(&a.expansion)?;
    check_digits(a.digits)?;
    let mut record = OutputRecord::new("eval", &["value", "depth", "oracle", "delta", "agrees"]);
    family_params(&mut record, id, &a.params);
    record.param("digits", a.digits.to_string());
    let ctx = ctx_for(a.digits);
    let cap = depth_cap();
    let target = a.digits + 5;
    let (value, depth) = match build(id, &a.params, ctx, false)? {
        Built::Exact(spec) => {
            let limit = estimate_limit(&spec, target, cap)?;
            (
                HighPrecComplex::from_rational(&limit.value, ctx.extended()),
                limit.depth,
            )
        }
        Built::Complex(_) => {
            let (z, b) = z_literals(id, &a.params)?;
            let limit = estimate_limit_two_precision(
                |c| build_complex_at(id, &z, b.as_ref(), c),
                ctx,
                target,
                cap,
            )?;
            record.diagnostic(
                "precision_agreement_digits",
                format!("{:.1}", limit.agreement_digits.min(999.0)),
            );
            (limit.value, limit.depth)
        }
    };
    let oracle = oracle_value(id, &a.params, ctx.extended(), target)?;
    let (oracle_cell, delta, agrees) = match &oracle {
        Some(o) => {
            let d = value.clone() - o;
            let ok = d.is_negligible(o, a.digits);
            let delta = format_scientific(&d.abs().to_rational(), 3);
            (
                o.to_decimal(a.digits).into(),
                Value::String(delta),
                Value::Bool(ok),
            )
        }
        None => (Value::Null, Value::Null, Value::Null),
    };
    record.push_row(vec![
        value.to_decimal(a.digits).into(),
        depth.into(),
        oracle_cell,
        delta,
        agrees.clone(),
    ]);
    let status = if agrees == Value::Bool(false) {
        EXIT_FAILED
    } else {
        EXIT_OK
    };
    Ok((record, status))
}

fn cmd_diff_table(a: &DiffTableArgs) -> Outcome {
    check_depth(a.depth)?;
    let spec = make_exp_n(a.n)?;
    let mut record = OutputRecord::new("diff-table", &["k", "difference", "formula", "match"]);
    record.param("n", a.n.to_string());
    record.param("depth", a.depth.to_string());
    let values: Vec<BigRational> = convergents(&spec, a.depth)?
        .into_iter()
        .map(|c| {
            c.value
                .ok_or_else(|| Error::Singular(format!("C_{} is singular", c.k)))
        })
        .collect::<Result<_>>()?;
    let mut all = true;
    for k in 1..=a.depth {
        let diff = values[k as usize].clone() - &values[k as usize - 1];
        let formula = difference_formula(a.n, k);
        let ok = diff == formula && diff.is_negative();
        all &= ok;
        record.push_row(vec![
            k.into(),
            format_fraction(&diff).into(),
            format_fraction(&formula).into(),
            ok.into(),
        ]);
    }
    if a.n == 1 && a.depth >= 3 {
        record.diagnostic(
            "note",
            format!(
                "reference table prints {REFERENCE_TABLE_DIFF3} for C_3 - C_2; exact value is {}",
                format_fraction(&(values[3].clone() - &values[2]))
            ),
        );
    }
    record.diagnostic("all_match", all);
    Ok((record, if all { EXIT_OK } else { EXIT_FAILED }))
}

fn pairs_string(m: &std::collections::BTreeMap<String, String>) -> String {
    m.iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(";")
}

fn cmd_verify(a: &VerifyArgs) -> Outcome {
    let selection = CheckId::parse_selection(&a.suite)?;
    if a.max_n == 0 || a.depth < 2 {
        return Err(Error::Parameter(
            "--max-n must be >= 1 and --depth >= 2".into(),
        ));
    }
    if a.digits < 20 {
        return Err(Error::Parameter(format!(
            "--digits must be >= 20 for the suite, got {}",
            a.digits
        )));
    }
    let grid = SuiteGrid {
        max_n: a.max_n,
        k_max: a.depth,
        digits: a.digits,
    };
    let reports = run_suite(&selection, grid);
    let mut record = OutputRecord::new(
        "verify",
        &[
            "check",
            "claim",
            "parameters",
            "expected",
            "actual",
            "passed",
            "witness",
            "note",
        ],
    );
    record.param("suite", a.suite.clone());
    record.param("max_n", a.max_n.to_string());
    record.param("depth", a.depth.to_string());
    record.param("digits", a.digits.to_string());
    let passed = reports.iter().filter(|r| r.passed).count();
    for r in &reports {
        record.push_row(vec![
            r.check.as_str().into(),
            r.claim.clone().into(),
            pairs_string(&r.parameters).into(),
            r.expected.clone().into(),
            r.actual.clone().into(),
            r.passed.into(),
            pairs_string(&r.witness).into(),
            r.note.clone().map_or(Value::Null, Value::String),
        ]);
    }
    let notes: Vec<Value> = reports
        .iter()
        .filter_map(|r| r.note.clone())
        .map(Value::String)
        .collect();
    record.diagnostic("reports", reports.len());
    record.diagnostic("passed", passed);
    record.diagnostic("failed", reports.len() - passed);
    if !notes.is_empty() {
        record.diagnostic("notes", Value::Array(notes));
    }
    let status = if passed == reports.len() {
        EXIT_OK
    } else {
        EXIT_FAILED
    };
    Ok((record, status))
}

/// Expansion ids admissible for each `--value`.
fn value_members(value: &str) -> Result<&'static [FamilyId]> {
    Ok(match value {
        "e" => &[
            FamilyId::EEuler,
            FamilyId::ERegular,
            FamilyId::EOver,
            FamilyId::ESporadic,
            FamilyId::ExpN,
        ],
        "e2" => &[FamilyId::ExpN, FamilyId::ESquared],
        "e-inv" => &[FamilyId::ExpInvN, FamilyId::RatExp, FamilyId::EOneOverM],
        "1f1-diag" => &[
            FamilyId::Confluent1F1,
            FamilyId::IncGamma,
            FamilyId::MFractionDiagonal,
        ],
        other => {
            return Err(Error::Parameter(format!(
                "unknown --value {other:?}; expected e, e2, e-inv or 1f1-diag"
            )))
        }
    })
}

/// Fills in the parameters implied by `--value` so that every member denotes that constant.
fn implied_params(value: &str, id: FamilyId, p: &FamilyParams) -> Result<FamilyParams> {
    let mut q = p.clone();
    match (value, id) {
        ("e", FamilyId::ExpN) => q.n = Some(1),
        ("e2", FamilyId::ExpN) => q.n = Some(2),
        ("e-inv", _) => {
            let n = require(p.n, "n", id)?;
            q.l = Some(1);
            q.m = Some(n);
        }
        _ => {}
    }
    Ok(q)
}

fn cmd_compare(a: &CompareArgs) -> Outcome {
    check_depth(a.depth)?;
    check_digits(a.digits)?;
    let members = value_members(&a.value)?;
    if a.expansions.is_empty() {
        return Err(Error::Parameter(
            "--expansions must list at least one id".into(),
        ));
    }
    let ids: Vec<FamilyId> = a
        .expansions
        .iter()
        .map(|s| parse_id(s))
        .collect::<Result<_>>()?;
    if let Some(bad) = ids.iter().find(|id| !members.contains(id)) {
        return Err(Error::Parameter(format!(
            "{bad} does not expand --value {}",
            a.value
        )));
    }
    let params: Vec<FamilyParams> = ids
        .iter()
        .map(|&id| implied_params(&a.value, id, &a.params))
        .collect::<Result<_>>()?;
    let ctx = ctx_for(a.digits);
    let complex = ids.iter().zip(&params).any(|(&id, p)| {
        id.takes_z()
            && p.z
                .as_deref()
                .and_then(|z| parse_literal(z).ok())
                .is_some_and(|z| !is_real(&z))
    });
    let built: Vec<Built> = ids
        .iter()
        .zip(&params)
        .map(|(&id, p)| build(id, p, ctx, complex))
        .collect::<Result<_>>()?;

    let mut columns = vec!["k".to_string()];
    columns.extend(ids.iter().map(|id| id.as_str().to_string()));
    let column_refs: Vec<&str> = columns.iter().map(String::as_str).collect();
    let mut record = OutputRecord::new("compare", &column_refs);
    record.param("value", a.value.clone());
    record.param(
        "expansions",
        ids.iter().map(|i| i.as_str()).collect::<Vec<_>>().join(","),
    );
    if let Some(z) = &a.params.z {
        record.param("z", z.clone());
    }
    if let Some(n) = a.params.n {
        record.param("n", n.to_string());
    }
    record.param("depth", a.depth.to_string());
    record.param("digits", a.digits.to_string());

    let cells: Vec<Vec<Value>> = built
        .iter()
        .map(|b| -> Result<Vec<Value>> {
            Ok(match b {
                Built::Exact(s) => convergents(s, a.depth)?
                    .into_iter()
                    .map(|c| c.value.map_or(Value::Null, |v| format_fraction(&v).into()))
                    .collect(),
                Built::Complex(s) => convergents(s, a.depth)?
                    .into_iter()
                    .map(|c| {
                        c.value
                            .map_or(Value::Null, |v| v.to_decimal(a.digits).into())
                    })
                    .collect(),
            })
        })
        .collect::<Result<_>>()?;
    for k in 0..=a.depth as usize {
        let mut row = vec![Value::from(k as u64)];
        row.extend(cells.iter().map(|c| c[k].clone()));
        record.push_row(row);
    }

    let mut matrix = Map::new();
    for i in 0..built.len() {
        for j in i + 1..built.len() {
            let cmp = match (&built[i], &built[j]) {
                (Built::Exact(x), Built::Exact(y)) => same_convergents(x, y, a.depth)?,
                (Built::Complex(x), Built::Complex(y)) => {
                    same_convergents_within(x, y, a.depth, a.digits)?
                }
                _ => unreachable!("members of one --value share a ring"),
            };
            let key = format!("{},{}", ids[i], ids[j]);
            matrix.insert(key, cmp.first_difference.map_or(Value::Null, Value::from));
        }
    }
    record.diagnostic("first_difference", Value::Object(matrix));

    let target = a.digits + 3;
    let limits: Vec<HighPrecComplex> = built
        .iter()
        .enumerate()
        .map(|(i, b)| -> Result<HighPrecComplex> {
            Ok(match b {
                Built::Exact(s) => HighPrecComplex::from_rational(
                    &estimate_limit(s, target, depth_cap())?.value,
                    ctx,
                ),
                Built::Complex(_) => {
                    let (z, bb) = z_literals(ids[i], &params[i])?;
                    estimate_limit_two_precision(
                        |c| build_complex_at(ids[i], &z, bb.as_ref(), c),
                        ctx,
                        target,
                        depth_cap(),
                    )?
                    .value
                }
            })
        })
        .collect::<Result<_>>()?;
    let agree = limits
        .iter()
        .all(|l| (l.clone() - &limits[0]).is_negligible(&limits[0], a.digits));
    let limit_map: Map<String, Value> = ids
        .iter()
        .zip(&limits)
        .map(|(id, l)| {
            (
                id.as_str().to_string(),
                Value::String(l.to_decimal(a.digits)),
            )
        })
        .collect();
    record.diagnostic("limits", Value::Object(limit_map));
    record.diagnostic("limits_agree", agree);
    Ok((record, EXIT_OK))
}
