//! The `bassfin` command line, as a library so tests can drive it in-process.
//!
//! Exit codes: 0 success, 1 parse or semantic error, 2 an `UNDECIDED` value
//! under `--strict`, 3 an internal invariant violation.

pub mod ringexpr;

use std::ffi::OsString;
use std::panic::{catch_unwind, AssertUnwindSafe};

use bassfin::arith::ExtNat;
use bassfin::arring::{divide_mod, split_idempotent, RingElement};
use bassfin::dsl::parse_group_expr;
use bassfin::pgroup::{embeds_criterion, find_monomorphism, FinitePGroup};
use bassfin::typesys::{type_compare, Characteristic};
use bassfin::verdict::{check_implications, evaluate};
use bassfin_suites::{find_suite, CRITERIA, DEFAULT_SEED};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_UNDECIDED: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

/// Longest numerator or denominator, in digits, accepted in element JSON.
const MAX_COEFF_DIGITS: usize = 19;

const MAX_INDENT: i64 = 16;

#[derive(Debug, Parser)]
#[command(name = "bassfin", version, about = "Finiteness properties of abelian groups and the ring R")]
struct Cli {
    #[command(flatten)]
    flags: Flags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Flags {
    /// Exit with status 2 when a verdict contains UNDECIDED.
    #[arg(long, global = true)]
    strict: bool,
    /// Pretty-print JSON with this many spaces; compact by default.
    #[arg(long, global = true, value_name = "N", value_parser = clap::value_parser!(u8).range(..=MAX_INDENT))]
    json_indent: Option<u8>,
    /// Suite name for `oracle suite`.
    #[arg(long, global = true, value_name = "NAME")]
    suite: Option<String>,
    /// Seed for randomized suites.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide the finiteness properties of a group expression.
    Check { expr: OsString },
    /// Calculations in the ring R.
    #[command(subcommand)]
    Ring(RingCommand),
    /// Comparisons of rank-1 types.
    #[command(subcommand)]
    Type(TypeCommand),
    /// Brute-force oracles and acceptance suites.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Debug, Subcommand)]
enum RingCommand {
    /// Evaluate an arithmetic expression such as `2*e"0" + 1/3*e"1"`.
    Eval {
        #[arg(allow_hyphen_values = true)]
        expr: OsString,
    },
    /// Classify multiplication by an element.
    Classify { element: OsString },
    /// Order of the cokernel of multiplication by an element.
    Coker { element: OsString },
    /// Split a nonzero idempotent into two orthogonal ones.
    Split { element: OsString },
    /// One division step: y with m*y - x at a lower level.
    Divide { element: OsString, m: OsString },
}

#[derive(Debug, Subcommand)]
enum TypeCommand {
    /// Compare the types of two characteristics.
    Compare { first: OsString, second: OsString },
}

#[derive(Debug, Subcommand)]
enum OracleCommand {
    /// Decide whether one finite p-group embeds in another, with a witness.
    Embed { a: OsString, b: OsString },
    /// Run a named acceptance suite, or `all`.
    Suite { name: Option<String> },
}

/// What a run printed and how it ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn input_error(message: impl std::fmt::Display) -> Self {
        Outcome { code: EXIT_INPUT, stdout: String::new(), stderr: format!("error: {message}\n") }
    }

    fn internal(message: impl std::fmt::Display) -> Self {
        Outcome { code: EXIT_INTERNAL, stdout: String::new(), stderr: format!("internal error: {message}\n") }
    }
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome { code: EXIT_OK, stdout: text, stderr: String::new() }
                }
                _ => Outcome { code: EXIT_INPUT, stdout: String::new(), stderr: text },
            };
        }
    };
    match catch_unwind(AssertUnwindSafe(|| dispatch(&cli))) {
        Ok(outcome) => outcome,
        Err(panic) => {
            let message = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Outcome::internal(message)
        }
    }
}

fn render(value: &Value, indent: Option<u8>) -> String {
    use serde::Serialize;
    let mut out = match indent {
        None => serde_json::to_string(value).expect("JSON values serialize"),
        Some(n) => {
            let pad = vec![b' '; usize::from(n)];
            let mut buf = Vec::new();
            let fmt = serde_json::ser::PrettyFormatter::with_indent(&pad);
            let mut ser = serde_json::Serializer::with_formatter(&mut buf, fmt);
            value.serialize(&mut ser).expect("JSON values serialize");
            String::from_utf8(buf).expect("serde_json writes UTF-8")
        }
    };
    out.push('\n');
    out
}

fn text(arg: &OsString) -> String {
    arg.to_string_lossy().into_owned()
}

fn dispatch(cli: &Cli) -> Outcome {
    let flags = &cli.flags;
    let ok = |value: Value| Outcome { code: EXIT_OK, stdout: render(&value, flags.json_indent), stderr: String::new() };
    let result = match &cli.command {
        Command::Check { expr } => check(&text(expr), flags),
        Command::Ring(cmd) => ring(cmd).map(ok),
        Command::Type(TypeCommand::Compare { first, second }) => compare(&text(first), &text(second)).map(ok),
        Command::Oracle(OracleCommand::Embed { a, b }) => embed(&text(a), &text(b), flags),
        Command::Oracle(OracleCommand::Suite { name }) => suite(name.as_ref().or(flags.suite.as_ref()), flags),
    };
    result.unwrap_or_else(|e| e)
}

fn check(expr: &str, flags: &Flags) -> Result<Outcome, Outcome> {
    let e = parse_group_expr(expr).map_err(Outcome::input_error)?;
    let verdict = evaluate(&e);
    if !check_implications(&verdict) {
        return Err(Outcome::internal(format!("verdict for {e} breaks the implication chain")));
    }
    let value = serde_json::to_value(&verdict).expect("verdicts serialize");
    let code = if flags.strict && verdict.has_undecided() { EXIT_UNDECIDED } else { EXIT_OK };
    let stderr = if code == EXIT_UNDECIDED { "undecided properties under --strict\n".to_string() } else { String::new() };
    Ok(Outcome { code, stdout: render(&value, flags.json_indent), stderr })
}

/// Rejects coefficients too large to factor quickly, then deserializes.
fn parse_element(arg: &OsString) -> Result<RingElement, Outcome> {
    let raw = text(arg);
    let value: Value = serde_json::from_str(&raw).map_err(|e| Outcome::input_error(format!("invalid JSON: {e}")))?;
    if let Some(coeffs) = value.get("coeffs").and_then(Value::as_object) {
        for (w, c) in coeffs {
            let long = c
                .as_str()
                .is_some_and(|s| s.trim_start_matches('-').split('/').any(|part| part.len() > MAX_COEFF_DIGITS));
            if long {
                let pos = c.as_str().and_then(|s| raw.find(s)).unwrap_or(0);
                return Err(Outcome::input_error(format!(
                    "invalid element at {pos}: coefficient of {w:?} exceeds {MAX_COEFF_DIGITS} digits"
                )));
            }
        }
    }
    serde_json::from_str(&raw).map_err(|e| Outcome::input_error(format!("invalid element: {e}")))
}

fn element_json(x: &RingElement) -> Value {
    serde_json::to_value(x.canonicalize()).expect("elements serialize")
}

fn ring(cmd: &RingCommand) -> Result<Value, Outcome> {
    match cmd {
        RingCommand::Eval { expr } => {
            let x = ringexpr::eval(&text(expr)).map_err(Outcome::input_error)?.canonicalize();
            if x.dense().iter().any(|c| c.denom().bits() > 64) {
                return Err(Outcome::input_error("result has a denominator beyond 64 bits"));
            }
            match x.is_valid() {
                Ok(true) => Ok(element_json(&x)),
                Ok(false) => Err(Outcome::input_error(format!("{x} does not lie in R"))),
                Err(e) => Err(Outcome::input_error(e)),
            }
        }
        RingCommand::Classify { element } => {
            let x = parse_element(element)?;
            let class = x.classify_mult().map_err(Outcome::input_error)?;
            Ok(serde_json::to_value(class).expect("classifications serialize"))
        }
        RingCommand::Coker { element } => {
            let x = parse_element(element)?;
            let order: ExtNat = x.coker_order().map_err(Outcome::input_error)?;
            Ok(json!({ "order": order.to_string() }))
        }
        RingCommand::Split { element } => {
            let x = parse_element(element)?;
            let (a, b) = split_idempotent(&x).map_err(Outcome::input_error)?;
            let zero = RingElement::zero();
            if &a * &b != zero || &a + &b != x || a.is_zero() || b.is_zero() {
                return Err(Outcome::internal("split is not an orthogonal decomposition"));
            }
            Ok(json!({ "left": element_json(&a), "right": element_json(&b) }))
        }
        RingCommand::Divide { element, m } => {
            let x = parse_element(element)?;
            let m: u64 = text(m)
                .parse()
                .map_err(|_| Outcome::input_error(format!("invalid divisor at 0: {:?} is not a natural number", text(m))))?;
            let y = divide_mod(&x, m).map_err(Outcome::input_error)?;
            let rest = (&RingElement::from_integer(m) * &y - x.clone()).canonicalize();
            if rest.level() >= x.level() {
                return Err(Outcome::internal("division did not lower the level"));
            }
            Ok(json!({ "quotient": serde_json::to_value(&y).expect("elements serialize"), "remainder": element_json(&rest) }))
        }
    }
}

fn compare(first: &str, second: &str) -> Result<Value, Outcome> {
    let a: Characteristic = first.parse().map_err(Outcome::input_error)?;
    let b: Characteristic = second.parse().map_err(Outcome::input_error)?;
    Ok(json!({ "order": type_compare(&a.into(), &b.into()) }))
}

fn embed(a: &str, b: &str, flags: &Flags) -> Result<Outcome, Outcome> {
    let ga: FinitePGroup = a.parse().map_err(Outcome::input_error)?;
    let gb: FinitePGroup = b.parse().map_err(Outcome::input_error)?;
    let criterion = embeds_criterion(&ga, &gb).map_err(Outcome::input_error)?;
    let found = find_monomorphism(&ga, &gb).map_err(Outcome::input_error)?;
    if criterion != found.is_some() {
        return Err(Outcome::internal(format!("criterion and search disagree for {ga} -> {gb}")));
    }
    let value = json!({ "embeds": criterion, "monomorphism": found });
    Ok(Outcome { code: EXIT_OK, stdout: render(&value, flags.json_indent), stderr: String::new() })
}

fn suite(name: Option<&String>, flags: &Flags) -> Result<Outcome, Outcome> {
    let name = name.ok_or_else(|| Outcome::input_error("a suite name is required"))?;
    let selected: Vec<_> = if name == "all" {
        CRITERIA.iter().collect()
    } else {
        vec![find_suite(name).ok_or_else(|| {
            let names: Vec<_> = CRITERIA.iter().map(|c| c.suite).collect();
            Outcome::input_error(format!("unknown suite {name:?}; known: all, {}", names.join(", ")))
        })?]
    };
    let seed = flags.seed.unwrap_or(DEFAULT_SEED);
    let reports: Vec<_> = selected.iter().map(|c| c.run(seed)).collect();
    let passed = reports.iter().filter(|r| r.passed()).count();
    let failed = reports.len() - passed;
    let value = json!({
        "suite": name,
        "seed": seed.to_string(),
        "passed": passed.to_string(),
        "failed": failed.to_string(),
        "criteria": reports.iter().map(|r| json!({
            "id": r.id.to_string(),
            "suite": r.suite,
            "title": r.title,
            "passed": r.passed(),
            "checks": r.checks.to_string(),
            "failures": r.failed.to_string(),
            "elapsed_ms": r.elapsed.as_millis().to_string(),
            "budget_ms": r.budget.as_millis().to_string(),
            "messages": r.messages,
        })).collect::<Vec<_>>(),
    });
    let code = if failed == 0 { EXIT_OK } else { EXIT_INTERNAL };
    Ok(Outcome { code, stdout: render(&value, flags.json_indent), stderr: String::new() })
}
