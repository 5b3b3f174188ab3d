//! The `necklace` command-line tool.
//!
//! [`run`] parses an argument list, dispatches to `necklace-core`, and
//! writes either a text rendering or a JSON document carrying a `schema`
//! field. Exit status: 0 on success, 1 when a verification fails, 2 on a
//! usage or input error.

mod render;

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use necklace_core::field::{
    count_irreducibles, CountConfig, FieldContext, FieldError, IrreducibilityTest, DEFAULT_BUDGET,
};
use necklace_core::json::decimal;
use necklace_core::series::{expand_direct, expand_recursive, ExponentSpec, SeriesError, TruncatedSeries};
use necklace_core::verify::{verify_count_bridge, verify_numeric, verify_symbolic, VerifyError};
use necklace_core::{mobius, necklace_count, ArithError, NecklaceTable};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "necklace",
    version,
    about = "Necklace counts, Euler-product expansions and irreducible polynomial counts"
)]
pub struct CommandConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Emit a JSON document instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Suppress standard output; the exit status still reports the result.
    #[arg(long, global = true)]
    pub quiet: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Möbius function μ(n).
    Mobius {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
    },
    /// Necklace count N(a, n), or a table of N(a, 1..=D).
    Necklace(NecklaceArgs),
    /// Expand ∏ (1 - z^n)^{e(n)} to degree D.
    Expand(ExpandArgs),
    /// Finite-field operations.
    Field {
        #[command(subcommand)]
        command: FieldCommand,
    },
    /// Check the identity ∏ (1 - z^n)^{N(a,n)} = 1 - a z.
    Verify {
        #[command(subcommand)]
        command: VerifyCommand,
    },
}

#[derive(Debug, Args)]
#[command(args_conflicts_with_subcommands = true, subcommand_negates_reqs = true)]
pub struct NecklaceArgs {
    #[command(subcommand)]
    pub table: Option<NecklaceTableCommand>,
    #[arg(long, required = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub a: Option<u64>,
    #[arg(long, required = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum NecklaceTableCommand {
    /// N(a, n) for n = 1..=D.
    Table {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        a: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        degree: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Recursive,
    Direct,
}

#[derive(Debug, Args)]
#[command(args_conflicts_with_subcommands = true, subcommand_negates_reqs = true)]
pub struct ExpandArgs {
    #[command(subcommand)]
    pub raw: Option<ExpandRawCommand>,
    /// Use e(n) = N(a, n).
    #[arg(long, required = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub a: Option<u64>,
    #[arg(long, required = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub degree: Option<u64>,
    #[arg(long, value_enum, default_value_t = Method::Recursive)]
    pub method: Method,
}

#[derive(Debug, Subcommand)]
pub enum ExpandRawCommand {
    /// Arbitrary integer exponents e(1), ..., e(D).
    Raw {
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',', required = true)]
        exponents: Vec<String>,
        #[arg(long, value_enum, default_value_t = Method::Recursive)]
        method: Method,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TestArg {
    Trial,
    Rabin,
}

impl From<TestArg> for IrreducibilityTest {
    fn from(t: TestArg) -> Self {
        match t {
            TestArg::Trial => Self::Trial,
            TestArg::Rabin => Self::Rabin,
        }
    }
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[arg(long, value_enum, default_value_t = TestArg::Rabin)]
    pub test: TestArg,
    /// Maximum number of polynomials to enumerate.
    #[arg(long, default_value_t = DEFAULT_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: u64,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub workers: u64,
}

impl CountArgs {
    fn config(&self) -> CountConfig {
        CountConfig {
            budget: self.budget,
            workers: self.workers as usize,
            test: self.test.into(),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum FieldCommand {
    /// Count monic irreducibles of degree n over F_{p^k} by enumeration.
    Count {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[command(flatten)]
        count: CountArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    /// Exact coefficients of the truncated product.
    Symbolic {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        a: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        degree: u64,
        /// Also expand by direct multiplication and compare.
        #[arg(long)]
        cross_check: bool,
    },
    /// Evaluate the truncated product at a complex point with a tail bound.
    Numeric {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        a: u64,
        /// Evaluation point as RE,IM.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        z: Complex64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        degree: u64,
    },
    /// Compare enumerated irreducible counts with N(p^k, n) for n <= n_max.
    Bridge {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n_max: u32,
        #[command(flatten)]
        count: CountArgs,
    },
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let (re, im) = s
        .split_once(',')
        .ok_or_else(|| format!("expected RE,IM but got {s:?}"))?;
    let parse = |t: &str| {
        t.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| format!("{t:?} is not a finite decimal number"))
    };
    Ok(Complex64::new(parse(re)?, parse(im)?))
}

#[derive(Serialize)]
struct MobiusDoc {
    schema: &'static str,
    n: u64,
    mu: i8,
}

#[derive(Serialize)]
struct NecklaceDoc {
    schema: &'static str,
    a: u64,
    n: u64,
    #[serde(serialize_with = "decimal")]
    value: num_bigint::BigUint,
}

#[derive(Serialize)]
struct NecklaceTableDoc<'t> {
    schema: &'static str,
    #[serde(flatten)]
    table: &'t NecklaceTable,
}

#[derive(Serialize)]
struct ExpansionDoc {
    schema: &'static str,
    method: Method,
    degree_bound: usize,
    necklace_base: Option<u64>,
    #[serde(serialize_with = "necklace_core::json::decimal_seq")]
    exponents: Vec<num_bigint::BigInt>,
    coefficients: TruncatedSeries,
}

#[derive(Serialize)]
struct CountDoc<'f> {
    schema: &'static str,
    field: &'f FieldContext,
    n: u32,
    test: &'static str,
    #[serde(serialize_with = "decimal")]
    count: u64,
}

/// Result of one command: a JSON document, its text form, and whether the
/// checks it performed passed.
struct Outcome {
    json: String,
    text: String,
    pass: bool,
}

impl Outcome {
    fn new(doc: impl Serialize, text: String, pass: bool) -> Self {
        Self {
            json: serde_json::to_string_pretty(&doc).expect("documents serialize"),
            text,
            pass,
        }
    }
}

enum Failure {
    /// Bad input or a refused request.
    Usage(String),
    /// An internal consistency check fired; reported like a failed check.
    Internal(String),
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Series(_) => Self::Internal(e.to_string()),
            _ => Self::Usage(e.to_string()),
        }
    }
}

impl From<ArithError> for Failure {
    fn from(e: ArithError) -> Self {
        VerifyError::from(e).into()
    }
}

impl From<FieldError> for Failure {
    fn from(e: FieldError) -> Self {
        VerifyError::from(e).into()
    }
}

impl From<SeriesError> for Failure {
    fn from(e: SeriesError) -> Self {
        match e {
            SeriesError::EmptyExponents => Self::Usage(e.to_string()),
            _ => VerifyError::from(e).into(),
        }
    }
}

fn execute(command: Command) -> Result<Outcome, Failure> {
    Ok(match command {
        Command::Mobius { n } => {
            let mu = mobius(n)?;
            Outcome::new(
                MobiusDoc {
                    schema: "necklace/mobius/v1",
                    n,
                    mu,
                },
                mu.to_string(),
                true,
            )
        }
        Command::Necklace(NecklaceArgs {
            table: Some(NecklaceTableCommand::Table { a, degree }),
            ..
        }) => {
            let table = NecklaceTable::build(a, degree as usize)?;
            let text = render::necklace_table(&table);
            Outcome::new(
                NecklaceTableDoc {
                    schema: "necklace/necklace-table/v1",
                    table: &table,
                },
                text,
                true,
            )
        }
        Command::Necklace(NecklaceArgs { a, n, .. }) => {
            let (a, n) = (a.expect("required"), n.expect("required"));
            let value = necklace_count(a, n)?;
            let text = value.to_string();
            Outcome::new(
                NecklaceDoc {
                    schema: "necklace/necklace-count/v1",
                    a,
                    n,
                    value,
                },
                text,
                true,
            )
        }
        Command::Expand(args) => {
            let (spec, method) = match args.raw {
                Some(ExpandRawCommand::Raw { exponents, method }) => {
                    let parsed = exponents
                        .iter()
                        .map(|e| {
                            e.trim()
                                .parse()
                                .map_err(|_| Failure::Usage(format!("exponent {e:?} is not an integer")))
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    (ExponentSpec::new(parsed)?, method)
                }
                None => {
                    let table = NecklaceTable::build(
                        args.a.expect("required"),
                        args.degree.expect("required") as usize,
                    )?;
                    (ExponentSpec::necklace(&table), args.method)
                }
            };
            let coefficients = match method {
                Method::Recursive => expand_recursive(&spec)?,
                Method::Direct => expand_direct(&spec),
            };
            let text = coefficients.to_string();
            Outcome::new(
                ExpansionDoc {
                    schema: "necklace/expansion/v1",
                    method,
                    degree_bound: spec.degree_bound(),
                    necklace_base: spec.necklace_base(),
                    exponents: spec.exponents().to_vec(),
                    coefficients,
                },
                text,
                true,
            )
        }
        Command::Field {
            command: FieldCommand::Count { p, k, n, count },
        } => {
            let field = FieldContext::build(p, k)?;
            let config = count.config();
            let value = count_irreducibles(&field, n, &config)?;
            Outcome::new(
                CountDoc {
                    schema: "necklace/irreducible-count/v1",
                    field: &field,
                    n,
                    test: config.test.name(),
                    count: value,
                },
                value.to_string(),
                true,
            )
        }
        Command::Verify { command } => match command {
            VerifyCommand::Symbolic {
                a,
                degree,
                cross_check,
            } => {
                let report = verify_symbolic(a, degree as usize, cross_check)?;
                let text = render::symbolic(&report);
                let pass = report.pass;
                Outcome::new(report, text, pass)
            }
            VerifyCommand::Numeric { a, z, degree } => {
                let report = verify_numeric(a, z, degree as usize)?;
                let text = render::numeric(&report);
                let pass = report.pass;
                Outcome::new(report, text, pass)
            }
            VerifyCommand::Bridge { p, k, n_max, count } => {
                let report = verify_count_bridge(p, k, n_max, &count.config())?;
                let text = render::bridge(&report);
                let pass = report.pass;
                Outcome::new(report, text, pass)
            }
        },
    })
}

fn status(pass: bool) -> i32 {
    if pass {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

/// Runs the tool on `args` (including the program name) and returns the
/// exit status.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match CommandConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match execute(config.command) {
        Ok(outcome) => {
            if !config.quiet {
                let body = if config.json {
                    outcome.json
                } else {
                    outcome.text
                };
                let _ = writeln!(out, "{body}");
            }
            status(outcome.pass)
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Internal(msg)) => {
            let _ = writeln!(err, "internal check failed: {msg}");
            EXIT_FAILED
        }
    }
}
