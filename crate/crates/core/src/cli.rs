//! Command-line front end.
//!
//! `a` and `b` are the normalized coefficients `a/2π²`, `b/2π²` of
//! `S = a·(θ₃θ₄)⁴ + b·θ₂⁸`: `a` belongs to the cusp ∞ and `b` to the cusp 0.

use std::io::Write;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::forms::{form, FormName};
use crate::frobenius::{round_trip, FrobeniusTarget};
use crate::groups::{
    classify, enumerate, format_table, summary_table, ClassificationInput, Presentation,
    DEFAULT_MAX_COSETS,
};
use crate::qseries::AnySeries;
use crate::scalar::{format_rational, parse_rational, rat, Backend, Rational};
use crate::schwarz::fit_weight4;
use crate::verify::{self, Expr, Status};

pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_COMPUTATION: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "schwarz",
    version,
    about = "Modular Schwarzian equations on Γ(2): q-series, fits, Frobenius solutions and kernels"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Truncation order: results are exact modulo O(q^N).
    #[arg(long, value_name = "N")]
    pub order: Option<i64>,
    /// Coefficient backend.
    #[arg(long, default_value = "rational", value_parser = ["rational", "complex"])]
    pub backend: String,
    /// Bits of precision for the complex backend.
    #[arg(long, default_value_t = 256)]
    pub precision: u32,
    /// Emit JSON instead of text.
    #[arg(long)]
    pub json: bool,
}

impl Common {
    fn order(&self) -> Result<i64> {
        let n = self.order.unwrap_or(30);
        if n < 1 {
            return Err(Error::InvalidArgument(format!(
                "--order must be at least 1, got {n}"
            )));
        }
        Ok(n)
    }

    fn backend(&self) -> Result<Backend> {
        match self.backend.as_str() {
            "complex" => Backend::complex(self.precision),
            _ => Ok(Backend::Rational),
        }
    }
}

/// `S` given either by its normalized coefficients or by the cusp exponents.
#[derive(Args, Debug, Clone)]
pub struct Coefficients {
    /// Coefficient of (θ₃θ₄)⁴, i.e. (n1/m1)².
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    /// Coefficient of θ₂⁸, i.e. (n2/m2)².
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    #[arg(long)]
    pub n1: Option<u32>,
    #[arg(long)]
    pub m1: Option<u32>,
    #[arg(long)]
    pub n2: Option<u32>,
    #[arg(long)]
    pub m2: Option<u32>,
}

impl Coefficients {
    /// `(a, b)` as exact rationals.
    fn resolve(&self) -> Result<(Rational, Rational)> {
        let ratio = |n: Option<u32>, m: Option<u32>, which: &str| -> Result<Option<Rational>> {
            match (n, m) {
                (None, None) => Ok(None),
                (Some(n), Some(m)) if m > 0 => {
                    let r = rat(n as i64, m as i64);
                    Ok(Some(&r * &r))
                }
                (Some(_), Some(_)) => Err(Error::InvalidArgument(format!(
                    "--m{which} must be positive"
                ))),
                _ => Err(Error::InvalidArgument(format!(
                    "--n{which} and --m{which} go together"
                ))),
            }
        };
        let pick = |flag: &Option<String>, sugar: Option<Rational>, name: &str, which: &str| match (
            flag, sugar,
        ) {
            (Some(_), Some(_)) => Err(Error::InvalidArgument(format!(
                "give either --{name} or --n{which}/--m{which}, not both"
            ))),
            (Some(s), None) => parse_rational(s),
            (None, Some(r)) => Ok(r),
            (None, None) => Err(Error::InvalidArgument(format!(
                "missing --{name} (or --n{which}/--m{which})"
            ))),
        };
        let a = pick(&self.a, ratio(self.n1, self.m1, "1")?, "a", "1")?;
        let b = pick(&self.b, ratio(self.n2, self.m2, "2")?, "b", "2")?;
        Ok((a, b))
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the q-expansion of a named form.
    Expand {
        form: String,
        #[command(flatten)]
        common: Common,
    },
    /// Print {h^p, τ}/2π² for a named form h.
    Schwarzian {
        form: String,
        /// Raise the form to this rational power first (leading coefficient normalized).
        #[arg(long, allow_hyphen_values = true)]
        power: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Fit {h^p, τ}/2π² against θ₂⁸ and (θ₃θ₄)⁴.
    Fit {
        form: String,
        #[arg(long, allow_hyphen_values = true)]
        power: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Solve y'' + (F/2) y = 0 at ∞ and build h = y₂/y₁.
    Frobenius {
        #[command(flatten)]
        coeffs: Coefficients,
        #[command(flatten)]
        common: Common,
    },
    /// Decide whether a modular solution exists.
    Classify {
        #[command(flatten)]
        coeffs: Coefficients,
        #[command(flatten)]
        common: Common,
    },
    /// Print the table of kernels with widths and genus.
    Table {
        /// Largest n in the dihedral and cyclic families.
        #[arg(long, default_value_t = 12)]
        n_max: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Enumerate cosets of ⟨a, b | b², relators⟩ with a = T, b = R T⁻¹.
    Cosets {
        #[arg(long)]
        relators: String,
        #[arg(long, default_value_t = DEFAULT_MAX_COSETS)]
        max: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Run identity records from the catalog.
    Verify {
        /// `all` or a record id.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Worker threads (default: available parallelism).
        #[arg(long)]
        jobs: Option<usize>,
        /// List record ids and exit.
        #[arg(long)]
        list: bool,
        #[command(flatten)]
        common: Common,
    },
}

fn emit(
    out: &mut dyn Write,
    json: bool,
    value: Value,
    text: impl FnOnce() -> String,
) -> std::io::Result<()> {
    if json {
        writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&value).expect("JSON serializes")
        )
    } else {
        let t = text();
        write!(out, "{t}")?;
        if !t.ends_with('\n') {
            writeln!(out)?;
        }
        Ok(())
    }
}

fn form_power(
    name: &str,
    power: &Option<String>,
    order: i64,
    backend: Backend,
) -> Result<AnySeries> {
    let mut h = Expr::Form(name.parse()?);
    if let Some(p) = power {
        h = h.pow_normalized(parse_rational(p)?);
    }
    Ok(h.schwarz()
        .eval_to(order, backend)?
        .truncate(&Rational::from(order)))
}

enum Outcome {
    Ok,
    VerifyFailed,
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<Outcome> {
    let io = |e: std::io::Error| Error::InvalidArgument(format!("write failed: {e}"));
    match cmd {
        Command::Expand { form: name, common } => {
            let name: FormName = name.parse()?;
            let s = form(name, common.order()?, common.backend()?)?;
            emit(
                out,
                common.json,
                serde_json::to_value(s.to_json()).expect("JSON"),
                || s.to_string(),
            )
            .map_err(io)?;
        }
        Command::Schwarzian {
            form: name,
            power,
            common,
        } => {
            let order = common.order()?;
            let s = form_power(&name, &power, order, common.backend()?)?;
            emit(
                out,
                common.json,
                serde_json::to_value(s.to_json()).expect("JSON"),
                || s.to_string(),
            )
            .map_err(io)?;
        }
        Command::Fit {
            form: name,
            power,
            common,
        } => {
            let order = common.order()?;
            let s = form_power(&name, &power, order, common.backend()?)?;
            let fit = fit_weight4(&s, order, None)?;
            emit(out, common.json, fit.to_json(), || fit.to_string()).map_err(io)?;
        }
        Command::Frobenius { coeffs, common } => {
            let order = common.order()?;
            if common.backend()? != Backend::Rational {
                return Err(Error::InvalidArgument(
                    "frobenius runs on the rational backend only".into(),
                ));
            }
            let (a, b) = coeffs.resolve()?;
            let target = FrobeniusTarget::from_coefficients(&a, &b, order)?;
            let rt = round_trip(&target, order)?;
            let mut v = rt.to_json();
            v["a"] = json!(format_rational(&a));
            v["b"] = json!(format_rational(&b));
            emit(out, common.json, v, || {
                let sol = &rt.solution;
                let mut t = format!(
                    "S = {} (θ3θ4)^4 + {} θ2^8\n",
                    format_rational(&a),
                    format_rational(&b)
                );
                t += &format!("indicial exponent r = {}\n", format_rational(&sol.r));
                t += &format!("y1 = {}\n", sol.y1);
                t += &format!("h = {}\n", sol.h);
                t += &format!("logarithmic: {}\n", sol.logarithmic);
                t += &format!(
                    "round trip to O(q^{}): {}",
                    rt.order,
                    if rt.ok() { "ok" } else { "FAILED" }
                );
                if let Some(m) = &rt.comparison.first_mismatch {
                    t += &format!(
                        "\nfirst mismatch at q^{}: {} vs {}",
                        m.exponent, m.lhs, m.rhs
                    );
                }
                t
            })
            .map_err(io)?;
        }
        Command::Classify { coeffs, common } => {
            let (a, b) = coeffs.resolve()?;
            let result = classify(ClassificationInput::from_squares(&a, &b)?)?;
            emit(out, common.json, result.to_json(), || result.to_string()).map_err(io)?;
        }
        Command::Table { n_max, common } => {
            let rows = summary_table(n_max)?;
            let v = Value::Array(rows.iter().map(|r| r.to_json()).collect());
            emit(out, common.json, v, || format_table(&rows)).map_err(io)?;
        }
        Command::Cosets {
            relators,
            max,
            common,
        } => {
            let p: Presentation = relators.parse()?;
            let table = enumerate(&p, max)?;
            let v = json!({"presentation": p.to_string(), "order": table.order()});
            emit(out, common.json, v, || {
                format!("{p}\norder: {}", table.order())
            })
            .map_err(io)?;
        }
        Command::Verify {
            suite,
            jobs,
            list,
            common,
        } => {
            if list {
                for rec in verify::catalog() {
                    writeln!(out, "{:<22} {}", rec.id, rec.anchor).map_err(io)?;
                }
                return Ok(Outcome::Ok);
            }
            let order = match common.order {
                Some(n) if n < 1 => {
                    return Err(Error::InvalidArgument(format!(
                        "--order must be at least 1, got {n}"
                    )))
                }
                o => o,
            };
            let ids: Vec<String> = if suite == "all" {
                verify::catalog().iter().map(|r| r.id.to_string()).collect()
            } else {
                suite.split(',').map(|s| s.trim().to_string()).collect()
            };
            let verdicts = verify::run_suite(&ids, order, jobs)?;
            let v = Value::Array(verdicts.iter().map(|v| v.to_json()).collect());
            emit(out, common.json, v, || {
                let mut t = String::new();
                for v in &verdicts {
                    t += &format!("{v}\n");
                }
                let passed = verdicts.iter().filter(|v| v.status == Status::Pass).count();
                t += &format!("{passed}/{} passed", verdicts.len());
                t
            })
            .map_err(io)?;
            if verdicts.iter().any(|v| v.status != Status::Pass) {
                return Ok(Outcome::VerifyFailed);
            }
        }
    }
    Ok(Outcome::Ok)
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::InvalidArgument(_) | Error::UnknownForm(_) => EXIT_USAGE,
        _ => EXIT_COMPUTATION,
    }
}

/// Parse `argv`, run, and return the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(Outcome::Ok) => 0,
        Ok(Outcome::VerifyFailed) => EXIT_VERIFY_FAILED,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
