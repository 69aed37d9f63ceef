//! Declarative identity records and the engine that checks them.

mod catalog;
pub mod expr;

use std::fmt;

use rayon::prelude::*;
use serde_json::{json, Value};

pub use catalog::catalog;
pub use expr::Expr;

use crate::error::{Error, Result};
use crate::frobenius::{round_trip, FrobeniusTarget};
use crate::groups::{covering_degree, genus, kernel_descriptor, GroupId};
use crate::qseries::{AnySeries, MismatchReport};
use crate::scalar::{format_rational_short, Backend, Rational, Tolerance};
use crate::schwarz::{fit_weight4, Coefficient, FitResult};

/// Largest order a record may be run at.
pub fn budget_limit(backend: Backend) -> i64 {
    match backend {
        Backend::Rational => 2000,
        Backend::Complex { .. } => 200,
    }
}

/// A convention difference surfaced alongside a verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Warning {
    pub code: &'static str,
    pub message: String,
}

impl Warning {
    pub fn to_json(&self) -> Value {
        json!({"code": self.code, "message": self.message})
    }
}

/// Expected fit coefficients `(θ₂⁸, (θ₃θ₄)⁴)`.
pub type Pair = (Rational, Rational);

#[derive(Clone, Debug, PartialEq)]
pub enum Check {
    Equal {
        label: String,
        lhs: Expr,
        rhs: Expr,
    },
    /// `{h, τ}/2π²` fitted in the basis `θ₂⁸, (θ₃θ₄)⁴`. Any of the listed
    /// coefficient pairs is accepted; the matching index is reported.
    Fit {
        label: String,
        h: Expr,
        expected: Vec<Pair>,
    },
    /// A row `h = P(t)/Q(t)` of a solution table: the fit as above, plus
    /// `max(deg P, deg Q)` and the covering degree against `degree`.
    TableRow {
        label: String,
        t: Expr,
        p: Vec<Rational>,
        q: Vec<Rational>,
        expected: Vec<Pair>,
        group: GroupId,
        /// Ramification over ∞ and over 0.
        ramification: (u32, u32),
        degree: i64,
    },
    /// `{h, τ}/2π² = S` for the `h` built from the Frobenius solution of
    /// `S = phi4·(θ₃θ₄)⁴ + theta2_8·θ₂⁸`.
    Frobenius {
        phi4: Rational,
        theta2_8: Rational,
    },
}

impl Check {
    pub fn label(&self) -> String {
        match self {
            Check::Equal { label, .. }
            | Check::Fit { label, .. }
            | Check::TableRow { label, .. } => label.clone(),
            Check::Frobenius { phi4, theta2_8 } => format!(
                "S = {}·phi4 + {}·theta2_8",
                format_rational_short(phi4),
                format_rational_short(theta2_8)
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityRecord {
    pub id: &'static str,
    /// The statement being checked, as displayed in the source.
    pub anchor: &'static str,
    pub backend: Backend,
    pub default_order: i64,
    /// Upper bound on residuals in the complex backend, beyond the
    /// comparison tolerance.
    pub max_residual: Option<f64>,
    pub warnings: Vec<Warning>,
    pub checks: Vec<Check>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckVerdict {
    pub label: String,
    pub status: Status,
    pub detail: String,
    pub first_mismatch: Option<MismatchReport>,
    pub max_residual: f64,
}

impl CheckVerdict {
    fn skipped(label: String, e: &Error) -> CheckVerdict {
        CheckVerdict {
            label,
            status: Status::Skipped,
            detail: e.to_string(),
            first_mismatch: None,
            max_residual: 0.0,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "label": self.label,
            "status": self.status.to_string(),
            "detail": self.detail,
            "first_mismatch": mismatch_json(&self.first_mismatch),
            "max_residual": self.max_residual,
        })
    }
}

fn mismatch_json(m: &Option<MismatchReport>) -> Value {
    match m {
        Some(m) => json!({"exponent": m.exponent, "lhs": m.lhs, "rhs": m.rhs}),
        None => Value::Null,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub id: String,
    pub status: Status,
    pub order: i64,
    pub backend: Backend,
    pub first_mismatch: Option<MismatchReport>,
    pub reason: Option<String>,
    pub warnings: Vec<Warning>,
    pub checks: Vec<CheckVerdict>,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "status": self.status.to_string(),
            "order": self.order,
            "backend": self.backend.to_string(),
            "first_mismatch": mismatch_json(&self.first_mismatch),
            "reason": self.reason,
            "warnings": self.warnings.iter().map(Warning::to_json).collect::<Vec<_>>(),
            "checks": self.checks.iter().map(CheckVerdict::to_json).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<22} {:<8} order {} ({})",
            self.id, self.status, self.order, self.backend
        )?;
        if let Some(r) = &self.reason {
            write!(f, "\n    reason: {r}")?;
        }
        for c in &self.checks {
            if c.status != Status::Pass {
                write!(f, "\n    {} [{}]: {}", c.label, c.status, c.detail)?;
                if let Some(m) = &c.first_mismatch {
                    write!(
                        f,
                        "\n      first mismatch at q^{}: {} vs {}",
                        m.exponent, m.lhs, m.rhs
                    )?;
                }
            }
        }
        for w in &self.warnings {
            write!(f, "\n    warning [{}]: {}", w.code, w.message)?;
        }
        Ok(())
    }
}

struct Ctx {
    order: i64,
    backend: Backend,
    tol: Option<Tolerance>,
    max_residual: Option<f64>,
}

impl Ctx {
    fn residual_ok(&self, r: f64) -> bool {
        self.max_residual.is_none_or(|m| r < m)
    }

    fn coefficient_matches(&self, c: &Coefficient, r: &Rational) -> bool {
        match c {
            Coefficient::Exact(x) => x == r,
            Coefficient::Approx(_) => {
                let d = c.distance_to(r);
                let tol = self.tol.as_ref().map_or(0.0, Tolerance::as_f64);
                d < tol && self.residual_ok(d)
            }
        }
    }
}

fn judge(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn run_equal(ctx: &Ctx, label: &str, lhs: &Expr, rhs: &Expr) -> Result<CheckVerdict> {
    let a = lhs.eval_to(ctx.order, ctx.backend)?;
    let b = rhs.eval_to(ctx.order, ctx.backend)?;
    let cmp = a.eq_to_order(&b, &Rational::from(ctx.order), ctx.tol.as_ref())?;
    let ok = cmp.equal() && ctx.residual_ok(cmp.max_deviation);
    Ok(CheckVerdict {
        label: label.to_string(),
        status: judge(ok),
        detail: format!("{lhs} = {rhs}"),
        first_mismatch: cmp.first_mismatch,
        max_residual: cmp.max_deviation,
    })
}

fn fit_of(ctx: &Ctx, h: &Expr) -> Result<FitResult> {
    let s = h.clone().schwarz().eval_to(ctx.order, ctx.backend)?;
    fit_weight4(&s, ctx.order, ctx.tol.as_ref())
}

fn match_fit(ctx: &Ctx, fit: &FitResult, expected: &[Pair]) -> (bool, String) {
    let hit = expected.iter().position(|(t8, p4)| {
        ctx.coefficient_matches(&fit.coeff_theta2_8, t8)
            && ctx.coefficient_matches(&fit.coeff_phi4, p4)
    });
    let fitted = format!(
        "fitted theta2_8 = {}, phi4 = {}",
        fit.coeff_theta2_8, fit.coeff_phi4
    );
    match hit {
        Some(0) => (true, fitted),
        Some(k) => (true, format!("{fitted} (alternative orientation {k})")),
        None => {
            let exp: Vec<String> = expected
                .iter()
                .map(|(a, b)| {
                    format!(
                        "({}, {})",
                        format_rational_short(a),
                        format_rational_short(b)
                    )
                })
                .collect();
            (
                false,
                format!("{fitted}; expected one of {}", exp.join(", ")),
            )
        }
    }
}

fn run_fit(ctx: &Ctx, label: &str, h: &Expr, expected: &[Pair]) -> Result<CheckVerdict> {
    let fit = fit_of(ctx, h)?;
    let (coeffs_ok, detail) = match_fit(ctx, &fit, expected);
    let ok = coeffs_ok && fit.residual_ok && ctx.residual_ok(fit.max_residual);
    Ok(CheckVerdict {
        label: label.to_string(),
        status: judge(ok),
        detail,
        first_mismatch: fit.first_mismatch,
        max_residual: fit.max_residual,
    })
}

#[allow(clippy::too_many_arguments)]
fn run_table_row(
    ctx: &Ctx,
    label: &str,
    t: &Expr,
    p: &[Rational],
    q: &[Rational],
    expected: &[Pair],
    group: &GroupId,
    (n_inf, n_zero): (u32, u32),
    degree: i64,
) -> Result<CheckVerdict> {
    let h = t.clone().rational_fn(p.to_vec(), q.to_vec());
    let fit = fit_of(ctx, &h)?;
    let (coeffs_ok, detail) = match_fit(ctx, &fit, expected);
    let deg_pq = crate::forms::poly_degree(p).max(crate::forms::poly_degree(q)) as i64;
    let kd = kernel_descriptor(group)?;
    let (m1, m2) = kd.widths;
    let g = genus(kd.index, m1, m2);
    let d = covering_degree(&g, kd.index, m1, m2, n_inf, n_zero)?;
    let ok = coeffs_ok && fit.residual_ok && deg_pq == degree && d == degree;
    Ok(CheckVerdict {
        label: label.to_string(),
        status: judge(ok),
        detail: format!(
            "{detail}; max(deg P, deg Q) = {deg_pq}, covering degree = {d}, expected {degree}"
        ),
        first_mismatch: fit.first_mismatch,
        max_residual: fit.max_residual,
    })
}

fn run_frobenius(ctx: &Ctx, phi4: &Rational, theta2_8: &Rational) -> Result<CheckVerdict> {
    if ctx.backend != Backend::Rational {
        return Err(Error::InvalidArgument(
            "Frobenius round trips run in the rational backend".into(),
        ));
    }
    let target = FrobeniusTarget::from_coefficients(phi4, theta2_8, ctx.order)?;
    let rt = round_trip(&target, ctx.order)?;
    Ok(CheckVerdict {
        label: String::new(),
        status: judge(rt.ok()),
        detail: format!(
            "r = {}, logarithmic = {}",
            format_rational_short(&rt.solution.r),
            rt.solution.logarithmic
        ),
        first_mismatch: rt.comparison.first_mismatch,
        max_residual: rt.comparison.max_deviation,
    })
}

fn run_check(ctx: &Ctx, check: &Check) -> CheckVerdict {
    let label = check.label();
    let result = match check {
        Check::Equal { label, lhs, rhs } => run_equal(ctx, label, lhs, rhs),
        Check::Fit { label, h, expected } => run_fit(ctx, label, h, expected),
        Check::TableRow {
            label,
            t,
            p,
            q,
            expected,
            group,
            ramification,
            degree,
        } => run_table_row(ctx, label, t, p, q, expected, group, *ramification, *degree),
        Check::Frobenius { phi4, theta2_8 } => run_frobenius(ctx, phi4, theta2_8),
    };
    match result {
        Ok(mut v) => {
            v.label = label;
            v
        }
        Err(e) => CheckVerdict::skipped(label, &e),
    }
}

/// Evaluate every check of `rec` to `O(q^order)`.
pub fn run_identity(rec: &IdentityRecord, order: i64) -> Verdict {
    let mut verdict = Verdict {
        id: rec.id.to_string(),
        status: Status::Pass,
        order,
        backend: rec.backend,
        first_mismatch: None,
        reason: None,
        warnings: rec.warnings.clone(),
        checks: Vec::new(),
    };
    let limit = budget_limit(rec.backend);
    if order < 1 || order > limit {
        let e = if order < 1 {
            Error::InvalidArgument(format!("order must be at least 1, got {order}"))
        } else {
            Error::BudgetExceeded { order, limit }
        };
        verdict.status = Status::Skipped;
        verdict.reason = Some(e.to_string());
        return verdict;
    }
    let ctx = Ctx {
        order,
        backend: rec.backend,
        tol: match rec.backend {
            Backend::Rational => None,
            Backend::Complex { precision } => Some(Tolerance::for_precision(precision)),
        },
        max_residual: rec.max_residual,
    };
    verdict.checks = rec.checks.iter().map(|c| run_check(&ctx, c)).collect();
    if let Some(bad) = verdict.checks.iter().find(|c| c.status == Status::Fail) {
        verdict.status = Status::Fail;
        verdict.first_mismatch = bad.first_mismatch.clone();
        verdict.reason = Some(format!("{}: {}", bad.label, bad.detail));
    } else if let Some(skip) = verdict.checks.iter().find(|c| c.status == Status::Skipped) {
        verdict.status = Status::Skipped;
        verdict.reason = Some(format!("{}: {}", skip.label, skip.detail));
    }
    verdict
}

pub fn find(id: &str) -> Option<IdentityRecord> {
    catalog().into_iter().find(|r| r.id == id)
}

/// Run the selected records (all when `ids` is empty) on `jobs` threads,
/// each at `order` or its default. Verdicts come back sorted by id.
pub fn run_suite(ids: &[String], order: Option<i64>, jobs: Option<usize>) -> Result<Vec<Verdict>> {
    let all = catalog();
    let selected: Vec<IdentityRecord> = if ids.is_empty() {
        all
    } else {
        ids.iter()
            .map(|id| {
                all.iter()
                    .find(|r| r.id == id.as_str())
                    .cloned()
                    .ok_or_else(|| {
                        Error::InvalidArgument(format!("unknown identity record {id:?}"))
                    })
            })
            .collect::<Result<_>>()?
    };
    let work = || -> Vec<Verdict> {
        selected
            .par_iter()
            .map(|r| run_identity(r, order.unwrap_or(r.default_order)))
            .collect()
    };
    let mut verdicts = match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?
            .install(work),
        None => work(),
    };
    verdicts.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(verdicts)
}

/// Evaluate an expression (used by tests and the CLI).
pub fn evaluate(e: &Expr, order: i64, backend: Backend) -> Result<AnySeries> {
    e.eval_to(order, backend)
}
