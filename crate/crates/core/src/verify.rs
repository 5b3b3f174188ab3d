//! End-to-end checks of `∏_{n≥1} (1 - z^n)^{N(a,n)} = 1 - a z`.
//!
//! * [`verify_symbolic`]: the truncated expansion is exactly `1 - a z`.
//! * [`verify_numeric`]: the finite product at a complex point is within a
//!   rigorous tail bound (plus an explicit floating-point allowance) of
//!   `1 - a z`.
//! * [`verify_count_bridge`]: brute-force counts of monic irreducibles over
//!   `F_q` equal `N(q, n)`.
//!
//! The tail bound uses `N(a, n) <= a^n / n` and
//! `|log(1 - u)| <= |u| / (1 - |u|)` for `|u| < 1`, giving
//! `Σ_{n>D} N(a,n) |log(1 - z^n)| <= (a ρ)^{D+1} / ((D+1)(1-ρ)(1-aρ))`
//! for `|z| <= ρ`.

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{self, ArithError, NecklaceTable};
use crate::field::{count_irreducibles, largest_feasible_degree, CountConfig, FieldContext, FieldError};
use crate::json;
use crate::series::{expand_direct, expand_recursive, one_minus_az, ExponentSpec, SeriesError, TruncatedSeries};

/// Relative per-operation allowance used for the floating-point slack.
pub const SLACK_UNIT: f64 = 1.0 / (1u64 << 50) as f64;

pub const SYMBOLIC_SCHEMA: &str = "necklace/symbolic-report/v1";
pub const NUMERIC_SCHEMA: &str = "necklace/numeric-report/v1";
pub const BRIDGE_SCHEMA: &str = "necklace/bridge-report/v1";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("base a = {0} is not allowed here; a >= 2 is required")]
    Base(u64),
    #[error("degree bound must be at least 1")]
    Degree,
    #[error("radius {0} must be finite and nonnegative")]
    Radius(f64),
    #[error(
        "|z| = {abs_z} is outside the convergence region: the identity needs \
         |z| < 1/s for some s > a = {a}, i.e. a*|z| < 1"
    )]
    OutsideRegime { a: u64, abs_z: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PrimePower {
    pub p: u64,
    pub k: u32,
}

impl PrimePower {
    pub fn of(q: u64) -> Option<Self> {
        arith::prime_power(q).map(|(p, k)| Self { p, k })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoefficientMismatch {
    pub index: usize,
    #[serde(serialize_with = "json::decimal")]
    pub expected: BigInt,
    #[serde(serialize_with = "json::decimal")]
    pub actual: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymbolicReport {
    pub schema: &'static str,
    pub base: u64,
    pub degree_bound: usize,
    /// Set when the base is a prime power `q = p^k`.
    pub prime_power: Option<PrimePower>,
    pub pass: bool,
    pub first_failure: Option<CoefficientMismatch>,
    /// `Some(agree)` when the direct expansion was also computed.
    pub cross_check: Option<bool>,
    pub coefficients: TruncatedSeries,
}

fn require_degree(d: usize) -> Result<(), VerifyError> {
    if d == 0 {
        Err(VerifyError::Degree)
    } else {
        Ok(())
    }
}

/// Expands `∏_{n<=D} (1 - z^n)^{N(a,n)}` by the recursion and compares it
/// with `1 - a z` coefficient by coefficient. With `cross_check`, the
/// direct product expansion must also match bit for bit.
pub fn verify_symbolic(a: u64, degree_bound: usize, cross_check: bool) -> Result<SymbolicReport, VerifyError> {
    require_degree(degree_bound)?;
    let table = NecklaceTable::build(a, degree_bound)?;
    let spec = ExponentSpec::necklace(&table);
    let actual = expand_recursive(&spec)?;
    let expected = one_minus_az(a, degree_bound);
    let first_failure = expected
        .coeffs()
        .iter()
        .zip(actual.coeffs())
        .position(|(e, x)| e != x)
        .map(|index| CoefficientMismatch {
            index,
            expected: expected.coeffs()[index].clone(),
            actual: actual.coeffs()[index].clone(),
        });
    let cross_check = cross_check.then(|| expand_direct(&spec) == actual);
    Ok(SymbolicReport {
        schema: SYMBOLIC_SCHEMA,
        base: a,
        degree_bound,
        prime_power: PrimePower::of(a),
        pass: first_failure.is_none() && cross_check != Some(false),
        first_failure,
        cross_check,
        coefficients: actual,
    })
}

/// Rigorous bounds on the omitted factors `n > D` for all `|z| <= rho`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailBound {
    /// Bound on `Σ_{n>D} N(a,n) |log(1 - z^n)|`.
    pub log_bound: f64,
    /// Bound on `|P_D(z)|`, namely `1 / (1 - a rho)`.
    pub partial_product_bound: f64,
    /// Bound on `|P_D(z) - P_∞(z)|`.
    pub product_bound: f64,
}

fn up(x: f64) -> f64 {
    x.next_up()
}

fn down(x: f64) -> f64 {
    x.next_down()
}

/// Upper bound for a libm result that may be off by a few ulps.
fn widen(x: f64) -> f64 {
    up(x * (1.0 + SLACK_UNIT))
}

/// Tail bound for the truncated product at radius `rho`, computed with
/// outward rounding at every step.
///
/// Since `P_∞ = P_D T` with `|T - 1| <= e^{B} - 1` where `B` is the log
/// bound, `|P_D - P_∞| <= |P_D| (e^B - 1)`, and `|P_D| <= exp(Σ (aρ)^n/n)
/// <= 1/(1 - aρ)`.
pub fn tail_bound(a: u64, rho: f64, degree_bound: usize) -> Result<TailBound, VerifyError> {
    if a < 2 {
        return Err(VerifyError::Base(a));
    }
    require_degree(degree_bound)?;
    if !rho.is_finite() || rho < 0.0 {
        return Err(VerifyError::Radius(rho));
    }
    if rho == 0.0 {
        return Ok(TailBound {
            log_bound: 0.0,
            partial_product_bound: 1.0,
            product_bound: 0.0,
        });
    }
    let a_rho = up(a as f64 * rho);
    if a_rho >= 1.0 {
        return Err(VerifyError::OutsideRegime { a, abs_z: rho });
    }
    let mut numer = 1.0;
    for _ in 0..=degree_bound {
        numer = up(numer * a_rho);
    }
    let one_minus_rho = down(1.0 - rho);
    let one_minus_a_rho = down(1.0 - a_rho);
    let denom = down(down((degree_bound as f64 + 1.0) * one_minus_rho) * one_minus_a_rho);
    let log_bound = up(numer / denom);
    let partial_product_bound = up(1.0 / one_minus_a_rho);
    let product_bound = up(partial_product_bound * widen(log_bound.exp_m1()));
    Ok(TailBound {
        log_bound,
        partial_product_bound,
        product_bound,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NumericReport {
    pub schema: &'static str,
    pub base: u64,
    pub prime_power: Option<PrimePower>,
    #[serde(serialize_with = "json::complex")]
    pub z: Complex64,
    pub degree_bound: usize,
    /// Horner evaluation of the exact truncated expansion.
    #[serde(serialize_with = "json::complex")]
    pub series_value: Complex64,
    /// The finite product `∏_{n<=D} (1 - z^n)^{N(a,n)}` evaluated factor by
    /// factor.
    #[serde(serialize_with = "json::complex")]
    pub product_value: Complex64,
    #[serde(serialize_with = "json::complex")]
    pub target: Complex64,
    /// The larger of the two residuals against `target`.
    pub residual: f64,
    pub tail_bound: f64,
    pub float_slack: f64,
    pub pass: bool,
}

/// `ln(1 - w)` for `|w| < 1`, accurate to a few ulps relative to `|w|`
/// even when `1 - w` rounds to 1.
fn ln_one_minus(w: Complex64) -> Complex64 {
    if w.norm() >= 0.5 {
        return (Complex64::new(1.0, 0.0) - w).ln();
    }
    let mut sum = Complex64::zero();
    let mut power = w;
    let mut k = 1.0;
    loop {
        let term = power / k;
        sum -= term;
        if term.norm() <= f64::EPSILON * 1e-3 * sum.norm() {
            return sum;
        }
        power *= w;
        k += 1.0;
    }
}

/// Evaluates `∏_{n<=D} (1 - z^n)^{N(a,n)}` at `z` two independent ways and
/// checks both against `1 - a z` within `tail_bound + float_slack`.
///
/// `float_slack = (D + 1) * M * 2^-50`, where `M` is the largest magnitude
/// among the intermediates (Horner accumulators, partial products, factor
/// exponents, and 1).
pub fn verify_numeric(a: u64, z: Complex64, degree_bound: usize) -> Result<NumericReport, VerifyError> {
    if a < 2 {
        return Err(VerifyError::Base(a));
    }
    require_degree(degree_bound)?;
    let abs_z = z.norm();
    if !abs_z.is_finite() || a as f64 * abs_z >= 1.0 {
        return Err(VerifyError::OutsideRegime { a, abs_z });
    }
    let bound = tail_bound(a, abs_z, degree_bound)?;
    let table = NecklaceTable::build(a, degree_bound)?;
    let series = expand_recursive(&ExponentSpec::necklace(&table))?;

    let mut largest: f64 = 1.0;
    let mut series_value = Complex64::zero();
    for c in series.coeffs().iter().rev() {
        series_value = series_value * z + c.to_f64().unwrap_or(f64::INFINITY);
        largest = largest.max(series_value.norm());
    }

    let mut product_value = Complex64::new(1.0, 0.0);
    let mut z_pow = Complex64::new(1.0, 0.0);
    for n in 1..=degree_bound {
        z_pow *= z;
        let exponent = table.get(n).and_then(BigUint::to_f64).unwrap_or(f64::INFINITY);
        let log_factor = ln_one_minus(z_pow) * exponent;
        product_value *= log_factor.exp();
        largest = largest.max(log_factor.norm()).max(product_value.norm());
    }

    let target = Complex64::new(1.0, 0.0) - z * a as f64;
    let residual = (series_value - target).norm().max((product_value - target).norm());
    let float_slack = (degree_bound as f64 + 1.0) * largest * SLACK_UNIT;
    Ok(NumericReport {
        schema: NUMERIC_SCHEMA,
        base: a,
        prime_power: PrimePower::of(a),
        z,
        degree_bound,
        series_value,
        product_value,
        target,
        residual,
        tail_bound: bound.product_bound,
        float_slack,
        pass: residual <= bound.product_bound + float_slack,
    })
}

/// Runs [`verify_numeric`] over many points on a pool of `workers` threads.
/// Output order matches input order.
pub fn verify_numeric_many(
    points: &[(u64, Complex64)],
    degree_bound: usize,
    workers: usize,
) -> Result<Vec<NumericReport>, VerifyError> {
    let run = || {
        points
            .par_iter()
            .map(|&(a, z)| verify_numeric(a, z, degree_bound))
            .collect()
    };
    match workers {
        0 | 1 => points.iter().map(|&(a, z)| verify_numeric(a, z, degree_bound)).collect(),
        w => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| VerifyError::Field(FieldError::Workers(e.to_string())))?
            .install(run),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BridgeRow {
    pub n: u32,
    #[serde(serialize_with = "json::decimal")]
    pub enumerated: u64,
    #[serde(serialize_with = "json::decimal")]
    pub formula: BigUint,
    pub equal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BridgeReport {
    pub schema: &'static str,
    pub p: u64,
    pub k: u32,
    pub q: u64,
    pub test: &'static str,
    pub rows: Vec<BridgeRow>,
    pub pass: bool,
}

/// Compares brute-force counts of monic irreducibles of degree `1..=n_max`
/// over `F_{p^k}` with `N(p^k, n)`.
///
/// The whole range is checked against the budget up front; a refusal names
/// the largest feasible `n_max`.
pub fn verify_count_bridge(p: u64, k: u32, n_max: u32, config: &CountConfig) -> Result<BridgeReport, VerifyError> {
    if n_max == 0 {
        return Err(VerifyError::Degree);
    }
    let field = FieldContext::build(p, k)?;
    let q = field.order();
    if q.checked_pow(n_max).is_none_or(|size| size > config.budget) {
        return Err(FieldError::BudgetExceeded {
            q,
            n: n_max,
            budget: config.budget,
            largest_feasible: largest_feasible_degree(q, config.budget),
        }
        .into());
    }
    let table = NecklaceTable::build(q, n_max as usize)?;
    let rows = (1..=n_max)
        .map(|n| {
            let enumerated = count_irreducibles(&field, n, config)?;
            let formula = table.get(n as usize).expect("n <= n_max").clone();
            Ok(BridgeRow {
                n,
                equal: BigUint::from(enumerated) == formula,
                enumerated,
                formula,
            })
        })
        .collect::<Result<Vec<_>, VerifyError>>()?;
    Ok(BridgeReport {
        schema: BRIDGE_SCHEMA,
        p,
        k,
        q,
        test: config.test.name(),
        pass: rows.iter().all(|r| r.equal),
        rows,
    })
}
