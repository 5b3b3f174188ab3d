//! Truncated power series over the integers and two independent expansions
//! of finite products `∏_{n=1}^{D} (1 - z^n)^{e(n)}`.
//!
//! [`expand_direct`] multiplies the binomial factors out literally.
//! [`expand_recursive`] uses the logarithmic-derivative recursion
//! `n r(n) = -Σ_{k=1}^{n} r(n-k) g(k)` with `g(k) = Σ_{d | k} d e(d)`.
//! The two share nothing beyond [`TruncatedSeries`] itself.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::arith::NecklaceTable;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("degree bounds differ: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("factor index {n} outside 1..={degree_bound}")]
    FactorIndex { n: usize, degree_bound: usize },
    #[error("exponent list is empty; the degree bound must be at least 1")]
    EmptyExponents,
    #[error("recursion step {n}: {sum} is not divisible by {n}")]
    InexactDivision { n: usize, sum: BigInt },
    #[error("necklace check failed at k = {k}: divisor sum {got} differs from {base}^{k}")]
    NecklaceMismatch { base: u64, k: usize, got: BigInt },
}

/// Integer coefficients `c_0, ..., c_D` of a power series modulo `z^{D+1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    coeffs: Vec<BigInt>,
}

impl TruncatedSeries {
    pub fn zero(degree_bound: usize) -> Self {
        Self {
            coeffs: vec![BigInt::zero(); degree_bound + 1],
        }
    }

    pub fn one(degree_bound: usize) -> Self {
        let mut s = Self::zero(degree_bound);
        s.coeffs[0] = BigInt::one();
        s
    }

    /// Takes `c_0..c_D` verbatim; the degree bound is `coeffs.len() - 1`.
    /// Returns `None` for an empty vector.
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Option<Self> {
        (!coeffs.is_empty()).then_some(Self { coeffs })
    }

    /// Convenience constructor for small literals; `None` on an empty slice.
    pub fn from_i64s(coeffs: &[i64]) -> Option<Self> {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn degree_bound(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> Option<&BigInt> {
        self.coeffs.get(j)
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Cauchy product truncated at the shared degree bound.
    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        if self.degree_bound() != other.degree_bound() {
            return Err(SeriesError::DegreeMismatch(
                self.degree_bound(),
                other.degree_bound(),
            ));
        }
        let d = self.degree_bound();
        let mut out = vec![BigInt::zero(); d + 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.coeffs[..=d - i].iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] += x * y;
                }
            }
        }
        Ok(Self { coeffs: out })
    }

    /// Horner evaluation in double precision. The result is approximate;
    /// coefficients beyond `f64` range become infinite.
    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::zero(), |acc, c| {
            acc * z + c.to_f64().unwrap_or(f64::NAN)
        })
    }

    /// Decimal strings, lowest degree first.
    pub fn to_decimal_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(BigInt::to_string).collect()
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.to_decimal_strings().join(", "))
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;

    /// Panics on mismatched degree bounds; use [`TruncatedSeries::mul`] to
    /// get an error instead.
    fn mul(self, rhs: Self) -> TruncatedSeries {
        TruncatedSeries::mul(self, rhs).expect("degree bounds must match")
    }
}

impl Serialize for TruncatedSeries {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter().map(BigInt::to_string))
    }
}

impl<'de> Deserialize<'de> for TruncatedSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw: Vec<String> = Vec::deserialize(d)?;
        let coeffs = raw
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(D::Error::custom))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_coeffs(coeffs).ok_or_else(|| D::Error::custom("empty coefficient list"))
    }
}

/// Exponents `e(1), ..., e(D)` of the factors `(1 - z^n)`.
///
/// A spec built from a [`NecklaceTable`] remembers its base, and
/// [`expand_recursive`] then checks `g(k) = a^k` at every step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentSpec {
    exponents: Vec<BigInt>,
    necklace_base: Option<u64>,
}

impl ExponentSpec {
    pub fn new(exponents: Vec<BigInt>) -> Result<Self, SeriesError> {
        if exponents.is_empty() {
            return Err(SeriesError::EmptyExponents);
        }
        Ok(Self {
            exponents,
            necklace_base: None,
        })
    }

    pub fn from_i64s(exponents: &[i64]) -> Result<Self, SeriesError> {
        Self::new(exponents.iter().map(|&e| BigInt::from(e)).collect())
    }

    /// `e(n) = N(a, n)` for `n = 1..=D`.
    pub fn necklace(table: &NecklaceTable) -> Self {
        Self {
            exponents: table
                .values()
                .iter()
                .map(|v| BigInt::from(v.clone()))
                .collect(),
            necklace_base: Some(table.base()),
        }
    }

    pub fn degree_bound(&self) -> usize {
        self.exponents.len()
    }

    /// `e(n)` for `1 <= n <= D`.
    pub fn exponent(&self, n: usize) -> &BigInt {
        &self.exponents[n - 1]
    }

    pub fn exponents(&self) -> &[BigInt] {
        &self.exponents
    }

    pub fn necklace_base(&self) -> Option<u64> {
        self.necklace_base
    }

    /// Pointwise sum of exponents, i.e. the spec of the product of the two
    /// products. The necklace tag is dropped.
    pub fn pointwise_sum(&self, other: &Self) -> Result<Self, SeriesError> {
        if self.degree_bound() != other.degree_bound() {
            return Err(SeriesError::DegreeMismatch(
                self.degree_bound(),
                other.degree_bound(),
            ));
        }
        Self::new(
            self.exponents
                .iter()
                .zip(&other.exponents)
                .map(|(x, y)| x + y)
                .collect(),
        )
    }
}

/// `(1 - z^n)^e mod z^{D+1}` for any integer `e`.
///
/// The coefficient of `z^{nj}` is `(-1)^j C(e, j)` with the generalized
/// binomial `C(e, j) = e (e-1) ... (e-j+1) / j!`, which is an integer for
/// negative `e` as well.
pub fn binomial_factor(n: usize, e: &BigInt, degree_bound: usize) -> Result<TruncatedSeries, SeriesError> {
    if n == 0 || n > degree_bound {
        return Err(SeriesError::FactorIndex { n, degree_bound });
    }
    let mut out = TruncatedSeries::zero(degree_bound);
    let mut binom = BigInt::one();
    out.coeffs[0] = BigInt::one();
    for j in 1..=degree_bound / n {
        // C(e, j) = C(e, j-1) * (e - j + 1) / j, exact at every step.
        binom = binom * (e - BigInt::from(j - 1)) / BigInt::from(j);
        if binom.is_zero() {
            break;
        }
        out.coeffs[n * j] = if j % 2 == 0 { binom.clone() } else { -&binom };
    }
    Ok(out)
}

/// Multiplies the factors `(1 - z^n)^{e(n)}` together one by one.
pub fn expand_direct(spec: &ExponentSpec) -> TruncatedSeries {
    let d = spec.degree_bound();
    (1..=d)
        .filter(|&n| !spec.exponent(n).is_zero())
        .map(|n| binomial_factor(n, spec.exponent(n), d).expect("1 <= n <= D"))
        .fold(TruncatedSeries::one(d), |acc, f| &acc * &f)
}

/// `g(k) = Σ_{d | k} d e(d)` for `k = 1..=D` (index 0 unused), by a sweep
/// over multiples.
pub fn divisor_weighted_sums(spec: &ExponentSpec) -> Vec<BigInt> {
    let d_max = spec.degree_bound();
    let mut g = vec![BigInt::zero(); d_max + 1];
    for d in 1..=d_max {
        let e = spec.exponent(d);
        if e.is_zero() {
            continue;
        }
        let term = e * BigInt::from(d);
        for k in (d..=d_max).step_by(d) {
            g[k] += &term;
        }
    }
    g
}

/// Expands the product through the recursion
/// `r(0) = 1`, `r(n) = -(1/n) Σ_{k=1}^{n} r(n-k) g(k)`.
///
/// For necklace specs the sums `g(k)` are checked against `a^k` before the
/// convolution starts.
pub fn expand_recursive(spec: &ExponentSpec) -> Result<TruncatedSeries, SeriesError> {
    let d = spec.degree_bound();
    let g = divisor_weighted_sums(spec);
    if let Some(base) = spec.necklace_base {
        let a = BigInt::from(base);
        let mut power = BigInt::one();
        for (k, gk) in g.iter().enumerate().skip(1) {
            power *= &a;
            if *gk != power {
                return Err(SeriesError::NecklaceMismatch {
                    base,
                    k,
                    got: gk.clone(),
                });
            }
        }
    }
    let mut r = Vec::with_capacity(d + 1);
    r.push(BigInt::one());
    for n in 1..=d {
        let sum: BigInt = (1..=n)
            .filter(|&k| !g[k].is_zero() && !r[n - k].is_zero())
            .map(|k| &r[n - k] * &g[k])
            .sum();
        let (quot, rem) = sum.div_rem(&BigInt::from(n));
        if !rem.is_zero() {
            return Err(SeriesError::InexactDivision { n, sum });
        }
        r.push(-quot);
    }
    Ok(TruncatedSeries { coeffs: r })
}

/// The series `1 - a z` truncated at `D`.
pub fn one_minus_az(a: u64, degree_bound: usize) -> TruncatedSeries {
    let mut s = TruncatedSeries::one(degree_bound);
    if degree_bound >= 1 {
        s.coeffs[1] = -BigInt::from(a);
    }
    s
}
