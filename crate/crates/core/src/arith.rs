//! Integer primitives: Möbius function, divisor lists and necklace counts.
//!
//! The necklace count `N(a, n) = (1/n) * Σ_{d | n} μ(n/d) a^d` is computed in
//! arbitrary precision; `a^n` leaves the range of machine words almost
//! immediately (`10^64` already needs 213 bits).

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("argument `{name}` must be at least {min}, got {got}")]
    OutOfRange {
        name: &'static str,
        min: u64,
        got: u64,
    },
}

fn require(name: &'static str, got: u64, min: u64) -> Result<(), ArithError> {
    if got < min {
        Err(ArithError::OutOfRange { name, min, got })
    } else {
        Ok(())
    }
}

/// Prime factorization by trial division, as `(prime, multiplicity)` pairs in
/// ascending order of the prime. `factorize(1)` is empty.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Deterministic primality check by trial division.
pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}

/// Distinct prime divisors of `n`, ascending.
pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// Writes `q = p^k` with `p` prime, if possible.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    match factorize(q).as_slice() {
        [(p, k)] => Some((*p, *k)),
        _ => None,
    }
}

/// The Möbius function μ(n).
pub fn mobius(n: u64) -> Result<i8, ArithError> {
    require("n", n, 1)?;
    let factors = factorize(n);
    if factors.iter().any(|&(_, e)| e > 1) {
        return Ok(0);
    }
    Ok(if factors.len().is_multiple_of(2) { 1 } else { -1 })
}

/// Positive divisors of `n` in ascending order.
pub fn divisors(n: u64) -> Result<Vec<u64>, ArithError> {
    require("n", n, 1)?;
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Ok(small)
}

/// The signed divisor sum `Σ_{d | n} μ(n/d) a^d`, before division by `n`.
pub fn necklace_numerator(a: u64, n: u64) -> Result<BigInt, ArithError> {
    require("a", a, 1)?;
    require("n", n, 1)?;
    let base = BigInt::from(a);
    let mut sum = BigInt::zero();
    for d in divisors(n)? {
        match mobius(n / d)? {
            0 => {}
            m => sum += BigInt::from(m) * num_traits::pow(base.clone(), d as usize),
        }
    }
    Ok(sum)
}

/// The necklace count `N(a, n)`.
///
/// Panics if the divisor sum is not divisible by `n`; Gauss's congruence
/// rules that out, so a panic here is a bug in this module.
pub fn necklace_count(a: u64, n: u64) -> Result<BigUint, ArithError> {
    let numerator = necklace_numerator(a, n)?;
    let (quot, rem) = numerator.div_rem(&BigInt::from(n));
    assert!(
        rem.is_zero(),
        "divisor sum for N({a}, {n}) is not divisible by {n}"
    );
    assert!(!quot.is_negative(), "N({a}, {n}) came out negative");
    Ok(quot.magnitude().clone())
}

/// Cached necklace counts `N(a, 1), ..., N(a, D)` for a fixed base.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NecklaceTable {
    base: u64,
    #[serde(serialize_with = "crate::json::decimal_seq")]
    values: Vec<BigUint>,
}

impl NecklaceTable {
    /// Builds the table with a Möbius sieve up to `degree_bound` in place of
    /// per-entry factorization.
    pub fn build(base: u64, degree_bound: usize) -> Result<Self, ArithError> {
        require("a", base, 1)?;
        require("degree", degree_bound as u64, 1)?;
        let mu = mobius_sieve(degree_bound);
        let a = BigInt::from(base);
        let powers: Vec<BigInt> = std::iter::successors(Some(a.clone()), |p| Some(p * &a))
            .take(degree_bound)
            .collect();
        let mut sums = vec![BigInt::zero(); degree_bound + 1];
        for d in 1..=degree_bound {
            for (m, n) in (d..=degree_bound).step_by(d).enumerate() {
                match mu[m + 1] {
                    0 => {}
                    1 => sums[n] += &powers[d - 1],
                    _ => sums[n] -= &powers[d - 1],
                }
            }
        }
        let values = sums
            .into_iter()
            .enumerate()
            .skip(1)
            .map(|(n, s)| {
                let (quot, rem) = s.div_rem(&BigInt::from(n));
                assert!(rem.is_zero(), "divisor sum for N({base}, {n}) not divisible");
                quot.magnitude().clone()
            })
            .collect();
        Ok(Self { base, values })
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn degree_bound(&self) -> usize {
        self.values.len()
    }

    /// `N(a, n)` for `1 <= n <= D`.
    pub fn get(&self, n: usize) -> Option<&BigUint> {
        n.checked_sub(1).and_then(|i| self.values.get(i))
    }

    /// All values, index 0 holding `N(a, 1)`.
    pub fn values(&self) -> &[BigUint] {
        &self.values
    }
}

/// μ(0..=n) by a linear sieve; entry 0 is unused and set to 0.
pub fn mobius_sieve(n: usize) -> Vec<i8> {
    let mut mu = vec![1i8; n + 1];
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    mu[0] = 0;
    for i in 2..=n {
        if !composite[i] {
            primes.push(i);
            mu[i] = -1;
        }
        for &p in &primes {
            let m = i * p;
            if m > n {
                break;
            }
            composite[m] = true;
            if i % p == 0 {
                mu[m] = 0;
                break;
            }
            mu[m] = -mu[i];
        }
    }
    mu
}

/// `n * N(a, n) <= a^n`, evaluated exactly.
pub fn satisfies_power_bound(a: u64, n: u64, value: &BigUint) -> bool {
    value * BigUint::from(n) <= num_traits::pow(BigUint::from(a), n as usize)
}

/// `Σ_{d | n} d * N(a, d)`, which should reproduce `a^n`.
pub fn weighted_divisor_sum(table: &NecklaceTable, n: usize) -> BigUint {
    divisors(n as u64)
        .expect("n >= 1")
        .into_iter()
        .map(|d| BigUint::from(d) * table.get(d as usize).expect("d <= n <= D"))
        .sum()
}

impl NecklaceTable {
    /// True iff every entry obeys the positivity and Möbius-inversion laws.
    pub fn check_invariants(&self) -> bool {
        let a = BigUint::from(self.base);
        let mut power = BigUint::one();
        (1..=self.degree_bound()).all(|n| {
            power *= &a;
            let value = self.get(n).unwrap();
            let positive = self.base == 1 || !value.is_zero();
            positive && weighted_divisor_sum(self, n) == power
        })
    }
}
