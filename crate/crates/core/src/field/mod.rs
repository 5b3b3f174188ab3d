//! Finite fields `F_{p^k}` and brute-force counting of monic irreducible
//! polynomials over them.
//!
//! An element of `F_{p^k}` is a polynomial of degree `< k` over `F_p`
//! reduced modulo a fixed monic irreducible of degree `k`. It is stored as a
//! single [`Elem`] code: the coefficient of `t^i` is base-`p` digit `i`.
//! For small fields the context caches the full addition and multiplication
//! tables produced by that arithmetic.

mod count;
mod poly;

pub use count::{
    count_irreducibles, enumerate_monic, enumerate_monic_range, largest_feasible_degree,
    monic_blocks, CountConfig, IrreducibilityTest, MonicIter, DEFAULT_BUDGET,
};
pub use poly::{is_irreducible_rabin, is_irreducible_trial, MonicPoly};

use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::arith;

/// A field element code in `0..q`.
pub type Elem = u32;

/// Fields up to this order get cached operation tables.
const TABLE_LIMIT: u32 = 256;
/// Largest supported field order; keeps products of codes inside `u64`.
pub const MAX_ORDER: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroExtensionDegree,
    #[error("field order {p}^{k} exceeds the supported maximum {max}")]
    TooLarge { p: u64, k: u32, max: u64 },
    #[error("modulus must be monic of degree {expected} over F_{p}")]
    BadModulus { p: u64, expected: u32 },
    #[error("modulus is reducible over F_{0}")]
    ReducibleModulus(u64),
    #[error("no monic irreducible of degree {k} over F_{p} was found")]
    NoModulus { p: u64, k: u32 },
    #[error("coefficient {value} is not an element of F_{q}")]
    BadCoefficient { value: u64, q: u64 },
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("irreducibility is undefined for degree 0")]
    ConstantPolynomial,
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error(
        "enumerating {q}^{n} polynomials exceeds the budget of {budget}; \
         largest feasible degree is {largest_feasible}"
    )]
    BudgetExceeded {
        q: u64,
        n: u32,
        budget: u64,
        largest_feasible: u32,
    },
    #[error("invalid worker count: {0}")]
    Workers(String),
}

/// `F_{p^k}` together with the modulus used to realize it.
#[derive(Clone)]
pub struct FieldContext {
    p: u32,
    k: u32,
    q: u32,
    /// Monic, degree `k`, lowest coefficient first. `x` when `k = 1`.
    modulus: Vec<u32>,
    tables: Option<Tables>,
}

#[derive(Clone)]
struct Tables {
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    inv: Vec<Elem>,
}

impl FieldContext {
    /// `F_p` for `k = 1`; otherwise `F_p[t]` modulo the lexicographically
    /// smallest monic irreducible of degree `k`, with coefficients compared
    /// from the constant term upward.
    pub fn build(p: u64, k: u32) -> Result<Self, FieldError> {
        let prime = Self::prime_field(p)?;
        if k == 0 {
            return Err(FieldError::ZeroExtensionDegree);
        }
        check_order(p, k)?;
        if k == 1 {
            return Ok(prime);
        }
        let modulus = enumerate_monic(&prime, k, &CountConfig::unlimited())?
            .find(|f| is_irreducible_trial(f).expect("k >= 1"))
            .ok_or(FieldError::NoModulus { p, k })?
            .into_coeffs();
        Ok(Self::assemble(prime.p, k, modulus))
    }

    /// `F_{p^k}` modulo a caller-chosen monic irreducible (lowest coefficient
    /// first, leading 1 included).
    pub fn with_modulus(p: u64, modulus: &[u64]) -> Result<Self, FieldError> {
        let prime = Self::prime_field(p)?;
        let k = modulus.len().saturating_sub(1) as u32;
        if k == 0 || modulus.last() != Some(&1) || modulus.iter().any(|&c| c >= p) {
            return Err(FieldError::BadModulus { p, expected: k.max(1) });
        }
        check_order(p, k)?;
        let m: Vec<u32> = modulus.iter().map(|&c| c as u32).collect();
        let f = MonicPoly::new(&prime, m.clone())?;
        if !is_irreducible_trial(&f)? {
            return Err(FieldError::ReducibleModulus(p));
        }
        if k == 1 {
            return Ok(prime);
        }
        Ok(Self::assemble(prime.p, k, m))
    }

    fn prime_field(p: u64) -> Result<Self, FieldError> {
        if !arith::is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        check_order(p, 1)?;
        Ok(Self::assemble(p as u32, 1, vec![0, 1]))
    }

    fn assemble(p: u32, k: u32, modulus: Vec<u32>) -> Self {
        let q = p.pow(k);
        let mut field = Self {
            p,
            k,
            q,
            modulus,
            tables: None,
        };
        if q <= TABLE_LIMIT {
            field.tables = Some(field.build_tables());
        }
        field
    }

    fn build_tables(&self) -> Tables {
        let q = self.q;
        let mut add = Vec::with_capacity((q * q) as usize);
        let mut mul = Vec::with_capacity((q * q) as usize);
        for a in 0..q {
            for b in 0..q {
                add.push(self.add_slow(a, b));
                mul.push(self.mul_slow(a, b));
            }
        }
        let neg = (0..q).map(|a| self.neg_slow(a)).collect();
        let inv = (0..q)
            .map(|a| {
                if a == 0 {
                    0
                } else {
                    (1..q).find(|&b| mul[(a * q + b) as usize] == 1).expect("field")
                }
            })
            .collect();
        Tables { add, mul, neg, inv }
    }

    pub fn characteristic(&self) -> u64 {
        u64::from(self.p)
    }

    pub fn extension_degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u64 {
        u64::from(self.q)
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.k == 1
    }

    /// Base-`p` digits of an element, lowest power of `t` first.
    pub fn digits(&self, a: Elem) -> Vec<u32> {
        let mut a = a;
        (0..self.k)
            .map(|_| {
                let d = a % self.p;
                a /= self.p;
                d
            })
            .collect()
    }

    fn encode_digits(&self, digits: &[u32]) -> Elem {
        digits.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.tables {
            Some(t) => t.add[(a * self.q + b) as usize],
            None => self.add_slow(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        match &self.tables {
            Some(t) => t.neg[a as usize],
            None => self.neg_slow(a),
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.tables {
            Some(t) => t.mul[(a * self.q + b) as usize],
            None => self.mul_slow(a, b),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a == 0 {
            return None;
        }
        Some(match &self.tables {
            Some(t) => t.inv[a as usize],
            // a^(q-2) by square-and-multiply.
            None => {
                let (mut base, mut e, mut acc) = (a, self.q - 2, 1);
                while e > 0 {
                    if e & 1 == 1 {
                        acc = self.mul_slow(acc, base);
                    }
                    base = self.mul_slow(base, base);
                    e >>= 1;
                }
                acc
            }
        })
    }

    fn add_slow(&self, a: Elem, b: Elem) -> Elem {
        if self.k == 1 {
            return (a + b) % self.p;
        }
        let s: Vec<u32> = self
            .digits(a)
            .into_iter()
            .zip(self.digits(b))
            .map(|(x, y)| (x + y) % self.p)
            .collect();
        self.encode_digits(&s)
    }

    fn neg_slow(&self, a: Elem) -> Elem {
        let n: Vec<u32> = self
            .digits(a)
            .into_iter()
            .map(|x| (self.p - x) % self.p)
            .collect();
        self.encode_digits(&n)
    }

    fn mul_slow(&self, a: Elem, b: Elem) -> Elem {
        let p = u64::from(self.p);
        if self.k == 1 {
            return (u64::from(a) * u64::from(b) % p) as u32;
        }
        let k = self.k as usize;
        let (x, y) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &xi) in x.iter().enumerate() {
            for (j, &yj) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + u64::from(xi) * u64::from(yj)) % p;
            }
        }
        // Reduce with t^k = -(m_0 + m_1 t + ... + m_{k-1} t^{k-1}).
        for top in (k..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for (i, &m) in self.modulus[..k].iter().enumerate() {
                let idx = top - k + i;
                prod[idx] = (prod[idx] + (p - c) * u64::from(m)) % p;
            }
        }
        let digits: Vec<u32> = prod[..k].iter().map(|&d| d as u32).collect();
        self.encode_digits(&digits)
    }

    /// Human-readable element: an integer in a prime field, otherwise a
    /// polynomial in the generator `t`.
    pub fn format_elem(&self, a: Elem) -> String {
        if self.k == 1 {
            return a.to_string();
        }
        let terms = format_terms(&self.digits(a), "t", |c| c.to_string());
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }
}

/// Terms of `Σ c_i v^i` from the highest power down, skipping zeros. A
/// coefficient rendered as "1" is omitted in front of a power of `v`.
pub(crate) fn format_terms<C: Copy + PartialEq + Default>(
    coeffs: &[C],
    var: &str,
    render: impl Fn(C) -> String,
) -> Vec<String> {
    coeffs
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &c)| c != C::default())
        .map(|(i, &c)| {
            let coef = render(c);
            let power = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            match (i, coef.as_str()) {
                (_, "1") if i > 0 => power,
                _ if coef.contains(' ') => format!("({coef}){power}"),
                _ => format!("{coef}{power}"),
            }
        })
        .collect()
}

fn check_order(p: u64, k: u32) -> Result<(), FieldError> {
    match p.checked_pow(k) {
        Some(q) if q <= MAX_ORDER => Ok(()),
        _ => Err(FieldError::TooLarge {
            p,
            k,
            max: MAX_ORDER,
        }),
    }
}

impl fmt::Debug for FieldContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldContext")
            .field("p", &self.p)
            .field("k", &self.k)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl fmt::Display for FieldContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 1 {
            write!(f, "F_{}", self.p)
        } else {
            let m = format_terms(&self.modulus, "t", |c| c.to_string()).join(" + ");
            write!(f, "F_{}[t]/({m})", self.p)
        }
    }
}

impl PartialEq for FieldContext {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}

impl Eq for FieldContext {}

impl Serialize for FieldContext {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("FieldContext", 4)?;
        st.serialize_field("p", &self.p)?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("q", &self.q)?;
        st.serialize_field("modulus", &self.modulus)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_fields() {
        let f2 = FieldContext::build(2, 1).unwrap();
        assert_eq!(f2.modulus(), &[0, 1]);
        assert_eq!(f2.order(), 2);
        assert_eq!(FieldContext::build(4, 1), Err(FieldError::NotPrime(4)));
        assert_eq!(FieldContext::build(1, 1), Err(FieldError::NotPrime(1)));
        assert_eq!(FieldContext::build(3, 0), Err(FieldError::ZeroExtensionDegree));
        assert!(matches!(
            FieldContext::build(2, 17),
            Err(FieldError::TooLarge { .. })
        ));
    }

    #[test]
    fn default_moduli() {
        assert_eq!(FieldContext::build(2, 2).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(FieldContext::build(3, 2).unwrap().modulus(), &[1, 0, 1]);
        // Constant term compared first: x^3 + 1 is reducible, x^3 + x^2 + 1 is not.
        assert_eq!(FieldContext::build(2, 3).unwrap().modulus(), &[1, 0, 1, 1]);
    }

    // Every field axiom that matters for polynomial arithmetic, checked
    // exhaustively against both the table and the slow path.
    fn check_axioms(f: &FieldContext) {
        let q = f.order() as u32;
        for a in 0..q {
            assert_eq!(f.add(a, 0), a);
            assert_eq!(f.mul(a, 1), a);
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
            for b in 0..q {
                assert_eq!(f.add(a, b), f.add_slow(a, b));
                assert_eq!(f.mul(a, b), f.mul_slow(a, b));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in 0..q {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                }
            }
        }
        assert_eq!(f.inv(0), None);
    }

    #[test]
    fn field_axioms() {
        for (p, k) in [(2, 1), (5, 1), (2, 2), (3, 2), (2, 3), (5, 2)] {
            check_axioms(&FieldContext::build(p, k).unwrap());
        }
        check_axioms(&FieldContext::with_modulus(3, &[2, 1, 1]).unwrap());
    }

    #[test]
    fn untabled_field_inverse() {
        let f = FieldContext::build(17, 2).unwrap();
        assert!(f.tables.is_none());
        for a in 1..f.order() as u32 {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
    }

    #[test]
    fn custom_modulus_validation() {
        assert_eq!(
            FieldContext::with_modulus(2, &[1, 0, 1]),
            Err(FieldError::ReducibleModulus(2))
        );
        assert!(matches!(
            FieldContext::with_modulus(2, &[1, 1, 2]),
            Err(FieldError::BadModulus { .. })
        ));
        assert!(matches!(
            FieldContext::with_modulus(3, &[1, 2]),
            Err(FieldError::BadModulus { .. })
        ));
        let f9 = FieldContext::with_modulus(3, &[2, 2, 1]).unwrap();
        assert_eq!(f9.order(), 9);
    }

    #[test]
    fn display() {
        let f4 = FieldContext::build(2, 2).unwrap();
        assert_eq!(f4.to_string(), "F_2[t]/(t^2 + t + 1)");
        assert_eq!(f4.format_elem(3), "t + 1");
        assert_eq!(f4.format_elem(0), "0");
        assert_eq!(FieldContext::build(7, 1).unwrap().to_string(), "F_7");
    }
}
