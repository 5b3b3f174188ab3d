use std::fmt;

use serde::{Serialize, Serializer};

use super::{format_terms, Elem, FieldContext, FieldError};
use crate::arith;

/// A monic polynomial over a [`FieldContext`], lowest coefficient first.
#[derive(Clone, PartialEq, Eq)]
pub struct MonicPoly<'f> {
    field: &'f FieldContext,
    coeffs: Vec<Elem>,
}

impl<'f> MonicPoly<'f> {
    /// Full coefficient list including the leading 1.
    pub fn new(field: &'f FieldContext, coeffs: Vec<Elem>) -> Result<Self, FieldError> {
        if let Some(&bad) = coeffs.iter().find(|&&c| u64::from(c) >= field.order()) {
            return Err(FieldError::BadCoefficient {
                value: bad.into(),
                q: field.order(),
            });
        }
        if coeffs.last() != Some(&1) {
            return Err(FieldError::NotMonic);
        }
        Ok(Self { field, coeffs })
    }

    /// The monic polynomial `x^n + lower[n-1] x^{n-1} + ... + lower[0]`.
    pub fn from_lower(field: &'f FieldContext, lower: &[Elem]) -> Result<Self, FieldError> {
        let mut coeffs = lower.to_vec();
        coeffs.push(1);
        Self::new(field, coeffs)
    }

    pub(super) fn from_raw(field: &'f FieldContext, coeffs: Vec<Elem>) -> Self {
        debug_assert_eq!(coeffs.last(), Some(&1));
        Self { field, coeffs }
    }

    pub fn field(&self) -> &'f FieldContext {
        self.field
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Elem> {
        self.coeffs
    }
}

impl fmt::Display for MonicPoly<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let field = self.field;
        let terms = format_terms(&self.coeffs, "x", |c| field.format_elem(c));
        f.write_str(&terms.join(" + "))
    }
}

impl fmt::Debug for MonicPoly<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MonicPoly({self} over {})", self.field)
    }
}

impl Serialize for MonicPoly<'_> {
    /// Integers for prime fields, digit arrays (lowest power of the
    /// generator first) for extensions.
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.field.is_prime_field() {
            s.collect_seq(self.coeffs.iter())
        } else {
            s.collect_seq(self.coeffs.iter().map(|&c| self.field.digits(c)))
        }
    }
}

// Dense polynomial helpers on raw coefficient vectors, lowest degree first.
// "Normalized" means no trailing zeros; the zero polynomial is empty.

fn normalize(v: &mut Vec<Elem>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Remainder of `a` modulo a nonzero normalized `m`, in place.
fn rem_in_place(field: &FieldContext, a: &mut Vec<Elem>, m: &[Elem]) {
    let dm = m.len() - 1;
    let lead_inv = field.inv(m[dm]).expect("nonzero leading coefficient");
    normalize(a);
    while a.len() > dm {
        let top = a.len() - 1;
        let c = field.mul(a[top], lead_inv);
        if c != 0 {
            let shift = top - dm;
            for (i, &mi) in m.iter().enumerate() {
                a[shift + i] = field.sub(a[shift + i], field.mul(c, mi));
            }
        }
        a.pop();
        normalize(a);
    }
}

fn mul_mod(field: &FieldContext, a: &[Elem], b: &[Elem], m: &[Elem]) -> Vec<Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = field.add(out[i + j], field.mul(x, y));
        }
    }
    rem_in_place(field, &mut out, m);
    out
}

fn pow_mod(field: &FieldContext, base: &[Elem], mut e: u64, m: &[Elem]) -> Vec<Elem> {
    let mut acc = vec![1];
    rem_in_place(field, &mut acc, m);
    let mut base = base.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(field, &acc, &base, m);
        }
        e >>= 1;
        if e > 0 {
            base = mul_mod(field, &base, &base, m);
        }
    }
    acc
}

fn sub(field: &FieldContext, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let mut out = vec![0; a.len().max(b.len())];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = field.sub(x, y);
    }
    normalize(&mut out);
    out
}

/// Degree of `gcd(a, b)`, or `None` when both are zero.
fn gcd_degree(field: &FieldContext, a: &[Elem], b: &[Elem]) -> Option<usize> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    normalize(&mut a);
    normalize(&mut b);
    while !b.is_empty() {
        rem_in_place(field, &mut a, &b);
        std::mem::swap(&mut a, &mut b);
    }
    a.len().checked_sub(1)
}

/// True iff the monic `g` divides `f` exactly.
fn divides(field: &FieldContext, f: &[Elem], g: &[Elem], scratch: &mut Vec<Elem>) -> bool {
    scratch.clear();
    scratch.extend_from_slice(f);
    rem_in_place(field, scratch, g);
    scratch.is_empty()
}

/// Advances `digits` as a base-`q` odometer with digit 0 most significant.
/// Returns false after wrapping past the last value.
pub(super) fn advance(digits: &mut [Elem], q: u32) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < q {
            return true;
        }
        *d = 0;
    }
    false
}

/// Irreducibility by exhaustive trial division: `f` is irreducible iff no
/// monic polynomial of degree `1..=deg(f)/2` divides it.
pub fn is_irreducible_trial(f: &MonicPoly<'_>) -> Result<bool, FieldError> {
    let n = f.degree();
    if n == 0 {
        return Err(FieldError::ConstantPolynomial);
    }
    let field = f.field;
    let q = field.order() as u32;
    let mut scratch = Vec::with_capacity(n + 1);
    for d in 1..=n / 2 {
        let mut g = vec![0; d + 1];
        g[d] = 1;
        loop {
            if divides(field, &f.coeffs, &g, &mut scratch) {
                return Ok(false);
            }
            if !advance(&mut g[..d], q) {
                break;
            }
        }
    }
    Ok(true)
}

/// Rabin's test: `f` of degree `n` is irreducible iff `x^{q^n} = x (mod f)`
/// and `gcd(x^{q^{n/l}} - x, f) = 1` for every prime `l | n`.
pub fn is_irreducible_rabin(f: &MonicPoly<'_>) -> Result<bool, FieldError> {
    let n = f.degree();
    if n == 0 {
        return Err(FieldError::ConstantPolynomial);
    }
    let field = f.field;
    let m = &f.coeffs;
    let q = field.order();
    let mut x = vec![0, 1];
    rem_in_place(field, &mut x, m);
    let checkpoints: Vec<usize> = arith::prime_divisors(n as u64)
        .into_iter()
        .map(|l| n / l as usize)
        .collect();
    // h = x^{q^i} mod f
    let mut h = x.clone();
    for i in 1..=n {
        h = pow_mod(field, &h, q, m);
        if checkpoints.contains(&i) && gcd_degree(field, &sub(field, &h, &x), m) != Some(0) {
            return Ok(false);
        }
    }
    Ok(h == x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly<'f>(field: &'f FieldContext, c: &[Elem]) -> MonicPoly<'f> {
        MonicPoly::new(field, c.to_vec()).unwrap()
    }

    #[test]
    fn trial_examples() {
        let f2 = FieldContext::build(2, 1).unwrap();
        assert!(is_irreducible_trial(&poly(&f2, &[0, 1])).unwrap());
        assert!(!is_irreducible_trial(&poly(&f2, &[1, 0, 1])).unwrap());
        assert!(is_irreducible_trial(&poly(&f2, &[1, 1, 1])).unwrap());
        assert_eq!(
            is_irreducible_trial(&poly(&f2, &[1])),
            Err(FieldError::ConstantPolynomial)
        );
    }

    #[test]
    fn rabin_examples() {
        let f3 = FieldContext::build(3, 1).unwrap();
        assert!(is_irreducible_rabin(&poly(&f3, &[1, 1])).unwrap());
        let f2 = FieldContext::build(2, 1).unwrap();
        let x4_x_1 = poly(&f2, &[1, 1, 0, 0, 1]);
        assert!(is_irreducible_rabin(&x4_x_1).unwrap());
        assert!(is_irreducible_trial(&x4_x_1).unwrap());
        let square = poly(&f2, &[1, 0, 1, 0, 1]);
        assert!(!is_irreducible_rabin(&square).unwrap());
        assert!(!is_irreducible_trial(&square).unwrap());
        assert_eq!(
            is_irreducible_rabin(&poly(&f2, &[1])),
            Err(FieldError::ConstantPolynomial)
        );
    }

    #[test]
    fn rabin_needs_gcd_step() {
        // x (x^2 + x + 1)(x^3 + x + 1) = x^6 + x^5 + x over F_2 satisfies
        // x^{2^6} = x mod f, so only the gcd checks can reject it.
        let f2 = FieldContext::build(2, 1).unwrap();
        let m = [0, 1, 0, 0, 0, 1, 1];
        let mut h = vec![0, 1];
        for _ in 0..6 {
            h = pow_mod(&f2, &h, 2, &m);
        }
        assert_eq!(h, vec![0, 1]);
        let f = poly(&f2, &m);
        assert!(!is_irreducible_rabin(&f).unwrap());
        assert!(!is_irreducible_rabin(&poly(&f2, &[0, 1, 1])).unwrap());
    }

    #[test]
    fn construction_errors() {
        let f2 = FieldContext::build(2, 1).unwrap();
        assert_eq!(MonicPoly::new(&f2, vec![1, 0]), Err(FieldError::NotMonic));
        assert_eq!(MonicPoly::new(&f2, vec![]), Err(FieldError::NotMonic));
        assert!(matches!(
            MonicPoly::new(&f2, vec![2, 1]),
            Err(FieldError::BadCoefficient { value: 2, q: 2 })
        ));
    }

    #[test]
    fn formatting_and_json() {
        let f2 = FieldContext::build(2, 1).unwrap();
        let p = poly(&f2, &[1, 1, 1]);
        assert_eq!(p.to_string(), "x^2 + x + 1");
        assert_eq!(serde_json::to_string(&p).unwrap(), "[1,1,1]");
        let f3 = FieldContext::build(3, 1).unwrap();
        assert_eq!(poly(&f3, &[2, 0, 1]).to_string(), "x^2 + 2");
        assert_eq!(poly(&f3, &[0, 2, 1]).to_string(), "x^2 + 2x");
        let f4 = FieldContext::build(2, 2).unwrap();
        let p = MonicPoly::from_lower(&f4, &[3, 2]).unwrap();
        assert_eq!(p.to_string(), "x^2 + tx + (t + 1)");
        assert_eq!(serde_json::to_string(&p).unwrap(), "[[1,1],[0,1],[1,0]]");
    }

    #[test]
    fn gcd_and_pow_helpers() {
        let f5 = FieldContext::build(5, 1).unwrap();
        // gcd((x-1)(x-2), (x-1)(x-3)) = x - 1
        let a = [2, 2, 1]; // x^2 - 3x + 2
        let b = [3, 1, 1]; // x^2 - 4x + 3
        assert_eq!(gcd_degree(&f5, &a, &b), Some(1));
        assert_eq!(gcd_degree(&f5, &[], &[]), None);
        // Fermat: x^5 = x mod (x^2 + 2), as x^5 = x * (x^2)^2 = x * 9 = 4x.
        let m = [2, 0, 1];
        assert_eq!(pow_mod(&f5, &[0, 1], 5, &m), vec![0, 4]);
    }
}
