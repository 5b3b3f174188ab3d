//! Necklace counts, truncated Euler-type products, and irreducible
//! polynomials over finite fields.
//!
//! The library checks the identity
//!
//! ```text
//! ∏_{n≥1} (1 - z^n)^{N(a,n)} = 1 - a z,    N(a,n) = (1/n) Σ_{d|n} μ(n/d) a^d
//! ```
//!
//! symbolically (exact coefficients of the truncated product) and
//! numerically (with a rigorous tail bound), and ties `N(q, n)` to
//! brute-force counts of monic irreducible polynomials over `F_q`.
//!
//! ```
//! use necklace_core::verify::verify_symbolic;
//!
//! let report = verify_symbolic(4, 24, true).unwrap();
//! assert!(report.pass);
//! ```

pub mod arith;
pub mod field;
pub mod json;
pub mod series;
pub mod verify;

pub use arith::{divisors, mobius, necklace_count, ArithError, NecklaceTable};
pub use field::{
    count_irreducibles, enumerate_monic, is_irreducible_rabin, is_irreducible_trial, CountConfig,
    FieldContext, FieldError, IrreducibilityTest, MonicPoly,
};
pub use series::{
    binomial_factor, expand_direct, expand_recursive, ExponentSpec, SeriesError, TruncatedSeries,
};
pub use verify::{
    tail_bound, verify_count_bridge, verify_numeric, verify_symbolic, BridgeReport, NumericReport,
    SymbolicReport, TailBound, VerifyError,
};
