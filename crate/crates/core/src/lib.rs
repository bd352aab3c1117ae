//! Exact-arithmetic tools around sums-of-squares formulas of type `[r,s,n]`,
//! i.e. identities
//!
//! ```text
//! (x_1^2 + ... + x_r^2)(y_1^2 + ... + y_s^2) = z_1^2 + ... + z_n^2
//! ```
//!
//! with every `z_k` bilinear in the `x`'s and `y`'s.
//!
//! The crate decides the classical necessary condition for such a formula to
//! exist (powers of two dividing binomial coefficients), re-derives the same
//! condition from gamma-operation algebra in the ring
//! `Z[nu]/(2^c nu, nu^2 = -2nu)`, computes that ring independently as the
//! Grothendieck group of a deleted quadric via integer-lattice normal forms,
//! and verifies concrete formulas by exact polynomial expansion.
//!
//! Everything is exact: arbitrary-precision integers and rationals, residue
//! arithmetic for prime fields, no floating point.

pub mod admissibility;
pub mod binomial;
pub mod formula;
pub mod gamma;
pub mod grothendieck;
pub mod lattice;
pub mod poly;

mod serde_util;

/// Errors shared across the crate's modules.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{what} must be positive")]
    NonPositive { what: &'static str },
    #[error("lower index {i} exceeds upper index {n}")]
    IndexOutOfRange { n: u64, i: u64 },
    #[error("mismatched truncation exponents: 2^{0} vs 2^{1}")]
    ModulusMismatch(u32, u32),
    #[error("mismatched truncation orders: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid formula document: {0}")]
    FormulaFormat(String),
}

pub type Result<T> = std::result::Result<T, Error>;
