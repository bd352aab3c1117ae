//! Exact arithmetic in the truncated ring `R_c = Z[nu]/(2^c nu, nu^2 = -2nu)`
//! and the gamma-series computation that turns a rank bound into
//! divisibility constraints.
//!
//! The gamma operations enter through two facts about their generating
//! series `gamma_t = 1 + gamma^1 t + gamma^2 t^2 + ...` on reduced classes:
//! the series is exponential, `gamma_t(a + b) = gamma_t(a) * gamma_t(b)`
//! (the multiplicative form sometimes quoted with `gamma_t(ab)` is a typo
//! for this), and `gamma_t(L - 1) = 1 + t(L - 1)` for a line-bundle class
//! `L`. For a rank-(n-r) complement class the relation `r*nu + (class) = 0`
//! therefore forces `gamma_t(class) = (1 + t*nu)^{-r}`, while rank alone
//! kills every coefficient of `t^i` with `i > n - r`. Vanishing of those
//! coefficients in `R_c` is exactly the divisibility condition this module
//! reports.

use std::cmp::max;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::binomial::{binomial, two_adic_valuation};
use crate::{Error, Result};

/// An element `a + b*nu` of `R_c = Z[nu]/(2^c nu, nu^2 = -2nu)`.
///
/// `b` is kept normalized to `[0, 2^c)`; when `c = 0` the ring degenerates
/// to `Z` and `b` is identically zero. Elements of different `R_c` never
/// compare equal and refuse arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaRingElement {
    a: BigInt,
    b: BigUint,
    c: u32,
}

impl GammaRingElement {
    /// Builds `a + b*nu`, reducing `b` into `[0, 2^c)`.
    pub fn new(a: BigInt, b: BigInt, c: u32) -> Self {
        GammaRingElement { a, b: reduce_mod_power_of_two(b, c), c }
    }

    pub fn integer(a: impl Into<BigInt>, c: u32) -> Self {
        GammaRingElement { a: a.into(), b: BigUint::zero(), c }
    }

    pub fn zero(c: u32) -> Self {
        Self::integer(0, c)
    }

    pub fn one(c: u32) -> Self {
        Self::integer(1, c)
    }

    /// The generator nu. In `R_0` this is already zero.
    pub fn nu(c: u32) -> Self {
        Self::new(BigInt::zero(), BigInt::one(), c)
    }

    /// Coefficient of 1.
    pub fn unit_part(&self) -> &BigInt {
        &self.a
    }

    /// Coefficient of nu, normalized to `[0, 2^c)`.
    pub fn nu_part(&self) -> &BigUint {
        &self.b
    }

    /// Truncation exponent c of the ambient ring.
    pub fn modulus_exponent(&self) -> u32 {
        self.c
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn check_compatible(&self, rhs: &Self) -> Result<()> {
        if self.c != rhs.c {
            return Err(Error::ModulusMismatch(self.c, rhs.c));
        }
        Ok(())
    }

    /// Componentwise sum; errors when the two elements live in different
    /// truncations.
    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.check_compatible(rhs)?;
        Ok(GammaRingElement::new(
            &self.a + &rhs.a,
            BigInt::from(&self.b + &rhs.b),
            self.c,
        ))
    }

    /// Product using `nu^2 = -2nu`:
    /// `(a1 + b1 nu)(a2 + b2 nu) = a1 a2 + (a1 b2 + a2 b1 - 2 b1 b2) nu`.
    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        self.check_compatible(rhs)?;
        let a = &self.a * &rhs.a;
        let b1 = BigInt::from(self.b.clone());
        let b2 = BigInt::from(rhs.b.clone());
        let b = &self.a * &b2 + &rhs.a * &b1 - 2 * &b1 * &b2;
        Ok(GammaRingElement::new(a, b, self.c))
    }

    pub fn negated(&self) -> Self {
        GammaRingElement::new(-&self.a, -BigInt::from(self.b.clone()), self.c)
    }
}

impl fmt::Display for GammaRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}*nu", self.b)
        } else {
            write!(f, "{} + {}*nu", self.a, self.b)
        }
    }
}

impl std::ops::Add for &GammaRingElement {
    type Output = GammaRingElement;
    fn add(self, rhs: &GammaRingElement) -> GammaRingElement {
        self.try_add(rhs).expect("mismatched truncation exponents")
    }
}

impl std::ops::Mul for &GammaRingElement {
    type Output = GammaRingElement;
    fn mul(self, rhs: &GammaRingElement) -> GammaRingElement {
        self.try_mul(rhs).expect("mismatched truncation exponents")
    }
}

impl std::ops::Neg for &GammaRingElement {
    type Output = GammaRingElement;
    fn neg(self) -> GammaRingElement {
        self.negated()
    }
}

fn reduce_mod_power_of_two(value: BigInt, c: u32) -> BigUint {
    if c == 0 {
        return BigUint::zero();
    }
    let modulus = BigInt::one() << c;
    value
        .mod_floor(&modulus)
        .to_biguint()
        .expect("mod_floor of a positive modulus is nonnegative")
}

/// `nu^i = (-2)^{i-1} nu` in `R_c`. Rejects `i = 0`.
pub fn nu_power(i: u64, c: u32) -> Result<GammaRingElement> {
    if i == 0 {
        return Err(Error::NonPositive { what: "exponent i" });
    }
    if i - 1 >= c as u64 {
        // 2^c divides 2^{i-1}
        return Ok(GammaRingElement::zero(c));
    }
    let magnitude = BigInt::one() << (i - 1);
    let coeff = if (i - 1) % 2 == 0 { magnitude } else { -magnitude };
    Ok(GammaRingElement::new(BigInt::zero(), coeff, c))
}

/// One record per constrained series index.
///
/// `satisfied` holds exactly when `2^c` divides `2^{i-1} * C(r+i-1, i)`,
/// i.e. when the `t^i` coefficient of `(1 + t*nu)^{-r}` vanishes in `R_c`.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ConstraintRecord {
    pub i: u64,
    pub modulus_exponent: u64,
    pub coefficient_valuation: u64,
    pub satisfied: bool,
}

impl ConstraintRecord {
    fn new(i: u64, modulus_exponent: u64, coefficient_valuation: u64) -> Self {
        ConstraintRecord {
            i,
            modulus_exponent,
            coefficient_valuation,
            satisfied: coefficient_valuation >= modulus_exponent,
        }
    }
}

/// Multiplies two truncated series over a common `R_c`.
fn series_mul(x: &[GammaRingElement], y: &[GammaRingElement], len: usize) -> Vec<GammaRingElement> {
    let c = x[0].modulus_exponent();
    let mut out = vec![GammaRingElement::zero(c); len];
    for (i, xi) in x.iter().enumerate().take(len) {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter().enumerate().take(len - i) {
            if yj.is_zero() {
                continue;
            }
            out[i + j] = &out[i + j] + &(xi * yj);
        }
    }
    out
}

/// Coefficients of `(1 + t*nu)^r` up to `t^{len-1}`, by repeated squaring
/// of the truncated series.
pub(crate) fn forward_series(r: u64, len: usize, c: u32) -> Vec<GammaRingElement> {
    let mut base = vec![GammaRingElement::one(c), GammaRingElement::nu(c)];
    base.truncate(len.max(1));
    let mut acc = vec![GammaRingElement::one(c)];
    acc.resize(len.max(1), GammaRingElement::zero(c));
    let mut exp = r;
    let mut square = {
        let mut b = base;
        b.resize(len.max(1), GammaRingElement::zero(c));
        b
    };
    while exp > 0 {
        if exp & 1 == 1 {
            acc = series_mul(&acc, &square, len.max(1));
        }
        exp >>= 1;
        if exp > 0 {
            square = series_mul(&square, &square, len.max(1));
        }
    }
    acc
}

/// Inverts a truncated series with constant term 1 by long division:
/// `h_0 = 1`, `h_i = -sum_{j=1..i} g_j h_{i-j}`.
pub(crate) fn invert_series(g: &[GammaRingElement]) -> Vec<GammaRingElement> {
    let c = g[0].modulus_exponent();
    assert!(
        g[0] == GammaRingElement::one(c),
        "series inversion needs constant term 1"
    );
    let mut h = Vec::with_capacity(g.len());
    h.push(GammaRingElement::one(c));
    for i in 1..g.len() {
        let mut acc = GammaRingElement::zero(c);
        for j in 1..=i {
            if g[j].is_zero() || h[i - j].is_zero() {
                continue;
            }
            acc = &acc + &(&g[j] * &h[i - j]);
        }
        h.push(acc.negated());
    }
    h
}

/// Closed form of the `t^i` coefficient of `(1 + t*nu)^{-r}`:
/// `(-1)^i C(r+i-1, i) nu^i = -2^{i-1} C(r+i-1, i) nu` for `i >= 1`.
fn inverse_coefficient_closed_form(r: u64, i: u64, c: u32) -> GammaRingElement {
    if i == 0 {
        return GammaRingElement::one(c);
    }
    if i - 1 >= c as u64 {
        // 2^c already divides the 2^{i-1} factor
        return GammaRingElement::zero(c);
    }
    let coeff = -(BigInt::one() << (i - 1)) * binomial(r + i - 1, i);
    GammaRingElement::new(BigInt::zero(), coeff, c)
}

/// Coefficients of `(1 + t*nu)^{-r}` in `R_c` for `t^0` through
/// `t^depth`.
///
/// Every coefficient is computed twice — truncated power-series
/// inversion of `(1 + t*nu)^r` and the closed form — and the two routes
/// are asserted equal before the series values are returned. Rejects
/// `r = 0`.
pub fn inverse_series(r: u64, depth: u64, c: u32) -> Result<Vec<GammaRingElement>> {
    if r == 0 {
        return Err(Error::NonPositive { what: "series exponent r" });
    }
    let len = depth as usize + 1;
    let g = forward_series(r, len, c);
    let h = invert_series(&g);
    for (i, coeff) in h.iter().enumerate() {
        let closed = inverse_coefficient_closed_form(r, i as u64, c);
        assert_eq!(
            coeff, &closed,
            "series inversion disagrees with the closed form at r={r}, i={i}, c={c}"
        );
    }
    Ok(h)
}

/// The `t^i` coefficient of `(1 + t*nu)^{-r}` in `R_c`; see
/// [`inverse_series`] for the dual-route contract.
pub fn inverse_series_coefficient(r: u64, i: u64, c: u32) -> Result<GammaRingElement> {
    let mut series = inverse_series(r, i, c)?;
    Ok(series.swap_remove(i as usize))
}

/// Constraint range for a triple: `max(1, n-r+1) <= i <= c` with
/// `c = floor((s-1)/2)`.
fn constraint_range(r: u64, n: u64, c: u64) -> Option<(u64, u64)> {
    let lo = max(1, n.saturating_sub(r) + 1);
    if lo > c {
        None
    } else {
        Some((lo, c))
    }
}

/// One record per index in the constraint range of `[r, s, n]`, marked
/// satisfied exactly when the corresponding inverse-series coefficient
/// vanishes in `R_c`.
///
/// The records come from one truncated series inversion; every record is
/// cross-checked against the closed-form valuation before being emitted.
pub fn divisibility_constraints(r: u64, s: u64, n: u64) -> Vec<ConstraintRecord> {
    assert!(r >= 1 && s >= 1 && n >= 1, "triple components must be positive");
    let c = (s - 1) / 2;
    let Some((lo, hi)) = constraint_range(r, n, c) else {
        return Vec::new();
    };
    let cu32 = u32::try_from(c).expect("truncation exponent fits in u32");
    let h = inverse_series(r, hi, cu32).expect("r >= 1 was checked");
    (lo..=hi)
        .map(|i| {
            let coeff = binomial(r + i - 1, i);
            let valuation = (i - 1)
                + two_adic_valuation(&coeff).expect("C(r+i-1, i) is positive for r, i >= 1");
            let record = ConstraintRecord::new(i, c, valuation);
            assert_eq!(
                record.satisfied,
                h[i as usize].is_zero(),
                "valuation route disagrees with series route at r={r}, s={s}, n={n}, i={i}"
            );
            record
        })
        .collect()
}

/// True when every constraint of the triple is satisfied, i.e. the
/// gamma-series derivation puts no obstruction on `[r, s, n]`.
pub fn obstruction_check(r: u64, s: u64, n: u64) -> bool {
    divisibility_constraints(r, s, n)
        .iter()
        .all(|rec| rec.satisfied)
}
