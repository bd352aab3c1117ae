//! Exact binomial coefficients, 2-adic valuations by two independent
//! routes, and the Pascal-identity transform that relates the two
//! equivalent shapes of the divisibility condition.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// C(n, i), exactly; 0 when `i > n`.
pub fn binomial(n: u64, i: u64) -> BigInt {
    if i > n {
        return BigInt::zero();
    }
    let i = i.min(n - i);
    let mut acc = BigInt::one();
    for j in 0..i {
        // exact at every step: C(n, j+1) = C(n, j) * (n - j) / (j + 1)
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

/// C(n, d) with the zero convention for negative lower index.
pub(crate) fn binomial_signed_lower(n: u64, d: i64) -> BigInt {
    if d < 0 {
        BigInt::zero()
    } else {
        binomial(n, d as u64)
    }
}

/// Largest e with 2^e dividing m. Rejects m <= 0; callers must treat
/// zero separately (zero is divisible by every power of two).
pub fn two_adic_valuation(m: &BigInt) -> Result<u64> {
    if !m.is_positive() {
        return Err(Error::NonPositive { what: "valuation argument" });
    }
    Ok(m.trailing_zeros().expect("positive integer has a set bit"))
}

/// 2-adic valuation of C(n, i) without computing the coefficient: the
/// number of carries when adding `i` and `n - i` in base 2.
pub fn kummer_valuation(n: u64, i: u64) -> Result<u64> {
    if i > n {
        return Err(Error::IndexOutOfRange { n, i });
    }
    let (mut a, mut b) = (i, n - i);
    let mut carry = 0u64;
    let mut count = 0u64;
    while a != 0 || b != 0 || carry != 0 {
        let sum = (a & 1) + (b & 1) + carry;
        carry = sum >> 1;
        count += carry;
        a >>= 1;
        b >>= 1;
    }
    Ok(count)
}

/// Integer coefficients (lambda_1, ..., lambda_i) with
///
/// ```text
/// sum_j lambda_j * C(n, k+j)  =  C(n+i-1, k+i),
/// ```
///
/// produced by repeatedly applying Pascal's identity
/// C(c, d) = C(c-1, d-1) + C(c-1, d) until every upper index is n.
pub fn pascal_express(n: u64, k: i64, i: u64) -> Result<Vec<BigInt>> {
    if i == 0 {
        return Err(Error::NonPositive { what: "expansion length i" });
    }
    // terms: lower index -> coefficient, all at the current upper index
    let mut terms: BTreeMap<i64, BigInt> = BTreeMap::new();
    terms.insert(k + i as i64, BigInt::one());
    for _upper in (n + 1..n + i).rev() {
        let mut next: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (d, coeff) in &terms {
            *next.entry(d - 1).or_insert_with(BigInt::zero) += coeff;
            *next.entry(*d).or_insert_with(BigInt::zero) += coeff;
        }
        terms = next;
    }
    Ok((1..=i as i64)
        .map(|j| terms.remove(&(k + j)).unwrap_or_else(BigInt::zero))
        .collect())
}

/// Decides whether `b` divides every member of the straight set
/// {C(n, k+1), ..., C(n, k+i)} and of the staircase set
/// {C(n, k+1), C(n+1, k+2), ..., C(n+i-1, k+i)}.
///
/// The two answers always agree; returning both makes the equivalence
/// observable rather than assumed.
pub fn divisibility_set_equiv(n: u64, k: i64, i: u64, b: &BigInt) -> Result<(bool, bool)> {
    if i == 0 {
        return Err(Error::NonPositive { what: "set length i" });
    }
    if !b.is_positive() {
        return Err(Error::NonPositive { what: "divisor b" });
    }
    let divides = |value: &BigInt| (value % b).is_zero();
    let straight = (1..=i).all(|j| divides(&binomial_signed_lower(n, k + j as i64)));
    let staircase = (1..=i).all(|j| divides(&binomial_signed_lower(n + j - 1, k + j as i64)));
    Ok((straight, staircase))
}
