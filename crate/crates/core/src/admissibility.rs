//! Necessary conditions for a sums-of-squares formula of type `[r,s,n]`
//! over a field of characteristic other than 2, in two equivalent
//! binomial forms, plus the tabulation helpers built on top of them.
//!
//! With `c = floor((s-1)/2)`, the direct form demands
//! `2^(c-i+1) | C(n, i)` and the shifted form `2^(c-i+1) | C(r+i-1, i)`,
//! both over the index range `max(1, n-r+1) <= i <= c`. The two are
//! linked by the Pascal transform in [`crate::binomial`] and always
//! agree; the shifted form is the one the gamma-series derivation in
//! [`crate::gamma`] produces.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::binomial::{binomial, two_adic_valuation};
use crate::{Error, Result};

/// Parameters `[r, s, n]` of a candidate formula; all positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triple {
    r: u64,
    s: u64,
    n: u64,
}

impl Triple {
    pub fn new(r: u64, s: u64, n: u64) -> Result<Self> {
        if r == 0 || s == 0 || n == 0 {
            return Err(Error::NonPositive { what: "triple component" });
        }
        Ok(Triple { r, s, n })
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn s(&self) -> u64 {
        self.s
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// `c = floor((s-1)/2)`, the exponent governing the constraints.
    pub fn modulus_exponent(&self) -> u64 {
        (self.s - 1) / 2
    }

    /// `max(1, n-r+1) ..= c`; `None` when empty.
    pub fn constraint_range(&self) -> Option<(u64, u64)> {
        let c = self.modulus_exponent();
        let lo = 1.max(self.n.saturating_sub(self.r) + 1);
        if lo > c {
            None
        } else {
            Some((lo, c))
        }
    }
}

/// Which binomial family a verdict examined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionForm {
    /// `C(n, i)`
    Direct,
    /// `C(r+i-1, i)`
    Shifted,
}

/// One divisibility requirement `2^required_exponent | binomial`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    pub i: u64,
    pub required_exponent: u64,
    #[serde(with = "crate::serde_util::bigint_decimal")]
    pub binomial: BigInt,
    /// 2-adic valuation of the binomial; `None` when the binomial is zero
    /// (a zero value is divisible by every power of two).
    pub valuation: Option<u64>,
    pub satisfied: bool,
}

/// Outcome of checking one condition form on one triple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub passes: bool,
    pub form: ConditionForm,
    pub constraints: Vec<Constraint>,
}

/// Walks the constraint range keeping the current binomial updated with
/// one exact multiply/divide per step:
/// `C(n, i+1) = C(n, i)(n-i)/(i+1)` and
/// `C(r+i, i+1) = C(r+i-1, i)(r+i)/(i+1)`.
fn constraint_binomials(
    t: &Triple,
    form: ConditionForm,
    lo: u64,
    hi: u64,
) -> impl Iterator<Item = (u64, BigInt)> + '_ {
    let mut value = match form {
        ConditionForm::Direct => binomial(t.n(), lo),
        ConditionForm::Shifted => binomial(t.r() + lo - 1, lo),
    };
    let n = t.n();
    let r = t.r();
    (lo..=hi).map(move |i| {
        let current = value.clone();
        match form {
            ConditionForm::Direct => {
                value = if i >= n {
                    BigInt::zero()
                } else {
                    &value * BigInt::from(n - i) / BigInt::from(i + 1)
                };
            }
            ConditionForm::Shifted => {
                value = &value * BigInt::from(r + i) / BigInt::from(i + 1);
            }
        }
        (i, current)
    })
}

fn check(t: &Triple, form: ConditionForm) -> Verdict {
    let c = t.modulus_exponent();
    let mut constraints = Vec::new();
    if let Some((lo, hi)) = t.constraint_range() {
        for (i, value) in constraint_binomials(t, form, lo, hi) {
            let required_exponent = c - i + 1;
            let (valuation, satisfied) = if value.is_zero() {
                (None, true)
            } else {
                let v = two_adic_valuation(&value).expect("binomial is positive");
                (Some(v), v >= required_exponent)
            };
            constraints.push(Constraint { i, required_exponent, binomial: value, valuation, satisfied });
        }
    }
    Verdict {
        passes: constraints.iter().all(|c| c.satisfied),
        form,
        constraints,
    }
}

/// The condition in its usual statement: `2^(c-i+1) | C(n, i)` over the
/// constraint range.
pub fn check_direct(t: &Triple) -> Verdict {
    check(t, ConditionForm::Direct)
}

/// The equivalent condition `2^(c-i+1) | C(r+i-1, i)`, the form the
/// gamma-series coefficients produce.
pub fn check_shifted(t: &Triple) -> Verdict {
    check(t, ConditionForm::Shifted)
}

/// Early-exit pass/fail for scanning; agrees with `check_direct`.
fn passes_direct(t: &Triple) -> bool {
    let c = t.modulus_exponent();
    let Some((lo, hi)) = t.constraint_range() else {
        return true;
    };
    for (i, value) in constraint_binomials(t, ConditionForm::Direct, lo, hi) {
        if value.is_zero() {
            continue;
        }
        let v = two_adic_valuation(&value).expect("binomial is positive");
        if v < c - i + 1 {
            return false;
        }
    }
    true
}

/// Least `n >= max(r, s)` passing the condition. Always terminates:
/// once `n >= r + c` the constraint range is empty.
pub fn minimal_admissible_n(r: u64, s: u64) -> Result<u64> {
    if r == 0 || s == 0 {
        return Err(Error::NonPositive { what: "triple component" });
    }
    let mut n = r.max(s);
    loop {
        let t = Triple::new(r, s, n).expect("components are positive");
        if passes_direct(&t) {
            return Ok(n);
        }
        n += 1;
    }
}

/// Table of `minimal_admissible_n` for `1 <= r <= r_max`, `1 <= s <= s_max`,
/// rows indexed by r.
pub fn admissibility_table(r_max: u64, s_max: u64) -> Result<Vec<Vec<u64>>> {
    if r_max == 0 || s_max == 0 {
        return Err(Error::NonPositive { what: "table bound" });
    }
    (1..=r_max)
        .map(|r| (1..=s_max).map(|s| minimal_admissible_n(r, s)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma;

    fn triple(r: u64, s: u64, n: u64) -> Triple {
        Triple::new(r, s, n).unwrap()
    }

    #[test]
    fn rejects_zero_components() {
        assert!(Triple::new(0, 1, 1).is_err());
        assert!(Triple::new(1, 0, 1).is_err());
        assert!(Triple::new(1, 1, 0).is_err());
        assert!(minimal_admissible_n(0, 3).is_err());
        assert!(admissibility_table(2, 0).is_err());
    }

    #[test]
    fn the_13_13_16_case_is_forbidden() {
        let v = check_direct(&triple(13, 13, 16));
        assert!(!v.passes);
        let failing: Vec<_> = v.constraints.iter().filter(|c| !c.satisfied).collect();
        assert_eq!(failing.len(), 1);
        assert_eq!(failing[0].i, 4);
        assert_eq!(failing[0].required_exponent, 3);
        assert_eq!(failing[0].binomial, BigInt::from(1820));
        assert_eq!(failing[0].valuation, Some(2));

        let v2 = check_shifted(&triple(13, 13, 16));
        assert!(!v2.passes);
        let failing: Vec<_> = v2.constraints.iter().filter(|c| !c.satisfied).collect();
        assert_eq!(failing[0].i, 4);
        // here r + i - 1 = 16 as well
        assert_eq!(failing[0].binomial, BigInt::from(1820));
    }

    #[test]
    fn vacuous_ranges_pass() {
        // n >= r + c empties the range
        let v = check_direct(&triple(9, 9, 16));
        assert!(v.passes);
        assert!(v.constraints.is_empty());
        assert!(check_shifted(&triple(2, 2, 2)).passes);
    }

    #[test]
    fn the_8_8_8_case_passes() {
        let v = check_shifted(&triple(8, 8, 8));
        assert!(v.passes);
        let data: Vec<_> = v
            .constraints
            .iter()
            .map(|c| (c.i, c.binomial.clone(), c.valuation))
            .collect();
        assert_eq!(
            data,
            vec![
                (1, BigInt::from(8), Some(3)),
                (2, BigInt::from(36), Some(2)),
                (3, BigInt::from(120), Some(3)),
            ]
        );
    }

    #[test]
    fn zero_binomials_count_as_satisfied() {
        // s large relative to n: the range reaches past n, where C(n, i) = 0
        let v = check_direct(&triple(2, 9, 2));
        assert!(v.constraints.iter().any(|c| c.binomial.is_zero()));
        assert!(v
            .constraints
            .iter()
            .filter(|c| c.binomial.is_zero())
            .all(|c| c.satisfied && c.valuation.is_none()));
    }

    #[test]
    fn minimal_n_examples() {
        assert_eq!(minimal_admissible_n(2, 2).unwrap(), 2);
        assert_eq!(minimal_admissible_n(13, 13).unwrap(), 17);
        for s in 1..=9 {
            assert_eq!(minimal_admissible_n(1, s).unwrap(), s);
        }
        assert_eq!(minimal_admissible_n(16, 16).unwrap(), 20);
    }

    #[test]
    fn table_matches_pointwise_scans() {
        let table = admissibility_table(6, 6).unwrap();
        assert_eq!(table[0], vec![1, 2, 3, 4, 5, 6]);
        for r in 1..=6u64 {
            for s in 1..=6u64 {
                assert_eq!(
                    table[(r - 1) as usize][(s - 1) as usize],
                    minimal_admissible_n(r, s).unwrap()
                );
            }
        }
        assert_eq!(admissibility_table(1, 1).unwrap(), vec![vec![1]]);
    }

    #[test]
    fn forms_agree_on_a_window() {
        for r in 1..=24u64 {
            for s in 1..=24u64 {
                for n in r.max(s)..=(r + s) {
                    let t = triple(r, s, n);
                    assert_eq!(
                        check_direct(&t).passes,
                        check_shifted(&t).passes,
                        "r={r} s={s} n={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn agrees_with_the_gamma_route() {
        // full cube, including n below max(r, s) and past r + s
        for r in 1..=32u64 {
            for s in 1..=32u64 {
                for n in 1..=32u64 {
                    let t = triple(r, s, n);
                    assert_eq!(
                        check_shifted(&t).passes,
                        gamma::obstruction_check(r, s, n),
                        "r={r} s={s} n={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn monotone_in_n_and_r() {
        for r in 1..=32u64 {
            for s in 1..=32u64 {
                let c = (s - 1) / 2;
                let mut passed = false;
                for n in r.max(s)..=(r + c + 1) {
                    let now = check_direct(&triple(r, s, n)).passes;
                    if passed {
                        assert!(now, "n-monotonicity broken at r={r} s={s} n={n}");
                    }
                    passed = now;
                }
            }
        }
        // shrinking r shrinks the range (the lower bound n-r+1 grows),
        // so a pass at r stays a pass at every smaller r
        for s in 1..=32u64 {
            for n in 1..=32u64 {
                let mut passed = false;
                for r in (1..=n).rev() {
                    let now = check_direct(&triple(r, s, n)).passes;
                    if passed {
                        assert!(now, "r-monotonicity broken at r={r} s={s} n={n}");
                    }
                    passed = now;
                }
            }
        }
    }

    #[test]
    fn minimal_n_never_exceeds_the_vacuous_bound() {
        // the scan starts at max(r, s) and n >= r + c always passes
        for r in 1..=64u64 {
            for s in 1..=64u64 {
                let bound = r.max(s).max(r + (s - 1) / 2);
                assert!(
                    minimal_admissible_n(r, s).unwrap() <= bound,
                    "r={r} s={s}"
                );
            }
        }
    }

    #[test]
    fn early_exit_scan_matches_full_verdict() {
        for r in 1..=16u64 {
            for s in 1..=16u64 {
                for n in r.max(s)..=(r + s) {
                    let t = triple(r, s, n);
                    assert_eq!(passes_direct(&t), check_direct(&t).passes);
                }
            }
        }
    }
}
