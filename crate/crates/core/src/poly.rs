//! `Z[t]/(t^{order+1})` with exact integer coefficients. Arithmetic
//! silently discards every term of degree above the order.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedIntPoly {
    order: usize,
    coeffs: Vec<BigInt>, // coefficient of t^j at index j; len == order + 1
}

impl TruncatedIntPoly {
    pub fn zero(order: usize) -> Self {
        TruncatedIntPoly { order, coeffs: vec![BigInt::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(order, 0)
    }

    /// `t^degree`; the zero polynomial when the degree exceeds the order.
    pub fn monomial(order: usize, degree: usize) -> Self {
        let mut p = Self::zero(order);
        if degree <= order {
            p.coeffs[degree] = BigInt::one();
        }
        p
    }

    /// Builds a polynomial from low-degree-first coefficients, truncating
    /// or zero-padding to the order.
    pub fn from_coeffs(order: usize, coeffs: impl IntoIterator<Item = impl Into<BigInt>>) -> Self {
        let mut v: Vec<BigInt> = coeffs.into_iter().map(Into::into).collect();
        v.resize(order + 1, BigInt::zero());
        v.truncate(order + 1);
        TruncatedIntPoly { order, coeffs: v }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, degree: usize) -> &BigInt {
        &self.coeffs[degree]
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn assert_same_order(&self, rhs: &Self) {
        assert_eq!(
            self.order, rhs.order,
            "truncated polynomials live at different orders"
        );
    }

    /// Multiplication by `t^k`, shifting coefficients up and dropping
    /// whatever falls past the order.
    pub fn shift_up(&self, k: usize) -> Self {
        let mut out = Self::zero(self.order);
        for (j, c) in self.coeffs.iter().enumerate() {
            if j + k <= self.order {
                out.coeffs[j + k] = c.clone();
            }
        }
        out
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut acc = Self::one(self.order);
        let mut square = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &square;
            }
            exp >>= 1;
            if exp > 0 {
                square = &square * &square;
            }
        }
        acc
    }
}

impl std::ops::Add for &TruncatedIntPoly {
    type Output = TruncatedIntPoly;
    fn add(self, rhs: &TruncatedIntPoly) -> TruncatedIntPoly {
        self.assert_same_order(rhs);
        TruncatedIntPoly {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl std::ops::Sub for &TruncatedIntPoly {
    type Output = TruncatedIntPoly;
    fn sub(self, rhs: &TruncatedIntPoly) -> TruncatedIntPoly {
        self.assert_same_order(rhs);
        TruncatedIntPoly {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl std::ops::Neg for &TruncatedIntPoly {
    type Output = TruncatedIntPoly;
    fn neg(self) -> TruncatedIntPoly {
        TruncatedIntPoly {
            order: self.order,
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

impl std::ops::Mul for &TruncatedIntPoly {
    type Output = TruncatedIntPoly;
    fn mul(self, rhs: &TruncatedIntPoly) -> TruncatedIntPoly {
        self.assert_same_order(rhs);
        let mut out = TruncatedIntPoly::zero(self.order);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(self.order + 1 - i) {
                if b.is_zero() {
                    continue;
                }
                out.coeffs[i + j] += a * b;
            }
        }
        out
    }
}

impl fmt::Display for TruncatedIntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if wrote {
                if c.is_negative() {
                    write!(f, " - ")?;
                } else {
                    write!(f, " + ")?;
                }
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let mag = c.magnitude();
            match j {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if j == 1 {
                        write!(f, "t")?;
                    } else {
                        write!(f, "t^{j}")?;
                    }
                }
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}
