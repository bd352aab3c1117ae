//! Bilinear sums-of-squares formulas as coefficient tensors over Q or a
//! prime field, verified by exact polynomial expansion.
//!
//! A formula of type `[r,s,n]` is the tensor `a[k][i][j]` defining
//! `z_k = sum_{i,j} a[k][i][j] x_i y_j`; it verifies when
//! `sum_k z_k^2 = (sum_i x_i^2)(sum_j y_j^2)` identically.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Deserialize;

use crate::admissibility::{check_direct, Triple, Verdict};
use crate::{Error, Result};

/// The coefficient field: exact rationals or a prime field F_p
/// (p = 2 included).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldDescriptor {
    Rational,
    Prime(u64),
}

impl FieldDescriptor {
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldDescriptor::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldDescriptor::Rational => 0,
            FieldDescriptor::Prime(p) => *p,
        }
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Rational => write!(f, "Q"),
            FieldDescriptor::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

/// Deterministic Miller-Rabin, valid for every u64.
fn is_prime_u64(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if p == q {
            return true;
        }
        if p % q == 0 {
            return false;
        }
    }
    let mut d = p - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % p as u128) as u64;
    let pow = |mut base: u64, mut exp: u64| {
        let mut acc = 1u64;
        base %= p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            exp >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d);
        if x == 1 || x == p - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == p - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// One coefficient; rational and residue variants never mix inside a
/// formula (the constructors enforce a uniform field).
#[derive(Debug, Clone, PartialEq, Eq)]
enum Scalar {
    Rational(BigRational),
    Residue { value: u64, modulus: u64 },
}

impl Scalar {
    fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Residue { value, .. } => *value == 1,
        }
    }

    fn add(&self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Residue { value: a, modulus: p }, Scalar::Residue { value: b, modulus: q }) => {
                debug_assert_eq!(p, q);
                Scalar::Residue { value: ((*a as u128 + *b as u128) % *p as u128) as u64, modulus: *p }
            }
            _ => unreachable!("formula coefficients share one field"),
        }
    }

    fn mul(&self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Residue { value: a, modulus: p }, Scalar::Residue { value: b, modulus: q }) => {
                debug_assert_eq!(p, q);
                Scalar::Residue { value: ((*a as u128 * *b as u128) % *p as u128) as u64, modulus: *p }
            }
            _ => unreachable!("formula coefficients share one field"),
        }
    }

    fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
        }
    }
}

/// A bilinear formula candidate: dimensions, field, and the full
/// coefficient tensor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SosFormula {
    r: usize,
    s: usize,
    n: usize,
    field: FieldDescriptor,
    coeffs: Vec<Vec<Vec<Scalar>>>, // [k][i][j]
}

impl SosFormula {
    /// Builds a rational formula from an `n x r x s` tensor.
    pub fn from_rational_coeffs(
        r: usize,
        s: usize,
        n: usize,
        coeffs: Vec<Vec<Vec<BigRational>>>,
    ) -> Result<Self> {
        let coeffs = map_tensor(r, s, n, coeffs, Scalar::Rational)?;
        Ok(SosFormula { r, s, n, field: FieldDescriptor::Rational, coeffs })
    }

    /// Builds a prime-field formula, reducing every entry mod p.
    pub fn from_prime_coeffs(
        r: usize,
        s: usize,
        n: usize,
        p: u64,
        coeffs: Vec<Vec<Vec<i64>>>,
    ) -> Result<Self> {
        let field = FieldDescriptor::prime(p)?;
        let coeffs = map_tensor(r, s, n, coeffs, |x| Scalar::Residue {
            value: x.rem_euclid(p as i64) as u64,
            modulus: p,
        })?;
        Ok(SosFormula { r, s, n, field, coeffs })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    /// Reinterprets a rational formula over F_p (denominators must stay
    /// invertible). Prime-field formulas only convert to their own field.
    pub fn over_prime(&self, p: u64) -> Result<SosFormula> {
        let field = FieldDescriptor::prime(p)?;
        let coeffs = self
            .coeffs
            .iter()
            .map(|slice| {
                slice
                    .iter()
                    .map(|row| row.iter().map(|c| scalar_to_residue(c, p)).collect())
                    .collect()
            })
            .collect::<Result<Vec<Vec<Vec<Scalar>>>>>()?;
        Ok(SosFormula { r: self.r, s: self.s, n: self.n, field, coeffs })
    }

    /// Negates one z-slice in place; useful for invariance tests.
    pub fn negate_slice(&mut self, k: usize) {
        for row in &mut self.coeffs[k] {
            for c in row.iter_mut() {
                *c = c.neg();
            }
        }
    }

    /// Reorders the z-slices by the given permutation.
    pub fn permute_slices(&mut self, perm: &[usize]) {
        assert_eq!(perm.len(), self.n);
        let mut seen = vec![false; self.n];
        for &p in perm {
            assert!(p < self.n && !seen[p], "not a permutation");
            seen[p] = true;
        }
        let old = self.coeffs.clone();
        for (k, &p) in perm.iter().enumerate() {
            self.coeffs[k] = old[p].clone();
        }
    }

    /// Expands `sum_k z_k^2` and compares it coefficientwise against
    /// `(sum_i x_i^2)(sum_j y_j^2)` in the commutative monomial basis
    /// `x_i x_i' y_j y_j'`.
    pub fn verify(&self) -> bool {
        let mut acc: HashMap<(usize, usize, usize, usize), Scalar> = HashMap::new();
        for slice in &self.coeffs {
            for (i1, row1) in slice.iter().enumerate() {
                for (j1, a1) in row1.iter().enumerate() {
                    if a1.is_zero() {
                        continue;
                    }
                    for (i2, row2) in slice.iter().enumerate() {
                        for (j2, a2) in row2.iter().enumerate() {
                            if a2.is_zero() {
                                continue;
                            }
                            let key = (i1.min(i2), i1.max(i2), j1.min(j2), j1.max(j2));
                            let term = a1.mul(a2);
                            match acc.get_mut(&key) {
                                Some(entry) => *entry = entry.add(&term),
                                None => {
                                    acc.insert(key, term);
                                }
                            }
                        }
                    }
                }
            }
        }
        // expected: coefficient 1 on x_i^2 y_j^2, zero elsewhere
        for i in 0..self.r {
            for j in 0..self.s {
                match acc.remove(&(i, i, j, j)) {
                    Some(c) if c.is_one() => {}
                    _ => return false,
                }
            }
        }
        acc.values().all(Scalar::is_zero)
    }

    /// Verifies the bilinear-orthogonality identity
    /// `<phi(x,y), phi(x',y)> = q(y) <x, x'>` as an exact polynomial
    /// identity in x, x', y.
    pub fn orthogonality_check(&self) -> bool {
        let mut acc: HashMap<(usize, usize, usize, usize), Scalar> = HashMap::new();
        for slice in &self.coeffs {
            for (i1, row1) in slice.iter().enumerate() {
                for (j1, a1) in row1.iter().enumerate() {
                    if a1.is_zero() {
                        continue;
                    }
                    for (i2, row2) in slice.iter().enumerate() {
                        for (j2, a2) in row2.iter().enumerate() {
                            if a2.is_zero() {
                                continue;
                            }
                            // x_{i1} x'_{i2} are independent variables;
                            // only the y pair is symmetric
                            let key = (i1, i2, j1.min(j2), j1.max(j2));
                            let term = a1.mul(a2);
                            match acc.get_mut(&key) {
                                Some(entry) => *entry = entry.add(&term),
                                None => {
                                    acc.insert(key, term);
                                }
                            }
                        }
                    }
                }
            }
        }
        for i in 0..self.r {
            for j in 0..self.s {
                match acc.remove(&(i, i, j, j)) {
                    Some(c) if c.is_one() => {}
                    _ => return false,
                }
            }
        }
        acc.values().all(Scalar::is_zero)
    }

    /// Cross-checks a formula against the admissibility condition: a
    /// verified formula away from characteristic 2 must land on an
    /// admissible triple.
    pub fn admissibility_consistency(&self) -> ConsistencyReport {
        if !self.verify() {
            return ConsistencyReport::NotVerified;
        }
        if self.field.characteristic() == 2 {
            return ConsistencyReport::Char2Exempt;
        }
        let t = Triple::new(self.r as u64, self.s as u64, self.n as u64)
            .expect("formula dimensions are positive");
        let verdict = check_direct(&t);
        if verdict.passes {
            ConsistencyReport::Consistent(verdict)
        } else {
            ConsistencyReport::Inconsistent(verdict)
        }
    }

    /// Reads a formula from its JSON document form.
    pub fn from_json_str(text: &str) -> Result<SosFormula> {
        let doc: FormulaDoc = serde_json::from_str(text)
            .map_err(|e| Error::FormulaFormat(e.to_string()))?;
        doc.into_formula()
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<SosFormula> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| Error::FormulaFormat(format!("cannot read file: {e}")))?;
        Self::from_json_str(&text)
    }
}

/// A verified formula in characteristic != 2 contradicting the
/// admissibility condition would be fatal; the report makes the cross
/// check explicit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConsistencyReport {
    /// The formula does not verify, so the condition claims nothing.
    NotVerified,
    /// Characteristic 2 sits outside the condition's hypotheses.
    Char2Exempt,
    Consistent(Verdict),
    Inconsistent(Verdict),
}

impl ConsistencyReport {
    pub fn is_fatal(&self) -> bool {
        matches!(self, ConsistencyReport::Inconsistent(_))
    }
}

fn scalar_to_residue(c: &Scalar, p: u64) -> Result<Scalar> {
    match c {
        Scalar::Residue { modulus, .. } if *modulus == p => Ok(c.clone()),
        Scalar::Residue { modulus, .. } => Err(Error::FormulaFormat(format!(
            "cannot move residues mod {modulus} into F_{p}"
        ))),
        Scalar::Rational(q) => {
            let pb = BigInt::from(p);
            let num = q.numer().mod_floor(&pb);
            let den = q.denom().mod_floor(&pb);
            if den.is_zero() {
                return Err(Error::FormulaFormat(format!(
                    "denominator of {q} vanishes mod {p}"
                )));
            }
            let den_u = big_to_u64(&den);
            let num_u = big_to_u64(&num);
            let inv = invert_mod(den_u, p);
            Ok(Scalar::Residue { value: ((num_u as u128 * inv as u128) % p as u128) as u64, modulus: p })
        }
    }
}

fn big_to_u64(v: &BigInt) -> u64 {
    u64::try_from(v).expect("reduced residue fits in u64")
}

/// Modular inverse by Fermat (p prime, a nonzero mod p).
fn invert_mod(a: u64, p: u64) -> u64 {
    let mul = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    let mut base = a % p;
    let mut exp = p - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul(acc, base);
        }
        base = mul(base, base);
        exp >>= 1;
    }
    acc
}

fn map_tensor<T>(
    r: usize,
    s: usize,
    n: usize,
    coeffs: Vec<Vec<Vec<T>>>,
    f: impl Fn(T) -> Scalar,
) -> Result<Vec<Vec<Vec<Scalar>>>> {
    if r == 0 || s == 0 || n == 0 {
        return Err(Error::NonPositive { what: "formula dimension" });
    }
    if coeffs.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "expected {n} bilinear slices, found {}",
            coeffs.len()
        )));
    }
    coeffs
        .into_iter()
        .enumerate()
        .map(|(k, slice)| {
            if slice.len() != r {
                return Err(Error::DimensionMismatch(format!(
                    "slice {k}: expected {r} rows, found {}",
                    slice.len()
                )));
            }
            slice
                .into_iter()
                .enumerate()
                .map(|(i, row)| {
                    if row.len() != s {
                        return Err(Error::DimensionMismatch(format!(
                            "slice {k}, row {i}: expected {s} entries, found {}",
                            row.len()
                        )));
                    }
                    Ok(row.into_iter().map(&f).collect())
                })
                .collect()
        })
        .collect()
}

// --- the on-disk document -------------------------------------------------

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FormulaDoc {
    r: usize,
    s: usize,
    n: usize,
    field: FieldSpec,
    coeffs: Vec<Vec<Vec<CoeffRepr>>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum FieldSpec {
    Name(String),
    Prime { prime: u64 },
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CoeffRepr {
    Int(i64),
    Text(String),
}

impl FormulaDoc {
    fn into_formula(self) -> Result<SosFormula> {
        match self.field {
            FieldSpec::Name(name) if name == "rational" => {
                let coeffs = convert_tensor(self.coeffs, |repr, k, i, j| match repr {
                    CoeffRepr::Text(text) => parse_rational(&text).map_err(|e| {
                        Error::FormulaFormat(format!("coeffs[{k}][{i}][{j}]: {e}"))
                    }),
                    CoeffRepr::Int(_) => Err(Error::FormulaFormat(format!(
                        "coeffs[{k}][{i}][{j}]: rational entries are written as strings like \"3\" or \"-1/2\""
                    ))),
                })?;
                SosFormula::from_rational_coeffs(self.r, self.s, self.n, coeffs)
            }
            FieldSpec::Name(name) => Err(Error::FormulaFormat(format!(
                "unknown field \"{name}\" (use \"rational\" or {{\"prime\": p}})"
            ))),
            FieldSpec::Prime { prime } => {
                let coeffs = convert_tensor(self.coeffs, |repr, k, i, j| match repr {
                    CoeffRepr::Int(v) => Ok(v),
                    CoeffRepr::Text(_) => Err(Error::FormulaFormat(format!(
                        "coeffs[{k}][{i}][{j}]: prime-field entries are plain integers"
                    ))),
                })?;
                SosFormula::from_prime_coeffs(self.r, self.s, self.n, prime, coeffs)
            }
        }
    }
}

fn convert_tensor<T>(
    coeffs: Vec<Vec<Vec<CoeffRepr>>>,
    f: impl Fn(CoeffRepr, usize, usize, usize) -> Result<T>,
) -> Result<Vec<Vec<Vec<T>>>> {
    coeffs
        .into_iter()
        .enumerate()
        .map(|(k, slice)| {
            slice
                .into_iter()
                .enumerate()
                .map(|(i, row)| {
                    row.into_iter()
                        .enumerate()
                        .map(|(j, repr)| f(repr, k, i, j))
                        .collect()
                })
                .collect()
        })
        .collect()
}

fn parse_rational(text: &str) -> std::result::Result<BigRational, String> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num = BigInt::from_str(num).map_err(|e| format!("bad numerator {num:?}: {e}"))?;
    let den = BigInt::from_str(den).map_err(|e| format!("bad denominator {den:?}: {e}"))?;
    if den.is_zero() {
        return Err("zero denominator".to_string());
    }
    Ok(BigRational::new(num, den))
}
