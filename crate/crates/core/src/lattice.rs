//! Canonical normal forms for integer row lattices: Hermite normal form
//! for lattice equality and membership, Smith normal form for the
//! invariant factors of the quotient group.
//!
//! Rows are plain `Vec<BigInt>`. The HNF kept here is row-style: rows
//! sorted by leading column, one positive pivot per column, and (after
//! [`renormalize`]) every other row reduced into `[0, pivot)` at each
//! pivot column. Two lattices are equal exactly when their canonical
//! bases are identical vectors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

pub(crate) fn leading_col(row: &[BigInt]) -> Option<usize> {
    row.iter().position(|x| !x.is_zero())
}

fn negate_row(row: &mut [BigInt]) {
    for entry in row.iter_mut() {
        *entry = -std::mem::take(entry);
    }
}

/// Inserts `row` into an echelon basis (sorted leading columns, one
/// positive pivot each). Returns true when the lattice actually grew.
///
/// Off-pivot entries are left unreduced; call [`renormalize`] once the
/// basis is complete to reach the canonical form.
pub fn insert_row(basis: &mut Vec<Vec<BigInt>>, mut row: Vec<BigInt>) -> bool {
    let mut changed = false;
    loop {
        let Some(col) = leading_col(&row) else {
            break;
        };
        match basis.iter().position(|r| leading_col(r) == Some(col)) {
            Some(p) => {
                let pivot = basis[p][col].clone();
                let (quotient, remainder) = row[col].div_rem(&pivot);
                if remainder.is_zero() {
                    let pivot_row = basis[p].clone();
                    for (entry, pe) in row.iter_mut().zip(&pivot_row).skip(col) {
                        *entry -= &quotient * pe;
                    }
                } else {
                    // gcd step: the pivot shrinks, the rest of the row
                    // keeps reducing further to the right
                    let e = pivot.extended_gcd(&row[col]);
                    let pivot_row = basis[p].clone();
                    let combined: Vec<BigInt> = pivot_row
                        .iter()
                        .zip(&row)
                        .map(|(a, b)| &e.x * a + &e.y * b)
                        .collect();
                    let reduced: Vec<BigInt> = row
                        .iter()
                        .zip(&pivot_row)
                        .map(|(b, a)| (&pivot / &e.gcd) * b - (&row[col] / &e.gcd) * a)
                        .collect();
                    basis[p] = combined;
                    if basis[p][col].is_negative() {
                        negate_row(&mut basis[p]);
                    }
                    row = reduced;
                    changed = true;
                }
            }
            None => {
                if row[col].is_negative() {
                    negate_row(&mut row);
                }
                basis.push(row);
                basis.sort_by_key(|r| leading_col(r).unwrap_or(usize::MAX));
                changed = true;
                break;
            }
        }
    }
    changed
}

/// Reduces every off-pivot entry into `[0, pivot)`, completing the
/// canonical Hermite form of an echelon basis.
pub fn renormalize(basis: &mut [Vec<BigInt>]) {
    for p in 0..basis.len() {
        let col = leading_col(&basis[p]).expect("basis rows are nonzero");
        let pivot_row = basis[p].clone();
        for (q, row) in basis.iter_mut().enumerate() {
            if q == p || row[col].is_zero() {
                continue;
            }
            let quotient = row[col].div_floor(&pivot_row[col]);
            if quotient.is_zero() {
                continue;
            }
            for (entry, pe) in row.iter_mut().zip(&pivot_row).skip(col) {
                *entry -= &quotient * pe;
            }
        }
    }
}

/// Canonical HNF basis of the row span. Zero rows vanish; the result is
/// identical for every generating set of the same lattice.
pub fn hermite_normal_form(rows: impl IntoIterator<Item = Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let mut basis = Vec::new();
    for row in rows {
        insert_row(&mut basis, row);
    }
    renormalize(&mut basis);
    basis
}

/// Canonical representative of `v` modulo the lattice: at each pivot
/// column (taken left to right) the entry is floor-reduced into
/// `[0, pivot)`. The result is zero exactly when `v` is a member, and
/// two vectors of the same coset reduce to the same representative.
pub fn reduce_mod_lattice(basis: &[Vec<BigInt>], v: &[BigInt]) -> Vec<BigInt> {
    let mut v = v.to_vec();
    for row in basis {
        let col = leading_col(row).expect("basis rows are nonzero");
        if v[col].is_zero() {
            continue;
        }
        let quotient = v[col].div_floor(&row[col]);
        if quotient.is_zero() {
            continue;
        }
        for (entry, pe) in v.iter_mut().zip(row).skip(col) {
            *entry -= &quotient * pe;
        }
    }
    v
}

pub fn contains(basis: &[Vec<BigInt>], v: &[BigInt]) -> bool {
    reduce_mod_lattice(basis, v).iter().all(Zero::is_zero)
}

/// Nonzero invariant factors d_1 | d_2 | ... of the integer matrix, via
/// Smith normal form by row and column elimination. The quotient of
/// Z^cols by the row span is `Z/d_1 + ... + Z/d_k + Z^(cols - k)`.
pub fn smith_invariant_factors(rows: &[Vec<BigInt>]) -> Vec<BigInt> {
    if rows.is_empty() {
        return Vec::new();
    }
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let nrows = m.len();
    let ncols = m[0].len();
    let mut factors = Vec::new();
    let mut t = 0usize;

    while t < nrows && t < ncols {
        // bring a nonzero entry of minimal magnitude to the pivot seat
        let mut pos: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..ncols {
                if m[i][j].is_zero() {
                    continue;
                }
                match pos {
                    Some((pi, pj)) if m[pi][pj].abs() <= m[i][j].abs() => {}
                    _ => pos = Some((i, j)),
                }
            }
        }
        let Some((pi, pj)) = pos else {
            break;
        };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        if m[t][t].is_negative() {
            negate_row(&mut m[t]);
        }

        loop {
            // clear the pivot column with row operations
            let mut dirty = false;
            for i in t + 1..nrows {
                if m[i][t].is_zero() {
                    continue;
                }
                let q = m[i][t].div_floor(&m[t][t]);
                let pivot_row = m[t].clone();
                for (entry, pe) in m[i].iter_mut().zip(&pivot_row) {
                    *entry -= &q * pe;
                }
                if !m[i][t].is_zero() {
                    // remainder is a smaller candidate pivot
                    m.swap(t, i);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // clear the pivot row with column operations
            for j in t + 1..ncols {
                if m[t][j].is_zero() {
                    continue;
                }
                let q = m[t][j].div_floor(&m[t][t]);
                for row in m.iter_mut() {
                    let sub = &q * &row[t];
                    row[j] -= sub;
                }
                if !m[t][j].is_zero() {
                    for row in m.iter_mut() {
                        row.swap(t, j);
                    }
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // the pivot has to divide the remaining block
            let mut fixed = true;
            'scan: for i in t + 1..nrows {
                for j in t + 1..ncols {
                    if !(&m[i][j] % &m[t][t]).is_zero() {
                        let addend = m[i].clone();
                        for (entry, ae) in m[t].iter_mut().zip(&addend) {
                            *entry += ae;
                        }
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break;
            }
        }

        factors.push(m[t][t].abs());
        t += 1;
    }
    factors
}
