//! The Grothendieck ring of projective space is `Z[t]/(t^{n+1})` with
//! `t = 1 - [O(-1)]`; a codimension-j complete intersection contributes
//! the Koszul class `prod (1 - (1-t)^{d_m})`. Removing a split quadric
//! from `P^n` quotients this ring by the span of the pushforward classes
//! supported on the quadric. This module computes that quotient with
//! integer-lattice normal forms and extracts its additive invariants and
//! multiplicative relations.
//!
//! The whole computation is generator-driven: nothing below assumes the
//! shape of the answer.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::lattice;
use crate::poly::TruncatedIntPoly;
use crate::{Error, Result};

/// Koszul class of a complete intersection of hypersurfaces with the
/// given degrees: `prod_m (1 - (1-t)^{d_m})` in `Z[t]/(t^{order+1})`.
pub fn koszul_class(degrees: &[u64], order: usize) -> Result<TruncatedIntPoly> {
    let mut acc = TruncatedIntPoly::one(order);
    let one = TruncatedIntPoly::one(order);
    for &d in degrees {
        if d == 0 {
            return Err(Error::NonPositive { what: "hypersurface degree" });
        }
        let one_minus_t = TruncatedIntPoly::from_coeffs(order, [1i64, -1]);
        let factor = &one - &one_minus_t.pow(d);
        acc = &acc * &factor;
    }
    Ok(acc)
}

/// Pushforward classes spanning the kernel ideal for the complement of a
/// split quadric in `P^n`, written in `Z[t]/(t^{n+1})`.
///
/// For `n = 2k` the linear subspaces contribute `t^{2k}, ..., t^{k+1}`
/// and the quadric-type complete intersections contribute
/// `t^j (2t - t^2)` for `0 <= j <= k-1`. For `n = 2k-1` the linear list
/// is `t^{2k-1}, ..., t^k` followed by the second middle-dimensional
/// family, a codimension-k linear subspace whose class is again `t^k`
/// (kept as a duplicate entry; the lattice closure absorbs it), and the
/// quadric-type classes `t^j (2t - t^2)` for `0 <= j <= k-2`.
pub fn gysin_image_generators(n: usize) -> Result<Vec<TruncatedIntPoly>> {
    if n == 0 {
        return Err(Error::NonPositive { what: "ambient dimension n" });
    }
    let mut gens = Vec::new();
    let ones = |count: usize| vec![1u64; count];
    if n % 2 == 0 {
        let k = n / 2;
        for i in 0..k {
            gens.push(koszul_class(&ones(2 * k - i), n)?);
        }
        for i in k..2 * k {
            let mut degrees = ones(2 * k - 1 - i);
            degrees.push(2);
            gens.push(koszul_class(&degrees, n)?);
        }
    } else {
        let k = (n + 1) / 2;
        for i in 0..k {
            gens.push(koszul_class(&ones(2 * k - 1 - i), n)?);
        }
        // the duplicate middle class
        gens.push(koszul_class(&ones(k), n)?);
        for i in k..2 * k - 1 {
            let mut degrees = ones(2 * k - 2 - i);
            degrees.push(2);
            gens.push(koszul_class(&degrees, n)?);
        }
    }
    Ok(gens)
}

/// An ideal of `Z[t]/(t^{order+1})` as an integer lattice in canonical
/// Hermite form, closed under multiplication by `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealLattice {
    order: usize,
    basis: Vec<Vec<BigInt>>,
}

impl IdealLattice {
    pub fn zero(order: usize) -> Self {
        IdealLattice { order, basis: Vec::new() }
    }

    /// Lattice spanned by all shifts `t^j * g` of the generators,
    /// `0 <= j <= order`, computed as a closure: whenever the span grows,
    /// the shifts of the new basis are folded back in.
    pub fn from_generators(gens: &[TruncatedIntPoly], order: usize) -> Result<Self> {
        let mut basis: Vec<Vec<BigInt>> = Vec::new();
        for g in gens {
            if g.order() != order {
                return Err(Error::OrderMismatch(g.order(), order));
            }
            lattice::insert_row(&mut basis, g.coeffs().to_vec());
        }
        // closure under the shift map; membership is monotone, so a row
        // whose shift has been seen inside the lattice stays settled
        let mut settled: HashSet<Vec<BigInt>> = HashSet::new();
        loop {
            let mut grew = false;
            for row in basis.clone() {
                if settled.contains(&row) {
                    continue;
                }
                let shifted = shift_row(&row);
                if !lattice::contains(&basis, &shifted) {
                    lattice::insert_row(&mut basis, shifted);
                    grew = true;
                    // the basis may have been rewritten; stale entries in
                    // `settled` are harmless because growth is monotone
                } else {
                    settled.insert(row);
                }
            }
            if !grew {
                break;
            }
        }
        lattice::renormalize(&mut basis);
        Ok(IdealLattice { order, basis })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Canonical HNF basis rows, low-degree coefficients first.
    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, p: &TruncatedIntPoly) -> Result<bool> {
        if p.order() != self.order {
            return Err(Error::OrderMismatch(p.order(), self.order));
        }
        Ok(lattice::contains(&self.basis, p.coeffs()))
    }

    /// Canonical representative of `p` modulo the ideal.
    pub fn reduce(&self, p: &TruncatedIntPoly) -> Result<TruncatedIntPoly> {
        if p.order() != self.order {
            return Err(Error::OrderMismatch(p.order(), self.order));
        }
        let reduced = lattice::reduce_mod_lattice(&self.basis, p.coeffs());
        Ok(TruncatedIntPoly::from_coeffs(self.order, reduced))
    }

    /// True when shifting every basis row by `t` stays inside the lattice.
    pub fn is_shift_closed(&self) -> bool {
        self.basis
            .iter()
            .all(|row| lattice::contains(&self.basis, &shift_row(row)))
    }
}

fn shift_row(row: &[BigInt]) -> Vec<BigInt> {
    let mut shifted = vec![BigInt::zero(); row.len()];
    for (j, c) in row.iter().enumerate() {
        if j + 1 < row.len() {
            shifted[j + 1] = c.clone();
        }
    }
    shifted
}

/// Equality of ideals as equality of canonical bases. Errors when the
/// ideals live at different truncation orders.
pub fn ideal_equals(a: &IdealLattice, b: &IdealLattice) -> Result<bool> {
    if a.order != b.order {
        return Err(Error::OrderMismatch(a.order, b.order));
    }
    Ok(a.basis == b.basis)
}

/// Additive and multiplicative shape of `Z[t]/(t^{order+1})` modulo an
/// ideal lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingPresentation {
    order: usize,
    /// Invariant factors of the additive group: nontrivial torsion in
    /// divisibility order, then one `0` per free summand.
    additive_invariants: Vec<BigInt>,
    /// Canonical residue of `t^2`.
    t_squared: TruncatedIntPoly,
    /// Canonical residue of `2t`.
    two_t: TruncatedIntPoly,
    /// 2-adic valuation of the largest invariant factor (0 if torsion-free).
    torsion_exponent: u64,
    /// Canonical residue of `2^torsion_exponent * t`.
    torsion_multiple_of_t: TruncatedIntPoly,
}

impl RingPresentation {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn additive_invariants(&self) -> &[BigInt] {
        &self.additive_invariants
    }

    pub fn free_rank(&self) -> usize {
        self.additive_invariants.iter().filter(|d| d.is_zero()).count()
    }

    pub fn torsion_factors(&self) -> Vec<BigInt> {
        self.additive_invariants
            .iter()
            .filter(|d| !d.is_zero())
            .cloned()
            .collect()
    }

    pub fn t_squared(&self) -> &TruncatedIntPoly {
        &self.t_squared
    }

    pub fn two_t(&self) -> &TruncatedIntPoly {
        &self.two_t
    }

    pub fn torsion_exponent(&self) -> u64 {
        self.torsion_exponent
    }

    pub fn torsion_multiple_of_t(&self) -> &TruncatedIntPoly {
        &self.torsion_multiple_of_t
    }

    /// Whether `t^2 = 2t` holds in the quotient.
    pub fn relation_t_squared_equals_two_t(&self) -> bool {
        self.t_squared == self.two_t
    }

    /// Group shape like `Z ⊕ Z/4`.
    pub fn group_string(&self) -> String {
        let mut parts = Vec::new();
        match self.free_rank() {
            0 => {}
            1 => parts.push("Z".to_string()),
            f => parts.push(format!("Z^{f}")),
        }
        for d in self.torsion_factors() {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" ⊕ ")
        }
    }
}

/// Invariant factors and generator relations of the quotient by an ideal
/// lattice, straight from Smith normal form of the basis.
pub fn quotient_presentation(ideal: &IdealLattice) -> RingPresentation {
    let order = ideal.order();
    let raw = lattice::smith_invariant_factors(ideal.basis());
    let free = order + 1 - raw.len();
    let mut additive_invariants: Vec<BigInt> =
        raw.into_iter().filter(|d| !d.is_one()).collect();
    let torsion_exponent = additive_invariants
        .last()
        .map(|d| {
            let mut d = d.clone();
            let mut e = 0u64;
            while (&d % 2u32).is_zero() {
                d /= 2;
                e += 1;
            }
            e
        })
        .unwrap_or(0);
    additive_invariants.extend(std::iter::repeat(BigInt::zero()).take(free));

    let reduce = |p: &TruncatedIntPoly| ideal.reduce(p).expect("orders agree by construction");
    let t = TruncatedIntPoly::monomial(order, 1);
    let t_squared = reduce(&TruncatedIntPoly::monomial(order, 2));
    let two_t = reduce(&TruncatedIntPoly::from_coeffs(order, [0i64, 2]));
    let torsion_multiple_of_t = {
        let coeff = BigInt::one() << torsion_exponent;
        let scaled = TruncatedIntPoly::from_coeffs(
            order,
            t.coeffs().iter().map(|c| c * &coeff).collect::<Vec<_>>(),
        );
        reduce(&scaled)
    };

    RingPresentation {
        order,
        additive_invariants,
        t_squared,
        two_t,
        torsion_exponent,
        torsion_multiple_of_t,
    }
}

/// The Grothendieck ring of the complement of a split quadric in `P^n`:
/// Gysin generator classes, their shift-closed lattice, then the quotient
/// presentation, with no shortcut through the expected answer.
pub fn deleted_quadric_k0(n: usize) -> Result<RingPresentation> {
    let gens = gysin_image_generators(n)?;
    let ideal = IdealLattice::from_generators(&gens, n)?;
    Ok(quotient_presentation(&ideal))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly(order: usize, coeffs: &[i64]) -> TruncatedIntPoly {
        TruncatedIntPoly::from_coeffs(order, coeffs.to_vec())
    }

    #[test]
    fn koszul_of_linear_degrees_is_a_power_of_t() {
        // n - i linear equations cut out a linear subspace of class t^(n-i)
        for n in 1..=8usize {
            for i in 0..n {
                let cls = koszul_class(&vec![1; n - i], n).unwrap();
                assert_eq!(cls, TruncatedIntPoly::monomial(n, n - i));
            }
        }
    }

    #[test]
    fn koszul_of_a_quadric() {
        assert_eq!(koszul_class(&[2], 4).unwrap(), poly(4, &[0, 2, -1]));
        // 2k-1-i linear plus one quadric
        let cls = koszul_class(&[1, 1, 2], 6).unwrap();
        assert_eq!(cls, poly(6, &[0, 0, 0, 2, -1]));
        assert!(koszul_class(&[1, 0], 4).is_err());
    }

    #[test]
    fn koszul_empty_product_is_one() {
        assert_eq!(koszul_class(&[], 3).unwrap(), TruncatedIntPoly::one(3));
    }

    #[test]
    fn gysin_generators_small_cases() {
        let g2 = gysin_image_generators(2).unwrap();
        assert_eq!(g2, vec![poly(2, &[0, 0, 1]), poly(2, &[0, 2, -1])]);

        let g4 = gysin_image_generators(4).unwrap();
        assert_eq!(
            g4,
            vec![
                poly(4, &[0, 0, 0, 0, 1]),
                poly(4, &[0, 0, 0, 1]),
                poly(4, &[0, 2, -1]).shift_up(1),
                poly(4, &[0, 2, -1]),
            ]
        );

        // odd case: duplicate middle class t^2 appears twice
        let g3 = gysin_image_generators(3).unwrap();
        assert_eq!(
            g3,
            vec![
                poly(3, &[0, 0, 0, 1]),
                poly(3, &[0, 0, 1]),
                poly(3, &[0, 0, 1]),
                poly(3, &[0, 2, -1]),
            ]
        );
        assert!(gysin_image_generators(0).is_err());
    }

    #[test]
    fn ideal_from_no_generators_is_zero() {
        let ideal = IdealLattice::from_generators(&[], 3).unwrap();
        assert_eq!(ideal.rank(), 0);
        assert!(ideal.is_shift_closed());
    }

    #[test]
    fn ideal_of_t_contains_all_higher_powers() {
        let t = TruncatedIntPoly::monomial(2, 1);
        let ideal = IdealLattice::from_generators(&[t.clone()], 2).unwrap();
        assert_eq!(ideal.rank(), 2);
        assert!(ideal.contains(&TruncatedIntPoly::monomial(2, 2)).unwrap());
        assert!(!ideal.contains(&TruncatedIntPoly::one(2)).unwrap());
        assert!(ideal.is_shift_closed());
    }

    #[test]
    fn ideal_membership_example() {
        // 4t = 2(2t - t^2) + t(2t - t^2) + t^3 inside (2t - t^2, t^3)
        let gens = [poly(4, &[0, 2, -1]), TruncatedIntPoly::monomial(4, 3)];
        let ideal = IdealLattice::from_generators(&gens, 4).unwrap();
        assert!(ideal.contains(&poly(4, &[0, 4])).unwrap());
        assert!(!ideal.contains(&poly(4, &[0, 2])).unwrap());
        assert!(ideal.is_shift_closed());
    }

    #[test]
    fn ideal_equality_examples() {
        let a = IdealLattice::from_generators(
            &[poly(4, &[0, 2, -1]), TruncatedIntPoly::monomial(4, 3)],
            4,
        )
        .unwrap();
        assert!(ideal_equals(&a, &a).unwrap());

        let b = IdealLattice::from_generators(&[poly(4, &[0, 2, -1]), poly(4, &[0, 4])], 4)
            .unwrap();
        assert!(ideal_equals(&a, &b).unwrap());

        let t = IdealLattice::from_generators(&[TruncatedIntPoly::monomial(4, 1)], 4).unwrap();
        let two_t = IdealLattice::from_generators(&[poly(4, &[0, 2])], 4).unwrap();
        assert!(!ideal_equals(&t, &two_t).unwrap());

        let other_order = IdealLattice::zero(3);
        assert!(ideal_equals(&a, &other_order).is_err());
    }

    #[test]
    fn ideal_equality_of_the_alternative_generators() {
        for k in 1..=8usize {
            let order = 2 * k;
            let quad = poly(order, &[0, 2, -1]);
            let lhs = IdealLattice::from_generators(
                &[quad.clone(), TruncatedIntPoly::monomial(order, k + 1)],
                order,
            )
            .unwrap();
            let mut two_k_t = vec![BigInt::zero(); order + 1];
            two_k_t[1] = BigInt::one() << k;
            let rhs = IdealLattice::from_generators(
                &[quad, TruncatedIntPoly::from_coeffs(order, two_k_t)],
                order,
            )
            .unwrap();
            assert!(ideal_equals(&lhs, &rhs).unwrap(), "k = {k}");
        }
    }

    #[test]
    fn quotient_of_zero_ideal_is_free() {
        let pres = quotient_presentation(&IdealLattice::zero(4));
        assert_eq!(pres.free_rank(), 5);
        assert!(pres.torsion_factors().is_empty());
        // nothing to quotient by: t^2 stays t^2
        assert_eq!(pres.t_squared(), &TruncatedIntPoly::monomial(4, 2));
        assert!(!pres.relation_t_squared_equals_two_t());
    }

    #[test]
    fn quotient_of_full_lattice_is_trivial() {
        let gens: Vec<TruncatedIntPoly> =
            (0..=2).map(|d| TruncatedIntPoly::monomial(2, d)).collect();
        let ideal = IdealLattice::from_generators(&gens, 2).unwrap();
        let pres = quotient_presentation(&ideal);
        assert_eq!(pres.free_rank(), 0);
        assert!(pres.torsion_factors().is_empty());
        assert_eq!(pres.group_string(), "0");
    }

    #[test]
    fn deleted_quadric_small_cases() {
        let p1 = deleted_quadric_k0(1).unwrap();
        assert_eq!(p1.free_rank(), 1);
        assert!(p1.torsion_factors().is_empty());

        let p4 = deleted_quadric_k0(4).unwrap();
        assert_eq!(p4.free_rank(), 1);
        assert_eq!(p4.torsion_factors(), vec![BigInt::from(4)]);
        assert!(p4.relation_t_squared_equals_two_t());
        assert_eq!(p4.group_string(), "Z ⊕ Z/4");
        assert_eq!(p4.torsion_exponent(), 2);
        assert!(p4.torsion_multiple_of_t().is_zero());

        assert!(deleted_quadric_k0(0).is_err());
    }

    #[test]
    fn deleted_quadric_matches_the_expected_shape_up_to_12() {
        for n in 1..=12usize {
            let pres = deleted_quadric_k0(n).unwrap();
            let k = n / 2;
            assert_eq!(pres.free_rank(), 1, "n = {n}");
            if k == 0 {
                assert!(pres.torsion_factors().is_empty());
            } else {
                assert_eq!(pres.torsion_factors(), vec![BigInt::one() << k], "n = {n}");
            }
            assert_eq!(pres.torsion_exponent(), k as u64);
            assert!(pres.torsion_multiple_of_t().is_zero(), "n = {n}");
            assert!(pres.relation_t_squared_equals_two_t(), "n = {n}");
        }
    }

    #[test]
    fn nu_substitution_consistency() {
        // with nu = -t the quotient relation reads nu^2 = -2nu
        for k in 1..=6usize {
            let n = 2 * k;
            let gens = gysin_image_generators(n).unwrap();
            let ideal = IdealLattice::from_generators(&gens, n).unwrap();
            let nu = -&TruncatedIntPoly::monomial(n, 1);
            let nu_sq = &nu * &nu;
            let minus_two_nu = poly(n, &[0, 2]);
            assert_eq!(
                ideal.reduce(&nu_sq).unwrap(),
                ideal.reduce(&minus_two_nu).unwrap(),
                "n = {n}"
            );
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn koszul_is_symmetric_in_degrees(mut degrees in proptest::collection::vec(1u64..=4, 0..5)) {
            let order = 8;
            let forward = koszul_class(&degrees, order).unwrap();
            degrees.reverse();
            let backward = koszul_class(&degrees, order).unwrap();
            prop_assert_eq!(forward, backward);
        }

        #[test]
        fn ideal_independent_of_generator_order_and_redundancy(
            seed in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 5), 1..4),
            extra_shift in 0usize..4,
        ) {
            let order = 4;
            let gens: Vec<TruncatedIntPoly> =
                seed.iter().map(|c| TruncatedIntPoly::from_coeffs(order, c.clone())).collect();
            let forward = IdealLattice::from_generators(&gens, order).unwrap();

            let mut reversed: Vec<TruncatedIntPoly> = gens.clone();
            reversed.reverse();
            // adding a member of the lattice changes nothing
            reversed.push(gens[0].shift_up(extra_shift));
            let redundant = IdealLattice::from_generators(&reversed, order).unwrap();

            prop_assert!(ideal_equals(&forward, &redundant).unwrap());
            prop_assert!(forward.is_shift_closed());
        }
    }
}
