//! Z_p[Γ]-lattices, modelled by an integer action matrix for σ on a fixed
//! basis. Two lattices are considered the same when they differ by a base
//! change whose determinant is prime to `p`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::group_ring::GroupRingElt;
use super::intmat::{echelon_pivots, hnf_p_saturated, kernel_basis, solve_echelon, IntMatrix};
use super::params::GroupParams;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaLattice {
    params: GroupParams,
    action: IntMatrix,
}

impl GammaLattice {
    /// Validates `A^(p^n) = I` and `p ∤ det A`.
    pub fn new(params: GroupParams, action: IntMatrix) -> Result<Self> {
        if action.rows() != action.cols() {
            return Err(Error::InvalidLattice("action matrix is not square".into()));
        }
        if !action.pow(params.order() as u64).is_identity() {
            return Err(Error::InvalidLattice("σ^(p^n) does not act as the identity".into()));
        }
        if action.determinant().is_multiple_of(&BigInt::from(params.p())) {
            return Err(Error::InvalidLattice("action is not invertible at p".into()));
        }
        Ok(GammaLattice { params, action })
    }

    pub(crate) fn new_unchecked(params: GroupParams, action: IntMatrix) -> Self {
        GammaLattice { params, action }
    }

    pub fn zero(params: GroupParams) -> Self {
        GammaLattice { params, action: IntMatrix::zeros(0, 0) }
    }

    pub fn params(&self) -> GroupParams {
        self.params
    }

    pub fn rank(&self) -> usize {
        self.action.rows()
    }

    pub fn action(&self) -> &IntMatrix {
        &self.action
    }

    /// Matrix of `σ^k`.
    pub fn sigma_power(&self, k: u64) -> IntMatrix {
        self.action.pow(k)
    }

    /// Matrix of the generator `σ^(p^(n-j))` of `Γ_j`.
    pub fn subgroup_generator(&self, j: u32) -> IntMatrix {
        self.sigma_power(self.params.generator_step(j) as u64)
    }

    /// Matrix of a group ring element acting on the lattice.
    pub fn act(&self, x: &GroupRingElt) -> IntMatrix {
        assert_eq!(x.params(), self.params);
        let r = self.rank();
        let mut out = IntMatrix::zeros(r, r);
        let mut power = IntMatrix::identity(r);
        for c in x.coeffs() {
            if !c.is_zero() {
                out = out.add(&power.scale(c));
            }
            power = power.mul(&self.action);
        }
        out
    }

    pub fn has_identity_order(&self) -> bool {
        self.action.pow(self.params.order() as u64).is_identity()
    }
}

/// `Z_p[Γ/Γ_i]`: rank `p^(n-i)` with σ cycling the coset representatives.
pub fn permutation_lattice(params: GroupParams, i: u32) -> Result<GammaLattice> {
    params.check_subgroup(i)?;
    let r = params.generator_step(i);
    let mut a = IntMatrix::zeros(r, r);
    for k in 0..r {
        a[((k + 1) % r, k)] = BigInt::one();
    }
    Ok(GammaLattice::new_unchecked(params, a))
}

/// Sublattice of the regular lattice `Z[Γ]` spanned (after saturation at
/// `p`) by the given group ring elements and all their translates.
fn ideal_lattice(params: GroupParams, gens: &[GroupRingElt]) -> Result<GammaLattice> {
    let order = params.order();
    let mut cols = Vec::with_capacity(gens.len() * order);
    for g in gens {
        for k in 0..order {
            cols.push(g.shift(k).coeffs().to_vec());
        }
    }
    let basis = hnf_p_saturated(&IntMatrix::from_columns(order, &cols), params.p());
    let pivots = echelon_pivots(&basis);
    let r = basis.cols();
    let mut action = IntMatrix::zeros(r, r);
    for c in 0..r {
        let v = GroupRingElt::from_coeffs(params, basis.column(c)).shift(1);
        let x = solve_echelon(&basis, &pivots, v.coeffs())
            .ok_or_else(|| Error::InvariantViolation("ideal basis is not σ-stable".into()))?;
        for (row, val) in x.into_iter().enumerate() {
            action[(row, c)] = val;
        }
    }
    Ok(GammaLattice::new_unchecked(params, action))
}

/// The lattice `M_{a,b}`.
///
/// With `c = n - (a+b)`: for `b = 0` this is the ideal `Z_p[Γ](σ^(p^c) - 1)`
/// of rank `p^n - p^(n-a)`; for `b > 0` it is the full-rank ideal
/// `Z_p[Γ](p^a, σ^(p^c) - 1)`. The basis is the column Hermite form of the
/// translates of the generators.
pub fn mab_lattice(params: GroupParams, a: u32, b: u32) -> Result<GammaLattice> {
    params.check_level(a)?;
    if a + b > params.n() {
        return Err(Error::IndexOutOfRange { index: b, range: format!("0..={}", params.n() - a) });
    }
    let c = params.n() - a - b;
    let diff = &GroupRingElt::sigma_pow(params, params.pow(c) as usize) - &GroupRingElt::one(params);
    if b == 0 {
        ideal_lattice(params, &[diff])
    } else {
        let pa = GroupRingElt::scalar(params, params.pow(a));
        ideal_lattice(params, &[pa, diff])
    }
}

/// The augmentation quotient `Z_p[Γ]/(Σ_{γ∈Γ} γ)` in the basis `σ^0, ..., σ^(p^n - 2)`.
pub fn augmentation_quotient(params: GroupParams) -> GammaLattice {
    let r = params.order() - 1;
    let mut a = IntMatrix::zeros(r, r);
    for k in 0..r - 1 {
        a[(k + 1, k)] = BigInt::one();
    }
    // σ^(p^n - 1) = -(1 + σ + ... + σ^(p^n - 2))
    for row in 0..r {
        a[(row, r - 1)] = BigInt::from(-1);
    }
    GammaLattice::new_unchecked(params, a)
}

/// The sublattice fixed by `Γ_j`, with the induced Γ-action.
pub fn fixed_sublattice(m: &GammaLattice, j: u32) -> Result<GammaLattice> {
    m.params.check_subgroup(j)?;
    let r = m.rank();
    let tau = m.subgroup_generator(j);
    let (k, left) = kernel_basis(&tau.sub(&IntMatrix::identity(r)));
    let action = left.mul(&m.action).mul(&k);
    Ok(GammaLattice::new_unchecked(m.params, action))
}

pub fn fixed_rank(m: &GammaLattice, j: u32) -> Result<usize> {
    Ok(fixed_sublattice(m, j)?.rank())
}

pub fn direct_sum(m: &GammaLattice, n: &GammaLattice) -> Result<GammaLattice> {
    if m.params != n.params {
        return Err(Error::MismatchedParams);
    }
    Ok(GammaLattice::new_unchecked(m.params, m.action.block_diag(&n.action)))
}

pub fn direct_sum_all<'a>(params: GroupParams, parts: impl IntoIterator<Item = &'a GammaLattice>) -> Result<GammaLattice> {
    parts.into_iter().try_fold(GammaLattice::zero(params), |acc, x| direct_sum(&acc, x))
}

/// Conjugates the action by a pseudorandom unimodular matrix determined by
/// `seed`. The result is isomorphic to `m`.
pub fn random_unimodular_change(m: &GammaLattice, seed: u64) -> GammaLattice {
    let r = m.rank();
    if r < 2 {
        return m.clone();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut basis = IntMatrix::identity(r);
    let mut inverse = IntMatrix::identity(r);
    for _ in 0..2 * r {
        let i = rng.gen_range(0..r);
        let mut j = rng.gen_range(0..r - 1);
        if j >= i {
            j += 1;
        }
        let q: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
        // basis: col_i += q col_j ; inverse: row_j -= q row_i
        let q = BigInt::from(q);
        for row in 0..r {
            let v = &basis[(row, j)] * &q;
            basis[(row, i)] += v;
        }
        for col in 0..r {
            let v = &inverse[(i, col)] * &q;
            inverse[(j, col)] -= v;
        }
    }
    let action = inverse.mul(&m.action).mul(&basis);
    GammaLattice::new_unchecked(m.params, action)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(p: u64, n: u32) -> GroupParams {
        GroupParams::new(p, n).unwrap()
    }

    #[test]
    fn permutation_ranks() {
        let gp = g(3, 2);
        let top = permutation_lattice(gp, 2).unwrap();
        assert_eq!(top.rank(), 1);
        assert!(top.action().is_identity());
        let reg = permutation_lattice(g(3, 1), 0).unwrap();
        assert_eq!(reg.rank(), 3);
        assert!(reg.has_identity_order());
        assert!(!reg.action().is_identity());
    }

    #[test]
    fn permutation_fixed_ranks_count_orbits() {
        let gp = g(3, 3);
        for i in 0..=3 {
            let m = permutation_lattice(gp, i).unwrap();
            for j in 0..=3 {
                assert_eq!(fixed_rank(&m, j).unwrap(), 3usize.pow(3 - i.max(j)));
            }
        }
    }

    #[test]
    fn mab_ranks() {
        let gp = g(3, 2);
        assert_eq!(mab_lattice(gp, 1, 0).unwrap().rank(), 6);
        assert_eq!(mab_lattice(gp, 1, 1).unwrap().rank(), 9);
        assert_eq!(mab_lattice(gp, 2, 0).unwrap().rank(), 8);
        assert!(mab_lattice(gp, 0, 1).is_err());
        assert!(mab_lattice(gp, 2, 1).is_err());
    }

    #[test]
    fn mab_quotient_order() {
        // [Z[Γ] : I_{a,b}] = p^(a p^c)
        let gp = g(3, 3);
        for (a, b) in [(1, 1), (1, 2), (2, 1)] {
            let c = 3 - a - b;
            let m = mab_lattice(gp, a, b).unwrap();
            let order = gp.order();
            let mut cols = Vec::new();
            let diff = &GroupRingElt::sigma_pow(gp, gp.pow(c) as usize) - &GroupRingElt::one(gp);
            for k in 0..order {
                cols.push(GroupRingElt::scalar(gp, gp.pow(a)).shift(k).coeffs().to_vec());
                cols.push(diff.shift(k).coeffs().to_vec());
            }
            let h = hnf_p_saturated(&IntMatrix::from_columns(order, &cols), 3);
            assert_eq!(h.cols(), order);
            let index: BigInt = (0..order).map(|i| h[(i, i)].clone()).product();
            assert_eq!(index, BigInt::from(3u64.pow(a * 3u32.pow(c))));
            assert_eq!(m.rank(), order);
        }
    }

    #[test]
    fn constructed_lattices_have_exponent_dividing_order() {
        let gp = g(3, 3);
        for a in 1..=3 {
            for b in 0..=(3 - a) {
                let m = mab_lattice(gp, a, b).unwrap();
                assert!(GammaLattice::new(gp, m.action().clone()).is_ok(), "M_{a},{b}");
            }
        }
        assert!(GammaLattice::new(gp, augmentation_quotient(gp).action().clone()).is_ok());
    }

    #[test]
    fn augmentation_kernel_meets_norm_line_trivially() {
        let gp = g(5, 2);
        let m = mab_lattice(gp, 2, 0).unwrap();
        assert_eq!(m.rank(), 24);
        assert_eq!(fixed_rank(&m, 2).unwrap(), 0);
    }

    #[test]
    fn invalid_action_rejected() {
        let gp = g(3, 1);
        let a = IntMatrix::from_rows(&[vec![2i64]]);
        assert!(GammaLattice::new(gp, a).is_err());
        let a = IntMatrix::from_rows(&[vec![3i64]]);
        assert!(GammaLattice::new(gp, a).is_err());
    }

    #[test]
    fn direct_sum_rejects_mismatched_params() {
        let a = permutation_lattice(g(3, 1), 0).unwrap();
        let b = permutation_lattice(g(5, 1), 0).unwrap();
        assert_eq!(direct_sum(&a, &b), Err(Error::MismatchedParams));
    }

    #[test]
    fn base_change_preserves_fixed_ranks() {
        let gp = g(3, 2);
        let m = direct_sum(&mab_lattice(gp, 1, 0).unwrap(), &permutation_lattice(gp, 1).unwrap()).unwrap();
        for seed in 0..10 {
            let m2 = random_unimodular_change(&m, seed);
            assert_eq!(m2.rank(), m.rank());
            assert!(m2.has_identity_order());
            for j in 0..=2 {
                assert_eq!(fixed_rank(&m2, j).unwrap(), fixed_rank(&m, j).unwrap());
            }
        }
    }
}
