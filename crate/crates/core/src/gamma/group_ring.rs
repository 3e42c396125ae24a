use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::params::GroupParams;
use crate::error::Result;

/// An element `Σ c_k σ^k` of the integral group ring of Γ.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupRingElt {
    params: GroupParams,
    coeffs: Vec<BigInt>,
}

impl GroupRingElt {
    pub fn zero(params: GroupParams) -> Self {
        GroupRingElt { params, coeffs: vec![BigInt::zero(); params.order()] }
    }

    pub fn one(params: GroupParams) -> Self {
        Self::sigma_pow(params, 0)
    }

    /// The group element `σ^k` (exponent taken modulo `p^n`).
    pub fn sigma_pow(params: GroupParams, k: usize) -> Self {
        let mut x = Self::zero(params);
        x.coeffs[k % params.order()] = BigInt::one();
        x
    }

    pub fn from_coeffs(params: GroupParams, coeffs: Vec<BigInt>) -> Self {
        assert_eq!(coeffs.len(), params.order(), "coefficient vector has wrong length");
        GroupRingElt { params, coeffs }
    }

    pub fn scalar(params: GroupParams, c: impl Into<BigInt>) -> Self {
        let mut x = Self::zero(params);
        x.coeffs[0] = c.into();
        x
    }

    pub fn params(&self) -> GroupParams {
        self.params
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn augmentation(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// `σ^k · x`, a cyclic rotation of the coefficients.
    pub fn shift(&self, k: usize) -> Self {
        let n = self.coeffs.len();
        let mut coeffs = vec![BigInt::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[(i + k) % n] = c.clone();
        }
        GroupRingElt { params: self.params, coeffs }
    }
}

impl Add for &GroupRingElt {
    type Output = GroupRingElt;
    fn add(self, rhs: &GroupRingElt) -> GroupRingElt {
        assert_eq!(self.params, rhs.params);
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect();
        GroupRingElt { params: self.params, coeffs }
    }
}

impl Sub for &GroupRingElt {
    type Output = GroupRingElt;
    fn sub(self, rhs: &GroupRingElt) -> GroupRingElt {
        assert_eq!(self.params, rhs.params);
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect();
        GroupRingElt { params: self.params, coeffs }
    }
}

/// Cyclic convolution.
impl Mul for &GroupRingElt {
    type Output = GroupRingElt;
    fn mul(self, rhs: &GroupRingElt) -> GroupRingElt {
        assert_eq!(self.params, rhs.params);
        let n = self.coeffs.len();
        let mut coeffs = vec![BigInt::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[(i + j) % n] += a * b;
                }
            }
        }
        GroupRingElt { params: self.params, coeffs }
    }
}

/// The norm element `Σ_{γ ∈ Γ_j} γ = Σ_{k < p^j} σ^(k p^(n-j))`.
pub fn norm_element(params: GroupParams, j: u32) -> Result<GroupRingElt> {
    params.check_subgroup(j)?;
    let step = params.generator_step(j);
    let mut x = GroupRingElt::zero(params);
    for k in 0..params.subgroup_order(j) as usize {
        x.coeffs[k * step] = BigInt::one();
    }
    Ok(x)
}

/// The relative norm `T_i = Σ_{k < p} σ^(k p^(n-i))` for `Γ_i / Γ_{i-1}`.
pub fn relative_norm(params: GroupParams, i: u32) -> Result<GroupRingElt> {
    params.check_level(i)?;
    let step = params.generator_step(i);
    let mut x = GroupRingElt::zero(params);
    for k in 0..params.p() as usize {
        x.coeffs[k * step] = BigInt::one();
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norm_of_trivial_subgroup_is_one() {
        let g = GroupParams::new(3, 2).unwrap();
        assert_eq!(norm_element(g, 0).unwrap(), GroupRingElt::one(g));
    }

    #[test]
    fn full_norm_p3_n1() {
        let g = GroupParams::new(3, 1).unwrap();
        let expected = GroupRingElt::from_coeffs(g, vec![1.into(), 1.into(), 1.into()]);
        assert_eq!(norm_element(g, 1).unwrap(), expected);
    }

    #[test]
    fn norm_augmentation() {
        let g = GroupParams::new(5, 2).unwrap();
        for j in 0..=2 {
            assert_eq!(norm_element(g, j).unwrap().augmentation(), BigInt::from(5u64.pow(j)));
        }
        assert!(norm_element(g, 3).is_err());
    }

    #[test]
    fn norm_factors_through_relative_norms() {
        let g = GroupParams::new(3, 3).unwrap();
        for i in 1..=3 {
            let lhs = norm_element(g, i).unwrap();
            let rhs = &norm_element(g, i - 1).unwrap() * &relative_norm(g, i).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn convolution_wraps() {
        let g = GroupParams::new(3, 1).unwrap();
        let s = GroupRingElt::sigma_pow(g, 1);
        let s2 = &s * &s;
        assert_eq!(&s2 * &s, GroupRingElt::one(g));
        assert_eq!(s.shift(2), GroupRingElt::one(g));
    }
}
