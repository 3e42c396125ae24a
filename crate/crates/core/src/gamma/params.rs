use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::primes::is_prime;

/// The cyclic group Γ of order `p^n` with a fixed generator σ.
///
/// Subgroups are indexed by `j ∈ {0, ..., n}`: `Γ_j` is generated by
/// `σ^(p^(n-j))` and has order `p^j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupParams {
    p: u64,
    n: u32,
}

impl GroupParams {
    pub fn new(p: u64, n: u32) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return Err(Error::InvalidParams(format!("p = {p} must be an odd prime")));
        }
        if n == 0 {
            return Err(Error::InvalidParams("n must be positive".into()));
        }
        if p.checked_pow(n).map_or(true, |o| o > 1 << 20) {
            return Err(Error::InvalidParams(format!("group order {p}^{n} is too large")));
        }
        Ok(GroupParams { p, n })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `|Γ| = p^n`.
    pub fn order(&self) -> usize {
        self.p.pow(self.n) as usize
    }

    pub fn pow(&self, e: u32) -> u64 {
        self.p.pow(e)
    }

    /// `|Γ_j| = p^j`.
    pub fn subgroup_order(&self, j: u32) -> u64 {
        self.p.pow(j)
    }

    /// Exponent `p^(n-j)` with `σ^(p^(n-j))` generating `Γ_j`.
    pub fn generator_step(&self, j: u32) -> usize {
        self.p.pow(self.n - j) as usize
    }

    /// Checks `j ∈ [n]* = {0, ..., n}`.
    pub fn check_subgroup(&self, j: u32) -> Result<()> {
        if j > self.n {
            return Err(Error::IndexOutOfRange { index: j, range: format!("0..={}", self.n) });
        }
        Ok(())
    }

    /// Checks `i ∈ [n] = {1, ..., n}`.
    pub fn check_level(&self, i: u32) -> Result<()> {
        if i == 0 || i > self.n {
            return Err(Error::IndexOutOfRange { index: i, range: format!("1..={}", self.n) });
        }
        Ok(())
    }

    /// p-adic valuation of a nonzero integer.
    pub fn valuation(&self, mut x: u64) -> u32 {
        debug_assert!(x != 0);
        let mut v = 0;
        while x % self.p == 0 {
            x /= self.p;
            v += 1;
        }
        v
    }

    /// Returns `e` when `x = p^e`.
    pub fn log(&self, x: u64) -> Option<u32> {
        if x == 0 {
            return None;
        }
        let v = self.valuation(x);
        (self.p.pow(v) == x).then_some(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_primes() {
        assert!(GroupParams::new(2, 1).is_err());
        assert!(GroupParams::new(9, 1).is_err());
        assert!(GroupParams::new(3, 0).is_err());
        assert!(GroupParams::new(3, 3).is_ok());
    }

    #[test]
    fn subgroup_indices() {
        let g = GroupParams::new(3, 2).unwrap();
        assert_eq!(g.order(), 9);
        assert_eq!(g.generator_step(1), 3);
        assert_eq!(g.subgroup_order(2), 9);
        assert!(g.check_subgroup(3).is_err());
        assert!(g.check_level(0).is_err());
        assert_eq!(g.log(27), Some(3));
        assert_eq!(g.log(6), None);
    }
}
