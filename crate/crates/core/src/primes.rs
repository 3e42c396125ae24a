//! Primes `q ≡ 1 (mod p)` with `q ≢ 1 (mod p²)` for which `p` is not a
//! `p`-th power modulo `q`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Minimum number of primes `≡ 1 (mod p)` a density estimate must scan.
pub const MIN_DENSITY_SAMPLE: usize = 200;

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin; the first twelve prime bases are a proven
/// witness set for every 64-bit integer.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn check_p(p: u64) -> Result<()> {
    if p < 3 || !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(())
}

/// `q ≡ 1 (mod p)`, `q ≢ 1 (mod p²)` and `p^((q-1)/p) ≢ 1 (mod q)`.
///
/// When `q ≡ 1 (mod p)` the unit group mod `q` is cyclic of order divisible
/// by `p`, so the exponent test decides whether `p` is a `p`-th power.
pub fn is_qualifying(p: u64, q: u64) -> Result<bool> {
    check_p(p)?;
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if q == p || q % p != 1 {
        return Ok(false);
    }
    if let Some(p2) = p.checked_mul(p) {
        if q % p2 == 1 {
            return Ok(false);
        }
    }
    Ok(pow_mod(p, (q - 1) / p, q) != 1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeSearchResult {
    pub p: u64,
    pub bound: u64,
    pub qualifying: Vec<u64>,
    /// Number of primes `≡ 1 (mod p)` below `bound`.
    pub scanned: usize,
}

/// All qualifying primes strictly below `bound`, ascending.
pub fn find_qualifying(p: u64, bound: u64) -> Result<PrimeSearchResult> {
    check_p(p)?;
    if bound < p {
        return Err(Error::InvalidParams(format!("bound {bound} is below p = {p}")));
    }
    let mut qualifying = Vec::new();
    let mut scanned = 0;
    let mut q = p + 1;
    while q < bound {
        if is_prime(q) {
            scanned += 1;
            if is_qualifying(p, q)? {
                qualifying.push(q);
            }
        }
        q += p;
    }
    Ok(PrimeSearchResult { p, bound, qualifying, scanned })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub p: u64,
    pub bound: u64,
    pub scanned: usize,
    pub qualifying: usize,
    pub observed: f64,
    /// Two independent index-`p` Frobenius conditions: `(1 - 1/p)²`.
    pub predicted: f64,
}

pub fn density_report(p: u64, bound: u64) -> Result<DensityReport> {
    let search = find_qualifying(p, bound)?;
    if search.scanned < MIN_DENSITY_SAMPLE {
        return Err(Error::InsufficientSample { found: search.scanned, required: MIN_DENSITY_SAMPLE });
    }
    let observed = search.qualifying.len() as f64 / search.scanned as f64;
    let predicted = (1.0 - 1.0 / p as f64).powi(2);
    Ok(DensityReport { p, bound, scanned: search.scanned, qualifying: search.qualifying.len(), observed, predicted })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes() {
        let ps: Vec<u64> = (0..50).filter(|&x| is_prime(x)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]);
        assert!(is_prime(18446744073709551557));
        assert!(!is_prime(3215031751)); // strong pseudoprime to bases 2, 3, 5, 7
    }

    #[test]
    fn qualifying_examples() {
        assert!(!is_qualifying(3, 19).unwrap());
        assert!(is_qualifying(3, 7).unwrap());
        assert!(is_qualifying(3, 13).unwrap());
        assert!(!is_qualifying(3, 5).unwrap());
        assert_eq!(is_qualifying(3, 21), Err(Error::NotPrime(21)));
        assert_eq!(is_qualifying(9, 7), Err(Error::NotPrime(9)));
    }

    #[test]
    fn search_below_forty() {
        assert_eq!(find_qualifying(3, 40).unwrap().qualifying, vec![7, 13, 31]);
        assert!(find_qualifying(3, 7).unwrap().qualifying.is_empty());
    }

    #[test]
    fn density_needs_samples() {
        assert!(matches!(density_report(3, 100), Err(Error::InsufficientSample { .. })));
    }
}
