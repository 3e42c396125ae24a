//! Linear algebra over the chain ring `Z/p^E`.
//!
//! Every ideal is `p^k Z/p^E`, so a matrix can be diagonalised by pivoting on
//! an entry of minimal valuation. This is the workhorse for homomorphism
//! spaces and quotient orders of finite p-groups.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainRing {
    p: i64,
    exponent: u32,
    modulus: i64,
}

impl ChainRing {
    pub fn new(p: u64, exponent: u32) -> Self {
        let modulus = (p as i64).checked_pow(exponent).expect("modulus overflows i64");
        assert!(modulus < 1 << 40, "modulus p^E too large for the chain ring");
        ChainRing { p: p as i64, exponent, modulus }
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn modulus(&self) -> i64 {
        self.modulus
    }

    pub fn reduce(&self, x: i64) -> i64 {
        x.rem_euclid(self.modulus)
    }

    pub fn mul(&self, a: i64, b: i64) -> i64 {
        ((a as i128 * b as i128).rem_euclid(self.modulus as i128)) as i64
    }

    pub fn pow_p(&self, k: u32) -> i64 {
        if k >= self.exponent { 0 } else { self.p.pow(k) }
    }

    /// Valuation of a residue; `exponent` for zero.
    pub fn valuation(&self, x: i64) -> u32 {
        let mut x = self.reduce(x);
        if x == 0 {
            return self.exponent;
        }
        let mut v = 0;
        while x % self.p == 0 {
            x /= self.p;
            v += 1;
        }
        v
    }

    pub fn inverse(&self, u: i64) -> i64 {
        let (mut r0, mut r1) = (self.modulus, self.reduce(u));
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        assert_eq!(r0, 1, "{u} is not a unit modulo {}", self.modulus);
        self.reduce(t0)
    }
}

/// Result of diagonalising an `m × N` matrix: the valuations of the pivots
/// and the column transform `V` (so `U A V = diag(p^k_0, ...)`).
#[derive(Debug, Clone)]
pub struct LocalDiagonal {
    pub pivots: Vec<u32>,
    pub column_transform: Vec<Vec<i64>>,
}

pub fn diagonalize(ring: &ChainRing, matrix: &[Vec<i64>], ncols: usize, track_columns: bool) -> LocalDiagonal {
    let mut a: Vec<Vec<i64>> = matrix
        .iter()
        .map(|row| {
            assert_eq!(row.len(), ncols);
            row.iter().map(|&x| ring.reduce(x)).collect()
        })
        .collect();
    let m = a.len();
    let mut v: Vec<Vec<i64>> = if track_columns {
        (0..ncols).map(|i| (0..ncols).map(|j| i64::from(i == j)).collect()).collect()
    } else {
        Vec::new()
    };
    let mut pivots = Vec::new();
    for t in 0..m.min(ncols) {
        let mut best: Option<(usize, usize, u32)> = None;
        'search: for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x == 0 {
                    continue;
                }
                let val = ring.valuation(x);
                if best.map_or(true, |(_, _, bv)| val < bv) {
                    best = Some((i, j, val));
                    if val == 0 {
                        break 'search;
                    }
                }
            }
        }
        let Some((i, j, k)) = best else { break };
        a.swap(t, i);
        for row in a.iter_mut() {
            row.swap(t, j);
        }
        if track_columns {
            for row in v.iter_mut() {
                row.swap(t, j);
            }
        }
        let pk = ring.pow_p(k);
        let unit = a[t][t] / pk;
        let uinv = ring.inverse(unit);
        for row in a.iter_mut() {
            row[t] = ring.mul(row[t], uinv);
        }
        if track_columns {
            for row in v.iter_mut() {
                row[t] = ring.mul(row[t], uinv);
            }
        }
        debug_assert_eq!(a[t][t], pk);
        // clear row t with column operations
        for c in t + 1..ncols {
            let x = a[t][c];
            if x == 0 {
                continue;
            }
            let q = x / pk;
            for row in a.iter_mut() {
                row[c] = ring.reduce(row[c] - ring.mul(q, row[t]));
            }
            if track_columns {
                for row in v.iter_mut() {
                    row[c] = ring.reduce(row[c] - ring.mul(q, row[t]));
                }
            }
        }
        // clear column t with row operations (only column t is affected)
        for r in t + 1..m {
            let x = a[r][t];
            if x != 0 {
                let q = x / pk;
                let pivot_row = a[t].clone();
                for (c, y) in a[r].iter_mut().enumerate() {
                    *y = ring.reduce(*y - ring.mul(q, pivot_row[c]));
                }
            }
        }
        pivots.push(k);
    }
    LocalDiagonal { pivots, column_transform: v }
}

/// Generators of the solution module `{y : A y ≡ 0 (mod p^E)}` and the
/// base-p logarithm of its order.
#[derive(Debug, Clone)]
pub struct SolutionModule {
    pub generators: Vec<Vec<i64>>,
    pub log_order: u64,
}

pub fn solve_homogeneous(ring: &ChainRing, equations: &[Vec<i64>], nvars: usize) -> SolutionModule {
    let d = diagonalize(ring, equations, nvars, true);
    let e = ring.exponent();
    let rank = d.pivots.len();
    let mut generators = Vec::new();
    let mut log_order = 0u64;
    for t in 0..nvars {
        let scale = if t < rank {
            let k = d.pivots[t];
            log_order += k as u64;
            if k == 0 {
                continue;
            }
            ring.pow_p(e - k)
        } else {
            log_order += e as u64;
            1
        };
        generators.push((0..nvars).map(|r| ring.mul(d.column_transform[r][t], scale)).collect());
    }
    SolutionModule { generators, log_order }
}

/// Base-p logarithm of the order of the cokernel of `A: (Z/p^E)^N → (Z/p^E)^m`.
pub fn cokernel_log_order(ring: &ChainRing, matrix: &[Vec<i64>], nrows: usize, ncols: usize) -> u64 {
    let d = diagonalize(ring, matrix, ncols, false);
    let pivot_sum: u64 = d.pivots.iter().map(|&k| k as u64).sum();
    pivot_sum + ring.exponent() as u64 * (nrows - d.pivots.len()) as u64
}
