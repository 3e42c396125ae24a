//! Finite abelian p-groups with a Γ-action, and Γ-equivariant maps
//! between them.
//!
//! A module is stored in cyclic-decomposition form: generator `i` has order
//! `p^e_i` (`e_i ≥ 1`), σ acts by an integer matrix whose row `i` is read
//! modulo `p^e_i`. Arbitrary presentations are brought into this form by
//! [`FiniteGammaModule::from_presentation`], discarding prime-to-p parts.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::local::{cokernel_log_order, ChainRing};
use crate::error::{Error, Result};
use crate::gamma::intmat::{diagonalize, valuation, IntMatrix};
use crate::gamma::GroupParams;

pub type Mat = Vec<Vec<i64>>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteGammaModule {
    params: GroupParams,
    exponents: Vec<u32>,
    action: Mat,
}

/// A module obtained from a presentation, with the coordinate changes
/// between the presentation generators and the cyclic generators.
#[derive(Debug, Clone)]
pub struct Presented {
    pub module: FiniteGammaModule,
    /// `g' × g`: presentation coordinates to module coordinates.
    pub to_canon: IntMatrix,
    /// `g × g'`: column `k` represents cyclic generator `k`.
    pub from_canon: IntMatrix,
}

impl Presented {
    /// Module coordinates of a presentation vector.
    pub fn coords(&self, v: &[BigInt]) -> Vec<i64> {
        let y = self.to_canon.mul_vec(v);
        self.module.reduce_big(&y)
    }
}

fn modpow(p: u64, e: u32) -> i64 {
    (p as i64).pow(e)
}

fn big_mod(x: &BigInt, m: i64) -> i64 {
    x.mod_floor(&BigInt::from(m)).to_i64().expect("residue fits in i64")
}

impl FiniteGammaModule {
    pub fn zero(params: GroupParams) -> Self {
        FiniteGammaModule { params, exponents: Vec::new(), action: Vec::new() }
    }

    /// Builds a module directly from cyclic orders and an action; the action
    /// must be well defined.
    pub fn from_parts(params: GroupParams, exponents: Vec<u32>, action: Mat) -> Result<Self> {
        if exponents.contains(&0) {
            return Err(Error::InvariantViolation("cyclic generator of order 1".into()));
        }
        let mut m = FiniteGammaModule { params, exponents, action };
        if m.action.len() != m.gens() || m.action.iter().any(|r| r.len() != m.gens()) {
            return Err(Error::InvariantViolation("action matrix has wrong shape".into()));
        }
        m.action = m.reduce_matrix(&m.action);
        m.check()?;
        Ok(m)
    }

    /// `Z^g / relations` (relations as columns), localised at `p`, with σ
    /// acting by `action` on the presentation generators.
    pub fn from_presentation(params: GroupParams, relations: &IntMatrix, action: &IntMatrix) -> Result<Presented> {
        let g = relations.rows();
        if action.rows() != g || action.cols() != g {
            return Err(Error::InvariantViolation("action matrix has wrong shape".into()));
        }
        let d = diagonalize(relations);
        if d.diagonal.len() < g {
            return Err(Error::InfinitePresentation);
        }
        let p = params.p();
        let mut kept = Vec::new();
        let mut exponents = Vec::new();
        for (i, di) in d.diagonal.iter().enumerate() {
            let v = valuation(di, p);
            if v > 0 {
                kept.push(i);
                exponents.push(v);
            }
        }
        let to_canon = d.left.select_rows(&kept);
        let from_canon = d.left_inverse.select_cols(&kept);
        let raw = to_canon.mul(action).mul(&from_canon);
        let action: Mat = (0..kept.len())
            .map(|r| raw.row(r).iter().map(|x| big_mod(x, modpow(p, exponents[r]))).collect())
            .collect();
        let module = FiniteGammaModule { params, exponents, action };
        module.check()?;
        Ok(Presented { module, to_canon, from_canon })
    }

    /// The standard module `(Z/p^a)[Γ/Γ_j]`.
    pub fn standard(params: GroupParams, a: u32, j: u32) -> Result<Self> {
        params.check_subgroup(j)?;
        if a == 0 {
            return Ok(Self::zero(params));
        }
        let g = params.generator_step(j);
        let mut action = vec![vec![0; g]; g];
        for k in 0..g {
            action[(k + 1) % g][k] = 1;
        }
        Ok(FiniteGammaModule { params, exponents: vec![a; g], action })
    }

    pub fn standard_sum(params: GroupParams, parts: &[(u32, u32)]) -> Result<Self> {
        parts.iter().try_fold(Self::zero(params), |acc, &(a, j)| Ok(acc.direct_sum(&Self::standard(params, a, j)?)))
    }

    pub fn params(&self) -> GroupParams {
        self.params
    }

    pub fn gens(&self) -> usize {
        self.exponents.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn action(&self) -> &Mat {
        &self.action
    }

    pub fn is_zero(&self) -> bool {
        self.exponents.is_empty()
    }

    /// `log_p |X|`.
    pub fn log_order(&self) -> u64 {
        self.exponents.iter().map(|&e| e as u64).sum()
    }

    /// Smallest `e` with `p^e X = 0`.
    pub fn exponent(&self) -> u32 {
        self.exponents.iter().copied().max().unwrap_or(0)
    }

    /// Generator-order matrix: the columns `p^e_i · x_i` as relations.
    pub fn relations(&self) -> IntMatrix {
        let g = self.gens();
        let mut r = IntMatrix::zeros(g, g);
        for (i, &e) in self.exponents.iter().enumerate() {
            r[(i, i)] = BigInt::from(modpow(self.params.p(), e));
        }
        r
    }

    pub fn modulus(&self, i: usize) -> i64 {
        modpow(self.params.p(), self.exponents[i])
    }

    pub fn reduce(&self, v: &[i128]) -> Vec<i64> {
        v.iter().enumerate().map(|(i, &x)| x.rem_euclid(self.modulus(i) as i128) as i64).collect()
    }

    pub fn reduce_big(&self, v: &[BigInt]) -> Vec<i64> {
        v.iter().enumerate().map(|(i, x)| big_mod(x, self.modulus(i))).collect()
    }

    /// Reduces row `i` of a matrix with this module as codomain.
    pub fn reduce_matrix(&self, m: &Mat) -> Mat {
        m.iter()
            .enumerate()
            .map(|(i, row)| row.iter().map(|&x| x.rem_euclid(self.modulus(i))).collect())
            .collect()
    }

    pub fn is_zero_vector(&self, v: &[i64]) -> bool {
        v.iter().enumerate().all(|(i, &x)| x.rem_euclid(self.modulus(i)) == 0)
    }

    /// `left · right`, reduced into this module (the codomain of `left`).
    pub fn compose(&self, left: &Mat, right: &Mat, inner: usize, cols: usize) -> Mat {
        (0..self.gens())
            .map(|r| {
                let m = self.modulus(r) as i128;
                (0..cols)
                    .map(|c| {
                        let s: i128 = (0..inner).map(|k| left[r][k] as i128 * right[k][c] as i128).sum();
                        s.rem_euclid(m) as i64
                    })
                    .collect()
            })
            .collect()
    }

    pub fn identity_matrix(&self) -> Mat {
        let g = self.gens();
        (0..g).map(|i| (0..g).map(|j| i64::from(i == j)).collect()).collect()
    }

    /// Matrix of `σ^k`.
    pub fn action_power(&self, mut k: u64) -> Mat {
        let g = self.gens();
        let mut acc = self.identity_matrix();
        let mut base = self.action.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.compose(&acc, &base, g, g);
            }
            k >>= 1;
            if k > 0 {
                base = self.compose(&base, &base, g, g);
            }
        }
        acc
    }

    /// Matrix of the group ring element `Σ_{k < count} σ^(k·step)`.
    pub fn orbit_sum(&self, step: u64, count: u64) -> Mat {
        let g = self.gens();
        let tau = self.action_power(step);
        let mut acc = vec![vec![0i64; g]; g];
        let mut power = self.identity_matrix();
        for _ in 0..count {
            for r in 0..g {
                for c in 0..g {
                    acc[r][c] += power[r][c];
                }
            }
            power = self.compose(&power, &tau, g, g);
        }
        self.reduce_matrix(&acc)
    }

    /// Checks that every matrix column `c`, scaled by the order of source
    /// generator `c`, vanishes here.
    pub fn accepts_columns(&self, m: &Mat, source_exponents: &[u32]) -> bool {
        let p = self.params.p() as i128;
        (0..self.gens()).all(|r| {
            let modr = self.modulus(r) as i128;
            source_exponents
                .iter()
                .enumerate()
                .all(|(c, &e)| (m[r][c] as i128 * p.pow(e)).rem_euclid(modr) == 0)
        })
    }

    fn check(&self) -> Result<()> {
        if !self.accepts_columns(&self.action, &self.exponents) {
            return Err(Error::InvariantViolation("σ does not preserve the relations".into()));
        }
        let top = self.action_power(self.params.order() as u64);
        if top != self.reduce_matrix(&self.identity_matrix()) {
            return Err(Error::InvariantViolation("σ^(p^n) does not act trivially".into()));
        }
        Ok(())
    }

    pub fn direct_sum(&self, other: &FiniteGammaModule) -> FiniteGammaModule {
        assert_eq!(self.params, other.params, "direct sum of modules over different groups");
        let (g1, g2) = (self.gens(), other.gens());
        let mut action = vec![vec![0i64; g1 + g2]; g1 + g2];
        for r in 0..g1 {
            action[r][..g1].copy_from_slice(&self.action[r]);
        }
        for r in 0..g2 {
            action[g1 + r][g1..].copy_from_slice(&other.action[r]);
        }
        let mut exponents = self.exponents.clone();
        exponents.extend_from_slice(&other.exponents);
        FiniteGammaModule { params: self.params, exponents, action }
    }

    /// The chain ring `Z/p^E` with `E` the exponent of this module (at least 1).
    pub fn ring(&self) -> ChainRing {
        ChainRing::new(self.params.p(), self.exponent().max(1))
    }

    /// `log_p |X / (relations + span(extra))|` for extra columns given as
    /// a `g × k` matrix.
    pub fn quotient_log_order(&self, extra: &Mat, k: usize) -> u64 {
        let g = self.gens();
        if g == 0 {
            return 0;
        }
        let ring = self.ring();
        let rows: Mat = (0..g)
            .map(|r| {
                let mut row: Vec<i64> = (0..g).map(|c| if c == r { self.modulus(r) } else { 0 }).collect();
                row.extend((0..k).map(|c| extra[r][c]));
                row
            })
            .collect();
        cokernel_log_order(&ring, &rows, g, g + k)
    }

    /// `log_p |X / (p^a X + (σ^(p^(n-j)) - 1) X)|`.
    pub fn coinvariant_log(&self, a: u32, j: u32) -> u64 {
        let g = self.gens();
        let pa = (self.params.p() as i128).pow(a);
        let tau = self.action_power(self.params.generator_step(j) as u64);
        let mut extra = vec![vec![0i64; 2 * g]; g];
        for r in 0..g {
            let m = self.modulus(r) as i128;
            extra[r][r] = pa.rem_euclid(m) as i64;
            for c in 0..g {
                let v = tau[r][c] as i128 - i128::from(r == c);
                extra[r][g + c] = v.rem_euclid(m) as i64;
            }
        }
        self.quotient_log_order(&extra, 2 * g)
    }

    /// Abelian group type as ascending p-power invariant factors.
    pub fn snf_invariants(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.exponents.iter().map(|&e| self.params.pow(e)).collect();
        v.sort_unstable();
        v
    }

    /// Quotient by the submodule spanned by the columns of `gens` (`g × k`),
    /// returning the quotient with the projection matrix and a lift matrix
    /// (column `c` represents quotient generator `c` in this module).
    pub fn quotient(&self, gens: &Mat, k: usize) -> Result<(FiniteGammaModule, Mat, Mat)> {
        let g = self.gens();
        let mut rel = self.relations();
        let mut extra = IntMatrix::zeros(g, k);
        for r in 0..g {
            for c in 0..k {
                extra[(r, c)] = BigInt::from(gens[r][c]);
            }
        }
        rel = rel.hstack(&extra);
        let action = IntMatrix::from_rows(&self.action);
        let pres = Self::from_presentation(self.params, &rel, &action)?;
        let proj = to_i64_reduced(&pres.to_canon, &pres.module);
        let lift: Mat = (0..g)
            .map(|r| (0..pres.module.gens()).map(|c| big_mod(&pres.from_canon[(r, c)], self.modulus(r))).collect())
            .collect();
        Ok((pres.module, proj, lift))
    }
}

/// Reduces an integer matrix row-wise into the given codomain.
pub fn to_i64_reduced(m: &IntMatrix, codomain: &FiniteGammaModule) -> Mat {
    (0..m.rows())
        .map(|r| m.row(r).iter().map(|x| big_mod(x, codomain.modulus(r))).collect())
        .collect()
}

/// A Γ-equivariant homomorphism of finite modules, as the matrix of
/// generator images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaMap {
    source: FiniteGammaModule,
    target: FiniteGammaModule,
    matrix: Mat,
}

impl GammaMap {
    /// Validates that relations map into relations and that the map
    /// commutes with σ.
    pub fn new(source: FiniteGammaModule, target: FiniteGammaModule, matrix: Mat) -> Result<Self> {
        let map = Self::new_unchecked(source, target, matrix)?;
        if !map.target.accepts_columns(&map.matrix, map.source.exponents()) {
            return Err(Error::InvariantViolation("map does not respect relations".into()));
        }
        let (gs, gt) = (map.source.gens(), map.target.gens());
        let lhs = map.target.compose(&map.matrix, map.source.action(), gs, gs);
        let rhs = map.target.compose(map.target.action(), &map.matrix, gt, gs);
        if lhs != rhs {
            return Err(Error::InvariantViolation("map is not Γ-equivariant".into()));
        }
        Ok(map)
    }

    pub(crate) fn new_unchecked(source: FiniteGammaModule, target: FiniteGammaModule, matrix: Mat) -> Result<Self> {
        if source.params() != target.params() {
            return Err(Error::MismatchedParams);
        }
        if matrix.len() != target.gens() || matrix.iter().any(|r| r.len() != source.gens()) {
            return Err(Error::InvariantViolation("map matrix has wrong shape".into()));
        }
        let matrix = target.reduce_matrix(&matrix);
        Ok(GammaMap { source, target, matrix })
    }

    pub fn zero(source: FiniteGammaModule, target: FiniteGammaModule) -> Self {
        let matrix = vec![vec![0; source.gens()]; target.gens()];
        GammaMap { source, target, matrix }
    }

    pub fn identity(module: FiniteGammaModule) -> Self {
        let matrix = module.identity_matrix();
        GammaMap { source: module.clone(), target: module, matrix }
    }

    /// The endomorphism given by a matrix on a single module.
    pub fn endomorphism(module: &FiniteGammaModule, matrix: Mat) -> Result<Self> {
        Self::new(module.clone(), module.clone(), matrix)
    }

    pub fn source(&self) -> &FiniteGammaModule {
        &self.source
    }

    pub fn target(&self) -> &FiniteGammaModule {
        &self.target
    }

    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &GammaMap) -> GammaMap {
        assert_eq!(first.target, self.source, "composition of incompatible maps");
        let matrix = self.target.compose(&self.matrix, &first.matrix, self.source.gens(), first.source.gens());
        GammaMap { source: first.source.clone(), target: self.target.clone(), matrix }
    }

    pub fn scaled(&self, k: i64) -> GammaMap {
        let m: Mat = self.matrix.iter().map(|r| r.iter().map(|&x| x * k).collect()).collect();
        GammaMap { source: self.source.clone(), target: self.target.clone(), matrix: self.target.reduce_matrix(&m) }
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().all(|r| r.iter().all(|&x| x == 0))
    }

    /// `log_p` of the order of the image.
    pub fn image_log_order(&self) -> u64 {
        let coker = self.target.quotient_log_order(&self.matrix, self.source.gens());
        self.target.log_order() - coker
    }

    pub fn is_injective(&self) -> bool {
        self.image_log_order() == self.source.log_order()
    }

    pub fn is_bijective(&self) -> bool {
        self.source.log_order() == self.target.log_order() && self.is_injective()
    }
}

/// Maps between direct sums, block diagonal.
pub fn block_map(f: &GammaMap, g: &GammaMap) -> GammaMap {
    let source = f.source.direct_sum(&g.source);
    let target = f.target.direct_sum(&g.target);
    let (fs, ft) = (f.source.gens(), f.target.gens());
    let mut matrix = vec![vec![0i64; source.gens()]; target.gens()];
    for r in 0..ft {
        matrix[r][..fs].copy_from_slice(&f.matrix[r]);
    }
    for r in 0..g.target.gens() {
        matrix[ft + r][fs..].copy_from_slice(&g.matrix[r]);
    }
    GammaMap { source, target, matrix }
}

/// Returns the multiset `{(a, j)}` with `X ≅ ⊕ (Z/p^a)[Γ/Γ_j]`, or `None`
/// when `X` is not recognised as such a sum.
///
/// The counts are solved from the coinvariant sizes
/// `L(a, j) = Σ m_{a',j'} · min(a, a') · p^(n - max(j, j'))`
/// by differencing in `a` and then in `j`.
pub fn recognize_standard_sum(x: &FiniteGammaModule) -> Option<Vec<(u32, u32)>> {
    let params = x.params();
    if x.is_zero() {
        return Some(Vec::new());
    }
    let n = params.n();
    let top = x.exponent().max(n);
    let p = params.p() as i64;
    // grid[a][j] for a in 0..=top+1
    let mut grid = vec![vec![0i64; n as usize + 1]; top as usize + 2];
    for a in 1..=top {
        for j in 0..=n {
            grid[a as usize][j as usize] = x.coinvariant_log(a, j) as i64;
        }
    }
    for j in 0..=n as usize {
        grid[top as usize + 1][j] = grid[top as usize][j];
    }
    let first_diff = |a: usize, j: usize| grid[a][j] - grid[a - 1][j];
    let mut parts = Vec::new();
    for a in 1..=top as usize {
        let h: Vec<i64> = (0..=n as usize)
            .map(|j| {
                let next = if a < top as usize + 1 { first_diff(a + 1, j) } else { 0 };
                first_diff(a, j) - next
            })
            .collect();
        let mut cumulative = Vec::with_capacity(n as usize + 1);
        for j in 0..n as usize {
            let w = p.pow(n - j as u32) - p.pow(n - j as u32 - 1);
            let diff = h[j] - h[j + 1];
            if diff % w != 0 {
                return None;
            }
            cumulative.push(diff / w);
        }
        cumulative.push(h[n as usize]);
        let mut prev = 0;
        for (j, &s) in cumulative.iter().enumerate() {
            let m = s - prev;
            if m < 0 {
                return None;
            }
            for _ in 0..m {
                parts.push((a as u32, j as u32));
            }
            prev = s;
        }
    }
    let candidate = FiniteGammaModule::standard_sum(params, &parts).ok()?;
    if candidate.log_order() != x.log_order()
        || candidate.snf_invariants() != x.snf_invariants()
        || candidate.coinvariant_log(1, n) != x.coinvariant_log(1, n)
    {
        return None;
    }
    parts.sort_unstable();
    Some(parts)
}

/// Convenience for tests and presentations written with small integers.
pub fn int_matrix(rows: &[Vec<i64>]) -> IntMatrix {
    if rows.is_empty() {
        return IntMatrix::zeros(0, 0);
    }
    IntMatrix::from_rows(rows)
}
