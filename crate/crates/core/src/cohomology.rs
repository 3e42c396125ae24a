//! Tate cohomology of the subgroups `Γ_j` acting on a lattice, the
//! restriction and corestriction maps between consecutive levels, and the
//! Yakovlev diagram functor Δ.
//!
//! `H^1(Γ_j, M)` is computed as `ker(N_j) / (τ_j - 1) M` with `τ_j` the
//! generator of `Γ_j` and `N_j` its norm. With this model:
//!
//! * `down_i : H^1(Γ_i) → H^1(Γ_{i-1})` (restriction) is induced by the
//!   relative norm `T_i = Σ_{k<p} τ_i^k` on representatives;
//! * `up_i : H^1(Γ_{i-1}) → H^1(Γ_i)` (corestriction) is induced by the
//!   inclusion `ker N_{i-1} ⊆ ker N_i`;
//!
//! so `up_i ∘ down_i = p` on level `i` and `down_i ∘ up_i = T_i` on level `i-1`.

use num_bigint::BigInt;

use crate::diagrams::module::{FiniteGammaModule, GammaMap, Mat, Presented};
use crate::diagrams::YakovlevDiagram;
use crate::error::Result;
use crate::gamma::group_ring::{norm_element, relative_norm};
use crate::gamma::intmat::{kernel_basis, IntMatrix};
use crate::gamma::GammaLattice;

/// The model `ker(N_j) / (τ_j - 1) M` of `H^1(Γ_j, M)` on explicit bases.
#[derive(Debug, Clone)]
pub struct TateModel {
    pub level: u32,
    /// Columns: a saturated basis of `ker N_j`.
    pub kernel_basis: IntMatrix,
    /// Reads kernel coordinates off a vector of `ker N_j`.
    pub kernel_coords: IntMatrix,
    /// Columns: `(τ_j - 1) e_i` in kernel coordinates.
    pub relation_matrix: IntMatrix,
    /// σ on kernel coordinates.
    pub induced_action: IntMatrix,
    pub presented: Presented,
}

impl TateModel {
    pub fn new(m: &GammaLattice, j: u32) -> Result<Self> {
        let params = m.params();
        params.check_subgroup(j)?;
        let r = m.rank();
        let norm = m.act(&norm_element(params, j)?);
        let (k, left) = kernel_basis(&norm);
        let tau = m.subgroup_generator(j);
        let relation_matrix = left.mul(&tau.sub(&IntMatrix::identity(r)));
        let induced_action = left.mul(m.action()).mul(&k);
        let presented = FiniteGammaModule::from_presentation(params, &relation_matrix, &induced_action)?;
        Ok(TateModel { level: j, kernel_basis: k, kernel_coords: left, relation_matrix, induced_action, presented })
    }

    pub fn module(&self) -> &FiniteGammaModule {
        &self.presented.module
    }

    /// Lattice vector representing cyclic generator `k`.
    pub fn representative(&self, k: usize) -> Vec<BigInt> {
        self.kernel_basis.mul_vec(&self.presented.from_canon.column(k))
    }

    /// Class of a lattice vector lying in `ker N_j`.
    pub fn class_of(&self, v: &[BigInt]) -> Vec<i64> {
        self.presented.coords(&self.kernel_coords.mul_vec(v))
    }
}

pub fn tate_h1(m: &GammaLattice, j: u32) -> Result<FiniteGammaModule> {
    Ok(TateModel::new(m, j)?.presented.module)
}

/// `Ĥ^0(Γ_j, M) = M^{Γ_j} / N_j M`.
pub fn tate_h0(m: &GammaLattice, j: u32) -> Result<FiniteGammaModule> {
    let params = m.params();
    params.check_subgroup(j)?;
    let r = m.rank();
    let tau = m.subgroup_generator(j);
    let (fixed, left) = kernel_basis(&tau.sub(&IntMatrix::identity(r)));
    let norm = m.act(&norm_element(params, j)?);
    let relations = left.mul(&norm);
    let action = left.mul(m.action()).mul(&fixed);
    Ok(FiniteGammaModule::from_presentation(params, &relations, &action)?.module)
}

/// Builds the matrix of a map between two levels from a linear map on
/// lattice representatives.
fn induced_map(source: &TateModel, target: &TateModel, on_lattice: Option<&IntMatrix>) -> Result<GammaMap> {
    let cols: Vec<Vec<i64>> = (0..source.module().gens())
        .map(|k| {
            let v = source.representative(k);
            let w = match on_lattice {
                Some(t) => t.mul_vec(&v),
                None => v,
            };
            target.class_of(&w)
        })
        .collect();
    let tg = target.module().gens();
    let matrix: Mat = (0..tg).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
    GammaMap::new(source.module().clone(), target.module().clone(), matrix)
}

fn restriction(m: &GammaLattice, upper: &TateModel, lower: &TateModel) -> Result<GammaMap> {
    let t = m.act(&relative_norm(m.params(), upper.level)?);
    induced_map(upper, lower, Some(&t))
}

/// Restriction `H^1(Γ_i, M) → H^1(Γ_{i-1}, M)` for `i ∈ [n]`.
pub fn down_map(m: &GammaLattice, i: u32) -> Result<GammaMap> {
    m.params().check_level(i)?;
    let upper = TateModel::new(m, i)?;
    let lower = TateModel::new(m, i - 1)?;
    restriction(m, &upper, &lower)
}

/// Corestriction `H^1(Γ_{i-1}, M) → H^1(Γ_i, M)` for `i ∈ [n]`.
pub fn up_map(m: &GammaLattice, i: u32) -> Result<GammaMap> {
    m.params().check_level(i)?;
    let upper = TateModel::new(m, i)?;
    let lower = TateModel::new(m, i - 1)?;
    induced_map(&lower, &upper, None)
}

/// The Yakovlev diagram `Δ(M)`: levels `H^1(Γ_1, M) .. H^1(Γ_n, M)` with
/// the maps between consecutive levels.
pub fn yakovlev_diagram(m: &GammaLattice) -> Result<YakovlevDiagram> {
    let params = m.params();
    let models: Vec<TateModel> = (1..=params.n()).map(|j| TateModel::new(m, j)).collect::<Result<_>>()?;
    let mut ups = Vec::new();
    let mut downs = Vec::new();
    for w in models.windows(2) {
        ups.push(induced_map(&w[0], &w[1], None)?);
        downs.push(restriction(m, &w[1], &w[0])?);
    }
    let levels = models.into_iter().map(|t| t.presented.module).collect();
    YakovlevDiagram::new(params, levels, ups, downs)
}

/// Both `Ĥ^0` and `H^1` vanish at every level `j ∈ [n]`.
pub fn is_cohomologically_trivial(m: &GammaLattice) -> Result<bool> {
    for j in 1..=m.params().n() {
        if !tate_h0(m, j)?.is_zero() || !tate_h1(m, j)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}
