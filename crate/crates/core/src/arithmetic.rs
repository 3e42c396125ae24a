//! Predicted S-unit structure of a cyclic p-extension from its ramification
//! and splitting data.
//!
//! Subgroups of the cyclic Γ are identified with their orders, so products
//! and intersections of subgroups become maxima and minima of orders.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::diagrams::module::{to_i64_reduced, FiniteGammaModule, GammaMap, Mat, Presented};
use crate::diagrams::{lemma_diagram, subtract_library, Remainder, YakovlevDiagram};
use crate::error::{Error, Result};
use crate::gamma::intmat::IntMatrix;
use crate::gamma::{fixed_rank, mab_lattice, GroupParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    HilbertCyclic,
    General,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RamifiedPlace {
    pub inertia_order: u64,
    pub decomposition_order: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionDatum {
    pub p: u64,
    pub n: u32,
    pub r1: u64,
    pub r2: u64,
    pub ramified: Vec<RamifiedPlace>,
    /// `s_counts[j]` counts S-places with decomposition group `Γ_j`.
    pub s_counts: Vec<u64>,
    pub regime: Regime,
    #[serde(rename = "all_S_split", default, skip_serializing_if = "Option::is_none")]
    pub all_s_split: Option<bool>,
}

impl ExtensionDatum {
    pub fn params(&self) -> Result<GroupParams> {
        GroupParams::new(self.p, self.n)
    }

    /// Re-checks every datum invariant and returns the group.
    pub fn validate(&self) -> Result<GroupParams> {
        let params = self.params()?;
        let bad = |msg: String| Err(Error::InvalidDatum(msg));
        if self.r1 + self.r2 == 0 {
            return bad("r1 + r2 must be positive".into());
        }
        if self.s_counts.len() != self.n as usize + 1 {
            return bad(format!("s_counts needs {} entries, got {}", self.n + 1, self.s_counts.len()));
        }
        for (k, place) in self.ramified.iter().enumerate() {
            let (Some(a), Some(g)) = (params.log(place.inertia_order), params.log(place.decomposition_order)) else {
                return bad(format!("ramified place {k}: orders must be powers of p"));
            };
            if a == 0 {
                return bad(format!("ramified place {k}: inertia order must be at least p"));
            }
            if a > g || g > self.n {
                return bad(format!("ramified place {k}: need inertia | decomposition | p^n"));
            }
        }
        if let Some(flag) = self.all_s_split {
            if flag != self.derived_all_split() {
                return bad("all_S_split contradicts s_counts".into());
            }
        }
        Ok(params)
    }

    fn derived_all_split(&self) -> bool {
        self.s_counts.iter().skip(1).all(|&s| s == 0)
    }

    /// `rk(U_K) = r1 + r2 - 1`.
    pub fn unit_rank(&self) -> u64 {
        self.r1 + self.r2 - 1
    }

    pub fn s_size(&self) -> u64 {
        self.s_counts.iter().sum()
    }

    /// Largest inertia order `|Γ'|` (1 when unramified).
    pub fn max_inertia(&self) -> u64 {
        self.ramified.iter().map(|r| r.inertia_order).max().unwrap_or(1)
    }

    /// `|G(S)|`: largest decomposition order among S-places (1 if none).
    pub fn s_decomposition(&self) -> u64 {
        (0..self.s_counts.len()).rev().find(|&j| self.s_counts[j] > 0).map_or(1, |j| self.p.pow(j as u32))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpsilonStats {
    /// Places per `(|I|, |G|)` type.
    pub counts: BTreeMap<(u64, u64), u64>,
    /// Types realized by at least three places.
    pub upsilon: Vec<(u64, u64)>,
    /// Number of places whose type lies in Υ.
    pub r3: u64,
}

impl UpsilonStats {
    /// `2|Υ| - |R3|`.
    pub fn balance(&self) -> i64 {
        2 * self.upsilon.len() as i64 - self.r3 as i64
    }
}

pub fn upsilon_stats(datum: &ExtensionDatum) -> UpsilonStats {
    let mut counts = BTreeMap::new();
    for r in &datum.ramified {
        *counts.entry((r.inertia_order, r.decomposition_order)).or_insert(0) += 1;
    }
    let upsilon: Vec<(u64, u64)> = counts.iter().filter(|(_, &t)| t >= 3).map(|(&k, _)| k).collect();
    let r3 = upsilon.iter().map(|k| counts[k]).sum();
    UpsilonStats { counts, upsilon, r3 }
}

/// Predicted `rk U^{Γ_j}` for `j = 0..n`.
pub fn character_ranks(datum: &ExtensionDatum) -> Result<Vec<i64>> {
    let params = datum.validate()?;
    let n = params.n();
    Ok((0..=n)
        .map(|j| {
            let arch = (datum.r1 + datum.r2) as i64 * params.pow(n - j) as i64;
            let s: i64 = (0..=n).map(|i| datum.s_counts[i as usize] as i64 * params.pow(n - i.max(j)) as i64).sum();
            arch + s - 1
        })
        .collect())
}

fn require_hilbert_cyclic(datum: &ExtensionDatum) -> Result<GroupParams> {
    let params = datum.validate()?;
    if datum.regime != Regime::HilbertCyclic {
        return Err(Error::UnsupportedRegime("the General regime has no explicit W_J presentation".into()));
    }
    Ok(params)
}

/// Relation constants of `W_J` for one place at level `j`.
struct PlaceConstants {
    /// `|J ∩ I|`.
    j0: u64,
    /// `e(J, 𝔭)`.
    e: u64,
    /// Orbit length `|Γ / (G J)|` of `X`.
    orbit: usize,
}

struct LevelConstants {
    /// `|A_{E,S}|`.
    a: u64,
    places: Vec<PlaceConstants>,
}

fn level_constants(datum: &ExtensionDatum, params: GroupParams, j: u32) -> LevelConstants {
    let pj = params.pow(j);
    let t = datum.max_inertia().max(datum.s_decomposition());
    let top = pj.max(t);
    let places = datum
        .ramified
        .iter()
        .map(|r| PlaceConstants {
            j0: pj.min(r.inertia_order),
            e: top / pj.min(r.decomposition_order).max(t),
            orbit: (params.order() as u64 / r.decomposition_order.max(pj)) as usize,
        })
        .collect();
    LevelConstants { a: top / t, places }
}

/// Presentation data for `W_J`: generator 0 is `Y`, then the `σ`-translates
/// of each `X_𝔭`.
struct WjData {
    relations: IntMatrix,
    action: IntMatrix,
    /// First generator index of each place.
    offsets: Vec<usize>,
    orbits: Vec<usize>,
}

fn wj_data(datum: &ExtensionDatum, params: GroupParams, j: u32) -> WjData {
    let c = level_constants(datum, params, j);
    let mut offsets = Vec::new();
    let mut g = 1;
    for pc in &c.places {
        offsets.push(g);
        g += pc.orbit;
    }
    let mut rel_cols: Vec<Vec<i64>> = Vec::new();
    let mut y = vec![0i64; g];
    y[0] = c.a as i64;
    rel_cols.push(y);
    let mut action = vec![vec![0i64; g]; g];
    action[0][0] = 1;
    for (pc, &off) in c.places.iter().zip(&offsets) {
        for k in 0..pc.orbit {
            let mut col = vec![0i64; g];
            col[off + k] = pc.j0 as i64;
            col[0] = -(pc.e as i64);
            rel_cols.push(col);
            action[off + (k + 1) % pc.orbit][off + k] = 1;
        }
    }
    let cols: Vec<Vec<BigInt>> =
        rel_cols.iter().map(|c| c.iter().map(|&x| x.into()).collect()).collect();
    WjData {
        relations: IntMatrix::from_columns(g, &cols),
        action: IntMatrix::from_rows(&action),
        offsets,
        orbits: c.places.iter().map(|pc| pc.orbit).collect(),
    }
}

/// `W_{Γ_j}` for the ramified HilbertCyclic regime.
pub fn wj_presentation(datum: &ExtensionDatum, j: u32) -> Result<FiniteGammaModule> {
    let params = require_hilbert_cyclic(datum)?;
    params.check_subgroup(j)?;
    if datum.ramified.is_empty() {
        return Err(Error::UnsupportedRegime("W_J needs at least one ramified place".into()));
    }
    let w = wj_data(datum, params, j);
    Ok(FiniteGammaModule::from_presentation(params, &w.relations, &w.action)?.module)
}

/// Images of the presentation generators of level `j` under the down map
/// to level `j - 1` (`down = true`) or of level `j - 1` under the up map.
fn transition(datum: &ExtensionDatum, params: GroupParams, j: u32, upper: &WjData, lower: &WjData, down: bool) -> Vec<Vec<i64>> {
    let p = params.p() as i64;
    let (src, tgt) = if down { (upper, lower) } else { (lower, upper) };
    let gs = src.relations.rows();
    let gt = tgt.relations.rows();
    let mut m = vec![vec![0i64; gs]; gt];
    m[0][0] = if down { 1 } else { p };
    let step = params.generator_step(j);
    for (idx, r) in datum.ramified.iter().enumerate() {
        let inside = params.pow(j) <= r.decomposition_order;
        let (so, to) = (src.offsets[idx], tgt.offsets[idx]);
        let (sm, tm) = (src.orbits[idx], tgt.orbits[idx]);
        for k in 0..sm {
            match (down, inside) {
                (_, true) => m[to + k % tm][so + k] += if down { 1 } else { p },
                (true, false) => {
                    for l in 0..params.p() as usize {
                        m[to + (k + l * step) % tm][so + k] += 1;
                    }
                }
                (false, false) => m[to + k % tm][so + k] += 1,
            }
        }
    }
    m
}

fn transport(src: &Presented, tgt: &Presented, m: &[Vec<i64>]) -> Result<GammaMap> {
    let raw = IntMatrix::from_rows(m);
    let canon = tgt.to_canon.mul(&raw).mul(&src.from_canon);
    let matrix: Mat = to_i64_reduced(&canon, &tgt.module);
    GammaMap::new(src.module.clone(), tgt.module.clone(), matrix)
}

/// The predicted Yakovlev diagram of the S-unit lattice.
pub fn predict_diagram(datum: &ExtensionDatum) -> Result<YakovlevDiagram> {
    let params = require_hilbert_cyclic(datum)?;
    let n = params.n();
    if datum.ramified.is_empty() {
        if !datum.derived_all_split() {
            return Err(Error::UnsupportedRegime(
                "unramified extension with S-places that do not split completely".into(),
            ));
        }
        // levels Z/p^i, projections down and p up
        return lemma_diagram(params, n, 0);
    }
    let data: Vec<WjData> = (0..=n).map(|j| wj_data(datum, params, j)).collect();
    let presented = data
        .iter()
        .map(|w| FiniteGammaModule::from_presentation(params, &w.relations, &w.action))
        .collect::<Result<Vec<_>>>()?;
    let mut ups = Vec::new();
    let mut downs = Vec::new();
    for j in 2..=n {
        let (lo, hi) = (j as usize - 1, j as usize);
        let up = transition(datum, params, j, &data[hi], &data[lo], false);
        let down = transition(datum, params, j, &data[hi], &data[lo], true);
        ups.push(transport(&presented[lo], &presented[hi], &up)?);
        downs.push(transport(&presented[hi], &presented[lo], &down)?);
    }
    let levels = presented.into_iter().skip(1).map(|p| p.module).collect();
    YakovlevDiagram::new(params, levels, ups, downs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Resolved,
    PartiallyResolved,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Residual {
    pub upsilon_size: u64,
    pub r3_size: u64,
    /// `rk M - rk M^{Γ_1}` for the non-guaranteed part `M` of `U†`.
    pub d_prime: i64,
    /// `t_0 (p^n - p^(n-1))`.
    pub lhs: i64,
    /// `(r1 + r2 + s_0 + 2|Υ| - |R3|)(p^n - p^(n-1)) - d'`.
    pub rhs: i64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionReport {
    /// `(a, b)` labels of `U†` with multiplicities, ascending.
    pub library_summands: Vec<((u32, u32), u64)>,
    /// `t_0 .. t_n`, unclamped.
    pub perm_multiplicities: Vec<i64>,
    pub minkowski_count: Option<i64>,
    pub residual: Option<Residual>,
    pub status: Status,
    pub diagnostics: Vec<String>,
}

fn multiset(labels: &[(u32, u32)]) -> BTreeMap<(u32, u32), u64> {
    let mut m = BTreeMap::new();
    for &l in labels {
        *m.entry(l).or_insert(0) += 1;
    }
    m
}

/// Fixed ranks `rk M_{a,b}^{Γ_j}` for `j = 0..n`.
fn library_fixed_ranks(params: GroupParams, label: (u32, u32)) -> Result<Vec<i64>> {
    let m = mab_lattice(params, label.0, label.1)?;
    (0..=params.n()).map(|j| Ok(fixed_rank(&m, j)? as i64)).collect()
}

fn summed_fixed_ranks(params: GroupParams, parts: &BTreeMap<(u32, u32), u64>) -> Result<Vec<i64>> {
    let mut total = vec![0i64; params.n() as usize + 1];
    for (&label, &mult) in parts {
        for (t, r) in total.iter_mut().zip(library_fixed_ranks(params, label)?) {
            *t += mult as i64 * r;
        }
    }
    Ok(total)
}

pub fn recover_structure(datum: &ExtensionDatum) -> Result<DecompositionReport> {
    let params = require_hilbert_cyclic(datum)?;
    let n = params.n() as usize;
    let diagram = predict_diagram(datum)?;
    let sub = subtract_library(&diagram)?;
    let summands = multiset(&sub.labels);
    let mut diagnostics = Vec::new();
    match &sub.remainder {
        Remainder::Unresolved(_) => diagnostics.push("library subtraction left an unresolved remainder".into()),
        Remainder::Resolved(d) if !d.is_zero() => diagnostics.push("diagram has a non-library remainder".into()),
        Remainder::Resolved(_) => {}
    }
    let rk = character_ranks(datum)?;
    let u = summed_fixed_ranks(params, &summands)?;
    let p = params.p() as i64;
    let mut t = vec![0i64; n + 1];
    let mut prev = 0i64;
    for j in 0..n {
        let w = p.pow((n - j) as u32) - p.pow((n - j - 1) as u32);
        let num = (rk[j] - rk[j + 1]) - (u[j] - u[j + 1]);
        if num % w != 0 {
            diagnostics.push(format!("rank difference at level {j} is not divisible by {w}"));
        }
        let partial = num.div_euclid(w);
        t[j] = partial - prev;
        prev = partial;
    }
    let weighted: i64 = (0..n).map(|i| t[i] * p.pow((n - i) as u32)).sum();
    t[n] = rk[0] - u[0] - weighted;
    if rk[n] != u[n] + t.iter().sum::<i64>() {
        diagnostics.push("fixed rank at the top level does not balance".into());
    }
    for (i, &ti) in t.iter().enumerate() {
        if ti < 0 {
            diagnostics.push(format!("negative permutation multiplicity t_{i} = {ti}"));
        }
    }
    let status = if diagnostics.is_empty() { Status::Resolved } else { Status::PartiallyResolved };
    let mut report = DecompositionReport {
        library_summands: summands.into_iter().collect(),
        perm_multiplicities: t,
        minkowski_count: None,
        residual: None,
        status,
        diagnostics,
    };
    if status == Status::Resolved {
        report.minkowski_count = Some(minkowski_count(&report)?);
        let residual = corollary_residual(datum, &report)?;
        if !residual.holds {
            report.diagnostics.push(format!("t_0 identity fails: {} != {}", residual.lhs, residual.rhs));
        }
        report.residual = Some(residual);
    }
    Ok(report)
}

/// `m = t_0`; library summands carry no free `F_p[Γ]` part.
pub fn minkowski_count(report: &DecompositionReport) -> Result<i64> {
    if report.status != Status::Resolved {
        return Err(Error::InvalidDatum("Minkowski count needs a resolved report".into()));
    }
    Ok(report.perm_multiplicities[0])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GuaranteedSummands {
    pub labels: Vec<((u32, u32), u64)>,
    /// `B_n = (n + 1)(n + 2) / 2`, the number of subgroup pairs `H ≤ H'`.
    pub subgroup_pairs: u64,
    /// `1 + 2 B_n`.
    pub remainder_bound: u64,
}

pub fn guaranteed_summands(datum: &ExtensionDatum) -> Result<GuaranteedSummands> {
    let params = datum.validate()?;
    let stats = upsilon_stats(datum);
    let mut labels = BTreeMap::new();
    for &(i, g) in &stats.upsilon {
        let a = params.log(i).expect("validated");
        let b = params.log(g).expect("validated") - a;
        *labels.entry((a, b)).or_insert(0) += stats.counts[&(i, g)] - 2;
    }
    let n = params.n() as u64;
    let bn = (n + 1) * (n + 2) / 2;
    Ok(GuaranteedSummands { labels: labels.into_iter().collect(), subgroup_pairs: bn, remainder_bound: 1 + 2 * bn })
}

/// Checks `t_0 (p^n - p^(n-1)) = (r1 + r2 + s_0 + 2|Υ| - |R3|)(p^n - p^(n-1)) - d'`.
pub fn corollary_residual(datum: &ExtensionDatum, report: &DecompositionReport) -> Result<Residual> {
    let params = datum.validate()?;
    if report.status != Status::Resolved {
        return Err(Error::InvalidDatum("residual needs a resolved report".into()));
    }
    let stats = upsilon_stats(datum);
    let mut rest: BTreeMap<(u32, u32), u64> = report.library_summands.iter().copied().collect();
    for (label, mult) in guaranteed_summands(datum)?.labels {
        let have = rest.entry(label).or_insert(0);
        if *have < mult {
            return Err(Error::InvariantViolation(format!("guaranteed summand {label:?} missing from U†")));
        }
        *have -= mult;
    }
    let ranks = summed_fixed_ranks(params, &rest)?;
    let d_prime = ranks[0] - ranks[1];
    let n = params.n();
    let w = (params.pow(n) - params.pow(n - 1)) as i64;
    let lhs = report.perm_multiplicities[0] * w;
    let rhs = (datum.r1 as i64 + datum.r2 as i64 + datum.s_counts[0] as i64 + stats.balance()) * w - d_prime;
    Ok(Residual { upsilon_size: stats.upsilon.len() as u64, r3_size: stats.r3, d_prime, lhs, rhs, holds: lhs == rhs })
}
