//! Yakovlev diagrams: towers `A_1, .., A_n` with `up_i : A_i → A_{i+1}` and
//! `down_i : A_{i+1} → A_i`.
//!
//! Axioms (in the fixed convention): `p^i A_i = 0`, `Γ_i` acts trivially on
//! `A_i`, `down_i ∘ up_i` is the relative norm `Σ_{k<p} σ^(k p^(n-i-1))` on
//! `A_i`, and `up_i ∘ down_i = p` on `A_{i+1}`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::hom::HomSpace;
use super::module::{block_map, FiniteGammaModule, GammaMap, Mat};
use crate::error::{Error, Result};
use crate::gamma::GroupParams;

/// Default node budget of the isomorphism search.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Random witness trials per library candidate in [`subtract_library`].
const SPLIT_TRIALS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YakovlevDiagram {
    params: GroupParams,
    levels: Vec<FiniteGammaModule>,
    ups: Vec<GammaMap>,
    downs: Vec<GammaMap>,
}

impl YakovlevDiagram {
    /// Checks shapes only; the axioms are checked by [`validate_diagram`].
    pub fn new(params: GroupParams, levels: Vec<FiniteGammaModule>, ups: Vec<GammaMap>, downs: Vec<GammaMap>) -> Result<Self> {
        let n = params.n() as usize;
        if levels.len() != n || ups.len() != n - 1 || downs.len() != n - 1 {
            return Err(Error::InvariantViolation(format!(
                "diagram needs {n} levels and {} maps each way",
                n - 1
            )));
        }
        if levels.iter().any(|l| l.params() != params) {
            return Err(Error::MismatchedParams);
        }
        for i in 0..n - 1 {
            if ups[i].source() != &levels[i] || ups[i].target() != &levels[i + 1] {
                return Err(Error::InvariantViolation(format!("up_{} has the wrong endpoints", i + 1)));
            }
            if downs[i].source() != &levels[i + 1] || downs[i].target() != &levels[i] {
                return Err(Error::InvariantViolation(format!("down_{} has the wrong endpoints", i + 1)));
            }
        }
        Ok(YakovlevDiagram { params, levels, ups, downs })
    }

    pub fn zero(params: GroupParams) -> Self {
        let n = params.n() as usize;
        let z = FiniteGammaModule::zero(params);
        let maps = vec![GammaMap::zero(z.clone(), z.clone()); n - 1];
        YakovlevDiagram { params, levels: vec![z; n], ups: maps.clone(), downs: maps }
    }

    pub fn params(&self) -> GroupParams {
        self.params
    }

    /// `levels()[i]` is `A_{i+1}`.
    pub fn levels(&self) -> &[FiniteGammaModule] {
        &self.levels
    }

    /// `ups()[i] : A_{i+1} → A_{i+2}`.
    pub fn ups(&self) -> &[GammaMap] {
        &self.ups
    }

    /// `downs()[i] : A_{i+2} → A_{i+1}`.
    pub fn downs(&self) -> &[GammaMap] {
        &self.downs
    }

    pub fn is_zero(&self) -> bool {
        self.levels.iter().all(FiniteGammaModule::is_zero)
    }

    pub fn level_log_orders(&self) -> Vec<u64> {
        self.levels.iter().map(FiniteGammaModule::log_order).collect()
    }

    pub fn direct_sum(&self, other: &YakovlevDiagram) -> Result<YakovlevDiagram> {
        diagram_direct_sum(self, other)
    }
}

pub fn validate_diagram(d: &YakovlevDiagram) -> bool {
    let params = d.params;
    let n = params.n() as usize;
    for (idx, level) in d.levels.iter().enumerate() {
        let i = idx as u32 + 1;
        if level.exponent() > i {
            return false;
        }
        let tau = level.action_power(params.generator_step(i) as u64);
        if tau != level.reduce_matrix(&level.identity_matrix()) {
            return false;
        }
    }
    for f in d.ups.iter().chain(&d.downs) {
        if GammaMap::new(f.source().clone(), f.target().clone(), f.matrix().clone()).is_err() {
            return false;
        }
    }
    let p = params.p() as i64;
    for i in 0..n - 1 {
        let lower = &d.levels[i];
        let upper = &d.levels[i + 1];
        let norm = lower.orbit_sum(params.generator_step(i as u32 + 2) as u64, params.p());
        if d.downs[i].after(&d.ups[i]).matrix() != &norm {
            return false;
        }
        if d.ups[i].after(&d.downs[i]) != GammaMap::identity(upper.clone()).scaled(p) {
            return false;
        }
    }
    true
}

pub fn diagram_direct_sum(d1: &YakovlevDiagram, d2: &YakovlevDiagram) -> Result<YakovlevDiagram> {
    if d1.params != d2.params {
        return Err(Error::MismatchedParams);
    }
    let levels = d1.levels.iter().zip(&d2.levels).map(|(a, b)| a.direct_sum(b)).collect();
    let ups = d1.ups.iter().zip(&d2.ups).map(|(f, g)| block_map(f, g)).collect();
    let downs = d1.downs.iter().zip(&d2.downs).map(|(f, g)| block_map(f, g)).collect();
    YakovlevDiagram::new(d1.params, levels, ups, downs)
}

pub fn diagram_direct_sum_all(params: GroupParams, parts: &[YakovlevDiagram]) -> Result<YakovlevDiagram> {
    parts.iter().try_fold(YakovlevDiagram::zero(params), |acc, d| diagram_direct_sum(&acc, d))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IsoAnswer {
    Yes,
    No,
    Unknown,
}

fn map_type(f: &GammaMap) -> u64 {
    f.image_log_order()
}

fn cheap_invariants(d: &YakovlevDiagram) -> (Vec<Vec<u64>>, Vec<u64>, Vec<u64>) {
    let snf = d.levels.iter().map(FiniteGammaModule::snf_invariants).collect();
    (snf, d.ups.iter().map(map_type).collect(), d.downs.iter().map(map_type).collect())
}

/// `true` when each level map is bijective.
fn is_levelwise_bijective(maps: &[GammaMap]) -> bool {
    maps.iter().all(GammaMap::is_bijective)
}

/// Decides isomorphism of diagrams with the default budget and seed.
pub fn diagram_isomorphic(d1: &YakovlevDiagram, d2: &YakovlevDiagram) -> IsoAnswer {
    diagram_isomorphic_with(d1, d2, DEFAULT_BUDGET, 0)
}

/// `No` is certified by a differing invariant (level types, image orders of
/// the maps, or the orders of `Hom(D1,D2)`, `Hom(D2,D1)`, `End D1`,
/// `End D2`). `Yes` is certified by a sampled morphism that is bijective on
/// every level. Each sample costs one node per unknown.
pub fn diagram_isomorphic_with(d1: &YakovlevDiagram, d2: &YakovlevDiagram, budget: u64, seed: u64) -> IsoAnswer {
    if d1.params != d2.params {
        return IsoAnswer::No;
    }
    if cheap_invariants(d1) != cheap_invariants(d2) {
        return IsoAnswer::No;
    }
    if d1.is_zero() {
        return IsoAnswer::Yes;
    }
    let forward = HomSpace::new(d1, d2);
    let backward = HomSpace::new(d2, d1);
    let end1 = HomSpace::new(d1, d1);
    let end2 = HomSpace::new(d2, d2);
    let orders = [forward.log_order(), backward.log_order(), end1.log_order(), end2.log_order()];
    if orders.iter().any(|&o| o != orders[0]) {
        return IsoAnswer::No;
    }
    let cost = forward.unknown_count().max(1) as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut spent = 0u64;
    while spent + cost <= budget {
        spent += cost;
        if is_levelwise_bijective(&forward.sample(&mut rng)) {
            return IsoAnswer::Yes;
        }
    }
    IsoAnswer::Unknown
}

/// Sufficient criterion for indecomposability: every nonzero level has
/// coinvariants `A / (p, σ - 1) A` of order at most `p`, the nonzero levels
/// are consecutive, and between two consecutive nonzero levels at least one
/// of `up`, `down` is nonzero. The zero diagram passes vacuously.
pub fn indecomposability_certificate(d: &YakovlevDiagram) -> bool {
    let n = d.params.n();
    let nonzero: Vec<usize> = (0..d.levels.len()).filter(|&i| !d.levels[i].is_zero()).collect();
    if nonzero.iter().any(|&i| d.levels[i].coinvariant_log(1, n) > 1) {
        return false;
    }
    if nonzero.windows(2).any(|w| w[1] != w[0] + 1) {
        return false;
    }
    nonzero.windows(2).all(|w| !d.ups[w[0]].is_zero() || !d.downs[w[0]].is_zero())
}

fn identity_scaled(rows: usize, k: i64) -> Mat {
    (0..rows).map(|r| (0..rows).map(|c| if r == c { k } else { 0 }).collect()).collect()
}

/// The closed form of `Δ(M_{a,b})`:
///
/// * `A_i = (Z/p^i)[Γ/Γ_{a+b}]` for `i ≤ a`,
/// * `A_i = (Z/p^a)[Γ/Γ_{a+b}]` for `a < i ≤ a+b`,
/// * `A_i = (Z/p^a)[Γ/Γ_i]` for `i > a+b`;
///
/// into level `i` the down map is the coefficient projection or the identity
/// and the up map is `p` while `i ≤ a+b`, then the down map is the relative
/// norm on cosets and the up map the coset projection.
pub fn lemma_diagram(params: GroupParams, a: u32, b: u32) -> Result<YakovlevDiagram> {
    let n = params.n();
    if a < 1 || a + b > n {
        return Err(Error::InvalidParams(format!("M_({a},{b}) needs 1 ≤ a and a + b ≤ {n}")));
    }
    let c = a + b;
    let level = |i: u32| {
        if i <= c {
            FiniteGammaModule::standard(params, i.min(a), c)
        } else {
            FiniteGammaModule::standard(params, a, i)
        }
    };
    let levels: Vec<FiniteGammaModule> = (1..=n).map(level).collect::<Result<_>>()?;
    let p = params.p() as i64;
    let mut ups = Vec::new();
    let mut downs = Vec::new();
    for i in 2..=n {
        let lower = levels[i as usize - 2].clone();
        let upper = levels[i as usize - 1].clone();
        let (up, down) = if i <= c {
            let g = lower.gens();
            (identity_scaled(g, p), identity_scaled(g, 1))
        } else {
            let width = params.generator_step(i);
            let lower_width = params.generator_step(i - 1);
            let mut up = vec![vec![0i64; lower_width]; width];
            for k in 0..lower_width {
                up[k % width][k] = 1;
            }
            let mut down = vec![vec![0i64; width]; lower_width];
            for k in 0..width {
                for l in 0..params.p() as usize {
                    down[(k + l * width) % lower_width][k] += 1;
                }
            }
            (up, down)
        };
        ups.push(GammaMap::new(lower.clone(), upper.clone(), up)?);
        downs.push(GammaMap::new(upper, lower, down)?);
    }
    YakovlevDiagram::new(params, levels, ups, downs)
}

/// All library labels `(a, b)` with `a ≥ 1`, `a + b ≤ n`, in extraction
/// order: larger total order first, then lexicographic.
pub fn library_labels(params: GroupParams) -> Result<Vec<((u32, u32), YakovlevDiagram)>> {
    let n = params.n();
    let mut out = Vec::new();
    for a in 1..=n {
        for b in 0..=(n - a) {
            out.push(((a, b), lemma_diagram(params, a, b)?));
        }
    }
    out.sort_by(|(l1, d1), (l2, d2)| {
        let o1: u64 = d1.level_log_orders().iter().sum();
        let o2: u64 = d2.level_log_orders().iter().sum();
        o2.cmp(&o1).then(l1.cmp(l2))
    });
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Remainder {
    /// No library diagram can be split off the remaining diagram.
    Resolved(YakovlevDiagram),
    /// A candidate passed every cheap test but no splitting was found.
    Unresolved(YakovlevDiagram),
}

impl Remainder {
    pub fn diagram(&self) -> &YakovlevDiagram {
        match self {
            Remainder::Resolved(d) | Remainder::Unresolved(d) => d,
        }
    }

    pub fn is_resolved(&self) -> bool {
        matches!(self, Remainder::Resolved(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subtraction {
    /// Extracted labels `(a, b)`, in extraction order.
    pub labels: Vec<(u32, u32)>,
    pub remainder: Remainder,
}

fn fits_inside(e: &YakovlevDiagram, d: &YakovlevDiagram) -> bool {
    e.level_log_orders().iter().zip(d.level_log_orders()).all(|(x, y)| *x <= y)
}

/// `D / ι(E)` with the induced maps.
fn cokernel(d: &YakovlevDiagram, iota: &[GammaMap]) -> Result<YakovlevDiagram> {
    let mut quotients = Vec::new();
    for (level, f) in d.levels.iter().zip(iota) {
        quotients.push(level.quotient(f.matrix(), f.source().gens())?);
    }
    let induced = |f: &GammaMap, from: usize, to: usize| {
        let (q_from, _, lift) = &quotients[from];
        let (q_to, proj, _) = &quotients[to];
        let src = &d.levels[from];
        let tgt = &d.levels[to];
        let tmp = tgt.compose(f.matrix(), lift, src.gens(), q_from.gens());
        let m = q_to.compose(proj, &tmp, tgt.gens(), q_from.gens());
        GammaMap::new(q_from.clone(), q_to.clone(), m)
    };
    let mut ups = Vec::new();
    let mut downs = Vec::new();
    for i in 0..d.ups.len() {
        ups.push(induced(&d.ups[i], i, i + 1)?);
        downs.push(induced(&d.downs[i], i + 1, i)?);
    }
    let levels = quotients.into_iter().map(|(q, _, _)| q).collect();
    YakovlevDiagram::new(d.params, levels, ups, downs)
}

/// Looks for `ι : E → D`, `π : D → E` with `π ∘ ι` bijective on every level.
fn find_split(e: &YakovlevDiagram, into: &HomSpace, out: &HomSpace, rng: &mut ChaCha8Rng) -> Option<Vec<GammaMap>> {
    for _ in 0..SPLIT_TRIALS {
        let iota = into.sample(rng);
        let pi = out.sample(rng);
        let ok = iota
            .iter()
            .zip(&pi)
            .zip(e.levels())
            .all(|((i, p), level)| level.is_zero() || p.after(i).is_bijective());
        if ok {
            return Some(iota);
        }
    }
    None
}

/// Greedily splits library diagrams `Δ(M_{a,b})` off `d`.
pub fn subtract_library(d: &YakovlevDiagram) -> Result<Subtraction> {
    subtract_library_seeded(d, 0)
}

pub fn subtract_library_seeded(d: &YakovlevDiagram, seed: u64) -> Result<Subtraction> {
    let library = library_labels(d.params)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = d.clone();
    let mut labels = Vec::new();
    'outer: loop {
        if current.is_zero() {
            return Ok(Subtraction { labels, remainder: Remainder::Resolved(current) });
        }
        let mut stuck = false;
        for (label, e) in &library {
            if !fits_inside(e, &current) {
                continue;
            }
            let into = HomSpace::new(e, &current);
            if into.is_zero() {
                continue;
            }
            let out = HomSpace::new(&current, e);
            if out.is_zero() {
                continue;
            }
            match find_split(e, &into, &out, &mut rng) {
                Some(iota) => {
                    current = cokernel(&current, &iota)?;
                    labels.push(*label);
                    continue 'outer;
                }
                None => stuck = true,
            }
        }
        let remainder = if stuck { Remainder::Unresolved(current) } else { Remainder::Resolved(current) };
        return Ok(Subtraction { labels, remainder });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(p: u64, n: u32) -> GroupParams {
        GroupParams::new(p, n).unwrap()
    }

    #[test]
    fn lemma_diagrams_are_valid_and_certified() {
        for (p, n) in [(3, 1), (3, 2), (3, 3), (5, 2)] {
            let gp = g(p, n);
            for ((a, b), d) in library_labels(gp).unwrap() {
                assert!(validate_diagram(&d), "p={p} n={n} ({a},{b})");
                assert!(indecomposability_certificate(&d), "p={p} n={n} ({a},{b})");
            }
        }
    }

    #[test]
    fn zeroed_up_map_breaks_validity() {
        let gp = g(3, 2);
        let d = lemma_diagram(gp, 1, 0).unwrap();
        let up0 = GammaMap::zero(d.levels()[0].clone(), d.levels()[1].clone());
        let broken = YakovlevDiagram::new(gp, d.levels().to_vec(), vec![up0], d.downs().to_vec()).unwrap();
        assert!(!validate_diagram(&broken));
        assert!(validate_diagram(&YakovlevDiagram::zero(gp)));
    }

    #[test]
    fn sums_and_certificates() {
        let gp = g(3, 2);
        let d = lemma_diagram(gp, 1, 0).unwrap();
        let dd = d.direct_sum(&d).unwrap();
        assert!(validate_diagram(&dd));
        assert!(!indecomposability_certificate(&dd));
        assert!(indecomposability_certificate(&YakovlevDiagram::zero(gp)));
        assert_eq!(d.direct_sum(&YakovlevDiagram::zero(gp)).unwrap(), d);
    }

    #[test]
    fn isomorphism_answers() {
        let gp = g(3, 2);
        let m10 = lemma_diagram(gp, 1, 0).unwrap();
        let m11 = lemma_diagram(gp, 1, 1).unwrap();
        assert_eq!(diagram_isomorphic(&m10, &m10), IsoAnswer::Yes);
        assert_eq!(diagram_isomorphic(&m10, &m11), IsoAnswer::No);
        let s1 = m10.direct_sum(&m11).unwrap();
        let s2 = m11.direct_sum(&m10).unwrap();
        assert_eq!(diagram_isomorphic(&s1, &s2), IsoAnswer::Yes);
    }

    #[test]
    fn subtraction_round_trips() {
        let gp = g(3, 2);
        let m11 = lemma_diagram(gp, 1, 1).unwrap();
        let cube = diagram_direct_sum_all(gp, &[m11.clone(), m11.clone(), m11]).unwrap();
        let s = subtract_library(&cube).unwrap();
        assert_eq!(s.labels, vec![(1, 1); 3]);
        assert!(s.remainder.is_resolved() && s.remainder.diagram().is_zero());

        let mixed = lemma_diagram(gp, 1, 0).unwrap().direct_sum(&lemma_diagram(gp, 1, 1).unwrap()).unwrap();
        let s = subtract_library(&mixed).unwrap();
        let mut labels = s.labels.clone();
        labels.sort_unstable();
        assert_eq!(labels, vec![(1, 0), (1, 1)]);
        assert_eq!(diagram_isomorphic(s.remainder.diagram(), &YakovlevDiagram::zero(gp)), IsoAnswer::Yes);
    }
}
