//! The module of diagram morphisms `Hom(D, D')`.
//!
//! A morphism is a family `γ_i : A_i → A'_i` of Γ-maps commuting with every
//! up and down map. The entries of all `γ_i` are the unknowns of one linear
//! system over `Z/p^E`. An entry from a source generator of order `p^e` to a
//! target generator of order `p^e'` is written `p^s · y` with
//! `s = max(0, e' - e)`, which makes every choice of `y` well defined.
//! Congruences modulo `p^e'` are scaled by `p^(E - e')` to live modulo `p^E`.

use rand::Rng;

use super::diagram::YakovlevDiagram;
use super::local::{solve_homogeneous, ChainRing};
use super::module::{FiniteGammaModule, GammaMap, Mat};

#[derive(Debug, Clone, Copy)]
struct Unknown {
    level: usize,
    row: usize,
    col: usize,
    shift: u32,
}

/// The solution module of the morphism equations, ready for sampling.
#[derive(Debug, Clone)]
pub struct HomSpace {
    source: YakovlevDiagram,
    target: YakovlevDiagram,
    ring: ChainRing,
    unknowns: Vec<Unknown>,
    generators: Vec<Vec<i64>>,
    log_order: u64,
}

impl HomSpace {
    pub fn new(source: &YakovlevDiagram, target: &YakovlevDiagram) -> Self {
        assert_eq!(source.params(), target.params(), "Hom between diagrams over different groups");
        let e = target.levels().iter().map(FiniteGammaModule::exponent).max().unwrap_or(0).max(1);
        let ring = ChainRing::new(source.params().p(), e);
        let mut unknowns = Vec::new();
        // offsets[level][row][col] -> unknown index
        let mut offsets: Vec<Vec<Vec<usize>>> = Vec::new();
        for (level, (a, b)) in source.levels().iter().zip(target.levels()).enumerate() {
            let mut table = vec![vec![0; a.gens()]; b.gens()];
            for (row, slot) in table.iter_mut().enumerate() {
                for (col, entry) in slot.iter_mut().enumerate() {
                    *entry = unknowns.len();
                    let shift = b.exponents()[row].saturating_sub(a.exponents()[col]);
                    unknowns.push(Unknown { level, row, col, shift });
                }
            }
            offsets.push(table);
        }
        let nvars = unknowns.len();
        let mut equations: Mat = Vec::new();
        let scale_row = |eq: &mut Vec<i64>, tgt: &FiniteGammaModule, r: usize| {
            let k = e - tgt.exponents()[r];
            for (v, x) in eq.iter_mut().enumerate() {
                let coeff = ring.mul(*x, ring.pow_p(unknowns[v].shift));
                *x = ring.mul(coeff, ring.pow_p(k));
            }
        };
        // equivariance: γ σ - σ' γ = 0 on each level
        for (level, (a, b)) in source.levels().iter().zip(target.levels()).enumerate() {
            for r in 0..b.gens() {
                for c in 0..a.gens() {
                    let mut eq = vec![0i64; nvars];
                    for k in 0..a.gens() {
                        eq[offsets[level][r][k]] += a.action()[k][c];
                    }
                    for k in 0..b.gens() {
                        eq[offsets[level][k][c]] -= b.action()[r][k];
                    }
                    scale_row(&mut eq, b, r);
                    if eq.iter().any(|&x| x != 0) {
                        equations.push(eq);
                    }
                }
            }
        }
        // commuting squares: γ_to ∘ f = f' ∘ γ_from for each up and down map
        let pairs = source.ups().iter().zip(target.ups()).enumerate().map(|(i, (f, g))| (i, i + 1, f, g)).chain(
            source.downs().iter().zip(target.downs()).enumerate().map(|(i, (f, g))| (i + 1, i, f, g)),
        );
        for (from, to, f, g) in pairs {
            let (src_from, src_to) = (&source.levels()[from], &source.levels()[to]);
            let tgt_to = &target.levels()[to];
            for r in 0..tgt_to.gens() {
                for c in 0..src_from.gens() {
                    let mut eq = vec![0i64; nvars];
                    for k in 0..src_to.gens() {
                        eq[offsets[to][r][k]] += f.matrix()[k][c];
                    }
                    for k in 0..target.levels()[from].gens() {
                        eq[offsets[from][k][c]] -= g.matrix()[r][k];
                    }
                    scale_row(&mut eq, tgt_to, r);
                    if eq.iter().any(|&x| x != 0) {
                        equations.push(eq);
                    }
                }
            }
        }
        let sol = solve_homogeneous(&ring, &equations, nvars);
        // y ≡ 0 (mod p^(e' - s)) gives the zero morphism; divide those out
        let redundant: u64 = unknowns
            .iter()
            .map(|u| {
                let e_target = target.levels()[u.level].exponents()[u.row];
                (e - (e_target - u.shift)) as u64
            })
            .sum();
        HomSpace {
            source: source.clone(),
            target: target.clone(),
            ring,
            unknowns,
            generators: sol.generators,
            log_order: sol.log_order - redundant,
        }
    }

    /// `log_p |Hom(D, D')|`.
    pub fn log_order(&self) -> u64 {
        self.log_order
    }

    pub fn is_zero(&self) -> bool {
        self.log_order == 0
    }

    /// Number of scalar unknowns, the cost unit of a sample.
    pub fn unknown_count(&self) -> usize {
        self.unknowns.len()
    }

    /// A uniformly random morphism, as its level maps.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Vec<GammaMap> {
        let m = self.ring.modulus();
        let mut y = vec![0i64; self.unknowns.len()];
        for g in &self.generators {
            let c = rng.gen_range(0..m);
            for (yi, gi) in y.iter_mut().zip(g) {
                *yi = self.ring.reduce(*yi + self.ring.mul(c, *gi));
            }
        }
        self.assemble(&y)
    }

    fn assemble(&self, y: &[i64]) -> Vec<GammaMap> {
        let mut mats: Vec<Mat> = self
            .source
            .levels()
            .iter()
            .zip(self.target.levels())
            .map(|(a, b)| vec![vec![0i64; a.gens()]; b.gens()])
            .collect();
        for (u, &val) in self.unknowns.iter().zip(y) {
            mats[u.level][u.row][u.col] = self.ring.mul(val, self.ring.pow_p(u.shift));
        }
        mats.into_iter()
            .enumerate()
            .map(|(i, m)| {
                GammaMap::new_unchecked(self.source.levels()[i].clone(), self.target.levels()[i].clone(), m)
                    .expect("shapes agree by construction")
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::diagram::lemma_diagram;
    use crate::gamma::GroupParams;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn endomorphisms_of_single_level() {
        // n = 1: End(Z/3 with trivial action) = Z/3
        let gp = GroupParams::new(3, 1).unwrap();
        let d = lemma_diagram(gp, 1, 0).unwrap();
        assert_eq!(HomSpace::new(&d, &d).log_order(), 1);
    }

    #[test]
    fn samples_are_morphisms() {
        let gp = GroupParams::new(3, 2).unwrap();
        let d = lemma_diagram(gp, 1, 0).unwrap().direct_sum(&lemma_diagram(gp, 1, 1).unwrap()).unwrap();
        let e = lemma_diagram(gp, 2, 0).unwrap();
        let hom = HomSpace::new(&d, &e);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let maps = hom.sample(&mut rng);
            for (i, f) in maps.iter().enumerate() {
                GammaMap::new(f.source().clone(), f.target().clone(), f.matrix().clone()).unwrap();
                if i + 1 < maps.len() {
                    assert_eq!(maps[i + 1].after(&d.ups()[i]), e.ups()[i].after(f));
                    assert_eq!(f.after(&d.downs()[i]), e.downs()[i].after(&maps[i + 1]));
                }
            }
        }
    }
}
