//! Built-in check suites for `cyclic-units selftest`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cyclic_units::arithmetic::{
    corollary_residual, guaranteed_summands, recover_structure, ExtensionDatum, RamifiedPlace, Regime, Status,
};
use cyclic_units::cohomology::{tate_h1, yakovlev_diagram};
use cyclic_units::diagrams::{
    diagram_isomorphic, indecomposability_certificate, lemma_diagram, recognize_standard_sum, validate_diagram,
    IsoAnswer,
};
use cyclic_units::gamma::{direct_sum, mab_lattice, permutation_lattice, random_unimodular_change, GroupParams};
use cyclic_units::Result;

pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: String, outcome: Result<(bool, String)>) -> Check {
    match outcome {
        Ok((passed, detail)) => Check { name, passed, detail },
        Err(e) => Check { name, passed: false, detail: e.to_string() },
    }
}

fn library(n: u32) -> Vec<(u32, u32)> {
    (1..=n).flat_map(|a| (0..=n - a).map(move |b| (a, b))).collect()
}

/// Levels and maps of `Δ(M_{a,b})` against the closed-form table.
pub fn lemma() -> Vec<Check> {
    let mut out = Vec::new();
    for (p, n) in [(3, 1), (3, 2), (3, 3), (5, 1), (5, 2)] {
        for (a, b) in library(n) {
            let run = || -> Result<(bool, String)> {
                let gp = GroupParams::new(p, n)?;
                let m = mab_lattice(gp, a, b)?;
                let d = yakovlev_diagram(&m)?;
                let table = lemma_diagram(gp, a, b)?;
                let mut levels = Vec::new();
                for i in 1..=n {
                    levels.push(recognize_standard_sum(&tate_h1(&m, i)?));
                }
                let expected: Vec<_> = table.levels().iter().map(recognize_standard_sum).collect();
                let iso = diagram_isomorphic(&d, &table);
                let ok = levels == expected && iso == IsoAnswer::Yes && validate_diagram(&d) && indecomposability_certificate(&d);
                Ok((ok, format!("levels {levels:?}, maps {iso:?}")))
            };
            out.push(check(format!("lemma p={p} n={n} M({a},{b})"), run()));
        }
    }
    out
}

/// `Δ(M ⊕ perm)` after a random base change against `Δ(M)`.
pub fn stability(seed: u64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for n in 1..=3 {
        for (a, b) in library(n) {
            let i = rng.gen_range(0..=n);
            let s = rng.gen();
            let run = || -> Result<(bool, String)> {
                let gp = GroupParams::new(3, n)?;
                let m = mab_lattice(gp, a, b)?;
                let sum = random_unimodular_change(&direct_sum(&m, &permutation_lattice(gp, i)?)?, s);
                let iso = diagram_isomorphic(&yakovlev_diagram(&sum)?, &yakovlev_diagram(&m)?);
                Ok((iso == IsoAnswer::Yes, format!("{iso:?}")))
            };
            out.push(check(format!("stability n={n} M({a},{b}) + perm({i})"), run()));
        }
    }
    out
}

fn datum(n: u32, r1: u64, places: Vec<(u64, u64)>, s0: u64) -> ExtensionDatum {
    let mut s = vec![0; n as usize + 1];
    s[0] = s0;
    ExtensionDatum {
        p: 3,
        n,
        r1,
        r2: 1,
        ramified: places.into_iter().map(|(i, g)| RamifiedPlace { inertia_order: i, decomposition_order: g }).collect(),
        s_counts: s,
        regime: Regime::HilbertCyclic,
        all_s_split: None,
    }
}

/// The `t_0` identity on resolved predictions, and monotonicity of the
/// guaranteed summands.
pub fn corollary() -> Vec<Check> {
    let mut cases = Vec::new();
    for n in 1..=2u32 {
        let q = 3u64.pow(n);
        cases.push(datum(n, 2, vec![], 2));
        cases.push(datum(n, 2, vec![(q, q)], 0));
        for k in 3..=5 {
            cases.push(datum(n, 10, vec![(3, q); k], 1));
        }
    }
    let mut out = Vec::new();
    for d in cases {
        let name = format!("corollary n={} places={}", d.n, d.ramified.len());
        let run = || -> Result<(bool, String)> {
            let r = recover_structure(&d)?;
            if r.status != Status::Resolved {
                return Ok((false, format!("{:?}", r.diagnostics)));
            }
            let res = corollary_residual(&d, &r)?;
            let before = guaranteed_summands(&d)?;
            let mut more = d.clone();
            if let Some(&first) = d.ramified.first() {
                more.ramified.push(first);
            }
            let after = guaranteed_summands(&more)?;
            let grew: u64 = after.labels.iter().map(|l| l.1).sum::<u64>() - before.labels.iter().map(|l| l.1).sum::<u64>();
            let monotone = d.ramified.len() < 2 || grew == 1;
            Ok((res.holds && monotone, format!("t0·w {} = {}, m = {:?}", res.lhs, res.rhs, r.minkowski_count)))
        };
        out.push(check(name, run()));
    }
    out
}
