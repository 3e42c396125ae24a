//! Independent oracles: brute force over elements and matrices, and
//! fixed-point ranks of explicit lattices.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cyclic_units::arithmetic::{character_ranks, ExtensionDatum, RamifiedPlace, Regime};
use cyclic_units::diagrams::{
    lemma_diagram, recognize_standard_sum, FiniteGammaModule, GammaMap, HomSpace, YakovlevDiagram,
};
use cyclic_units::gamma::{direct_sum_all, fixed_rank, permutation_lattice, GroupParams, IntMatrix};

type Elt = Vec<i64>;

/// Every element of `x`, as reduced coordinate vectors.
fn elements(x: &FiniteGammaModule) -> Vec<Elt> {
    let mut out = vec![Vec::new()];
    for i in 0..x.gens() {
        out = out.into_iter().flat_map(|v| (0..x.modulus(i)).map(move |c| [v.clone(), vec![c]].concat())).collect();
    }
    out
}

fn apply(x: &FiniteGammaModule, m: &[Vec<i64>], v: &[i64]) -> Elt {
    let w: Vec<i128> = m.iter().map(|r| r.iter().zip(v).map(|(&a, &b)| a as i128 * b as i128).sum()).collect();
    x.reduce(&w)
}

fn add(x: &FiniteGammaModule, u: &[i64], v: &[i64]) -> Elt {
    let w: Vec<i128> = u.iter().zip(v).map(|(&a, &b)| a as i128 + b as i128).collect();
    x.reduce(&w)
}

/// Size of the Γ-submodule generated by `gens`.
fn generated_size(x: &FiniteGammaModule, gens: &[Elt]) -> usize {
    let zero = vec![0; x.gens()];
    let mut span: BTreeSet<Elt> = BTreeSet::from([zero]);
    for g in gens {
        let mut s = g.clone();
        for _ in 0..x.params().order() {
            let mut multiple = s.clone();
            loop {
                let before = span.len();
                let shifted: Vec<Elt> = span.iter().map(|v| add(x, v, &multiple)).collect();
                span.extend(shifted);
                if span.len() == before {
                    break;
                }
                multiple = add(x, &multiple, &s);
            }
            s = apply(x, x.action(), &s);
        }
    }
    span.len()
}

/// All multisets of `(a, j)` with `Σ a·p^(n−j) = log`, sorted.
fn candidate_sums(gp: GroupParams, log: u64) -> Vec<Vec<(u32, u32)>> {
    fn go(gp: GroupParams, left: u64, min: (u32, u32), acc: &mut Vec<(u32, u32)>, out: &mut Vec<Vec<(u32, u32)>>) {
        if left == 0 {
            out.push(acc.clone());
            return;
        }
        for a in 1..=left as u32 {
            for j in 0..=gp.n() {
                let size = a as u64 * gp.pow(gp.n() - j);
                if (a, j) < min || size > left {
                    continue;
                }
                acc.push((a, j));
                go(gp, left - size, (a, j), acc, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(gp, log, (0, 0), &mut Vec::new(), &mut out);
    out
}

/// The unique standard sum mapping onto `x`, found by trying every
/// choice of generator images; `None` if zero or several fit.
fn brute_force_structure(x: &FiniteGammaModule) -> Option<Vec<(u32, u32)>> {
    let gp = x.params();
    let all = elements(x);
    let target = all.len();
    let mut found = Vec::new();
    for cand in candidate_sums(gp, x.log_order()) {
        let images: Vec<Vec<Elt>> = cand
            .iter()
            .map(|&(a, j)| {
                let tau = x.action_power(gp.generator_step(j) as u64);
                let pa = gp.pow(a) as i64;
                all.iter()
                    .filter(|v| x.is_zero_vector(&v.iter().map(|c| c * pa).collect::<Vec<_>>()))
                    .filter(|v| apply(x, &tau, v) == **v)
                    .cloned()
                    .collect()
            })
            .collect();
        let mut idx = vec![0; cand.len()];
        'search: loop {
            let gens: Vec<Elt> = idx.iter().zip(&images).map(|(&i, im)| im[i].clone()).collect();
            if generated_size(x, &gens) == target {
                found.push(cand.clone());
                break;
            }
            for k in 0..idx.len() {
                idx[k] += 1;
                if idx[k] < images[k].len() {
                    continue 'search;
                }
                idx[k] = 0;
            }
            break;
        }
    }
    (found.len() == 1).then(|| found.pop().unwrap())
}

/// A unimodular matrix and its inverse, from random transvections.
fn unimodular(g: usize, rng: &mut ChaCha8Rng) -> (IntMatrix, IntMatrix) {
    let (mut u, mut inv) = (IntMatrix::identity(g), IntMatrix::identity(g));
    if g < 2 {
        return (u, inv);
    }
    for _ in 0..3 * g {
        let (r, c) = (rng.gen_range(0..g), rng.gen_range(0..g));
        if r == c {
            continue;
        }
        let k: i64 = rng.gen_range(-2..=2);
        let mut t = IntMatrix::identity(g);
        t[(r, c)] = BigInt::from(k);
        let mut t_inv = IntMatrix::identity(g);
        t_inv[(r, c)] = BigInt::from(-k);
        u = t.mul(&u);
        inv = inv.mul(&t_inv);
    }
    (u, inv)
}

/// A presentation of `x ⊕ Z/2` with a redundant relation, under random
/// base changes on generators and relations.
fn scrambled(x: &FiniteGammaModule, rng: &mut ChaCha8Rng) -> (IntMatrix, IntMatrix) {
    let g = x.gens() + 1;
    let mut rel = x.relations().block_diag(&IntMatrix::from_rows(&[vec![2i64]]));
    let extra: Vec<BigInt> = (0..g).map(|_| BigInt::from(rng.gen_range(-3i64..=3))).collect();
    rel = rel.hstack(&IntMatrix::from_columns(g, &[rel.mul_vec(&extra)]));
    let action = IntMatrix::from_rows(x.action()).block_diag(&IntMatrix::identity(1));
    let (p, p_inv) = unimodular(g, rng);
    let (q, _) = unimodular(g + 1, rng);
    (p.mul(&rel).mul(&q), p.mul(&action).mul(&p_inv))
}

#[test]
fn brute_force_agrees_with_construction() {
    for (p, n, parts) in [
        (3, 1, vec![(1, 0)]),
        (3, 1, vec![(1, 1), (2, 1)]),
        (3, 2, vec![(1, 1), (1, 2)]),
        (3, 2, vec![(3, 2)]),
        (5, 1, vec![(1, 0)]),
    ] {
        let x = FiniteGammaModule::standard_sum(GroupParams::new(p, n).unwrap(), &parts).unwrap();
        assert_eq!(brute_force_structure(&x), Some(parts));
    }
}

#[test]
fn scrambled_presentations_are_recognized() {
    let gp3 = [GroupParams::new(3, 1).unwrap(), GroupParams::new(3, 2).unwrap()];
    for seed in 0..20 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gp = gp3[seed as usize % 2];
        let mut parts = Vec::new();
        let mut log = 0;
        while log < 3 {
            let (a, j) = (rng.gen_range(1..=2), rng.gen_range(0..=gp.n()));
            let size = a as u64 * gp.pow(gp.n() - j);
            if log + size > 3 {
                break;
            }
            parts.push((a, j));
            log += size;
        }
        parts.sort_unstable();
        let x = FiniteGammaModule::standard_sum(gp, &parts).unwrap();
        let (rel, action) = scrambled(&x, &mut rng);
        let presented = FiniteGammaModule::from_presentation(gp, &rel, &action).unwrap().module;
        assert_eq!(presented.log_order(), x.log_order(), "seed {seed}");
        let oracle = brute_force_structure(&presented);
        assert_eq!(oracle.as_ref(), Some(&parts), "seed {seed}: oracle");
        assert_eq!(recognize_standard_sum(&presented), oracle, "seed {seed}: recognizer");
    }
}

#[test]
fn nonstandard_module_is_rejected_by_both() {
    // Z/9 with σ = 4: fixed by σ mod 3 but not a standard sum
    let gp = GroupParams::new(3, 1).unwrap();
    let x = FiniteGammaModule::from_parts(gp, vec![2], vec![vec![4]]).unwrap();
    assert_eq!(brute_force_structure(&x), None);
    assert_eq!(recognize_standard_sum(&x), None);
}

/// `|Hom(d1, d2)|` by enumerating all well-defined level matrices.
fn brute_hom_count(d1: &YakovlevDiagram, d2: &YakovlevDiagram, limit: u64) -> Option<u64> {
    let p = d1.params().p() as i64;
    let mut slots = Vec::new();
    let mut total: u64 = 1;
    for (level, (a, b)) in d1.levels().iter().zip(d2.levels()).enumerate() {
        for r in 0..b.gens() {
            for c in 0..a.gens() {
                let (et, es) = (b.exponents()[r], a.exponents()[c]);
                let step = p.pow(et.saturating_sub(es));
                let count = b.modulus(r) / step;
                total = total.checked_mul(count as u64)?;
                slots.push((level, r, c, step, count));
            }
        }
    }
    if total > limit {
        return None;
    }
    let mut idx = vec![0i64; slots.len()];
    let mut found = 0;
    'outer: loop {
        let mut mats: Vec<Vec<Vec<i64>>> =
            d1.levels().iter().zip(d2.levels()).map(|(a, b)| vec![vec![0; a.gens()]; b.gens()]).collect();
        for (&(level, r, c, step, _), &k) in slots.iter().zip(&idx) {
            mats[level][r][c] = k * step;
        }
        let maps: Option<Vec<GammaMap>> = mats
            .into_iter()
            .zip(d1.levels().iter().zip(d2.levels()))
            .map(|(m, (a, b))| GammaMap::new(a.clone(), b.clone(), m).ok())
            .collect();
        if let Some(f) = maps {
            let commutes = (0..f.len().saturating_sub(1)).all(|i| {
                d2.ups()[i].after(&f[i]) == f[i + 1].after(&d1.ups()[i])
                    && d2.downs()[i].after(&f[i + 1]) == f[i].after(&d1.downs()[i])
            });
            found += u64::from(commutes);
        }
        for k in 0..idx.len() {
            idx[k] += 1;
            if idx[k] < slots[k].4 {
                continue 'outer;
            }
            idx[k] = 0;
        }
        break;
    }
    Some(found)
}

fn single_level(gp: GroupParams, parts: &[(u32, u32)]) -> YakovlevDiagram {
    YakovlevDiagram::new(gp, vec![FiniteGammaModule::standard_sum(gp, parts).unwrap()], vec![], vec![]).unwrap()
}

#[test]
fn hom_orders_match_enumeration() {
    let gp1 = GroupParams::new(3, 1).unwrap();
    let mut diagrams = vec![
        single_level(gp1, &[(1, 0)]),
        single_level(gp1, &[(1, 1), (2, 1)]),
        single_level(gp1, &[(2, 0)]),
        single_level(gp1, &[(1, 1), (1, 0)]),
        lemma_diagram(gp1, 1, 0).unwrap(),
    ];
    let gp2 = GroupParams::new(3, 2).unwrap();
    let second: Vec<YakovlevDiagram> =
        [(1, 0), (1, 1), (2, 0)].iter().map(|&(a, b)| lemma_diagram(gp2, a, b).unwrap()).collect();
    let mut checked = 0;
    for group in [std::mem::take(&mut diagrams), second] {
        for d1 in &group {
            for d2 in &group {
                let Some(count) = brute_hom_count(d1, d2, 300_000) else { continue };
                let space = HomSpace::new(d1, d2);
                assert_eq!(3u64.pow(space.log_order() as u32), count);
                let mut rng = ChaCha8Rng::seed_from_u64(7);
                for _ in 0..5 {
                    let f = space.sample(&mut rng);
                    for (i, map) in f.iter().enumerate() {
                        assert!(GammaMap::new(map.source().clone(), map.target().clone(), map.matrix().clone()).is_ok());
                        if i + 1 < f.len() {
                            assert_eq!(d2.ups()[i].after(map), f[i + 1].after(&d1.ups()[i]));
                            assert_eq!(d2.downs()[i].after(&f[i + 1]), map.after(&d1.downs()[i]));
                        }
                    }
                }
                checked += 1;
            }
        }
    }
    assert!(checked >= 20, "only {checked} pairs small enough to enumerate");
}

#[test]
fn character_ranks_match_fixed_ranks_of_lattices() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..25 {
        let n = rng.gen_range(1..=2u32);
        let gp = GroupParams::new(3, n).unwrap();
        let (r1, r2) = (rng.gen_range(1..4u64), rng.gen_range(0..3u64));
        let s_counts: Vec<u64> = (0..=n).map(|_| rng.gen_range(0..3)).collect();
        let datum = ExtensionDatum {
            p: 3,
            n,
            r1,
            r2,
            ramified: vec![RamifiedPlace { inertia_order: 3, decomposition_order: 3 }],
            s_counts: s_counts.clone(),
            regime: Regime::HilbertCyclic,
            all_s_split: None,
        };
        let mut parts = vec![permutation_lattice(gp, 0).unwrap(); (r1 + r2) as usize];
        for (i, &s) in s_counts.iter().enumerate() {
            parts.extend(std::iter::repeat(permutation_lattice(gp, i as u32).unwrap()).take(s as usize));
        }
        let lattice = direct_sum_all(gp, &parts).unwrap();
        let expected: Vec<i64> = (0..=n).map(|j| fixed_rank(&lattice, j).unwrap() as i64 - 1).collect();
        assert_eq!(character_ranks(&datum).unwrap(), expected);
    }
}
