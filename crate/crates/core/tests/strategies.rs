//! Cross-checks between the chamber enumeration strategies and the solver.

mod common;

use std::collections::HashSet;

use common::*;
use convex_matroid::chambers::{
    chamber_witnesses, enumerate_chambers, enumerate_chambers_2d, enumerate_chambers_nd,
    enumerate_chambers_restricted, ChamberStrategy,
};
use convex_matroid::solver::candidates;
use convex_matroid::{
    brute_force_solve, chamber_count_bound, solve, solve_with, ConvexObjective, EnumerationLimits,
    GeneratorSet, Instance, SignVector, SolveOptions, Vector, EPS,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sign_set(chambers: &[convex_matroid::Chamber]) -> HashSet<SignVector> {
    chambers.iter().map(|c| c.signs.clone()).collect()
}

fn check_chambers(gens: &GeneratorSet, chambers: &[convex_matroid::Chamber]) {
    let set = sign_set(chambers);
    assert_eq!(set.len(), chambers.len(), "duplicate sign vectors");
    for c in chambers {
        assert!(c.witness.norm_inf() <= 1.0 + 1e-12);
        for (k, h) in gens.normals.iter().enumerate() {
            let s = c.signs.get(k).value() * h.dot(&c.witness);
            assert!(s > EPS, "witness {} not strictly inside wall {k}: {s}", c.witness);
        }
        assert!(set.contains(&c.signs.negated()), "antipode of {} missing", c.signs);
    }
    assert!(chambers.len() as u128 <= chamber_count_bound(gens.m_prime(), gens.dim()));
}

#[test]
fn strategies_agree_in_2d() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for k in 0..60 {
        let n = rng.gen_range(2..=9);
        let inst = if k % 2 == 0 { degenerate_weights(&mut rng, n, 2) } else { random_weights(&mut rng, n, 2) };
        let gens = GeneratorSet::build(&inst);
        let sweep = enumerate_chambers_2d(&gens).unwrap();
        let lp = enumerate_chambers_nd(&gens).unwrap();
        let rest = enumerate_chambers_restricted(&gens).unwrap();
        for c in [&sweep, &lp, &rest] {
            check_chambers(&gens, c);
        }
        let expected = if gens.m_prime() == 0 { 1 } else { 2 * gens.m_prime() };
        assert_eq!(sweep.len(), expected);
        assert_eq!(sign_set(&sweep), sign_set(&lp));
        assert_eq!(sign_set(&sweep), sign_set(&rest));
    }
}

#[test]
fn strategies_agree_in_3d_and_4d() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for k in 0..40 {
        let d = 3 + k % 2;
        let n = rng.gen_range(2..=5);
        let inst = if k % 3 == 0 { degenerate_weights(&mut rng, n, d) } else { random_weights(&mut rng, n, d) };
        let gens = GeneratorSet::build(&inst);
        let lp = enumerate_chambers_nd(&gens).unwrap();
        let rest = enumerate_chambers_restricted(&gens).unwrap();
        check_chambers(&gens, &lp);
        check_chambers(&gens, &rest);
        assert_eq!(sign_set(&lp), sign_set(&rest));
    }
}

#[test]
fn element_order_does_not_change_chamber_count() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..20 {
        let n = rng.gen_range(2..=6);
        let d = rng.gen_range(2..=3);
        let inst = random_weights(&mut rng, n, d);
        let mut rows = inst.weights().to_vec();
        rows.shuffle(&mut rng);
        let shuffled = Instance::new(d, rows).unwrap();
        let a = enumerate_chambers(&GeneratorSet::build(&inst), ChamberStrategy::Auto).unwrap();
        let b = enumerate_chambers(&GeneratorSet::build(&shuffled), ChamberStrategy::Auto).unwrap();
        assert_eq!(a.len(), b.len());
    }
}

#[test]
fn every_strategy_solves_to_the_brute_force_value() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for k in 0..60 {
        let n = rng.gen_range(1..=7);
        let d = rng.gen_range(2..=3);
        let inst = if k % 2 == 0 { degenerate_weights(&mut rng, n, d) } else { random_weights(&mut rng, n, d) };
        let m = random_matroid(&mut rng, MATROID_KINDS[k % 4], n);
        let obj = random_objective(&mut rng, OBJECTIVE_KINDS[k / 4 % 4], &inst);
        let bf = brute_force_solve(&inst, &m, &obj, EnumerationLimits::default()).unwrap();
        let mut strategies = vec![ChamberStrategy::Auto, ChamberStrategy::IncrementalLp, ChamberStrategy::Restriction];
        if d == 2 {
            strategies.push(ChamberStrategy::Sweep2d);
        }
        for strategy in strategies {
            let opts = SolveOptions { strategy, ..SolveOptions::default() };
            let sol = solve_with(&inst, &m, &obj, &opts).unwrap();
            assert!(rel_close(sol.best.value, bf.best.value, 1e-9), "{strategy:?}: {} vs {}", sol.best.value, bf.best.value);
        }
    }
}

#[test]
fn positive_witness_scaling_keeps_candidates() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    for k in 0..30 {
        let n = rng.gen_range(2..=7);
        let inst = random_weights(&mut rng, n, 2);
        let m = random_matroid(&mut rng, MATROID_KINDS[k % 4], n);
        let gens = GeneratorSet::build(&inst);
        let ws = chamber_witnesses(&gens, ChamberStrategy::Auto).unwrap();
        let scaled: Vec<Vector> = ws.iter().map(|w| w.scaled(rng.gen_range(0.01..100.0))).collect();
        let opts = SolveOptions::default();
        let (a, _) = convex_matroid::solver::candidates_for_witnesses(&inst, &m, &ConvexObjective::SqNorm, &ws, &opts).unwrap();
        let (b, _) = convex_matroid::solver::candidates_for_witnesses(&inst, &m, &ConvexObjective::SqNorm, &scaled, &opts).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.basis, y.basis);
        }
    }
}

#[test]
fn best_candidate_dominates_and_threads_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    for k in 0..30 {
        let n = rng.gen_range(2..=8);
        let d = rng.gen_range(2..=3);
        let inst = random_weights(&mut rng, n, d);
        let m = random_matroid(&mut rng, MATROID_KINDS[k % 4], n);
        let obj = random_objective(&mut rng, OBJECTIVE_KINDS[k % 4], &inst);
        let sol = solve(&inst, &m, &obj).unwrap();
        let (cands, _) = candidates(&inst, &m, &obj, &SolveOptions::default()).unwrap();
        assert!(cands.iter().all(|c| c.value <= sol.best.value));
        let par = solve_with(&inst, &m, &obj, &SolveOptions { threads: 4, ..SolveOptions::default() }).unwrap();
        assert_eq!(par.best.basis, sol.best.basis);
        assert_eq!(par.best.value, sol.best.value);
    }
}
