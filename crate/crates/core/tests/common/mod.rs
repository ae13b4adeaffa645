#![allow(dead_code)]

use convex_matroid::{ConcreteMatroid, ConvexObjective, Instance, Vector};
use rand::Rng;

pub const MATROID_KINDS: [&str; 4] = ["uniform", "graphic", "partition", "linear"];
pub const OBJECTIVE_KINDS: [&str; 4] = ["sqnorm", "pnorm", "maxlin", "balanced"];

pub fn random_weights<R: Rng>(rng: &mut R, n: usize, d: usize) -> Instance {
    let rows = (0..n)
        .map(|_| Vector::new((0..d).map(|_| rng.gen_range(-5.0..5.0)).collect()))
        .collect();
    Instance::new(d, rows).unwrap()
}

/// Small integer weights: produces repeated points and parallel differences.
pub fn degenerate_weights<R: Rng>(rng: &mut R, n: usize, d: usize) -> Instance {
    let rows = (0..n)
        .map(|_| Vector::new((0..d).map(|_| rng.gen_range(-2..=2) as f64).collect()))
        .collect();
    Instance::new(d, rows).unwrap()
}

pub fn random_matroid<R: Rng>(rng: &mut R, kind: &str, n: usize) -> ConcreteMatroid {
    match kind {
        "uniform" => ConcreteMatroid::uniform(n, rng.gen_range(0..=n)).unwrap(),
        "graphic" => {
            let v = rng.gen_range(2..=5);
            let edges = (0..n).map(|_| (rng.gen_range(0..v), rng.gen_range(0..v))).collect();
            ConcreteMatroid::graphic(v, edges).unwrap()
        }
        "partition" => {
            let blocks = rng.gen_range(1..=3);
            let block_of = (0..n).map(|_| rng.gen_range(0..blocks)).collect();
            let caps = (0..blocks).map(|_| rng.gen_range(0..=2)).collect();
            ConcreteMatroid::partition(block_of, caps).unwrap()
        }
        "linear" => {
            let rows = rng.gen_range(1..=3);
            let cols: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..rows).map(|_| rng.gen_range(-2..=2) as f64).collect())
                .collect();
            if n == 0 {
                return ConcreteMatroid::linear_from_rows(rows, vec![vec![]; rows], 0).unwrap();
            }
            ConcreteMatroid::linear(&cols).unwrap()
        }
        other => panic!("unknown matroid kind {other}"),
    }
}

pub fn random_objective<R: Rng>(rng: &mut R, kind: &str, inst: &Instance) -> ConvexObjective {
    let d = inst.dim();
    match kind {
        "sqnorm" => ConvexObjective::SqNorm,
        "pnorm" => {
            let p = [1.0, 1.5, 2.0, 3.0, f64::INFINITY][rng.gen_range(0..5)];
            ConvexObjective::pnorm(p).unwrap()
        }
        "maxlin" => {
            let k = rng.gen_range(1..=4);
            ConvexObjective::max_lin(
                (0..k)
                    .map(|_| Vector::new((0..d).map(|_| rng.gen_range(-1.0..1.0)).collect()))
                    .collect(),
            )
            .unwrap()
        }
        "balanced" => ConvexObjective::balanced(inst.total()),
        other => panic!("unknown objective kind {other}"),
    }
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}
