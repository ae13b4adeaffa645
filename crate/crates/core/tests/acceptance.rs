//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use convex_matroid::chambers::{chamber_witnesses, ChamberStrategy};
use convex_matroid::matroid::{enumerate_bases, greedy_max_basis};
use convex_matroid::solver::vertex_coverage_check;
use convex_matroid::{
    applications::{self, ClusterInstance, QaInstance},
    brute_force_solve, chamber_count_bound, solve, solve_with, ConcreteMatroid, ConvexObjective,
    EnumerationLimits, EvaluationOracle, GeneratorSet, Matroid, SolveOptions, Vector,
};
use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 solve matches brute force", c1_correctness),
        ("2 chamber counts", c2_chamber_counts),
        ("3 vertex coverage", c3_coverage),
        ("4 greedy optimality", c4_greedy),
        ("5 unique vertex per chamber", c5_unique_vertex),
        ("6 balanced clustering", c6_clustering),
        ("7 quadratic assignment", c7_quadratic_assignment),
        ("8 complexity scaling", c8_complexity),
        ("9 oracle contracts", c9_oracles),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS  criterion {name}: {msg} ({secs:.2}s)"),
            Err(msg) => {
                failed += 1;
                println!("FAIL  criterion {name}: {msg} ({secs:.2}s)");
            }
        }
    }
    println!("{} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn limits() -> EnumerationLimits {
    EnumerationLimits::default()
}

fn c1_correctness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let start = Instant::now();
    let mut count = 0;
    for _rep in 0..3 {
        for n in 2..=8 {
            for d in [2, 3] {
                for mk in MATROID_KINDS {
                    for ok in OBJECTIVE_KINDS {
                        let inst = random_weights(&mut rng, n, d);
                        let m = random_matroid(&mut rng, mk, n);
                        let obj = random_objective(&mut rng, ok, &inst);
                        let fast = solve(&inst, &m, &obj).map_err(|e| e.to_string())?;
                        let slow = brute_force_solve(&inst, &m, &obj, limits()).map_err(|e| e.to_string())?;
                        if !rel_close(fast.best.value, slow.best.value, 1e-9) {
                            return Err(format!(
                                "n={n} d={d} {mk}/{ok}: solve {} vs brute force {}",
                                fast.best.value, slow.best.value
                            ));
                        }
                        count += 1;
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(120) {
        return Err(format!("{count} instances took {elapsed:?}"));
    }
    Ok(format!("{count} instances agree within 1e-9"))
}

fn c2_chamber_counts() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut checked = Vec::new();
    for n in [5, 10, 20, 40] {
        for _ in 0..3 {
            let inst = random_weights(&mut rng, n, 2);
            let gens = GeneratorSet::build(&inst);
            let count = chamber_witnesses(&gens, ChamberStrategy::Sweep2d)
                .map_err(|e| e.to_string())?
                .len();
            let m = gens.m_prime();
            if count != 2 * m || count > n * n {
                return Err(format!("d=2 n={n}: {count} chambers, m'={m}"));
            }
        }
        checked.push(format!("d2 n{n}"));
    }
    for n in [4, 6, 8, 12] {
        for _ in 0..3 {
            let inst = random_weights(&mut rng, n, 3);
            let gens = GeneratorSet::build(&inst);
            let count = chamber_witnesses(&gens, ChamberStrategy::Restriction)
                .map_err(|e| e.to_string())?
                .len();
            let bound = chamber_count_bound(gens.m_prime(), 3);
            if count as u128 > bound {
                return Err(format!("d=3 n={n}: {count} chambers exceeds bound {bound}"));
            }
        }
        checked.push(format!("d3 n{n}"));
    }
    Ok(format!("counts within bounds for {}", checked.join(", ")))
}

fn c3_coverage() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut count = 0;
    while count < 240 {
        let n = rng.gen_range(2..=8);
        let mk = MATROID_KINDS[count % 4];
        let inst = if count % 3 == 0 {
            degenerate_weights(&mut rng, n, 2)
        } else {
            random_weights(&mut rng, n, 2)
        };
        let m = random_matroid(&mut rng, mk, n);
        let report = vertex_coverage_check(&inst, &m, limits(), &SolveOptions::default())
            .map_err(|e| e.to_string())?;
        if !report.covered() {
            return Err(format!("n={n} {mk}: uncovered hull vertices {:?}", report.uncovered));
        }
        count += 1;
    }
    Ok(format!("{count} instances, every hull vertex is a chamber candidate"))
}

fn c4_greedy() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut count = 0;
    while count < 600 {
        let n = rng.gen_range(1..=8);
        let m = random_matroid(&mut rng, MATROID_KINDS[count % 4], n);
        let b: Vec<f64> = if count % 2 == 0 {
            (0..n).map(|_| rng.gen_range(-3..=3) as f64).collect()
        } else {
            (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect()
        };
        let greedy = greedy_max_basis(&m, &b).map_err(|e| e.to_string())?;
        let bases = enumerate_bases(&m, limits()).map_err(|e| e.to_string())?;
        let best = bases
            .iter()
            .map(|x| x.weight(&b))
            .fold(f64::NEG_INFINITY, f64::max);
        if !m.is_independent(&greedy.elements).unwrap() || greedy.len() != bases[0].len() {
            return Err(format!("greedy returned a non-basis {:?}", greedy.elements));
        }
        if greedy.weight(&b) != best {
            return Err(format!("greedy weight {} vs exhaustive {best}", greedy.weight(&b)));
        }
        count += 1;
    }
    Ok(format!("{count} (matroid, weight) pairs optimal"))
}

fn c5_unique_vertex() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut instances = 0;
    let mut chambers = 0;
    while instances < 240 {
        let n = rng.gen_range(2..=7);
        let d = rng.gen_range(2..=3);
        let inst = if instances % 2 == 0 {
            degenerate_weights(&mut rng, n, d)
        } else {
            random_weights(&mut rng, n, d)
        };
        let m = random_matroid(&mut rng, MATROID_KINDS[instances % 4], n);
        let gens = GeneratorSet::build(&inst);
        let witnesses = chamber_witnesses(&gens, ChamberStrategy::Auto).map_err(|e| e.to_string())?;
        let bases = enumerate_bases(&m, limits()).map_err(|e| e.to_string())?;
        let points: Vec<Vector> = bases.iter().map(|x| inst.weight_sum(&x.elements).unwrap()).collect();
        for a in &witnesses {
            let vals: Vec<f64> = points.iter().map(|p| a.dot(p)).collect();
            let best = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let tol = 1e-10 * best.abs().max(1.0);
            let maximizers: Vec<&Vector> = points
                .iter()
                .zip(&vals)
                .filter(|(_, &v)| v >= best - tol)
                .map(|(p, _)| p)
                .collect();
            if maximizers.iter().any(|p| p.dist_inf(maximizers[0]) > 1e-9) {
                return Err(format!("witness {a} has several maximizing points"));
            }
            let b: Vec<f64> = inst.weights().iter().map(|w| a.dot(w)).collect();
            let g = greedy_max_basis(&m, &b).map_err(|e| e.to_string())?;
            let gp = inst.weight_sum(&g.elements).unwrap();
            if gp.dist_inf(maximizers[0]) > 1e-9 {
                return Err(format!("greedy point {gp} is not the maximizer {}", maximizers[0]));
            }
            chambers += 1;
        }
        instances += 1;
    }
    Ok(format!("{instances} instances, {chambers} chambers each with one maximizing vertex"))
}

fn exhaustive_clustering(points: &[Vector]) -> f64 {
    let n = points.len();
    (0..n)
        .combinations(n / 2)
        .map(|first| {
            let second: Vec<usize> = (0..n).filter(|j| !first.contains(j)).collect();
            applications::variance_sum(&first, &second, points).unwrap()
        })
        .fold(f64::INFINITY, f64::min)
}

fn c6_clustering() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut count = 0;
    while count < 120 {
        let n = 2 * rng.gen_range(1..=5);
        let d = rng.gen_range(1..=3);
        let points = random_weights(&mut rng, n, d).weights().to_vec();
        let ci = ClusterInstance::new(points.clone()).map_err(|e| e.to_string())?;
        let sol = applications::solve_balanced_clustering(&ci, &SolveOptions::default())
            .map_err(|e| format!("n={n} d={d}: {e}"))?;
        let exact = exhaustive_clustering(&points);
        if (sol.variance_sum - exact).abs() > 1e-9 * exact.abs().max(1.0) {
            return Err(format!("n={n} d={d}: {} vs exhaustive {exact}", sol.variance_sum));
        }
        count += 1;
    }
    Ok(format!("{count} point sets match exhaustive partitions"))
}

fn qa_brute_force(qa: &QaInstance) -> f64 {
    let n = qa.n();
    let mut best = f64::NEG_INFINITY;
    for mask in 0u32..(1 << n) {
        let mut s = Vector::zeros(qa.dim());
        for (j, col) in qa.columns().iter().enumerate() {
            if mask >> j & 1 == 1 {
                s.add_assign(col);
            }
        }
        best = best.max(s.norm_sq());
    }
    best
}

fn c7_quadratic_assignment() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut count = 0;
    while count < 110 {
        let n = rng.gen_range(1..=12);
        let d = rng.gen_range(1..=3);
        let rows: Vec<Vec<f64>> = (0..d)
            .map(|_| (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect())
            .collect();
        let qa = QaInstance::from_rows(&rows).map_err(|e| e.to_string())?;
        let sol = applications::solve_quadratic_assignment(&qa, &SolveOptions::default())
            .map_err(|e| e.to_string())?;
        let exact = qa_brute_force(&qa);
        if !rel_close(sol.value, exact, 1e-9) {
            return Err(format!("n={n} d={d}: {} vs 2^n brute force {exact}", sol.value));
        }
        count += 1;
    }
    Ok(format!("{count} instances match 2^n brute force"))
}

fn c8_complexity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut t160 = Duration::ZERO;
    for n in [20usize, 40, 80, 160] {
        let inst = random_weights(&mut rng, n, 2);
        let m = ConcreteMatroid::uniform(n, n / 2).unwrap();
        let start = Instant::now();
        let sol = solve(&inst, &m, &ConvexObjective::SqNorm).map_err(|e| e.to_string())?;
        if n == 160 {
            t160 = start.elapsed();
        }
        xs.push((n as f64).ln());
        ys.push((sol.complexity.total() as f64).ln());
    }
    let slope = least_squares_slope(&xs, &ys);
    if slope > 3.3 {
        return Err(format!("log-log slope {slope:.3} exceeds 3.3"));
    }
    if t160 > Duration::from_secs(10) {
        return Err(format!("n=160 d=2 took {t160:?}"));
    }
    let inst = random_weights(&mut rng, 30, 3);
    let m = ConcreteMatroid::uniform(30, 15).unwrap();
    let start = Instant::now();
    let sol = solve_with(&inst, &m, &ConvexObjective::SqNorm, &SolveOptions::default())
        .map_err(|e| e.to_string())?;
    let t30 = start.elapsed();
    if t30 > Duration::from_secs(60) {
        return Err(format!("n=30 d=3 took {t30:?}"));
    }
    Ok(format!(
        "slope {slope:.3}, n=160 d=2 in {:.2}s, n=30 d=3 in {:.2}s ({} chambers)",
        t160.as_secs_f64(),
        t30.as_secs_f64(),
        sol.chambers
    ))
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn random_subset<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    (0..n).filter(|_| rng.gen_bool(0.5)).collect()
}

fn c9_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut axiom_checks = 0u64;
    let mut per_class = [0u64; 4];
    let mut round = 0;
    while per_class.iter().any(|&c| c < 3000) {
        let k = round % 4;
        round += 1;
        let n = rng.gen_range(1..=8);
        let m = random_matroid(&mut rng, MATROID_KINDS[k], n);
        let a = random_subset(&mut rng, n);
        let b = random_subset(&mut rng, n);
        let ia = m.is_independent(&a).unwrap();
        let ib = m.is_independent(&b).unwrap();
        if !m.is_independent(&[]).unwrap() {
            return Err(format!("{}: empty set dependent", MATROID_KINDS[k]));
        }
        if ia {
            for sub in a.iter().copied().powerset() {
                if !m.is_independent(&sub).unwrap() {
                    return Err(format!("{}: subset {sub:?} of independent {a:?} is dependent", MATROID_KINDS[k]));
                }
                per_class[k] += 1;
            }
        }
        if ia && ib && a.len() < b.len() {
            let ok = b.iter().filter(|x| !a.contains(x)).any(|&x| {
                let mut ax = a.clone();
                ax.push(x);
                ax.sort_unstable();
                m.is_independent(&ax).unwrap()
            });
            if !ok {
                return Err(format!("{}: exchange fails for {a:?}, {b:?}", MATROID_KINDS[k]));
            }
            per_class[k] += 1;
        }
    }
    axiom_checks += per_class.iter().sum::<u64>();

    let mut pairs = 0;
    for kind in OBJECTIVE_KINDS {
        for _ in 0..1500 {
            let d = rng.gen_range(1..=4);
            let inst = random_weights(&mut rng, 3, d);
            let obj = random_objective(&mut rng, kind, &inst);
            let x: Vec<f64> = (0..d).map(|_| rng.gen_range(-10.0..10.0)).collect();
            let y: Vec<f64> = (0..d).map(|_| rng.gen_range(-10.0..10.0)).collect();
            let mid: Vec<f64> = x.iter().zip(&y).map(|(a, b)| 0.5 * (a + b)).collect();
            let (cx, cy, cm) = (
                obj.evaluate(&x).unwrap(),
                obj.evaluate(&y).unwrap(),
                obj.evaluate(&mid).unwrap(),
            );
            let tol = 1e-12 * cx.abs().max(cy.abs()).max(1.0);
            if cm > 0.5 * (cx + cy) + tol {
                return Err(format!("{kind}: midpoint convexity fails at {x:?}, {y:?}"));
            }
            pairs += 1;
        }
    }
    Ok(format!(
        "{axiom_checks} matroid axiom checks, {pairs} midpoint pairs over 4 objectives"
    ))
}
