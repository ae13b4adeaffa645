//! The chamber-greedy solver, its exhaustive counterpart, and the vertex coverage check.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::chambers::{chamber_witnesses, ChamberStrategy};
use crate::error::{Error, Result};
use crate::geometry::{GeneratorSet, Instance, Vector};
use crate::hull::convex_hull;
use crate::matroid::{enumerate_bases, greedy_with_stats, Basis, EnumerationLimits, Matroid};
use crate::objective::EvaluationOracle;

/// Coverage distance between a hull vertex and a candidate point.
const COVERAGE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Candidate {
    /// Chamber witness `a`; the greedy ran on `b(j) = a . w(j)`.
    pub witness: Vector,
    /// Basis elements, 0-based; serialized 1-based like every user-facing index.
    #[serde(serialize_with = "one_based")]
    pub basis: Vec<usize>,
    /// `w(B)`
    pub point: Vector,
    /// `c(w(B))`
    pub value: f64,
}

fn one_based<S: serde::Serializer>(elements: &[usize], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(elements.iter().map(|j| j + 1))
}

/// Arithmetic operations and oracle queries spent by a solve.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Complexity {
    pub operations: u64,
    pub independence_queries: u64,
    pub evaluation_queries: u64,
}

impl Complexity {
    pub fn total(&self) -> u64 {
        self.operations + self.independence_queries + self.evaluation_queries
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Solution {
    pub best: Candidate,
    pub candidates_examined: usize,
    pub chambers: usize,
    pub complexity: Complexity,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub strategy: ChamberStrategy,
    /// Worker threads for the per-chamber loop; `0` or `1` runs sequentially.
    pub threads: usize,
    /// Evaluate each distinct candidate point once. Worth it for expensive oracles.
    pub dedup_points: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            strategy: ChamberStrategy::Auto,
            threads: 1,
            dedup_points: false,
        }
    }
}

fn check_inputs<M: Matroid + ?Sized>(inst: &Instance, m: &M) -> Result<()> {
    if m.ground_size() != inst.n() {
        return Err(Error::DimensionMismatch {
            expected: inst.n(),
            found: m.ground_size(),
        });
    }
    Ok(())
}

fn check_objective<O: EvaluationOracle + ?Sized>(inst: &Instance, obj: &O) -> Result<()> {
    match obj.dim() {
        Some(d) if d != inst.dim() => Err(Error::DimensionMismatch {
            expected: inst.dim(),
            found: d,
        }),
        _ => Ok(()),
    }
}

struct Scanned {
    basis: Basis,
    point: Vector,
    operations: u64,
    queries: u64,
}

fn scan_one<M: Matroid + Sync + ?Sized>(inst: &Instance, m: &M, a: &[f64]) -> Result<Scanned> {
    let b: Vec<f64> = inst.weights().iter().map(|w| w.dot(a)).collect();
    let (basis, stats) = greedy_with_stats(m, &b)?;
    let point = inst.weight_sum(&basis.elements)?;
    let d = inst.dim() as u64;
    Ok(Scanned {
        operations: d * inst.n() as u64 + stats.comparisons + d * basis.len() as u64,
        queries: stats.oracle_queries,
        basis,
        point,
    })
}

fn scan<M: Matroid + Sync + ?Sized>(
    inst: &Instance,
    m: &M,
    witnesses: &[Vector],
    threads: usize,
) -> Result<Vec<Scanned>> {
    if threads <= 1 {
        return witnesses.iter().map(|a| scan_one(inst, m, a)).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidInstance(format!("thread pool: {e}")))?;
    pool.install(|| witnesses.par_iter().map(|a| scan_one(inst, m, a)).collect())
}

/// Evaluates the greedy candidate of every given witness.
pub fn candidates_for_witnesses<M, O>(
    inst: &Instance,
    m: &M,
    obj: &O,
    witnesses: &[Vector],
    opts: &SolveOptions,
) -> Result<(Vec<Candidate>, Complexity)>
where
    M: Matroid + Sync + ?Sized,
    O: EvaluationOracle + ?Sized,
{
    check_inputs(inst, m)?;
    check_objective(inst, obj)?;
    let scanned = scan(inst, m, witnesses, opts.threads)?;
    let mut complexity = Complexity::default();
    let mut cache: HashMap<Vec<u64>, f64> = HashMap::new();
    let mut out = Vec::with_capacity(scanned.len());
    for (s, a) in scanned.into_iter().zip(witnesses) {
        complexity.operations += s.operations;
        complexity.independence_queries += s.queries;
        let value = if opts.dedup_points {
            let key: Vec<u64> = s.point.iter().map(|x| x.to_bits()).collect();
            match cache.get(&key) {
                Some(&v) => v,
                None => {
                    complexity.evaluation_queries += 1;
                    let v = obj.evaluate(&s.point)?;
                    cache.insert(key, v);
                    v
                }
            }
        } else {
            complexity.evaluation_queries += 1;
            obj.evaluate(&s.point)?
        };
        out.push(Candidate {
            witness: a.clone(),
            basis: s.basis.elements,
            point: s.point,
            value,
        });
    }
    Ok((out, complexity))
}

/// All chamber candidates of an instance, in chamber order.
pub fn candidates<M, O>(
    inst: &Instance,
    m: &M,
    obj: &O,
    opts: &SolveOptions,
) -> Result<(Vec<Candidate>, Complexity)>
where
    M: Matroid + Sync + ?Sized,
    O: EvaluationOracle + ?Sized,
{
    check_inputs(inst, m)?;
    check_objective(inst, obj)?;
    let gens = GeneratorSet::build(inst);
    let witnesses = chamber_witnesses(&gens, opts.strategy)?;
    let (cands, mut complexity) = candidates_for_witnesses(inst, m, obj, &witnesses, opts)?;
    complexity.operations += enumeration_cost(&gens, witnesses.len());
    Ok((cands, complexity))
}

/// Operation estimate for enumeration: building the generators, sorting the normals,
/// and one `d`-vector per chamber.
fn enumeration_cost(gens: &GeneratorSet, chambers: usize) -> u64 {
    let d = gens.dim() as u64;
    let raw = gens.raw.len() as u64;
    let m = gens.m_prime() as u64;
    let log = 64 - m.max(1).leading_zeros() as u64;
    d * raw + m * log + d * chambers as u64
}

pub fn solve<M, O>(inst: &Instance, m: &M, obj: &O) -> Result<Solution>
where
    M: Matroid + Sync + ?Sized,
    O: EvaluationOracle + ?Sized,
{
    solve_with(inst, m, obj, &SolveOptions::default())
}

/// Maximizes `c(w(B))` over the bases of `m`.
///
/// Runs the greedy algorithm once per chamber witness and keeps the best value; ties
/// go to the first chamber in enumeration order.
pub fn solve_with<M, O>(inst: &Instance, m: &M, obj: &O, opts: &SolveOptions) -> Result<Solution>
where
    M: Matroid + Sync + ?Sized,
    O: EvaluationOracle + ?Sized,
{
    let (cands, complexity) = candidates(inst, m, obj, opts)?;
    let chambers = cands.len();
    let best = best_of(cands).expect("at least one chamber");
    Ok(Solution {
        best,
        candidates_examined: chambers,
        chambers,
        complexity,
    })
}

fn best_of(cands: Vec<Candidate>) -> Option<Candidate> {
    let mut best: Option<Candidate> = None;
    for c in cands {
        match &best {
            Some(b) if !(c.value > b.value) => {}
            _ => best = Some(c),
        }
    }
    best
}

/// Exact maximum over all bases; ties go to the lexicographically smallest basis.
pub fn brute_force_solve<M, O>(inst: &Instance, m: &M, obj: &O, limits: EnumerationLimits) -> Result<Solution>
where
    M: Matroid + ?Sized,
    O: EvaluationOracle + ?Sized,
{
    check_inputs(inst, m)?;
    check_objective(inst, obj)?;
    let bases = enumerate_bases(m, limits)?;
    let examined = bases.len();
    let mut complexity = Complexity::default();
    let mut best: Option<Candidate> = None;
    for b in bases {
        let point = inst.weight_sum(&b.elements)?;
        let value = obj.evaluate(&point)?;
        complexity.evaluation_queries += 1;
        if best.as_ref().is_none_or(|c| value > c.value) {
            best = Some(Candidate {
                witness: Vector::zeros(inst.dim()),
                basis: b.elements,
                point,
                value,
            });
        }
    }
    Ok(Solution {
        best: best.expect("the empty set is independent, so a basis exists"),
        candidates_examined: examined,
        chambers: 0,
        complexity,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverageReport {
    /// Vertices of `conv { w(B) }` from exhaustive enumeration.
    pub hull_vertices: Vec<Vector>,
    /// Distinct chamber candidate points `w(B(v))`.
    pub candidate_points: Vec<Vector>,
    /// Hull vertices with no candidate within tolerance.
    pub uncovered: Vec<Vector>,
}

impl CoverageReport {
    pub fn covered(&self) -> bool {
        self.uncovered.is_empty()
    }
}

/// Checks that every vertex of `conv { w(B) }` is the candidate point of some chamber.
pub fn vertex_coverage_check<M>(
    inst: &Instance,
    m: &M,
    limits: EnumerationLimits,
    opts: &SolveOptions,
) -> Result<CoverageReport>
where
    M: Matroid + Sync + ?Sized,
{
    if inst.dim() != 2 {
        return Err(Error::UnsupportedDimension("vertex coverage check", 2));
    }
    check_inputs(inst, m)?;
    let points: Vec<Vector> = enumerate_bases(m, limits)?
        .iter()
        .map(|b| inst.weight_sum(&b.elements))
        .collect::<Result<_>>()?;
    let hull_vertices = convex_hull(&points);

    let gens = GeneratorSet::build(inst);
    let witnesses = chamber_witnesses(&gens, opts.strategy)?;
    let mut candidate_points: Vec<Vector> = Vec::new();
    for s in scan(inst, m, &witnesses, opts.threads)? {
        if !candidate_points.iter().any(|p| p.dist_inf(&s.point) <= COVERAGE_TOL) {
            candidate_points.push(s.point);
        }
    }
    let uncovered = hull_vertices
        .iter()
        .filter(|v| !candidate_points.iter().any(|p| p.dist_inf(v) <= COVERAGE_TOL))
        .cloned()
        .collect();
    Ok(CoverageReport {
        hull_vertices,
        candidate_points,
        uncovered,
    })
}
