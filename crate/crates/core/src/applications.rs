//! Reductions to convex matroid optimization: positive semidefinite quadratic
//! assignment and balanced two-way clustering.

use crate::error::{Error, Result};
use crate::geometry::{Instance, Vector};
use crate::matroid::ConcreteMatroid;
use crate::objective::ConvexObjective;
use crate::solver::{solve_with, SolveOptions};

/// Relative tolerance for the runtime variance identity check.
const IDENTITY_TOL: f64 = 1e-9;

/// Values closer than this (relative) are treated as tied between supports.
const TIE_TOL: f64 = 1e-12;

/// `max_{x in {0,1}^n} |W x|^2` for a `d x n` matrix `W`.
#[derive(Debug, Clone, PartialEq)]
pub struct QaInstance {
    dim: usize,
    columns: Vec<Vector>,
}

impl QaInstance {
    /// Builds from the `d` rows of `W`.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::InvalidInstance("matrix needs at least one row".into()));
        }
        let n = rows[0].len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInstance("matrix rows differ in length".into()));
        }
        let columns = (0..n).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
        Self::from_columns(dim, columns)
    }

    pub fn from_columns(dim: usize, columns: Vec<Vector>) -> Result<Self> {
        // Reuse the instance validation for dimensions and finiteness.
        Instance::new(dim, columns.clone())?;
        Ok(QaInstance { dim, columns })
    }

    pub fn n(&self) -> usize {
        self.columns.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn columns(&self) -> &[Vector] {
        &self.columns
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QaSolution {
    pub x: Vec<u8>,
    pub value: f64,
}

/// Solves the fixed-support variant for every support size `r = 0..=n` and keeps the
/// best; among tied values the lexicographically smallest `x` wins.
pub fn solve_quadratic_assignment(qa: &QaInstance, opts: &SolveOptions) -> Result<QaSolution> {
    let n = qa.n();
    let inst = Instance::new(qa.dim, qa.columns.clone())?;
    let mut best: Option<QaSolution> = None;
    for r in 0..=n {
        let m = ConcreteMatroid::uniform(n, r)?;
        let sol = solve_with(&inst, &m, &ConvexObjective::SqNorm, opts)?;
        let mut x = vec![0u8; n];
        for &j in &sol.best.basis {
            x[j] = 1;
        }
        let cand = QaSolution {
            x,
            value: sol.best.value,
        };
        best = Some(match best {
            None => cand,
            Some(cur) => {
                let tie = (cand.value - cur.value).abs() <= TIE_TOL * cur.value.abs().max(1.0);
                if (tie && cand.x < cur.x) || (!tie && cand.value > cur.value) {
                    cand
                } else {
                    cur
                }
            }
        });
    }
    Ok(best.expect("r = 0 is always solved"))
}

/// An even number of points to split into two equal clusters.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterInstance {
    points: Vec<Vector>,
}

impl ClusterInstance {
    pub fn new(points: Vec<Vector>) -> Result<Self> {
        if points.len() < 2 || points.len() % 2 != 0 {
            return Err(Error::InvalidInstance(format!(
                "balanced clustering needs an even number of at least 2 points, got {}",
                points.len()
            )));
        }
        Instance::new(points[0].dim(), points.clone())?;
        Ok(ClusterInstance { points })
    }

    pub fn points(&self) -> &[Vector] {
        &self.points
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterSolution {
    pub first: Vec<usize>,
    pub second: Vec<usize>,
    pub variance_sum: f64,
}

/// Sum of the two cluster variances `(1/m) sum_{j in C} |w_j - mean(C)|^2`.
pub fn variance_sum(first: &[usize], second: &[usize], points: &[Vector]) -> Result<f64> {
    let n = points.len();
    if n == 0 || n % 2 != 0 {
        return Err(Error::MalformedPartition(format!("{n} points cannot be split evenly")));
    }
    let m = n / 2;
    if first.len() != m || second.len() != m {
        return Err(Error::MalformedPartition(format!(
            "clusters of sizes {} and {}, expected {m} each",
            first.len(),
            second.len()
        )));
    }
    let mut seen = vec![false; n];
    for &j in first.iter().chain(second) {
        if j >= n {
            return Err(Error::IndexOutOfRange { index: j, n });
        }
        if std::mem::replace(&mut seen[j], true) {
            return Err(Error::MalformedPartition(format!("point {} appears twice", j + 1)));
        }
    }
    let dim = points[0].dim();
    let cluster = |c: &[usize]| {
        let mut mean = Vector::zeros(dim);
        for &j in c {
            mean.add_assign(&points[j]);
        }
        let mean = mean.scaled(1.0 / m as f64);
        c.iter().map(|&j| points[j].sub(&mean).norm_sq()).sum::<f64>() / m as f64
    };
    Ok(cluster(first) + cluster(second))
}

/// Minimizes the sum of cluster variances over all splits into halves by maximizing
/// `|x|^2 + |w(N) - x|^2` over the bases of the uniform matroid of rank `n/2`.
pub fn solve_balanced_clustering(ci: &ClusterInstance, opts: &SolveOptions) -> Result<ClusterSolution> {
    let points = &ci.points;
    let n = points.len();
    let m = n / 2;
    let inst = Instance::new(points[0].dim(), points.clone())?;
    let total = inst.total();
    let matroid = ConcreteMatroid::uniform(n, m)?;
    let sol = solve_with(&inst, &matroid, &ConvexObjective::balanced(total.clone()), opts)?;

    let first = sol.best.basis.clone();
    let second: Vec<usize> = (0..n).filter(|j| first.binary_search(j).is_err()).collect();
    let direct = variance_sum(&first, &second, points)?;

    // sum of variances = (1/m) sum |w_j|^2 - (|w(C1)|^2 + |w(C2)|^2) / m^2
    let mf = m as f64;
    let sum_sq: f64 = points.iter().map(|p| p.norm_sq()).sum::<f64>() / mf;
    let c1 = inst.weight_sum(&first)?;
    let c2 = inst.weight_sum(&second)?;
    let via_identity = sum_sq - (c1.norm_sq() + c2.norm_sq()) / (mf * mf);
    if (direct - via_identity).abs() > IDENTITY_TOL * sum_sq.max(1.0) {
        return Err(Error::IdentityViolated {
            direct,
            via_identity,
        });
    }
    Ok(ClusterSolution {
        first,
        second,
        variance_sum: direct,
    })
}
