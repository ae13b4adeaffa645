//! Maximum-margin strict feasibility for open polyhedral cones.
//!
//! Solves
//!
//! ```text
//! maximize t  subject to  s_i (a . h_i) >= t,  -1 <= a_k <= 1
//! ```
//!
//! with a dense Bland-rule simplex. Writing `a = p - q` with `p, q >= 0` puts the
//! problem in the form `max c.x, Ax <= b, x >= 0` with `b >= 0`, so the origin is a
//! feasible starting vertex and no phase one is needed. `t = 0, a = 0` is always
//! feasible, hence the optimum is nonnegative.

use crate::error::{Error, Result};
use crate::geometry::{dot, Sign, Vector};
use crate::EPS;

const PIVOT_TOL: f64 = 1e-12;
const MAX_PIVOTS: usize = 100_000;

/// One wall of a cone: the half-space `sign * (a . normal) > 0`.
#[derive(Debug, Clone, Copy)]
pub struct SignedConstraint<'a> {
    pub normal: &'a [f64],
    pub sign: Sign,
}

impl<'a> SignedConstraint<'a> {
    pub fn new(normal: &'a [f64], sign: Sign) -> Self {
        SignedConstraint { normal, sign }
    }

    pub fn slack(&self, a: &[f64]) -> f64 {
        self.sign.value() * dot(self.normal, a)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarginResult {
    pub margin: f64,
    pub witness: Vector,
}

impl MarginResult {
    /// Whether the witness is strictly interior, i.e. the margin exceeds the tolerance.
    pub fn is_feasible(&self) -> bool {
        self.margin > EPS
    }
}

/// Maximum-margin point of `{a : s_i (a . h_i) > 0}` within the unit box.
///
/// The reported margin is recomputed from the returned witness, so the witness
/// always satisfies it.
pub fn max_margin(constraints: &[SignedConstraint<'_>], dim: usize) -> Result<MarginResult> {
    assert!(dim >= 1, "dimension must be positive");
    for c in constraints {
        if c.normal.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: c.normal.len(),
            });
        }
    }
    if constraints.is_empty() {
        return Ok(MarginResult {
            margin: 1.0,
            witness: Vector::unit(dim, 0),
        });
    }

    let x = Tableau::for_margin(constraints, dim).solve()?;
    let witness: Vector = (0..dim).map(|k| (x[k] - x[dim + k]).clamp(-1.0, 1.0)).collect();
    let margin = constraints
        .iter()
        .map(|c| c.slack(&witness))
        .fold(f64::INFINITY, f64::min);
    Ok(MarginResult { margin, witness })
}

/// Dense simplex tableau for `max c.x, Ax <= b, x >= 0` with `b >= 0`.
struct Tableau {
    rows: usize,
    vars: usize,
    /// `rows` rows of `vars + rows + 1` entries; the last column is the right-hand side.
    a: Vec<f64>,
    /// Reduced costs `z_j - c_j`, plus the objective value in the last slot.
    z: Vec<f64>,
    basis: Vec<usize>,
}

impl Tableau {
    fn for_margin(constraints: &[SignedConstraint<'_>], dim: usize) -> Tableau {
        let vars = 2 * dim + 1;
        let rows = constraints.len() + 2 * dim;
        let width = vars + rows + 1;
        let mut a = vec![0.0; rows * width];
        for (r, c) in constraints.iter().enumerate() {
            let row = &mut a[r * width..(r + 1) * width];
            let s = c.sign.value();
            for k in 0..dim {
                row[k] = -s * c.normal[k];
                row[dim + k] = s * c.normal[k];
            }
            row[2 * dim] = 1.0;
        }
        for k in 0..dim {
            let r = constraints.len() + 2 * k;
            let row = &mut a[r * width..(r + 1) * width];
            row[k] = 1.0;
            row[dim + k] = -1.0;
            row[width - 1] = 1.0;
            let row = &mut a[(r + 1) * width..(r + 2) * width];
            row[k] = -1.0;
            row[dim + k] = 1.0;
            row[width - 1] = 1.0;
        }
        for r in 0..rows {
            a[r * width + vars + r] = 1.0;
        }
        let mut z = vec![0.0; width];
        z[2 * dim] = -1.0;
        Tableau {
            rows,
            vars,
            a,
            z,
            basis: (vars..vars + rows).collect(),
        }
    }

    fn width(&self) -> usize {
        self.vars + self.rows + 1
    }

    fn solve(mut self) -> Result<Vec<f64>> {
        let width = self.width();
        for _ in 0..MAX_PIVOTS {
            let Some(enter) = (0..width - 1).find(|&j| self.z[j] < -PIVOT_TOL) else {
                let mut x = vec![0.0; self.vars];
                for (r, &b) in self.basis.iter().enumerate() {
                    if b < self.vars {
                        x[b] = self.a[r * width + width - 1];
                    }
                }
                return Ok(x);
            };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.rows {
                let coef = self.a[r * width + enter];
                if coef > PIVOT_TOL {
                    let ratio = self.a[r * width + width - 1] / coef;
                    let better = match leave {
                        None => true,
                        Some((l, best)) => {
                            ratio < best - PIVOT_TOL
                                || (ratio <= best + PIVOT_TOL && self.basis[r] < self.basis[l])
                        }
                    };
                    if better {
                        leave = Some((r, ratio));
                    }
                }
            }
            // The box keeps every direction bounded.
            let Some((leave, _)) = leave else {
                return Err(Error::LpNoConvergence { iterations: 0 });
            };
            self.pivot(leave, enter);
        }
        Err(Error::LpNoConvergence {
            iterations: MAX_PIVOTS,
        })
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let width = self.width();
        let p = self.a[row * width + col];
        for j in 0..width {
            self.a[row * width + j] /= p;
        }
        let pivot_row: Vec<f64> = self.a[row * width..(row + 1) * width].to_vec();
        for r in 0..self.rows {
            if r == row {
                continue;
            }
            let f = self.a[r * width + col];
            if f != 0.0 {
                let dst = &mut self.a[r * width..(r + 1) * width];
                for (d, s) in dst.iter_mut().zip(&pivot_row) {
                    *d -= f * s;
                }
                dst[col] = 0.0;
            }
        }
        let f = self.z[col];
        if f != 0.0 {
            for (d, s) in self.z.iter_mut().zip(&pivot_row) {
                *d -= f * s;
            }
            self.z[col] = 0.0;
        }
        self.basis[row] = col;
    }
}
