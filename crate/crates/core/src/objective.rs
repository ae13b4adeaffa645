//! Convex functionals presented by evaluation oracles.

use crate::error::{Error, Result};
use crate::geometry::{dot, Vector};

/// An evaluation oracle for a functional `c : R^d -> R`.
///
/// Convexity is trusted, not checked; the solver's optimality guarantee relies on it.
pub trait EvaluationOracle {
    /// The required input dimension, if the functional fixes one.
    fn dim(&self) -> Option<usize>;

    fn evaluate(&self, x: &[f64]) -> Result<f64>;
}

impl<O: EvaluationOracle + ?Sized> EvaluationOracle for &O {
    fn dim(&self) -> Option<usize> {
        (**self).dim()
    }
    fn evaluate(&self, x: &[f64]) -> Result<f64> {
        (**self).evaluate(x)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConvexObjective {
    /// `|x|_2^2`
    SqNorm,
    /// `|x|_p` for `p >= 1`, with `p = inf` the max norm.
    PNorm(f64),
    /// `max_k rows[k] . x`
    MaxLin(Vec<Vector>),
    /// `|x|^2 + |t - x|^2`
    Balanced(Vector),
}

impl ConvexObjective {
    pub fn pnorm(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidObjective(format!("p-norm needs p >= 1, got {p}")));
        }
        Ok(ConvexObjective::PNorm(p))
    }

    pub fn max_lin(rows: Vec<Vector>) -> Result<Self> {
        let dim = rows
            .first()
            .map(|r| r.dim())
            .ok_or_else(|| Error::InvalidObjective("max of linear functionals needs a row".into()))?;
        if rows.iter().any(|r| r.dim() != dim || !r.is_finite()) {
            return Err(Error::InvalidObjective("rows must be finite and of equal length".into()));
        }
        Ok(ConvexObjective::MaxLin(rows))
    }

    pub fn balanced(total: Vector) -> Self {
        ConvexObjective::Balanced(total)
    }

    pub fn name(&self) -> &'static str {
        match self {
            ConvexObjective::SqNorm => "sqnorm",
            ConvexObjective::PNorm(_) => "pnorm",
            ConvexObjective::MaxLin(_) => "maxlin",
            ConvexObjective::Balanced(_) => "balanced",
        }
    }
}

impl EvaluationOracle for ConvexObjective {
    fn dim(&self) -> Option<usize> {
        match self {
            ConvexObjective::SqNorm | ConvexObjective::PNorm(_) => None,
            ConvexObjective::MaxLin(rows) => rows.first().map(|r| r.dim()),
            ConvexObjective::Balanced(t) => Some(t.dim()),
        }
    }

    fn evaluate(&self, x: &[f64]) -> Result<f64> {
        if let Some(expected) = self.dim() {
            if expected != x.len() {
                return Err(Error::DimensionMismatch {
                    expected,
                    found: x.len(),
                });
            }
        }
        Ok(match self {
            ConvexObjective::SqNorm => dot(x, x),
            ConvexObjective::PNorm(p) if p.is_infinite() => x.iter().fold(0.0, |m, v| m.max(v.abs())),
            ConvexObjective::PNorm(p) => x.iter().map(|v| v.abs().powf(*p)).sum::<f64>().powf(1.0 / p),
            ConvexObjective::MaxLin(rows) => rows
                .iter()
                .map(|r| r.dot(x))
                .fold(f64::NEG_INFINITY, f64::max),
            ConvexObjective::Balanced(t) => {
                let rest: f64 = t.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum();
                dot(x, x) + rest
            }
        })
    }
}
