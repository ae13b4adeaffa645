//! Vectors, instances, and the generator set of the pairwise-difference zonotope.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Deref, DerefMut, Neg};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::EPS;

/// Relative per-coordinate tolerance used when merging parallel classes.
const PARALLEL_TOL: f64 = 1e-10;

/// Coordinates below this fraction of the infinity norm count as zero when
/// locating the leading coordinate of a direction.
const LEADING_ZERO_TOL: f64 = 1e-12;

/// A point or direction in `R^d`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(coords: Vec<f64>) -> Self {
        Vector(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        Vector(vec![0.0; dim])
    }

    /// The `k`-th standard unit vector.
    pub fn unit(dim: usize, k: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[k] = 1.0;
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn dot(&self, other: &[f64]) -> f64 {
        dot(&self.0, other)
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(&self.0)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn norm_inf(&self) -> f64 {
        self.0.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn scaled(&self, factor: f64) -> Vector {
        self.0.iter().map(|x| x * factor).collect()
    }

    pub fn add_assign(&mut self, other: &[f64]) {
        for (a, b) in self.0.iter_mut().zip(other) {
            *a += b;
        }
    }

    pub fn add_scaled(&mut self, factor: f64, other: &[f64]) {
        for (a, b) in self.0.iter_mut().zip(other) {
            *a += factor * b;
        }
    }

    pub fn sub(&self, other: &[f64]) -> Vector {
        self.0.iter().zip(other).map(|(a, b)| a - b).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    /// Rescales so that the infinity norm is one. Zero vectors are returned unchanged.
    pub fn into_unit_box(self) -> Vector {
        let m = self.norm_inf();
        if m > 0.0 {
            self.scaled(1.0 / m)
        } else {
            self
        }
    }

    /// Largest coordinate-wise distance to `other`.
    pub fn dist_inf(&self, other: &[f64]) -> f64 {
        self.0
            .iter()
            .zip(other)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

impl Deref for Vector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl DerefMut for Vector {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }
}

impl AsRef<[f64]> for Vector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for Vector {
    fn from(v: Vec<f64>) -> Self {
        Vector(v)
    }
}

impl From<&[f64]> for Vector {
    fn from(v: &[f64]) -> Self {
        Vector(v.to_vec())
    }
}

impl FromIterator<f64> for Vector {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        Vector(iter.into_iter().collect())
    }
}

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        self.0.iter().map(|x| -x).collect()
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Orientation of a functional relative to a hyperplane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Neg,
    Pos,
}

impl Sign {
    /// `Pos` for strictly positive input, `Neg` otherwise.
    pub fn of(x: f64) -> Sign {
        if x > 0.0 {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Sign::Pos => 1.0,
            Sign::Neg => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Pos => '+',
            Sign::Neg => '-',
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }
}

/// Ground set `{0..n}` weighted by vectors in `R^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    dim: usize,
    weights: Vec<Vector>,
}

impl Instance {
    pub fn new(dim: usize, weights: Vec<Vector>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInstance("dimension must be at least 1".into()));
        }
        for (j, w) in weights.iter().enumerate() {
            if w.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: w.dim(),
                });
            }
            if !w.is_finite() {
                return Err(Error::InvalidInstance(format!(
                    "weight of element {} is not finite",
                    j + 1
                )));
            }
        }
        Ok(Instance { dim, weights })
    }

    /// Builds an instance from rows of coordinates; the dimension is taken from the
    /// first row, so at least one row is required.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let dim = rows
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::InvalidInstance("no weights given".into()))?;
        Self::new(dim, rows.into_iter().map(Vector::new).collect())
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn weights(&self) -> &[Vector] {
        &self.weights
    }

    pub fn weight(&self, j: usize) -> &Vector {
        &self.weights[j]
    }

    /// `w(J)`: the sum of the weights of the elements of `subset`; zero for the empty set.
    pub fn weight_sum(&self, subset: &[usize]) -> Result<Vector> {
        let mut acc = Vector::zeros(self.dim);
        for &j in subset {
            let w = self.weights.get(j).ok_or(Error::IndexOutOfRange {
                index: j,
                n: self.n(),
            })?;
            acc.add_assign(w);
        }
        Ok(acc)
    }

    /// `w(N)`.
    pub fn total(&self) -> Vector {
        let mut acc = Vector::zeros(self.dim);
        for w in &self.weights {
            acc.add_assign(w);
        }
        acc
    }
}

/// A nonzero pairwise difference `w(i) - w(j)` with `i < j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    pub i: usize,
    pub j: usize,
    pub vector: Vector,
}

/// Segment directions of the zonotope together with their distinct hyperplane normals.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSet {
    dim: usize,
    pub raw: Vec<Generator>,
    pub normals: Vec<Vector>,
    /// For every raw generator `g`: `(k, s)` with `g` a positive multiple of `s * normals[k]`.
    pub direction_of: Vec<(usize, Sign)>,
}

impl GeneratorSet {
    pub fn build(inst: &Instance) -> GeneratorSet {
        let n = inst.n();
        let mut raw = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let (wi, wj) = (inst.weight(i), inst.weight(j));
                if wi == wj {
                    continue;
                }
                raw.push(Generator {
                    i,
                    j,
                    vector: wi.sub(wj),
                });
            }
        }
        let vectors: Vec<&Vector> = raw.iter().map(|g| &g.vector).collect();
        let (normals, direction_of) = classify_parallel(inst.dim(), &vectors);
        GeneratorSet {
            dim: inst.dim(),
            raw,
            normals,
            direction_of,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of distinct hyperplanes in the arrangement.
    pub fn m_prime(&self) -> usize {
        self.normals.len()
    }

    /// The zonotope vertex `sum sign(a . g) g` whose normal cone contains `witness`.
    ///
    /// Genericity is tested against the canonical normals, which makes the check
    /// independent of the lengths of the raw generators.
    pub fn zonotope_vertex(&self, witness: &[f64]) -> Result<Vector> {
        if witness.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: witness.len(),
            });
        }
        let mut side = Vec::with_capacity(self.normals.len());
        for (k, h) in self.normals.iter().enumerate() {
            let s = h.dot(witness);
            if s.abs() <= EPS {
                return Err(Error::NonGenericWitness { index: k, dot: s });
            }
            side.push(Sign::of(s));
        }
        let mut v = Vector::zeros(self.dim);
        for (g, &(k, sigma)) in self.raw.iter().zip(&self.direction_of) {
            v.add_scaled((sigma * side[k]).value(), &g.vector);
        }
        Ok(v)
    }
}

/// Canonical representative of the line spanned by `v`: the leading coordinate
/// becomes `+1`. Returns the representative, the sign `s` and the scale `l > 0`
/// with `v = l * s * canonical`, or `None` for the zero vector.
pub fn canonicalize(v: &[f64]) -> Option<(Vector, Sign, f64)> {
    let m = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if m == 0.0 || !m.is_finite() {
        return None;
    }
    let lead = v.iter().position(|x| x.abs() > LEADING_ZERO_TOL * m)?;
    let scale = v[lead].abs();
    let sign = Sign::of(v[lead]);
    let factor = sign.value() / scale;
    let canonical = v
        .iter()
        .enumerate()
        .map(|(k, &x)| match k.cmp(&lead) {
            Ordering::Less => 0.0,
            Ordering::Equal => 1.0,
            Ordering::Greater => x * factor,
        })
        .collect();
    Some((canonical, sign, scale))
}

fn leading_index(c: &[f64]) -> usize {
    c.iter().position(|&x| x == 1.0).unwrap_or(0)
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= PARALLEL_TOL * a.abs().max(b.abs()).max(1.0)
}

/// Groups nonzero vectors into parallel classes.
///
/// Returns one canonical normal per class, numbered by first appearance in the
/// input, and for every input vector its class and orientation.
///
/// # Panics
///
/// Panics if any input vector is zero.
pub fn classify_parallel<V: AsRef<[f64]>>(dim: usize, vectors: &[V]) -> (Vec<Vector>, Vec<(usize, Sign)>) {
    let canon: Vec<(Vector, Sign)> = vectors
        .iter()
        .map(|v| {
            let v = v.as_ref();
            debug_assert_eq!(v.len(), dim);
            let (c, s, _) = canonicalize(v).expect("zero vector has no direction");
            (c, s)
        })
        .collect();
    let lead: Vec<usize> = canon.iter().map(|(c, _)| leading_index(c)).collect();

    let mut order: Vec<usize> = (0..canon.len()).collect();
    order.sort_by(|&x, &y| {
        lead[x].cmp(&lead[y]).then_with(|| {
            canon[x]
                .0
                .iter()
                .zip(canon[y].0.iter())
                .map(|(a, b)| a.total_cmp(b))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    });

    // Representatives in sorted order; the sort key after the leading coordinate is
    // nondecreasing, so candidates for merging sit in a window at the tail.
    let mut reps: Vec<usize> = Vec::new();
    let mut group_of = vec![usize::MAX; canon.len()];
    for &x in &order {
        let c = &canon[x].0;
        let key_pos = lead[x] + 1;
        let mut found = None;
        for (g, &r) in reps.iter().enumerate().rev() {
            if lead[r] != lead[x] {
                break;
            }
            let rc = &canon[r].0;
            if key_pos < dim && !close(rc[key_pos], c[key_pos]) {
                // Two tolerance widths keep the scan window conservative.
                if c[key_pos] - rc[key_pos] > 2.0 * PARALLEL_TOL * c[key_pos].abs().max(rc[key_pos].abs()).max(1.0) {
                    break;
                }
                continue;
            }
            if rc.iter().zip(c.iter()).all(|(&a, &b)| close(a, b)) {
                found = Some(g);
                break;
            }
        }
        match found {
            Some(g) => group_of[x] = g,
            None => {
                group_of[x] = reps.len();
                reps.push(x);
            }
        }
    }

    // Renumber classes by first appearance in input order.
    let mut renumber = vec![usize::MAX; reps.len()];
    let mut normals = Vec::with_capacity(reps.len());
    let mut direction_of = Vec::with_capacity(canon.len());
    for x in 0..canon.len() {
        let g = group_of[x];
        if renumber[g] == usize::MAX {
            renumber[g] = normals.len();
            normals.push(canon[reps[g]].0.clone());
        }
        direction_of.push((renumber[g], canon[x].1));
    }
    (normals, direction_of)
}
