//! Independence oracles, concrete matroids, and the greedy algorithm.

use std::cell::Cell;

use itertools::Itertools;

use crate::error::{Error, Result};

/// Pivot tolerance for linear independence tests.
const PIVOT_TOL: f64 = 1e-9;

/// A matroid on `{0..n}` presented by an independence oracle.
pub trait Matroid {
    fn ground_size(&self) -> usize;

    /// Whether the elements of `subset` form an independent set. `subset` must not
    /// contain duplicates.
    fn is_independent(&self, subset: &[usize]) -> Result<bool>;
}

impl<M: Matroid + ?Sized> Matroid for &M {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }
    fn is_independent(&self, subset: &[usize]) -> Result<bool> {
        (**self).is_independent(subset)
    }
}

/// A maximal independent set, elements ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Basis {
    pub elements: Vec<usize>,
}

impl Basis {
    pub fn new(mut elements: Vec<usize>) -> Self {
        elements.sort_unstable();
        Basis { elements }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.elements.binary_search(&j).is_ok()
    }

    /// `sum_{j in B} b(j)`.
    pub fn weight(&self, b: &[f64]) -> f64 {
        self.elements.iter().map(|&j| b[j]).sum()
    }

    /// 0/1 incidence vector over a ground set of size `n`.
    pub fn indicator(&self, n: usize) -> Vec<u8> {
        let mut x = vec![0; n];
        for &j in &self.elements {
            x[j] = 1;
        }
        x
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConcreteMatroid {
    /// Subsets of size at most `rank`.
    Uniform { n: usize, rank: usize },
    /// Acyclic edge subsets of a multigraph on `vertices` vertices.
    Graphic {
        vertices: usize,
        edges: Vec<(usize, usize)>,
    },
    /// At most `capacities[b]` elements from each block `b`.
    Partition {
        block_of: Vec<usize>,
        capacities: Vec<usize>,
    },
    /// Linearly independent columns of a row-major `rows x n` matrix.
    Linear { rows: usize, matrix: Vec<f64>, n: usize },
}

impl ConcreteMatroid {
    pub fn uniform(n: usize, rank: usize) -> Result<Self> {
        if rank > n {
            return Err(Error::InvalidMatroid(format!(
                "uniform rank {rank} exceeds ground set size {n}"
            )));
        }
        Ok(ConcreteMatroid::Uniform { n, rank })
    }

    pub fn graphic(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= vertices || v >= vertices) {
            return Err(Error::InvalidMatroid(format!(
                "edge ({u}, {v}) references a vertex outside 0..{vertices}"
            )));
        }
        Ok(ConcreteMatroid::Graphic { vertices, edges })
    }

    pub fn partition(block_of: Vec<usize>, capacities: Vec<usize>) -> Result<Self> {
        if let Some(&b) = block_of.iter().find(|&&b| b >= capacities.len()) {
            return Err(Error::InvalidMatroid(format!(
                "block {b} has no capacity ({} blocks given)",
                capacities.len()
            )));
        }
        Ok(ConcreteMatroid::Partition {
            block_of,
            capacities,
        })
    }

    /// `columns[j]` is the vector of element `j`; all columns need the same length.
    pub fn linear(columns: &[Vec<f64>]) -> Result<Self> {
        let rows = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::InvalidMatroid("linear matroid columns differ in length".into()));
        }
        Self::linear_from_rows(
            rows,
            (0..rows)
                .map(|r| columns.iter().map(|c| c[r]).collect())
                .collect(),
            columns.len(),
        )
    }

    pub fn linear_from_rows(rows: usize, row_data: Vec<Vec<f64>>, n: usize) -> Result<Self> {
        if row_data.len() != rows || row_data.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMatroid(format!(
                "linear matroid matrix must be {rows} x {n}"
            )));
        }
        let matrix: Vec<f64> = row_data.into_iter().flatten().collect();
        if matrix.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidMatroid("linear matroid matrix is not finite".into()));
        }
        Ok(ConcreteMatroid::Linear { rows, matrix, n })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ConcreteMatroid::Uniform { .. } => "uniform",
            ConcreteMatroid::Graphic { .. } => "graphic",
            ConcreteMatroid::Partition { .. } => "partition",
            ConcreteMatroid::Linear { .. } => "linear",
        }
    }
}

impl Matroid for ConcreteMatroid {
    fn ground_size(&self) -> usize {
        match self {
            ConcreteMatroid::Uniform { n, .. } => *n,
            ConcreteMatroid::Graphic { edges, .. } => edges.len(),
            ConcreteMatroid::Partition { block_of, .. } => block_of.len(),
            ConcreteMatroid::Linear { n, .. } => *n,
        }
    }

    fn is_independent(&self, subset: &[usize]) -> Result<bool> {
        let n = self.ground_size();
        if let Some(&index) = subset.iter().find(|&&j| j >= n) {
            return Err(Error::IndexOutOfRange { index, n });
        }
        Ok(match self {
            ConcreteMatroid::Uniform { rank, .. } => subset.len() <= *rank,
            ConcreteMatroid::Graphic { vertices, edges } => {
                let mut uf = UnionFind::new(*vertices);
                subset.iter().all(|&e| {
                    let (u, v) = edges[e];
                    uf.union(u, v)
                })
            }
            ConcreteMatroid::Partition {
                block_of,
                capacities,
            } => {
                let mut used = vec![0usize; capacities.len()];
                subset.iter().all(|&j| {
                    let b = block_of[j];
                    used[b] += 1;
                    used[b] <= capacities[b]
                })
            }
            ConcreteMatroid::Linear { rows, matrix, n } => {
                columns_independent(*rows, matrix, *n, subset)
            }
        })
    }
}

/// Union-find with path halving and union by size.
struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the classes of `a` and `b`; false if they were already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }
}

/// Gaussian elimination with partial pivoting on the selected columns.
fn columns_independent(rows: usize, matrix: &[f64], n: usize, subset: &[usize]) -> bool {
    let k = subset.len();
    if k > rows {
        return false;
    }
    if k == 0 {
        return true;
    }
    // Column-major copy of the selected columns.
    let mut cols: Vec<Vec<f64>> = subset
        .iter()
        .map(|&j| (0..rows).map(|r| matrix[r * n + j]).collect())
        .collect();
    let scale = cols
        .iter()
        .flatten()
        .fold(1.0f64, |m, x| m.max(x.abs()));
    let tol = PIVOT_TOL * scale;
    for c in 0..k {
        // Pivot row among c..rows for column c.
        let (p, best) = (c..rows)
            .map(|r| (r, cols[c][r].abs()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if best <= tol {
            return false;
        }
        for col in cols.iter_mut() {
            col.swap(c, p);
        }
        let pivot = cols[c][c];
        for other in c + 1..k {
            let f = cols[other][c] / pivot;
            if f != 0.0 {
                for r in c..rows {
                    let v = cols[c][r];
                    cols[other][r] -= f * v;
                }
            }
        }
    }
    true
}

/// Rank: size of the greedy maximal independent set scanned over `0..n`.
pub fn rank<M: Matroid + ?Sized>(m: &M) -> Result<usize> {
    let mut set = Vec::new();
    for j in 0..m.ground_size() {
        set.push(j);
        if !m.is_independent(&set)? {
            set.pop();
        }
    }
    Ok(set.len())
}

/// Work performed by one greedy run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GreedyStats {
    pub comparisons: u64,
    pub oracle_queries: u64,
}

/// Maximum `b`-weight basis.
///
/// Elements are scanned by decreasing `b`, ties by increasing index, and kept when
/// they preserve independence.
pub fn greedy_max_basis<M: Matroid + ?Sized>(m: &M, b: &[f64]) -> Result<Basis> {
    greedy_with_stats(m, b).map(|(basis, _)| basis)
}

pub fn greedy_with_stats<M: Matroid + ?Sized>(m: &M, b: &[f64]) -> Result<(Basis, GreedyStats)> {
    let n = m.ground_size();
    if b.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: b.len(),
        });
    }
    let comparisons = Cell::new(0u64);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| {
        comparisons.set(comparisons.get() + 1);
        b[y].total_cmp(&b[x]).then(x.cmp(&y))
    });
    let mut set = Vec::new();
    for &j in &order {
        set.push(j);
        if !m.is_independent(&set)? {
            set.pop();
        }
    }
    let stats = GreedyStats {
        comparisons: comparisons.get(),
        oracle_queries: n as u64,
    };
    Ok((Basis::new(set), stats))
}

/// Limits on exhaustive basis enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationLimits {
    pub max_n: usize,
    pub max_subsets: u128,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits {
            max_n: 20,
            max_subsets: 1_000_000,
        }
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k.min(n));
    (0..k as u128).fold(1u128, |acc, i| acc * (n as u128 - i) / (i + 1))
}

/// All bases in lexicographic order.
pub fn enumerate_bases<M: Matroid + ?Sized>(m: &M, limits: EnumerationLimits) -> Result<Vec<Basis>> {
    let n = m.ground_size();
    if n > limits.max_n {
        return Err(Error::LimitExceeded(format!(
            "ground set of size {n} exceeds the limit {}",
            limits.max_n
        )));
    }
    let r = rank(m)?;
    let count = binomial(n, r);
    if count > limits.max_subsets {
        return Err(Error::LimitExceeded(format!(
            "C({n}, {r}) = {count} candidate subsets exceeds the limit {}",
            limits.max_subsets
        )));
    }
    let mut bases = Vec::new();
    for subset in (0..n).combinations(r) {
        if m.is_independent(&subset)? {
            bases.push(Basis { elements: subset });
        }
    }
    Ok(bases)
}
