//! Chambers of the central arrangement `{a : a . h = 0}` over the generator normals.
//!
//! Chambers are in bijection with the vertices of the zonotope; each carries a
//! strictly interior witness functional `a` with `|a|_inf <= 1`.
//!
//! Three enumeration strategies are provided:
//!
//! * an exact angular sweep for `d = 2`;
//! * incremental insertion with a max-margin LP per existing chamber;
//! * incremental insertion where the chambers cut by a new hyperplane `H` are found
//!   by recursively enumerating the restricted arrangement inside `H` (each chamber of
//!   the restriction is the trace of exactly one chamber that `H` splits). This needs
//!   no LP in the common case and is the default for `d >= 3`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::{classify_parallel, dot, GeneratorSet, Sign, Vector};
use crate::linprog::{max_margin, SignedConstraint};
use crate::EPS;

/// Compact sequence of signs, one per hyperplane.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SignVector {
    bits: Vec<u64>,
    len: usize,
}

impl SignVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn push(&mut self, s: Sign) {
        if self.len % 64 == 0 {
            self.bits.push(0);
        }
        if s == Sign::Pos {
            self.bits[self.len / 64] |= 1 << (self.len % 64);
        }
        self.len += 1;
    }

    pub fn get(&self, k: usize) -> Sign {
        assert!(k < self.len, "sign index {k} out of range");
        if self.bits[k / 64] >> (k % 64) & 1 == 1 {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = Sign> + '_ {
        (0..self.len).map(move |k| self.get(k))
    }

    pub fn negated(&self) -> SignVector {
        self.iter().map(Sign::flip).collect()
    }

    fn with(&self, s: Sign) -> SignVector {
        let mut v = self.clone();
        v.push(s);
        v
    }
}

impl FromIterator<Sign> for SignVector {
    fn from_iter<I: IntoIterator<Item = Sign>>(iter: I) -> Self {
        let mut v = SignVector::new();
        for s in iter {
            v.push(s);
        }
        v
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.iter() {
            write!(f, "{}", s.symbol())?;
        }
        Ok(())
    }
}

/// A maximal open cell of the arrangement with an interior witness functional.
#[derive(Debug, Clone, PartialEq)]
pub struct Chamber {
    pub signs: SignVector,
    pub witness: Vector,
}

impl Chamber {
    /// Smallest `s_k (witness . normals[k])`; `1` when there are no walls.
    pub fn margin(&self, normals: &[Vector]) -> f64 {
        self.signs
            .iter()
            .zip(normals)
            .map(|(s, h)| s.value() * h.dot(&self.witness))
            .fold(1.0, f64::min)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChamberStrategy {
    /// Sweep for `d = 2`, restriction otherwise.
    #[default]
    Auto,
    Sweep2d,
    IncrementalLp,
    Restriction,
}

/// Maximum number of chambers of a central arrangement of `m_prime` distinct
/// hyperplanes in `R^d`: `2 * sum_{k<d} C(m' - 1, k)`, and `1` without hyperplanes.
pub fn chamber_count_bound(m_prime: usize, d: usize) -> u128 {
    if m_prime == 0 {
        return 1;
    }
    let top = (m_prime - 1) as u128;
    let mut binom: u128 = 1;
    let mut sum: u128 = 0;
    for k in 0..d as u128 {
        if k > top {
            break;
        }
        sum = sum.saturating_add(binom);
        binom = binom.saturating_mul(top - k) / (k + 1);
    }
    sum.saturating_mul(2)
}

pub fn enumerate_chambers(gens: &GeneratorSet, strategy: ChamberStrategy) -> Result<Vec<Chamber>> {
    match strategy {
        ChamberStrategy::Auto if gens.dim() == 2 => enumerate_chambers_2d(gens),
        ChamberStrategy::Auto | ChamberStrategy::Restriction => enumerate_chambers_restricted(gens),
        ChamberStrategy::Sweep2d => enumerate_chambers_2d(gens),
        ChamberStrategy::IncrementalLp => enumerate_chambers_nd(gens),
    }
}

/// Witness functionals only, in the same order [`enumerate_chambers`] would return them.
///
/// Skips the sign vectors, which for the planar sweep cost `O(m'^2)` memory.
pub fn chamber_witnesses(gens: &GeneratorSet, strategy: ChamberStrategy) -> Result<Vec<Vector>> {
    match strategy {
        ChamberStrategy::Auto if gens.dim() == 2 => Ok(sweep_2d(&gens.normals)),
        ChamberStrategy::Sweep2d => {
            if gens.dim() != 2 {
                return Err(Error::UnsupportedDimension("planar sweep", 2));
            }
            Ok(sweep_2d(&gens.normals))
        }
        _ => Ok(enumerate_chambers(gens, strategy)?
            .into_iter()
            .map(|c| c.witness)
            .collect()),
    }
}

fn signs_at(normals: &[Vector], witness: &[f64]) -> SignVector {
    normals.iter().map(|h| Sign::of(h.dot(witness))).collect()
}

/// Exact planar enumeration: the lines `a . h = 0` cut the circle of directions into
/// `2 m'` open sectors, each represented by its angular midpoint.
pub fn enumerate_chambers_2d(gens: &GeneratorSet) -> Result<Vec<Chamber>> {
    if gens.dim() != 2 {
        return Err(Error::UnsupportedDimension("planar sweep", 2));
    }
    Ok(sweep_2d(&gens.normals)
        .into_iter()
        .map(|w| Chamber {
            signs: signs_at(&gens.normals, &w),
            witness: w,
        })
        .collect())
}

fn sweep_2d(normals: &[Vector]) -> Vec<Vector> {
    if normals.is_empty() {
        return vec![Vector::unit(2, 0)];
    }
    // Direction of the line a . h = 0 is (-h1, h0); reduce its angle into [0, pi).
    let mut angles: Vec<f64> = normals
        .iter()
        .map(|h| {
            let t = h[0].atan2(-h[1]);
            let t = if t < 0.0 { t + PI } else { t };
            if t >= PI {
                t - PI
            } else {
                t
            }
        })
        .collect();
    angles.sort_by(f64::total_cmp);
    let k = angles.len();
    let rays: Vec<f64> = angles
        .iter()
        .copied()
        .chain(angles.iter().map(|t| t + PI))
        .collect();

    let mut witnesses = Vec::with_capacity(2 * k);
    for i in 0..2 * k {
        let start = rays[i];
        let end = if i + 1 < 2 * k { rays[i + 1] } else { rays[0] + 2.0 * PI };
        let gap = end - start;
        let mid = 0.5 * (start + end);
        let w = Vector::new(vec![mid.cos(), mid.sin()]).into_unit_box();
        // Every canonical normal has Euclidean length >= 1, so the margin is at least
        // |w|_2 sin(gap / 2). Only thin sectors need the full check.
        let strict = (0.5 * gap).sin() * w.norm() > EPS
            || normals.iter().all(|h| h.dot(&w).abs() > EPS);
        if strict {
            witnesses.push(w);
        }
    }
    witnesses
}

fn constraints<'a>(normals: &'a [Vector], signs: &SignVector) -> Vec<SignedConstraint<'a>> {
    normals
        .iter()
        .zip(signs.iter())
        .map(|(h, s)| SignedConstraint::new(h, s))
        .collect()
}

/// Incremental enumeration with one LP per existing chamber and new hyperplane.
pub fn enumerate_chambers_nd(gens: &GeneratorSet) -> Result<Vec<Chamber>> {
    let dim = gens.dim();
    let normals = &gens.normals;
    let mut chambers = vec![Chamber {
        signs: SignVector::new(),
        witness: Vector::unit(dim, 0),
    }];
    for (k, h) in normals.iter().enumerate() {
        let prior = &normals[..k];
        let mut next = Vec::with_capacity(2 * chambers.len());
        for mut ch in chambers {
            let mut cons = constraints(prior, &ch.signs);
            let mut s = h.dot(&ch.witness);
            if s.abs() <= EPS {
                let r = max_margin(&cons, dim)?;
                if !r.is_feasible() {
                    return Err(Error::Chamber(format!(
                        "chamber {} lost its interior (margin {:e})",
                        ch.signs, r.margin
                    )));
                }
                ch.witness = r.witness;
                s = h.dot(&ch.witness);
            }
            if s.abs() > EPS {
                let side = Sign::of(s);
                cons.push(SignedConstraint::new(h, side.flip()));
                let split = max_margin(&cons, dim)?;
                let signs = ch.signs.clone();
                next.push(Chamber {
                    signs: signs.with(side),
                    witness: ch.witness,
                });
                if split.is_feasible() {
                    next.push(Chamber {
                        signs: signs.with(side.flip()),
                        witness: split.witness,
                    });
                }
            } else {
                let mut any = false;
                for side in [Sign::Pos, Sign::Neg] {
                    cons.push(SignedConstraint::new(h, side));
                    let r = max_margin(&cons, dim)?;
                    cons.pop();
                    if r.is_feasible() {
                        any = true;
                        next.push(Chamber {
                            signs: ch.signs.with(side),
                            witness: r.witness,
                        });
                    }
                }
                if !any {
                    return Err(Error::Chamber(format!(
                        "no strictly interior witness for chamber {} at hyperplane {k}",
                        ch.signs
                    )));
                }
            }
        }
        chambers = next;
    }
    Ok(chambers)
}

/// Incremental enumeration driven by recursive enumeration of restricted arrangements.
pub fn enumerate_chambers_restricted(gens: &GeneratorSet) -> Result<Vec<Chamber>> {
    restricted(gens.dim(), &gens.normals)
}

/// Witnesses of the chambers of the arrangement with the given canonical normals.
fn witnesses(dim: usize, normals: &[Vector]) -> Result<Vec<Vector>> {
    match (dim, normals.len()) {
        (_, 0) => Ok(vec![Vector::unit(dim, 0)]),
        (1, _) => Ok(vec![Vector::new(vec![1.0]), Vector::new(vec![-1.0])]),
        (2, _) => Ok(sweep_2d(normals)),
        _ => Ok(restricted(dim, normals)?.into_iter().map(|c| c.witness).collect()),
    }
}

/// Orthonormal basis of the hyperplane `h^perp`.
fn complement_basis(h: &[f64]) -> Vec<Vector> {
    let dim = h.len();
    let unit = Vector::from(h).scaled(1.0 / dot(h, h).sqrt());
    let pivot = (0..dim)
        .max_by(|&a, &b| h[a].abs().total_cmp(&h[b].abs()))
        .unwrap_or(0);
    let mut basis: Vec<Vector> = Vec::with_capacity(dim - 1);
    for e in (0..dim).filter(|&e| e != pivot) {
        let mut v = Vector::unit(dim, e);
        // Two Gram-Schmidt passes.
        for _ in 0..2 {
            let c = v.dot(&unit);
            v.add_scaled(-c, &unit);
            for b in &basis {
                let c = v.dot(b);
                v.add_scaled(-c, b);
            }
        }
        let norm = v.norm();
        basis.push(v.scaled(1.0 / norm));
    }
    basis
}

fn restricted(dim: usize, normals: &[Vector]) -> Result<Vec<Chamber>> {
    if dim == 1 {
        // Every nonzero normal is the canonical (1); the line splits into two rays.
        let walls = &normals[..normals.len().min(1)];
        let rays = if walls.is_empty() { vec![1.0] } else { vec![1.0, -1.0] };
        return Ok(rays
            .into_iter()
            .map(|x| {
                let witness = Vector::new(vec![x]);
                Chamber {
                    signs: signs_at(walls, &witness),
                    witness,
                }
            })
            .collect());
    }
    let mut chambers = vec![Chamber {
        signs: SignVector::new(),
        witness: Vector::unit(dim, 0),
    }];
    for (k, h) in normals.iter().enumerate() {
        let prior = &normals[..k];
        let frame = complement_basis(h);
        let h_unit = h.scaled(1.0 / h.norm());

        // Restricted arrangement inside h^perp, in frame coordinates.
        let projected: Vec<Vector> = prior
            .iter()
            .map(|p| frame.iter().map(|u| u.dot(p)).collect())
            .collect();
        for (i, p) in projected.iter().enumerate() {
            if p.norm_inf() <= 1e-12 * prior[i].norm_inf() {
                return Err(Error::Chamber(format!(
                    "hyperplanes {i} and {k} are numerically parallel"
                )));
            }
        }
        let (sub_normals, sub_dir) = classify_parallel(dim - 1, &projected);
        let sub_witnesses = witnesses(dim - 1, &sub_normals)?;

        let index: HashMap<&SignVector, usize> = chambers
            .iter()
            .enumerate()
            .map(|(i, c)| (&c.signs, i))
            .collect();
        let mut split: Vec<Option<(Vector, Vector)>> = vec![None; chambers.len()];
        for q_sub in &sub_witnesses {
            let sub_side: Vec<Sign> = sub_normals.iter().map(|r| Sign::of(r.dot(q_sub))).collect();
            let key: SignVector = sub_dir.iter().map(|&(c, s)| s * sub_side[c]).collect();
            let &idx = index.get(&key).ok_or_else(|| {
                Error::Chamber(format!("restricted cell {key} matches no chamber"))
            })?;
            if split[idx].is_some() {
                return Err(Error::Chamber(format!("chamber {key} split twice")));
            }
            let mut q = Vector::zeros(dim);
            for (u, c) in frame.iter().zip(q_sub.iter()) {
                q.add_scaled(*c, u);
            }
            // Step off h^perp without crossing any earlier wall.
            let mut step = f64::INFINITY;
            for p in prior {
                let across = h_unit.dot(p).abs();
                if across > 0.0 {
                    step = step.min(p.dot(&q).abs() / across);
                }
            }
            let step = if step.is_finite() { 0.5 * step } else { 1.0 };
            let mut plus = q.clone();
            plus.add_scaled(step, &h_unit);
            let mut minus = q;
            minus.add_scaled(-step, &h_unit);
            split[idx] = Some((plus.into_unit_box(), minus.into_unit_box()));
        }
        drop(index);

        let all = &normals[..=k];
        let mut next = Vec::with_capacity(chambers.len() + sub_witnesses.len());
        for (ch, pieces) in chambers.into_iter().zip(split) {
            match pieces {
                Some((plus, minus)) => {
                    for (side, w) in [(Sign::Pos, plus), (Sign::Neg, minus)] {
                        let signs = ch.signs.with(side);
                        if let Some(w) = ensure_interior(all, &signs, w)? {
                            next.push(Chamber { signs, witness: w });
                        }
                    }
                }
                None => {
                    let s = h.dot(&ch.witness);
                    if s.abs() > EPS {
                        next.push(Chamber {
                            signs: ch.signs.with(Sign::of(s)),
                            witness: ch.witness,
                        });
                        continue;
                    }
                    let mut any = false;
                    for side in [Sign::Pos, Sign::Neg] {
                        let signs = ch.signs.with(side);
                        let r = max_margin(&constraints(all, &signs), dim)?;
                        if r.is_feasible() {
                            any = true;
                            next.push(Chamber {
                                signs,
                                witness: r.witness,
                            });
                        }
                    }
                    if !any {
                        return Err(Error::Chamber(format!(
                            "no strictly interior witness for chamber {} at hyperplane {k}",
                            ch.signs
                        )));
                    }
                }
            }
        }
        chambers = next;
    }
    Ok(chambers)
}

/// Returns `w` if it is strictly interior to the cone given by `signs`, otherwise the
/// max-margin witness, or `None` when the cone is too thin to certify.
fn ensure_interior(normals: &[Vector], signs: &SignVector, w: Vector) -> Result<Option<Vector>> {
    let ok = normals
        .iter()
        .zip(signs.iter())
        .all(|(h, s)| s.value() * h.dot(&w) > EPS);
    if ok {
        return Ok(Some(w));
    }
    let r = max_margin(&constraints(normals, signs), w.dim())?;
    Ok(r.is_feasible().then_some(r.witness))
}
