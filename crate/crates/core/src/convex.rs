//! Exact convex bodies in the nonnegative orthant, in vertex representation.
//!
//! Bodies are stored canonically: extreme points only, sorted
//! lexicographically. Two bodies are equal iff their vertex lists are. Facet
//! (H-representation) data is derived lazily and cached on the body.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::linalg;
use crate::lp::{LinearProgram, LpOutcome};
use crate::scalar::Field;

pub type Point<F> = Vec<F>;

/// A supporting hyperplane `normal . x <= offset` of a full-dimensional body.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Facet<F> {
    pub normal: Vec<F>,
    pub offset: F,
}

#[derive(Debug)]
pub struct ConvexBody<F> {
    dim: usize,
    vertices: Vec<Point<F>>,
    facets: OnceLock<Vec<Facet<F>>>,
}

impl<F: Field> Clone for ConvexBody<F> {
    fn clone(&self) -> Self {
        ConvexBody {
            dim: self.dim,
            vertices: self.vertices.clone(),
            facets: self.facets.clone(),
        }
    }
}

impl<F: Field> PartialEq for ConvexBody<F> {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.vertices == other.vertices
    }
}

impl<F: Field> Eq for ConvexBody<F> {}

/// Lengths of the largest origin-rooted axis simplex inside a body.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubSimplex<F> {
    pub lengths: Vec<F>,
}

impl<F: Field> SubSimplex<F> {
    pub fn min(&self) -> F {
        self.lengths.iter().min().cloned().unwrap_or_else(F::zero)
    }

    /// Length along the last axis.
    pub fn last(&self) -> F {
        self.lengths.last().cloned().unwrap_or_else(F::zero)
    }
}

impl<F: Field> ConvexBody<F> {
    pub fn empty(dim: usize) -> Self {
        ConvexBody {
            dim,
            vertices: Vec::new(),
            facets: OnceLock::new(),
        }
    }

    pub fn origin(dim: usize) -> Self {
        ConvexBody {
            dim,
            vertices: vec![vec![F::zero(); dim]],
            facets: OnceLock::new(),
        }
    }

    /// Convex hull of `points`, which must lie in the nonnegative orthant.
    pub fn from_points(dim: usize, points: Vec<Point<F>>) -> Result<Self> {
        for p in &points {
            if p.len() != dim {
                return Err(Error::Dimension {
                    expected: dim,
                    found: p.len(),
                });
            }
            if p.iter().any(|x| x.is_negative()) {
                return Err(Error::OrthantViolation);
            }
        }
        Ok(ConvexBody {
            dim,
            vertices: extreme_points(dim, points),
            facets: OnceLock::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Point<F>] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if n != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                found: n,
            });
        }
        Ok(())
    }

    pub fn contains_point(&self, p: &[F]) -> Result<bool> {
        self.check_dim(p.len())?;
        if self.vertices.is_empty() {
            return Ok(false);
        }
        if self.vertices.iter().any(|v| v.as_slice() == p) {
            return Ok(true);
        }
        Ok(in_hull(&self.vertices, p))
    }

    pub fn contains_origin(&self) -> bool {
        self.contains_point(&vec![F::zero(); self.dim])
            .expect("origin has the body's dimension")
    }

    /// `other` is a subset of `self`.
    pub fn contains_body(&self, other: &Self) -> Result<bool> {
        self.check_dim(other.dim)?;
        for v in &other.vertices {
            if !self.contains_point(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `max { s >= 0 : s e_axis in body }`, or `None` if the ray misses the body.
    pub fn axis_extent(&self, axis: usize) -> Option<F> {
        if self.vertices.is_empty() {
            return None;
        }
        let nv = self.vertices.len();
        // variables: convex weights, then s
        let mut a: Vec<Vec<F>> = (0..self.dim)
            .map(|k| {
                let mut row: Vec<F> = self.vertices.iter().map(|v| v[k].clone()).collect();
                row.push(if k == axis { -F::one() } else { F::zero() });
                row
            })
            .collect();
        let mut sum = vec![F::one(); nv];
        sum.push(F::zero());
        a.push(sum);
        let mut b = vec![F::zero(); self.dim];
        b.push(F::one());
        let mut c = vec![F::zero(); nv];
        c.push(F::one());
        match LinearProgram::new(a, b, c).solve() {
            LpOutcome::Optimal { value, .. } => Some(value),
            LpOutcome::Infeasible => None,
            LpOutcome::Unbounded => unreachable!("bodies are bounded"),
        }
    }

    pub fn max_subsimplex(&self) -> SubSimplex<F> {
        if !self.contains_origin() {
            return SubSimplex {
                lengths: vec![F::zero(); self.dim],
            };
        }
        SubSimplex {
            lengths: (0..self.dim)
                .map(|i| self.axis_extent(i).unwrap_or_else(F::zero))
                .collect(),
        }
    }

    /// Whether `U ∩ R^n_{>=0}` lies in the body for some open neighborhood `U`
    /// of the origin: origin membership plus a positive extent on every axis.
    pub fn has_orthant_neighborhood(&self) -> bool {
        let s = self.max_subsimplex();
        self.contains_origin() && s.lengths.iter().all(|l| l.is_positive())
    }

    pub fn minkowski_sum(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.dim)?;
        if self.is_empty() || other.is_empty() {
            return Ok(ConvexBody::empty(self.dim));
        }
        let mut pts = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for a in &self.vertices {
            for b in &other.vertices {
                pts.push(
                    a.iter()
                        .zip(b)
                        .map(|(x, y)| x.clone() + y.clone())
                        .collect(),
                );
            }
        }
        ConvexBody::from_points(self.dim, pts)
    }

    /// Intersection with `{x_1 = ... = x_k = 0}`, projected to the last `n - k` coordinates.
    ///
    /// In the orthant that set is a face of the body, so it is the hull of the
    /// vertices lying on it.
    pub fn slice_first_zero(&self, k: usize) -> Self {
        let k = k.min(self.dim);
        let pts: Vec<Point<F>> = self
            .vertices
            .iter()
            .filter(|v| v[..k].iter().all(|x| x.is_zero()))
            .map(|v| v[k..].to_vec())
            .collect();
        ConvexBody::from_points(self.dim - k, pts).expect("face of an orthant body")
    }

    pub fn translate(&self, v: &[F]) -> Result<Self> {
        self.check_dim(v.len())?;
        let pts: Vec<Point<F>> = self
            .vertices
            .iter()
            .map(|p| {
                p.iter()
                    .zip(v)
                    .map(|(x, y)| x.clone() + y.clone())
                    .collect()
            })
            .collect();
        for p in &pts {
            if p.iter().any(|x| x.is_negative()) {
                return Err(Error::OrthantViolation);
            }
        }
        Ok(ConvexBody {
            dim: self.dim,
            vertices: pts,
            facets: OnceLock::new(),
        })
    }

    /// `c * body` for `c >= 0`.
    pub fn scale(&self, c: &F) -> Self {
        assert!(!c.is_negative(), "scale factor must be nonnegative");
        let pts = self
            .vertices
            .iter()
            .map(|p| p.iter().map(|x| x.clone() * c.clone()).collect())
            .collect();
        ConvexBody::from_points(self.dim, pts).expect("scaled orthant body")
    }

    /// Minimum of coordinate `axis` over the body.
    pub fn min_coordinate(&self, axis: usize) -> Option<F> {
        self.vertices.iter().map(|v| v[axis].clone()).min()
    }

    pub fn max_coordinate(&self, axis: usize) -> Option<F> {
        self.vertices.iter().map(|v| v[axis].clone()).max()
    }

    pub fn is_full_dimensional(&self) -> bool {
        affine_rank(&self.vertices) == self.dim
    }

    /// Facets of a full-dimensional body (empty otherwise), computed once.
    pub fn facets(&self) -> &[Facet<F>] {
        self.facets.get_or_init(|| {
            if self.is_full_dimensional() {
                facets_of(&self.vertices, self.dim)
            } else {
                Vec::new()
            }
        })
    }

    /// Exact `n`-volume; zero for lower-dimensional bodies.
    pub fn volume(&self) -> F {
        if !self.is_full_dimensional() {
            return F::zero();
        }
        if self.dim == 1 {
            return hull_volume(&self.vertices, 1);
        }
        cone_volume(&self.vertices, self.dim, self.facets())
    }
}

fn in_hull<F: Field>(vertices: &[Point<F>], p: &[F]) -> bool {
    let n = p.len();
    let mut a: Vec<Vec<F>> = (0..n)
        .map(|k| vertices.iter().map(|v| v[k].clone()).collect())
        .collect();
    a.push(vec![F::one(); vertices.len()]);
    let mut b = p.to_vec();
    b.push(F::one());
    LinearProgram::feasibility(a, b).solve().is_feasible()
}

fn cross<F: Field>(o: &[F], a: &[F], b: &[F]) -> F {
    (a[0].clone() - o[0].clone()) * (b[1].clone() - o[1].clone())
        - (a[1].clone() - o[1].clone()) * (b[0].clone() - o[0].clone())
}

/// Planar hull by monotone chain, collinear points dropped.
fn planar_hull<F: Field>(pts: &[Point<F>]) -> Vec<Point<F>> {
    if pts.len() <= 2 {
        return pts.to_vec();
    }
    let mut lower: Vec<Point<F>> = Vec::new();
    for p in pts {
        while lower.len() >= 2
            && !cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive()
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point<F>> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive()
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Extreme points, sorted lexicographically.
fn extreme_points<F: Field>(dim: usize, mut pts: Vec<Point<F>>) -> Vec<Point<F>> {
    pts.sort();
    pts.dedup();
    let mut out = if dim == 2 {
        planar_hull(&pts)
    } else {
        extreme_points_lp(&pts)
    };
    out.sort();
    out
}

/// Drops every point lying in the hull of the others.
pub(crate) fn extreme_points_lp<F: Field>(pts: &[Point<F>]) -> Vec<Point<F>> {
    let mut keep: Vec<Point<F>> = pts.to_vec();
    let mut i = 0;
    while i < keep.len() {
        if keep.len() > 1 {
            let others: Vec<Point<F>> = keep
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, p)| p.clone())
                .collect();
            if in_hull(&others, &keep[i]) {
                keep.remove(i);
                continue;
            }
        }
        i += 1;
    }
    keep
}

/// Dimension of the affine hull.
pub fn affine_rank<F: Field>(pts: &[Point<F>]) -> usize {
    let Some(first) = pts.first() else {
        return 0;
    };
    let diffs: Vec<Vec<F>> = pts[1..]
        .iter()
        .map(|p| {
            p.iter()
                .zip(first)
                .map(|(a, b)| a.clone() - b.clone())
                .collect()
        })
        .collect();
    if diffs.is_empty() {
        0
    } else {
        linalg::rank(&diffs)
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Facets of a full-dimensional point set, by testing every hyperplane spanned
/// by `n` affinely independent points for the supporting property.
fn facets_of<F: Field>(pts: &[Point<F>], n: usize) -> Vec<Facet<F>> {
    let mut out: Vec<Facet<F>> = Vec::new();
    for combo in combinations(pts.len(), n) {
        let p0 = &pts[combo[0]];
        let diffs: Vec<Vec<F>> = combo[1..]
            .iter()
            .map(|&i| {
                pts[i]
                    .iter()
                    .zip(p0)
                    .map(|(a, b)| a.clone() - b.clone())
                    .collect()
            })
            .collect();
        let Some(mut normal) = linalg::null_vector(&diffs, n) else {
            continue;
        };
        let mut offset = linalg::dot(&normal, p0);
        let (mut above, mut below) = (false, false);
        for p in pts {
            let s = linalg::dot(&normal, p) - offset.clone();
            above |= s.is_positive();
            below |= s.is_negative();
        }
        if above && below {
            continue;
        }
        if above {
            normal = normal.into_iter().map(|x| -x).collect();
            offset = -offset;
        }
        let lead = normal.iter().find(|x| !x.is_zero()).unwrap().abs();
        let normal: Vec<F> = normal.into_iter().map(|x| x / lead.clone()).collect();
        let facet = Facet {
            normal,
            offset: offset / lead,
        };
        if !out.contains(&facet) {
            out.push(facet);
        }
    }
    out
}

/// Sum over facets of the pyramid volumes with apex at the centroid.
///
/// For a facet `a.x = b` the pyramid volume is `h * vol(F) / n`. Projecting the
/// facet along a coordinate `j` with `a_j != 0` scales its volume by
/// `|a_j| / |a|`, so `h * vol(F) = (b - a.c) * vol(proj F) / |a_j|`, which is
/// rational.
fn cone_volume<F: Field>(pts: &[Point<F>], n: usize, facets: &[Facet<F>]) -> F {
    let count = F::from_int(pts.len() as i64);
    let centroid: Vec<F> = (0..n)
        .map(|k| pts.iter().fold(F::zero(), |acc, p| acc + p[k].clone()) / count.clone())
        .collect();
    let mut total = F::zero();
    for f in facets {
        let on: Vec<&Point<F>> = pts
            .iter()
            .filter(|p| linalg::dot(&f.normal, p) == f.offset)
            .collect();
        let j = f.normal.iter().position(|x| !x.is_zero()).unwrap();
        let proj: Vec<Point<F>> = on
            .iter()
            .map(|p| {
                p.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let height = f.offset.clone() - linalg::dot(&f.normal, &centroid);
        total =
            total + height * hull_volume(&proj, n - 1) / f.normal[j].abs() / F::from_int(n as i64);
    }
    total
}

/// Volume of the hull of an arbitrary (not necessarily orthant) point set.
fn hull_volume<F: Field>(pts: &[Point<F>], n: usize) -> F {
    if n == 1 {
        let lo = pts.iter().map(|p| p[0].clone()).min();
        let hi = pts.iter().map(|p| p[0].clone()).max();
        return match (lo, hi) {
            (Some(lo), Some(hi)) => hi - lo,
            _ => F::zero(),
        };
    }
    if affine_rank(pts) < n {
        return F::zero();
    }
    let facets = facets_of(pts, n);
    cone_volume(pts, n, &facets)
}
