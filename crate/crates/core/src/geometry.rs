//! Dimension-generic Euclidean primitives.
//!
//! Everything here works from coordinates alone: no closed forms, no lattice
//! structure. The closed forms in [`crate::closed_forms`] are checked against
//! these routines.

use std::fmt;
use std::ops::{Add, Index, Sub};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};

/// Default absolute-plus-relative tolerance for floating point comparisons.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// A simplex is degenerate when the smallest singular value of its edge
/// matrix is at most this fraction of the largest one.
pub const DEGENERACY_RATIO: f64 = 1e-12;

/// `|a - b| <= tol * (1 + max(|a|, |b|))`.
pub fn approx_eq(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

/// A point of ℝ^n with finite coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidParameter(
                "a point needs at least one coordinate".into(),
            ));
        }
        if let Some(bad) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "non-finite coordinate {bad}"
            )));
        }
        Ok(Self(coords))
    }

    /// Lifts an integer vector. Panics on an empty slice.
    pub fn from_ints(coords: &[i64]) -> Self {
        assert!(!coords.is_empty(), "a point needs at least one coordinate");
        Self(coords.iter().map(|&c| c as f64).collect())
    }

    pub fn origin(dim: usize) -> Self {
        assert!(dim > 0, "a point needs at least one coordinate");
        Self(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }

    pub fn dot(&self, other: &Point) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm_squared(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    /// Sum of coordinates, Δ(x).
    pub fn coordinate_sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn scale(&self, factor: f64) -> Point {
        Point(self.0.iter().map(|c| c * factor).collect())
    }
}

impl Index<usize> for Point {
    type Output = f64;

    fn index(&self, index: usize) -> &f64 {
        &self.0[index]
    }
}

impl Sub for &Point {
    type Output = Point;

    fn sub(self, rhs: &Point) -> Point {
        debug_assert_eq!(self.dim(), rhs.dim());
        Point(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Add for &Point {
    type Output = Point;

    fn add(self, rhs: &Point) -> Point {
        debug_assert_eq!(self.dim(), rhs.dim());
        Point(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Euclidean distance ‖p − q‖.
pub fn distance(p: &Point, q: &Point) -> Result<f64> {
    check_dim(p.dim(), q.dim())?;
    Ok((p - q).norm())
}

/// Singular values of the matrix whose rows are `rows`, ascending.
pub fn singular_values(rows: &[Vec<f64>]) -> Vec<f64> {
    if rows.is_empty() || rows[0].is_empty() {
        return Vec::new();
    }
    let m = DMatrix::from_fn(rows.len(), rows[0].len(), |i, j| rows[i][j]);
    let mut values: Vec<f64> = m.singular_values().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values
}

/// Rank of a set of vectors under the relative singular value threshold.
fn numerical_rank(rows: &[Vec<f64>]) -> usize {
    let values = singular_values(rows);
    let largest = values.last().copied().unwrap_or(0.0);
    if largest == 0.0 {
        return 0;
    }
    values
        .iter()
        .filter(|&&s| s > DEGENERACY_RATIO * largest)
        .count()
}

/// An ordered list of k+1 distinct points sharing one ambient dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Simplex {
    vertices: Vec<Point>,
}

impl Simplex {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let first = vertices
            .first()
            .ok_or_else(|| Error::InvalidParameter("a simplex needs at least one vertex".into()))?;
        let dim = first.dim();
        for v in &vertices[1..] {
            check_dim(dim, v.dim())?;
        }
        for (i, a) in vertices.iter().enumerate() {
            if vertices[i + 1..].iter().any(|b| a == b) {
                return Err(Error::InvalidParameter(format!("repeated vertex {a}")));
            }
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn combinatorial_dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn ambient_dim(&self) -> usize {
        self.vertices[0].dim()
    }

    /// Rows are v_i − v_0 for i = 1..=k.
    pub fn edge_vectors(&self) -> Vec<Vec<f64>> {
        let base = &self.vertices[0];
        self.vertices[1..]
            .iter()
            .map(|v| (v - base).into_coords())
            .collect()
    }

    /// Dimension of the affine hull.
    pub fn geometric_dim(&self) -> usize {
        numerical_rank(&self.edge_vectors())
    }

    pub fn is_degenerate(&self) -> bool {
        self.geometric_dim() < self.combinatorial_dim()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.combinatorial_dim() == self.ambient_dim() && !self.is_degenerate()
    }

    /// k-dimensional volume √det(EᵀE) / k!.
    pub fn volume(&self) -> f64 {
        let k = self.combinatorial_dim();
        if k == 0 {
            return 1.0;
        }
        let edges = self.edge_vectors();
        let gram = DMatrix::from_fn(k, k, |i, j| {
            edges[i]
                .iter()
                .zip(&edges[j])
                .map(|(a, b)| a * b)
                .sum::<f64>()
        });
        let factorial: f64 = (1..=k).map(|i| i as f64).product();
        gram.determinant().max(0.0).sqrt() / factorial
    }

    /// Barycentric coordinates of `p` with respect to a full-dimensional simplex.
    pub fn barycentric(&self, p: &Point) -> Result<Vec<f64>> {
        check_dim(self.ambient_dim(), p.dim())?;
        self.require_full_dimensional()?;
        let n = self.ambient_dim();
        let edges = self.edge_vectors();
        // Columns are edge vectors.
        let a = DMatrix::from_fn(n, n, |i, j| edges[j][i]);
        let rel = p - &self.vertices[0];
        let b = nalgebra::DVector::from_column_slice(rel.coords());
        let lambda = a
            .lu()
            .solve(&b)
            .ok_or_else(|| Error::Degenerate("singular edge matrix".into()))?;
        let mut weights = Vec::with_capacity(n + 1);
        weights.push(1.0 - lambda.iter().sum::<f64>());
        weights.extend(lambda.iter().copied());
        Ok(weights)
    }

    fn require_full_dimensional(&self) -> Result<()> {
        if self.combinatorial_dim() != self.ambient_dim() {
            return Err(Error::InvalidParameter(format!(
                "expected a full-dimensional simplex: {} vertices in dimension {}",
                self.vertices.len(),
                self.ambient_dim()
            )));
        }
        if self.is_degenerate() {
            return Err(Error::Degenerate("edge matrix is rank deficient".into()));
        }
        Ok(())
    }
}

/// Orthogonal distance from vertex `vertex_index` to the affine hull of the
/// remaining vertices (the height D_p of the simplex at that vertex).
pub fn height_above_facet(s: &Simplex, vertex_index: usize) -> Result<f64> {
    let k = s.combinatorial_dim();
    if vertex_index > k {
        return Err(Error::InvalidParameter(format!(
            "vertex index {vertex_index} out of range for a {k}-simplex"
        )));
    }
    if k == 0 {
        return Err(Error::InvalidParameter("a 0-simplex has no facets".into()));
    }
    let apex = &s.vertices[vertex_index];
    let facet: Vec<&Point> = s
        .vertices
        .iter()
        .enumerate()
        .filter_map(|(i, v)| (i != vertex_index).then_some(v))
        .collect();
    let base = facet[0];
    let offset = apex - base;
    if facet.len() == 1 {
        return Ok(offset.norm());
    }

    let spans: Vec<Vec<f64>> = facet[1..]
        .iter()
        .map(|v| (*v - base).into_coords())
        .collect();
    if numerical_rank(&spans) < spans.len() {
        return Err(Error::Degenerate(format!(
            "facet opposite vertex {vertex_index} is degenerate"
        )));
    }
    let n = s.ambient_dim();
    let m = spans.len();
    let basis = DMatrix::from_fn(n, m, |i, j| spans[j][i]);
    let q = basis.qr().q();
    let y = nalgebra::DVector::from_column_slice(offset.coords());
    let projected = &q * (q.transpose() * &y);
    Ok((y - projected).norm())
}

/// Circumcenter and circumradius of a full-dimensional simplex.
///
/// The simplex is translated so that vertex 0 is the origin, which turns
/// equidistance into the linear system ⟨c, w_i⟩ = |w_i|²/2 with w_i = v_i − v_0.
pub fn circumsphere(s: &Simplex) -> Result<(Point, f64)> {
    s.require_full_dimensional()?;
    let n = s.ambient_dim();
    let edges = s.edge_vectors();
    let a = DMatrix::from_fn(n, n, |i, j| edges[i][j]);
    let b = nalgebra::DVector::from_fn(n, |i, _| 0.5 * edges[i].iter().map(|x| x * x).sum::<f64>());
    let solution = a
        .lu()
        .solve(&b)
        .ok_or_else(|| Error::Degenerate("singular circumcenter system".into()))?;
    let radius = solution.norm();
    let offset = Point(solution.iter().copied().collect());
    Ok((&offset + &s.vertices[0], radius))
}

/// Quality measures of a simplex computed from its coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimplexMeasures {
    pub circumcenter: Point,
    pub circumradius: f64,
    pub longest_edge: f64,
    /// Height at each vertex, in vertex order.
    pub heights: Vec<f64>,
    /// min height / longest edge.
    pub thickness: f64,
    /// min height / circumdiameter.
    pub aspect: f64,
}

impl SimplexMeasures {
    pub fn min_height(&self) -> f64 {
        self.heights.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

pub fn simplex_measures(s: &Simplex) -> Result<SimplexMeasures> {
    if s.combinatorial_dim() == 0 {
        return Ok(SimplexMeasures {
            circumcenter: s.vertices[0].clone(),
            circumradius: 0.0,
            longest_edge: 0.0,
            heights: vec![0.0],
            thickness: 1.0,
            aspect: 1.0,
        });
    }
    let (circumcenter, circumradius) = circumsphere(s)?;
    let heights = (0..=s.combinatorial_dim())
        .map(|i| height_above_facet(s, i))
        .collect::<Result<Vec<_>>>()?;
    let mut longest_edge: f64 = 0.0;
    for (i, a) in s.vertices.iter().enumerate() {
        for b in &s.vertices[i + 1..] {
            longest_edge = longest_edge.max((a - b).norm());
        }
    }
    let min_height = heights.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(SimplexMeasures {
        circumcenter,
        circumradius,
        longest_edge,
        heights,
        thickness: min_height / longest_edge,
        aspect: min_height / (2.0 * circumradius),
    })
}
