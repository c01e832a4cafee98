//! ℤ^d, the distorted grids T_δ(ℤ^d), A_d and the permutahedral lattice A*_d.

use std::collections::BTreeSet;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closed_forms;
use crate::error::{check_dim, Error, Result};
use crate::freudenthal;
use crate::geometry::{self, singular_values, Point, DEGENERACY_RATIO};
use crate::params::{Delta, DistortionParams};
use crate::report::OracleReport;

/// Largest number of coefficient vectors [`shortest_vector`] will enumerate.
pub const MAX_ENUMERATION: u64 = 100_000_000;

/// Default coefficient box for [`shortest_vector`].
pub const DEFAULT_COEFF_BOUND: i64 = 4;

/// Default box for the T_0(ℤ^d) = A*_{d−1} set comparison.
pub const DEFAULT_SET_BOX: i64 = 2;

/// Diagonal distortion T_δ(x) = x − ((1−δ)/d) Δ(x) (1, …, 1).
pub fn distort(x: &Point, params: &DistortionParams) -> Result<Point> {
    check_dim(params.d, x.dim())?;
    let shift = (1.0 - params.delta.value()) / params.d as f64 * x.coordinate_sum();
    Point::new(x.coords().iter().map(|c| c - shift).collect())
}

/// Inverse of [`distort`]; needs δ ≠ 0.
pub fn undistort(y: &Point, params: &DistortionParams) -> Result<Point> {
    check_dim(params.d, y.dim())?;
    let delta = params.delta.value();
    if delta == 0.0 {
        return Err(Error::Degenerate(
            "T_0 is a projection and has no inverse".into(),
        ));
    }
    let shift = (1.0 - delta) / (params.d as f64 * delta) * y.coordinate_sum();
    Point::new(y.coords().iter().map(|c| c + shift).collect())
}

/// Distorts an integer point.
pub fn distort_int(z: &[i64], params: &DistortionParams) -> Point {
    debug_assert_eq!(z.len(), params.d);
    let shift = (1.0 - params.delta.value()) / params.d as f64 * z.iter().sum::<i64>() as f64;
    Point::new(z.iter().map(|&c| c as f64 - shift).collect()).expect("finite")
}

/// A lattice given by an ordered basis, with cached invariants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub ambient_dim: usize,
    pub basis: Vec<Point>,
    /// √det(Gram); equals |det B| for a square basis.
    pub det: f64,
    /// Ascending.
    pub singular_values: Vec<f64>,
    pub lambda1: Option<f64>,
}

impl LatticeSpec {
    pub fn new(basis: Vec<Point>) -> Result<Self> {
        let ambient_dim = basis
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty basis".into()))?
            .dim();
        for b in &basis {
            check_dim(ambient_dim, b.dim())?;
        }
        if basis.len() > ambient_dim {
            return Err(Error::Degenerate(format!(
                "{} vectors in dimension {ambient_dim} cannot be independent",
                basis.len()
            )));
        }
        let rows: Vec<Vec<f64>> = basis.iter().map(|b| b.coords().to_vec()).collect();
        let singular_values = singular_values(&rows);
        let largest = *singular_values.last().expect("nonempty");
        if singular_values[0] <= DEGENERACY_RATIO * largest {
            return Err(Error::Degenerate(
                "basis vectors are linearly dependent".into(),
            ));
        }
        let n = basis.len();
        let gram = DMatrix::from_fn(n, n, |i, j| basis[i].dot(&basis[j]));
        let det = gram.determinant().max(0.0).sqrt();
        Ok(Self {
            ambient_dim,
            basis,
            det,
            singular_values,
            lambda1: None,
        })
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Σ m_i b_i.
    pub fn point(&self, coefficients: &[i64]) -> Point {
        assert_eq!(coefficients.len(), self.rank());
        let mut out = vec![0.0; self.ambient_dim];
        for (m, b) in coefficients.iter().zip(&self.basis) {
            for (o, c) in out.iter_mut().zip(b.coords()) {
                *o += *m as f64 * c;
            }
        }
        Point::new(out).expect("finite")
    }
}

/// Basis {T_δ(e_1), …, T_δ(e_d)}.
pub fn distorted_grid_basis(params: &DistortionParams) -> Result<LatticeSpec> {
    if params.delta.value() == 0.0 {
        return Err(Error::Degenerate(
            "T_0(Z^d) lies in the hyperplane sum x_i = 0; use the projected set instead".into(),
        ));
    }
    let d = params.d;
    let basis = (0..d)
        .map(|i| {
            let mut e = vec![0i64; d];
            e[i] = 1;
            distort_int(&e, params)
        })
        .collect();
    LatticeSpec::new(basis)
}

pub fn integer_grid(d: usize) -> Result<LatticeSpec> {
    distorted_grid_basis(&DistortionParams::new(d, Delta::new(1.0)?)?)
}

/// g_k = (1/d)(d+1−k, …, d+1−k, −k, …, −k) in ℝ^{d+1}, k = 1..=d, with
/// k leading entries equal to d+1−k.
pub fn a_star_basis(d: usize) -> Result<LatticeSpec> {
    if d == 0 {
        return Err(Error::InvalidParameter(
            "dimension must be at least 1".into(),
        ));
    }
    let n = d as f64;
    let basis = (1..=d)
        .map(|k| {
            let coords = (0..=d)
                .map(|j| {
                    if j < k {
                        (n + 1.0 - k as f64) / n
                    } else {
                        -(k as f64) / n
                    }
                })
                .collect();
            Point::new(coords)
        })
        .collect::<Result<Vec<_>>>()?;
    LatticeSpec::new(basis)
}

/// Basis of A*_{d−1} inside the hyperplane Σx_i = 0 of ℝ^d:
/// g_i = (1/d)(d−i, …, d−i, −i, …, −i) with i leading entries, i = 1..d−1.
pub fn a_star_hyperplane_basis(d: usize) -> Result<LatticeSpec> {
    if d < 2 {
        return Err(Error::InvalidParameter("need d >= 2 for A*_{d-1}".into()));
    }
    let n = d as f64;
    let basis = (1..d)
        .map(|i| {
            let coords = (0..d)
                .map(|j| {
                    if j < i {
                        (n - i as f64) / n
                    } else {
                        -(i as f64) / n
                    }
                })
                .collect();
            Point::new(coords)
        })
        .collect::<Result<Vec<_>>>()?;
    LatticeSpec::new(basis)
}

/// Basis u_i = e_1 − e_{i+1} of A_d in ℝ^{d+1}.
pub fn a_basis(d: usize) -> Result<LatticeSpec> {
    if d == 0 {
        return Err(Error::InvalidParameter(
            "dimension must be at least 1".into(),
        ));
    }
    let basis = (1..=d)
        .map(|i| {
            let mut u = vec![0i64; d + 1];
            u[0] = 1;
            u[i] = -1;
            Point::from_ints(&u)
        })
        .collect();
    LatticeSpec::new(basis)
}

/// Symmetric matrix of basis dot products.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GramMatrix {
    pub entries: Vec<Vec<f64>>,
}

impl GramMatrix {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn max_abs_diff(&self, other: &GramMatrix) -> f64 {
        if self.size() != other.size() {
            return f64::INFINITY;
        }
        self.entries
            .iter()
            .flatten()
            .zip(other.entries.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        let n = self.size();
        (0..n).all(|i| (0..n).all(|j| (self.entries[i][j] - self.entries[j][i]).abs() <= tol))
    }

    pub fn is_positive_definite(&self) -> bool {
        let n = self.size();
        DMatrix::from_fn(n, n, |i, j| self.entries[i][j])
            .cholesky()
            .is_some()
    }
}

pub fn gram(spec: &LatticeSpec) -> GramMatrix {
    let entries = spec
        .basis
        .iter()
        .map(|a| spec.basis.iter().map(|b| a.dot(b)).collect())
        .collect();
    GramMatrix { entries }
}

/// A shortest nonzero vector found by box enumeration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShortestVector {
    pub length: f64,
    pub coefficients: Vec<i64>,
    pub vector: Point,
    pub candidates: u64,
    /// True when the box provably contains every vector of length ≤ `length`:
    /// |Σ m_i b_i| ≥ s_min |m| ≥ s_min ‖m‖_∞, so coefficients outside the box
    /// give vectors longer than `coeff_bound · s_min`.
    pub certified: bool,
}

/// Exhaustive search over integer coefficients with ‖m‖_∞ ≤ `coeff_bound`.
pub fn shortest_vector(spec: &LatticeSpec, coeff_bound: i64) -> Result<ShortestVector> {
    if coeff_bound < 1 {
        return Err(Error::InvalidParameter(
            "coefficient bound must be at least 1".into(),
        ));
    }
    let n = spec.rank();
    let side = (2 * coeff_bound + 1) as u64;
    let total = side
        .checked_pow(n as u32)
        .filter(|&t| t <= MAX_ENUMERATION)
        .ok_or_else(|| {
            Error::ResourceLimit(format!(
                "{side}^{n} coefficient vectors exceeds the limit of {MAX_ENUMERATION}"
            ))
        })?;

    let basis: Vec<&[f64]> = spec.basis.iter().map(|b| b.coords()).collect();
    let best = (-coeff_bound..=coeff_bound)
        .into_par_iter()
        .filter_map(|first| shortest_in_slab(&basis, coeff_bound, first))
        .min_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)))
        .expect("box contains a nonzero vector");

    let mut coefficients = best.1;
    // Report the representative whose first nonzero coefficient is positive.
    if coefficients
        .iter()
        .find(|&&m| m != 0)
        .is_some_and(|&m| m < 0)
    {
        coefficients.iter_mut().for_each(|m| *m = -*m);
    }
    let vector = spec.point(&coefficients);
    let length = vector.norm();
    let certified = coeff_bound as f64 * spec.singular_values[0] >= length;
    Ok(ShortestVector {
        length,
        coefficients,
        vector,
        candidates: total - 1,
        certified,
    })
}

/// Shortest nonzero vector with first coefficient fixed, as (squared length, coefficients).
fn shortest_in_slab(basis: &[&[f64]], bound: i64, first: i64) -> Option<(f64, Vec<i64>)> {
    let n = basis.len();
    let dim = basis[0].len();
    let mut m = vec![-bound; n];
    m[0] = first;
    let mut current = vec![0.0; dim];
    for (coef, b) in m.iter().zip(basis) {
        for (c, x) in current.iter_mut().zip(*b) {
            *c += *coef as f64 * x;
        }
    }
    let mut best: Option<(f64, Vec<i64>)> = None;
    loop {
        if m.iter().any(|&c| c != 0) {
            let len2: f64 = current.iter().map(|c| c * c).sum();
            if best.as_ref().is_none_or(|(b, _)| len2 < *b) {
                best = Some((len2, m.clone()));
            }
        }
        // Odometer over coordinates 1..n, updating the running vector.
        let mut k = 1;
        loop {
            if k == n {
                return best.map(|(_, coeffs)| {
                    // Recompute exactly so accumulated rounding cannot leak out.
                    let mut v = vec![0.0; dim];
                    for (coef, b) in coeffs.iter().zip(basis) {
                        for (c, x) in v.iter_mut().zip(*b) {
                            *c += *coef as f64 * x;
                        }
                    }
                    (v.iter().map(|c| c * c).sum::<f64>(), coeffs)
                });
            }
            if m[k] < bound {
                m[k] += 1;
                for (c, x) in current.iter_mut().zip(basis[k]) {
                    *c += x;
                }
                break;
            }
            m[k] = -bound;
            let span = 2.0 * bound as f64;
            for (c, x) in current.iter_mut().zip(basis[k]) {
                *c -= span * x;
            }
            k += 1;
        }
    }
}

/// Compares T_0(ℤ^d) with A*_{d−1} (both in the hyperplane Σx_i = 0 of ℝ^d)
/// inside the ball of radius `box − 1/2`.
///
/// Every point y of T_0(ℤ^d) with |y| ≤ r has a preimage y + c(1,…,1) with
/// |c| ≤ 1/2, so grid points z with ‖z‖_∞ ≤ box cover the ball. On the A* side
/// the coefficient of g_i is y_i − y_{i+1}, bounded by √2·r. Both sets are
/// therefore complete inside the ball and can be compared exactly. All
/// coordinates are multiples of 1/d, so points are keyed by d·y rounded to
/// integers after a 1e−9 integrality check.
pub fn check_isometry_t0_to_astar(d: usize, box_radius: i64) -> Result<OracleReport> {
    if d < 2 {
        return Err(Error::InvalidParameter(
            "set equality check needs d >= 2".into(),
        ));
    }
    if !(1..=4).contains(&box_radius) {
        return Err(Error::InvalidParameter("box must lie in 1..=4".into()));
    }
    let side = (2 * box_radius + 1) as u64;
    if side
        .checked_pow(d as u32)
        .is_none_or(|n| n > MAX_ENUMERATION)
    {
        return Err(Error::ResourceLimit(format!(
            "{side}^{d} grid points exceeds {MAX_ENUMERATION}"
        )));
    }
    const TOL: f64 = 1e-9;
    let radius = box_radius as f64 - 0.5;
    let scale = d as f64;
    let mut report = OracleReport::new("T_0(Z^d) = A*_{d-1} (bounded set equality)", d, TOL)
        .with_delta(0.0)
        .with_box(box_radius);
    let mut off_grid = 0usize;
    let mut key = |p: &Point| -> Vec<i64> {
        p.coords()
            .iter()
            .map(|c| {
                let s = c * scale;
                if (s - s.round()).abs() > TOL {
                    off_grid += 1;
                }
                s.round() as i64
            })
            .collect()
    };

    let params = DistortionParams::new(d, Delta::new(0.0)?)?;
    let mut grid_points = BTreeSet::new();
    for z in integer_box(d, box_radius) {
        let y = distort_int(&z, &params);
        if y.norm() <= radius + TOL {
            grid_points.insert(key(&y));
        }
    }

    let astar = a_star_hyperplane_basis(d)?;
    let coeff_bound = (2f64.sqrt() * radius).ceil() as i64;
    let mut astar_points = BTreeSet::new();
    for m in integer_box(d - 1, coeff_bound) {
        let y = astar.point(&m);
        if y.norm() <= radius + TOL {
            astar_points.insert(key(&y));
        }
    }

    let missing_from_astar: Vec<_> = grid_points.difference(&astar_points).collect();
    let missing_from_grid: Vec<_> = astar_points.difference(&grid_points).collect();
    report.note(format!(
        "ball radius {radius}: {} grid points, {} A* points",
        grid_points.len(),
        astar_points.len()
    ));
    report.require(
        off_grid == 0,
        format!("{off_grid} coordinates not multiples of 1/d"),
    );
    report.require(
        grid_points.contains(&vec![0; d]),
        "origin missing from T_0 image",
    );
    report.require(
        missing_from_astar.is_empty(),
        format!("T_0 points outside A*: {missing_from_astar:?} (scaled by d)"),
    );
    report.require(
        missing_from_grid.is_empty(),
        format!("A* points outside T_0 image: {missing_from_grid:?} (scaled by d)"),
    );
    Ok(report)
}

/// Gram matrix of T_γ(ℤ^d) at γ = √(d+1) against A_d with basis e_1 − e_{i+1}.
pub fn check_isometry_to_ad(d: usize) -> Result<OracleReport> {
    let gamma = Delta::new((d as f64 + 1.0).sqrt())?;
    let distorted = gram(&distorted_grid_basis(&DistortionParams::new(d, gamma)?)?);
    let ad = gram(&a_basis(d)?);
    let mut report = OracleReport::new(
        "T_sqrt(d+1)(Z^d) isometric to A_d (Gram equality)",
        d,
        1e-12,
    )
    .with_delta(gamma.value());
    for (row_t, row_a) in distorted.entries.iter().zip(&ad.entries) {
        for (t, a) in row_t.iter().zip(row_a) {
            report.compare(*t, *a);
        }
    }
    report.note(format!("distorted Gram: {:?}", distorted.entries));
    report.note(format!("A_d Gram:       {:?}", ad.entries));
    Ok(report)
}

/// Scalar consequences of T_δ(ℤ^d) ≅ A*_d at δ = 1/√(d+1): circumradius and
/// protection equal the permutahedral Delaunay radius and protection.
///
/// The closed-form route is compared at 1e−12 relative; the coordinate route
/// (circumsphere of the distorted simplex, distances to its opposite points)
/// at 1e−9 relative.
pub fn check_isometry_to_astar_at_critical(d: usize) -> Result<OracleReport> {
    if d == 0 {
        return Err(Error::InvalidParameter(
            "dimension must be at least 1".into(),
        ));
    }
    let params = DistortionParams::critical(d)?;
    let constants = closed_forms::permutahedral_constants(d)?;
    let mut report = OracleReport::new("T_crit(Z^d) matches A*_d radius and protection", d, 1e-12)
        .with_delta(params.delta.value());

    let radius = closed_forms::circumradius(d, params.delta)?;
    let protection = closed_forms::protection(d, params.delta)?;
    report.compare_relative(radius, constants.delaunay_radius);
    report.compare_relative(protection, constants.protection);

    let simplex = freudenthal::distorted_simplex(&freudenthal::canonical_simplex(d), &params)?;
    let (center, coord_radius) = geometry::circumsphere(&simplex)?;
    let coord_protection = freudenthal::opposite_set(&freudenthal::canonical_simplex(d))
        .points
        .iter()
        .map(|p| distort_int(p, &params))
        .map(|q| (&q - &center).norm() - coord_radius)
        .fold(f64::INFINITY, f64::min);
    let rel = |a: f64, b: f64| (a - b).abs() / b.abs();
    report.note(format!(
        "coordinate route: R = {coord_radius}, protection = {coord_protection}"
    ));
    report.require(
        rel(coord_radius, constants.delaunay_radius) <= 1e-9,
        "coordinate circumradius differs from R_del by more than 1e-9 relative",
    );
    report.require(
        rel(coord_protection, constants.protection) <= 1e-9,
        "coordinate protection differs from the A* protection by more than 1e-9 relative",
    );
    Ok(report)
}

/// All integer vectors of length `n` with entries in [−r, r], in lexicographic order.
pub fn integer_box(n: usize, r: i64) -> impl Iterator<Item = Vec<i64>> {
    let mut next = Some(vec![-r; n]);
    std::iter::from_fn(move || {
        let current = next.take()?;
        let mut succ = current.clone();
        for k in (0..n).rev() {
            if succ[k] < r {
                succ[k] += 1;
                next = Some(succ);
                break;
            }
            succ[k] = -r;
        }
        Some(current)
    })
}
