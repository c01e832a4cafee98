//! Freudenthal (Kuhn) triangulation of the unit cube by monotone chains.
//!
//! A simplex is a permutation π of {1, …, d} plus an integer translation. Its
//! vertex i is vertex i−1 plus the unit vector at coordinate (d+1) − π(i),
//! so the identity permutation gives the chain
//! (0,…,0), (0,…,0,1), (0,…,0,1,1), …, (1,…,1).

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::geometry::{Point, Simplex};
use crate::lattice::distort_int;
use crate::params::DistortionParams;

/// Largest dimension [`enumerate_cube_simplices`] accepts (8! = 40320 simplices).
pub const MAX_ENUMERATION_DIM: usize = 8;

/// Boundary tolerance for point location.
pub const LOCATION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChainSimplex {
    /// π(1), …, π(d), values in 1..=d.
    permutation: Vec<usize>,
    translation: Vec<i64>,
}

impl ChainSimplex {
    pub fn new(permutation: Vec<usize>, translation: Vec<i64>) -> Result<Self> {
        let d = permutation.len();
        if d == 0 {
            return Err(Error::InvalidParameter(
                "dimension must be at least 1".into(),
            ));
        }
        check_dim(d, translation.len())?;
        let mut seen = vec![false; d];
        for &p in &permutation {
            if p == 0 || p > d || std::mem::replace(&mut seen[p - 1], true) {
                return Err(Error::InvalidParameter(format!(
                    "{permutation:?} is not a permutation of 1..={d}"
                )));
            }
        }
        Ok(Self {
            permutation,
            translation,
        })
    }

    pub fn dim(&self) -> usize {
        self.permutation.len()
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    pub fn translation(&self) -> &[i64] {
        &self.translation
    }

    /// 0-based coordinate incremented at step `k` (1-based).
    fn step_axis(&self, k: usize) -> usize {
        self.dim() - self.permutation[k - 1]
    }

    /// The d+1 integer vertices of the chain.
    pub fn vertices(&self) -> Vec<Vec<i64>> {
        let mut current = self.translation.clone();
        let mut out = Vec::with_capacity(self.dim() + 1);
        out.push(current.clone());
        for k in 1..=self.dim() {
            current[self.step_axis(k)] += 1;
            out.push(current.clone());
        }
        out
    }

    pub fn to_simplex(&self) -> Simplex {
        let vertices = self
            .vertices()
            .iter()
            .map(|v| Point::from_ints(v))
            .collect();
        Simplex::new(vertices).expect("chain vertices are distinct")
    }

    /// Maps a point given in the frame of the canonical simplex to this
    /// chain's frame: coordinate (d+1−k) of the canonical frame becomes
    /// coordinate (d+1−π(k)), then the translation is added.
    pub fn map_from_canonical(&self, x: &[i64]) -> Vec<i64> {
        let d = self.dim();
        let mut out = self.translation.clone();
        for k in 1..=d {
            out[self.step_axis(k)] += x[d - k];
        }
        out
    }

    /// Recovers the chain whose vertex set is `vertices` (in any order).
    pub fn from_vertices(vertices: &[Vec<i64>]) -> Option<Self> {
        let d = vertices.first()?.len();
        if vertices.len() != d + 1 || vertices.iter().any(|v| v.len() != d) {
            return None;
        }
        let sorted: Vec<&Vec<i64>> = vertices
            .iter()
            .sorted_by_key(|v| v.iter().sum::<i64>())
            .collect();
        let mut permutation = Vec::with_capacity(d);
        for pair in sorted.windows(2) {
            let diff: Vec<i64> = pair[1].iter().zip(pair[0]).map(|(a, b)| a - b).collect();
            let axis = diff.iter().position(|&c| c == 1)?;
            if diff.iter().enumerate().any(|(j, &c)| c != 0 && j != axis) {
                return None;
            }
            permutation.push(d - axis);
        }
        Self::new(permutation, sorted[0].clone()).ok()
    }
}

/// All d! simplices of the unit cube, ordered lexicographically by permutation.
pub fn enumerate_cube_simplices(d: usize) -> Result<Vec<ChainSimplex>> {
    if d == 0 {
        return Err(Error::InvalidParameter(
            "dimension must be at least 1".into(),
        ));
    }
    if d > MAX_ENUMERATION_DIM {
        return Err(Error::ResourceLimit(format!(
            "{d}! simplices; enumeration is limited to d <= {MAX_ENUMERATION_DIM}"
        )));
    }
    Ok((1..=d)
        .permutations(d)
        .map(|p| ChainSimplex {
            permutation: p,
            translation: vec![0; d],
        })
        .collect())
}

/// σ = (v⁰, …, v^d) with v^i = (0,…,0,1,…,1) ending in i ones.
pub fn canonical_simplex(d: usize) -> ChainSimplex {
    assert!(d >= 1, "dimension must be at least 1");
    ChainSimplex {
        permutation: (1..=d).collect(),
        translation: vec![0; d],
    }
}

/// T_δ applied to every vertex.
pub fn distorted_simplex(chain: &ChainSimplex, params: &DistortionParams) -> Result<Simplex> {
    check_dim(params.d, chain.dim())?;
    Simplex::new(
        chain
            .vertices()
            .iter()
            .map(|v| distort_int(v, params))
            .collect(),
    )
}

/// The lattice points opposite each vertex: p^i completes the facet without
/// v^i to the other simplex of the triangulation sharing that facet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OppositeSet {
    pub points: Vec<Vec<i64>>,
}

/// Opposite points of the canonical simplex:
/// p⁰ = (1,…,1,2), p^i = (0,…,0,1,0,1,…,1) with d−i−1 leading zeros and
/// i−1 trailing ones, p^d = (−1,0,…,0).
fn canonical_opposites(d: usize) -> Vec<Vec<i64>> {
    let mut points = Vec::with_capacity(d + 1);
    let mut first = vec![1; d];
    first[d - 1] = 2;
    points.push(first);
    for i in 1..d {
        let mut p = vec![0; d];
        p[d - i - 1] = 1;
        for c in &mut p[d - i + 1..] {
            *c = 1;
        }
        points.push(p);
    }
    let mut last = vec![0; d];
    last[0] = -1;
    points.push(last);
    points
}

pub fn opposite_set(chain: &ChainSimplex) -> OppositeSet {
    let points = canonical_opposites(chain.dim())
        .iter()
        .map(|p| chain.map_from_canonical(p))
        .collect();
    OppositeSet { points }
}

/// Simplices of the unit-cube triangulation that contain `x` within the
/// boundary tolerance, by barycentric coordinates.
pub fn locate_in_cube(simplices: &[ChainSimplex], x: &Point) -> Result<Vec<usize>> {
    let mut hits = Vec::new();
    for (i, chain) in simplices.iter().enumerate() {
        let weights = chain.to_simplex().barycentric(x)?;
        if weights.iter().all(|&w| w >= -LOCATION_TOLERANCE) {
            hits.push(i);
        }
    }
    Ok(hits)
}
