//! Brute-force oracles that check the closed forms without using them.
//!
//! Protection is measured by enumerating distorted lattice points around the
//! numerically computed circumsphere of a simplex; nothing here reads the
//! closed-form circumcenter or candidate set except to compare against it.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closed_forms;
use crate::error::{Error, Result};
use crate::freudenthal::{canonical_simplex, enumerate_cube_simplices, opposite_set, ChainSimplex};
use crate::geometry::{circumsphere, Point, DEFAULT_TOLERANCE};
use crate::lattice::{
    distort_int, distorted_grid_basis, shortest_vector, undistort, DEFAULT_COEFF_BOUND,
};
use crate::params::{Delta, DistortionParams};

pub use crate::report::OracleReport;
pub use crate::sweep::figure_sweep;

/// Default enumeration box around the rounded preimage of the circumcenter.
pub const DEFAULT_BOX: i64 = 3;

/// Box used per simplex by [`uniform_protection_check`].
pub const LOCAL_BOX: i64 = 2;

/// Largest number of lattice points a single search will visit.
pub const MAX_SEARCH_POINTS: u64 = 50_000_000;

/// Outcome of an exhaustive search around one simplex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtectionSearch {
    pub center: Point,
    pub radius: f64,
    /// min |q − c| − R over lattice points q that are not vertices.
    pub protection: f64,
    /// Integer preimages attaining the minimum within the tie tolerance, sorted.
    pub minimizers: Vec<Vec<i64>>,
    /// Non-vertex points closer than R − tol to the center, sorted.
    pub inside: Vec<Vec<i64>>,
    pub points_examined: u64,
}

#[derive(Default)]
struct SlabResult {
    best: f64,
    ties: Vec<(f64, Vec<i64>)>,
    inside: Vec<Vec<i64>>,
    examined: u64,
}

/// Enumerates T_δ(z) for z within `box_radius` (sup norm) of the rounded
/// preimage of the circumcenter of `chain`'s distorted simplex.
pub fn protection_search(
    chain: &ChainSimplex,
    params: &DistortionParams,
    box_radius: i64,
    tol: f64,
) -> Result<ProtectionSearch> {
    if box_radius < 1 {
        return Err(Error::InvalidParameter("box must be at least 1".into()));
    }
    let d = params.d;
    let side = (2 * box_radius + 1) as u64;
    let total = side
        .checked_pow(d as u32)
        .filter(|&t| t <= MAX_SEARCH_POINTS)
        .ok_or_else(|| {
            Error::ResourceLimit(format!("{side}^{d} points exceeds {MAX_SEARCH_POINTS}"))
        })?;

    let simplex = crate::freudenthal::distorted_simplex(chain, params)?;
    let (center, radius) = circumsphere(&simplex)?;
    let anchor: Vec<i64> = undistort(&center, params)?
        .coords()
        .iter()
        .map(|c| c.round() as i64)
        .collect();
    let vertices = chain.vertices();

    let slabs: Vec<SlabResult> = (-box_radius..=box_radius)
        .into_par_iter()
        .map(|first| {
            let mut out = SlabResult {
                best: f64::INFINITY,
                ..Default::default()
            };
            let mut offset = vec![-box_radius; d];
            offset[0] = first;
            loop {
                let z: Vec<i64> = anchor.iter().zip(&offset).map(|(a, o)| a + o).collect();
                out.examined += 1;
                if !vertices.contains(&z) {
                    let dist = (&distort_int(&z, params) - &center).norm();
                    let gap = dist - radius;
                    if gap < -tol {
                        out.inside.push(z.clone());
                    }
                    if gap < out.best {
                        out.best = gap;
                        let cutoff = gap + tol;
                        out.ties.retain(|(g, _)| *g <= cutoff);
                    }
                    if gap <= out.best + tol {
                        out.ties.push((gap, z));
                    }
                }
                if !advance(&mut offset[1..], box_radius) {
                    break;
                }
            }
            out
        })
        .collect();

    let best = slabs.iter().map(|s| s.best).fold(f64::INFINITY, f64::min);
    let mut minimizers: Vec<Vec<i64>> = slabs
        .iter()
        .flat_map(|s| s.ties.iter())
        .filter(|(g, _)| *g <= best + tol)
        .map(|(_, z)| z.clone())
        .collect();
    minimizers.sort();
    minimizers.dedup();
    let mut inside: Vec<Vec<i64>> = slabs
        .iter()
        .flat_map(|s| s.inside.iter().cloned())
        .collect();
    inside.sort();
    let examined: u64 = slabs.iter().map(|s| s.examined).sum();
    debug_assert_eq!(examined, total);

    Ok(ProtectionSearch {
        center,
        radius,
        protection: best,
        minimizers,
        inside,
        points_examined: examined,
    })
}

/// Odometer step over [−r, r]^n; false once it wraps around.
fn advance(digits: &mut [i64], r: i64) -> bool {
    for digit in digits.iter_mut().rev() {
        if *digit < r {
            *digit += 1;
            return true;
        }
        *digit = -r;
    }
    false
}

/// Positions in the opposite set of each minimizer; `None` if some minimizer
/// is not an opposite point.
pub fn minimizer_indices(search: &ProtectionSearch, chain: &ChainSimplex) -> Option<Vec<usize>> {
    let opposite = opposite_set(chain);
    let mut indices = search
        .minimizers
        .iter()
        .map(|m| opposite.points.iter().position(|p| p == m))
        .collect::<Option<Vec<_>>>()?;
    indices.sort_unstable();
    Some(indices)
}

fn check_oracle_range(d: usize, delta: Delta, max_d: usize) -> Result<()> {
    if !(2..=max_d).contains(&d) {
        return Err(Error::InvalidParameter(format!(
            "dimension must lie in 2..={max_d}, got {d}"
        )));
    }
    delta.require_unit_range()
}

/// Brute-force protection of the canonical simplex against the closed form.
///
/// Side conditions: the result is unchanged when the box is doubled; for
/// δ < 1 the minimizers are opposite points of σ and no lattice point lies
/// inside the circumball.
pub fn protection_oracle(d: usize, delta: Delta, box_radius: i64) -> Result<OracleReport> {
    check_oracle_range(d, delta, 6)?;
    if box_radius < 2 {
        return Err(Error::InvalidParameter("box must be at least 2".into()));
    }
    let tol = DEFAULT_TOLERANCE;
    let params = DistortionParams::new(d, delta)?;
    let chain = canonical_simplex(d);
    let search = protection_search(&chain, &params, box_radius, tol)?;
    let doubled = protection_search(&chain, &params, 2 * box_radius, tol)?;
    let closed = closed_forms::protection(d, delta)?;

    let mut report = OracleReport::new("protection oracle vs closed form", d, tol)
        .with_delta(delta.value())
        .with_box(box_radius);
    report.compare(search.protection, closed);
    report.note(format!("minimizers: {:?}", search.minimizers));
    report.note(format!(
        "points examined: {} (+{} doubled)",
        search.points_examined, doubled.points_examined
    ));
    report.require(
        (search.protection - doubled.protection).abs() <= tol
            && search.minimizers == doubled.minimizers,
        format!(
            "box doubling changed the result: {} -> {}",
            search.protection, doubled.protection
        ),
    );
    if delta.value() < 1.0 {
        match minimizer_indices(&search, &chain) {
            Some(indices) => report.note(format!("minimizers are opposite points {indices:?}")),
            None => report.require(false, "a minimizer is not an opposite point of the simplex"),
        }
        report.require(
            search.inside.is_empty(),
            format!("lattice points inside the circumball: {:?}", search.inside),
        );
    } else {
        report.note(format!(
            "degenerate grid: {} non-vertex points on the circumsphere",
            search.minimizers.len()
        ));
    }
    Ok(report)
}

/// Per-simplex protection for all d! simplices of the cube; passes when the
/// spread is within tolerance.
pub fn uniform_protection_check(d: usize, delta: Delta) -> Result<OracleReport> {
    check_oracle_range(d, delta, 6)?;
    let tol = DEFAULT_TOLERANCE;
    let params = DistortionParams::new(d, delta)?;
    let chains = enumerate_cube_simplices(d)?;
    let values = chains
        .par_iter()
        .map(|chain| protection_search(chain, &params, LOCAL_BOX, tol).map(|s| s.protection))
        .collect::<Result<Vec<f64>>>()?;
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let closed = closed_forms::protection(d, delta)?;

    let mut report = OracleReport::new("equal protection across all cube simplices", d, tol)
        .with_delta(delta.value())
        .with_box(LOCAL_BOX);
    report.compare(hi, lo);
    report.note(format!(
        "{} simplices, protection in [{lo}, {hi}]",
        values.len()
    ));
    report.require(
        (lo - closed).abs() <= tol,
        format!("per-simplex protection {lo} differs from closed form {closed}"),
    );
    Ok(report)
}

/// 𝒫_δ ≤ λ₁(T_δ(ℤ^d)) ≤ √d · det^{1/d}, with det = δ.
pub fn minkowski_check(d: usize, delta: Delta) -> Result<OracleReport> {
    check_oracle_range(d, delta, 8)?;
    let tol = DEFAULT_TOLERANCE;
    let params = DistortionParams::new(d, delta)?;
    let spec = distorted_grid_basis(&params)?;
    let shortest = shortest_vector(&spec, DEFAULT_COEFF_BOUND)?;
    let protection = closed_forms::protection(d, delta)?;
    let bound = (d as f64).sqrt() * spec.det.powf(1.0 / d as f64);

    let mut report = OracleReport::new("protection <= lambda_1 <= sqrt(d) det^(1/d)", d, tol)
        .with_delta(delta.value())
        .with_box(DEFAULT_COEFF_BOUND);
    report.compare(spec.det, delta.value());
    report.note(format!(
        "protection = {protection}, lambda_1 = {} via {:?}, bound = {bound}",
        shortest.length, shortest.coefficients
    ));
    report.require(
        protection <= shortest.length + tol,
        "protection exceeds lambda_1",
    );
    report.require(
        shortest.length <= bound + tol,
        "lambda_1 exceeds the Minkowski bound",
    );
    report.require(
        shortest.certified,
        "coefficient box too small to certify lambda_1",
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn oracle_at_critical_d2() {
        let r = protection_oracle(2, Delta::critical(2), 3).unwrap();
        assert!(r.pass, "{r}");
        let params = DistortionParams::critical(2).unwrap();
        let search = protection_search(&canonical_simplex(2), &params, 3, 1e-9).unwrap();
        assert_eq!(search.minimizers.len(), 3);
        assert_eq!(
            minimizer_indices(&search, &canonical_simplex(2)),
            Some(vec![0, 1, 2])
        );
    }

    #[test]
    fn oracle_above_critical_uses_middle_points() {
        let delta = Delta::new(0.8).unwrap();
        let r = protection_oracle(3, delta, 3).unwrap();
        assert!(r.pass, "{r}");
        let params = DistortionParams::new(3, delta).unwrap();
        let search = protection_search(&canonical_simplex(3), &params, 3, 1e-9).unwrap();
        assert_eq!(search.minimizers, vec![vec![0, 1, 0], vec![1, 0, 1]]);
    }

    #[test]
    fn oracle_at_one_is_degenerate() {
        let delta = Delta::new(1.0).unwrap();
        let r = protection_oracle(2, delta, 3).unwrap();
        assert!(r.pass, "{r}");
        let params = DistortionParams::new(2, delta).unwrap();
        let search = protection_search(&canonical_simplex(2), &params, 3, 1e-9).unwrap();
        assert_abs_diff_eq!(search.protection, 0.0, epsilon = 1e-12);
        assert_eq!(search.minimizers, vec![vec![1, 0]]);
    }

    #[test]
    fn oracle_preconditions() {
        let delta = Delta::new(0.5).unwrap();
        assert!(protection_oracle(1, delta, 3).is_err());
        assert!(protection_oracle(7, delta, 3).is_err());
        assert!(protection_oracle(3, delta, 1).is_err());
        assert!(protection_oracle(3, Delta::new(1.5).unwrap(), 3).is_err());
        let params = DistortionParams::new(8, delta).unwrap();
        assert!(matches!(
            protection_search(&canonical_simplex(8), &params, 6, 1e-9),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn uniform_small() {
        let r = uniform_protection_check(3, Delta::new(0.5).unwrap()).unwrap();
        assert!(r.pass, "{r}");
        assert!(r.notes[0].starts_with("6 simplices"));
        let r = uniform_protection_check(2, Delta::critical(2)).unwrap();
        assert!(r.pass, "{r}");
    }

    #[test]
    fn minkowski_examples() {
        for (d, delta) in [
            (3, Delta::new(0.5).unwrap()),
            (2, Delta::new(1.0).unwrap()),
            (5, Delta::critical(5)),
        ] {
            let r = minkowski_check(d, delta).unwrap();
            assert!(r.pass, "{r}");
        }
    }
}
