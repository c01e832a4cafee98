//! Closed-form geometry of the canonical distorted simplex σ_δ = T_δ(σ) and
//! the quality measures of the distorted grid T_δ(ℤ^d), as functions of (d, δ).
//!
//! Formulas that only involve δ² read [`Delta::squared`], so the critical
//! parameter built with [`Delta::critical`] is evaluated with δ² = 1/(d+1)
//! exactly.
//!
//! Two families of formulas exist for the longest edge and thickness. The
//! `*_relaxed`/`*_printed` variants maximize the edge-length family
//! l_x = √(dx − (1−δ²)x²)/√d over real x; the plain variants maximize over
//! the integers x ∈ {1, …, d}, which is the longest edge of the simplex. The
//! two agree for δ ≥ 1/√2 and whenever d/(2(1−δ²)) is an integer; otherwise
//! the relaxed edge is too long and the printed thickness too small.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freudenthal::{canonical_simplex, opposite_set};
use crate::geometry::{Point, DEFAULT_TOLERANCE};
use crate::lattice::distort_int;
use crate::params::{Delta, DistortionParams, Regime};

fn require_dim(d: usize, min: usize) -> Result<()> {
    if d < min {
        Err(Error::InvalidParameter(format!(
            "dimension must be at least {min}, got {d}"
        )))
    } else {
        Ok(())
    }
}

fn require_closed_unit(delta: Delta) -> Result<()> {
    if (0.0..=1.0).contains(&delta.value()) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "delta must lie in [0, 1], got {}",
            delta.value()
        )))
    }
}

/// δ = 1/√(d+1).
pub fn critical_delta(d: usize) -> f64 {
    Delta::critical(d).value()
}

/// 12d·R_δ² = δ⁴(d²−1) + δ²(d²+2) + d² − 1.
fn radius_polynomial(d: f64, s: f64) -> f64 {
    s * s * (d * d - 1.0) + s * (d * d + 2.0) + d * d - 1.0
}

/// C_δ = δC_1 + (1−δ²)C_0; coordinate j (1-based) is δ/2 + (1−δ²)(2j−1−d)/(2d).
pub fn circumcenter(d: usize, delta: Delta) -> Result<Point> {
    require_dim(d, 1)?;
    require_closed_unit(delta)?;
    let n = d as f64;
    let s = delta.squared();
    Point::new(
        (1..=d)
            .map(|j| delta.value() / 2.0 + (1.0 - s) * (2.0 * j as f64 - 1.0 - n) / (2.0 * n))
            .collect(),
    )
}

/// R_δ = √(δ²d/4 + (1−δ²)²(d²−1)/(12d)).
pub fn circumradius(d: usize, delta: Delta) -> Result<f64> {
    require_dim(d, 1)?;
    require_closed_unit(delta)?;
    let n = d as f64;
    let s = delta.squared();
    Ok((s * n / 4.0 + (1.0 - s).powi(2) * (n * n - 1.0) / (12.0 * n)).sqrt())
}

/// Barycentric coordinates μ_0..μ_d of C_δ in σ_δ.
pub fn barycentric_weights(d: usize, delta: Delta) -> Result<Vec<f64>> {
    require_dim(d, 1)?;
    require_closed_unit(delta)?;
    let n = d as f64;
    let s = delta.squared();
    let end = (1.0 + (n - 1.0) * s) / (2.0 * n);
    let mid = (1.0 - s) / n;
    Ok((0..=d)
        .map(|i| if i == 0 || i == d { end } else { mid })
        .collect())
}

/// Height at v⁰ and v^d: δ√d / √(δ²d − δ² + 1).
pub fn end_height(d: usize, delta: Delta) -> f64 {
    let n = d as f64;
    let s = delta.squared();
    delta.value() * n.sqrt() / (s * n - s + 1.0).sqrt()
}

/// Height at v^1..v^{d−1}.
pub const MID_HEIGHT: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// h⁰, …, h^d.
pub fn heights(d: usize, delta: Delta) -> Result<Vec<f64>> {
    require_dim(d, 1)?;
    delta.require_unit_range()?;
    let end = end_height(d, delta);
    Ok((0..=d)
        .map(|i| if i == 0 || i == d { end } else { MID_HEIGHT })
        .collect())
}

/// |v^j_δ − v^i_δ| for j − i = x: √(dx − (1−δ²)x²)/√d.
pub fn edge_length(d: usize, delta: Delta, x: usize) -> f64 {
    let n = d as f64;
    let x = x as f64;
    ((n * x - (1.0 - delta.squared()) * x * x) / n).sqrt()
}

/// Longest edge of σ_δ: the largest l_x over x ∈ {1, …, d}.
pub fn longest_edge(d: usize, delta: Delta) -> Result<f64> {
    require_dim(d, 1)?;
    delta.require_unit_range()?;
    // f(x) = dx − (1−δ²)x² is concave; its integer maximum sits next to the
    // real maximizer d/(2(1−δ²)), clamped to [1, d].
    let s = delta.squared();
    let candidates = if s >= 1.0 {
        vec![d]
    } else {
        let peak = d as f64 / (2.0 * (1.0 - s));
        let lo = (peak.floor() as usize).clamp(1, d);
        let hi = (peak.ceil() as usize).clamp(1, d);
        vec![lo, hi]
    };
    Ok(candidates
        .into_iter()
        .map(|x| edge_length(d, delta, x))
        .fold(0.0, f64::max))
}

/// The real-variable maximum of l_x: δ√d for δ ≥ 1/√2, else √d/(2√(1−δ²)).
pub fn longest_edge_relaxed(d: usize, delta: Delta) -> Result<f64> {
    require_dim(d, 1)?;
    delta.require_unit_range()?;
    let n = d as f64;
    let s = delta.squared();
    Ok(if s >= 0.5 {
        delta.value() * n.sqrt()
    } else {
        n.sqrt() / (2.0 * (1.0 - s).sqrt())
    })
}

pub fn heights_and_longest_edge(d: usize, delta: Delta) -> Result<(Vec<f64>, f64)> {
    Ok((heights(d, delta)?, longest_edge(d, delta)?))
}

/// Minimum height of σ_δ.
pub fn min_height(d: usize, delta: Delta) -> Result<f64> {
    Ok(heights(d, delta)?.into_iter().fold(f64::INFINITY, f64::min))
}

/// Closed-form description of σ_δ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CanonicalSimplexGeometry {
    pub d: usize,
    pub delta: f64,
    pub circumcenter: Point,
    pub circumradius: f64,
    pub barycentric: Vec<f64>,
    pub heights: Vec<f64>,
    pub longest_edge: f64,
}

pub fn canonical_geometry(d: usize, delta: Delta) -> Result<CanonicalSimplexGeometry> {
    Ok(CanonicalSimplexGeometry {
        d,
        delta: delta.value(),
        circumcenter: circumcenter(d, delta)?,
        circumradius: circumradius(d, delta)?,
        barycentric: barycentric_weights(d, delta)?,
        heights: heights(d, delta)?,
        longest_edge: longest_edge(d, delta)?,
    })
}

/// D_i = |T_δ(p^i) − C_δ| − R_δ and E_i = |T_δ(p^i) − C_δ|² − R_δ² over the
/// opposite points p^0..p^d of σ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtectionCandidates {
    pub distances: Vec<f64>,
    pub powers: Vec<f64>,
}

impl ProtectionCandidates {
    pub fn end(&self) -> f64 {
        self.distances[0]
    }

    /// D_1, or `None` when d = 1.
    pub fn mid(&self) -> Option<f64> {
        (self.distances.len() > 2).then(|| self.distances[1])
    }

    pub fn min(&self) -> f64 {
        self.distances.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Evaluates the candidates from the distorted opposite points and the closed
/// form C_δ, R_δ. Fails if D_0 ≠ D_d or the middle values differ (1e−9).
pub fn protection_candidates(d: usize, delta: Delta) -> Result<ProtectionCandidates> {
    require_dim(d, 1)?;
    delta.require_unit_range()?;
    let params = DistortionParams::new(d, delta)?;
    let center = circumcenter(d, delta)?;
    let radius = circumradius(d, delta)?;
    let (distances, powers): (Vec<f64>, Vec<f64>) = opposite_set(&canonical_simplex(d))
        .points
        .iter()
        .map(|p| {
            let dist2 = (&distort_int(p, &params) - &center).norm_squared();
            (dist2.sqrt() - radius, dist2 - radius * radius)
        })
        .unzip();
    if (distances[0] - distances[d]).abs() > DEFAULT_TOLERANCE {
        return Err(Error::Inconsistent(format!(
            "end candidates differ: D_0 = {}, D_d = {}",
            distances[0], distances[d]
        )));
    }
    if let Some(bad) = distances[1..d]
        .iter()
        .find(|&&v| (v - distances[1]).abs() > DEFAULT_TOLERANCE)
    {
        return Err(Error::Inconsistent(format!(
            "middle candidates differ: D_1 = {}, found {bad}",
            distances[1]
        )));
    }
    Ok(ProtectionCandidates { distances, powers })
}

/// Power protection of the end points p⁰, p^d: 2δ².
pub fn power_protection_end(delta: Delta) -> f64 {
    2.0 * delta.squared()
}

/// Power protection of the middle points p^1..p^{d−1}: (2/d)(1−δ²).
pub fn power_protection_mid(d: usize, delta: Delta) -> f64 {
    2.0 / d as f64 * (1.0 - delta.squared())
}

/// Protection 𝒫_δ of T_δ(ℤ^d), δ ∈ (0, 1].
///
/// For d = 1 there are no middle candidates and the end formula applies for
/// every δ.
pub fn protection(d: usize, delta: Delta) -> Result<f64> {
    require_dim(d, 1)?;
    delta.require_unit_range()?;
    let n = d as f64;
    let s = delta.squared();
    let base = radius_polynomial(n, s);
    let end = || ((base + 24.0 * n * s) / (12.0 * n)).sqrt() - (base / (12.0 * n)).sqrt();
    if d == 1 {
        return Ok(end());
    }
    Ok(match Regime::classify(d, delta) {
        Regime::AboveCritical => {
            let mid = s * s * (n * n - 1.0) + s * (n * n - 22.0) + n * n + 23.0;
            (mid / (12.0 * n)).sqrt() - (base / (12.0 * n)).sqrt()
        }
        Regime::Critical => {
            let r2 = n * (n + 2.0) / (12.0 * (n + 1.0));
            (r2 + 2.0 / (n + 1.0)).sqrt() - r2.sqrt()
        }
        Regime::BelowCritical => end(),
    })
}

/// 𝒫_δ / R_δ in ratio form.
pub fn normalized_protection(d: usize, delta: Delta) -> Result<f64> {
    require_dim(d, 1)?;
    delta.require_unit_range()?;
    let n = d as f64;
    let s = delta.squared();
    let base = radius_polynomial(n, s);
    let end = || ((base + 24.0 * n * s) / base).sqrt() - 1.0;
    if d == 1 {
        return Ok(end());
    }
    Ok(match Regime::classify(d, delta) {
        Regime::AboveCritical => {
            ((s * s * (n * n - 1.0) + s * (n * n - 22.0) + n * n + 23.0) / base).sqrt() - 1.0
        }
        Regime::Critical => ((n * n + 2.0 * n + 24.0) / (n * n + 2.0 * n)).sqrt() - 1.0,
        Regime::BelowCritical => end(),
    })
}

/// The leading-order approximations quoted next to the normalized protection:
/// 24(1−δ²)/(d²(δ⁴+δ²+1)) above the critical value, 24/d² at it, and
/// 24δ²/(d(δ⁴+δ²+1)) below it.
pub fn normalized_protection_approximation(d: usize, delta: Delta) -> Result<f64> {
    require_dim(d, 2)?;
    delta.require_unit_range()?;
    let n = d as f64;
    let s = delta.squared();
    Ok(match Regime::classify(d, delta) {
        Regime::AboveCritical => 24.0 * (1.0 - s) / (n * n * (s * s + s + 1.0)),
        Regime::Critical => 24.0 / (n * n),
        Regime::BelowCritical => 24.0 * s / (n * (s * s + s + 1.0)),
    })
}

/// Θ_δ: minimum height over the longest edge.
pub fn thickness(d: usize, delta: Delta) -> Result<f64> {
    require_dim(d, 2)?;
    Ok(min_height(d, delta)? / longest_edge(d, delta)?)
}

/// The three-branch thickness formula with breakpoints 1/√2 and 1/√(d+1),
/// built on [`longest_edge_relaxed`]. A lower bound on [`thickness`].
pub fn thickness_printed(d: usize, delta: Delta) -> Result<f64> {
    require_dim(d, 2)?;
    delta.require_unit_range()?;
    let n = d as f64;
    let s = delta.squared();
    let v = delta.value();
    Ok(if s >= 0.5 {
        1.0 / (v * (2.0 * n).sqrt())
    } else if Regime::classify(d, delta) != Regime::BelowCritical {
        (2.0 - 2.0 * s).sqrt() / n.sqrt()
    } else {
        2.0 * v * (1.0 - s).sqrt() / (s * n - s + 1.0).sqrt()
    })
}

/// Γ_δ: minimum height over the circumdiameter.
pub fn aspect(d: usize, delta: Delta) -> Result<f64> {
    require_dim(d, 2)?;
    delta.require_unit_range()?;
    let n = d as f64;
    let s = delta.squared();
    let radius_term = (3.0 * s * n * n + (1.0 - s).powi(2) * (n * n - 1.0)).sqrt();
    Ok(match Regime::classify(d, delta) {
        Regime::AboveCritical | Regime::Critical => (3.0 * n).sqrt() / (2f64.sqrt() * radius_term),
        Regime::BelowCritical => {
            delta.value() * n * 3f64.sqrt() / ((s * n - s + 1.0).sqrt() * radius_term)
        }
    })
}

/// One row of the quality table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QualityRecord {
    pub d: usize,
    pub delta: f64,
    pub regime: Regime,
    pub protection: f64,
    pub normalized_protection: f64,
    pub power_end: f64,
    pub power_mid: f64,
    pub thickness: f64,
    pub aspect: f64,
    pub circumradius: f64,
}

pub fn quality_record(d: usize, delta: Delta) -> Result<QualityRecord> {
    require_dim(d, 2)?;
    delta.require_unit_range()?;
    Ok(QualityRecord {
        d,
        delta: delta.value(),
        regime: Regime::classify(d, delta),
        protection: protection(d, delta)?,
        normalized_protection: normalized_protection(d, delta)?,
        power_end: power_protection_end(delta),
        power_mid: power_protection_mid(d, delta),
        thickness: thickness(d, delta)?,
        aspect: aspect(d, delta)?,
        circumradius: circumradius(d, delta)?,
    })
}

/// Constants of the permutahedral lattice A*_d.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PermutahedralConstants {
    pub d: usize,
    /// R_del = √(d(d+2)/(12(d+1))).
    pub delaunay_radius: f64,
    /// R′ = √(R_del² + 2/(d+1)).
    pub outer_radius: f64,
    pub protection: f64,
    pub normalized_protection: f64,
    pub power_protection: f64,
    /// s = (1/(2(d+1)))(d, d−2, …, −d), a vertex of the permutahedron.
    pub voronoi_vertex: Point,
}

pub fn permutahedral_constants(d: usize) -> Result<PermutahedralConstants> {
    require_dim(d, 1)?;
    let n = d as f64;
    let r2 = n * (n + 2.0) / (12.0 * (n + 1.0));
    let power_protection = 2.0 / (n + 1.0);
    let delaunay_radius = r2.sqrt();
    let outer_radius = (r2 + power_protection).sqrt();
    let voronoi_vertex = Point::new(
        (0..=d)
            .map(|k| (n - 2.0 * k as f64) / (2.0 * (n + 1.0)))
            .collect(),
    )?;
    Ok(PermutahedralConstants {
        d,
        delaunay_radius,
        outer_radius,
        protection: outer_radius - delaunay_radius,
        normalized_protection: ((n * n + 2.0 * n + 24.0) / (n * n + 2.0 * n)).sqrt() - 1.0,
        power_protection,
        voronoi_vertex,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn delta(v: f64) -> Delta {
        Delta::new(v).unwrap()
    }

    #[test]
    fn circumcenter_examples() {
        for c in circumcenter(5, delta(1.0)).unwrap().coords() {
            assert_abs_diff_eq!(*c, 0.5, epsilon = 1e-15);
        }
        let c0 = circumcenter(3, delta(0.0)).unwrap();
        for (c, e) in c0.coords().iter().zip([-2.0 / 6.0, 0.0, 2.0 / 6.0]) {
            assert_abs_diff_eq!(*c, e, epsilon = 1e-15);
        }
        let c = circumcenter(2, delta(0.5)).unwrap();
        assert_abs_diff_eq!(c[0], 0.0625, epsilon = 1e-15);
        assert_abs_diff_eq!(c[1], 0.4375, epsilon = 1e-15);
        assert!(circumcenter(2, delta(1.2)).is_err());
    }

    #[test]
    fn circumradius_examples() {
        for d in 1..=8 {
            let n = d as f64;
            assert_abs_diff_eq!(
                circumradius(d, delta(1.0)).unwrap(),
                n.sqrt() / 2.0,
                epsilon = 1e-15
            );
            assert_abs_diff_eq!(
                circumradius(d, delta(0.0)).unwrap(),
                ((n * n - 1.0) / (12.0 * n)).sqrt(),
                epsilon = 1e-15
            );
            assert_relative_eq!(
                circumradius(d, Delta::critical(d)).unwrap(),
                (n * (n + 2.0) / (12.0 * (n + 1.0))).sqrt(),
                max_relative = 1e-14
            );
            // R_δ = |C_δ − v⁰| with v⁰ = 0.
            let dl = delta(0.37);
            assert_abs_diff_eq!(
                circumradius(d, dl).unwrap(),
                circumcenter(d, dl).unwrap().norm(),
                epsilon = 1e-14
            );
        }
    }

    #[test]
    fn barycentric_weights_sum_to_one() {
        for d in 1..=8 {
            for k in 1..20 {
                let dl = delta(k as f64 / 20.0);
                let w = barycentric_weights(d, dl).unwrap();
                assert_abs_diff_eq!(w.iter().sum::<f64>(), 1.0, epsilon = 1e-14);
                assert!(w.iter().all(|&m| m > 0.0));
            }
            let w = barycentric_weights(d, delta(1.0)).unwrap();
            if d > 1 {
                assert_eq!(w[1], 0.0);
            }
        }
    }

    #[test]
    fn heights_and_edges() {
        for d in 2..=6 {
            let (h, eta) = heights_and_longest_edge(d, delta(1.0)).unwrap();
            assert_abs_diff_eq!(h[0], 1.0, epsilon = 1e-15);
            assert_abs_diff_eq!(eta, (d as f64).sqrt(), epsilon = 1e-15);
            assert_abs_diff_eq!(
                end_height(d, Delta::critical(d)),
                MID_HEIGHT,
                epsilon = 1e-15
            );
            assert!(end_height(d, delta(1e-9)) < 1e-8);
        }
        // d = 4, δ = 0.4: the relaxed maximum 2/(2√0.84) against the largest
        // integer candidate f(2) = 8 − 0.84·4 = 4.64.
        let dl = delta(0.4);
        assert_abs_diff_eq!(
            longest_edge_relaxed(4, dl).unwrap(),
            1.0 / 0.84f64.sqrt(),
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            longest_edge_relaxed(4, dl).unwrap(),
            1.091089451179962,
            epsilon = 1e-12
        );
        let brute = (1..=4)
            .map(|x| {
                let x = x as f64;
                4.0 * x - 0.84 * x * x
            })
            .fold(0.0, f64::max);
        assert_abs_diff_eq!(brute, 4.64, epsilon = 1e-14);
        assert_abs_diff_eq!(
            longest_edge(4, dl).unwrap(),
            (brute / 4.0).sqrt(),
            epsilon = 1e-14
        );
    }

    #[test]
    fn longest_edge_matches_enumeration() {
        for d in 1..=12 {
            for k in 1..=100 {
                let dl = delta(k as f64 / 100.0);
                let brute = (1..=d).map(|x| edge_length(d, dl, x)).fold(0.0, f64::max);
                assert_abs_diff_eq!(longest_edge(d, dl).unwrap(), brute, epsilon = 1e-15);
                assert!(longest_edge_relaxed(d, dl).unwrap() >= brute - 1e-15);
            }
        }
    }

    #[test]
    fn power_protection_values() {
        for d in 2..=8 {
            for k in 1..=20 {
                let dl = delta(k as f64 / 20.0);
                let c = protection_candidates(d, dl).unwrap();
                assert_abs_diff_eq!(c.powers[0], 2.0 * dl.squared(), epsilon = 1e-12);
                assert_abs_diff_eq!(c.powers[d], 2.0 * dl.squared(), epsilon = 1e-12);
                for e in &c.powers[1..d] {
                    assert_abs_diff_eq!(*e, power_protection_mid(d, dl), epsilon = 1e-12);
                }
            }
            let crit = Delta::critical(d);
            let c = protection_candidates(d, crit).unwrap();
            for e in &c.powers {
                assert_abs_diff_eq!(*e, 2.0 / (d as f64 + 1.0), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn candidates_at_extremes() {
        for d in 2..=6 {
            let c = protection_candidates(d, delta(1.0)).unwrap();
            assert_abs_diff_eq!(c.mid().unwrap(), 0.0, epsilon = 1e-12);
            let c = protection_candidates(d, Delta::critical(d)).unwrap();
            for v in &c.distances {
                assert_abs_diff_eq!(*v, c.distances[0], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn protection_cases() {
        for d in 2..=8 {
            assert_abs_diff_eq!(protection(d, delta(1.0)).unwrap(), 0.0, epsilon = 1e-15);
            let crit = Delta::critical(d);
            let k = permutahedral_constants(d).unwrap();
            assert_relative_eq!(
                protection(d, crit).unwrap(),
                k.protection,
                max_relative = 1e-13
            );
            for k in 1..=20 {
                let dl = delta(k as f64 / 20.0);
                let c = protection_candidates(d, dl).unwrap();
                assert_abs_diff_eq!(protection(d, dl).unwrap(), c.min(), epsilon = 1e-12);
                assert_relative_eq!(
                    normalized_protection(d, dl).unwrap(),
                    protection(d, dl).unwrap() / circumradius(d, dl).unwrap(),
                    max_relative = 1e-12,
                    epsilon = 1e-15
                );
            }
        }
        assert!(protection(2, delta(0.0)).is_err());
        assert!(protection(2, delta(1.01)).is_err());
    }

    #[test]
    fn one_dimensional_protection() {
        // T_δ(ℤ) = δℤ: the nearest outside point is 3δ/2 from the midpoint.
        for v in [0.2, 0.5, 0.9] {
            let dl = delta(v);
            assert_abs_diff_eq!(protection(1, dl).unwrap(), v, epsilon = 1e-14);
        }
    }

    #[test]
    fn normalized_protection_examples() {
        assert_abs_diff_eq!(
            normalized_protection(2, Delta::critical(2)).unwrap(),
            1.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            normalized_protection(3, delta(1.0)).unwrap(),
            0.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            normalized_protection(4, Delta::critical(4)).unwrap(),
            2f64.sqrt() - 1.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn thickness_and_aspect_examples() {
        assert_abs_diff_eq!(
            thickness(3, delta(1.0)).unwrap(),
            1.0 / 6f64.sqrt(),
            epsilon = 1e-15
        );
        // Both branches of the printed formula meet at δ = 1/√2.
        let half = Delta::new(0.5f64.sqrt()).unwrap();
        for d in 2..=8 {
            let n = d as f64;
            let upper = 1.0 / (half.value() * (2.0 * n).sqrt());
            let lower = (2.0 - 2.0 * half.squared()).sqrt() / n.sqrt();
            assert_abs_diff_eq!(upper, lower, epsilon = 1e-15);
            assert_abs_diff_eq!(upper, 1.0 / n.sqrt(), epsilon = 1e-15);
        }
        assert_abs_diff_eq!(aspect(2, delta(1.0)).unwrap(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(
            thickness(3, Delta::critical(3)).unwrap(),
            0.5f64.sqrt(),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            thickness_printed(3, Delta::critical(3)).unwrap(),
            0.5f64.sqrt(),
            epsilon = 1e-15
        );
        assert!(thickness(1, delta(0.5)).is_err());
    }

    #[test]
    fn aspect_is_min_height_over_diameter() {
        for d in 2..=10 {
            for k in 1..=40 {
                let dl = delta(k as f64 / 40.0);
                let expected = min_height(d, dl).unwrap() / (2.0 * circumradius(d, dl).unwrap());
                assert_relative_eq!(aspect(d, dl).unwrap(), expected, max_relative = 1e-13);
            }
        }
    }

    #[test]
    fn printed_thickness_is_a_lower_bound() {
        for d in 2..=10 {
            for k in 1..=100 {
                let dl = delta(k as f64 / 100.0);
                let exact = thickness(d, dl).unwrap();
                let printed = thickness_printed(d, dl).unwrap();
                assert!(printed <= exact + 1e-15, "d={d} δ={}", dl.value());
                if dl.squared() >= 0.5 {
                    assert_abs_diff_eq!(printed, exact, epsilon = 1e-14);
                }
            }
        }
        // Odd d at the critical value: the real maximizer (d+1)/2 is an integer.
        for d in [3, 5, 7, 9] {
            let crit = Delta::critical(d);
            assert_abs_diff_eq!(
                thickness_printed(d, crit).unwrap(),
                thickness(d, crit).unwrap(),
                epsilon = 1e-14
            );
        }
        // Even d at the critical value: they differ.
        let crit = Delta::critical(4);
        assert!(thickness(4, crit).unwrap() - thickness_printed(4, crit).unwrap() > 1e-3);
    }

    #[test]
    fn permutahedral_examples() {
        let k = permutahedral_constants(2).unwrap();
        assert_abs_diff_eq!(k.power_protection, 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(k.normalized_protection, 1.0, epsilon = 1e-15);
        let k = permutahedral_constants(3).unwrap();
        assert_abs_diff_eq!(k.delaunay_radius, 5f64.sqrt() / 4.0, epsilon = 1e-15);
        for d in 1..=12 {
            let k = permutahedral_constants(d).unwrap();
            assert_abs_diff_eq!(
                k.outer_radius.powi(2) - k.delaunay_radius.powi(2),
                k.power_protection,
                epsilon = 1e-14
            );
            assert_abs_diff_eq!(k.voronoi_vertex.coordinate_sum(), 0.0, epsilon = 1e-14);
            // Permutahedron vertices lie on the Delaunay sphere.
            assert_abs_diff_eq!(k.voronoi_vertex.norm(), k.delaunay_radius, epsilon = 1e-14);
            assert_relative_eq!(
                k.normalized_protection,
                k.protection / k.delaunay_radius,
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn quality_record_fields() {
        let r = quality_record(4, delta(0.5)).unwrap();
        assert_eq!(r.regime, Regime::AboveCritical);
        assert_eq!(r.power_end, 0.5);
        assert_abs_diff_eq!(r.power_mid, 0.375, epsilon = 1e-15);
        let r = quality_record(3, Delta::critical(3)).unwrap();
        assert_eq!(r.regime, Regime::Critical);
        assert!(quality_record(1, delta(0.5)).is_err());
        assert!(quality_record(3, delta(0.0)).is_err());
    }
}
