use approx::assert_relative_eq;
use distgrid::closed_forms;
use distgrid::freudenthal::{canonical_simplex, distorted_simplex};
use distgrid::geometry::{circumsphere, distance, height_above_facet, simplex_measures};
use distgrid::lattice::{distort, undistort};
use distgrid::{Delta, DistortionParams, Point, Simplex};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn params(d: usize, delta: f64) -> DistortionParams {
    DistortionParams::new(d, Delta::new(delta).unwrap()).unwrap()
}

fn vec_of(d: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0..10.0f64, d)
}

/// Random orthogonal matrix from the QR factor of a random square matrix.
fn orthogonal(entries: &[f64], d: usize) -> DMatrix<f64> {
    DMatrix::from_row_slice(d, d, entries).qr().q()
}

fn apply(q: &DMatrix<f64>, p: &Point) -> Point {
    let v = q * nalgebra::DVector::from_column_slice(p.coords());
    Point::new(v.iter().copied().collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distortion_is_linear(
        (d, x, y) in (1usize..8).prop_flat_map(|d| (Just(d), vec_of(d), vec_of(d))),
        delta in 0.0..1.5f64,
        a in -3.0..3.0f64,
    ) {
        let p = params(d, delta);
        let x = Point::new(x).unwrap();
        let y = Point::new(y).unwrap();
        let lhs = distort(&(&x.scale(a) + &y), &p).unwrap();
        let rhs = &distort(&x, &p).unwrap().scale(a) + &distort(&y, &p).unwrap();
        prop_assert!(distance(&lhs, &rhs).unwrap() < 1e-9);
    }

    #[test]
    fn distortion_scales_diagonal_component(
        (d, x) in (1usize..8).prop_flat_map(|d| (Just(d), vec_of(d))),
        delta in 0.0..1.5f64,
    ) {
        let x = Point::new(x).unwrap();
        let y = distort(&x, &params(d, delta)).unwrap();
        prop_assert!((y.coordinate_sum() - delta * x.coordinate_sum()).abs() < 1e-9);
    }

    #[test]
    fn undistort_round_trip(
        (d, x) in (1usize..8).prop_flat_map(|d| (Just(d), vec_of(d))),
        delta in 0.05..1.5f64,
    ) {
        let p = params(d, delta);
        let x = Point::new(x).unwrap();
        let back = undistort(&distort(&x, &p).unwrap(), &p).unwrap();
        prop_assert!(distance(&x, &back).unwrap() < 1e-8);
    }

    #[test]
    fn heights_invariant_under_isometry(
        (d, m, shift) in (2usize..6).prop_flat_map(|d| (Just(d), prop::collection::vec(-1.0..1.0f64, d * d), vec_of(d))),
        delta in 0.1..1.0f64,
        perm_seed in 0usize..720,
    ) {
        let s = distorted_simplex(&canonical_simplex(d), &params(d, delta)).unwrap();
        let q = orthogonal(&m, d);
        prop_assume!((q.determinant().abs() - 1.0).abs() < 1e-9);
        let shift = Point::new(shift).unwrap();
        let mut moved: Vec<Point> = s.vertices().iter().map(|v| &apply(&q, v) + &shift).collect();
        let k = perm_seed % moved.len();
        moved.rotate_left(k);
        let t = Simplex::new(moved).unwrap();
        for i in 0..=d {
            let original = height_above_facet(&s, (i + k) % (d + 1)).unwrap();
            prop_assert!((height_above_facet(&t, i).unwrap() - original).abs() < 1e-9);
        }
        let (_, r0) = circumsphere(&s).unwrap();
        let (_, r1) = circumsphere(&t).unwrap();
        prop_assert!((r0 - r1).abs() < 1e-9);
    }

    #[test]
    fn circumcenter_is_equidistant(
        pts in (1usize..7).prop_flat_map(|d| prop::collection::vec(vec_of(d), d + 1)),
    ) {
        let Ok(s) = Simplex::new(pts.into_iter().map(|p| Point::new(p).unwrap()).collect()) else {
            return Ok(());
        };
        prop_assume!(!s.is_degenerate());
        let (c, r) = circumsphere(&s).unwrap();
        for v in s.vertices() {
            prop_assert!((distance(v, &c).unwrap() - r).abs() <= 1e-7 * r.max(1.0));
        }
    }

    #[test]
    fn quality_in_unit_interval(d in 2usize..12, delta in 0.001..1.0f64) {
        let dl = Delta::new(delta).unwrap();
        let theta = closed_forms::thickness(d, dl).unwrap();
        let gamma = closed_forms::aspect(d, dl).unwrap();
        prop_assert!(theta > 0.0 && theta <= 1.0);
        prop_assert!(gamma > 0.0 && gamma <= 1.0);
        prop_assert!(closed_forms::protection(d, dl).unwrap() > 0.0);
    }

    #[test]
    fn measured_quality_matches_closed_form(d in 2usize..8, delta in 0.01..1.0f64) {
        let dl = Delta::new(delta).unwrap();
        let m = simplex_measures(&distorted_simplex(&canonical_simplex(d), &params(d, delta)).unwrap()).unwrap();
        assert_relative_eq!(m.thickness, closed_forms::thickness(d, dl).unwrap(), max_relative = 1e-9);
        assert_relative_eq!(m.aspect, closed_forms::aspect(d, dl).unwrap(), max_relative = 1e-9);
        assert_relative_eq!(m.circumradius, closed_forms::circumradius(d, dl).unwrap(), max_relative = 1e-9);
    }
}
