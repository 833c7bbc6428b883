//! Randomized invariants of the region arithmetic.

use nlbode_core::cgeom::{hco, minkowski_product, minkowski_sum, Region, Resolution};
use num_complex::Complex64;
use proptest::prelude::*;

fn res() -> Resolution {
    Resolution::new(96)
}

fn points() -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 1..8)
        .prop_map(|v| v.into_iter().map(|(x, y)| Complex64::new(x, y)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hull_radius_is_max_input_modulus(pts in points()) {
        let r = hco(&pts, res());
        let want = pts.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let got = r.radius().unwrap();
        prop_assert!((got - want).abs() <= 1e-9 * (1.0 + want), "got {got}, want {want}");
    }

    #[test]
    fn hull_is_idempotent(pts in points()) {
        let re = res();
        let h1 = hco(&pts, re);
        let h2 = h1.arc_complete(re);
        let tol = re.tol(h1.radius().unwrap());
        prop_assert!((h1.radius().unwrap() - h2.radius().unwrap()).abs() <= tol);
        for z in h1.boundary_samples().iter().step_by(7) {
            prop_assert!(h2.contains(*z, re), "hull lost boundary point {z}");
        }
    }

    #[test]
    fn membership_is_conjugate_symmetric(pts in points(), px in -4.0f64..4.0, py in -4.0f64..4.0) {
        let re = res();
        let r = hco(&pts, re);
        let z = Complex64::new(px, py);
        prop_assert_eq!(r.contains(z, re), r.contains(z.conj(), re));
    }

    #[test]
    fn hull_contains_its_inputs(pts in points()) {
        let re = res();
        let r = hco(&pts, re);
        for z in &pts {
            prop_assert!(r.contains(*z, re), "hull misses input {z}");
        }
    }

    #[test]
    fn sum_radius_is_subadditive(pa in points(), pb in points()) {
        let re = res();
        let a = hco(&pa, re);
        let b = hco(&pb, re);
        let s = minkowski_sum(&a, &b, re).unwrap();
        let bound = a.radius().unwrap() + b.radius().unwrap();
        prop_assert!(s.radius().unwrap() <= bound + 1e-9 * (1.0 + bound));
    }

    #[test]
    fn product_radius_is_multiplicative(pa in points(), pb in points()) {
        let re = res();
        let a = hco(&pa, re);
        let b = hco(&pb, re);
        let p = minkowski_product(&a, &b, re).unwrap();
        let want = a.radius().unwrap() * b.radius().unwrap();
        prop_assert!((p.radius().unwrap() - want).abs() <= 1e-9 * (1.0 + want));
    }

    #[test]
    fn scaling_scales_the_radius(pts in points(), a in -3.0f64..3.0) {
        let r = hco(&pts, res());
        let want = a.abs() * r.radius().unwrap();
        prop_assert!((r.scale(a).radius().unwrap() - want).abs() <= 1e-9 * (1.0 + want));
    }

    #[test]
    fn double_negation_preserves_membership(pts in points(), px in -4.0f64..4.0, py in -4.0f64..4.0) {
        let re = res();
        let r = hco(&pts, re);
        let z = Complex64::new(px, py);
        prop_assert_eq!(r.contains(z, re), r.negate().negate().contains(z, re));
        prop_assert_eq!(r.contains(z, re), r.negate().contains(-z, re));
    }

    #[test]
    fn disk_inversion_is_an_involution(c in -2.0f64..2.0, r in 0.05f64..1.5) {
        let re = res();
        // Keep 0 clearly off the rim.
        prop_assume!((c.abs() - r).abs() > 0.05);
        let d = Region::disk(c, r, re);
        let back = d.mobius_invert(re).unwrap().mobius_invert(re).unwrap();
        prop_assert!((back.radius().unwrap() - d.radius().unwrap()).abs() <= 1e-9);
    }
}
