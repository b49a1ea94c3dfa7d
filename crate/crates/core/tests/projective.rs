mod common;

use certroot::{dist_proj, dist_sphere, standard_unitary, Geodesic, GeodesicMode, ProjectivePoint};
use common::*;
use num_complex::Complex64;
use proptest::prelude::*;

#[test]
fn geodesic_is_a_unit_speed_great_circle() {
    let mut r = rng(10);
    for degrees in PROFILES {
        let p = profile(degrees);
        let g = system(&p, &mut r);
        let f = system(&p, &mut r);
        let path = Geodesic::new(&g, &f, GeodesicMode::Exact).unwrap();
        let alpha = path.angle();
        assert_eq!(path.at(0.0), g);
        assert_eq!(path.at(1.0), f);
        for k in 1..10 {
            let t = k as f64 / 10.0;
            let h = path.at(t);
            assert!((h.system().weyl_norm() - 1.0).abs() < 1e-12);
            assert!((dist_sphere(&g, &h).unwrap() - t * alpha).abs() < 1e-10);
            assert!((dist_sphere(&h, &f).unwrap() - (1.0 - t) * alpha).abs() < 1e-10);
            let chord = Geodesic::new(&g, &f, GeodesicMode::Chord).unwrap().at(t);
            assert!((chord.system().weyl_norm() - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn standard_unitary_properties() {
    let mut r = rng(11);
    for m in 2..6 {
        for _ in 0..50 {
            let zeta = point(m, &mut r);
            let u = standard_unitary(&zeta);
            let uu = u.matrix().adjoint() * u.matrix();
            assert!((uu - nalgebra::DMatrix::<Complex64>::identity(m, m)).norm() < 1e-10);
            assert!((u.matrix().determinant() - Complex64::new(1.0, 0.0)).norm() < 1e-8);
            let e0 = ProjectivePoint::basis(m, 0);
            let image = u.apply(e0.rep());
            for (a, b) in image.iter().zip(zeta.rep()) {
                assert!((a - b).norm() < 1e-12);
            }
            // a vector orthogonal to e0 and zeta is fixed
            if m >= 3 {
                let mut v = gaussian_vec(m, &mut r);
                v[0] = Complex64::new(0.0, 0.0);
                let z = zeta.rep();
                let w: Vec<Complex64> = {
                    let mut w = z.to_vec();
                    w[0] = Complex64::new(0.0, 0.0);
                    w
                };
                let ww: f64 = w.iter().map(|c| c.norm_sqr()).sum();
                let proj: Complex64 = v.iter().zip(&w).map(|(a, b)| a * b.conj()).sum::<Complex64>() / ww;
                v.iter_mut().zip(&w).for_each(|(a, b)| *a -= proj * b);
                let uv = u.apply(&v);
                for (a, b) in uv.iter().zip(&v) {
                    assert!((a - b).norm() < 1e-10);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn dist_proj_is_phase_invariant(seed in any::<u64>(), a in 0.0f64..6.3, b in 0.0f64..6.3, m in 2usize..5) {
        let mut r = rng(seed);
        let x = point(m, &mut r);
        let y = point(m, &mut r);
        let d = dist_proj(&x, &y);
        let xa = x.scale_phase(Complex64::from_polar(1.0, a)).unwrap();
        let yb = y.scale_phase(Complex64::from_polar(1.0, b)).unwrap();
        prop_assert!((dist_proj(&xa, &yb) - d).abs() < 1e-12);
        prop_assert!(dist_proj(&xa, &x) < 1e-12);
        prop_assert!((0.0..=std::f64::consts::FRAC_PI_2 + 1e-15).contains(&d));
    }
}
