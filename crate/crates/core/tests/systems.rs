mod common;

use certroot::{PolySystem, RealCoords};
use common::*;
use proptest::prelude::*;

fn max_abs(v: &[num_complex::Complex64]) -> f64 {
    v.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

#[test]
fn weyl_norm_is_unitarily_invariant() {
    let mut r = rng(1);
    for degrees in PROFILES {
        let p = profile(degrees);
        for _ in 0..20 {
            let f = system(&p, &mut r).into_system().scale(c(2.5, -1.0));
            let u = unitary(p.nvars(), &mut r);
            let g = f.compose_linear(&u);
            assert!(rel_close(g.weyl_norm(), f.weyl_norm(), 1e-10), "{degrees:?}");
        }
    }
}

#[test]
fn compose_linear_evaluates_at_image() {
    let mut r = rng(2);
    for degrees in PROFILES {
        let p = profile(degrees);
        let f = system(&p, &mut r).into_system();
        let m = nalgebra::DMatrix::from_vec(p.nvars(), p.nvars(), gaussian_vec(p.nvars() * p.nvars(), &mut r));
        let g = f.compose_linear(&m);
        let x = gaussian_vec(p.nvars(), &mut r);
        let ux: Vec<_> = (0..p.nvars()).map(|i| (0..p.nvars()).map(|j| m[(i, j)] * x[j]).sum()).collect();
        let lhs = g.evaluate(&x);
        let rhs = f.evaluate(&ux);
        let scale = max_abs(&rhs).max(1.0);
        for (a, b) in lhs.iter().zip(&rhs) {
            assert!((a - b).norm() < 1e-10 * scale);
        }
    }
}

#[test]
fn euler_identity() {
    let mut r = rng(3);
    for degrees in PROFILES {
        let p = profile(degrees);
        for _ in 0..10 {
            let f = system(&p, &mut r).into_system();
            let z = gaussian_vec(p.nvars(), &mut r);
            let (fz, jac) = f.evaluate_with_jacobian(&z);
            assert!((jac.clone() - f.jacobian(&z)).norm() <= 1e-12 * jac.norm());
            for (a, b) in fz.iter().zip(f.evaluate(&z)) {
                assert!((a - b).norm() <= 1e-12 * b.norm().max(1.0));
            }
            for (i, &d) in p.degrees().iter().enumerate() {
                let lhs: num_complex::Complex64 = (0..p.nvars()).map(|j| jac[(i, j)] * z[j]).sum();
                let rhs = fz[i] * d as f64;
                assert!((lhs - rhs).norm() <= 1e-10 * rhs.norm().max(1e-300), "{degrees:?}");
            }
        }
    }
}

#[test]
fn jacobian_matches_finite_differences() {
    let mut r = rng(4);
    let p = profile(&[3, 2]);
    let f = system(&p, &mut r).into_system();
    let z = gaussian_vec(3, &mut r);
    let jac = f.jacobian(&z);
    let h = 1e-6;
    for j in 0..3 {
        let mut zp = z.clone();
        let mut zm = z.clone();
        zp[j] += h;
        zm[j] -= h;
        let (fp, fm) = (f.evaluate(&zp), f.evaluate(&zm));
        for i in 0..2 {
            let fd = (fp[i] - fm[i]) / (2.0 * h);
            assert!((fd - jac[(i, j)]).norm() < 1e-6 * (1.0 + jac[(i, j)].norm()));
        }
    }
}

#[test]
fn real_coords_isometry_and_roundtrip() {
    let mut r = rng(5);
    for degrees in PROFILES {
        let p = profile(degrees);
        for _ in 0..20 {
            let f = system(&p, &mut r).into_system().scale(c(0.3, 1.7));
            let v = f.to_real_coords();
            assert_eq!(v.len(), 2 * p.dim());
            assert!(rel_close(v.norm(), f.weyl_norm(), 1e-12));
            let back = PolySystem::from_real_coords(&v, &p).unwrap();
            for (a, b) in back.coeffs().iter().zip(f.coeffs()) {
                assert!((a - b).norm() <= 4.0 * f64::EPSILON * b.norm());
            }
            assert_eq!(back.to_real_coords(), v);
        }
    }
    assert!(PolySystem::from_real_coords(&RealCoords(vec![0.0; 5]), &profile(&[2])).is_err());
}

#[test]
fn json_roundtrip() {
    let mut r = rng(6);
    let p = profile(&[3, 2]);
    let f = system(&p, &mut r).into_system();
    let back = PolySystem::from_json(&f.to_json()).unwrap();
    assert_eq!(back, f);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evaluation_is_homogeneous(seed in any::<u64>(), lr in -2.0f64..2.0, li in -2.0f64..2.0, pick in 0usize..8) {
        let mut r = rng(seed);
        let p = profile(PROFILES[pick]);
        let f = system(&p, &mut r).into_system();
        let z = gaussian_vec(p.nvars(), &mut r);
        let lambda = c(lr, li);
        prop_assume!(lambda.norm() > 1e-3);
        let scaled: Vec<_> = z.iter().map(|x| x * lambda).collect();
        let a = f.evaluate(&scaled);
        let b = f.evaluate(&z);
        for (i, &d) in p.degrees().iter().enumerate() {
            let want = b[i] * lambda.powu(d);
            prop_assert!((a[i] - want).norm() <= 1e-10 * want.norm().max(1e-300));
        }
    }

    #[test]
    fn weyl_inner_is_hermitian(seed in any::<u64>(), pick in 0usize..8) {
        let mut r = rng(seed);
        let p = profile(PROFILES[pick]);
        let f = system(&p, &mut r).into_system();
        let g = system(&p, &mut r).into_system();
        let a = f.weyl_inner(&g).unwrap();
        let b = g.weyl_inner(&f).unwrap();
        prop_assert!((a - b.conj()).norm() < 1e-14);
        prop_assert!(a.norm() <= 1.0 + 1e-12);
    }
}
