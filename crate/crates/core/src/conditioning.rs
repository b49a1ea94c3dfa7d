//! Projective Newton operator, the condition number and root certification.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{complement_basis, hermitian_tridiagonal, one_norm, singular_extremes, svd_solve};
use crate::projective::{dist_proj, ProjectivePoint};
use crate::systems::PolySystem;

/// Relative singular-value threshold below which `df(z)|_{z^perp}` counts as singular.
pub const SINGULAR_REL_TOL: f64 = 1e-14;
/// Newton steps taken by [`certify_root`] when callers have no preference.
pub const DEFAULT_CERT_ITERS: usize = 5;
/// Absolute slack on contraction checks; distances below this are rounding noise.
pub const CONTRACTION_SLACK: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MuMode {
    /// Smallest singular value of the scaled restricted Jacobian.
    #[default]
    Exact,
    /// Upper end of the tridiagonal sandwich, never below the exact value.
    Bound,
}

/// `df(z) B` with `B` an orthonormal basis of `z^perp`, plus `f(z)` and `B`.
fn restricted(f: &PolySystem, z: &[Complex64]) -> (Vec<Complex64>, DMatrix<Complex64>, DMatrix<Complex64>) {
    let (fz, jac) = f.evaluate_with_jacobian(z);
    let basis = complement_basis(z);
    let a = jac * &basis;
    (fz, a, basis)
}

/// `Delta^{-1} df(z) B` for unit `z`.
fn scaled_restricted(f: &PolySystem, z: &[Complex64]) -> DMatrix<Complex64> {
    let (_, mut a, _) = restricted(f, z);
    for (i, &d) in f.profile().degrees().iter().enumerate() {
        let s = 1.0 / (d as f64).sqrt();
        a.row_mut(i).iter_mut().for_each(|c| *c *= s);
    }
    a
}

/// One projective Newton step `N(f, z)`.
pub fn newton_step(f: &PolySystem, z: &ProjectivePoint) -> Result<ProjectivePoint> {
    let zr = z.rep();
    let (fz, a, basis) = restricted(f, zr);
    let s = svd_solve(&a, &fz, SINGULAR_REL_TOL).ok_or(Error::SingularJacobian)?;
    let w = &basis * nalgebra::DVector::from_column_slice(&s);
    let next: Vec<Complex64> = zr.iter().zip(w.iter()).map(|(a, b)| a - b).collect();
    ProjectivePoint::new(next)
}

/// `mu(f, z)`, `+inf` when the restricted Jacobian is numerically singular.
pub fn mu_exact(f: &PolySystem, z: &ProjectivePoint) -> f64 {
    let a = scaled_restricted(f, z.rep());
    let (smin, smax) = singular_extremes(&a);
    if !(smax > 0.0) || smin < SINGULAR_REL_TOL * smax || !smin.is_finite() {
        return f64::INFINITY;
    }
    f.weyl_norm() / smin
}

/// Two-sided bound `(lower, upper)` on `mu(f, z)` with `upper / lower = 3^{1/4}`,
/// from the one-norm of a tridiagonal form of `Xi^* Xi`.
pub fn mu_bound(f: &PolySystem, z: &ProjectivePoint) -> Result<(f64, f64)> {
    let a = scaled_restricted(f, z.rep());
    let (smin, smax) = singular_extremes(&a);
    if !(smax > 0.0) || smin < SINGULAR_REL_TOL * smax {
        return Err(Error::SingularJacobian);
    }
    let xi = a.try_inverse().ok_or(Error::SingularJacobian)?;
    let gram = xi.adjoint() * &xi;
    let t = hermitian_tridiagonal(&gram);
    let upper = f.weyl_norm() * one_norm(&t).sqrt();
    Ok((upper / 3f64.powf(0.25), upper))
}

/// `mu` according to `mode`; singular points give `+inf` in both modes.
pub fn mu_with(f: &PolySystem, z: &ProjectivePoint, mode: MuMode) -> f64 {
    match mode {
        MuMode::Exact => mu_exact(f, z),
        MuMode::Bound => mu_bound(f, z).map(|(_, hi)| hi).unwrap_or(f64::INFINITY),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    /// `mu(f, zeta_hat)` at the Newton-refined point.
    pub mu_at_root: f64,
    /// `d_P(z, zeta_hat)`.
    pub proj_distance: f64,
    /// `D^{3/2} mu_at_root proj_distance`.
    pub alpha: f64,
    /// `d_P(z_k, zeta_hat) / d_P(z, zeta_hat)` for `k = 1..iters-1`.
    pub contraction_ratios: Vec<f64>,
    pub passed: bool,
}

impl Certificate {
    fn failed() -> Self {
        Self {
            mu_at_root: f64::INFINITY,
            proj_distance: f64::NAN,
            alpha: f64::INFINITY,
            contraction_ratios: Vec::new(),
            passed: false,
        }
    }
}

/// Refines `z` by `iters` Newton steps and checks the approximate-root
/// criterion at the refined point. A singular Jacobian along the way yields a
/// failed certificate.
pub fn certify_root(f: &PolySystem, z: &ProjectivePoint, iters: usize) -> Certificate {
    let iters = iters.max(3);
    let mut seq = Vec::with_capacity(iters + 1);
    seq.push(z.clone());
    for _ in 0..iters {
        match newton_step(f, seq.last().unwrap()) {
            Ok(next) => seq.push(next),
            Err(_) => return Certificate::failed(),
        }
    }
    let root = seq.last().unwrap();
    let mu = mu_exact(f, root);
    let d0 = dist_proj(z, root);
    let alpha = f.profile().d32() * mu * d0;
    let mut ratios = Vec::with_capacity(iters - 1);
    let mut contracting = true;
    for (k, zk) in seq.iter().enumerate().take(iters).skip(1) {
        let dk = dist_proj(zk, root);
        let bound = 2f64.powf(1.0 - 2f64.powi(k as i32));
        ratios.push(if d0 > 0.0 { dk / d0 } else { 0.0 });
        if dk > bound * d0 + CONTRACTION_SLACK {
            contracting = false;
        }
    }
    Certificate {
        mu_at_root: mu,
        proj_distance: d0,
        alpha,
        contraction_ratios: ratios,
        passed: alpha.is_finite() && alpha <= 1.0 / 3.0 && contracting,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::DegreeProfile;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sqrt2_x0x1() -> PolySystem {
        let p = DegreeProfile::new(&[2]).unwrap();
        PolySystem::from_terms(p, &[(0, &[1, 1], c(2f64.sqrt(), 0.0))]).unwrap()
    }

    #[test]
    fn newton_hand_example() {
        let p = DegreeProfile::new(&[2]).unwrap();
        let f = PolySystem::from_terms(p, &[(0, &[0, 2], c(1.0, 0.0)), (0, &[2, 0], c(-1.0, 0.0))]).unwrap();
        let z = ProjectivePoint::from_real(&[1.0, 1.2]).unwrap();
        let next = newton_step(&f, &z).unwrap();
        let want = ProjectivePoint::from_real(&[1.11, 1.1 + 1.0 / 120.0]).unwrap();
        assert!(dist_proj(&next, &want) < 1e-14);
    }

    #[test]
    fn newton_fixes_roots() {
        let f = sqrt2_x0x1();
        let z = ProjectivePoint::basis(2, 1);
        assert!(dist_proj(&newton_step(&f, &z).unwrap(), &z) < 1e-15);
    }

    #[test]
    fn mu_hand_example() {
        let f = sqrt2_x0x1();
        let z = ProjectivePoint::basis(2, 1);
        assert!((mu_exact(&f, &z) - 1.0).abs() < 1e-14);
        let (lo, hi) = mu_bound(&f, &z).unwrap();
        assert!(lo <= 1.0 + 1e-14 && 1.0 <= hi + 1e-14);
        assert!((hi / lo - 3f64.powf(0.25)).abs() < 1e-14);
    }

    #[test]
    fn mu_is_infinite_at_singular_points() {
        let p = DegreeProfile::new(&[2]).unwrap();
        let f = PolySystem::from_terms(p, &[(0, &[0, 2], c(1.0, 0.0))]).unwrap();
        let z = ProjectivePoint::basis(2, 0);
        assert_eq!(mu_exact(&f, &z), f64::INFINITY);
        assert!(matches!(newton_step(&f, &z), Err(Error::SingularJacobian)));
        assert!(!certify_root(&f, &z, 4).passed);
    }

    #[test]
    fn certify_exact_root() {
        let f = sqrt2_x0x1();
        let cert = certify_root(&f, &ProjectivePoint::basis(2, 1), 4);
        assert!(cert.passed);
        assert!(cert.proj_distance < 1e-15);
    }

    #[test]
    fn certify_rejects_non_contracting_start() {
        let p = DegreeProfile::new(&[2]).unwrap();
        let f = PolySystem::from_terms(p, &[(0, &[0, 2], c(1.0, 0.0)), (0, &[2, 0], c(-1.0, 0.0))]).unwrap();
        let z = ProjectivePoint::new(vec![c(1.0, 0.0), c(0.0, 0.99)]).unwrap();
        assert!(!certify_root(&f, &z, 5).passed);
    }
}
