#![allow(dead_code)]

use certroot::{sample_system, sample_unit, seeded_rng, DegreeProfile, PolySystem, ProjectivePoint, SeededRng, SpherePoint};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rng(seed: u64) -> SeededRng {
    seeded_rng(seed)
}

pub fn profile(degrees: &[u32]) -> DegreeProfile {
    DegreeProfile::new(degrees).unwrap()
}

pub fn system(p: &DegreeProfile, rng: &mut SeededRng) -> SpherePoint {
    sample_system(p, rng)
}

pub fn gaussian_vec(len: usize, rng: &mut SeededRng) -> Vec<Complex64> {
    (0..len)
        .map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect()
}

pub fn point(nvars: usize, rng: &mut SeededRng) -> ProjectivePoint {
    let v = sample_unit(2 * nvars, rng).0;
    ProjectivePoint::new(v.chunks(2).map(|p| c(p[0], p[1])).collect()).unwrap()
}

/// Haar-distributed unitary from the QR factorization of a Gaussian matrix.
pub fn unitary(m: usize, rng: &mut SeededRng) -> DMatrix<Complex64> {
    let a = DMatrix::from_vec(m, m, gaussian_vec(m * m, rng));
    let qr = a.qr();
    let (q, r) = (qr.q(), qr.r());
    let mut q = q;
    for j in 0..m {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c(1.0, 0.0) };
        for i in 0..m {
            q[(i, j)] *= phase;
        }
    }
    q
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

pub const PROFILES: &[&[u32]] = &[&[1], &[2], &[3], &[1, 1], &[2, 2], &[3, 2], &[2, 2, 2], &[4, 1]];

/// Subtracts `f_i(zeta) <x, zeta>^{d_i}` from each equation so that `zeta`
/// becomes an exact root.
pub fn with_root(f: &PolySystem, zeta: &ProjectivePoint) -> PolySystem {
    let p = f.profile().clone();
    let m = p.nvars();
    let fz = f.evaluate(zeta.rep());
    let mut lead = vec![0u32; m];
    let terms: Vec<(usize, Vec<u32>, Complex64)> = p
        .degrees()
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            lead[0] = d;
            (i, lead.clone(), fz[i])
        })
        .collect();
    let refs: Vec<(usize, &[u32], Complex64)> = terms.iter().map(|(i, a, v)| (*i, a.as_slice(), *v)).collect();
    let h = PolySystem::from_terms(p, &refs).unwrap();
    let mut row = DMatrix::zeros(m, m);
    for j in 0..m {
        row[(0, j)] = zeta.rep()[j].conj();
    }
    f.combine(1.0, &h.compose_linear(&row), -1.0).unwrap()
}

/// A unit system at projective distance `r` from the unit system `f`.
pub fn perturb_system(f: &PolySystem, r: f64, rng: &mut SeededRng) -> PolySystem {
    let w = PolySystem::new(f.profile().clone(), gaussian_vec(f.profile().dim(), rng)).unwrap();
    let proj = w.weyl_inner(f).unwrap();
    let w = w.add(&f.scale(-proj)).unwrap().normalized().unwrap();
    f.scale(c(r.cos(), 0.0)).add(&w.scale(c(r.sin(), 0.0))).unwrap()
}

/// A point at projective distance `r` from `x`.
pub fn perturb_point(x: &ProjectivePoint, r: f64, rng: &mut SeededRng) -> ProjectivePoint {
    let mut w = gaussian_vec(x.dim(), rng);
    let proj: Complex64 = w.iter().zip(x.rep()).map(|(a, b)| a * b.conj()).sum();
    w.iter_mut().zip(x.rep()).for_each(|(a, b)| *a -= proj * b);
    let nw = w.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    let y = x.rep().iter().zip(&w).map(|(a, b)| a * r.cos() + b * (r.sin() / nw)).collect();
    ProjectivePoint::new(y).unwrap()
}

/// A BP starting pair from a fresh uniform sample, with `g` negated if needed
/// so that `Re <f, g> >= 0`.
pub fn start_pair(f: &SpherePoint, rng: &mut SeededRng) -> (SpherePoint, ProjectivePoint) {
    let u = sample_system(f.system().profile(), rng);
    let pair = certroot::bp(&u).unwrap();
    let g = if f.system().weyl_inner(pair.g.system()).unwrap().re < 0.0 {
        pair.g.neg()
    } else {
        pair.g
    };
    (g, pair.zeta)
}
