//! Uniform sampling on the sphere of systems, the truncation / fractional
//! part pair that splits one sphere point into two, and the construction of a
//! random system together with one of its roots.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::zero;
use crate::projective::{standard_unitary, ProjectivePoint, SpherePoint};
use crate::systems::{forms, DegreeProfile, PolySystem, RealCoords};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum TrigMode {
    /// Library `sin`/`cos`.
    #[default]
    #[serde(rename = "hw")]
    Hardware,
    /// Normalized truncated Taylor polynomial, see [`trig_poly`].
    #[serde(rename = "bss")]
    Bss,
}

/// A point of the boundary of the cube `[-1, 1]^{2N}` written as a face and
/// coordinates on it.
#[derive(Debug, Clone, PartialEq)]
pub struct FaceCoords {
    /// 1-based position of the coordinate fixed to `sign`.
    pub face_index: usize,
    pub sign: f64,
    /// The remaining `2N - 1` coordinates, each in `[-1, 1)`.
    pub coords: Vec<f64>,
}

/// `(floor(Q x) / Q, (x - a) Q)` with the second entry in `[0, 1)`.
/// Values of `Q x` within a few ulps below an integer smaller than `Q` count
/// as that integer, so lattice points survive a renormalization round trip.
pub fn floor_frac_unit(x: f64, q: f64) -> (f64, f64) {
    let qx = q * x;
    let r = qx.round();
    if r > qx && r < q && r - qx <= LATTICE_SNAP * r.abs().max(1.0) {
        return (r / q, 0.0);
    }
    let k = qx.floor();
    (k / q, qx - k)
}

const LATTICE_SNAP: f64 = 8.0 * f64::EPSILON;

/// Scales `u` to sup-norm one and splits off the face it lands on.
pub fn face_decompose(u: &[f64]) -> Result<FaceCoords> {
    let mut face = 0;
    let mut max = 0.0f64;
    // ties go to a positive entry, then to the smallest index
    for (i, &x) in u.iter().enumerate() {
        if x.abs() > max || (x.abs() == max && x > 0.0 && u[face] < 0.0) {
            max = x.abs();
            face = i;
        }
    }
    if !(max > 0.0) || !max.is_finite() {
        return Err(Error::ZeroVector);
    }
    let below_one = 1.0f64.next_down();
    let coords = u
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != face)
        .map(|(_, &x)| {
            let y = x / max;
            if y >= 1.0 {
                below_one
            } else {
                y
            }
        })
        .collect();
    Ok(FaceCoords {
        face_index: face + 1,
        sign: u[face].signum(),
        coords,
    })
}

/// Inverse of [`face_decompose`] up to the sup-norm scaling: a point with
/// `|x|_inf = 1`.
pub fn face_recompose(fc: &FaceCoords) -> Vec<f64> {
    let mut out = Vec::with_capacity(fc.coords.len() + 1);
    out.extend_from_slice(&fc.coords[..fc.face_index - 1]);
    out.push(fc.sign);
    out.extend_from_slice(&fc.coords[fc.face_index - 1..]);
    out
}

fn normalize2(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
}

/// Truncation of a unit vector at precision `q`, together with the
/// fractional parts in `[0, 1)^{2N-1}`.
pub fn floor_and_frac_parts(u: &RealCoords, q: f64) -> Result<(RealCoords, Vec<f64>)> {
    let fc = face_decompose(&u.0)?;
    let mut a = Vec::with_capacity(fc.coords.len());
    let mut b = Vec::with_capacity(fc.coords.len());
    for &x in &fc.coords {
        let (ai, bi) = floor_frac_unit(x, q);
        a.push(ai);
        b.push(bi);
    }
    let mut floor = face_recompose(&FaceCoords { coords: a, ..fc });
    normalize2(&mut floor);
    Ok((RealCoords(floor), b))
}

/// `floor(u)_Q`.
pub fn sphere_floor(u: &RealCoords, q: f64) -> Result<RealCoords> {
    Ok(floor_and_frac_parts(u, q)?.0)
}

/// `{u}_Q`.
pub fn sphere_frac(u: &RealCoords, q: f64, trig: TrigMode) -> Result<RealCoords> {
    let (_, b) = floor_and_frac_parts(u, q)?;
    Ok(sibuya(&b, trig))
}

/// Maps `2N - 1` numbers in `[0, 1)` to the unit sphere of `R^{2N}`: the first
/// `N` give angles, the last `N - 1` sorted give the squared radii as spacings.
pub fn sibuya(x: &[f64], trig: TrigMode) -> RealCoords {
    let n = x.len().div_ceil(2);
    assert_eq!(x.len(), 2 * n - 1, "sibuya needs an odd number of inputs");
    let mut y: Vec<f64> = x[n..].to_vec();
    y.sort_by(|a, b| a.total_cmp(b));
    let mut out = Vec::with_capacity(2 * n);
    let mut prev = 0.0;
    for i in 0..n {
        let next = if i + 1 < n { y[i] } else { 1.0 };
        let r = (next - prev).sqrt();
        prev = next;
        let (c, s) = match trig {
            TrigMode::Hardware => {
                let (s, c) = (2.0 * PI * x[i]).sin_cos();
                (c, s)
            }
            TrigMode::Bss => trig_poly(x[i], bss_trig_order(n)),
        };
        out.push(r * c);
        out.push(r * s);
    }
    RealCoords(out)
}

/// Taylor order used by [`TrigMode::Bss`] for a space of complex dimension `n`.
pub fn bss_trig_order(n: usize) -> usize {
    (n as f64).ln().ceil() as usize + 20
}

/// Taylor coefficients `u_0..=u_q` at 0 of `(exp(2 i pi x) - 1) / (x - 1)`.
pub fn trig_coefficients(q: usize) -> Vec<Complex64> {
    let c = Complex64::new(0.0, 2.0 * PI);
    let mut u = vec![zero(); q.max(1) + 1];
    u[1] = -c;
    for m in 0..q.saturating_sub(1) {
        let k = m as f64;
        u[m + 2] = ((c + k + 2.0) * u[m + 1] - c * u[m]) / (k + 2.0);
    }
    u.truncate(q + 1);
    u
}

/// `(Cos_Q(x), Sin_Q(x))`: the normalized value of `1 + (x - 1) F_Q(x)`
/// where `F_Q` is the degree-`q` Taylor polynomial of
/// `(exp(2 i pi x) - 1) / (x - 1)`.
pub fn trig_poly(x: f64, q: usize) -> (f64, f64) {
    let coeffs = trig_coefficients(q);
    let f = coeffs.iter().rev().fold(zero(), |acc, &c| acc * x + c);
    let w = Complex64::new(1.0, 0.0) + f * (x - 1.0);
    let r = w.norm();
    (w.re / r, w.im / r)
}

/// Generator used wherever a seed is part of the interface.
pub type SeededRng = rand_chacha::ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Independent per-trial seed derived from a master seed (SplitMix64 step).
pub fn split_seed(master: u64, trial: u64) -> u64 {
    let mut z = master.wrapping_add(trial.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform point on the unit sphere of `R^dim`.
pub fn sample_unit<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> RealCoords {
    loop {
        let mut v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 {
            v.iter_mut().for_each(|x| *x /= norm);
            return RealCoords(v);
        }
    }
}

/// Uniform system on the Weyl unit sphere.
pub fn sample_system<R: Rng + ?Sized>(profile: &DegreeProfile, rng: &mut R) -> SpherePoint {
    let v = sample_unit(2 * profile.dim(), rng);
    let f = PolySystem::from_real_coords(&v, profile).expect("length matches profile");
    SpherePoint::normalize(&f).expect("nonzero sample")
}

/// Splits `f_i = c_i x_0^{d_i} + sqrt(d_i) x_0^{d_i - 1} sum_j a_ij x_j + f'_i`.
pub fn bp_split(f: &SpherePoint) -> (Vec<Complex64>, DMatrix<Complex64>, PolySystem) {
    let f = f.system();
    let profile = f.profile();
    let n = profile.n();
    let mut fprime = f.clone();
    let mut c = vec![zero(); n];
    let mut a = DMatrix::from_element(n, n, zero());
    let mut exps = vec![0u32; n + 1];
    for (i, &d) in profile.degrees().iter().enumerate() {
        exps.iter_mut().for_each(|e| *e = 0);
        exps[0] = d;
        let pos = profile.monomial_position(i, &exps).expect("pure power exists");
        c[i] = f.coeffs()[pos];
        fprime.coeffs_mut()[pos] = zero();
        let sd = (d as f64).sqrt();
        for j in 1..=n {
            exps.iter_mut().for_each(|e| *e = 0);
            exps[0] = d - 1;
            exps[j] += 1;
            let pos = profile.monomial_position(i, &exps).expect("monomial exists");
            a[(i, j - 1)] = f.coeffs()[pos] / sd;
            fprime.coeffs_mut()[pos] = zero();
        }
    }
    (c, a, fprime)
}

/// `[a | c]`: column `j` multiplies `x_j`, with `c` in the last column.
pub fn assemble_m(c: &[Complex64], a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = c.len();
    DMatrix::from_fn(n, n + 1, |i, j| if j < n { a[(i, j)] } else { c[i] })
}

/// Relative gap required between the two smallest singular values.
pub const KERNEL_GAP: f64 = 1e-10;

/// Unit generator of the one-dimensional kernel of an `n x (n+1)` matrix,
/// with its first non-negligible coordinate real positive.
pub fn kernel_vector(m: &DMatrix<Complex64>) -> Result<Vec<Complex64>> {
    let (n, cols) = m.shape();
    assert_eq!(cols, n + 1, "kernel_vector expects an n x (n+1) matrix");
    let mut square = DMatrix::from_element(cols, cols, zero());
    square.rows_mut(0, n).copy_from(m);
    let svd = square.svd(false, true);
    let sv = &svd.singular_values;
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    if !(smax > 0.0) {
        return Err(Error::DegenerateKernel);
    }
    let kmin = (0..cols).min_by(|&a, &b| sv[a].total_cmp(&sv[b])).unwrap();
    let second = (0..cols)
        .filter(|&k| k != kmin)
        .map(|k| sv[k])
        .fold(f64::INFINITY, f64::min);
    if !(second > KERNEL_GAP * smax) {
        return Err(Error::DegenerateKernel);
    }
    let v_t = svd.v_t.as_ref().expect("requested V^*");
    let mut v: Vec<Complex64> = v_t.row(kmin).iter().map(|c| c.conj()).collect();
    let norm = crate::linalg::vec_norm(&v);
    v.iter_mut().for_each(|c| *c /= norm);
    let vmax = v.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let lead = v.iter().find(|c| c.norm() > 1e-12 * vmax).copied().unwrap();
    let phase = lead.conj() / lead.norm();
    v.iter_mut().for_each(|c| *c *= phase);
    let k = v.iter().position(|c| c.norm() > 1e-12 * vmax).unwrap();
    v[k] = Complex64::new(v[k].norm(), 0.0);
    Ok(v)
}

/// `Psi_i = sqrt(d_i) <x, zeta'>^{d_i - 1} sum_j m_ij x_j`.
pub fn psi_expand(profile: &DegreeProfile, m: &DMatrix<Complex64>, zetap: &[Complex64]) -> PolySystem {
    let pairing: Vec<Complex64> = zetap.iter().map(|c| c.conj()).collect();
    let mut coeffs = Vec::with_capacity(profile.dim());
    for (i, &d) in profile.degrees().iter().enumerate() {
        let row: Vec<Complex64> = m.row(i).iter().cloned().collect();
        let power = forms::linear_power(profile, &pairing, d - 1);
        let mut eq = forms::mul(profile, &power, d - 1, &row, 1);
        let sd = (d as f64).sqrt();
        eq.iter_mut().for_each(|c| *c *= sd);
        coeffs.extend(eq);
    }
    PolySystem::new(profile.clone(), coeffs).expect("sizes match profile")
}

/// A system on the unit sphere together with one of its roots.
#[derive(Debug, Clone, PartialEq)]
pub struct BpPair {
    pub g: SpherePoint,
    pub zeta: ProjectivePoint,
}

/// All intermediate values of [`bp`].
#[derive(Debug, Clone)]
pub struct BpParts {
    pub c: Vec<Complex64>,
    pub a: DMatrix<Complex64>,
    pub fprime: PolySystem,
    pub m: DMatrix<Complex64>,
    pub zeta_prime: Vec<Complex64>,
    pub psi: PolySystem,
    pub pair: BpPair,
}

pub fn bp_parts(u: &SpherePoint) -> Result<BpParts> {
    let profile = u.system().profile().clone();
    let (c, a, fprime) = bp_split(u);
    let m = assemble_m(&c, &a);
    let zeta_prime = kernel_vector(&m)?;
    let zeta = ProjectivePoint::new(zeta_prime.clone())?;
    let unitary = standard_unitary(&zeta);
    let psi = psi_expand(&profile, &m, &zeta_prime);
    let g = fprime.compose_linear(&unitary.inverse().0).add(&psi)?;
    Ok(BpParts {
        c,
        a,
        fprime,
        m,
        zeta_prime,
        psi,
        pair: BpPair {
            g: SpherePoint::from_unit_unchecked(g),
            zeta,
        },
    })
}

/// Builds a starting pair `(g, zeta)` with `g(zeta) = 0` from a sphere point.
pub fn bp(u: &SpherePoint) -> Result<BpPair> {
    Ok(bp_parts(u)?.pair)
}
