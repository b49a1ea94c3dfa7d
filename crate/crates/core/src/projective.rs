//! Points of the unit sphere of systems, points of projective space, and the
//! paths and unitaries connecting them.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_dot, vec_norm};
use crate::systems::PolySystem;

pub const SPHERE_TOL: f64 = 1e-12;
/// Angles this close to `pi` are treated as antipodal.
pub const ANTIPODAL_TOL: f64 = 1e-9;
/// Endpoints closer than this give a constant path.
pub const DEGENERATE_ANGLE: f64 = 1e-9;

/// A system of unit Weyl norm.
#[derive(Debug, Clone, PartialEq)]
pub struct SpherePoint(PolySystem);

impl SpherePoint {
    /// Wraps a system that is already normalized.
    pub fn new(system: PolySystem) -> Result<Self> {
        let norm = system.weyl_norm();
        if (norm - 1.0).abs() > SPHERE_TOL {
            return Err(Error::InvalidProfile(format!(
                "system has Weyl norm {norm}, expected 1"
            )));
        }
        Ok(Self(system))
    }

    pub fn normalize(system: &PolySystem) -> Result<Self> {
        Ok(Self(system.normalized()?))
    }

    pub(crate) fn from_unit_unchecked(system: PolySystem) -> Self {
        Self(system)
    }

    pub fn system(&self) -> &PolySystem {
        &self.0
    }

    pub fn into_system(self) -> PolySystem {
        self.0
    }

    pub fn neg(&self) -> Self {
        Self(self.0.scale(Complex64::new(-1.0, 0.0)))
    }
}

/// A point of `P^n` represented by a unit vector of `C^{n+1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectivePoint {
    rep: Vec<Complex64>,
}

impl ProjectivePoint {
    /// Normalizes any nonzero vector.
    pub fn new(v: Vec<Complex64>) -> Result<Self> {
        let norm = vec_norm(&v);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(Self {
            rep: v.into_iter().map(|c| c / norm).collect(),
        })
    }

    pub fn from_real(re: &[f64]) -> Result<Self> {
        Self::new(re.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn rep(&self) -> &[Complex64] {
        &self.rep
    }

    pub fn dim(&self) -> usize {
        self.rep.len()
    }

    /// `e_k` in `C^{n+1}`.
    pub fn basis(nvars: usize, k: usize) -> Self {
        let mut rep = vec![Complex64::new(0.0, 0.0); nvars];
        rep[k] = Complex64::new(1.0, 0.0);
        Self { rep }
    }

    pub fn scale_phase(&self, lambda: Complex64) -> Result<Self> {
        Self::new(self.rep.iter().map(|c| c * lambda).collect())
    }
}

/// Angle between two unit systems, `arccos Re <f, g>` evaluated as
/// `2 atan2(|f - g|, |f + g|)` to stay accurate near 0 and pi.
pub fn dist_sphere(f: &SpherePoint, g: &SpherePoint) -> Result<f64> {
    let diff = f.system().combine(1.0, g.system(), -1.0)?.weyl_norm();
    let sum = f.system().combine(1.0, g.system(), 1.0)?.weyl_norm();
    Ok(2.0 * diff.atan2(sum))
}

/// Projective distance between two systems of any nonzero norm.
pub fn dist_proj_systems(f: &PolySystem, g: &PolySystem) -> Result<f64> {
    let inner = f.weyl_inner(g)?;
    let cos = inner.norm() / (f.weyl_norm() * g.weyl_norm());
    Ok(cos.clamp(0.0, 1.0).acos())
}

/// Fubini-Study distance on `P^n`: `arccos |<x, y>|`, computed from the
/// component of `y` orthogonal to `x` so that tiny angles keep full precision.
pub fn dist_proj(x: &ProjectivePoint, y: &ProjectivePoint) -> f64 {
    let (x, y) = (x.rep(), y.rep());
    let c = hermitian_dot(y, x);
    let perp: f64 = x
        .iter()
        .zip(y)
        .map(|(xi, yi)| (yi - c * xi).norm_sqr())
        .sum::<f64>()
        .sqrt();
    perp.atan2(c.norm())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeodesicMode {
    /// Great-circle interpolation.
    #[default]
    Exact,
    /// Normalized straight segment `(t f + (1 - t) g) / |...|`.
    Chord,
}

/// The path `t -> Gamma(g, f, t)` from `g` (at `t = 0`) to `f` (at `t = 1`).
#[derive(Debug, Clone)]
pub struct Geodesic {
    start: SpherePoint,
    end: SpherePoint,
    angle: f64,
    mode: GeodesicMode,
}

impl Geodesic {
    pub fn new(g: &SpherePoint, f: &SpherePoint, mode: GeodesicMode) -> Result<Self> {
        let angle = dist_sphere(f, g)?;
        if angle >= PI - ANTIPODAL_TOL {
            return Err(Error::AntipodalEndpoints);
        }
        Ok(Self {
            start: g.clone(),
            end: f.clone(),
            angle,
            mode,
        })
    }

    /// `d_S(f, g)`.
    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn start(&self) -> &SpherePoint {
        &self.start
    }

    pub fn end(&self) -> &SpherePoint {
        &self.end
    }

    pub fn at(&self, t: f64) -> SpherePoint {
        if self.angle <= DEGENERATE_ANGLE || t == 0.0 {
            return self.start.clone();
        }
        if t == 1.0 {
            return self.end.clone();
        }
        let (g, f) = (self.start.system(), self.end.system());
        match self.mode {
            GeodesicMode::Exact => {
                let s = self.angle.sin();
                let a = ((1.0 - t) * self.angle).sin() / s;
                let b = (t * self.angle).sin() / s;
                SpherePoint(g.combine(a, f, b).expect("same profile"))
            }
            GeodesicMode::Chord => {
                let h = g.combine(1.0 - t, f, t).expect("same profile");
                SpherePoint(h.normalized().expect("non-antipodal chord is nonzero"))
            }
        }
    }
}

/// `Gamma(g, f, t)`.
pub fn geodesic(g: &SpherePoint, f: &SpherePoint, t: f64, mode: GeodesicMode) -> Result<SpherePoint> {
    Ok(Geodesic::new(g, f, mode)?.at(t))
}

/// A unitary matrix of size `(n+1) x (n+1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Unitary(pub DMatrix<Complex64>);

impl Unitary {
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn inverse(&self) -> Unitary {
        Unitary(self.0.adjoint())
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let m = &self.0;
        (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| m[(i, j)] * v[j]).sum())
            .collect()
    }
}

/// The determinant-one unitary sending `e_0` to `zeta` and fixing the
/// orthogonal complement of `span{e_0, zeta}`.
pub fn standard_unitary(zeta: &ProjectivePoint) -> Unitary {
    let m = zeta.dim();
    let rep = zeta.rep();
    let alpha = rep[0];
    let mut u = DMatrix::<Complex64>::identity(m, m);
    if alpha.norm() >= 1.0 - 1e-12 {
        return Unitary(u);
    }
    let mut w: Vec<Complex64> = rep.to_vec();
    w[0] = Complex64::new(0.0, 0.0);
    let beta = vec_norm(&w);
    w.iter_mut().for_each(|c| *c /= beta);
    // In the basis (e_0, w) the block is [[alpha, -beta], [beta, conj(alpha)]]
    // (beta is real), embedded as I + (alpha-1) e0 e0* + beta w e0* - beta e0 w*
    // + (conj(alpha)-1) w w*.
    let one = Complex64::new(1.0, 0.0);
    u[(0, 0)] += alpha - one;
    for i in 0..m {
        u[(i, 0)] += w[i] * beta;
        u[(0, i)] -= w[i].conj() * beta;
        for j in 0..m {
            u[(i, j)] += (alpha.conj() - one) * w[i] * w[j].conj();
        }
    }
    Unitary(u)
}
