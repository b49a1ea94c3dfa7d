//! Adaptive-step homotopy continuation along great circles of the unit
//! sphere of systems, its precision-checked variant, and a fine-grained path
//! tracker used to measure the condition number along a path.

use serde::{Deserialize, Serialize};

use crate::conditioning::{mu_exact, mu_with, newton_step, MuMode};
use crate::error::{Error, Result};
use crate::linalg::vec_norm;
use crate::projective::{Geodesic, GeodesicMode, ProjectivePoint, SpherePoint};

/// Step-size and threshold constants.
pub struct StepConstants;

impl StepConstants {
    pub const EPS: f64 = 1.0 / 13.0;
    pub const A: f64 = 1.0 / 52.0;
    pub const B: f64 = 1.0 / 101.0;
    pub const B_PRIME: f64 = 1.0 / 65.0;
    pub const FAIL_THRESHOLD: f64 = 1.0 / 151.0;
    pub const CERT_A_CHECK: f64 = 52.0;
    pub const STEP_DENOMINATOR: f64 = 101.0;
}

/// Paths shorter than this are treated as constant.
pub const DEGENERATE_PATH: f64 = 1e-12;
pub const DEFAULT_MAX_STEPS: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub t: f64,
    pub mu: f64,
}

/// Record of one continuation run. `initial_mu` is `mu(g, z)` at the start;
/// each entry of `steps` is the value of `t` at which a Newton step was taken
/// and the `mu` computed right after it.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PathTrace {
    pub d_s: f64,
    pub initial_mu: f64,
    pub steps: Vec<TraceStep>,
}

impl PathTrace {
    /// Number of Newton steps.
    pub fn k(&self) -> usize {
        self.steps.len()
    }

    /// Largest recorded `mu`, including the initial one.
    pub fn max_mu(&self) -> f64 {
        self.steps.iter().map(|s| s.mu).fold(self.initial_mu, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HcStatus {
    Success,
    Fail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HcFailure {
    /// `D^{3/2} mu^2 rho` exceeded the threshold.
    PrecisionCheck,
    SingularJacobian,
    MaxSteps,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HcOutcome {
    pub status: HcStatus,
    pub point: Option<ProjectivePoint>,
    pub failure: Option<HcFailure>,
    pub trace: PathTrace,
}

impl HcOutcome {
    pub fn is_success(&self) -> bool {
        self.status == HcStatus::Success
    }

    fn success(z: ProjectivePoint, trace: PathTrace) -> Self {
        Self {
            status: HcStatus::Success,
            point: Some(z),
            failure: None,
            trace,
        }
    }

    fn fail(reason: HcFailure, trace: PathTrace) -> Self {
        Self {
            status: HcStatus::Fail,
            point: None,
            failure: Some(reason),
            trace,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HcOptions {
    pub max_steps: usize,
    pub geodesic_mode: GeodesicMode,
    pub mu_mode: MuMode,
}

impl Default for HcOptions {
    fn default() -> Self {
        Self {
            max_steps: DEFAULT_MAX_STEPS,
            geodesic_mode: GeodesicMode::Exact,
            mu_mode: MuMode::Exact,
        }
    }
}

impl HcOptions {
    pub fn with_max_steps(max_steps: usize) -> Self {
        Self {
            max_steps,
            ..Self::default()
        }
    }
}

/// Continuation from `(g, z)` to `f`.
pub fn hc(f: &SpherePoint, g: &SpherePoint, z: &ProjectivePoint, opts: &HcOptions) -> Result<HcOutcome> {
    track(f, g, z, None, opts)
}

/// Continuation from `(g, z)` to `fprime` that fails as soon as
/// `D^{3/2} mu(h, z)^2 rho > 1/151`.
pub fn hc_checked(
    fprime: &SpherePoint,
    g: &SpherePoint,
    z: &ProjectivePoint,
    rho: f64,
    opts: &HcOptions,
) -> Result<HcOutcome> {
    track(fprime, g, z, Some(rho), opts)
}

fn track(
    f: &SpherePoint,
    g: &SpherePoint,
    z: &ProjectivePoint,
    rho: Option<f64>,
    opts: &HcOptions,
) -> Result<HcOutcome> {
    if f.system().profile() != g.system().profile() {
        return Err(Error::ProfileMismatch);
    }
    let path = Geodesic::new(g, f, opts.geodesic_mode)?;
    let d32 = f.system().profile().d32();
    let d_s = path.angle();
    let passes = |mu: f64| match rho {
        Some(rho) => d32 * mu * mu * rho <= StepConstants::FAIL_THRESHOLD,
        None => true,
    };
    let mu0 = mu_with(g.system(), z, opts.mu_mode);
    let mut trace = PathTrace {
        d_s,
        initial_mu: mu0,
        steps: Vec::new(),
    };
    if !passes(mu0) {
        return Ok(HcOutcome::fail(HcFailure::PrecisionCheck, trace));
    }
    if d_s <= DEGENERATE_PATH {
        return Ok(HcOutcome::success(z.clone(), trace));
    }
    if !mu0.is_finite() {
        return Ok(HcOutcome::fail(HcFailure::SingularJacobian, trace));
    }
    let increment = |mu: f64| 1.0 / (StepConstants::STEP_DENOMINATOR * d32 * mu * mu * d_s);
    let mut t = increment(mu0);
    let mut z = z.clone();
    while 1.0 > t {
        if trace.steps.len() >= opts.max_steps {
            return Ok(HcOutcome::fail(HcFailure::MaxSteps, trace));
        }
        let h = path.at(t);
        z = match newton_step(h.system(), &z) {
            Ok(next) => next,
            Err(_) => return Ok(HcOutcome::fail(HcFailure::SingularJacobian, trace)),
        };
        let mu = mu_with(h.system(), &z, opts.mu_mode);
        trace.steps.push(TraceStep { t, mu });
        if !passes(mu) {
            return Ok(HcOutcome::fail(HcFailure::PrecisionCheck, trace));
        }
        if !mu.is_finite() {
            return Ok(HcOutcome::fail(HcFailure::SingularJacobian, trace));
        }
        t += increment(mu);
    }
    Ok(HcOutcome::success(z, trace))
}

/// Residual above which a tracked point counts as lost.
pub const ORACLE_RESIDUAL: f64 = 1e-8;
/// Residual accepted for the starting root of the oracle.
pub const ORACLE_START_RESIDUAL: f64 = 1e-10;
pub const ORACLE_CORRECTIONS: usize = 3;
pub const DEFAULT_ORACLE_RESOLUTION: usize = 10_000;
/// Sub-steps are at most this fraction of the continuation step at the current `mu`.
const ORACLE_STEP_FRACTION: f64 = 0.25;
/// Largest accepted change factor of `mu` between consecutive samples.
const ORACLE_MU_JUMP: f64 = 1.05;
const ORACLE_MIN_STEP: f64 = 1e-13;

/// Estimates of `M` and `I_p` along a path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleEstimate {
    /// Largest sampled `mu`; `+inf` when the track was lost.
    pub m_hat: f64,
    /// `(p, I_p)` trapezoid estimates.
    pub integrals: Vec<(f64, f64)>,
    pub samples: usize,
    pub lost: bool,
}

impl OracleEstimate {
    pub fn integral(&self, p: f64) -> Option<f64> {
        self.integrals.iter().find(|(q, _)| *q == p).map(|(_, v)| *v)
    }
}

/// Follows the root `eta` of `g` along the path from `g` to `f` and integrates
/// `mu^p`. The interval is split into `resolution` uniform cells; each cell is
/// further subdivided so that consecutive samples are a small fraction of a
/// continuation step apart and `mu` changes by at most a few percent. Every
/// sample is corrected by three Newton steps at fixed `t`.
pub fn path_oracle(
    f: &SpherePoint,
    g: &SpherePoint,
    eta: &ProjectivePoint,
    pvals: &[f64],
    resolution: usize,
    mode: GeodesicMode,
) -> Result<OracleEstimate> {
    let residual0 = vec_norm(&g.system().evaluate(eta.rep()));
    if !(residual0 <= ORACLE_START_RESIDUAL) {
        return Err(Error::NotARoot { residual: residual0 });
    }
    let path = Geodesic::new(g, f, mode)?;
    let d32 = f.system().profile().d32();
    let d_s = path.angle();
    let resolution = resolution.max(1);

    let mut z = eta.clone();
    let mut mu = mu_exact(g.system(), &z);
    let mut m_hat = mu;
    let mut sums = vec![0.0; pvals.len()];
    let mut samples = 1usize;
    let lost = |samples: usize, pvals: &[f64], sums: &[f64]| OracleEstimate {
        m_hat: f64::INFINITY,
        integrals: pvals.iter().cloned().zip(sums.iter().cloned()).collect(),
        samples,
        lost: true,
    };
    if !mu.is_finite() {
        return Ok(lost(samples, pvals, &sums));
    }

    let mut t = 0.0f64;
    for j in 1..=resolution {
        let cell_end = j as f64 / resolution as f64;
        while t < cell_end {
            let mut dt = if d_s > 0.0 {
                ORACLE_STEP_FRACTION * StepConstants::B / (d32 * mu * mu * d_s)
            } else {
                f64::INFINITY
            };
            let (t_next, z_next, mu_next) = loop {
                let t_next = if t + dt >= cell_end { cell_end } else { t + dt };
                let step = t_next - t;
                let h = path.at(t_next);
                let attempt = correct(h.system(), &z).and_then(|zn| {
                    let m = mu_exact(h.system(), &zn);
                    m.is_finite().then_some((zn, m))
                });
                match attempt {
                    Some((zn, m)) if (m <= mu * ORACLE_MU_JUMP && m * ORACLE_MU_JUMP >= mu) || step <= ORACLE_MIN_STEP => {
                        break (t_next, zn, m)
                    }
                    _ if step > ORACLE_MIN_STEP => dt = step / 2.0,
                    _ => return Ok(lost(samples, pvals, &sums)),
                }
            };
            let width = t_next - t;
            for (s, &p) in sums.iter_mut().zip(pvals) {
                *s += 0.5 * width * (mu.powf(p) + mu_next.powf(p));
            }
            t = t_next;
            z = z_next;
            mu = mu_next;
            m_hat = m_hat.max(mu);
            samples += 1;
        }
    }
    Ok(OracleEstimate {
        m_hat,
        integrals: pvals.iter().cloned().zip(sums).collect(),
        samples,
        lost: false,
    })
}

fn correct(h: &crate::systems::PolySystem, z: &ProjectivePoint) -> Option<ProjectivePoint> {
    let mut z = z.clone();
    for _ in 0..ORACLE_CORRECTIONS {
        z = newton_step(h, &z).ok()?;
    }
    let residual = vec_norm(&h.evaluate(z.rep()));
    (residual <= ORACLE_RESIDUAL).then_some(z)
}
