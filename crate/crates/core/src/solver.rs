//! The deterministic solver, which draws its starting pair from the digits of
//! the input itself, and the randomized baseline.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::conditioning::{certify_root, Certificate, MuMode, DEFAULT_CERT_ITERS};
use crate::error::{Error, Result};
use crate::homotopy::{hc, hc_checked, HcFailure, HcOptions, HcOutcome, HcStatus, DEFAULT_MAX_STEPS};
use crate::projective::{GeodesicMode, ProjectivePoint, SpherePoint};
use crate::randomization::{bp, floor_and_frac_parts, sample_unit, seeded_rng, sibuya, BpPair, TrigMode};
use crate::systems::{PolySystem, RealCoords};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntropyFallback {
    /// Report [`Error::EntropyExhausted`].
    Fail,
    /// Replace the vanished fractional parts by a hash of the input.
    #[default]
    Hash,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub max_rounds: usize,
    pub max_steps: usize,
    pub geodesic_mode: GeodesicMode,
    pub trig_mode: TrigMode,
    pub mu_mode: MuMode,
    pub entropy_fallback: EntropyFallback,
    /// Seed of the randomized solver; ignored by [`dbp`].
    pub rng_seed: u64,
    pub cert_iters: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_rounds: 8,
            max_steps: DEFAULT_MAX_STEPS,
            geodesic_mode: GeodesicMode::Exact,
            trig_mode: TrigMode::Hardware,
            mu_mode: MuMode::Exact,
            entropy_fallback: EntropyFallback::Hash,
            rng_seed: 0,
            cert_iters: DEFAULT_CERT_ITERS,
        }
    }
}

impl SolverConfig {
    fn hc_options(&self) -> HcOptions {
        HcOptions {
            max_steps: self.max_steps,
            geodesic_mode: self.geodesic_mode,
            mu_mode: self.mu_mode,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoundFailure {
    PrecisionCheck,
    SingularJacobian,
    MaxSteps,
    DegenerateKernel,
}

impl From<HcFailure> for RoundFailure {
    fn from(f: HcFailure) -> Self {
        match f {
            HcFailure::PrecisionCheck => Self::PrecisionCheck,
            HcFailure::SingularJacobian => Self::SingularJacobian,
            HcFailure::MaxSteps => Self::MaxSteps,
        }
    }
}

/// Summary of one precision round (one continuation run).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundSummary {
    pub precision: f64,
    pub rho: f64,
    pub status: HcStatus,
    pub failure: Option<RoundFailure>,
    #[serde(rename = "K")]
    pub k: usize,
    /// `mu(g, eta)` of the starting pair.
    pub mu_start: f64,
    /// Largest `mu` seen along the run.
    pub max_mu: f64,
    /// `d_S` between the start and target systems.
    pub d_s: f64,
    /// Sign applied to the starting system.
    pub sign: i8,
}

impl RoundSummary {
    fn from_outcome(precision: f64, rho: f64, sign: i8, out: &HcOutcome) -> Self {
        Self {
            precision,
            rho,
            status: out.status,
            failure: out.failure.map(RoundFailure::from),
            k: out.trace.k(),
            mu_start: out.trace.initial_mu,
            max_mu: out.trace.max_mu(),
            d_s: out.trace.d_s,
            sign,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub root: ProjectivePoint,
    #[serde(rename = "K_total")]
    pub k_total: usize,
    pub rounds: usize,
    pub precisions: Vec<f64>,
    pub per_round: Vec<RoundSummary>,
    pub certificate: Certificate,
    pub certified: bool,
}

impl SolveReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// `mu(g, eta)^2` for the starting pair of the successful round.
    pub fn mu_start_sq(&self) -> f64 {
        self.per_round.last().map(|r| r.mu_start * r.mu_start).unwrap_or(f64::NAN)
    }
}

/// Sign making `Re <f, g> >= 0`.
fn orientation(f: &SpherePoint, g: &SpherePoint) -> Result<i8> {
    let re = f.system().weyl_inner(g.system())?.re;
    Ok(if re < 0.0 { -1 } else { 1 })
}

fn oriented(g: &SpherePoint, sign: i8) -> SpherePoint {
    if sign < 0 {
        g.neg()
    } else {
        g.clone()
    }
}

fn unit_system(v: &RealCoords, like: &PolySystem) -> Result<SpherePoint> {
    SpherePoint::normalize(&PolySystem::from_real_coords(v, like.profile())?)
}

/// `2N - 1` numbers in `[0, 1)` derived from a hash of `u` and `q`.
fn hashed_unit_reals(u: &RealCoords, q: f64, count: usize) -> Vec<f64> {
    let mut seed = Vec::with_capacity(8 * (u.len() + 1));
    for x in &u.0 {
        seed.extend_from_slice(&x.to_le_bytes());
    }
    seed.extend_from_slice(&q.to_le_bytes());
    let mut out = Vec::with_capacity(count);
    let mut block = 0u64;
    while out.len() < count {
        let mut hasher = Sha256::new();
        hasher.update(&seed);
        hasher.update(block.to_le_bytes());
        let digest = hasher.finalize();
        for chunk in digest.chunks_exact(8) {
            if out.len() == count {
                break;
            }
            let bits = u64::from_le_bytes(chunk.try_into().unwrap()) >> 11;
            out.push(bits as f64 / (1u64 << 53) as f64);
        }
        block += 1;
    }
    out
}

fn noise_from_parts(u: &RealCoords, b: &[f64], q: f64, mode: EntropyFallback, trig: TrigMode) -> Result<RealCoords> {
    if b.iter().all(|&x| x == 0.0) {
        return match mode {
            EntropyFallback::Fail => Err(Error::EntropyExhausted { precision: q }),
            EntropyFallback::Hash => Ok(sibuya(&hashed_unit_reals(u, q, b.len()), trig)),
        };
    }
    Ok(sibuya(b, trig))
}

/// `{u}_Q`, with a fallback when every fractional part vanishes in binary64.
pub fn extract_noise(u: &RealCoords, q: f64, mode: EntropyFallback, trig: TrigMode) -> Result<RealCoords> {
    let (_, b) = floor_and_frac_parts(u, q)?;
    noise_from_parts(u, &b, q, mode, trig)
}

/// Deterministic solver: at precision `Q` the input splits into a truncation,
/// which is solved by checked continuation, and a fractional part, which
/// provides the starting pair. `Q` is squared until a round succeeds.
pub fn dbp(f: &PolySystem, cfg: &SolverConfig) -> Result<SolveReport> {
    let f = SpherePoint::normalize(f)?;
    let profile = f.system().profile().clone();
    let n_dim = profile.dim() as f64;
    let u = f.system().to_real_coords();
    let rho_numerator = 3.0 * n_dim.sqrt();
    let opts = cfg.hc_options();

    let mut q = n_dim;
    let mut precisions = Vec::new();
    let mut per_round = Vec::new();
    let mut k_total = 0;
    for _ in 0..cfg.max_rounds.max(1) {
        q *= q;
        if !q.is_finite() {
            break;
        }
        let rho = rho_numerator / q;
        precisions.push(q);
        let (floor, b) = floor_and_frac_parts(&u, q)?;
        let fprime = unit_system(&floor, f.system())?;
        let noise = noise_from_parts(&u, &b, q, cfg.entropy_fallback, cfg.trig_mode)?;
        let BpPair { g, zeta } = match bp(&unit_system(&noise, f.system())?) {
            Ok(pair) => pair,
            Err(Error::DegenerateKernel) => {
                per_round.push(RoundSummary {
                    precision: q,
                    rho,
                    status: HcStatus::Fail,
                    failure: Some(RoundFailure::DegenerateKernel),
                    k: 0,
                    mu_start: f64::INFINITY,
                    max_mu: f64::INFINITY,
                    d_s: f64::NAN,
                    sign: 1,
                });
                continue;
            }
            Err(e) => return Err(e),
        };
        let sign = orientation(&f, &g)?;
        let out = hc_checked(&fprime, &oriented(&g, sign), &zeta, rho, &opts)?;
        k_total += out.trace.k();
        per_round.push(RoundSummary::from_outcome(q, rho, sign, &out));
        if let Some(root) = out.point {
            let certificate = certify_root(f.system(), &root, cfg.cert_iters);
            return Ok(SolveReport {
                root,
                k_total,
                rounds: per_round.len(),
                precisions,
                per_round,
                certified: certificate.passed,
                certificate,
            });
        }
    }
    Err(Error::RoundsExceeded {
        rounds: per_round.len(),
    })
}

/// Randomized solver: a uniform sphere point drawn from `cfg.rng_seed` gives
/// the starting pair, followed by plain continuation to `f`.
pub fn bp_solve(f: &PolySystem, cfg: &SolverConfig) -> Result<SolveReport> {
    let f = SpherePoint::normalize(f)?;
    let mut rng = seeded_rng(cfg.rng_seed);
    let u = sample_unit(2 * f.system().profile().dim(), &mut rng);
    let BpPair { g, zeta } = bp(&unit_system(&u, f.system())?)?;
    let sign = orientation(&f, &g)?;
    let out = hc(&f, &oriented(&g, sign), &zeta, &cfg.hc_options())?;
    let summary = RoundSummary::from_outcome(f64::NAN, 0.0, sign, &out);
    let root = out
        .point
        .ok_or_else(|| Error::PathFailed(format!("{:?}", out.failure.unwrap_or(HcFailure::MaxSteps))))?;
    let certificate = certify_root(f.system(), &root, cfg.cert_iters);
    Ok(SolveReport {
        root,
        k_total: out.trace.k(),
        rounds: 1,
        precisions: Vec::new(),
        per_round: vec![summary],
        certified: certificate.passed,
        certificate,
    })
}
