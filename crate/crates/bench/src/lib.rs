//! Fixed inputs shared by the benchmarks.

use certroot::{bp, sample_system, seeded_rng, DegreeProfile, ProjectivePoint, SpherePoint};

/// A target system and an oriented starting pair for it, drawn from `seed`.
pub struct Fixture {
    pub f: SpherePoint,
    pub g: SpherePoint,
    pub eta: ProjectivePoint,
}

pub fn fixture(degrees: &[u32], seed: u64) -> Fixture {
    let profile = DegreeProfile::new(degrees).expect("valid degrees");
    let mut rng = seeded_rng(seed);
    let f = sample_system(&profile, &mut rng);
    let pair = bp(&sample_system(&profile, &mut rng)).expect("generic sample");
    let flip = f.system().weyl_inner(pair.g.system()).expect("same profile").re < 0.0;
    let g = if flip { pair.g.neg() } else { pair.g };
    Fixture { f, g, eta: pair.zeta }
}

/// Profiles used across the benchmarks.
pub const PROFILES: &[&[u32]] = &[&[2], &[2, 2], &[3, 2], &[2, 2, 2]];
