//! Certified homotopy continuation for square systems of homogeneous complex
//! polynomial equations, with a randomized and a deterministic choice of
//! starting pair.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod conditioning;
pub mod error;
pub mod homotopy;
pub mod linalg;
pub mod projective;
pub mod randomization;
pub mod solver;
pub mod systems;

pub use conditioning::{certify_root, mu_bound, mu_exact, mu_with, newton_step, Certificate, MuMode};
pub use error::{Error, Result};
pub use projective::{
    dist_proj, dist_sphere, geodesic, standard_unitary, Geodesic, GeodesicMode, ProjectivePoint, SpherePoint, Unitary,
};
pub use systems::{weyl_norm_sq_monomial, DegreeProfile, MonomialIndex, PolySystem, RealCoords, SystemFile, Term};
pub use homotopy::{
    hc, hc_checked, path_oracle, HcFailure, HcOptions, HcOutcome, HcStatus, OracleEstimate, PathTrace, StepConstants,
    TraceStep,
};
pub use randomization::{
    bp, bp_parts, bp_split, face_decompose, face_recompose, floor_frac_unit, kernel_vector, psi_expand, sample_system,
    sample_unit, seeded_rng, sibuya, split_seed, sphere_floor, sphere_frac, trig_poly, BpPair, BpParts, FaceCoords, SeededRng, TrigMode,
};
pub use solver::{bp_solve, dbp, extract_noise, EntropyFallback, RoundFailure, RoundSummary, SolveReport, SolverConfig};
