//! Limit objects of the fire dynamics: Borel-type laws, D(c) and μ_x, the
//! stable-1/2 jump process, and the three regime limits.

pub mod borel;
pub mod continuous;
pub mod jumps;
pub mod quadrature;
pub mod regimes;
pub mod rooted;
pub mod special;

pub use borel::{borel_pmf, borel_tanner_pmf, conditioned_borel_vector, sample_borel};
pub use continuous::{
    d_cdf, d_cdf_quadrature, d_cdf_quadrature_grid, d_density, mu_x_density, mu_x_sample, sample_chi2_1, sample_d,
    sample_inv_chi2_1,
};
pub use jumps::{
    conditioned_jumps, ranked_jumps, stable_jump_atoms, JumpAtom, JumpSequence, DEFAULT_DISCRETIZATION,
    MIN_DISCRETIZATION,
};
pub use regimes::{
    critical_limit_sample, subcritical_limit_sample, supercritical_limit_sequence, CriticalSample, LimitSequence,
    SubcriticalSample,
};
pub use rooted::{rooted_conditional_mark_pmf, rooted_joint_pmf, rooted_mark_outcome, RootedMarkOutcome};
pub use special::{chi2_1_cdf, inv_chi2_1_cdf, scaled_chi2_exp_cdf};
