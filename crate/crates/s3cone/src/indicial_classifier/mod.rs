//! Indicial exponents of the modified linearized operator, mode by mode.

mod classify;
mod modes;
mod norms;
mod quartic;
mod reduced;
mod symbolic;
mod system;

pub use classify::{
    beta, classify, decay_gap_report, gap_holds, perturbed_roots, realizable_roots, Branch, DecayGapReport, GapViolation,
    ModeClassification, Partners, PerturbedRoots, RootRecord, TrackPoint, GAP_TOL,
};
pub use modes::{BundleMode, ModeField, ModeKind};
pub use norms::{annulus_norm, dilate, mode_norms, sphere_norm_sq, ModeNorms, RADIAL_NODES};
pub use quartic::{closed_form_roots, indicial_quartic, lie_gauge_exponents, IndicialQuartic};
pub use reduced::{
    basis_fields, genuine_solution, link_eigenvalue, one_form_sup, reduced_system_residual, reduced_system_residual_sum, scalar_sup, solution_residual,
    tensor_sup, ReducedResiduals, SolutionResidual, EIGEN_TOL,
};
pub use symbolic::SymbolicPower;
pub use system::{ModeSystem, Unknown, RANK_THRESHOLD};
