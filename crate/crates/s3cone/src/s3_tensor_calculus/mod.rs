//! Tensor fields on the round S³ in the left-invariant coframe: connection,
//! first-order operators, rough Laplacian, the eight commutation identities
//! and Laplacian spectra.

mod field;
mod identities;
mod spectrum;

pub use field::{sym_index, Bundle, TensorFieldS3, SYM_PAIRS};
pub use identities::{
    identity_bundle, identity_sides, lie_laplacian_sides, monomial_basis, verify_appendix_identities,
    IdentityReport, IdentityResidual, STATEMENTS,
};
pub use spectrum::{
    cluster, coefficient_basis, compare_one_form_list, null_space, spectrum, Constraint, OneFormComparison,
    SpectrumReport, CLUSTER_TOL, SVD_THRESHOLD,
};
