//! First-order factorization machinery: superpotentials, the lowering and
//! raising operators, partner potentials, Riccati residuals, supercharge
//! algebra checks, shape invariance and the Hamiltonian hierarchy.
//!
//! Three sign conventions for the operator pair are carried side by side
//! (see [`Convention`]). They disagree for complex superpotentials, and
//! [`factorization_audit`] measures which of them reproduces
//! `-mu^2 d^2/dx^2 + V` for a given `(F, V, E0)` instead of assuming one.

mod audit;
mod convention;
mod operators;
mod shape;
mod superpotential;

pub use audit::{
    decompose_potential_parts, default_test_functions, factorization_audit, supercharge_algebra_check,
    ConventionResidual, FactorizationReport, PotentialParts, SuperchargeReport,
};
pub use convention::Convention;
pub use operators::{
    apply_lowering, apply_raising, ground_state_from_superpotential, ground_state_kernel, partner_potentials,
    riccati_residual,
};
pub use shape::{
    hierarchy_energies, shape_invariance_residual, HierarchyLevel, OscillatorFamily, ShapeInvariance,
    SuperpotentialFamily,
};
pub use superpotential::{ScalarFn, Superpotential};
