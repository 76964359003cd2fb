//! Pseudo-Hermitian supersymmetric quantum mechanics on a uniform grid.
//!
//! The crate covers the reduction of a 1D two-component Dirac problem with a
//! complex vector potential to a Schrodinger-like equation, first-order SUSY
//! factorization under several operator conventions, the deformed
//! Woods-Saxon closed forms, and a finite-difference spectral oracle used to
//! check every closed-form claim independently.

pub mod calculus;
pub mod dirac;
pub mod dws;
pub mod error;
pub mod grid;
pub mod oracle;
pub mod params;
pub mod susy;

pub use num_complex::Complex64;

pub use error::{Error, Growth, Result};
pub use grid::{Grid, SampledFunction};
pub use params::{DwsParams, PhysicalConfig};
pub use susy::{Convention, Superpotential};
