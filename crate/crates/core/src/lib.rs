//! Exact canonical forms, miniversal deformations and first-order induced
//! perturbations of counter matrix pairs `(A, B)` (`A` is `m × n`, `B` is
//! `n × m`) under contragredient equivalence `(A, B) ↦ (S⁻¹AR, R⁻¹BS)`.

pub mod canonical;
pub mod deformation;
pub mod error;
pub mod exactmat;
pub mod firstorder;
pub mod orbit;
pub mod recovery;

pub use canonical::{assemble, CanonicalSpec, EigenGroup};
pub use error::{Error, Result};
pub use exactmat::{ExactMatrix, ExactScalar};
