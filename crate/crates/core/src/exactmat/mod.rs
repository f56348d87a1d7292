//! Exact dense linear algebra over the Gaussian rationals.

mod matrix;
mod scalar;

pub use matrix::{direct_sum, inverse, matmul, nullspace, rank, solve, ExactMatrix};
pub use scalar::{format_rational, parse_rational, ExactScalar};
