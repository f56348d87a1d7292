//! First-order induced perturbations `A·B̃ + Ã·B` of the product `AB`.
//!
//! A miniversal perturbation is a parameter vector `p`, and `p ↦ A·B̃(p) + Ã(p)·B`
//! is linear, so it is nonzero for every `p ≠ 0` exactly when its matrix has
//! full column rank. That rank test is the oracle; the size inequalities
//! below are the closed-form characterization checked against it.

mod cases;
mod sweep;

use std::collections::BTreeSet;

use num_traits::Zero;

pub use cases::{case_blocks, CaseBlock, CaseKind};
pub use sweep::{
    enumerate_typed_specs, spec_id, sweep, sweep_with_progress, write_csv, SweepConfig,
    SweepReport, SweepRow, Verdict, CSV_HEADER,
};

use crate::canonical::{assemble, CanonicalSpec};
use crate::deformation::{build_template, Side};
use crate::error::Result;
use crate::exactmat::{rank, ExactMatrix};

/// Explicit matrix of a linear map between vectorized matrix spaces. All
/// vectorization is column-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearOperatorMatrix {
    pub matrix: ExactMatrix,
    pub row_space_desc: String,
    pub col_space_desc: String,
}

impl LinearOperatorMatrix {
    pub fn rank(&self) -> usize {
        rank(&self.matrix)
    }

    /// Source coordinates whose image is zero.
    pub fn zero_columns(&self) -> BTreeSet<usize> {
        (0..self.matrix.cols())
            .filter(|&j| (0..self.matrix.rows()).all(|i| self.matrix.get(i, j).is_zero()))
            .collect()
    }
}

/// The `m² × k` matrix whose column `j` is `vec(A·B̃_j + Ã_j·B)`.
pub fn induced_map(spec: &CanonicalSpec) -> Result<LinearOperatorMatrix> {
    let (a, b) = assemble(spec)?;
    let t = build_template(spec)?;
    let (m, n) = a.shape();
    let mut phi = ExactMatrix::zeros(m * m, t.k);
    for (j, s) in t.stars.iter().enumerate() {
        match s.side {
            // Ã_j·B = e_row · (row `col` of B)
            Side::A => {
                for c in 0..m {
                    let v = b.get(s.col, c);
                    if !v.is_zero() {
                        phi.set(c * m + s.row, j, v.clone());
                    }
                }
            }
            // A·B̃_j = (column `row` of A) · e_colᵀ
            Side::B => {
                for r in 0..m {
                    let v = a.get(r, s.row);
                    if !v.is_zero() {
                        phi.set(s.col * m + r, j, v.clone());
                    }
                }
            }
        }
    }
    debug_assert_eq!(b.shape(), (n, m));
    Ok(LinearOperatorMatrix {
        matrix: phi,
        row_space_desc: format!("vec(A*dB + dA*B) [{m}x{m}], column-major"),
        col_space_desc: format!("template parameters p_1..p_{}", t.k),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Injectivity {
    pub k: usize,
    pub rank: usize,
}

impl Injectivity {
    pub fn injective(&self) -> bool {
        self.rank == self.k
    }
}

pub fn injectivity(spec: &CanonicalSpec) -> Result<Injectivity> {
    let phi = induced_map(spec)?;
    Ok(Injectivity {
        k: phi.matrix.cols(),
        rank: phi.rank(),
    })
}

/// Whether `A·B̃ + Ã·B ≠ 0` for every nonzero miniversal perturbation.
pub fn is_injective(spec: &CanonicalSpec) -> Result<bool> {
    Ok(injectivity(spec)?.injective())
}

/// `max(xs) < min(ys)` whenever both lists are nonempty.
fn guarded_less(xs: &[usize], ys: &[usize]) -> bool {
    match (xs.iter().max(), ys.iter().min()) {
        (Some(x), Some(y)) => x < y,
        _ => true,
    }
}

/// The four guarded inequalities of the characterization:
/// `r1 < r2`, `r2 < r4`, `r1 < r4`, `r3 < r4` (largest of the left family
/// against smallest of the right one).
pub fn theorem_predicate(spec: &CanonicalSpec) -> bool {
    guarded_less(&spec.t1, &spec.t2)
        && guarded_less(&spec.t2, &spec.t4)
        && guarded_less(&spec.t1, &spec.t4)
        && guarded_less(&spec.t3, &spec.t4)
}

/// The three-inequality variant, without `r1 < r4`.
pub fn proof_predicate(spec: &CanonicalSpec) -> bool {
    guarded_less(&spec.t1, &spec.t2)
        && guarded_less(&spec.t2, &spec.t4)
        && guarded_less(&spec.t3, &spec.t4)
}
