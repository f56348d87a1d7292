//! The seven mixed products through which parameters of an eigenvalue-free
//! template can vanish from `A·B̃ + Ã·B`.

use std::fmt;

use crate::canonical::{assemble, BlockType, CanonicalSpec, Layout};
use crate::deformation::{build_template, AffineMatrix, StarBlock};
use crate::error::{Error, Result};
use crate::exactmat::{rank, ExactMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseKind {
    /// `Ψ₂·N'21`, with `Ψ₂ = ⊕ J_{r2j}(0)`
    Psi2N21,
    /// `N23·Q̄3`
    N23Q3,
    /// `N24·P̄4`
    N24P4,
    /// `P̄3·N'31`
    P3N31,
    /// `N34·P̄4`
    N34P4,
    /// `Q̄4·N'41`
    Q4N41,
    /// `Q̄4·N'43`
    Q4N43,
}

impl CaseKind {
    pub const ALL: [CaseKind; 7] = [
        CaseKind::Psi2N21,
        CaseKind::N23Q3,
        CaseKind::N24P4,
        CaseKind::P3N31,
        CaseKind::N34P4,
        CaseKind::Q4N41,
        CaseKind::Q4N43,
    ];

    /// The parameter block feeding this product.
    pub fn source(self) -> StarBlock {
        match self {
            CaseKind::Psi2N21 => StarBlock::N21p,
            CaseKind::N23Q3 => StarBlock::N23,
            CaseKind::N24P4 => StarBlock::N24,
            CaseKind::P3N31 => StarBlock::N31p,
            CaseKind::N34P4 => StarBlock::N34,
            CaseKind::Q4N41 => StarBlock::N41p,
            CaseKind::Q4N43 => StarBlock::N43p,
        }
    }
}

impl fmt::Display for CaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseKind::Psi2N21 => "Psi2*N'21",
            CaseKind::N23Q3 => "N23*Q3bar",
            CaseKind::N24P4 => "N24*P4bar",
            CaseKind::P3N31 => "P3bar*N'31",
            CaseKind::N34P4 => "N34*P4bar",
            CaseKind::Q4N41 => "Q4bar*N'41",
            CaseKind::Q4N43 => "Q4bar*N'43",
        })
    }
}

#[derive(Clone, Debug)]
pub struct CaseBlock {
    pub kind: CaseKind,
    pub product: AffineMatrix,
    /// Parameters of the source block.
    pub params: Vec<usize>,
    /// Source parameters absent from the product.
    pub killed: Vec<usize>,
}

impl CaseBlock {
    /// Whether the product is nonzero for every nonzero source block.
    pub fn injective(&self) -> bool {
        rank(&self.product.coefficient_matrix(&self.params)) == self.params.len()
    }
}

/// Contiguous `(start, len)` ranges of one summand family inside `A`.
struct Ranges {
    rows: (usize, usize),
    cols: (usize, usize),
}

fn ranges(layout: &Layout, kind: BlockType) -> Ranges {
    let blocks = layout.of_type(kind);
    Ranges {
        rows: (
            blocks.first().map_or(0, |b| b.row0),
            blocks.iter().map(|b| b.rows).sum(),
        ),
        cols: (
            blocks.first().map_or(0, |b| b.col0),
            blocks.iter().map(|b| b.cols).sum(),
        ),
    }
}

fn sub(m: &ExactMatrix, rows: (usize, usize), cols: (usize, usize)) -> ExactMatrix {
    m.submatrix(rows.0, rows.1, cols.0, cols.1)
}

fn sub_affine(m: &AffineMatrix, rows: (usize, usize), cols: (usize, usize)) -> AffineMatrix {
    m.submatrix(rows.0, rows.1, cols.0, cols.1)
}

/// Evaluates the seven products symbolically in the template parameters.
/// Only defined for specs without an eigenvalue part.
pub fn case_blocks(spec: &CanonicalSpec) -> Result<Vec<CaseBlock>> {
    if spec.has_eigen_part() {
        return Err(Error::Domain(
            "case blocks are defined for eigenvalue-free specs".into(),
        ));
    }
    let (a, b) = assemble(spec)?;
    let t = build_template(spec)?;
    let layout = Layout::of(spec);
    let r1 = ranges(&layout, BlockType::T1);
    let r2 = ranges(&layout, BlockType::T2);
    let r3 = ranges(&layout, BlockType::T3);
    let r4 = ranges(&layout, BlockType::T4);

    // Blocks of A are indexed (A-rows, A-cols), blocks of B (A-cols, A-rows).
    let psi2 = sub(&a, r2.rows, r2.cols);
    let p3_bar = sub(&a, r3.rows, r3.cols);
    let q4_bar = sub(&a, r4.rows, r4.cols);
    let q3_bar = sub(&b, r3.cols, r3.rows);
    let p4_bar = sub(&b, r4.cols, r4.rows);

    CaseKind::ALL
        .iter()
        .map(|&kind| {
            let product = match kind {
                CaseKind::Psi2N21 => {
                    AffineMatrix::left_mul(&psi2, &sub_affine(&t.d_b, r2.cols, r1.rows))
                }
                CaseKind::N23Q3 => {
                    AffineMatrix::right_mul(&sub_affine(&t.d_a, r2.rows, r3.cols), &q3_bar)
                }
                CaseKind::N24P4 => {
                    AffineMatrix::right_mul(&sub_affine(&t.d_a, r2.rows, r4.cols), &p4_bar)
                }
                CaseKind::P3N31 => {
                    AffineMatrix::left_mul(&p3_bar, &sub_affine(&t.d_b, r3.cols, r1.rows))
                }
                CaseKind::N34P4 => {
                    AffineMatrix::right_mul(&sub_affine(&t.d_a, r3.rows, r4.cols), &p4_bar)
                }
                CaseKind::Q4N41 => {
                    AffineMatrix::left_mul(&q4_bar, &sub_affine(&t.d_b, r4.cols, r1.rows))
                }
                CaseKind::Q4N43 => {
                    AffineMatrix::left_mul(&q4_bar, &sub_affine(&t.d_b, r4.cols, r3.rows))
                }
            }?;
            let params = t.params_of(kind.source());
            let present = product.params();
            let killed = params
                .iter()
                .copied()
                .filter(|p| !present.contains(p))
                .collect();
            Ok(CaseBlock {
                kind,
                product,
                params,
                killed,
            })
        })
        .collect()
}
