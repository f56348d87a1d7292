//! Canonical counter pairs under contragredient equivalence, given
//! combinatorially and materialized as explicit matrices.
//!
//! A pair is a direct sum of summands of five kinds, always assembled in the
//! order
//!
//! ```text
//! (I, C)  ⊕  ⊕(I_r, J_r(0))  ⊕  ⊕(J_r(0), I_r)  ⊕  ⊕(F_r, G_r)  ⊕  ⊕(G_r, F_r)
//! ```
//!
//! where `C` collects Jordan blocks at distinct nonzero eigenvalues and the
//! four size lists are ascending.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmat::{direct_sum, ExactMatrix, ExactScalar};

/// Jordan sizes attached to one eigenvalue of the invertible part.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EigenGroup {
    pub lambda: ExactScalar,
    pub sizes: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CanonicalSpec {
    pub eigen: Vec<EigenGroup>,
    pub t1: Vec<usize>,
    pub t2: Vec<usize>,
    pub t3: Vec<usize>,
    pub t4: Vec<usize>,
}

/// The four size-indexed summand families plus the eigenvalue part.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BlockType {
    /// `(I_r, J_r(λ))`, λ ≠ 0; the index points into `CanonicalSpec::eigen`.
    Eigen(usize),
    /// `(I_r, J_r(0))`
    T1,
    /// `(J_r(0), I_r)`
    T2,
    /// `(F_r, G_r)`
    T3,
    /// `(G_r, F_r)`
    T4,
}

impl BlockType {
    /// Shape `(rows, cols)` of the first matrix of a summand of size `r`.
    pub fn a_shape(self, r: usize) -> (usize, usize) {
        match self {
            BlockType::T3 => (r, r - 1),
            BlockType::T4 => (r - 1, r),
            _ => (r, r),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NotAscending(String),
    ZeroSize(String),
    EmptyEigenGroup(ExactScalar),
    DuplicateEigenvalue(ExactScalar),
    ZeroEigenvalue,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotAscending(list) => write!(f, "{list} not ascending"),
            Violation::ZeroSize(list) => write!(f, "{list} contains a zero size"),
            Violation::EmptyEigenGroup(l) => write!(f, "eigenvalue {l} has no Jordan sizes"),
            Violation::DuplicateEigenvalue(l) => write!(f, "duplicate eigenvalue {l}"),
            Violation::ZeroEigenvalue => {
                write!(f, "eigenvalue 0 is not allowed in eigen (use t1 blocks)")
            }
        }
    }
}

/// One summand placed inside the assembled pair: rows/cols refer to `A`;
/// for `B` they swap roles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlacedBlock {
    pub kind: BlockType,
    pub size: usize,
    pub row0: usize,
    pub col0: usize,
    pub rows: usize,
    pub cols: usize,
}

/// Offsets of every summand of a spec, in assembly order.
#[derive(Clone, Debug)]
pub struct Layout {
    pub blocks: Vec<PlacedBlock>,
    pub m: usize,
    pub n: usize,
}

impl Layout {
    pub fn of(spec: &CanonicalSpec) -> Layout {
        let mut blocks = Vec::new();
        let (mut r0, mut c0) = (0, 0);
        for (kind, size) in spec.summands() {
            let (rows, cols) = kind.a_shape(size);
            blocks.push(PlacedBlock {
                kind,
                size,
                row0: r0,
                col0: c0,
                rows,
                cols,
            });
            r0 += rows;
            c0 += cols;
        }
        Layout {
            blocks,
            m: r0,
            n: c0,
        }
    }

    /// Blocks whose kind satisfies `pred`, in assembly order.
    pub fn select(&self, pred: impl Fn(BlockType) -> bool) -> Vec<&PlacedBlock> {
        self.blocks.iter().filter(|b| pred(b.kind)).collect()
    }

    pub fn of_type(&self, kind: BlockType) -> Vec<&PlacedBlock> {
        self.select(|k| k == kind)
    }
}

impl CanonicalSpec {
    pub fn from_json(text: &str) -> Result<CanonicalSpec> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serialization")
    }

    /// Summands in assembly order.
    pub fn summands(&self) -> Vec<(BlockType, usize)> {
        let mut out = Vec::new();
        for (g, group) in self.eigen.iter().enumerate() {
            out.extend(group.sizes.iter().map(|&r| (BlockType::Eigen(g), r)));
        }
        for (kind, list) in [
            (BlockType::T1, &self.t1),
            (BlockType::T2, &self.t2),
            (BlockType::T3, &self.t3),
            (BlockType::T4, &self.t4),
        ] {
            out.extend(list.iter().map(|&r| (kind, r)));
        }
        out
    }

    pub fn has_eigen_part(&self) -> bool {
        self.eigen.iter().any(|g| !g.sizes.is_empty())
    }

    /// The same spec with the eigenvalue part removed.
    pub fn without_eigen(&self) -> CanonicalSpec {
        CanonicalSpec {
            eigen: Vec::new(),
            ..self.clone()
        }
    }

    /// Number of summands in the four size families.
    pub fn typed_block_count(&self) -> usize {
        self.t1.len() + self.t2.len() + self.t3.len() + self.t4.len()
    }

    /// Sorts eigen groups by `(re, im)`; the rest of the spec is already
    /// order-normalized once it validates.
    pub fn normalized(&self) -> CanonicalSpec {
        let mut out = self.clone();
        out.eigen.sort_by(|a, b| a.lambda.cmp(&b.lambda));
        out
    }

    pub fn validate(&self) -> std::result::Result<(), Vec<Violation>> {
        let violations = validate(self);
        if violations.is_empty() {
            Ok(())
        } else {
            Err(violations)
        }
    }

    pub fn ensure_valid(&self) -> Result<()> {
        self.validate().map_err(Error::InvalidSpec)
    }

    pub fn dims(&self) -> (usize, usize) {
        dims(self)
    }
}

/// Every violated invariant of `spec`, in a stable order.
pub fn validate(spec: &CanonicalSpec) -> Vec<Violation> {
    let mut out = Vec::new();
    let check_list = |name: String, list: &[usize], out: &mut Vec<Violation>| {
        if list.windows(2).any(|w| w[0] > w[1]) {
            out.push(Violation::NotAscending(name.clone()));
        }
        if list.contains(&0) {
            out.push(Violation::ZeroSize(name));
        }
    };
    for group in &spec.eigen {
        if group.lambda.is_zero() {
            out.push(Violation::ZeroEigenvalue);
        }
        if group.sizes.is_empty() {
            out.push(Violation::EmptyEigenGroup(group.lambda.clone()));
        }
        check_list(
            format!("sizes of eigenvalue {}", group.lambda),
            &group.sizes,
            &mut out,
        );
    }
    for (i, a) in spec.eigen.iter().enumerate() {
        if spec.eigen[..i].iter().any(|b| b.lambda == a.lambda) {
            out.push(Violation::DuplicateEigenvalue(a.lambda.clone()));
        }
    }
    for (name, list) in [
        ("t1_sizes", &spec.t1),
        ("t2_sizes", &spec.t2),
        ("t3_sizes", &spec.t3),
        ("t4_sizes", &spec.t4),
    ] {
        check_list(name.to_string(), list, &mut out);
    }
    out
}

/// Shape `(m, n)` of `A` without assembling. Assumes sizes ≥ 1.
pub fn dims(spec: &CanonicalSpec) -> (usize, usize) {
    spec.summands()
        .into_iter()
        .map(|(kind, r)| kind.a_shape(r))
        .fold((0, 0), |(m, n), (r, c)| (m + r, n + c))
}

/// `J_r(λ)`: λ on the diagonal, ones on the superdiagonal.
pub fn jordan(r: usize, lambda: &ExactScalar) -> Result<ExactMatrix> {
    if r == 0 {
        return Err(Error::Domain("Jordan block size must be at least 1".into()));
    }
    let mut m = ExactMatrix::zeros(r, r);
    for i in 0..r {
        m.set(i, i, lambda.clone());
        if i + 1 < r {
            m.set(i, i + 1, ExactScalar::one());
        }
    }
    Ok(m)
}

/// `F_r`, of shape `r × (r−1)`: ones at `(i, i)`.
pub fn f_block(r: usize) -> Result<ExactMatrix> {
    if r == 0 {
        return Err(Error::Domain("F block size must be at least 1".into()));
    }
    let mut m = ExactMatrix::zeros(r, r - 1);
    for i in 0..r - 1 {
        m.set(i, i, ExactScalar::one());
    }
    Ok(m)
}

/// `G_r`, of shape `(r−1) × r`: ones at `(i, i+1)`.
pub fn g_block(r: usize) -> Result<ExactMatrix> {
    if r == 0 {
        return Err(Error::Domain("G block size must be at least 1".into()));
    }
    let mut m = ExactMatrix::zeros(r - 1, r);
    for i in 0..r - 1 {
        m.set(i, i + 1, ExactScalar::one());
    }
    Ok(m)
}

/// The pair of matrices of a single summand.
pub fn summand_pair(
    spec: &CanonicalSpec,
    kind: BlockType,
    r: usize,
) -> Result<(ExactMatrix, ExactMatrix)> {
    let zero = ExactScalar::zero();
    Ok(match kind {
        BlockType::Eigen(g) => (ExactMatrix::identity(r), jordan(r, &spec.eigen[g].lambda)?),
        BlockType::T1 => (ExactMatrix::identity(r), jordan(r, &zero)?),
        BlockType::T2 => (jordan(r, &zero)?, ExactMatrix::identity(r)),
        BlockType::T3 => (f_block(r)?, g_block(r)?),
        BlockType::T4 => (g_block(r)?, f_block(r)?),
    })
}

/// Materializes `(A, B)` with `A` of shape `m × n` and `B` of shape `n × m`.
pub fn assemble(spec: &CanonicalSpec) -> Result<(ExactMatrix, ExactMatrix)> {
    spec.ensure_valid()?;
    let pairs = spec
        .summands()
        .into_iter()
        .map(|(kind, r)| summand_pair(spec, kind, r))
        .collect::<Result<Vec<_>>>()?;
    let a = direct_sum(pairs.iter().map(|p| &p.0));
    let b = direct_sum(pairs.iter().map(|p| &p.1));
    Ok((a, b))
}
