//! Miniversal deformation templates: where the independent parameters
//! ("stars") of the normal form sit inside the perturbation `(Ã, B̃)`.
//!
//! Every parameter block is a block matrix `N = [H_ij]` partitioned like
//! the adjacent canonical summands, with each `H` either a starred first
//! column (`p ≤ q`) or a starred last row (`p > q`). The blocks used, with
//! rows/columns named by summand family:
//!
//! ```text
//! Ã:  N22  N23  N24        B̃:  N'11 N'12 N'13 N'14   (+ N inside each eigenvalue group)
//!     N32  P3   N34             N'21
//!     N42       Q4              N'31      Q3
//!                               N'41      N'43 P4
//! ```
//!
//! `P3`/`P4` are the upper parts (diagonal and above) of the `P` blocks and
//! `Q3`/`Q4` the strictly lower parts of the `Q` blocks.
//!
//! Two refinements keep the template transversal with the fewest stars.
//! `N24` and `N34` give a square `H` its starred last row. An off-diagonal
//! block of `P`/`Q` between summands of different sizes carries one star
//! fewer than `H`, since that star is reachable through the tangent space.

mod affine;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use affine::{AffineMatrix, LinearForm};

use crate::canonical::{BlockType, CanonicalSpec, Layout, PlacedBlock};
use crate::error::{Error, Result};
use crate::exactmat::{ExactMatrix, ExactScalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

/// The named parameter block a star belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StarBlock {
    Eigen(usize),
    N22,
    N23,
    N24,
    N32,
    N42,
    P3,
    N34,
    Q4,
    N11p,
    N12p,
    N13p,
    N14p,
    N21p,
    N31p,
    N41p,
    Q3,
    N43p,
    P4,
}

impl fmt::Display for StarBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            StarBlock::Eigen(g) => return write!(f, "N(eigen {g})"),
            StarBlock::N22 => "N22",
            StarBlock::N23 => "N23",
            StarBlock::N24 => "N24",
            StarBlock::N32 => "N32",
            StarBlock::N42 => "N42",
            StarBlock::P3 => "P3",
            StarBlock::N34 => "N34",
            StarBlock::Q4 => "Q4",
            StarBlock::N11p => "N'11",
            StarBlock::N12p => "N'12",
            StarBlock::N13p => "N'13",
            StarBlock::N14p => "N'14",
            StarBlock::N21p => "N'21",
            StarBlock::N31p => "N'31",
            StarBlock::N41p => "N'41",
            StarBlock::Q3 => "Q3",
            StarBlock::N43p => "N'43",
            StarBlock::P4 => "P4",
        };
        f.write_str(s)
    }
}

/// A starred position, 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Star {
    pub side: Side,
    pub row: usize,
    pub col: usize,
    pub block: StarBlock,
}

#[derive(Clone, Debug)]
pub struct ParamTemplate {
    pub k: usize,
    pub d_a: AffineMatrix,
    pub d_b: AffineMatrix,
    /// `stars[j]` is where parameter `j` lives.
    pub stars: Vec<Star>,
}

/// Star positions of a single `p × q` block `H`.
pub fn h_pattern(p: usize, q: usize) -> Vec<(usize, usize)> {
    if p == 0 || q == 0 {
        return Vec::new();
    }
    if p <= q {
        (0..p).map(|i| (i, 0)).collect()
    } else {
        (0..q).map(|j| (p - 1, j)).collect()
    }
}

/// Like [`h_pattern`] but a square block gets the starred last row.
pub fn h_pattern_strict(p: usize, q: usize) -> Vec<(usize, usize)> {
    if p == 0 || p < q {
        h_pattern(p, q)
    } else {
        (0..q).map(|j| (p - 1, j)).collect()
    }
}

/// Pattern of an off-diagonal block of `P`/`Q` coupling two summands of the
/// same family. Between summands of different sizes one star of `H` lies in
/// the tangent space and is dropped: the top of a starred column, or the
/// end of a starred row.
pub fn coupling_pattern(p: usize, q: usize, distinct: bool) -> Vec<(usize, usize)> {
    let mut v = h_pattern(p, q);
    if distinct && !v.is_empty() {
        if p <= q {
            v.remove(0);
        } else {
            v.pop();
        }
    }
    v
}

/// Star positions of `N = [H_ij]` with the given block row heights and
/// column widths.
pub fn n_pattern(row_sizes: &[usize], col_sizes: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut r0 = 0;
    for &p in row_sizes {
        let mut c0 = 0;
        for &q in col_sizes {
            out.extend(h_pattern(p, q).into_iter().map(|(i, j)| (r0 + i, c0 + j)));
            c0 += q;
        }
        r0 += p;
    }
    out
}

/// An interval of rows or columns owned by one summand.
#[derive(Clone, Copy)]
struct Span {
    start: usize,
    len: usize,
}

fn a_rows(blocks: &[&PlacedBlock]) -> Vec<Span> {
    blocks
        .iter()
        .map(|b| Span {
            start: b.row0,
            len: b.rows,
        })
        .collect()
}

fn a_cols(blocks: &[&PlacedBlock]) -> Vec<Span> {
    blocks
        .iter()
        .map(|b| Span {
            start: b.col0,
            len: b.cols,
        })
        .collect()
}

struct StarCollector {
    stars: Vec<Star>,
}

impl StarCollector {
    /// Places `pattern(i, j, p, q)` in every `(i, j)` block admitted by `keep`.
    fn place_with(
        &mut self,
        side: Side,
        block: StarBlock,
        rows: &[Span],
        cols: &[Span],
        keep: impl Fn(usize, usize) -> bool,
        pattern: impl Fn(usize, usize, usize, usize) -> Vec<(usize, usize)>,
    ) {
        for (i, r) in rows.iter().enumerate() {
            for (j, c) in cols.iter().enumerate() {
                if !keep(i, j) {
                    continue;
                }
                for (di, dj) in pattern(i, j, r.len, c.len) {
                    self.stars.push(Star {
                        side,
                        row: r.start + di,
                        col: c.start + dj,
                        block,
                    });
                }
            }
        }
    }

    fn place(&mut self, side: Side, block: StarBlock, rows: &[Span], cols: &[Span]) {
        self.place_with(
            side,
            block,
            rows,
            cols,
            |_, _| true,
            |_, _, p, q| h_pattern(p, q),
        );
    }
}

/// Index of the summand owning `pos` along a partition given by span starts
/// and lengths. Empty spans never own a position.
fn owner(spans: &[(usize, usize)], pos: usize) -> usize {
    spans
        .iter()
        .position(|&(start, len)| pos >= start && pos < start + len)
        .expect("position inside partition")
}

pub fn build_template(spec: &CanonicalSpec) -> Result<ParamTemplate> {
    spec.ensure_valid()?;
    let layout = Layout::of(spec);

    let t1 = layout.of_type(BlockType::T1);
    let t2 = layout.of_type(BlockType::T2);
    let t3 = layout.of_type(BlockType::T3);
    let t4 = layout.of_type(BlockType::T4);

    let mut c = StarCollector { stars: Vec::new() };
    let upper = |i: usize, j: usize| i <= j;
    let lower = |i: usize, j: usize| i > j;
    let strict = |_: usize, _: usize, p: usize, q: usize| h_pattern_strict(p, q);
    let coupling = |sizes: &[usize]| {
        let sizes = sizes.to_vec();
        move |i: usize, j: usize, p: usize, q: usize| coupling_pattern(p, q, sizes[i] != sizes[j])
    };

    // Ã: rows and columns follow the partition of A.
    c.place(Side::A, StarBlock::N22, &a_rows(&t2), &a_cols(&t2));
    c.place(Side::A, StarBlock::N23, &a_rows(&t2), &a_cols(&t3));
    c.place_with(
        Side::A,
        StarBlock::N24,
        &a_rows(&t2),
        &a_cols(&t4),
        |_, _| true,
        strict,
    );
    c.place(Side::A, StarBlock::N32, &a_rows(&t3), &a_cols(&t2));
    c.place(Side::A, StarBlock::N42, &a_rows(&t4), &a_cols(&t2));
    c.place_with(
        Side::A,
        StarBlock::P3,
        &a_rows(&t3),
        &a_cols(&t3),
        upper,
        coupling(&spec.t3),
    );
    c.place_with(
        Side::A,
        StarBlock::N34,
        &a_rows(&t3),
        &a_cols(&t4),
        |_, _| true,
        strict,
    );
    c.place_with(
        Side::A,
        StarBlock::Q4,
        &a_rows(&t4),
        &a_cols(&t4),
        lower,
        coupling(&spec.t4),
    );

    // B̃: rows of B are columns of A and vice versa.
    for g in 0..spec.eigen.len() {
        let group = layout.of_type(BlockType::Eigen(g));
        c.place(
            Side::B,
            StarBlock::Eigen(g),
            &a_cols(&group),
            &a_rows(&group),
        );
    }
    c.place(Side::B, StarBlock::N11p, &a_cols(&t1), &a_rows(&t1));
    c.place(Side::B, StarBlock::N12p, &a_cols(&t1), &a_rows(&t2));
    c.place(Side::B, StarBlock::N13p, &a_cols(&t1), &a_rows(&t3));
    c.place(Side::B, StarBlock::N14p, &a_cols(&t1), &a_rows(&t4));
    c.place(Side::B, StarBlock::N21p, &a_cols(&t2), &a_rows(&t1));
    c.place(Side::B, StarBlock::N31p, &a_cols(&t3), &a_rows(&t1));
    c.place(Side::B, StarBlock::N41p, &a_cols(&t4), &a_rows(&t1));
    c.place_with(
        Side::B,
        StarBlock::Q3,
        &a_cols(&t3),
        &a_rows(&t3),
        lower,
        coupling(&spec.t3),
    );
    c.place(Side::B, StarBlock::N43p, &a_cols(&t4), &a_rows(&t3));
    c.place_with(
        Side::B,
        StarBlock::P4,
        &a_cols(&t4),
        &a_rows(&t4),
        upper,
        coupling(&spec.t4),
    );

    // Parameter order: Ã before B̃, then summand-block row, summand-block
    // column, row, column.
    let row_spans: Vec<(usize, usize)> = layout.blocks.iter().map(|b| (b.row0, b.rows)).collect();
    let col_spans: Vec<(usize, usize)> = layout.blocks.iter().map(|b| (b.col0, b.cols)).collect();
    let mut stars = c.stars;
    stars.sort_by_key(|s| {
        let (rs, cs) = match s.side {
            Side::A => (&row_spans, &col_spans),
            Side::B => (&col_spans, &row_spans),
        };
        (s.side, owner(rs, s.row), owner(cs, s.col), s.row, s.col)
    });

    let (m, n) = (layout.m, layout.n);
    let mut d_a = AffineMatrix::zeros(m, n);
    let mut d_b = AffineMatrix::zeros(n, m);
    for (j, s) in stars.iter().enumerate() {
        let target = match s.side {
            Side::A => &mut d_a,
            Side::B => &mut d_b,
        };
        if !target.get(s.row, s.col).is_zero() {
            return Err(Error::Invariant(format!(
                "two stars at {:?} ({}, {})",
                s.side, s.row, s.col
            )));
        }
        target.set(s.row, s.col, LinearForm::param(j));
    }
    Ok(ParamTemplate {
        k: stars.len(),
        d_a,
        d_b,
        stars,
    })
}

impl ParamTemplate {
    pub fn instantiate(&self, values: &[ExactScalar]) -> Result<(ExactMatrix, ExactMatrix)> {
        instantiate(self, values)
    }

    /// Parameters belonging to one named block, ascending.
    pub fn params_of(&self, block: StarBlock) -> Vec<usize> {
        (0..self.k)
            .filter(|&j| self.stars[j].block == block)
            .collect()
    }

    pub fn blocks(&self) -> BTreeSet<StarBlock> {
        self.stars.iter().map(|s| s.block).collect()
    }

    pub fn to_json(&self) -> TemplateJson {
        TemplateJson {
            k: self.k,
            stars: self
                .stars
                .iter()
                .map(|s| StarJson {
                    matrix: s.side,
                    row: s.row + 1,
                    col: s.col + 1,
                })
                .collect(),
        }
    }
}

/// `(Ã, B̃)` with `values[j]` at star `j` and zeros elsewhere.
pub fn instantiate(
    t: &ParamTemplate,
    values: &[ExactScalar],
) -> Result<(ExactMatrix, ExactMatrix)> {
    if values.len() != t.k {
        return Err(Error::LengthMismatch {
            expected: t.k,
            got: values.len(),
        });
    }
    let mut a = ExactMatrix::zeros(t.d_a.rows(), t.d_a.cols());
    let mut b = ExactMatrix::zeros(t.d_b.rows(), t.d_b.cols());
    for (s, v) in t.stars.iter().zip(values) {
        match s.side {
            Side::A => a.set(s.row, s.col, v.clone()),
            Side::B => b.set(s.row, s.col, v.clone()),
        }
    }
    Ok((a, b))
}

/// Number of stars of the template.
pub fn codimension(spec: &CanonicalSpec) -> Result<usize> {
    Ok(build_template(spec)?.k)
}

/// Wire form of a template: 1-based star coordinates in parameter order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemplateJson {
    pub k: usize,
    pub stars: Vec<StarJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarJson {
    pub matrix: Side,
    pub row: usize,
    pub col: usize,
}
