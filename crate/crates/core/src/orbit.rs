//! Orbit tangent space of contragredient equivalence and the linearized
//! reduction to the miniversal normal form.
//!
//! With `S = I + εX` and `R = I + εY`,
//!
//! ```text
//! S⁻¹AR = A + ε(AY − XA) + O(ε²)
//! R⁻¹BS = B + ε(BX − YB) + O(ε²)
//! ```
//!
//! so the tangent space at `(A, B)` is the image of
//! `(X, Y) ↦ (AY − XA, BX − YB)`. The template is miniversal to first order
//! exactly when its span is a direct complement of that image.

use num_traits::Zero;

use crate::canonical::{assemble, CanonicalSpec};
use crate::deformation::{build_template, ParamTemplate, Side};
use crate::error::{Error, Result};
use crate::exactmat::{rank, solve, ExactMatrix, ExactScalar};
use crate::firstorder::LinearOperatorMatrix;

/// Matrix of `vec(X) ⊕ vec(Y) ↦ vec(AY − XA) ⊕ vec(BX − YB)`.
#[derive(Clone, Debug)]
pub struct TangentOperator {
    pub op: LinearOperatorMatrix,
    pub m: usize,
    pub n: usize,
}

pub fn tangent_map(a: &ExactMatrix, b: &ExactMatrix) -> Result<TangentOperator> {
    let (m, n) = a.shape();
    if b.shape() != (n, m) {
        return Err(Error::Dimension(format!(
            "not a counter pair: A is {m}x{n}, B is {}x{}",
            b.rows(),
            b.cols()
        )));
    }
    let mn = m * n;
    let mut t = ExactMatrix::zeros(2 * mn, m * m + n * n);
    let first = |i: usize, j: usize| j * m + i;
    let second = |i: usize, j: usize| mn + j * n + i;
    let mut add = |row: usize, col: usize, v: &ExactScalar| {
        let cur = t.get(row, col) + v;
        t.set(row, col, cur);
    };
    for q in 0..m {
        for p in 0..m {
            // X = E_pq
            let col = q * m + p;
            for c in 0..n {
                let v = a.get(q, c);
                if !v.is_zero() {
                    add(first(p, c), col, &-v);
                }
            }
            for r in 0..n {
                let v = b.get(r, p);
                if !v.is_zero() {
                    add(second(r, q), col, v);
                }
            }
        }
    }
    for q in 0..n {
        for p in 0..n {
            // Y = E_pq
            let col = m * m + q * n + p;
            for r in 0..m {
                let v = a.get(r, p);
                if !v.is_zero() {
                    add(first(r, q), col, v);
                }
            }
            for c in 0..m {
                let v = b.get(q, c);
                if !v.is_zero() {
                    add(second(p, c), col, &-v);
                }
            }
        }
    }
    Ok(TangentOperator {
        op: LinearOperatorMatrix {
            matrix: t,
            row_space_desc: format!(
                "vec(AY - XA) [{m}x{n}] ++ vec(BX - YB) [{n}x{m}], column-major"
            ),
            col_space_desc: format!("vec(X) [{m}x{m}] ++ vec(Y) [{n}x{n}], column-major"),
        },
        m,
        n,
    })
}

/// Evaluates the tangent operator directly on matrices.
pub fn tangent_image(
    a: &ExactMatrix,
    b: &ExactMatrix,
    x: &ExactMatrix,
    y: &ExactMatrix,
) -> Result<(ExactMatrix, ExactMatrix)> {
    let e = a.matmul(y)?.try_sub(&x.matmul(a)?)?;
    let f = b.matmul(x)?.try_sub(&y.matmul(b)?)?;
    Ok((e, f))
}

/// `2mn × k` matrix whose column `j` is `vec(Ã_j) ⊕ vec(B̃_j)`.
pub fn template_span(t: &ParamTemplate) -> ExactMatrix {
    let (m, n) = (t.d_a.rows(), t.d_a.cols());
    let mut out = ExactMatrix::zeros(2 * m * n, t.k);
    for (j, s) in t.stars.iter().enumerate() {
        let row = match s.side {
            Side::A => s.col * m + s.row,
            Side::B => m * n + s.col * n + s.row,
        };
        out.set(row, j, ExactScalar::from_int(1));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalityReport {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub rank_tangent: usize,
    pub rank_joint: usize,
}

impl MinimalityReport {
    /// Tangent image and template span together fill the whole space.
    pub fn transversal(&self) -> bool {
        self.rank_joint == 2 * self.m * self.n
    }

    /// Orbit codimension equals the star count.
    pub fn minimal(&self) -> bool {
        self.rank_tangent + self.k == 2 * self.m * self.n
    }

    pub fn holds(&self) -> bool {
        self.transversal() && self.minimal()
    }
}

pub fn minimality_report(spec: &CanonicalSpec) -> Result<MinimalityReport> {
    let (a, b) = assemble(spec)?;
    let t = build_template(spec)?;
    let tangent = tangent_map(&a, &b)?;
    let joint = tangent.op.matrix.hstack(&template_span(&t))?;
    Ok(MinimalityReport {
        m: tangent.m,
        n: tangent.n,
        k: t.k,
        rank_tangent: rank(&tangent.op.matrix),
        rank_joint: rank(&joint),
    })
}

/// `rank(T) + k = 2mn` and `rank([T | template]) = 2mn`.
pub fn minimality_check(spec: &CanonicalSpec) -> Result<bool> {
    Ok(minimality_report(spec)?.holds())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub params: Vec<ExactScalar>,
    pub x: ExactMatrix,
    pub y: ExactMatrix,
}

/// Splits a perturbation `(e, f)` of the canonical pair into a tangent
/// part `(AY − XA, BX − YB)` and a template part `(Ã(params), B̃(params))`.
pub fn reduce_first_order(
    spec: &CanonicalSpec,
    e: &ExactMatrix,
    f: &ExactMatrix,
) -> Result<Reduction> {
    let (a, b) = assemble(spec)?;
    let (m, n) = a.shape();
    if e.shape() != (m, n) || f.shape() != (n, m) {
        return Err(Error::Dimension(format!(
            "perturbation must be {m}x{n} and {n}x{m}, got {}x{} and {}x{}",
            e.rows(),
            e.cols(),
            f.rows(),
            f.cols()
        )));
    }
    let t = build_template(spec)?;
    let system = tangent_map(&a, &b)?.op.matrix.hstack(&template_span(&t))?;
    let mut rhs = e.vec();
    rhs.extend(f.vec());
    let sol = solve(&system, &ExactMatrix::column_vector(rhs))?.ok_or_else(|| {
        Error::Invariant("perturbation is outside tangent space plus template span".into())
    })?;
    let z = sol.entries();
    let x = ExactMatrix::unvec(m, m, &z[..m * m])?;
    let y = ExactMatrix::unvec(n, n, &z[m * m..m * m + n * n])?;
    let params = z[m * m + n * n..].to_vec();
    Ok(Reduction { params, x, y })
}

/// The second-order remainders of the finite transformation with
/// `S = I + εX`, `R = I + εY`:
///
/// ```text
/// (S⁻¹AR − A − ε(AY − XA),  R⁻¹BS − B − ε(BX − YB))
/// ```
///
/// Fails with a domain error if `S` or `R` is singular at this `ε`.
pub fn expansion_residual(
    a: &ExactMatrix,
    b: &ExactMatrix,
    x: &ExactMatrix,
    y: &ExactMatrix,
    eps: &ExactScalar,
) -> Result<(ExactMatrix, ExactMatrix)> {
    let (m, n) = a.shape();
    if b.shape() != (n, m) || x.shape() != (m, m) || y.shape() != (n, n) {
        return Err(Error::Dimension(
            "expected A m×n, B n×m, X m×m, Y n×n".into(),
        ));
    }
    let s = ExactMatrix::identity(m).try_add(&x.scale(eps))?;
    let r = ExactMatrix::identity(n).try_add(&y.scale(eps))?;
    let singular = || Error::Domain(format!("I + εX or I + εY is singular at ε = {eps}"));
    let s_inv = s.inverse().ok_or_else(singular)?;
    let r_inv = r.inverse().ok_or_else(singular)?;
    let first = a.matmul(y)?.try_sub(&x.matmul(a)?)?.scale(eps);
    let second = b.matmul(x)?.try_sub(&y.matmul(b)?)?.scale(eps);
    let ra = s_inv.matmul(a)?.matmul(&r)?.try_sub(a)?.try_sub(&first)?;
    let rb = r_inv.matmul(b)?.matmul(&s)?.try_sub(b)?.try_sub(&second)?;
    Ok((ra, rb))
}
