//! Matrices whose entries are linear forms in independent parameters.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactmat::{ExactMatrix, ExactScalar};

/// `Σ c_j · p_j`, stored sparsely with zero coefficients dropped.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearForm(BTreeMap<usize, ExactScalar>);

impl LinearForm {
    pub fn param(j: usize) -> Self {
        let mut m = BTreeMap::new();
        m.insert(j, ExactScalar::from_int(1));
        LinearForm(m)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &ExactScalar)> {
        self.0.iter().map(|(&j, c)| (j, c))
    }

    pub fn coefficient(&self, j: usize) -> ExactScalar {
        self.0.get(&j).cloned().unwrap_or_default()
    }

    /// `self += c · other`
    pub fn add_scaled(&mut self, c: &ExactScalar, other: &LinearForm) {
        if c.is_zero() {
            return;
        }
        for (&j, v) in &other.0 {
            let entry = self.0.entry(j).or_default();
            *entry += &(c * v);
            if entry.is_zero() {
                self.0.remove(&j);
            }
        }
    }

    pub fn evaluate(&self, values: &[ExactScalar]) -> ExactScalar {
        let mut acc = ExactScalar::zero();
        for (&j, c) in &self.0 {
            acc += &(c * &values[j]);
        }
        acc
    }
}

/// Dense row-major matrix of linear forms; constant parts are always zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<LinearForm>,
}

impl AffineMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![LinearForm::default(); rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &LinearForm {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, form: LinearForm) {
        self.entries[i * self.cols + j] = form;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(LinearForm::is_zero)
    }

    /// Parameters that occur with a nonzero coefficient somewhere.
    pub fn params(&self) -> BTreeSet<usize> {
        self.entries
            .iter()
            .flat_map(|f| f.terms().map(|(j, _)| j))
            .collect()
    }

    pub fn submatrix(&self, row0: usize, nrows: usize, col0: usize, ncols: usize) -> AffineMatrix {
        let mut out = Self::zeros(nrows, ncols);
        for i in 0..nrows {
            for j in 0..ncols {
                out.set(i, j, self.get(row0 + i, col0 + j).clone());
            }
        }
        out
    }

    pub fn evaluate(&self, values: &[ExactScalar]) -> ExactMatrix {
        let entries = self.entries.iter().map(|f| f.evaluate(values)).collect();
        ExactMatrix::from_entries(self.rows, self.cols, entries).expect("shape preserved")
    }

    /// `c · self` for a constant matrix `c`.
    pub fn left_mul(c: &ExactMatrix, x: &AffineMatrix) -> Result<AffineMatrix> {
        if c.cols() != x.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by affine {}x{}",
                c.rows(),
                c.cols(),
                x.rows,
                x.cols
            )));
        }
        let mut out = Self::zeros(c.rows(), x.cols);
        for i in 0..c.rows() {
            for k in 0..c.cols() {
                let cik = c.get(i, k);
                if cik.is_zero() {
                    continue;
                }
                for j in 0..x.cols {
                    out.entries[i * x.cols + j].add_scaled(cik, x.get(k, j));
                }
            }
        }
        Ok(out)
    }

    /// `self · c` for a constant matrix `c`.
    pub fn right_mul(x: &AffineMatrix, c: &ExactMatrix) -> Result<AffineMatrix> {
        if x.cols != c.rows() {
            return Err(Error::Dimension(format!(
                "cannot multiply affine {}x{} by {}x{}",
                x.rows,
                x.cols,
                c.rows(),
                c.cols()
            )));
        }
        let mut out = Self::zeros(x.rows, c.cols());
        for i in 0..x.rows {
            for k in 0..x.cols {
                let form = x.get(i, k);
                if form.is_zero() {
                    continue;
                }
                for j in 0..c.cols() {
                    out.entries[i * c.cols() + j].add_scaled(c.get(k, j), form);
                }
            }
        }
        Ok(out)
    }

    /// Matrix of the linear map `params ↦ vec(self)` restricted to the
    /// listed parameters (column-major vectorization).
    pub fn coefficient_matrix(&self, params: &[usize]) -> ExactMatrix {
        let mut m = ExactMatrix::zeros(self.rows * self.cols, params.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                let form = self.get(r, c);
                for (col, &p) in params.iter().enumerate() {
                    let v = form.coefficient(p);
                    if !v.is_zero() {
                        m.set(c * self.rows + r, col, v);
                    }
                }
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn products_track_parameters() {
        let mut x = AffineMatrix::zeros(2, 1);
        x.set(0, 0, LinearForm::param(0));
        x.set(1, 0, LinearForm::param(1));
        // J_2(0) shifts the second entry up and drops the first.
        let j2 = ExactMatrix::from_ints(&[[0, 1], [0, 0]]);
        let y = AffineMatrix::left_mul(&j2, &x).unwrap();
        assert_eq!(y.params().into_iter().collect::<Vec<_>>(), vec![1]);
        assert_eq!(y.get(0, 0), &LinearForm::param(1));

        let row = ExactMatrix::from_ints(&[[2, -2]]);
        let z = AffineMatrix::right_mul(&x, &row).unwrap();
        assert_eq!(z.get(1, 1).coefficient(1), ExactScalar::from_int(-2));
        assert!(AffineMatrix::left_mul(&row, &AffineMatrix::zeros(3, 1)).is_err());
    }

    #[test]
    fn cancellation_removes_terms() {
        let mut f = LinearForm::param(3);
        f.add_scaled(&ExactScalar::from_int(-1), &LinearForm::param(3));
        assert!(f.is_zero());
    }
}
