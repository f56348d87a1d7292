use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::scalar::ExactScalar;
use crate::error::{Error, Result};

/// Dense row-major matrix over ℚ(i). Zero-dimensional shapes (`rows = 0` or
/// `cols = 0`) are ordinary values.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<ExactScalar>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![ExactScalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, ExactScalar::one());
        }
        m
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<ExactScalar>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    /// Builds from nested rows; all rows must have equal length. An empty
    /// outer vector gives a 0×0 matrix.
    pub fn from_rows(rows: Vec<Vec<ExactScalar>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let n = rows.len();
        Ok(Self {
            rows: n,
            cols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Integer matrix from nested slices, mostly for tests and fixtures.
    pub fn from_ints<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let data = rows
            .iter()
            .map(|r| {
                r.as_ref()
                    .iter()
                    .map(|&v| ExactScalar::from_int(v))
                    .collect()
            })
            .collect();
        Self::from_rows(data).expect("ragged integer rows")
    }

    pub fn column_vector(values: Vec<ExactScalar>) -> Self {
        let n = values.len();
        Self {
            rows: n,
            cols: 1,
            entries: values,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entries(&self) -> &[ExactScalar] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> &ExactScalar {
        assert!(row < self.rows && col < self.cols, "index out of bounds");
        &self.entries[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: ExactScalar) {
        assert!(row < self.rows && col < self.cols, "index out of bounds");
        self.entries[row * self.cols + col] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[ExactScalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> ExactMatrix {
        Self::column_vector((0..self.rows).map(|i| self.get(i, j).clone()).collect())
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn scale(&self, c: &ExactScalar) -> ExactMatrix {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * c).collect(),
        }
    }

    /// Column-major vectorization, the convention used by every linear
    /// operator in this crate.
    pub fn vec(&self) -> Vec<ExactScalar> {
        let mut out = Vec::with_capacity(self.rows * self.cols);
        for j in 0..self.cols {
            for i in 0..self.rows {
                out.push(self.get(i, j).clone());
            }
        }
        out
    }

    /// Inverse of [`ExactMatrix::vec`].
    pub fn unvec(rows: usize, cols: usize, data: &[ExactScalar]) -> Result<ExactMatrix> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "cannot reshape {} values into {rows}x{cols}",
                data.len()
            )));
        }
        let mut m = Self::zeros(rows, cols);
        for j in 0..cols {
            for i in 0..rows {
                m.set(i, j, data[j * rows + i].clone());
            }
        }
        Ok(m)
    }

    pub fn submatrix(&self, row0: usize, nrows: usize, col0: usize, ncols: usize) -> ExactMatrix {
        assert!(row0 + nrows <= self.rows && col0 + ncols <= self.cols);
        let mut m = Self::zeros(nrows, ncols);
        for i in 0..nrows {
            for j in 0..ncols {
                m.set(i, j, self.get(row0 + i, col0 + j).clone());
            }
        }
        m
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if self.rows != other.rows {
            return Err(Error::Dimension(format!(
                "hstack of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let cols = self.cols + other.cols;
        let mut entries = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            entries.extend_from_slice(self.row(i));
            entries.extend_from_slice(other.row(i));
        }
        Ok(Self {
            rows: self.rows,
            cols,
            entries,
        })
    }

    pub fn vstack(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "vstack of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Ok(Self {
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn matmul(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        matmul(self, other)
    }

    pub fn try_add(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        self.zip_with(other, "add", |a, b| a + b)
    }

    pub fn try_sub(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        self.zip_with(other, "subtract", |a, b| a - b)
    }

    fn zip_with(
        &self,
        other: &ExactMatrix,
        what: &str,
        f: impl Fn(&ExactScalar, &ExactScalar) -> ExactScalar,
    ) -> Result<ExactMatrix> {
        if self.shape() != other.shape() {
            return Err(Error::Dimension(format!(
                "cannot {what} {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    /// `self^k` for square matrices; `self^0` is the identity.
    pub fn pow(&self, k: u32) -> Result<ExactMatrix> {
        if !self.is_square() {
            return Err(Error::Dimension(format!(
                "power of non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let mut acc = Self::identity(self.rows);
        for _ in 0..k {
            acc = matmul(&acc, self)?;
        }
        Ok(acc)
    }

    pub fn rank(&self) -> usize {
        rank(self)
    }

    pub fn inverse(&self) -> Option<ExactMatrix> {
        inverse(self)
    }
}

pub fn matmul(a: &ExactMatrix, b: &ExactMatrix) -> Result<ExactMatrix> {
    if a.cols != b.rows {
        return Err(Error::Dimension(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let mut out = ExactMatrix::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let aik = a.get(i, k);
            if aik.is_zero() {
                continue;
            }
            for j in 0..b.cols {
                let bkj = b.get(k, j);
                if bkj.is_zero() {
                    continue;
                }
                out.entries[i * b.cols + j] += &(aik * bkj);
            }
        }
    }
    Ok(out)
}

/// Row echelon form computed in place on a row list. Pivots are searched in
/// the first `ncols` columns only; trailing columns are carried along.
/// Returns the pivot columns. With `reduced`, pivots are scaled to one and
/// cleared above as well as below.
fn echelon(rows: &mut [Vec<ExactScalar>], ncols: usize, reduced: bool) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        if reduced {
            let inv = rows[r][c].inv().expect("nonzero pivot");
            for e in rows[r][c..].iter_mut() {
                if !e.is_zero() {
                    *e = &*e * &inv;
                }
            }
        }
        let width = rows[r].len();
        let support: Vec<usize> = (c..width).filter(|&j| !rows[r][j].is_zero()).collect();
        let (head, tail) = rows.split_at_mut(r);
        let (pivot_row, below) = tail.split_first_mut().expect("pivot row");
        let above = if reduced { head.len() } else { 0 };
        let targets = below.iter_mut().chain(head[..above].iter_mut());
        for row in targets {
            if row[c].is_zero() {
                continue;
            }
            let factor = if reduced {
                row[c].clone()
            } else {
                &row[c] / &pivot_row[c]
            };
            for &j in &support {
                let delta = &factor * &pivot_row[j];
                row[j] -= &delta;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn to_rows(m: &ExactMatrix) -> Vec<Vec<ExactScalar>> {
    (0..m.rows).map(|i| m.row(i).to_vec()).collect()
}

/// Exact rank by Gaussian elimination; always 0 for zero-dimensional input.
pub fn rank(m: &ExactMatrix) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    // Eliminate along the shorter side.
    let (mut rows, ncols) = if m.rows < m.cols {
        (to_rows(&m.transpose()), m.rows)
    } else {
        (to_rows(m), m.cols)
    };
    echelon(&mut rows, ncols, false).len()
}

/// Basis of the right kernel as column vectors, one per free column of the
/// reduced echelon form.
pub fn nullspace(m: &ExactMatrix) -> Vec<ExactMatrix> {
    let mut rows = to_rows(m);
    let pivots = echelon(&mut rows, m.cols, true);
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..m.cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![ExactScalar::zero(); m.cols];
            v[f] = ExactScalar::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -&rows[i][f];
            }
            ExactMatrix::column_vector(v)
        })
        .collect()
}

/// Some exact solution of `m x = v`, or `None` when the system is
/// inconsistent. Free variables are set to zero.
pub fn solve(m: &ExactMatrix, v: &ExactMatrix) -> Result<Option<ExactMatrix>> {
    if v.rows != m.rows || v.cols != 1 {
        return Err(Error::Dimension(format!(
            "right-hand side must be {}x1, got {}x{}",
            m.rows, v.rows, v.cols
        )));
    }
    let aug = m.hstack(v)?;
    let mut rows = to_rows(&aug);
    let pivots = echelon(&mut rows, aug.cols, true);
    if pivots.last() == Some(&m.cols) {
        return Ok(None);
    }
    let mut x = vec![ExactScalar::zero(); m.cols];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = rows[i][m.cols].clone();
    }
    Ok(Some(ExactMatrix::column_vector(x)))
}

pub fn inverse(m: &ExactMatrix) -> Option<ExactMatrix> {
    if !m.is_square() {
        return None;
    }
    let n = m.rows;
    let aug = m.hstack(&ExactMatrix::identity(n)).ok()?;
    let mut rows = to_rows(&aug);
    let pivots = echelon(&mut rows, n, true);
    if pivots.len() < n {
        return None;
    }
    let mut inv = ExactMatrix::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        for j in 0..n {
            inv.set(i, j, row[n + j].clone());
        }
    }
    Some(inv)
}

/// Block-diagonal assembly. Zero-dimensional blocks still contribute their
/// row or column count.
pub fn direct_sum<'a>(blocks: impl IntoIterator<Item = &'a ExactMatrix>) -> ExactMatrix {
    let blocks: Vec<&ExactMatrix> = blocks.into_iter().collect();
    let rows = blocks.iter().map(|b| b.rows).sum();
    let cols = blocks.iter().map(|b| b.cols).sum();
    let mut out = ExactMatrix::zeros(rows, cols);
    let (mut r0, mut c0) = (0, 0);
    for b in blocks {
        for i in 0..b.rows {
            for j in 0..b.cols {
                let e = b.get(i, j);
                if !e.is_zero() {
                    out.set(r0 + i, c0 + j, e.clone());
                }
            }
        }
        r0 += b.rows;
        c0 += b.cols;
    }
    out
}

impl<'a> Mul<&'a ExactMatrix> for &'a ExactMatrix {
    type Output = ExactMatrix;
    fn mul(self, rhs: &ExactMatrix) -> ExactMatrix {
        matmul(self, rhs).expect("matrix product shape mismatch")
    }
}

impl<'a> Add<&'a ExactMatrix> for &'a ExactMatrix {
    type Output = ExactMatrix;
    fn add(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.try_add(rhs).expect("matrix sum shape mismatch")
    }
}

impl<'a> Sub<&'a ExactMatrix> for &'a ExactMatrix {
    type Output = ExactMatrix;
    fn sub(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.try_sub(rhs).expect("matrix difference shape mismatch")
    }
}

impl Neg for &ExactMatrix {
    type Output = ExactMatrix;
    fn neg(self) -> ExactMatrix {
        self.scale(&-ExactScalar::one())
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    entries: Vec<ExactScalar>,
}

impl Serialize for ExactMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExactMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(d)?;
        ExactMatrix::from_entries(raw.rows, raw.cols, raw.entries).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::{f_block, g_block, jordan};

    fn int(n: i64) -> ExactScalar {
        ExactScalar::from_int(n)
    }

    #[test]
    fn matmul_of_f_and_g_blocks() {
        let f2 = f_block(2).unwrap();
        let g2 = g_block(2).unwrap();
        assert_eq!(&f2 * &g2, ExactMatrix::from_ints(&[[0, 1], [0, 0]]));
        assert_eq!(&g2 * &f2, ExactMatrix::from_ints(&[[0]]));
    }

    #[test]
    fn matmul_through_zero_inner_dimension() {
        let a = ExactMatrix::zeros(1, 0);
        let b = ExactMatrix::zeros(0, 1);
        assert_eq!(&a * &b, ExactMatrix::zeros(1, 1));
        assert!(matmul(&ExactMatrix::zeros(2, 3), &ExactMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&jordan(3, &ExactScalar::zero()).unwrap()), 2);
        assert_eq!(rank(&ExactMatrix::identity(4)), 4);
        assert_eq!(rank(&ExactMatrix::zeros(0, 5)), 0);
        let m = ExactMatrix::from_ints(&[[1, 2, 3], [2, 4, 6], [1, 0, 1]]);
        assert_eq!(rank(&m), 2);
        assert_eq!(rank(&m.transpose()), 2);
    }

    #[test]
    fn nullspace_examples() {
        let j2 = jordan(2, &ExactScalar::zero()).unwrap();
        let ns = nullspace(&j2);
        assert_eq!(ns, vec![ExactMatrix::from_ints(&[[1], [0]])]);
        assert!(nullspace(&ExactMatrix::identity(2)).is_empty());
        assert_eq!(nullspace(&ExactMatrix::zeros(2, 2)).len(), 2);
        assert_eq!(nullspace(&ExactMatrix::zeros(0, 3)).len(), 3);
    }

    #[test]
    fn solve_examples() {
        let v = ExactMatrix::from_ints(&[[1], [2], [3]]);
        assert_eq!(
            solve(&ExactMatrix::identity(3), &v).unwrap(),
            Some(v.clone())
        );
        let j2 = jordan(2, &ExactScalar::zero()).unwrap();
        let rhs = ExactMatrix::from_ints(&[[1], [0]]);
        let x = solve(&j2, &rhs).unwrap().unwrap();
        assert_eq!(&j2 * &x, rhs);
        assert_eq!(solve(&ExactMatrix::zeros(2, 2), &rhs).unwrap(), None);
        assert!(solve(&j2, &v).is_err());
    }

    #[test]
    fn inverse_with_complex_entries() {
        let m = ExactMatrix::from_rows(vec![
            vec![ExactScalar::i(), int(1)],
            vec![int(2), ExactScalar::ratio(1, 3)],
        ])
        .unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, ExactMatrix::identity(2));
        assert!(ExactMatrix::from_ints(&[[1, 2], [2, 4]])
            .inverse()
            .is_none());
        assert_eq!(
            ExactMatrix::zeros(0, 0).inverse(),
            Some(ExactMatrix::zeros(0, 0))
        );
    }

    #[test]
    fn direct_sum_examples() {
        let d = direct_sum([&jordan(1, &int(2)).unwrap(), &jordan(1, &int(5)).unwrap()]);
        assert_eq!(d, ExactMatrix::from_ints(&[[2, 0], [0, 5]]));
        let d = direct_sum([&f_block(1).unwrap(), &g_block(1).unwrap()]);
        assert_eq!(d, ExactMatrix::zeros(1, 1));
        assert_eq!(direct_sum([]), ExactMatrix::zeros(0, 0));
    }

    #[test]
    fn vec_is_column_major() {
        let m = ExactMatrix::from_ints(&[[1, 2], [3, 4], [5, 6]]);
        let v: Vec<ExactScalar> = [1, 3, 5, 2, 4, 6].iter().map(|&x| int(x)).collect();
        assert_eq!(m.vec(), v);
        assert_eq!(ExactMatrix::unvec(3, 2, &v).unwrap(), m);
    }

    #[test]
    fn json_encoding_is_bit_exact() {
        let m = ExactMatrix::from_rows(vec![vec![ExactScalar::ratio(-1, 2), ExactScalar::i()]])
            .unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(
            s,
            r#"{"rows":1,"cols":2,"entries":[["-1/2","0"],["0","1"]]}"#
        );
        let back: ExactMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
        assert!(
            serde_json::from_str::<ExactMatrix>(r#"{"rows":2,"cols":2,"entries":[]}"#).is_err()
        );
        let empty: ExactMatrix =
            serde_json::from_str(r#"{"rows":0,"cols":3,"entries":[]}"#).unwrap();
        assert_eq!(empty.shape(), (0, 3));
    }
}
