//! Minimal dense linear algebra: row-major `f64` matrices, products,
//! transposes, row norms, and a direct ridge / linear-system solver.
//!
//! Everything here is sequential and allocation-per-result. Problem sizes in
//! this crate are small (at most a few thousand dimensions), so a straight
//! triple loop and an LU factorization are all that is needed.

use crate::error::{Error, Result};

/// Row-major dense matrix of 64-bit floats.
///
/// Immutable after construction in normal use; all operations return new
/// matrices. `data.len() == rows * cols` always holds.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    /// Build from a row-major buffer. Fails if the length does not match.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeData {
                rows,
                cols,
                actual: data.len(),
            });
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    /// Build from per-row slices; all rows must have the same length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * ncols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != ncols {
                return Err(Error::RaggedRow {
                    path: "<memory>".to_string(),
                    line: i + 1,
                    expected: ncols,
                    found: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(DenseMatrix {
            rows: rows.len(),
            cols: ncols,
            data,
        })
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

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// First non-finite entry, if any, as (row, col).
    pub fn first_non_finite(&self) -> Option<(usize, usize)> {
        self.data
            .iter()
            .position(|v| !v.is_finite())
            .map(|p| (p / self.cols, p % self.cols))
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        out
    }

    /// Standard matrix product. Requires `self.cols == other.rows`.
    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.rows {
            return Err(Error::dim("matmul", self.shape(), other.shape()));
        }
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        // i-k-j order keeps the inner loop contiguous in both operands.
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0.0 {
                    continue;
                }
                let brow = &other.data[k * other.cols..(k + 1) * other.cols];
                let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (o, b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Each row divided by `max(norm, eps)`; rows with norm <= eps come back
    /// as all zeros. `eps` must be positive.
    pub fn normalize_rows(&self, eps: f64) -> DenseMatrix {
        assert!(eps > 0.0, "normalize_rows: eps must be positive");
        let mut out = self.clone();
        for i in 0..self.rows {
            let row = out.row_mut(i);
            let norm = l2_norm(row);
            if norm <= eps {
                row.iter_mut().for_each(|v| *v = 0.0);
            } else {
                row.iter_mut().for_each(|v| *v /= norm);
            }
        }
        out
    }

    /// L2 norm of each row.
    pub fn row_norms(&self) -> Vec<f64> {
        (0..self.rows).map(|i| l2_norm(self.row(i))).collect()
    }

    /// Sum of squared entries (squared Frobenius norm).
    pub fn frobenius_sq(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }

    pub fn scaled(&self, s: f64) -> DenseMatrix {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|v| *v *= s);
        out
    }

    pub fn add(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.shape() != other.shape() {
            return Err(Error::dim("add", self.shape(), other.shape()));
        }
        let mut out = self.clone();
        for (o, b) in out.data.iter_mut().zip(&other.data) {
            *o += b;
        }
        Ok(out)
    }

    /// Max absolute entry difference against another matrix of equal shape.
    pub fn max_abs_diff(&self, other: &DenseMatrix) -> Result<f64> {
        if self.shape() != other.shape() {
            return Err(Error::dim("max_abs_diff", self.shape(), other.shape()));
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

#[inline]
pub fn l2_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Relative pivot tolerance for [`ridge_solve`] and [`solve`]: a pivot whose
/// magnitude falls below `PIVOT_RTOL * max_abs_entry` makes the system
/// singular.
pub const PIVOT_RTOL: f64 = 1e-12;

/// Solve `(gram + gamma * I) X = rhs` by LU factorization with partial
/// pivoting. `gram` must be square with `gram.rows == rhs.rows`; `gamma >= 0`.
pub fn ridge_solve(gram: &DenseMatrix, rhs: &DenseMatrix, gamma: f64) -> Result<DenseMatrix> {
    if gram.rows != gram.cols {
        return Err(Error::NotSquare {
            rows: gram.rows,
            cols: gram.cols,
        });
    }
    if gram.rows != rhs.rows {
        return Err(Error::dim("ridge_solve", gram.shape(), rhs.shape()));
    }
    if gamma < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "ridge_solve: gamma must be >= 0, got {gamma}"
        )));
    }
    let n = gram.rows;
    let mut a = gram.clone();
    for i in 0..n {
        a.data[i * n + i] += gamma;
    }
    solve(&a, rhs)
}

/// Solve `A X = rhs` for a general square `A` by LU with partial pivoting.
pub fn solve(a: &DenseMatrix, rhs: &DenseMatrix) -> Result<DenseMatrix> {
    if a.rows != a.cols {
        return Err(Error::NotSquare {
            rows: a.rows,
            cols: a.cols,
        });
    }
    if a.rows != rhs.rows {
        return Err(Error::dim("solve", a.shape(), rhs.shape()));
    }
    let n = a.rows;
    let k = rhs.cols;
    let mut lu = a.data.clone();
    let mut x = rhs.data.clone();

    let max_abs = lu.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = PIVOT_RTOL * max_abs;

    for col in 0..n {
        // Partial pivot: largest magnitude on or below the diagonal.
        let mut piv = col;
        let mut piv_val = lu[col * n + col].abs();
        for r in col + 1..n {
            let v = lu[r * n + col].abs();
            if v > piv_val {
                piv = r;
                piv_val = v;
            }
        }
        if piv_val <= tol {
            return Err(Error::Singular {
                pivot: piv_val,
                tol,
                col,
            });
        }
        if piv != col {
            for j in 0..n {
                lu.swap(col * n + j, piv * n + j);
            }
            for j in 0..k {
                x.swap(col * k + j, piv * k + j);
            }
        }
        let d = lu[col * n + col];
        for r in col + 1..n {
            let f = lu[r * n + col] / d;
            if f == 0.0 {
                continue;
            }
            lu[r * n + col] = 0.0;
            for j in col + 1..n {
                lu[r * n + j] -= f * lu[col * n + j];
            }
            for j in 0..k {
                x[r * k + j] -= f * x[col * k + j];
            }
        }
    }

    // Back substitution.
    for col in (0..n).rev() {
        let d = lu[col * n + col];
        for j in 0..k {
            x[col * k + j] /= d;
        }
        for r in 0..col {
            let f = lu[r * n + col];
            if f == 0.0 {
                continue;
            }
            for j in 0..k {
                x[r * k + j] -= f * x[col * k + j];
            }
        }
    }

    DenseMatrix::from_vec(n, k, x)
}
