//! Dense row-major matrices and the handful of factorizations the analysis
//! needs: rank with a pivot threshold, Gauss-Jordan inversion, determinants,
//! cofactors and the full-column-rank pseudo-inverse.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::error::{Error, Result};

/// Numerical thresholds shared by every operation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    /// Pivots and weights below this magnitude are treated as zero.
    pub zero_tol: f64,
    /// Convergence threshold for iterations and identity checks.
    pub conv_tol: f64,
    pub max_iter: usize,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            zero_tol: 1e-9,
            conv_tol: 1e-10,
            max_iter: 10_000,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = |x: f64| x.is_finite() && x > 0.0;
        if ok(self.zero_tol) && ok(self.conv_tol) && self.max_iter > 0 {
            Ok(())
        } else {
            Err(Error::InvalidTolerance)
        }
    }

    /// Threshold used when two independent routes to the same quantity are
    /// compared inside the pipeline.
    pub fn agreement(&self) -> f64 {
        1e3 * self.conv_tol
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    /// Builds a matrix from row-major data.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix);
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        if let Some(k) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                row: k / cols,
                col: k % cols,
            });
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::RaggedRows {
                    row: i,
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        DenseMatrix::new(rows.len(), cols, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        DenseMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Single-column matrix.
    pub fn column_vector(values: &[f64]) -> Result<Self> {
        DenseMatrix::new(values.len(), 1, values.to_vec())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<f64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn set_column(&mut self, c: usize, values: &[f64]) {
        assert_eq!(values.len(), self.rows);
        for (r, v) in values.iter().enumerate() {
            self[(r, c)] = *v;
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut t = DenseMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)];
            }
        }
        t
    }

    /// Matrix product. Panics on incompatible shapes.
    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows, "incompatible shapes for product");
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.data[k * other.cols + j];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len(), "incompatible vector length");
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Row vector times matrix: `vᵀ M`.
    pub fn vec_mul(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.rows, v.len(), "incompatible vector length");
        let mut out = vec![0.0; self.cols];
        for (r, &w) in v.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.row(r)) {
                *o += w * a;
            }
        }
        out
    }

    pub fn add(&self, other: &DenseMatrix) -> DenseMatrix {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &DenseMatrix) -> DenseMatrix {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &DenseMatrix, f: impl Fn(f64, f64) -> f64) -> DenseMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(*a, *b)).collect(),
        }
    }

    pub fn scale(&self, k: f64) -> DenseMatrix {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * k).collect(),
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.rows).map(|r| self.row(r).iter().sum()).collect()
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(|a| a.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Sum of squared entries (squared Frobenius norm).
    pub fn frobenius_sq(&self) -> f64 {
        self.data.iter().map(|a| a * a).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.abs()).fold(0.0, f64::max)
    }

    /// Largest entrywise deviation between two matrices of the same shape.
    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.is_square() && self.max_abs_diff(&self.transpose()) <= tol
    }

    /// Submatrix with the given row and column indices, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(rows.len(), cols.len());
        for (a, &r) in rows.iter().enumerate() {
            for (b, &c) in cols.iter().enumerate() {
                out[(a, b)] = self[(r, c)];
            }
        }
        out
    }

    /// Places the columns of `other` to the right of `self`.
    pub fn hstack(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.rows, other.rows);
        let mut out = DenseMatrix::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(r, c)] = self[(r, c)];
            }
            for c in 0..other.cols {
                out[(r, self.cols + c)] = other[(r, c)];
            }
        }
        out
    }

    /// Numerical rank by Gaussian elimination with partial pivoting; columns
    /// whose best pivot is below `zero_tol` are skipped.
    pub fn rank(&self, tol: &ToleranceConfig) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        for c in 0..a.cols {
            if rank == a.rows {
                break;
            }
            let (p, best) = (rank..a.rows)
                .map(|r| (r, a[(r, c)].abs()))
                .fold((rank, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if best < tol.zero_tol {
                continue;
            }
            a.swap_rows(p, rank);
            let pivot = a[(rank, c)];
            for r in rank + 1..a.rows {
                let f = a[(r, c)] / pivot;
                if f != 0.0 {
                    for k in c..a.cols {
                        let v = a[(rank, k)];
                        a[(r, k)] -= f * v;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    /// Gauss-Jordan inverse with partial pivoting.
    pub fn invert(&self, tol: &ToleranceConfig) -> Result<DenseMatrix> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = DenseMatrix::identity(n);
        for c in 0..n {
            let (p, best) = (c..n)
                .map(|r| (r, a[(r, c)].abs()))
                .fold((c, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if best < tol.zero_tol {
                return Err(Error::Singular);
            }
            a.swap_rows(p, c);
            inv.swap_rows(p, c);
            let pivot = a[(c, c)];
            for k in 0..n {
                a[(c, k)] /= pivot;
                inv[(c, k)] /= pivot;
            }
            for r in 0..n {
                if r == c {
                    continue;
                }
                let f = a[(r, c)];
                if f == 0.0 {
                    continue;
                }
                for k in 0..n {
                    let (x, y) = (a[(c, k)], inv[(c, k)]);
                    a[(r, k)] -= f * x;
                    inv[(r, k)] -= f * y;
                }
            }
        }
        Ok(inv)
    }

    /// Determinant via LU with partial pivoting. Panics if not square.
    pub fn determinant(&self) -> f64 {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = 1.0;
        for c in 0..n {
            let (p, best) = (c..n)
                .map(|r| (r, a[(r, c)].abs()))
                .fold((c, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if best == 0.0 {
                return 0.0;
            }
            if p != c {
                a.swap_rows(p, c);
                det = -det;
            }
            let pivot = a[(c, c)];
            det *= pivot;
            for r in c + 1..n {
                let f = a[(r, c)] / pivot;
                if f != 0.0 {
                    for k in c..n {
                        let v = a[(c, k)];
                        a[(r, k)] -= f * v;
                    }
                }
            }
        }
        det
    }

    /// `(-1)^(i+j)` times the minor with row `i` and column `j` removed.
    /// A 1×1 matrix has cofactor 1 (empty minor).
    pub fn cofactor(&self, i: usize, j: usize) -> f64 {
        assert!(self.is_square(), "cofactor of a non-square matrix");
        assert!(i < self.rows && j < self.cols, "cofactor index out of range");
        if self.rows == 1 {
            return 1.0;
        }
        let keep_r: Vec<usize> = (0..self.rows).filter(|&r| r != i).collect();
        let keep_c: Vec<usize> = (0..self.cols).filter(|&c| c != j).collect();
        let minor = self.select(&keep_r, &keep_c).determinant();
        if (i + j).is_multiple_of(2) {
            minor
        } else {
            -minor
        }
    }

    /// `U⁺ = (UᵀU)⁻¹Uᵀ` for a matrix with linearly independent columns.
    pub fn pseudo_inverse_full_column_rank(&self, tol: &ToleranceConfig) -> Result<DenseMatrix> {
        let rank = self.rank(tol);
        if rank < self.cols {
            return Err(Error::RankDeficient {
                rank,
                cols: self.cols,
            });
        }
        let ut = self.transpose();
        let gram = ut.matmul(self);
        let gram_inv = gram.invert(tol).map_err(|_| Error::RankDeficient {
            rank,
            cols: self.cols,
        })?;
        Ok(gram_inv.matmul(&ut))
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    fn index(&self, (r, c): (usize, usize)) -> &f64 {
        assert!(r < self.rows && c < self.cols, "matrix index out of range");
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut f64 {
        assert!(r < self.rows && c < self.cols, "matrix index out of range");
        &mut self.data[r * self.cols + c]
    }
}

/// A validated row-stochastic influence matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticMatrix(DenseMatrix);

impl StochasticMatrix {
    pub fn n(&self) -> usize {
        self.0.rows()
    }

    pub fn as_matrix(&self) -> &DenseMatrix {
        &self.0
    }

    pub fn into_inner(self) -> DenseMatrix {
        self.0
    }
}

impl AsRef<DenseMatrix> for StochasticMatrix {
    fn as_ref(&self) -> &DenseMatrix {
        &self.0
    }
}

/// Accepts `m` iff it is square, nonnegative and every row sums to 1 within
/// `zero_tol`.
pub fn validate_stochastic(m: DenseMatrix, tol: &ToleranceConfig) -> Result<StochasticMatrix> {
    tol.validate()?;
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            let v = m[(r, c)];
            if v < 0.0 {
                return Err(Error::NegativeEntry {
                    row: r,
                    col: c,
                    value: v,
                });
            }
        }
        let sum: f64 = m.row(r).iter().sum();
        if (sum - 1.0).abs() > tol.zero_tol {
            return Err(Error::RowSumViolation { row: r, sum });
        }
    }
    Ok(StochasticMatrix(m))
}

/// Inner product of two vectors of equal length.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `max |a_i - b_i|`.
pub fn max_abs_diff_vec(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
