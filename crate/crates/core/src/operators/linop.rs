//! Explicit matrix operators with dense and compressed sparse row storage.
//!
//! Every forward model and regularization operator in this crate is
//! materialized as an explicit matrix. Small operators (up to
//! [`DENSE_ENTRY_BUDGET`] entries) are stored dense, everything else as CSR.
//! Both storages expose the same `apply` / `apply_transpose` pair and are
//! adjoint by construction: the transpose product reuses the exact same
//! stored entries.

use std::io::{self, Write};

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

/// Operators with `rows * cols` at or below this are stored dense.
pub const DENSE_ENTRY_BUDGET: usize = 500 * 500;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OperatorError {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Compressed sparse row matrix. Column indices within a row follow
/// construction order and are not required to be sorted.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Builds from per-row triplet lists. `row_entries[r]` holds the
    /// `(col, value)` pairs of row `r`; zero values are dropped.
    pub fn from_rows(rows: usize, cols: usize, row_entries: &[Vec<(usize, f64)>]) -> Self {
        assert_eq!(row_entries.len(), rows, "row list length mismatch");
        let mut row_ptr = Vec::with_capacity(rows + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for entries in row_entries {
            for &(c, v) in entries {
                assert!(c < cols, "column index {c} out of bounds ({cols})");
                if v != 0.0 {
                    col_idx.push(c);
                    values.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Self {
            rows,
            cols,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_entries(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let start = self.row_ptr[r];
        let end = self.row_ptr[r + 1];
        self.col_idx[start..end]
            .iter()
            .copied()
            .zip(self.values[start..end].iter().copied())
    }

    pub fn apply(&self, x: &DVector<f64>, out: &mut DVector<f64>) {
        debug_assert_eq!(x.len(), self.cols);
        debug_assert_eq!(out.len(), self.rows);
        for r in 0..self.rows {
            let mut acc = 0.0;
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.values[k] * x[self.col_idx[k]];
            }
            out[r] = acc;
        }
    }

    pub fn apply_transpose(&self, y: &DVector<f64>, out: &mut DVector<f64>) {
        debug_assert_eq!(y.len(), self.rows);
        debug_assert_eq!(out.len(), self.cols);
        out.fill(0.0);
        for r in 0..self.rows {
            let yr = y[r];
            if yr == 0.0 {
                continue;
            }
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                out[self.col_idx[k]] += self.values[k] * yr;
            }
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for (c, v) in self.row_entries(r) {
                m[(r, c)] += v;
            }
        }
        m
    }

    /// Scales row `r` by `factors[r]`, in place.
    pub fn scale_rows(&mut self, factors: &DVector<f64>) {
        assert_eq!(factors.len(), self.rows);
        for r in 0..self.rows {
            let f = factors[r];
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                self.values[k] *= f;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MatrixStorage {
    Dense(DMatrix<f64>),
    Sparse(CsrMatrix),
}

/// A real matrix operator supporting forward and transpose application.
///
/// Adjointness holds by construction: `dot(apply(x), y) == dot(x, apply_transpose(y))`
/// up to roundoff, because both products traverse the same stored entries.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearOperator {
    rows: usize,
    cols: usize,
    storage: MatrixStorage,
}

impl LinearOperator {
    pub fn from_dense(m: DMatrix<f64>) -> Self {
        Self {
            rows: m.nrows(),
            cols: m.ncols(),
            storage: MatrixStorage::Dense(m),
        }
    }

    pub fn from_csr(m: CsrMatrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            storage: MatrixStorage::Sparse(m),
        }
    }

    /// Builds from per-row triplets, choosing dense storage below
    /// [`DENSE_ENTRY_BUDGET`] total entries and CSR above it.
    pub fn from_rows_auto(rows: usize, cols: usize, row_entries: &[Vec<(usize, f64)>]) -> Self {
        let csr = CsrMatrix::from_rows(rows, cols, row_entries);
        if rows.saturating_mul(cols) <= DENSE_ENTRY_BUDGET {
            Self::from_dense(csr.to_dense())
        } else {
            Self::from_csr(csr)
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn storage(&self) -> &MatrixStorage {
        &self.storage
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self.storage, MatrixStorage::Sparse(_))
    }

    pub fn apply(&self, x: &DVector<f64>) -> DVector<f64> {
        assert_eq!(
            x.len(),
            self.cols,
            "apply: vector length {} != cols {}",
            x.len(),
            self.cols
        );
        match &self.storage {
            MatrixStorage::Dense(m) => m * x,
            MatrixStorage::Sparse(m) => {
                let mut out = DVector::zeros(self.rows);
                m.apply(x, &mut out);
                out
            }
        }
    }

    pub fn apply_transpose(&self, y: &DVector<f64>) -> DVector<f64> {
        assert_eq!(
            y.len(),
            self.rows,
            "apply_transpose: vector length {} != rows {}",
            y.len(),
            self.rows
        );
        match &self.storage {
            MatrixStorage::Dense(m) => m.tr_mul(y),
            MatrixStorage::Sparse(m) => {
                let mut out = DVector::zeros(self.cols);
                m.apply_transpose(y, &mut out);
                out
            }
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        match &self.storage {
            MatrixStorage::Dense(m) => m.clone(),
            MatrixStorage::Sparse(m) => m.to_dense(),
        }
    }

    /// Re-realizes the operator with CSR storage (drops explicit zeros).
    pub fn to_sparse(&self) -> Self {
        match &self.storage {
            MatrixStorage::Sparse(_) => self.clone(),
            MatrixStorage::Dense(m) => {
                let rows: Vec<Vec<(usize, f64)>> = (0..m.nrows())
                    .map(|r| {
                        (0..m.ncols())
                            .filter(|&c| m[(r, c)] != 0.0)
                            .map(|c| (c, m[(r, c)]))
                            .collect()
                    })
                    .collect();
                Self::from_csr(CsrMatrix::from_rows(m.nrows(), m.ncols(), &rows))
            }
        }
    }

    /// Returns a copy with row `r` scaled by `factors[r]`.
    pub fn scaled_rows(&self, factors: &DVector<f64>) -> Self {
        assert_eq!(factors.len(), self.rows);
        match &self.storage {
            MatrixStorage::Dense(m) => {
                let mut out = m.clone();
                for r in 0..self.rows {
                    let f = factors[r];
                    out.row_mut(r).scale_mut(f);
                }
                Self::from_dense(out)
            }
            MatrixStorage::Sparse(m) => {
                let mut out = m.clone();
                out.scale_rows(factors);
                Self::from_csr(out)
            }
        }
    }

    /// Writes the operator in Matrix Market coordinate format.
    pub fn write_matrix_market<W: Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(w, "%%MatrixMarket matrix coordinate real general")?;
        match &self.storage {
            MatrixStorage::Sparse(m) => {
                writeln!(w, "{} {} {}", m.rows(), m.cols(), m.nnz())?;
                for r in 0..m.rows() {
                    for (c, v) in m.row_entries(r) {
                        writeln!(w, "{} {} {:.16e}", r + 1, c + 1, v)?;
                    }
                }
            }
            MatrixStorage::Dense(m) => {
                let nnz = m.iter().filter(|&&v| v != 0.0).count();
                writeln!(w, "{} {} {}", m.nrows(), m.ncols(), nnz)?;
                for r in 0..m.nrows() {
                    for c in 0..m.ncols() {
                        let v = m[(r, c)];
                        if v != 0.0 {
                            writeln!(w, "{} {} {:.16e}", r + 1, c + 1, v)?;
                        }
                    }
                }
            }
        }
        Ok(())
    }
}
