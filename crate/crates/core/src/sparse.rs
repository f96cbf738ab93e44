//! Compressed sparse row matrices.
//!
//! Assembly produces (row, col, value) triplets in deterministic element
//! order; [`SparseMatrix::from_triplets`] merges duplicates with a stable
//! sort, so identical inputs always yield bit-identical matrices.

use crate::{Error, Result};

/// Sparse matrix in CSR form. Column indices are strictly increasing within
/// each row and duplicate `(row, col)` pairs are merged at construction;
/// explicit zeros are kept.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    /// Builds a matrix from triplets, summing duplicates.
    pub fn from_triplets(rows: usize, cols: usize, triplets: &[(usize, usize, f64)]) -> Self {
        let mut entries: Vec<(usize, usize, f64)> = triplets.to_vec();
        for &(r, c, _) in &entries {
            assert!(r < rows && c < cols, "triplet ({r}, {c}) out of bounds");
        }
        entries.sort_by_key(|&(r, c, _)| (r, c));

        let mut entry_rows = Vec::with_capacity(entries.len());
        let mut col_idx = Vec::with_capacity(entries.len());
        let mut values = Vec::with_capacity(entries.len());
        for &(r, c, v) in &entries {
            if entry_rows.last() == Some(&r) && col_idx.last() == Some(&c) {
                *values.last_mut().unwrap() += v;
            } else {
                entry_rows.push(r);
                col_idx.push(c);
                values.push(v);
            }
        }
        let mut row_ptr = vec![0usize; rows + 1];
        for &r in &entry_rows {
            row_ptr[r + 1] += 1;
        }
        for i in 0..rows {
            row_ptr[i + 1] += row_ptr[i];
        }
        Self {
            rows,
            cols,
            row_ptr,
            col_idx,
            values,
        }
    }

    /// Identity matrix of size `n`.
    pub fn identity(n: usize) -> Self {
        Self {
            rows: n,
            cols: n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            values: vec![1.0; n],
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

    /// Iterates stored entries as `(row, col, value)` in CSR order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.rows).flat_map(move |r| {
            (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |k| (r, self.col_idx[k], self.values[k]))
        })
    }

    /// `y = A x`.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols, "matvec dimension mismatch");
        let mut y = vec![0.0; self.rows];
        for r in 0..self.rows {
            let mut acc = 0.0;
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.values[k] * x[self.col_idx[k]];
            }
            y[r] = acc;
        }
        y
    }

    /// `y = Aᵀ x`.
    pub fn matvec_transpose(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.rows, "matvec_transpose dimension mismatch");
        let mut y = vec![0.0; self.cols];
        for r in 0..self.rows {
            let xr = x[r];
            if xr == 0.0 {
                continue;
            }
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                y[self.col_idx[k]] += self.values[k] * xr;
            }
        }
        y
    }

    /// `xᵀ A y` without forming intermediates.
    pub fn quadratic_form(&self, x: &[f64], y: &[f64]) -> f64 {
        assert_eq!(x.len(), self.rows);
        assert_eq!(y.len(), self.cols);
        let mut acc = 0.0;
        for r in 0..self.rows {
            let mut row_acc = 0.0;
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                row_acc += self.values[k] * y[self.col_idx[k]];
            }
            acc += x[r] * row_acc;
        }
        acc
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut counts = vec![0usize; self.cols + 1];
        for &c in &self.col_idx {
            counts[c + 1] += 1;
        }
        for i in 0..self.cols {
            counts[i + 1] += counts[i];
        }
        let row_ptr = counts.clone();
        let mut col_idx = vec![0usize; self.nnz()];
        let mut values = vec![0.0; self.nnz()];
        let mut next = counts;
        for r in 0..self.rows {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                let c = self.col_idx[k];
                let slot = next[c];
                next[c] += 1;
                col_idx[slot] = r;
                values[slot] = self.values[k];
            }
        }
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            row_ptr,
            col_idx,
            values,
        }
    }

    /// Sparse-sparse product `A * B` with sorted rows.
    pub fn matmul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let n = other.cols;
        let mut row_ptr = Vec::with_capacity(self.rows + 1);
        row_ptr.push(0);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        let mut acc = vec![0.0; n];
        let mut touched: Vec<usize> = Vec::new();
        for r in 0..self.rows {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                let a = self.values[k];
                let mid = self.col_idx[k];
                for j in other.row_ptr[mid]..other.row_ptr[mid + 1] {
                    let c = other.col_idx[j];
                    if acc[c] == 0.0 && !touched.contains(&c) {
                        touched.push(c);
                    }
                    acc[c] += a * other.values[j];
                }
            }
            touched.sort_unstable();
            for &c in &touched {
                col_idx.push(c);
                values.push(acc[c]);
                acc[c] = 0.0;
            }
            touched.clear();
            row_ptr.push(col_idx.len());
        }
        SparseMatrix {
            rows: self.rows,
            cols: n,
            row_ptr,
            col_idx,
            values,
        }
    }

    /// Submatrix with the given rows and columns, in the given order.
    pub fn restrict(&self, row_ids: &[usize], col_ids: &[usize]) -> SparseMatrix {
        let mut col_map = vec![usize::MAX; self.cols];
        for (slot, &c) in col_ids.iter().enumerate() {
            col_map[c] = slot;
        }
        let mut row_ptr = Vec::with_capacity(row_ids.len() + 1);
        row_ptr.push(0);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        for &r in row_ids {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                let c = col_map[self.col_idx[k]];
                if c != usize::MAX {
                    col_idx.push(c);
                    values.push(self.values[k]);
                }
            }
            // col_ids ascending keeps entries sorted; enforce regardless
            let start = row_ptr[row_ptr.len() - 1];
            let mut pairs: Vec<(usize, f64)> = col_idx[start..]
                .iter()
                .copied()
                .zip(values[start..].iter().copied())
                .collect();
            pairs.sort_by_key(|&(c, _)| c);
            for (i, (c, v)) in pairs.into_iter().enumerate() {
                col_idx[start + i] = c;
                values[start + i] = v;
            }
            row_ptr.push(col_idx.len());
        }
        SparseMatrix {
            rows: row_ids.len(),
            cols: col_ids.len(),
            row_ptr,
            col_idx,
            values,
        }
    }

    /// Largest absolute entry; 0 for an empty matrix.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `max |A - Aᵀ|`, the absolute symmetry defect.
    pub fn symmetry_defect(&self) -> f64 {
        assert_eq!(self.rows, self.cols);
        let t = self.transpose();
        let mut defect: f64 = 0.0;
        for r in 0..self.rows {
            let mut ka = self.row_ptr[r];
            let mut kb = t.row_ptr[r];
            let (ea, eb) = (self.row_ptr[r + 1], t.row_ptr[r + 1]);
            while ka < ea || kb < eb {
                let ca = if ka < ea { self.col_idx[ka] } else { usize::MAX };
                let cb = if kb < eb { t.col_idx[kb] } else { usize::MAX };
                if ca == cb {
                    defect = defect.max((self.values[ka] - t.values[kb]).abs());
                    ka += 1;
                    kb += 1;
                } else if ca < cb {
                    defect = defect.max(self.values[ka].abs());
                    ka += 1;
                } else {
                    defect = defect.max(t.values[kb].abs());
                    kb += 1;
                }
            }
        }
        defect
    }

    /// Dense copy, for small oracles and diagnostics.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut dense = vec![vec![0.0; self.cols]; self.rows];
        for (r, c, v) in self.entries() {
            dense[r][c] += v;
        }
        dense
    }

    pub(crate) fn require_square(&self) -> Result<()> {
        if self.rows != self.cols {
            return Err(Error::InvalidInput(format!(
                "expected square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        Ok(())
    }
}
