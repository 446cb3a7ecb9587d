//! Rectangular banded matrices in column-major band storage.
//!
//! An `m x n` matrix with bandwidths `(lower, upper)` stores entry `(i, j)`
//! only when `j - upper <= i <= j + lower`; everything outside that band is
//! structurally zero. Column `j` occupies a contiguous slice of length
//! `lower + upper + 1`, so per-column kernels (scaling, substitution) touch
//! contiguous memory.

use crate::error::{Error, Result};
use nalgebra::DMatrix;

/// Relative pivot threshold below which a reverse Cholesky pivot is treated
/// as a loss of positive definiteness.
pub const PD_PIVOT_TOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct BandedMatrix {
    rows: usize,
    cols: usize,
    lower: usize,
    upper: usize,
    data: Vec<f64>,
}

impl BandedMatrix {
    pub fn new(rows: usize, cols: usize, lower: usize, upper: usize) -> Self {
        let stride = lower + upper + 1;
        BandedMatrix {
            rows,
            cols,
            lower,
            upper,
            data: vec![0.0; stride * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn lower(&self) -> usize {
        self.lower
    }

    pub fn upper(&self) -> usize {
        self.upper
    }

    #[inline]
    fn stride(&self) -> usize {
        self.lower + self.upper + 1
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        self.stride() * j + (i + self.upper - j)
    }

    #[inline]
    pub fn in_band(&self, i: usize, j: usize) -> bool {
        i < self.rows && j < self.cols && i + self.upper >= j && i <= j + self.lower
    }

    /// Row indices of the structural band of column `j`, clipped to the matrix.
    #[inline]
    pub fn band_rows(&self, j: usize) -> std::ops::Range<usize> {
        let lo = j.saturating_sub(self.upper);
        let hi = (j + self.lower + 1).min(self.rows);
        lo..hi.max(lo)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if self.in_band(i, j) {
            self.data[self.idx(i, j)]
        } else {
            0.0
        }
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(self.in_band(i, j), "({i},{j}) outside band");
        let k = self.idx(i, j);
        self.data[k] = v;
    }

    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(self.in_band(i, j), "({i},{j}) outside band");
        let k = self.idx(i, j);
        self.data[k] += v;
    }

    /// y += A x
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.cols);
        debug_assert_eq!(y.len(), self.rows);
        for j in 0..self.cols {
            let xj = x[j];
            if xj == 0.0 {
                continue;
            }
            for i in self.band_rows(j) {
                y[i] += self.data[self.idx(i, j)] * xj;
            }
        }
    }

    /// y -= A x
    pub fn matvec_sub(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.cols);
        debug_assert_eq!(y.len(), self.rows);
        for j in 0..self.cols {
            let xj = x[j];
            if xj == 0.0 {
                continue;
            }
            for i in self.band_rows(j) {
                y[i] -= self.data[self.idx(i, j)] * xj;
            }
        }
    }

    /// y += A^T x
    pub fn matvec_t(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.rows);
        debug_assert_eq!(y.len(), self.cols);
        for j in 0..self.cols {
            let mut acc = 0.0;
            for i in self.band_rows(j) {
                acc += self.data[self.idx(i, j)] * x[i];
            }
            y[j] += acc;
        }
    }

    /// y -= A^T x
    pub fn matvec_t_sub(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.rows);
        debug_assert_eq!(y.len(), self.cols);
        for j in 0..self.cols {
            let mut acc = 0.0;
            for i in self.band_rows(j) {
                acc += self.data[self.idx(i, j)] * x[i];
            }
            y[j] -= acc;
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.rows, self.cols);
        for j in 0..self.cols {
            for i in self.band_rows(j) {
                out[(i, j)] = self.data[self.idx(i, j)];
            }
        }
        out
    }

    pub fn transpose(&self) -> BandedMatrix {
        let mut out = BandedMatrix::new(self.cols, self.rows, self.upper, self.lower);
        for j in 0..self.cols {
            for i in self.band_rows(j) {
                out.set(j, i, self.data[self.idx(i, j)]);
            }
        }
        out
    }

    pub fn scale_in_place(&mut self, sigma: f64) {
        for v in &mut self.data {
            *v *= sigma;
        }
    }

    pub fn scaled(&self, sigma: f64) -> BandedMatrix {
        let mut out = self.clone();
        out.scale_in_place(sigma);
        out
    }

    /// target += sigma * self. The target band must contain this band.
    pub fn add_into(&self, target: &mut BandedMatrix, sigma: f64) {
        assert_eq!(self.rows, target.rows);
        assert_eq!(self.cols, target.cols);
        assert!(target.lower >= self.lower && target.upper >= self.upper);
        for j in 0..self.cols {
            for i in self.band_rows(j) {
                target.add(i, j, sigma * self.data[self.idx(i, j)]);
            }
        }
    }

    /// A * diag(d), with `d.len() == cols`.
    pub fn col_scaled(&self, d: &[f64]) -> BandedMatrix {
        debug_assert_eq!(d.len(), self.cols);
        let mut out = self.clone();
        let stride = out.stride();
        for j in 0..out.cols {
            for v in &mut out.data[stride * j..stride * (j + 1)] {
                *v *= d[j];
            }
        }
        out
    }

    /// target -= self * self^T, accumulated column by column. The target must
    /// be square with bandwidths at least (lower+upper, lower+upper).
    pub fn gram_sub_into(&self, target: &mut BandedMatrix) {
        assert_eq!(target.rows, self.rows);
        assert_eq!(target.cols, self.rows);
        for e in 0..self.cols {
            let range = self.band_rows(e);
            for i in range.clone() {
                let vi = self.data[self.idx(i, e)];
                if vi == 0.0 {
                    continue;
                }
                for i2 in range.clone() {
                    target.add(i, i2, -vi * self.data[self.idx(i2, e)]);
                }
            }
        }
    }

    /// Reverse Cholesky A = L^T L of a symmetric positive definite banded
    /// matrix with equal bandwidths; L is lower triangular with bandwidths
    /// (lower, 0). Elimination runs from the bottom-right corner, which is
    /// what keeps arrowhead sparsity intact.
    pub fn reverse_cholesky(&self) -> Result<BandedMatrix> {
        assert_eq!(self.rows, self.cols, "reverse Cholesky requires square");
        assert_eq!(self.lower, self.upper, "symmetric banded input expected");
        let s = self.rows;
        let b = self.lower;
        let mut l = BandedMatrix::new(s, s, b, 0);
        let mut max_diag: f64 = 0.0;
        for i in 0..s {
            max_diag = max_diag.max(self.get(i, i).abs());
        }
        let tol = PD_PIVOT_TOL * max_diag;
        for i in (0..s).rev() {
            // S[i,i] = L[i,i]^2 + sum_{j>i} L[j,i]^2
            let mut d = self.get(i, i);
            for j in i + 1..(i + b + 1).min(s) {
                let v = l.get(j, i);
                d -= v * v;
            }
            if !(d > tol) {
                return Err(Error::NotPositiveDefinite { index: i, value: d });
            }
            let lii = d.sqrt();
            l.set(i, i, lii);
            // S[i,k] = L[i,i] L[i,k] + sum_{j>i} L[j,i] L[j,k], k < i
            for k in i.saturating_sub(b)..i {
                let mut v = self.get(i, k);
                for j in i + 1..(k + b + 1).min(s) {
                    v -= l.get(j, i) * l.get(j, k);
                }
                l.set(i, k, v / lii);
            }
        }
        Ok(l)
    }

    /// Solve L y = b in place for lower-triangular banded `self`.
    pub fn solve_lower(&self, b: &mut [f64]) {
        debug_assert_eq!(self.rows, self.cols);
        debug_assert_eq!(self.upper, 0);
        debug_assert_eq!(b.len(), self.rows);
        let bw = self.lower;
        for i in 0..self.rows {
            let mut v = b[i];
            for j in i.saturating_sub(bw)..i {
                v -= self.get(i, j) * b[j];
            }
            b[i] = v / self.get(i, i);
        }
    }

    /// Solve L^T y = b in place for lower-triangular banded `self`.
    pub fn solve_lower_t(&self, b: &mut [f64]) {
        debug_assert_eq!(self.rows, self.cols);
        debug_assert_eq!(self.upper, 0);
        debug_assert_eq!(b.len(), self.rows);
        let bw = self.lower;
        for i in (0..self.rows).rev() {
            let mut v = b[i];
            for j in i + 1..(i + bw + 1).min(self.rows) {
                v -= self.get(j, i) * b[j];
            }
            b[i] = v / self.get(i, i);
        }
    }

    /// Row-major `l x l` inverse of the leading block of a lower-triangular
    /// banded matrix (the block inverse is itself lower triangular).
    pub fn lower_leading_inverse(&self, l: usize) -> Vec<f64> {
        debug_assert_eq!(self.upper, 0);
        debug_assert!(l <= self.rows);
        let mut t = vec![0.0; l * l];
        for j in 0..l {
            for r in j..l {
                let mut v = if r == j { 1.0 } else { 0.0 };
                for q in j..r {
                    v -= self.get(r, q) * t[q * l + j];
                }
                t[r * l + j] = v / self.get(r, r);
            }
        }
        t
    }

    /// Structural nonzeros (i, j, value), column by column.
    pub fn iter_entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.cols).flat_map(move |j| {
            self.band_rows(j)
                .map(move |i| (i, j, self.data[self.idx(i, j)]))
        })
    }
}
