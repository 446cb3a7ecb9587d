//! Block arrowhead matrices with banded blocks, and their reverse Cholesky
//! factorisation.
//!
//! An [`ArrowheadMatrix`] has the block form
//!
//! ```text
//!     [ A0   B_1  B_2  ...          ]
//!     [ C_1  D_11 D_12 ...          ]
//!     [ C_2  D_21 D_22 ...          ]
//!     [ ...                         ]
//! ```
//!
//! where `A0` is an `m x m` banded hat block, the first-row blocks `B_k`
//! (k = 1..=u) and first-column blocks `C_k` (k = 1..=l) are banded `m x n`
//! resp. `n x m`, and every interior block `D_kj` is diagonal. The interior
//! is stored as a direct sum of per-element `nb x nb` banded matrices
//! `D_e` with bandwidths `(l, u)`, interlaced so that block `(k, j)` holds
//! `diag_e(D_e[k, j])`. The total dimension is `m + nb * n`.
//!
//! Eliminating from the bottom-right corner upward gives a factorisation
//! `A = L^T L` whose factor has the same arrowhead shape with nothing in the
//! upper block triangle — no fill-in. The per-element tails factor
//! independently, so that stage parallelises over elements.

use nalgebra::DMatrix;

use crate::banded::BandedMatrix;
use crate::error::{Error, Result};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone)]
pub struct ArrowheadMatrix {
    m: usize,
    n: usize,
    nb: usize,
    lblock: usize,
    ublock: usize,
    lam: usize,
    mu: usize,
    a0: BandedMatrix,
    b_blocks: Vec<BandedMatrix>,
    c_blocks: Vec<BandedMatrix>,
    interior: Vec<BandedMatrix>,
}

impl ArrowheadMatrix {
    /// Assemble from parts. `b_blocks[k]` couples the hats with bubble block
    /// `k` and must be `m x n` with bandwidths within `(lam, mu)`;
    /// `c_blocks[k]` is the mirrored `n x m` coupling within `(mu, lam)`;
    /// `interior[e]` is the `nb x nb` tail of element `e` with bandwidths
    /// within `(lblock, ublock)`.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        m: usize,
        n: usize,
        nb: usize,
        lblock: usize,
        ublock: usize,
        lam: usize,
        mu: usize,
        a0: BandedMatrix,
        b_blocks: Vec<BandedMatrix>,
        c_blocks: Vec<BandedMatrix>,
        interior: Vec<BandedMatrix>,
    ) -> Self {
        assert!(n >= 1 && nb >= 1);
        assert!(ublock <= nb && lblock <= nb, "block bandwidth exceeds blocks");
        assert_eq!(a0.rows(), m);
        assert_eq!(a0.cols(), m);
        assert_eq!(b_blocks.len(), if m == 0 { 0 } else { ublock });
        assert_eq!(c_blocks.len(), if m == 0 { 0 } else { lblock });
        for b in &b_blocks {
            assert!(b.rows() == m && b.cols() == n);
            assert!(b.lower() <= lam && b.upper() <= mu);
        }
        for c in &c_blocks {
            assert!(c.rows() == n && c.cols() == m);
            assert!(c.lower() <= mu && c.upper() <= lam);
        }
        assert_eq!(interior.len(), n);
        for d in &interior {
            assert!(d.rows() == nb && d.cols() == nb);
            assert!(d.lower() <= lblock && d.upper() <= ublock);
        }
        ArrowheadMatrix {
            m,
            n,
            nb,
            lblock,
            ublock,
            lam,
            mu,
            a0,
            b_blocks,
            c_blocks,
            interior,
        }
    }

    pub fn hat_dim(&self) -> usize {
        self.m
    }

    pub fn n_elements(&self) -> usize {
        self.n
    }

    pub fn bubble_blocks(&self) -> usize {
        self.nb
    }

    pub fn block_bandwidths(&self) -> (usize, usize) {
        (self.lblock, self.ublock)
    }

    pub fn sub_bandwidths(&self) -> (usize, usize) {
        (self.lam, self.mu)
    }

    pub fn hat_block(&self) -> &BandedMatrix {
        &self.a0
    }

    pub fn interior(&self, e: usize) -> &BandedMatrix {
        &self.interior[e]
    }

    pub fn dim(&self) -> usize {
        self.m + self.nb * self.n
    }

    /// Global index of tail entry `(block k, element e)`.
    #[inline]
    pub fn tail_index(&self, k: usize, e: usize) -> usize {
        self.m + k * self.n + e
    }

    /// y += A x
    pub fn matvec_add(&self, x: &[f64], y: &mut [f64]) {
        let (m, n) = (self.m, self.n);
        debug_assert_eq!(x.len(), self.dim());
        debug_assert_eq!(y.len(), self.dim());
        if m > 0 {
            self.a0.matvec(&x[..m], &mut y[..m]);
            for (k, b) in self.b_blocks.iter().enumerate() {
                b.matvec(&x[m + k * n..m + (k + 1) * n], &mut y[..m]);
            }
            for (k, c) in self.c_blocks.iter().enumerate() {
                c.matvec(&x[..m], &mut y[m + k * n..m + (k + 1) * n]);
            }
        }
        for (e, d) in self.interior.iter().enumerate() {
            for (i, j, v) in d.iter_entries() {
                y[m + i * n + e] += v * x[m + j * n + e];
            }
        }
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim()];
        self.matvec_add(x, &mut y);
        y
    }

    /// alpha * self + beta * other, with pairwise-maximum bandwidths. Missing
    /// first-row/column blocks on either side count as zero.
    pub fn linear_combination(&self, alpha: f64, beta: f64, other: &ArrowheadMatrix) -> Result<ArrowheadMatrix> {
        if self.m != other.m || self.n != other.n || self.nb != other.nb {
            return Err(Error::DimensionMismatch(format!(
                "incompatible arrowhead structures ({}, {}, {}) vs ({}, {}, {})",
                self.m, self.n, self.nb, other.m, other.n, other.nb
            )));
        }
        let (m, n, nb) = (self.m, self.n, self.nb);
        let lblock = self.lblock.max(other.lblock);
        let ublock = self.ublock.max(other.ublock);
        let lam = self.lam.max(other.lam);
        let mu = self.mu.max(other.mu);

        let mut a0 = BandedMatrix::new(m, m, lam + mu, lam + mu);
        self.a0.add_into(&mut a0, alpha);
        other.a0.add_into(&mut a0, beta);

        let merge = |rows: usize, cols: usize, lo: usize, up: usize, k: usize,
                     xs: &[BandedMatrix], ys: &[BandedMatrix]|
         -> BandedMatrix {
            let mut out = BandedMatrix::new(rows, cols, lo, up);
            if let Some(x) = xs.get(k) {
                x.add_into(&mut out, alpha);
            }
            if let Some(y) = ys.get(k) {
                y.add_into(&mut out, beta);
            }
            out
        };

        let nblocks = if m == 0 { 0 } else { ublock };
        let b_blocks = (0..nblocks)
            .map(|k| merge(m, n, lam, mu, k, &self.b_blocks, &other.b_blocks))
            .collect();
        let nblocks = if m == 0 { 0 } else { lblock };
        let c_blocks = (0..nblocks)
            .map(|k| merge(n, m, mu, lam, k, &self.c_blocks, &other.c_blocks))
            .collect();

        let interior = (0..n)
            .map(|e| {
                let a = &self.interior[e];
                let b = &other.interior[e];
                let mut out = BandedMatrix::new(
                    nb,
                    nb,
                    a.lower().max(b.lower()),
                    a.upper().max(b.upper()),
                );
                a.add_into(&mut out, alpha);
                b.add_into(&mut out, beta);
                out
            })
            .collect();

        Ok(ArrowheadMatrix::new(
            m, n, nb, lblock, ublock, lam, mu, a0, b_blocks, c_blocks, interior,
        ))
    }

    /// self + sigma * other.
    pub fn axpy_shift(&self, sigma: f64, other: &ArrowheadMatrix) -> Result<ArrowheadMatrix> {
        self.linear_combination(1.0, sigma, other)
    }

    pub fn scaled(&self, sigma: f64) -> ArrowheadMatrix {
        let mut out = self.clone();
        out.a0.scale_in_place(sigma);
        for b in &mut out.b_blocks {
            b.scale_in_place(sigma);
        }
        for c in &mut out.c_blocks {
            c.scale_in_place(sigma);
        }
        for d in &mut out.interior {
            d.scale_in_place(sigma);
        }
        out
    }

    /// Exact structural + entrywise symmetry (assembly builds symmetric
    /// storage, so equality is not approximate).
    pub fn is_symmetric(&self) -> bool {
        if self.lblock != self.ublock {
            return false;
        }
        for (b, c) in self.b_blocks.iter().zip(&self.c_blocks) {
            if b.transpose() != *c {
                return false;
            }
        }
        for d in &self.interior {
            for (i, j, v) in d.iter_entries() {
                if d.get(j, i) != v {
                    return false;
                }
            }
        }
        for (i, j, v) in self.a0.iter_entries() {
            if self.a0.get(j, i) != v {
                return false;
            }
        }
        true
    }

    /// Dense bridge for tests and small oracles.
    pub fn to_dense(&self) -> DMatrix<f64> {
        let (m, n) = (self.m, self.n);
        let mut out = DMatrix::zeros(self.dim(), self.dim());
        for (i, j, v) in self.a0.iter_entries() {
            out[(i, j)] = v;
        }
        for (k, b) in self.b_blocks.iter().enumerate() {
            for (i, j, v) in b.iter_entries() {
                out[(i, m + k * n + j)] = v;
            }
        }
        for (k, c) in self.c_blocks.iter().enumerate() {
            for (i, j, v) in c.iter_entries() {
                out[(m + k * n + i, j)] = v;
            }
        }
        for (e, d) in self.interior.iter().enumerate() {
            for (i, j, v) in d.iter_entries() {
                out[(m + i * n + e, m + j * n + e)] = v;
            }
        }
        out
    }

    /// Text dump of the block structure (coordinate triplets), for debugging.
    pub fn write_structure<W: std::io::Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(
            w,
            "%% arrowhead m={} n={} nb={} blocks=({},{}) bands=({},{})",
            self.m, self.n, self.nb, self.lblock, self.ublock, self.lam, self.mu
        )?;
        let d = self.to_dense();
        let nnz = d.iter().filter(|v| **v != 0.0).count();
        writeln!(w, "{} {} {}", self.dim(), self.dim(), nnz)?;
        for j in 0..d.ncols() {
            for i in 0..d.nrows() {
                if d[(i, j)] != 0.0 {
                    writeln!(w, "{} {} {:.17e}", i + 1, j + 1, d[(i, j)])?;
                }
            }
        }
        Ok(())
    }

    /// Reverse Cholesky `A = L^T L` for symmetric positive definite input.
    ///
    /// The interior tails factor element by element; their leading block
    /// inverses correct the first-column blocks and the hat block, which is
    /// then itself factorised. Everything stays inside the declared bands,
    /// and the cost is linear in the dimension.
    pub fn reverse_cholesky(&self) -> Result<ReverseCholesky> {
        debug_assert!(self.is_symmetric(), "reverse Cholesky requires symmetry");
        let (m, n, nb) = (self.m, self.n, self.nb);

        let factor_tail = |(e, d): (usize, &BandedMatrix)| {
            d.reverse_cholesky().map_err(|err| match err {
                Error::NotPositiveDefinite { index, value } => Error::NotPositiveDefinite {
                    index: m + index * n + e,
                    value,
                },
                other => other,
            })
        };
        #[cfg(feature = "parallel")]
        let tails: Vec<BandedMatrix> = self
            .interior
            .par_iter()
            .enumerate()
            .map(factor_tail)
            .collect::<Result<_>>()?;
        #[cfg(not(feature = "parallel"))]
        let tails: Vec<BandedMatrix> = self
            .interior
            .iter()
            .enumerate()
            .map(factor_tail)
            .collect::<Result<_>>()?;

        let mut a0_tilde = BandedMatrix::new(m, m, self.lam + self.mu, self.lam + self.mu);
        self.a0.add_into(&mut a0_tilde, 1.0);

        let lb = self.lblock.min(nb);
        let mut k_blocks = Vec::with_capacity(lb);
        if m > 0 && lb > 0 {
            // Leading lb x lb blocks of the per-element inverse tails, row-major.
            let leads: Vec<Vec<f64>> = tails.iter().map(|t| t.lower_leading_inverse(lb)).collect();
            let mut diag = vec![0.0; n];
            for k in 1..=lb {
                let mut mk = BandedMatrix::new(m, n, self.lam, self.mu);
                for i in k..=lb.min(self.b_blocks.len()) {
                    for (e, lead) in leads.iter().enumerate() {
                        diag[e] = lead[(i - 1) * lb + (k - 1)];
                    }
                    self.b_blocks[i - 1].col_scaled(&diag).add_into(&mut mk, 1.0);
                }
                mk.gram_sub_into(&mut a0_tilde);
                k_blocks.push(mk.transpose());
            }
        }

        let l0 = a0_tilde.reverse_cholesky()?;
        Ok(ReverseCholesky {
            m,
            n,
            nb,
            l0,
            k_blocks,
            tails,
        })
    }
}

/// The factor `L` of `A = L^T L`: lower block triangular with the same
/// arrowhead silhouette as `A` and no upper-triangle blocks.
#[derive(Debug, Clone)]
pub struct ReverseCholesky {
    m: usize,
    n: usize,
    nb: usize,
    l0: BandedMatrix,
    /// First-column blocks of L, one per block bandwidth level.
    k_blocks: Vec<BandedMatrix>,
    /// Per-element lower-triangular tail factors.
    tails: Vec<BandedMatrix>,
}

impl ReverseCholesky {
    pub fn dim(&self) -> usize {
        self.m + self.nb * self.n
    }

    pub fn hat_factor(&self) -> &BandedMatrix {
        &self.l0
    }

    pub fn tail(&self, e: usize) -> &BandedMatrix {
        &self.tails[e]
    }

    /// b <- L^{-1} b (forward substitution through the block triangle).
    pub fn solve_lower(&self, b: &mut [f64]) {
        debug_assert_eq!(b.len(), self.dim());
        let (m, n, nb) = (self.m, self.n, self.nb);
        if m > 0 {
            let (hat, tail) = b.split_at_mut(m);
            self.l0.solve_lower(hat);
            for (k, kb) in self.k_blocks.iter().enumerate() {
                kb.matvec_sub(hat, &mut tail[k * n..(k + 1) * n]);
            }
        }
        let mut tmp = vec![0.0; nb];
        for (e, t) in self.tails.iter().enumerate() {
            for k in 0..nb {
                tmp[k] = b[m + k * n + e];
            }
            t.solve_lower(&mut tmp);
            for k in 0..nb {
                b[m + k * n + e] = tmp[k];
            }
        }
    }

    /// b <- L^{-T} b (backward substitution).
    pub fn solve_upper(&self, b: &mut [f64]) {
        debug_assert_eq!(b.len(), self.dim());
        let (m, n, nb) = (self.m, self.n, self.nb);
        let mut tmp = vec![0.0; nb];
        for (e, t) in self.tails.iter().enumerate() {
            for k in 0..nb {
                tmp[k] = b[m + k * n + e];
            }
            t.solve_lower_t(&mut tmp);
            for k in 0..nb {
                b[m + k * n + e] = tmp[k];
            }
        }
        if m > 0 {
            let (hat, tail) = b.split_at_mut(m);
            for (k, kb) in self.k_blocks.iter().enumerate() {
                kb.matvec_t_sub(&tail[k * n..(k + 1) * n], hat);
            }
            self.l0.solve_lower_t(hat);
        }
    }

    /// b <- A^{-1} b = L^{-1} L^{-T} b.
    pub fn solve(&self, b: &mut [f64]) {
        self.solve_upper(b);
        self.solve_lower(b);
    }

    /// y = L x, for reconstruction tests.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let (m, n, nb) = (self.m, self.n, self.nb);
        let mut y = vec![0.0; self.dim()];
        if m > 0 {
            self.l0.matvec(&x[..m], &mut y[..m]);
            for (k, kb) in self.k_blocks.iter().enumerate() {
                kb.matvec(&x[..m], &mut y[m + k * n..m + (k + 1) * n]);
            }
        }
        let mut tx = vec![0.0; nb];
        let mut ty = vec![0.0; nb];
        for (e, t) in self.tails.iter().enumerate() {
            for k in 0..nb {
                tx[k] = x[m + k * n + e];
                ty[k] = 0.0;
            }
            t.matvec(&tx, &mut ty);
            for k in 0..nb {
                y[m + k * n + e] += ty[k];
            }
        }
        y
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let (m, n) = (self.m, self.n);
        let mut out = DMatrix::zeros(self.dim(), self.dim());
        for (i, j, v) in self.l0.iter_entries() {
            out[(i, j)] = v;
        }
        for (k, kb) in self.k_blocks.iter().enumerate() {
            for (i, j, v) in kb.iter_entries() {
                out[(m + k * n + i, j)] = v;
            }
        }
        for (e, t) in self.tails.iter().enumerate() {
            for (i, j, v) in t.iter_entries() {
                out[(m + i * n + e, m + j * n + e)] = v;
            }
        }
        out
    }
}
