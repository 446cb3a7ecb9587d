//! Multi-element operator assembly on 1D meshes: conversion to piecewise
//! Legendre coefficients, weak derivative, mass and weak Laplacian, and load
//! vectors. All operators use the shared degree-major, element-minor
//! interlacing of [`crate::mesh::Space1D`].

use crate::arrowhead::ArrowheadMatrix;
use crate::banded::BandedMatrix;
use crate::basis::{reference_mass_bubble, reference_weak_laplacian};
use crate::error::{Error, Result};
use crate::mesh::Space1D;

/// A block map from interlaced hat/bubble coefficients to interlaced
/// piecewise-Legendre coefficient blocks (size-`n` block per degree).
///
/// Hat columns enter through banded `n x m` blocks at a few low block rows;
/// each bubble block contributes two diagonals. This covers both the
/// conversion map and the weak derivative.
#[derive(Debug, Clone)]
pub struct PiecewiseMap {
    n: usize,
    m: usize,
    nb: usize,
    out_blocks: usize,
    /// (block row, hat coupling block).
    hat_blocks: Vec<(usize, BandedMatrix)>,
    /// (block row, bubble block, per-element diagonal).
    bubble_diags: Vec<(usize, usize, Vec<f64>)>,
}

impl PiecewiseMap {
    pub fn in_dim(&self) -> usize {
        self.m + self.nb * self.n
    }

    pub fn out_dim(&self) -> usize {
        self.out_blocks * self.n
    }

    pub fn out_blocks(&self) -> usize {
        self.out_blocks
    }

    pub fn n_elements(&self) -> usize {
        self.n
    }

    /// w = map(v), interlaced Legendre blocks.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        debug_assert_eq!(v.len(), self.in_dim());
        let (m, n) = (self.m, self.n);
        let mut w = vec![0.0; self.out_dim()];
        for (br, h) in &self.hat_blocks {
            h.matvec(&v[..m], &mut w[br * n..(br + 1) * n]);
        }
        for (br, bj, d) in &self.bubble_diags {
            for e in 0..n {
                w[br * n + e] += d[e] * v[m + bj * n + e];
            }
        }
        w
    }

    /// v = map^T(w).
    pub fn apply_transpose(&self, w: &[f64]) -> Vec<f64> {
        debug_assert_eq!(w.len(), self.out_dim());
        let (m, n) = (self.m, self.n);
        let mut v = vec![0.0; self.in_dim()];
        for (br, h) in &self.hat_blocks {
            h.matvec_t(&w[br * n..(br + 1) * n], &mut v[..m]);
        }
        for (br, bj, d) in &self.bubble_diags {
            for e in 0..n {
                v[m + bj * n + e] += d[e] * w[br * n + e];
            }
        }
        v
    }

    /// Apply the map to every column of a matrix.
    pub fn apply_columns(&self, x: &nalgebra::DMatrix<f64>) -> nalgebra::DMatrix<f64> {
        assert_eq!(x.nrows(), self.in_dim(), "column length");
        let mut out = nalgebra::DMatrix::zeros(self.out_dim(), x.ncols());
        for j in 0..x.ncols() {
            let col: Vec<f64> = x.column(j).iter().copied().collect();
            out.column_mut(j).copy_from_slice(&self.apply(&col));
        }
        out
    }

    /// Apply the transposed map to every column of a matrix.
    pub fn apply_transpose_columns(&self, x: &nalgebra::DMatrix<f64>) -> nalgebra::DMatrix<f64> {
        assert_eq!(x.nrows(), self.out_dim(), "column length");
        let mut out = nalgebra::DMatrix::zeros(self.in_dim(), x.ncols());
        for j in 0..x.ncols() {
            let col: Vec<f64> = x.column(j).iter().copied().collect();
            out.column_mut(j).copy_from_slice(&self.apply_transpose(&col));
        }
        out
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let mut out = nalgebra::DMatrix::zeros(self.out_dim(), self.in_dim());
        for j in 0..self.in_dim() {
            let mut v = vec![0.0; self.in_dim()];
            v[j] = 1.0;
            let w = self.apply(&v);
            for i in 0..self.out_dim() {
                out[(i, j)] = w[i];
            }
        }
        out
    }
}

/// Banded hat block with rows `(left, right)` placed at the kept hat columns
/// of each element. Bandwidths are `(dl, 1 - dl)` by construction.
fn hat_coupling(space: &Space1D, vals: impl Fn(usize) -> (f64, f64)) -> BandedMatrix {
    let n = space.n_elements();
    let m = space.hat_count();
    let dl = usize::from(!space.bc().keep_left());
    let mut h = BandedMatrix::new(n, m, dl, 1 - dl);
    for e in 0..n {
        let (left, right) = vals(e);
        if e >= dl {
            h.set(e, e - dl, left);
        }
        if e + 1 - dl < m {
            h.set(e, e + 1 - dl, right);
        }
    }
    h
}

/// Conversion from hat/bubble coefficients to piecewise-Legendre
/// coefficients, `p + 1` output blocks. Hat entries are mesh-independent;
/// bubble `j` scatters `±1/(2j+3)` onto blocks `j` and `j+2`.
pub fn conversion_matrix(space: &Space1D) -> PiecewiseMap {
    let n = space.n_elements();
    let p = space.degree();
    let hat_blocks = vec![
        (0, hat_coupling(space, |_| (0.5, 0.5))),
        (1, hat_coupling(space, |_| (-0.5, 0.5))),
    ];
    let mut bubble_diags = Vec::with_capacity(2 * (p - 1));
    for j in 0..p - 1 {
        let c = 1.0 / (2 * j + 3) as f64;
        bubble_diags.push((j, j, vec![c; n]));
        bubble_diags.push((j + 2, j, vec![-c; n]));
    }
    PiecewiseMap {
        n,
        m: space.hat_count(),
        nb: p - 1,
        out_blocks: p + 1,
        hat_blocks,
        bubble_diags,
    }
}

/// Weak derivative map onto `p` piecewise-Legendre blocks: hat rows
/// `(-1/δ_e, 1/δ_e)` on block 0, bubble `j` sends `-2/δ_e` to block `j+1`.
pub fn derivative_matrix(space: &Space1D) -> PiecewiseMap {
    let n = space.n_elements();
    let p = space.degree();
    let widths = space.mesh().widths();
    let hat_blocks = vec![(
        0,
        hat_coupling(space, |e| (-1.0 / widths[e], 1.0 / widths[e])),
    )];
    let mut bubble_diags = Vec::with_capacity(p - 1);
    for j in 0..p - 1 {
        bubble_diags.push((j + 1, j, widths.iter().map(|d| -2.0 / d).collect()));
    }
    PiecewiseMap {
        n,
        m: space.hat_count(),
        nb: p - 1,
        out_blocks: p,
        hat_blocks,
        bubble_diags,
    }
}

/// Interlaced diagonal of the piecewise-Legendre mass: block `k`, element `e`
/// holds `(δ_e/2) · 2/(2k+1)`, for `p + 1` blocks.
pub fn legendre_mass_diagonal(space: &Space1D) -> Vec<f64> {
    let n = space.n_elements();
    let p = space.degree();
    let widths = space.mesh().widths();
    let mut d = vec![0.0; (p + 1) * n];
    for k in 0..=p {
        for e in 0..n {
            d[k * n + e] = widths[e] / (2 * k + 1) as f64;
        }
    }
    d
}

/// Bandwidths of the hat-bubble coupling blocks: `(1 - dl, dl)`.
fn sub_bandwidths(space: &Space1D) -> (usize, usize) {
    let dl = usize::from(!space.bc().keep_left());
    (1 - dl, dl)
}

/// Mass matrix `⟨u, v⟩`. Hats couple only to the first two bubble blocks;
/// the interior is the pentadiagonal per-element bubble mass.
pub fn mass(space: &Space1D) -> ArrowheadMatrix {
    let n = space.n_elements();
    let p = space.degree();
    let nb = p - 1;
    let m = space.hat_count();
    let (lam, mu) = sub_bandwidths(space);
    let widths = space.mesh().widths();
    let block_bw = 2.min(nb);

    let mut a0 = BandedMatrix::new(m, m, lam + mu, lam + mu);
    for i in 0..m {
        let ib = space.hat_breakpoint(i);
        let left = if ib > 0 { widths[ib - 1] } else { 0.0 };
        let right = if ib < n { widths[ib] } else { 0.0 };
        a0.set(i, i, (left + right) / 3.0);
        if i + 1 < m {
            a0.set(i, i + 1, widths[ib] / 6.0);
            a0.set(i + 1, i, widths[ib] / 6.0);
        }
    }

    let mut b_blocks = Vec::new();
    if m > 0 {
        // ⟨hat, W_0⟩ = δ/6 both sides; ⟨hat, W_1⟩ = ∓δ/30; zero beyond.
        b_blocks.push(hat_coupling(space, |e| (widths[e] / 6.0, widths[e] / 6.0)).transpose());
        if block_bw >= 2 {
            b_blocks
                .push(hat_coupling(space, |e| (-widths[e] / 30.0, widths[e] / 30.0)).transpose());
        }
    }
    let c_blocks: Vec<BandedMatrix> = b_blocks.iter().map(BandedMatrix::transpose).collect();

    let mw = reference_mass_bubble(p);
    let interior = widths.iter().map(|d| mw.scaled(d / 2.0)).collect();

    ArrowheadMatrix::new(
        m, n, nb, block_bw, block_bw, lam, mu, a0, b_blocks, c_blocks, interior,
    )
}

/// Weak Laplacian `⟨u', v'⟩`. Bubble derivatives are orthogonal to the
/// (piecewise-constant) hat derivatives, so there is no arrow coupling and
/// the interior is diagonal.
pub fn laplacian(space: &Space1D) -> ArrowheadMatrix {
    let n = space.n_elements();
    let p = space.degree();
    let nb = p - 1;
    let m = space.hat_count();
    let (lam, mu) = sub_bandwidths(space);
    let widths = space.mesh().widths();

    let mut a0 = BandedMatrix::new(m, m, lam + mu, lam + mu);
    for i in 0..m {
        let ib = space.hat_breakpoint(i);
        let left = if ib > 0 { 1.0 / widths[ib - 1] } else { 0.0 };
        let right = if ib < n { 1.0 / widths[ib] } else { 0.0 };
        a0.set(i, i, left + right);
        if i + 1 < m {
            a0.set(i, i + 1, -1.0 / widths[ib]);
            a0.set(i + 1, i, -1.0 / widths[ib]);
        }
    }

    let reference = reference_weak_laplacian(p);
    let interior = widths
        .iter()
        .map(|d| {
            let mut t = BandedMatrix::new(nb, nb, 0, 0);
            for (k, r) in reference.iter().enumerate() {
                t.set(k, k, 2.0 / d * r);
            }
            t
        })
        .collect();

    ArrowheadMatrix::new(
        m,
        n,
        nb,
        0,
        0,
        lam,
        mu,
        a0,
        Vec::new(),
        Vec::new(),
        interior,
    )
}

/// The assembled operator family of a 1D space, including the half-shifted
/// combination used by the alternating-direction 2D solver.
#[derive(Debug, Clone)]
pub struct Operators1D {
    pub space: Space1D,
    pub laplacian: ArrowheadMatrix,
    pub mass: ArrowheadMatrix,
    pub conversion: PiecewiseMap,
    pub derivative: PiecewiseMap,
    /// Interlaced piecewise-Legendre mass diagonal, `p + 1` blocks.
    pub legendre_mass: Vec<f64>,
    /// `Δ + (ω²/2) M`.
    pub shifted: ArrowheadMatrix,
    pub omega: f64,
}

/// Assemble all 1D operators plus the half-shifted `Δ + (ω²/2)M`.
///
/// With no Dirichlet hat dropped anywhere the unshifted operator is only
/// semidefinite, so `ω = 0` is rejected for the full basis.
pub fn assemble_operators(space: &Space1D, omega: f64) -> Result<Operators1D> {
    if !(omega >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "omega must be nonnegative, got {omega}"
        )));
    }
    if omega == 0.0 && space.bc().keep_left() && space.bc().keep_right() {
        return Err(Error::InvalidParameter(
            "omega = 0 with the full basis leaves constants in the kernel; \
             use a Dirichlet side or omega > 0"
                .into(),
        ));
    }
    let lap = laplacian(space);
    let mas = mass(space);
    let shifted = lap.axpy_shift(omega * omega / 2.0, &mas)?;
    Ok(Operators1D {
        space: space.clone(),
        laplacian: lap,
        mass: mas,
        conversion: conversion_matrix(space),
        derivative: derivative_matrix(space),
        legendre_mass: legendre_mass_diagonal(space),
        shifted,
        omega,
    })
}

/// Load vector `Rᵀ M_P f` for `f` given as interlaced piecewise-Legendre
/// coefficients. Any number of whole blocks is accepted; blocks beyond
/// degree `p` are orthogonal to the space and drop out.
pub fn assemble_rhs_1d(space: &Space1D, f_leg: &[f64]) -> Result<Vec<f64>> {
    let n = space.n_elements();
    let p = space.degree();
    if f_leg.len() % n != 0 {
        return Err(Error::DimensionMismatch(format!(
            "piecewise coefficient length {} is not a multiple of {n} elements",
            f_leg.len()
        )));
    }
    let blocks = (f_leg.len() / n).min(p + 1);
    let diag = legendre_mass_diagonal(space);
    let mut w = vec![0.0; (p + 1) * n];
    for i in 0..blocks * n {
        w[i] = diag[i] * f_leg[i];
    }
    Ok(conversion_matrix(space).apply_transpose(&w))
}
