//! Value ↔ coefficient transforms on piecewise Chebyshev grids: DCT-based
//! Chebyshev analysis per element, the exact (triangular) Chebyshev ↔
//! Legendre conversion, and the tensor-product 2D maps built from them.
//!
//! Values vectors are element-major in ascending physical order; coefficient
//! vectors are interlaced degree-major, the same layout the assembly module
//! uses. The Chebyshev–Legendre conversion is applied directly at O(p²) per
//! element; the module boundary admits a drop-in fast transform.

use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::adi::{for_each_column_pair, Mat};
use crate::assembly::PiecewiseMap;
use crate::error::{Error, Result};
use crate::mesh::Mesh1D;

/// First-kind Chebyshev points in ascending order. The grid is open (no
/// ±1) and exactly odd-symmetric about 0.
pub fn cheb_points(p: usize) -> Vec<f64> {
    assert!(p >= 1, "need at least one point");
    let mut x = vec![0.0; p];
    for i in 0..p / 2 {
        // 2i + 1 - p < 0 here, so this is the negative half
        let v = (std::f64::consts::PI * (2 * i + 1) as f64 / (2 * p) as f64
            - std::f64::consts::FRAC_PI_2)
            .sin();
        x[i] = v;
        x[p - 1 - i] = -v;
    }
    // the midpoint of an odd count is exactly 0: sin(0)
    x
}

/// Fejér first-rule weights for the `q`-point first-kind grid: positive,
/// exactly symmetric, and summing to 2. Interpolatory, so exact for
/// polynomials of degree < q.
pub fn fejer1_weights(q: usize) -> Vec<f64> {
    assert!(q >= 1, "need at least one point");
    let mut w = vec![0.0; q];
    for j in 0..(q + 1) / 2 {
        let theta = std::f64::consts::PI * (2 * j + 1) as f64 / (2 * q) as f64;
        let mut s = 0.0;
        for m in 1..=q / 2 {
            s += (2.0 * m as f64 * theta).cos() / ((4 * m * m - 1) as f64);
        }
        let v = 2.0 / q as f64 * (1.0 - 2.0 * s);
        w[j] = v;
        w[q - 1 - j] = v;
    }
    w
}

/// Unnormalised DCT-II and its exact inverse, via a complex FFT of the
/// even/odd reordering. `forward(y)[k] = Σ_j y_j cos(πk(2j+1)/(2p))`.
#[derive(Clone)]
pub struct Dct {
    p: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Dct {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Dct").field("p", &self.p).finish()
    }
}

impl Dct {
    pub fn new(p: usize) -> Self {
        assert!(p >= 1);
        let mut planner = FftPlanner::new();
        Dct {
            p,
            fwd: planner.plan_fft_forward(p),
            inv: planner.plan_fft_inverse(p),
        }
    }

    pub fn len(&self) -> usize {
        self.p
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn forward(&self, y: &[f64]) -> Vec<f64> {
        let p = self.p;
        debug_assert_eq!(y.len(), p);
        // even indices ascending, then odd indices descending
        let mut buf = vec![Complex::new(0.0, 0.0); p];
        for j in 0..p.div_ceil(2) {
            buf[j] = Complex::new(y[2 * j], 0.0);
        }
        for j in 0..p / 2 {
            buf[p - 1 - j] = Complex::new(y[2 * j + 1], 0.0);
        }
        self.fwd.process(&mut buf);
        let mut out = vec![0.0; p];
        for (k, o) in out.iter_mut().enumerate() {
            let theta = std::f64::consts::FRAC_PI_2 * k as f64 / p as f64;
            *o = theta.cos() * buf[k].re + theta.sin() * buf[k].im;
        }
        out
    }

    /// Exact functional inverse of [`Dct::forward`].
    pub fn inverse(&self, x: &[f64]) -> Vec<f64> {
        let p = self.p;
        debug_assert_eq!(x.len(), p);
        // undo the twiddle using the conjugate symmetry of the first stage
        let mut buf = vec![Complex::new(0.0, 0.0); p];
        buf[0] = Complex::new(x[0], 0.0);
        for k in 1..p {
            let theta = std::f64::consts::FRAC_PI_2 * k as f64 / p as f64;
            buf[k] = Complex::new(theta.cos(), theta.sin()) * Complex::new(x[k], -x[p - k]);
        }
        self.inv.process(&mut buf);
        let scale = 1.0 / p as f64;
        let mut y = vec![0.0; p];
        for j in 0..p.div_ceil(2) {
            y[2 * j] = buf[j].re * scale;
        }
        for j in 0..p / 2 {
            y[2 * j + 1] = buf[p - 1 - j].re * scale;
        }
        y
    }
}

/// Direct O(p²) DCT-II, used to cross-check the FFT path.
pub fn dct2_direct(y: &[f64]) -> Vec<f64> {
    let p = y.len();
    let mut out = vec![0.0; p];
    for (k, o) in out.iter_mut().enumerate() {
        *o = y
            .iter()
            .enumerate()
            .map(|(j, v)| {
                v * (std::f64::consts::PI * k as f64 * (2 * j + 1) as f64 / (2 * p) as f64).cos()
            })
            .sum();
    }
    out
}

/// Upper-triangular Legendre→Chebyshev coefficient conversion, dense p×p
/// row-major. Entry (m, n) for n ≥ m with n - m even is
/// `(2 - δ_{m0})/π · Λ((n-m)/2) Λ((n+m)/2)` with `Λ(j) = Γ(j+1/2)/Γ(j+1)`.
fn leg2cheb_matrix(p: usize) -> Vec<f64> {
    // Λ(j) by recurrence from Λ(0) = √π
    let mut lam = vec![0.0; p + 1];
    lam[0] = std::f64::consts::PI.sqrt();
    for j in 0..p {
        lam[j + 1] = lam[j] * (j as f64 + 0.5) / (j as f64 + 1.0);
    }
    let mut mat = vec![0.0; p * p];
    for m in 0..p {
        for n in (m..p).step_by(2) {
            let scale = if m == 0 { 1.0 } else { 2.0 } / std::f64::consts::PI;
            mat[m * p + n] = scale * lam[(n - m) / 2] * lam[(n + m) / 2];
        }
    }
    mat
}

/// Per-axis transform plan: mesh, grid, DCT machinery, and conversion data.
/// Immutable after construction; application is data-parallel per column.
#[derive(Debug, Clone)]
pub struct TransformPlan {
    mesh: Mesh1D,
    n: usize,
    p: usize,
    grid: Vec<f64>,
    dct: Dct,
    leg2cheb: Vec<f64>,
}

impl TransformPlan {
    /// `p` is the number of points per element, which equals the number of
    /// coefficient blocks the plan transforms (degrees 0..p-1).
    pub fn new(mesh: Mesh1D, p: usize) -> Result<Self> {
        if p < 1 {
            return Err(Error::InvalidParameter(
                "need at least one point per element".into(),
            ));
        }
        let n = mesh.n_elements();
        let reference = cheb_points(p);
        let mut grid = Vec::with_capacity(p * n);
        for e in 0..n {
            for t in &reference {
                grid.push(mesh.to_physical(e, *t));
            }
        }
        Ok(TransformPlan {
            mesh,
            n,
            p,
            grid,
            dct: Dct::new(p),
            leg2cheb: leg2cheb_matrix(p),
        })
    }

    pub fn mesh(&self) -> &Mesh1D {
        &self.mesh
    }

    pub fn n_elements(&self) -> usize {
        self.n
    }

    pub fn points_per_element(&self) -> usize {
        self.p
    }

    pub fn n_points(&self) -> usize {
        self.p * self.n
    }

    /// Physical grid, element-major and ascending.
    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    /// Physical Fejér quadrature weights on the grid (reference weights
    /// scaled by each element's half-width).
    pub fn quadrature_weights(&self) -> Vec<f64> {
        let wr = fejer1_weights(self.p);
        let mut w = Vec::with_capacity(self.n_points());
        for e in 0..self.n {
            let half = 0.5 * self.mesh.width(e);
            w.extend(wr.iter().map(|v| v * half));
        }
        w
    }

    /// Chebyshev coefficients of one element's values (ascending grid).
    fn cheb_from_values(&self, vals: &[f64]) -> Vec<f64> {
        let p = self.p;
        let rev: Vec<f64> = vals.iter().rev().copied().collect();
        let mut c = self.dct.forward(&rev);
        c[0] /= p as f64;
        for v in c.iter_mut().skip(1) {
            *v *= 2.0 / p as f64;
        }
        c
    }

    fn values_from_cheb(&self, cheb: &[f64]) -> Vec<f64> {
        let p = self.p;
        let mut x = cheb.to_vec();
        x[0] *= p as f64;
        for v in x.iter_mut().skip(1) {
            *v *= p as f64 / 2.0;
        }
        let mut vals = self.dct.inverse(&x);
        vals.reverse();
        vals
    }

    /// Grid values → interlaced piecewise-Legendre coefficients.
    pub fn analysis_1d(&self, values: &[f64]) -> Result<Vec<f64>> {
        if values.len() != self.n_points() {
            return Err(Error::DimensionMismatch(format!(
                "expected {} grid values, got {}",
                self.n_points(),
                values.len()
            )));
        }
        let (p, n) = (self.p, self.n);
        let mut out = vec![0.0; p * n];
        for e in 0..n {
            let cheb = self.cheb_from_values(&values[e * p..(e + 1) * p]);
            // back-substitute the upper-triangular conversion
            let mut leg = cheb;
            for k in (0..p).rev() {
                let mut s = leg[k];
                for j in ((k + 2)..p).step_by(2) {
                    s -= self.leg2cheb[k * p + j] * leg[j];
                }
                leg[k] = s / self.leg2cheb[k * p + k];
            }
            for (k, v) in leg.iter().enumerate() {
                out[k * n + e] = *v;
            }
        }
        Ok(out)
    }

    /// Interlaced piecewise-Legendre coefficients → grid values; exact
    /// inverse path of [`TransformPlan::analysis_1d`].
    pub fn synthesis_1d(&self, coeffs: &[f64]) -> Result<Vec<f64>> {
        if coeffs.len() != self.n_points() {
            return Err(Error::DimensionMismatch(format!(
                "expected {} coefficients, got {}",
                self.n_points(),
                coeffs.len()
            )));
        }
        self.synthesis_padded(coeffs, self.p)
    }

    /// Synthesis of a coefficient vector with `blocks ≤ p` blocks,
    /// zero-padding the missing high degrees.
    pub fn synthesis_padded(&self, coeffs: &[f64], blocks: usize) -> Result<Vec<f64>> {
        let (p, n) = (self.p, self.n);
        if blocks > p || coeffs.len() != blocks * n {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients in {} blocks against {} points per element",
                coeffs.len(),
                blocks,
                p
            )));
        }
        let mut out = vec![0.0; p * n];
        for e in 0..n {
            let mut cheb = vec![0.0; p];
            for (m, c) in cheb.iter_mut().enumerate() {
                *c = ((m..blocks).step_by(2))
                    .map(|k| self.leg2cheb[m * p + k] * coeffs[k * n + e])
                    .sum();
            }
            out[e * p..(e + 1) * p].copy_from_slice(&self.values_from_cheb(&cheb));
        }
        Ok(out)
    }

    /// Transpose of [`TransformPlan::synthesis_padded`] as a linear map:
    /// grid values → `blocks` coefficient blocks. The DCT scalings cancel,
    /// leaving a forward DCT followed by the transposed conversion.
    pub fn synthesis_transpose(&self, values: &[f64], blocks: usize) -> Result<Vec<f64>> {
        let (p, n) = (self.p, self.n);
        if blocks > p || values.len() != p * n {
            return Err(Error::DimensionMismatch(format!(
                "{} values against {} points per element, {} blocks",
                values.len(),
                p,
                blocks
            )));
        }
        let mut out = vec![0.0; blocks * n];
        for e in 0..n {
            let rev: Vec<f64> = values[e * p..(e + 1) * p].iter().rev().copied().collect();
            let x = self.dct.forward(&rev);
            for k in 0..blocks {
                out[k * n + e] = ((0..=k).rev().step_by(2))
                    .map(|m| self.leg2cheb[m * p + k] * x[m])
                    .sum();
            }
        }
        Ok(out)
    }
}

fn check_2d(plan_x: &TransformPlan, plan_y: &TransformPlan, m: &Mat) -> Result<()> {
    if m.nrows() != plan_x.n_points() || m.ncols() != plan_y.n_points() {
        return Err(Error::DimensionMismatch(format!(
            "matrix {}×{} against plans {}×{}",
            m.nrows(),
            m.ncols(),
            plan_x.n_points(),
            plan_y.n_points()
        )));
    }
    Ok(())
}

fn columns_map(plan: &TransformPlan, x: &Mat, analysis: bool) -> Mat {
    let mut out = Mat::zeros(x.nrows(), x.ncols());
    for_each_column_pair(&mut out, x, |ocol, xcol| {
        let v = if analysis {
            plan.analysis_1d(xcol).expect("validated dims")
        } else {
            plan.synthesis_1d(xcol).expect("validated dims")
        };
        ocol.copy_from_slice(&v);
    });
    out
}

/// Tensor-product analysis: 1D analysis of every column, then every row.
pub fn analysis_2d(plan_x: &TransformPlan, plan_y: &TransformPlan, values: &Mat) -> Result<Mat> {
    check_2d(plan_x, plan_y, values)?;
    let t = columns_map(plan_x, values, true);
    Ok(columns_map(plan_y, &t.transpose(), true).transpose())
}

/// Tensor-product synthesis; exact inverse path of [`analysis_2d`].
pub fn synthesis_2d(plan_x: &TransformPlan, plan_y: &TransformPlan, coeffs: &Mat) -> Result<Mat> {
    check_2d(plan_x, plan_y, coeffs)?;
    let t = columns_map(plan_x, coeffs, false);
    Ok(columns_map(plan_y, &t.transpose(), false).transpose())
}

/// Synthesis of a coefficient matrix with fewer blocks than the plans
/// carry, zero-padding per axis.
pub fn synthesis_2d_padded(
    plan_x: &TransformPlan,
    plan_y: &TransformPlan,
    coeffs: &Mat,
    blocks_x: usize,
    blocks_y: usize,
) -> Result<Mat> {
    if coeffs.nrows() != blocks_x * plan_x.n_elements()
        || coeffs.ncols() != blocks_y * plan_y.n_elements()
    {
        return Err(Error::DimensionMismatch(format!(
            "coefficient matrix {}×{} against {}×{} blocks",
            coeffs.nrows(),
            coeffs.ncols(),
            blocks_x,
            blocks_y
        )));
    }
    let mut t = Mat::zeros(plan_x.n_points(), coeffs.ncols());
    for_each_column_pair(&mut t, coeffs, |ocol, xcol| {
        ocol.copy_from_slice(&plan_x.synthesis_padded(xcol, blocks_x).expect("validated"));
    });
    let tt = t.transpose();
    let mut out = Mat::zeros(plan_y.n_points(), tt.ncols());
    for_each_column_pair(&mut out, &tt, |ocol, xcol| {
        ocol.copy_from_slice(&plan_y.synthesis_padded(xcol, blocks_y).expect("validated"));
    });
    Ok(out.transpose())
}

/// Transpose of [`synthesis_2d_padded`]: grid values → coefficient blocks.
pub fn synthesis_2d_transpose(
    plan_x: &TransformPlan,
    plan_y: &TransformPlan,
    values: &Mat,
    blocks_x: usize,
    blocks_y: usize,
) -> Result<Mat> {
    check_2d(plan_x, plan_y, values)?;
    let mut t = Mat::zeros(blocks_x * plan_x.n_elements(), values.ncols());
    for_each_column_pair(&mut t, values, |ocol, xcol| {
        ocol.copy_from_slice(&plan_x.synthesis_transpose(xcol, blocks_x).expect("validated"));
    });
    let tt = t.transpose();
    let mut out = Mat::zeros(blocks_y * plan_y.n_elements(), tt.ncols());
    for_each_column_pair(&mut out, &tt, |ocol, xcol| {
        ocol.copy_from_slice(&plan_y.synthesis_transpose(xcol, blocks_y).expect("validated"));
    });
    Ok(out.transpose())
}

/// Hat/bubble coefficients → grid values: convert through the conversion
/// maps per axis, then synthesise. The plans may carry more points per
/// element than the conversion produces blocks (oversampling).
pub fn hatbubble_to_values(
    plan_x: &TransformPlan,
    plan_y: &TransformPlan,
    u: &Mat,
    rx: &PiecewiseMap,
    ry: &PiecewiseMap,
) -> Result<Mat> {
    if u.nrows() != rx.in_dim() || u.ncols() != ry.in_dim() {
        return Err(Error::DimensionMismatch(format!(
            "coefficients {}×{} against conversions {}×{}",
            u.nrows(),
            u.ncols(),
            rx.in_dim(),
            ry.in_dim()
        )));
    }
    let blocks_x = rx.out_dim() / plan_x.n_elements();
    let blocks_y = ry.out_dim() / plan_y.n_elements();
    let leg = crate::adi::to_piecewise_legendre(u, rx, ry);
    synthesis_2d_padded(plan_x, plan_y, &leg, blocks_x, blocks_y)
}
