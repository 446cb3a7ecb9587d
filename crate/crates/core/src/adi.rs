//! Generalised alternating-direction iteration for
//! `A·U·C - D·U·B = F` with banded arrowhead coefficients, plus the
//! two-dimensional screened-Poisson driver that feeds it.
//!
//! All shifted factorisations are computed once into an [`AdiPlan`]; a plan
//! is immutable and can serve any number of right-hand sides. The sweeps
//! work column-wise on `W` and row-wise (via a transposed scratch matrix) on
//! the right-multiplications, so every kernel is a banded solve or product
//! over contiguous columns.

use nalgebra::DMatrix;

use crate::arrowhead::{ArrowheadMatrix, ReverseCholesky};
use crate::assembly::{assemble_operators, assemble_rhs_1d, Operators1D};
use crate::error::{Error, Result};
use crate::mesh::{BoundaryCondition, Space1D};
use crate::spectral::{
    adi_shifts, estimate_generalized_spectrum, lemma_spectrum_bounds, AdiShiftPlan,
    SpectralInterval,
};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub type Mat = DMatrix<f64>;

/// Run `f` on every column of `target`, in parallel when enabled. Column
/// tasks are independent, so the result is identical for any thread count.
pub(crate) fn for_each_column<F>(target: &mut Mat, f: F)
where
    F: Fn(&mut [f64]) + Sync + Send,
{
    let rows = target.nrows();
    if rows == 0 {
        return;
    }
    #[cfg(feature = "parallel")]
    target
        .as_mut_slice()
        .par_chunks_mut(rows)
        .for_each(|col| f(col));
    #[cfg(not(feature = "parallel"))]
    target.as_mut_slice().chunks_mut(rows).for_each(|col| f(col));
}

/// Run `f` on every (target column, source column) pair. The two matrices
/// must have the same column count; row counts may differ.
pub(crate) fn for_each_column_pair<F>(target: &mut Mat, source: &Mat, f: F)
where
    F: Fn(&mut [f64], &[f64]) + Sync + Send,
{
    let (tr, sr) = (target.nrows(), source.nrows());
    debug_assert_eq!(source.ncols(), target.ncols());
    if tr == 0 || sr == 0 {
        return;
    }
    #[cfg(feature = "parallel")]
    target
        .as_mut_slice()
        .par_chunks_mut(tr)
        .zip(source.as_slice().par_chunks(sr))
        .for_each(|(t, s)| f(t, s));
    #[cfg(not(feature = "parallel"))]
    target
        .as_mut_slice()
        .chunks_mut(tr)
        .zip(source.as_slice().chunks(sr))
        .for_each(|(t, s)| f(t, s));
}

/// Precomputed state for the alternating-direction solve: the shift
/// sequence, one factorisation pair per shift, and the mass factorisation
/// for the final right-solve.
#[derive(Debug, Clone)]
pub struct AdiPlan {
    shifts: AdiShiftPlan,
    a: ArrowheadMatrix,
    b: ArrowheadMatrix,
    c: ArrowheadMatrix,
    d: ArrowheadMatrix,
    /// Factor of `A - q_j D` (positive definite since `q_j < a`).
    factor_a: Vec<ReverseCholesky>,
    /// Factor of `p_j C - B` (the negation of `B - p_j C`, which is
    /// negative definite); right-solves negate accordingly.
    factor_b: Vec<ReverseCholesky>,
    /// Factor of `C` for the final `W_J C⁻¹`.
    mass_factor: ReverseCholesky,
}

impl AdiPlan {
    pub fn shifts(&self) -> &AdiShiftPlan {
        &self.shifts
    }

    pub fn iterations(&self) -> usize {
        self.shifts.iterations
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.a.dim(), self.b.dim())
    }
}

/// Build an [`AdiPlan`] for `A·U·C - D·U·B = F` given spectral intervals
/// `σ(A, D) ⊆ [ab.0, ab.1]` and `σ(B, C) ⊆ [cd.0, cd.1]`, to tolerance
/// `eps` in the `(D, C)`-weighted norm.
pub fn adi_precompute(
    a: &ArrowheadMatrix,
    b: &ArrowheadMatrix,
    c: &ArrowheadMatrix,
    d: &ArrowheadMatrix,
    ab: (f64, f64),
    cd: (f64, f64),
    eps: f64,
) -> Result<AdiPlan> {
    if a.dim() != d.dim() || b.dim() != c.dim() {
        return Err(Error::DimensionMismatch(format!(
            "left pair dims {} vs {}, right pair dims {} vs {}",
            a.dim(),
            d.dim(),
            b.dim(),
            c.dim()
        )));
    }
    let shifts = adi_shifts(ab.0, ab.1, cd.0, cd.1, eps)?;
    let mut factor_a = Vec::with_capacity(shifts.iterations);
    let mut factor_b = Vec::with_capacity(shifts.iterations);
    for j in 0..shifts.iterations {
        factor_a.push(a.axpy_shift(-shifts.q[j], d)?.reverse_cholesky()?);
        factor_b.push(c.linear_combination(shifts.p[j], -1.0, b)?.reverse_cholesky()?);
    }
    let mass_factor = c.reverse_cholesky()?;
    Ok(AdiPlan {
        shifts,
        a: a.clone(),
        b: b.clone(),
        c: c.clone(),
        d: d.clone(),
        factor_a,
        factor_b,
        mass_factor,
    })
}

/// Run the alternating-direction sweeps for one right-hand side, returning
/// `U = W_J · C⁻¹`.
pub fn adi_solve(plan: &AdiPlan, f: &Mat) -> Mat {
    let (nx, ny) = plan.dims();
    assert_eq!(f.nrows(), nx, "right-hand side rows");
    assert_eq!(f.ncols(), ny, "right-hand side columns");
    let f_t = f.transpose();

    let mut w = Mat::zeros(nx, ny);
    for j in 0..plan.shifts.iterations {
        let pj = plan.shifts.p[j];
        let qj = plan.shifts.q[j];

        // Half step: W ← (F - (A - p_j D) W)(B - p_j C)⁻¹, kept transposed.
        let mut g = f.clone();
        if j > 0 {
            for_each_column_pair(&mut g, &w, |gcol, wcol| {
                let mut ax = vec![0.0; nx];
                plan.a.matvec_add(wcol, &mut ax);
                let mut dx = vec![0.0; nx];
                plan.d.matvec_add(wcol, &mut dx);
                for i in 0..nx {
                    gcol[i] -= ax[i] - pj * dx[i];
                }
            });
        }
        let mut w_half_t = g.transpose();
        let fb = &plan.factor_b[j];
        for_each_column(&mut w_half_t, |col| {
            fb.solve(col);
            for v in col.iter_mut() {
                *v = -*v;
            }
        });

        // Full step: W ← (A - q_j D)⁻¹ (F - W_half (B - q_j C)).
        let mut g_t = f_t.clone();
        for_each_column_pair(&mut g_t, &w_half_t, |gcol, hcol| {
            let mut bx = vec![0.0; ny];
            plan.b.matvec_add(hcol, &mut bx);
            let mut cx = vec![0.0; ny];
            plan.c.matvec_add(hcol, &mut cx);
            for i in 0..ny {
                gcol[i] -= bx[i] - qj * cx[i];
            }
        });
        w = g_t.transpose();
        let fa = &plan.factor_a[j];
        for_each_column(&mut w, |col| fa.solve(col));
    }

    // U = W_J C⁻¹ via the cached mass factorisation.
    let mut u_t = w.transpose();
    let mc = &plan.mass_factor;
    for_each_column(&mut u_t, |col| mc.solve(col));
    let u = u_t.transpose();
    debug_assert!(
        sylvester_residual(&plan.a, &plan.b, &plan.c, &plan.d, &u, f).is_finite(),
        "alternating-direction sweep produced a non-finite iterate"
    );
    u
}

/// `X ← M·X` column-wise for a symmetric arrowhead `M`.
pub(crate) fn apply_left(m: &ArrowheadMatrix, x: &Mat) -> Mat {
    let mut out = Mat::zeros(x.nrows(), x.ncols());
    for_each_column_pair(&mut out, x, |ocol, xcol| m.matvec_add(xcol, ocol));
    out
}

/// Relative Frobenius residual `‖A·U·C - D·U·B - F‖ / ‖F‖` (all four
/// operators symmetric).
pub fn sylvester_residual(
    a: &ArrowheadMatrix,
    b: &ArrowheadMatrix,
    c: &ArrowheadMatrix,
    d: &ArrowheadMatrix,
    u: &Mat,
    f: &Mat,
) -> f64 {
    let auc = apply_left(c, &apply_left(a, u).transpose()).transpose();
    let dub = apply_left(b, &apply_left(d, u).transpose()).transpose();
    let fnorm = f.norm();
    if fnorm == 0.0 {
        (auc - dub).norm()
    } else {
        (auc - dub - f).norm() / fnorm
    }
}

/// Which coefficient basis a 2D field is expressed in, per axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisTag {
    /// Interlaced piecewise-Legendre blocks.
    PiecewiseLegendre,
    /// Hat/bubble basis with one or both boundary hats dropped.
    HatBubbleQ,
    /// Full hat/bubble basis.
    HatBubbleC,
}

impl BasisTag {
    fn hat_bubble_for(bc: BoundaryCondition) -> BasisTag {
        if bc == BoundaryCondition::Full {
            BasisTag::HatBubbleC
        } else {
            BasisTag::HatBubbleQ
        }
    }
}

/// A matrix of 2D tensor-product coefficients together with its basis tags
/// and the generating 1D spaces.
#[derive(Debug, Clone)]
pub struct CoefficientField2D {
    pub values: Mat,
    pub basis: (BasisTag, BasisTag),
    pub space_x: Space1D,
    pub space_y: Space1D,
}

/// `L = R_x · U · R_yᵀ`: expand hat/bubble coefficients into interlaced
/// piecewise-Legendre blocks on both axes.
pub fn to_piecewise_legendre(
    u: &Mat,
    rx: &crate::assembly::PiecewiseMap,
    ry: &crate::assembly::PiecewiseMap,
) -> Mat {
    let t1 = rx.apply_columns(u);
    ry.apply_columns(&t1.transpose()).transpose()
}

/// The 2D screened-Poisson solver state: operators for each axis and the
/// alternating-direction plan for
/// `(Δx + (ω²/2)Mx)·U·My + Mx·U·(Δy + (ω²/2)My) = G`.
#[derive(Debug, Clone)]
pub struct ScreenedPoisson2D {
    pub ops_x: Operators1D,
    pub ops_y: Operators1D,
    plan: AdiPlan,
    pub omega: f64,
    pub eps: f64,
}

/// Spectral interval for `σ(Δ + (ω²/2)M, M)` on one axis: analytic bounds
/// where they hold, dense fallback otherwise (mixed conditions at ω = 0).
fn axis_interval(space: &Space1D, ops: &Operators1D, omega: f64) -> Result<SpectralInterval> {
    let analytic = lemma_spectrum_bounds(
        space.mesh().h_min(),
        space.degree(),
        omega,
        space.bc(),
        space.mesh().length(),
    )
    .ok()
    .map(|m_pencil| m_pencil.reciprocal());
    estimate_generalized_spectrum(&ops.shifted, &ops.mass, analytic)
}

impl ScreenedPoisson2D {
    pub fn new(space_x: &Space1D, space_y: &Space1D, omega: f64, eps: f64) -> Result<Self> {
        let ops_x = assemble_operators(space_x, omega)?;
        let ops_y = assemble_operators(space_y, omega)?;
        let ab = axis_interval(space_x, &ops_x, omega)?;
        let cd = axis_interval(space_y, &ops_y, omega)?.negated();
        let b = ops_y.shifted.scaled(-1.0);
        let plan = adi_precompute(
            &ops_x.shifted,
            &b,
            &ops_y.mass,
            &ops_x.mass,
            (ab.lo, ab.hi),
            (cd.lo, cd.hi),
            eps,
        )?;
        Ok(ScreenedPoisson2D {
            ops_x,
            ops_y,
            plan,
            omega,
            eps,
        })
    }

    pub fn plan(&self) -> &AdiPlan {
        &self.plan
    }

    pub fn space_x(&self) -> &Space1D {
        &self.ops_x.space
    }

    pub fn space_y(&self) -> &Space1D {
        &self.ops_y.space
    }

    /// Tensor load `G = R_xᵀ M_Px · F · M_Py R_y` from piecewise-Legendre
    /// data with any whole number of blocks per axis.
    pub fn load_from_legendre(&self, f_leg: &Mat) -> Result<Mat> {
        tensor_load(self.space_x(), self.space_y(), f_leg)
    }

    /// Solve with an already-assembled load `G`.
    pub fn solve_load(&self, g: &Mat) -> Mat {
        adi_solve(&self.plan, g)
    }

    /// Full pipeline: assemble the load from piecewise-Legendre data and
    /// run the sweeps.
    pub fn solve(&self, f_leg: &Mat) -> Result<CoefficientField2D> {
        let g = self.load_from_legendre(f_leg)?;
        let values = self.solve_load(&g);
        Ok(CoefficientField2D {
            values,
            basis: (
                BasisTag::hat_bubble_for(self.space_x().bc()),
                BasisTag::hat_bubble_for(self.space_y().bc()),
            ),
            space_x: self.space_x().clone(),
            space_y: self.space_y().clone(),
        })
    }
}

/// Apply the 1D load maps on both axes of a piecewise-Legendre coefficient
/// matrix: `G = (R_xᵀ M_Px) F (M_Py R_y)`.
pub fn tensor_load(space_x: &Space1D, space_y: &Space1D, f_leg: &Mat) -> Result<Mat> {
    let mut h = Mat::zeros(space_x.dim(), f_leg.ncols());
    for j in 0..f_leg.ncols() {
        let col: Vec<f64> = f_leg.column(j).iter().copied().collect();
        let out = assemble_rhs_1d(space_x, &col)?;
        h.column_mut(j).copy_from_slice(&out);
    }
    let mut g = Mat::zeros(space_x.dim(), space_y.dim());
    for i in 0..h.nrows() {
        let row: Vec<f64> = h.row(i).iter().copied().collect();
        let out = assemble_rhs_1d(space_y, &row)?;
        for (j, v) in out.iter().enumerate() {
            g[(i, j)] = *v;
        }
    }
    Ok(g)
}

/// Convenience driver for one screened-Poisson solve.
pub fn solve_screened_poisson_2d(
    space_x: &Space1D,
    space_y: &Space1D,
    omega: f64,
    f_leg: &Mat,
    eps: f64,
) -> Result<CoefficientField2D> {
    ScreenedPoisson2D::new(space_x, space_y, omega, eps)?.solve(f_leg)
}
