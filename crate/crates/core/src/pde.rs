//! End-user solvers on top of the core: the IMEX-Euler Burgers stepper and
//! conjugate gradients preconditioned by the alternating-direction Laplacian
//! solve, with Hadamard-product variable-coefficient application on graded
//! meshes.

use crate::adi::{adi_solve, apply_left, Mat, ScreenedPoisson2D};
use crate::arrowhead::ArrowheadMatrix;
use crate::assembly::{conversion_matrix, derivative_matrix, PiecewiseMap};
use crate::error::{Error, Result};
use crate::mesh::{Mesh1D, Space1D};
use crate::transforms::{
    analysis_2d, synthesis_2d_padded, synthesis_2d_transpose, TransformPlan,
};

/// Mesh graded geometrically towards the origin: breakpoints
/// `-1, -10⁻¹, …, -10⁻ᵐ, 0, 10⁻ᵐ, …, 10⁻¹, 1`, so `2(m+1)` elements.
pub fn graded_mesh(m: usize) -> Result<Mesh1D> {
    if m < 1 {
        return Err(Error::InvalidParameter(
            "grading depth must be at least 1".into(),
        ));
    }
    let mut pts = Vec::with_capacity(2 * m + 3);
    pts.push(-1.0);
    for k in 1..=m {
        pts.push(-(10.0_f64.powi(-(k as i32))));
    }
    pts.push(0.0);
    for k in (1..=m).rev() {
        pts.push(10.0_f64.powi(-(k as i32)));
    }
    pts.push(1.0);
    Mesh1D::new(pts)
}

/// Weak-form action of a variable coefficient: `apply(U)` returns the load
/// matrix with entries `⟨g·u, φ_i ψ_j⟩` computed by Fejér quadrature on an
/// oversampled grid. The quadrature realisation keeps the operator exactly
/// symmetric, which conjugate gradients requires; it is exact whenever
/// `g·u·v` is a piecewise polynomial below the grid resolution.
#[derive(Debug, Clone)]
pub struct VariableCoefficient2D {
    plan_x: TransformPlan,
    plan_y: TransformPlan,
    rx: PiecewiseMap,
    ry: PiecewiseMap,
    blocks_x: usize,
    blocks_y: usize,
    /// Quadrature weights pre-multiplied into the coefficient samples.
    weighted_g: Mat,
}

impl VariableCoefficient2D {
    /// Sample `g` on the tensor grid with `oversample` points per element
    /// per axis; `2(p+1)` makes the g ≡ 1 case exact.
    pub fn new(
        space_x: &Space1D,
        space_y: &Space1D,
        g: impl Fn(f64, f64) -> f64,
        oversample: usize,
    ) -> Result<Self> {
        let plan_x = TransformPlan::new(space_x.mesh().clone(), oversample)?;
        let plan_y = TransformPlan::new(space_y.mesh().clone(), oversample)?;
        let mut g_vals = Mat::zeros(plan_x.n_points(), plan_y.n_points());
        for (i, x) in plan_x.grid().iter().enumerate() {
            for (j, y) in plan_y.grid().iter().enumerate() {
                g_vals[(i, j)] = g(*x, *y);
            }
        }
        Self::from_grid_values(space_x, space_y, plan_x, plan_y, g_vals)
    }

    /// Use precomputed grid values of the coefficient (sampled on the
    /// plans' tensor grid).
    pub fn from_grid_values(
        space_x: &Space1D,
        space_y: &Space1D,
        plan_x: TransformPlan,
        plan_y: TransformPlan,
        g_vals: Mat,
    ) -> Result<Self> {
        if g_vals.nrows() != plan_x.n_points() || g_vals.ncols() != plan_y.n_points() {
            return Err(Error::DimensionMismatch(format!(
                "coefficient grid {}×{} against plans {}×{}",
                g_vals.nrows(),
                g_vals.ncols(),
                plan_x.n_points(),
                plan_y.n_points()
            )));
        }
        let blocks_x = space_x.degree() + 1;
        let blocks_y = space_y.degree() + 1;
        if blocks_x > plan_x.points_per_element() || blocks_y > plan_y.points_per_element() {
            return Err(Error::InvalidParameter(format!(
                "plans must carry at least {}×{} points per element",
                blocks_x, blocks_y
            )));
        }
        if !g_vals.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidParameter(
                "coefficient samples must be finite".into(),
            ));
        }
        let wx = plan_x.quadrature_weights();
        let wy = plan_y.quadrature_weights();
        let mut weighted_g = g_vals;
        for i in 0..weighted_g.nrows() {
            for j in 0..weighted_g.ncols() {
                weighted_g[(i, j)] *= wx[i] * wy[j];
            }
        }
        Ok(VariableCoefficient2D {
            plan_x,
            plan_y,
            rx: conversion_matrix(space_x),
            ry: conversion_matrix(space_y),
            blocks_x,
            blocks_y,
            weighted_g,
        })
    }

    pub fn grid_dims(&self) -> (usize, usize) {
        (self.plan_x.n_points(), self.plan_y.n_points())
    }

    /// `F = (S R)ᵀ · diag(w_x) [G ⊙ (S_x R_x U R_yᵀ S_yᵀ)] diag(w_y) · (S R)`
    /// in hat/bubble coordinates on both sides.
    pub fn apply(&self, u: &Mat) -> Result<Mat> {
        if u.nrows() != self.rx.in_dim() || u.ncols() != self.ry.in_dim() {
            return Err(Error::DimensionMismatch(format!(
                "coefficients {}×{} against spaces {}×{}",
                u.nrows(),
                u.ncols(),
                self.rx.in_dim(),
                self.ry.in_dim()
            )));
        }
        let leg = crate::adi::to_piecewise_legendre(u, &self.rx, &self.ry);
        let mut vals =
            synthesis_2d_padded(&self.plan_x, &self.plan_y, &leg, self.blocks_x, self.blocks_y)?;
        vals.component_mul_assign(&self.weighted_g);
        let back = synthesis_2d_transpose(
            &self.plan_x,
            &self.plan_y,
            &vals,
            self.blocks_x,
            self.blocks_y,
        )?;
        let t = self.rx.apply_transpose_columns(&back);
        Ok(self.ry.apply_transpose_columns(&t.transpose()).transpose())
    }
}

/// Convergence controls for preconditioned conjugate gradients.
#[derive(Debug, Clone, Copy)]
pub struct PcgConfig {
    pub rel_tol: f64,
    pub max_iter: usize,
    /// Tolerance handed to the alternating-direction preconditioner.
    pub precond_tol: f64,
}

impl Default for PcgConfig {
    fn default() -> Self {
        PcgConfig {
            rel_tol: 1e-8,
            max_iter: 200,
            precond_tol: 1e-4,
        }
    }
}

/// Standard preconditioned conjugate gradients on the vectorised
/// coefficient matrix with the Euclidean inner product. Returns the
/// solution and the iteration count at convergence
/// (`‖r‖_F ≤ rel_tol·‖rhs‖_F`).
pub fn pcg_solve(
    apply: impl Fn(&Mat) -> Result<Mat>,
    precondition: impl Fn(&Mat) -> Mat,
    rhs: &Mat,
    config: &PcgConfig,
) -> Result<(Mat, usize)> {
    if !(config.rel_tol > 0.0 && config.rel_tol < 1.0) {
        return Err(Error::InvalidParameter(
            "relative tolerance must lie in (0, 1)".into(),
        ));
    }
    let rhs_norm = rhs.norm();
    let mut u = Mat::zeros(rhs.nrows(), rhs.ncols());
    if rhs_norm == 0.0 {
        return Ok((u, 0));
    }
    let mut r = rhs.clone();
    let mut z = precondition(&r);
    let mut p = z.clone();
    let mut rz = r.dot(&z);
    for it in 1..=config.max_iter {
        let kp = apply(&p)?;
        let alpha = rz / p.dot(&kp);
        u += alpha * &p;
        r -= alpha * &kp;
        if r.norm() <= config.rel_tol * rhs_norm {
            return Ok((u, it));
        }
        z = precondition(&r);
        let rz_new = r.dot(&z);
        let beta = rz_new / rz;
        rz = rz_new;
        p = z.clone() + beta * p;
    }
    Err(Error::MaxIterExceeded {
        iters: config.max_iter,
        residual: r.norm() / rhs_norm,
    })
}

/// Driver for `(-Δ + g)u = f` on a tensor space: matrix-free operator
/// `Δ_x U M_y + M_x U Δ_y + VC(U)` under conjugate gradients, with one full
/// alternating-direction Laplacian solve as the preconditioner per
/// iteration.
pub struct VariableCoefficientSolver {
    laplacian: ScreenedPoisson2D,
    vc: VariableCoefficient2D,
}

impl VariableCoefficientSolver {
    pub fn new(
        space_x: &Space1D,
        space_y: &Space1D,
        g: impl Fn(f64, f64) -> f64,
        precond_tol: f64,
    ) -> Result<Self> {
        let oversample = 2 * (space_x.degree().max(space_y.degree()) + 1);
        Ok(VariableCoefficientSolver {
            laplacian: ScreenedPoisson2D::new(space_x, space_y, 0.0, precond_tol)?,
            vc: VariableCoefficient2D::new(space_x, space_y, g, oversample)?,
        })
    }

    fn stiffness(&self) -> (&ArrowheadMatrix, &ArrowheadMatrix) {
        (&self.laplacian.ops_x.shifted, &self.laplacian.ops_y.shifted)
    }

    /// The full operator action `K(U) = Δ_x U M_y + M_x U Δ_y + VC(U)`.
    pub fn apply_operator(&self, u: &Mat) -> Result<Mat> {
        let (kx, ky) = self.stiffness();
        let mx = &self.laplacian.ops_x.mass;
        let my = &self.laplacian.ops_y.mass;
        let kxu_my = apply_left(my, &apply_left(kx, u).transpose()).transpose();
        let mxu_ky = apply_left(ky, &apply_left(mx, u).transpose()).transpose();
        Ok(kxu_my + mxu_ky + self.vc.apply(u)?)
    }

    /// Solve with right-hand side given as interlaced piecewise-Legendre
    /// coefficients; returns hat/bubble coefficients and iterations used.
    pub fn solve(&self, f_leg: &Mat, config: &PcgConfig) -> Result<(Mat, usize)> {
        let rhs = self.laplacian.load_from_legendre(f_leg)?;
        pcg_solve(
            |u| self.apply_operator(u),
            |r| adi_solve(self.laplacian.plan(), r),
            &rhs,
            config,
        )
    }
}

/// IMEX-Euler state for Burgers' equation `u_t + u·u_x = ε Δu` with zero
/// Dirichlet data: an implicit heat half-step in weak form via the
/// alternating-direction solver, then an explicit grid-value update
/// `V - δt·V_x ⊙ V` re-analysed into coefficients.
pub struct BurgersState {
    /// Piecewise-Legendre coefficients of the current iterate,
    /// `(p+1)·n` per axis.
    pub u_leg: Mat,
    pub eps_visc: f64,
    pub dt: f64,
    heat: ScreenedPoisson2D,
    plan_x: TransformPlan,
    plan_y: TransformPlan,
    rx: PiecewiseMap,
    ry: PiecewiseMap,
    dx: PiecewiseMap,
    omega_sq: f64,
    steps_taken: usize,
}

impl BurgersState {
    pub fn new(
        space_x: &Space1D,
        space_y: &Space1D,
        u0_leg: Mat,
        eps_visc: f64,
        dt: f64,
        adi_tol: f64,
    ) -> Result<Self> {
        if !(eps_visc > 0.0) || !(dt > 0.0) {
            return Err(Error::InvalidParameter(
                "viscosity and time step must be positive".into(),
            ));
        }
        // (I - δt·ε·Δ)u = u₀ in weak form is the screened Poisson operator
        // with ω² = 1/(δt·ε) and load scaled by ω².
        let omega_sq = 1.0 / (dt * eps_visc);
        let heat = ScreenedPoisson2D::new(space_x, space_y, omega_sq.sqrt(), adi_tol)?;
        let px = space_x.degree() + 1;
        let py = space_y.degree() + 1;
        if u0_leg.nrows() != px * space_x.n_elements()
            || u0_leg.ncols() != py * space_y.n_elements()
        {
            return Err(Error::DimensionMismatch(format!(
                "initial data {}×{}, expected {}×{}",
                u0_leg.nrows(),
                u0_leg.ncols(),
                px * space_x.n_elements(),
                py * space_y.n_elements()
            )));
        }
        Ok(BurgersState {
            u_leg: u0_leg,
            eps_visc,
            dt,
            plan_x: TransformPlan::new(space_x.mesh().clone(), px)?,
            plan_y: TransformPlan::new(space_y.mesh().clone(), py)?,
            rx: conversion_matrix(space_x),
            ry: conversion_matrix(space_y),
            dx: derivative_matrix(space_x),
            heat,
            omega_sq,
            steps_taken: 0,
        })
    }

    pub fn steps_taken(&self) -> usize {
        self.steps_taken
    }

    /// The implicit half-step alone: hat/bubble coefficients of
    /// `(I - δt·ε·Δ)⁻¹ u`.
    pub fn heat_half_step(&self) -> Result<Mat> {
        let g = self.heat.load_from_legendre(&self.u_leg)?;
        Ok(self.heat.solve_load(&(self.omega_sq * g)))
    }

    /// One full IMEX step, updating the stored coefficients.
    pub fn step(&mut self) -> Result<()> {
        let u_half = self.heat_half_step()?;

        // grid values of u and u_x at the half step
        let leg = self.rx.apply_columns(&u_half);
        let leg_both = self.ry.apply_columns(&leg.transpose()).transpose();
        let v = synthesis_2d_padded(
            &self.plan_x,
            &self.plan_y,
            &leg_both,
            self.plan_x.points_per_element(),
            self.plan_y.points_per_element(),
        )?;
        let dleg = self.dx.apply_columns(&u_half);
        let dleg_both = self.ry.apply_columns(&dleg.transpose()).transpose();
        let vx = synthesis_2d_padded(
            &self.plan_x,
            &self.plan_y,
            &dleg_both,
            self.plan_x.points_per_element() - 1,
            self.plan_y.points_per_element(),
        )?;

        // explicit update u ← u - δt·u_x·u on the grid, then re-analyse
        let mut w = v.clone();
        for i in 0..w.nrows() {
            for j in 0..w.ncols() {
                w[(i, j)] -= self.dt * vx[(i, j)] * v[(i, j)];
            }
        }
        self.u_leg = analysis_2d(&self.plan_x, &self.plan_y, &w)?;
        self.steps_taken += 1;
        Ok(())
    }

    /// Largest boundary-trace magnitude of the current iterate over all
    /// four edges, evaluated from the coefficients (the grid itself never
    /// touches the boundary).
    pub fn boundary_max(&self) -> f64 {
        let n_x = self.plan_x.n_elements();
        let n_y = self.plan_y.n_elements();
        let px = self.plan_x.points_per_element();
        let py = self.plan_y.points_per_element();
        let mut worst: f64 = 0.0;

        // x = ±1 edges: collapse x-blocks at element 0 / n-1 with P_k(±1)
        for (elem, sign) in [(0usize, -1.0_f64), (n_x - 1, 1.0)] {
            let mut trace = vec![0.0; py * n_y];
            for k in 0..px {
                let s = sign.powi(k as i32);
                for c in 0..py * n_y {
                    trace[c] += s * self.u_leg[(k * n_x + elem, c)];
                }
            }
            let vals = self.plan_y.synthesis_1d(&trace).unwrap();
            for v in vals {
                worst = worst.max(v.abs());
            }
        }
        // y = ±1 edges
        for (elem, sign) in [(0usize, -1.0_f64), (n_y - 1, 1.0)] {
            let mut trace = vec![0.0; px * n_x];
            for k in 0..py {
                let s = sign.powi(k as i32);
                for r in 0..px * n_x {
                    trace[r] += s * self.u_leg[(r, k * n_y + elem)];
                }
            }
            let vals = self.plan_x.synthesis_1d(&trace).unwrap();
            for v in vals {
                worst = worst.max(v.abs());
            }
        }
        worst
    }
}
