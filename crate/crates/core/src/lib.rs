//! Sparse hp-FEM toolkit: banded arrowhead operators, reverse Cholesky
//! factorization, Zolotarev-shift ADI for Sylvester systems, and fast
//! Chebyshev-Legendre transforms.

pub mod adi;
pub mod arrowhead;
pub mod assembly;
pub mod banded;
pub mod basis;
pub mod elliptic;
pub mod error;
pub mod mesh;
pub mod pde;
pub mod spectral;
pub mod transforms;

#[cfg(test)]
pub(crate) mod quad_oracle;

pub use adi::{
    adi_precompute, adi_solve, solve_screened_poisson_2d, sylvester_residual, tensor_load,
    to_piecewise_legendre, AdiPlan, BasisTag, CoefficientField2D, Mat, ScreenedPoisson2D,
};
pub use arrowhead::{ArrowheadMatrix, ReverseCholesky};
pub use assembly::{assemble_operators, assemble_rhs_1d, Operators1D, PiecewiseMap};
pub use banded::BandedMatrix;
pub use error::{Error, Result};
pub use mesh::{BoundaryCondition, Mesh1D, Space1D, SpaceSpec};
pub use pde::{
    graded_mesh, pcg_solve, BurgersState, PcgConfig, VariableCoefficient2D,
    VariableCoefficientSolver,
};
pub use spectral::{adi_shifts, lemma_spectrum_bounds, AdiShiftPlan, SpectralInterval};
pub use transforms::{
    analysis_2d, cheb_points, fejer1_weights, hatbubble_to_values, synthesis_2d, Dct,
    TransformPlan,
};
