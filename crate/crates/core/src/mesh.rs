//! 1D meshes and the hat-plus-bubble spaces built on them.
//!
//! A `Space1D` couples a mesh with a per-element polynomial degree `p` and a
//! boundary-condition flag. Its degrees of freedom are grouped degree-major:
//! first the hat functions (one per kept breakpoint), then `p - 1` bubble
//! blocks of one entry per element. This interlaced ordering is what makes
//! the interior of every assembled operator block-diagonal, and every module
//! in the crate shares it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Strictly increasing breakpoints x_0 < x_1 < ... < x_n.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh1D {
    breakpoints: Vec<f64>,
}

impl Mesh1D {
    pub fn new(breakpoints: Vec<f64>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::InvalidMesh(
                "a mesh needs at least two breakpoints".into(),
            ));
        }
        if breakpoints.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidMesh("breakpoints must be finite".into()));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidMesh(
                "breakpoints must be strictly increasing".into(),
            ));
        }
        Ok(Self { breakpoints })
    }

    /// `n` equal elements on [a, b].
    pub fn uniform(a: f64, b: f64, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidMesh("need at least one element".into()));
        }
        let pts = (0..=n)
            .map(|i| a + (b - a) * i as f64 / n as f64)
            .collect();
        Self::new(pts)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn n_elements(&self) -> usize {
        self.breakpoints.len() - 1
    }

    /// Endpoints (x_e, x_{e+1}) of element e.
    pub fn element(&self, e: usize) -> (f64, f64) {
        (self.breakpoints[e], self.breakpoints[e + 1])
    }

    pub fn width(&self, e: usize) -> f64 {
        self.breakpoints[e + 1] - self.breakpoints[e]
    }

    pub fn widths(&self) -> Vec<f64> {
        self.breakpoints.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Smallest element width.
    pub fn h_min(&self) -> f64 {
        self.widths().into_iter().fold(f64::INFINITY, f64::min)
    }

    /// Total interval length x_n - x_0.
    pub fn length(&self) -> f64 {
        self.breakpoints[self.breakpoints.len() - 1] - self.breakpoints[0]
    }

    /// Map a reference coordinate in [-1, 1] into element e.
    pub fn to_physical(&self, e: usize, xr: f64) -> f64 {
        let (a, b) = self.element(e);
        0.5 * (a + b) + 0.5 * (b - a) * xr
    }
}

/// Which boundary hats are removed from the space. `Dirichlet` drops both
/// endpoint hats, `Full` keeps both (zero Neumann), and the mixed variants
/// drop exactly one side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryCondition {
    Dirichlet,
    Full,
    LeftDirichlet,
    RightDirichlet,
}

impl BoundaryCondition {
    pub fn keep_left(self) -> bool {
        matches!(self, Self::Full | Self::RightDirichlet)
    }

    pub fn keep_right(self) -> bool {
        matches!(self, Self::Full | Self::LeftDirichlet)
    }
}

/// Mesh + degree + boundary condition, with the derived block layout.
#[derive(Debug, Clone)]
pub struct Space1D {
    mesh: Mesh1D,
    degree: usize,
    bc: BoundaryCondition,
}

impl Space1D {
    pub fn new(mesh: Mesh1D, degree: usize, bc: BoundaryCondition) -> Result<Self> {
        if degree < 2 {
            return Err(Error::InvalidParameter(
                "degree must be at least 2 (hats plus one bubble block)".into(),
            ));
        }
        Ok(Self { mesh, degree, bc })
    }

    pub fn mesh(&self) -> &Mesh1D {
        &self.mesh
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn bc(&self) -> BoundaryCondition {
        self.bc
    }

    pub fn n_elements(&self) -> usize {
        self.mesh.n_elements()
    }

    /// Number of hat degrees of freedom; zero is possible (single Dirichlet
    /// element) and everything downstream must cope with it.
    pub fn hat_count(&self) -> usize {
        self.mesh.n_elements() + 1
            - usize::from(!self.bc.keep_left())
            - usize::from(!self.bc.keep_right())
    }

    /// Number of bubble blocks, p - 1 (degrees 2..=p map to W_0..W_{p-2}).
    pub fn bubble_blocks(&self) -> usize {
        self.degree - 1
    }

    /// Total degrees of freedom: hats + (p-1) blocks of n bubbles.
    pub fn dim(&self) -> usize {
        self.hat_count() + self.bubble_blocks() * self.n_elements()
    }

    /// Breakpoint index carried by hat dof i.
    pub fn hat_breakpoint(&self, i: usize) -> usize {
        i + usize::from(!self.bc.keep_left())
    }

    /// Global index of entry `entry` of block `block`: block 0 is the hat
    /// block (entry = hat index), block k >= 1 is the W_{k-1} bubble block
    /// (entry = element index).
    pub fn interlace_index(&self, block: usize, entry: usize) -> Result<usize> {
        let n = self.n_elements();
        if block == 0 {
            if entry >= self.hat_count() {
                return Err(Error::DimensionMismatch(format!(
                    "hat index {entry} out of range (m = {})",
                    self.hat_count()
                )));
            }
            return Ok(entry);
        }
        if block > self.bubble_blocks() || entry >= n {
            return Err(Error::DimensionMismatch(format!(
                "block {block}, entry {entry} out of range for {} bubble blocks of {} elements",
                self.bubble_blocks(),
                n
            )));
        }
        Ok(self.hat_count() + (block - 1) * n + entry)
    }

    /// Inverse of [`interlace_index`](Self::interlace_index).
    pub fn deinterlace(&self, index: usize) -> Result<(usize, usize)> {
        let m = self.hat_count();
        if index < m {
            return Ok((0, index));
        }
        let t = index - m;
        let n = self.n_elements();
        let block = t / n + 1;
        if block > self.bubble_blocks() {
            return Err(Error::DimensionMismatch(format!(
                "index {index} out of range (dim = {})",
                self.dim()
            )));
        }
        Ok((block, t % n))
    }
}

/// Plain-data space description for files and CLI flags.
///
/// ```
/// use arrowhead::mesh::SpaceSpec;
/// let spec: SpaceSpec = serde_json::from_str(
///     r#"{"breakpoints": [-1.0, 0.0, 1.0], "degree": 4, "bc": "dirichlet"}"#,
/// ).unwrap();
/// let space = spec.build().unwrap();
/// assert_eq!(space.dim(), 4 * 2 - 1);
/// ```
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpaceSpec {
    pub breakpoints: Vec<f64>,
    pub degree: usize,
    pub bc: BoundaryCondition,
}

impl SpaceSpec {
    pub fn build(&self) -> Result<Space1D> {
        Space1D::new(Mesh1D::new(self.breakpoints.clone())?, self.degree, self.bc)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}
