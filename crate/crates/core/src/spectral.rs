//! Spectral intervals for the screened-Poisson pencils, the alternating
//! direction iteration count, and the Zolotarev-optimal shift sequences.
//!
//! Analytic interval bounds are preferred wherever they apply: they cost
//! O(1), are always valid, and a looser interval only increases the number
//! of shifts, never the attained tolerance. A dense generalised eigenvalue
//! fallback covers small pencils with no analytic bound.

use crate::arrowhead::ArrowheadMatrix;
use crate::elliptic::{complete_k_from_complement, sncndn};
use crate::error::{Error, Result};
use crate::mesh::BoundaryCondition;

/// Largest pencil dimension the dense eigenvalue fallback accepts.
pub const DENSE_EIG_CAP: usize = 2000;

/// Relative margin added to each end of a dense eigenvalue estimate.
const DENSE_MARGIN: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntervalProvenance {
    AnalyticLemma,
    DenseEig,
}

/// A closed interval known to contain a generalised spectrum.
#[derive(Debug, Clone, Copy)]
pub struct SpectralInterval {
    pub lo: f64,
    pub hi: f64,
    pub provenance: IntervalProvenance,
}

impl SpectralInterval {
    /// Interval of reciprocals; requires endpoints of one sign.
    pub fn reciprocal(&self) -> SpectralInterval {
        debug_assert!(self.lo * self.hi > 0.0);
        SpectralInterval {
            lo: 1.0 / self.hi,
            hi: 1.0 / self.lo,
            provenance: self.provenance,
        }
    }

    pub fn negated(&self) -> SpectralInterval {
        SpectralInterval {
            lo: -self.hi,
            hi: -self.lo,
            provenance: self.provenance,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// Analytic bounds on `σ(M, Δ + (ω²/2)M)` for a degree-`p` space on a mesh
/// with smallest element `h`: the spectrum lies in
/// `[2h²/(24p⁴ + ω²h²), C]` with
/// `C = min(len²/π², max(1, 2/ω²))` when both boundary hats are dropped and
/// `C = max(1, 2/ω²)` otherwise (which requires `ω > 0`).
///
/// The lower bound comes from an elementwise inverse inequality, so it holds
/// on arbitrary (including strongly graded) meshes.
pub fn lemma_spectrum_bounds(
    h: f64,
    p: usize,
    omega: f64,
    bc: BoundaryCondition,
    length: f64,
) -> Result<SpectralInterval> {
    if !(h > 0.0) || !(length > 0.0) || h > length + 1e-12 * length {
        return Err(Error::InvalidParameter(format!(
            "need 0 < h <= length, got h = {h}, length = {length}"
        )));
    }
    if p < 2 {
        return Err(Error::InvalidParameter(format!(
            "degree must be at least 2, got {p}"
        )));
    }
    if !(omega >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "omega must be nonnegative, got {omega}"
        )));
    }
    let p4 = (p as f64).powi(4);
    let lo = 2.0 * h * h / (24.0 * p4 + omega * omega * h * h);
    let cap = if omega > 0.0 {
        1.0_f64.max(2.0 / (omega * omega))
    } else {
        f64::INFINITY
    };
    let hi = if bc == BoundaryCondition::Dirichlet {
        (length * length / std::f64::consts::PI.powi(2)).min(cap)
    } else {
        if omega == 0.0 {
            return Err(Error::InvalidParameter(
                "analytic spectrum bound needs omega > 0 unless both boundary \
                 hats are dropped"
                    .into(),
            ));
        }
        cap
    };
    Ok(SpectralInterval {
        lo,
        hi,
        provenance: IntervalProvenance::AnalyticLemma,
    })
}

/// Interval containing `σ(A, D)` for symmetric `A` and positive definite `D`.
///
/// When `analytic` bounds are supplied they are returned as-is; otherwise the
/// dense pencil is reduced by a Cholesky congruence and its extreme
/// eigenvalues are widened by a relative safety margin. The dense path is a
/// fallback for modest dimensions only.
pub fn estimate_generalized_spectrum(
    a: &ArrowheadMatrix,
    d: &ArrowheadMatrix,
    analytic: Option<SpectralInterval>,
) -> Result<SpectralInterval> {
    if let Some(interval) = analytic {
        return Ok(interval);
    }
    if a.dim() != d.dim() {
        return Err(Error::DimensionMismatch(format!(
            "pencil dimensions {} vs {}",
            a.dim(),
            d.dim()
        )));
    }
    if a.dim() > DENSE_EIG_CAP {
        return Err(Error::DenseFallbackTooLarge {
            dim: a.dim(),
            cap: DENSE_EIG_CAP,
        });
    }
    let chol = nalgebra::Cholesky::new(d.to_dense()).ok_or_else(|| {
        Error::InvalidParameter("pencil weight matrix is not positive definite".into())
    })?;
    // L⁻¹ A L⁻ᵀ shares the pencil spectrum and is symmetric
    let half = chol.l().solve_lower_triangular(&a.to_dense()).unwrap();
    let reduced = chol.l().solve_lower_triangular(&half.transpose()).unwrap();
    let eigs = nalgebra::SymmetricEigen::new(reduced).eigenvalues;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in eigs.iter() {
        lo = lo.min(*v);
        hi = hi.max(*v);
    }
    Ok(SpectralInterval {
        lo: lo - DENSE_MARGIN * lo.abs(),
        hi: hi + DENSE_MARGIN * hi.abs(),
        provenance: IntervalProvenance::DenseEig,
    })
}

/// The alternating-direction shift sequence for two disjoint real intervals
/// `[a, b]` (right) and `[c, d]` (left), with its cross-ratio and count.
#[derive(Debug, Clone)]
pub struct AdiShiftPlan {
    pub ab: (f64, f64),
    pub cd: (f64, f64),
    pub gamma: f64,
    pub iterations: usize,
    /// Shifts inside [a, b]; positive in the mirrored-interval setup.
    pub p: Vec<f64>,
    /// Shifts inside [c, d]; negative in the mirrored-interval setup.
    pub q: Vec<f64>,
}

/// Iteration count `J = ⌈ln(16γ)·ln(4/ε)/π²⌉`.
pub fn shift_count(gamma: f64, eps: f64) -> Result<usize> {
    if !(gamma > 1.0) {
        return Err(Error::InvalidParameter(format!(
            "cross-ratio must exceed 1, got {gamma}"
        )));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must lie in (0, 1), got {eps}"
        )));
    }
    let j = ((16.0 * gamma).ln() * (4.0 / eps).ln() / std::f64::consts::PI.powi(2)).ceil();
    Ok(j as usize)
}

/// Zolotarev-optimal shifts for intervals `c ≤ d < a ≤ b`, to tolerance
/// `ε`: the canonical symmetric problem `[-α, -1] ∪ [1, α]` is solved by
/// `dn` evaluated at odd multiples of `K/(2J)`, and a Möbius map carries the
/// canonical points onto the requested intervals.
pub fn adi_shifts(a: f64, b: f64, c: f64, d: f64, eps: f64) -> Result<AdiShiftPlan> {
    if !(a <= b && c <= d) || !a.is_finite() || !b.is_finite() || !c.is_finite() || !d.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "malformed intervals [{a}, {b}], [{c}, {d}]"
        )));
    }
    if d >= a {
        if c <= b {
            return Err(Error::OverlappingIntervals {
                a_lo: a,
                a_hi: b,
                b_lo: c,
                b_hi: d,
            });
        }
        return Err(Error::InvalidParameter(format!(
            "interval [{c}, {d}] must lie to the left of [{a}, {b}]"
        )));
    }
    let gamma = ((c - a).abs() * (d - b).abs()) / ((c - b).abs() * (d - a).abs());
    let iterations = shift_count(gamma, eps)?;

    let alpha = 2.0 * gamma - 1.0 + 2.0 * (gamma * gamma - gamma).sqrt();
    let kprime = 1.0 / alpha;
    let big_k = complete_k_from_complement(kprime);

    // Möbius map with T(-α) = a, T(-1) = b, T(1) = c (and T(α) = d by
    // cross-ratio invariance).
    let mobius = |z: f64| -> f64 {
        let s = -2.0 * (z + alpha) / ((z - 1.0) * (alpha - 1.0));
        (s * (b - a) * c - a * (b - c)) / (s * (b - a) - (b - c))
    };

    let mut p = Vec::with_capacity(iterations);
    let mut q = Vec::with_capacity(iterations);
    for j in 1..=iterations {
        let u = (2 * j - 1) as f64 * big_k / (2 * iterations) as f64;
        let dn = sncndn(u, kprime * kprime).2;
        let z = alpha * dn;
        let pj = mobius(-z);
        let qj = mobius(z);
        if !(pj > 0.0) || !(qj < 0.0) {
            return Err(Error::InvalidParameter(format!(
                "shift sign check failed (p_{j} = {pj}, q_{j} = {qj}) for \
                 intervals [{a}, {b}], [{c}, {d}]"
            )));
        }
        p.push(pj);
        q.push(qj);
    }
    Ok(AdiShiftPlan {
        ab: (a, b),
        cd: (c, d),
        gamma,
        iterations,
        p,
        q,
    })
}
