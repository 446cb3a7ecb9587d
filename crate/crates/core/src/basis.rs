//! Reference-element basis: Legendre polynomials and integrated-Legendre
//! bubble functions on [-1, 1].
//!
//! The bubble functions are
//!
//! ```text
//! W_k(x) = (P_k(x) - P_{k+2}(x)) / (2k + 3),      k = 0, 1, ...
//! ```
//!
//! so `W_k` has degree k+2, vanishes at both endpoints, and satisfies
//! `W_k'(x) = -P_{k+1}(x)`. The reference matrices below are exact rational
//! arrays: the diagonal Legendre mass, the diagonal bubble weak Laplacian,
//! the banded lowering matrix L_W with `W = P L_W`, and the pentadiagonal
//! bubble mass `L_W^T M_P L_W`.

use crate::banded::BandedMatrix;
use crate::error::{Error, Result};

const DOMAIN_TOL: f64 = 1e-12;

fn check_domain(x: f64) -> Result<()> {
    if !(x.is_finite() && x.abs() <= 1.0 + DOMAIN_TOL) {
        return Err(Error::OutOfDomain(format!(
            "reference coordinate {x} outside [-1, 1]"
        )));
    }
    Ok(())
}

/// Evaluate P_0..P_kmax at x by the three-term recurrence, writing into `out`.
pub(crate) fn legendre_all(kmax: usize, x: f64, out: &mut [f64]) {
    debug_assert!(out.len() >= kmax + 1);
    out[0] = 1.0;
    if kmax == 0 {
        return;
    }
    out[1] = x;
    for k in 1..kmax {
        out[k + 1] = ((2 * k + 1) as f64 * x * out[k] - k as f64 * out[k - 1]) / (k + 1) as f64;
    }
}

/// Legendre polynomial P_k(x) on [-1, 1].
pub fn legendre_eval(k: usize, x: f64) -> Result<f64> {
    check_domain(x)?;
    let mut buf = vec![0.0; k + 1];
    legendre_all(k, x, &mut buf);
    Ok(buf[k])
}

/// Derivative P_k'(x), using the recurrence
/// `(x^2 - 1) P_k'(x) = k (x P_k(x) - P_{k-1}(x))` away from the endpoints
/// and the exact endpoint values `P_k'(+-1) = (+-1)^{k+1} k(k+1)/2`.
pub fn legendre_derivative(k: usize, x: f64) -> Result<f64> {
    check_domain(x)?;
    if k == 0 {
        return Ok(0.0);
    }
    if (1.0 - x.abs()).abs() < 1e-10 {
        let sign = if x > 0.0 {
            1.0
        } else if k % 2 == 0 {
            -1.0
        } else {
            1.0
        };
        return Ok(sign * (k * (k + 1)) as f64 / 2.0);
    }
    let mut buf = vec![0.0; k + 1];
    legendre_all(k, x, &mut buf);
    Ok(k as f64 * (x * buf[k] - buf[k - 1]) / (x * x - 1.0))
}

/// Bubble function W_k(x) = (P_k(x) - P_{k+2}(x)) / (2k + 3).
pub fn bubble_eval(k: usize, x: f64) -> Result<f64> {
    check_domain(x)?;
    let mut buf = vec![0.0; k + 3];
    legendre_all(k + 2, x, &mut buf);
    Ok((buf[k] - buf[k + 2]) / (2 * k + 3) as f64)
}

/// Bubble derivative W_k'(x) = -P_{k+1}(x).
pub fn bubble_derivative(k: usize, x: f64) -> Result<f64> {
    check_domain(x)?;
    Ok(-legendre_eval(k + 1, x)?)
}

/// Lowering matrix L_W of size (p+1) x (p-1) with bandwidths (2, 0):
/// column k holds 1/(2k+3) at row k and -1/(2k+3) at row k+2, expressing
/// bubbles in the Legendre basis up to degree p.
pub fn lowering_matrix(p: usize) -> BandedMatrix {
    assert!(p >= 2, "lowering matrix needs degree >= 2");
    let mut l = BandedMatrix::new(p + 1, p - 1, 2, 0);
    for k in 0..p - 1 {
        let c = 1.0 / (2 * k + 3) as f64;
        l.set(k, k, c);
        l.set(k + 2, k, -c);
    }
    l
}

/// Diagonal of the Legendre mass matrix on [-1,1]: entries 2/(2k+1), k = 0..p.
pub fn legendre_mass(p: usize) -> Vec<f64> {
    (0..=p).map(|k| 2.0 / (2 * k + 1) as f64).collect()
}

/// Diagonal of the bubble weak Laplacian on [-1,1]: entries
/// `<W_j', W_k'> = 2/(2k+3) delta_jk`, k = 0..p-2.
pub fn reference_weak_laplacian(p: usize) -> Vec<f64> {
    assert!(p >= 2);
    (0..p - 1).map(|k| 2.0 / (2 * k + 3) as f64).collect()
}

/// Pentadiagonal bubble mass matrix `L_W^T M_P L_W` of size (p-1) x (p-1).
/// Odd offsets vanish by parity; the closed forms are
///
/// ```text
/// M[k,k]   = (2/(2k+1) + 2/(2k+5)) / (2k+3)^2
/// M[k,k+2] = -2 / ((2k+3)(2k+5)(2k+7))
/// ```
pub fn reference_mass_bubble(p: usize) -> BandedMatrix {
    assert!(p >= 2);
    let nb = p - 1;
    let bw = 2.min(nb.saturating_sub(1));
    let mut m = BandedMatrix::new(nb, nb, bw, bw);
    for k in 0..nb {
        let c = 1.0 / (2 * k + 3) as f64;
        m.set(
            k,
            k,
            c * c * (2.0 / (2 * k + 1) as f64 + 2.0 / (2 * k + 5) as f64),
        );
        if k + 2 < nb {
            let v = -2.0 / ((2 * k + 3) as f64 * (2 * k + 5) as f64 * (2 * k + 7) as f64);
            m.set(k, k + 2, v);
            m.set(k + 2, k, v);
        }
    }
    m
}
