//! Shared oracles for the integration suite: dense reference
//! factorisations, dense Kronecker solves of generalised Sylvester systems,
//! Gauss quadrature, and a randomised SPD arrowhead generator.

#![allow(dead_code)]

use arrowhead::banded::BandedMatrix;
use arrowhead::{ArrowheadMatrix, Mat};
use nalgebra::{DMatrix, DVector};
use rand::Rng;

/// Gauss–Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (mut p0, mut p1) = (1.0, x);
        for k in 2..=n {
            let kf = k as f64;
            let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
            p0 = p1;
            p1 = p2;
        }
        let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
        xs[n - 1 - i] = x;
        ws[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (xs, ws)
}

/// Dense reverse Cholesky A = LᵀL: Cholesky of the index-reversed matrix,
/// read back through the permutation.
pub fn dense_reverse_cholesky(a: &DMatrix<f64>) -> DMatrix<f64> {
    let s = a.nrows();
    let mut rev = DMatrix::zeros(s, s);
    for i in 0..s {
        for j in 0..s {
            rev[(i, j)] = a[(s - 1 - i, s - 1 - j)];
        }
    }
    let g = nalgebra::Cholesky::new(rev).expect("oracle instance is SPD").l();
    let mut l = DMatrix::zeros(s, s);
    for i in 0..s {
        for j in 0..=i {
            l[(i, j)] = g[(s - 1 - j, s - 1 - i)];
        }
    }
    l
}

/// Eigenvalues of the symmetric pencil (A, D) with D positive definite,
/// via the Cholesky congruence L⁻¹ A L⁻ᵀ.
pub fn dense_generalized_eigs(a: &DMatrix<f64>, d: &DMatrix<f64>) -> Vec<f64> {
    let chol = nalgebra::Cholesky::new(d.clone()).expect("denominator is SPD");
    let half = chol.l().solve_lower_triangular(a).expect("unit diagonal");
    let reduced = chol
        .l()
        .solve_lower_triangular(&half.transpose())
        .expect("unit diagonal");
    let sym = 0.5 * (reduced.clone() + reduced.transpose());
    let mut eigs: Vec<f64> = sym.symmetric_eigen().eigenvalues.iter().copied().collect();
    eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
    eigs
}

/// Dense solve of A·U·C - D·U·B = F through the Kronecker form.
pub fn dense_kronecker_solve(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    c: &DMatrix<f64>,
    d: &DMatrix<f64>,
    f: &Mat,
) -> Mat {
    let big = c.transpose().kronecker(a) - b.transpose().kronecker(d);
    let rhs = DVector::from_column_slice(f.as_slice());
    let sol = big.lu().solve(&rhs).expect("dense Sylvester system is regular");
    Mat::from_column_slice(f.nrows(), f.ncols(), sol.as_slice())
}

/// `‖V X Lᵀ‖_F = sqrt(tr(Xᵀ D X C))` with D = VᵀV, C = LᵀL.
pub fn weighted_norm(x: &Mat, d: &DMatrix<f64>, c: &DMatrix<f64>) -> f64 {
    (x.transpose() * d * x * c).trace().sqrt()
}

/// Identity with the same structural metadata as the generator's output,
/// for pattern-preserving diagonal shifts.
fn structured_identity(
    m: usize,
    n: usize,
    nb: usize,
    ell: usize,
    lam: usize,
    mu: usize,
) -> ArrowheadMatrix {
    let mut a0 = BandedMatrix::new(m, m, lam + mu, lam + mu);
    for i in 0..m {
        a0.set(i, i, 1.0);
    }
    let b_blocks = if m == 0 {
        vec![]
    } else {
        vec![BandedMatrix::new(m, n, lam, mu); ell]
    };
    let c_blocks = b_blocks.iter().map(|b| b.transpose()).collect();
    let interior = (0..n)
        .map(|_| {
            let mut t = BandedMatrix::new(nb, nb, ell, ell);
            for i in 0..nb {
                t.set(i, i, 1.0);
            }
            t
        })
        .collect();
    ArrowheadMatrix::new(m, n, nb, ell, ell, lam, mu, a0, b_blocks, c_blocks, interior)
}

/// Random symmetric positive definite arrowhead with hat dimension `m`,
/// `n` elements, `nb` interior blocks, tail bandwidth `ell`, and arrow
/// sub-bandwidths `(lam, mu)`. Symmetrised at the block level, then shifted
/// by a structure-preserving multiple of the identity so the smallest dense
/// eigenvalue clears a margin.
pub fn random_spd_arrowhead(
    rng: &mut impl Rng,
    m: usize,
    n: usize,
    nb: usize,
    ell: usize,
    lam: usize,
    mu: usize,
) -> ArrowheadMatrix {
    assert!(ell >= 1 && ell <= nb);
    let mut a0 = BandedMatrix::new(m, m, lam + mu, lam + mu);
    for i in 0..m {
        for j in i.saturating_sub(lam + mu)..=(i + lam + mu).min(m.saturating_sub(1)) {
            if j < i {
                continue;
            }
            let v = rng.gen_range(-1.0..1.0);
            a0.set(i, j, v);
            if j != i {
                a0.set(j, i, v);
            }
        }
    }
    let b_blocks: Vec<BandedMatrix> = if m == 0 {
        vec![]
    } else {
        (0..ell)
            .map(|_| {
                let mut b = BandedMatrix::new(m, n, lam, mu);
                for i in 0..m {
                    for j in i.saturating_sub(lam)..=(i + mu).min(n.saturating_sub(1)) {
                        b.set(i, j, rng.gen_range(-1.0..1.0));
                    }
                }
                b
            })
            .collect()
    };
    let c_blocks: Vec<BandedMatrix> = b_blocks.iter().map(|b| b.transpose()).collect();
    let interior = (0..n)
        .map(|_| {
            let mut t = BandedMatrix::new(nb, nb, ell, ell);
            for i in 0..nb {
                for j in i..=(i + ell).min(nb - 1) {
                    let v = rng.gen_range(-1.0..1.0);
                    t.set(i, j, v);
                    if j != i {
                        t.set(j, i, v);
                    }
                }
            }
            t
        })
        .collect();
    let raw = ArrowheadMatrix::new(m, n, nb, ell, ell, lam, mu, a0, b_blocks, c_blocks, interior);

    let eigs = raw.to_dense().symmetric_eigen().eigenvalues;
    let min = eigs.iter().cloned().fold(f64::INFINITY, f64::min);
    let max_abs = eigs.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    let margin = 0.05 * max_abs.max(1.0);
    let ident = structured_identity(m, n, nb, ell, lam, mu);
    raw.linear_combination(1.0, margin - min.min(0.0), &ident)
        .unwrap()
}

/// Median wall time of `reps` calls after one warmup, in seconds.
pub fn median_time(reps: usize, mut f: impl FnMut()) -> f64 {
    f();
    let mut times: Vec<f64> = (0..reps)
        .map(|_| {
            let t0 = std::time::Instant::now();
            f();
            t0.elapsed().as_secs_f64()
        })
        .collect();
    times.sort_by(|a, b| a.partial_cmp(b).unwrap());
    times[times.len() / 2]
}

/// Least-squares slope of ln(y) against ln(x).
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let cov: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let var: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    cov / var
}
