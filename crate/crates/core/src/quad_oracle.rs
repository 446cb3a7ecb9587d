//! Gauss-Legendre quadrature used as an independent oracle in unit tests.
//! Nodes are the roots of P_n found by Newton from Chebyshev initial
//! guesses; weights are 2 / ((1 - x^2) P_n'(x)^2).

use crate::basis::legendre_all;

pub(crate) fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    let mut buf = vec![0.0; n + 1];
    for i in 0..n {
        let mut x = -(std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            legendre_all(n, x, &mut buf);
            let pn = buf[n];
            let dpn = n as f64 * (x * buf[n] - buf[n - 1]) / (x * x - 1.0);
            let dx = pn / dpn;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        legendre_all(n, x, &mut buf);
        let dpn = n as f64 * (x * buf[n] - buf[n - 1]) / (x * x - 1.0);
        xs[i] = x;
        ws[i] = 2.0 / ((1.0 - x * x) * dpn * dpn);
    }
    (xs, ws)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn test_gauss_rule_exactness() {
        // n-point rule integrates monomials up to degree 2n-1 exactly
        let (xs, ws) = gauss_legendre(6);
        assert!((ws.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        for d in 0..12usize {
            let got: f64 = xs.iter().zip(&ws).map(|(x, w)| w * x.powi(d as i32)).sum();
            let want = if d % 2 == 0 { 2.0 / (d as f64 + 1.0) } else { 0.0 };
            assert!((got - want).abs() < 1e-13, "degree {d}");
        }
    }
}
