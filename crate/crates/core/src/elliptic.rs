//! Real elliptic integrals and Jacobi elliptic functions, implemented from
//! scratch via the arithmetic-geometric mean and the descending Landen
//! transformation. Only the parameter ranges arising from disjoint real
//! spectral intervals are needed: modulus k in [0, 1).

use crate::error::{Error, Result};

fn check_modulus(k: f64) -> Result<()> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::OutOfDomain(format!(
            "elliptic modulus must lie in [0, 1), got {k}"
        )));
    }
    Ok(())
}

/// Arithmetic-geometric mean of positive `a0 >= b0 > 0`.
fn agm(mut a: f64, mut b: f64) -> f64 {
    debug_assert!(a > 0.0 && b > 0.0);
    while (a - b).abs() > 2.0 * f64::EPSILON * a {
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
    }
    0.5 * (a + b)
}

/// Complete elliptic integral of the first kind, modulus convention:
/// `K(k) = ∫₀^{π/2} dθ/√(1 - k²sin²θ) = π / (2·agm(1, k'))`.
pub fn elliptic_k(k: f64) -> Result<f64> {
    check_modulus(k)?;
    Ok(complete_k_from_complement((1.0 - k * k).sqrt()))
}

/// `K` computed from the complementary modulus `k' = √(1-k²)`, which avoids
/// cancellation when `k` is close to 1.
pub(crate) fn complete_k_from_complement(kprime: f64) -> f64 {
    debug_assert!(kprime > 0.0 && kprime <= 1.0);
    std::f64::consts::FRAC_PI_2 / agm(1.0, kprime)
}

/// Jacobi `sn`, `cn`, `dn` at `u` for complementary parameter
/// `mc = 1 - k² ∈ (0, 1]`, by the descending Landen transformation.
pub(crate) fn sncndn(uu: f64, emmc: f64) -> (f64, f64, f64) {
    const CA: f64 = 1.0e-9; // Landen truncation; error is O(CA²)
    debug_assert!(emmc > 0.0 && emmc <= 1.0);
    let mut emc = emmc;
    let mut u = uu;
    let mut em = Vec::with_capacity(16);
    let mut en = Vec::with_capacity(16);
    let mut a = 1.0;
    let mut dn = 1.0;
    let mut c = 0.0;
    for _ in 0..32 {
        em.push(a);
        emc = emc.sqrt();
        en.push(emc);
        c = 0.5 * (a + emc);
        if (a - emc).abs() <= CA * a {
            break;
        }
        emc *= a;
        a = c;
    }
    u *= c;
    let mut sn = u.sin();
    let mut cn = u.cos();
    if sn != 0.0 {
        a = cn / sn;
        c *= a;
        for i in (0..em.len()).rev() {
            let b = em[i];
            a *= c;
            c *= dn;
            dn = (en[i] + a) / (b + a);
            a = c / b;
        }
        a = 1.0 / (c * c + 1.0).sqrt();
        sn = if sn >= 0.0 { a } else { -a };
        cn = c * sn;
    }
    (sn, cn, dn)
}

/// Jacobi `dn(z, k)`, modulus convention.
pub fn jacobi_dn(z: f64, k: f64) -> Result<f64> {
    check_modulus(k)?;
    Ok(sncndn(z, 1.0 - k * k).2)
}
