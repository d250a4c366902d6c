//! Complex log-gamma, reciprocal gamma and the Pochhammer symbol.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Result};

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// True when `z` is one of the poles `0, -1, -2, ...` of Γ.
pub fn is_gamma_pole(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// `ln Γ(z)` for complex `z`, continuous on `Re z > 0` and extended by
/// reflection `Γ(z) Γ(1-z) = π / sin(πz)` to the left half-plane.
///
/// Only `exp` of the result (and of sums of such values) is meaningful
/// across the reflection seam; the imaginary part may differ from the
/// principal `ln Γ` there by a multiple of `2π`.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return domain(format!("ln_gamma of non-finite argument {z}"));
    }
    if is_gamma_pole(z) {
        return domain(format!("ln_gamma pole at {z}"));
    }
    if z.re < 0.5 {
        let s = (z * PI).sin();
        if s == Complex64::new(0.0, 0.0) {
            return domain(format!("ln_gamma pole at {z}"));
        }
        return Ok(Complex64::new(PI.ln(), 0.0) - s.ln() - ln_gamma(1.0 - z)?);
    }
    let (z, x) = lanczos_sum(z);
    let t = z + LANCZOS_G + 0.5;
    Ok(HALF_LN_2PI + (z + 0.5) * t.ln() - t + x.ln())
}

fn lanczos_sum(z: Complex64) -> (Complex64, Complex64) {
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS_COEF[0], 0.0);
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        x += *c / (z + i as f64);
    }
    (z, x)
}

/// `Γ(z)`.
///
/// Arguments with moderate real part are shifted by the recurrence into
/// `[0.5, 1.5)` before the Lanczos sum is applied, which keeps the exponent
/// small and the result accurate to a few ulps instead of the
/// `|ln Γ| · ε` of exponentiating a log-gamma value.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return domain(format!("gamma of non-finite argument {z}"));
    }
    if is_gamma_pole(z) {
        return domain(format!("gamma pole at {z}"));
    }
    if z.re > 40.0 || z.re < -40.0 {
        return Ok(ln_gamma(z)?.exp());
    }
    if z.re < 0.5 {
        let s = (z * PI).sin();
        if s == Complex64::new(0.0, 0.0) {
            return domain(format!("gamma pole at {z}"));
        }
        return Ok(PI / (s * gamma(1.0 - z)?));
    }
    let mut w = z;
    let mut prod = Complex64::new(1.0, 0.0);
    while w.re >= 1.5 {
        w -= 1.0;
        prod *= w;
    }
    let (zm, x) = lanczos_sum(w);
    let t = zm + LANCZOS_G + 0.5;
    let base = (HALF_LN_2PI + (zm + 0.5) * t.ln() - t).exp() * x;
    Ok(prod * base)
}

/// `1 / Γ(z)`, which is entire: zero at the poles of Γ.
pub fn rgamma(z: Complex64) -> Complex64 {
    match ln_gamma(z) {
        Ok(l) => (-l).exp(),
        Err(_) => Complex64::new(0.0, 0.0),
    }
}

/// Rising factorial `(a)_k = a (a+1) ... (a+k-1)`, `(a)_0 = 1`.
///
/// Small `k` uses the product directly; larger `k` uses a log-gamma
/// difference, falling back to the product near the poles of Γ.
pub fn pochhammer(a: Complex64, k: u32) -> Complex64 {
    let product = || (0..k).fold(Complex64::new(1.0, 0.0), |acc, j| acc * (a + f64::from(j)));
    if k <= 10 {
        return product();
    }
    match (ln_gamma(a + f64::from(k)), ln_gamma(a)) {
        (Ok(hi), Ok(lo)) if a.re > 0.0 => (hi - lo).exp(),
        _ => product(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn special_values() {
        assert!(ln_gamma(c(1.0, 0.0)).unwrap().norm() < 1e-15);
        assert!(ln_gamma(c(2.0, 0.0)).unwrap().norm() < 1e-15);
        let half = ln_gamma(c(0.5, 0.0)).unwrap();
        assert!((half - c(0.5 * PI.ln(), 0.0)).norm() < 1e-14);
        // Γ(8) = 5040
        assert!(rel(gamma(c(8.0, 0.0)).unwrap(), c(5040.0, 0.0)) < 1e-14);
        // Γ(-1/2) = -2 √π
        assert!(rel(gamma(c(-0.5, 0.0)).unwrap(), c(-2.0 * PI.sqrt(), 0.0)) < 1e-14);
    }

    #[test]
    fn poles_are_errors() {
        for z in [0.0, -1.0, -7.0] {
            assert!(ln_gamma(c(z, 0.0)).is_err());
            assert_eq!(rgamma(c(z, 0.0)), c(0.0, 0.0));
        }
        assert!(ln_gamma(c(-1.0, 1e-9)).is_ok());
    }

    #[test]
    fn reflection_modulus_on_imaginary_axis() {
        // |Γ(iλ)|^2 = π / (λ sinh(πλ))
        for lam in [0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0] {
            let g = gamma(c(0.0, lam)).unwrap();
            let expected = (PI / (lam * (PI * lam).sinh())).sqrt();
            assert!((g.norm() - expected).abs() < 1e-13 * expected, "λ={lam}");
        }
    }

    #[test]
    fn recurrence() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..5000 {
            let z = c(rng.random_range(-12.0..25.0), rng.random_range(-15.0..15.0));
            let lhs = gamma(z + 1.0).unwrap();
            let rhs = z * gamma(z).unwrap();
            assert!(rel(lhs, rhs) < 1e-12, "z={z}");
        }
    }

    #[test]
    fn conjugation_symmetry() {
        let z = c(3.3, 1.7);
        let a = gamma(z).unwrap();
        let b = gamma(z.conj()).unwrap();
        assert!(rel(a.conj(), b) < 1e-14);
    }

    #[test]
    fn pochhammer_values() {
        let a = c(0.3, -2.0);
        assert_eq!(pochhammer(a, 0), c(1.0, 0.0));
        assert_eq!(pochhammer(c(8.0, 0.0), 3), c(720.0, 0.0));
        // terminates at nonpositive integers
        assert_eq!(pochhammer(c(-3.0, 0.0), 5), c(0.0, 0.0));
    }

    #[test]
    fn pochhammer_matches_gamma_ratio() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..2000 {
            let a = c(rng.random_range(0.1..12.0), rng.random_range(-6.0..6.0));
            let k = rng.random_range(0..=20u32);
            let direct = (0..k).fold(c(1.0, 0.0), |acc, j| acc * (a + f64::from(j)));
            let ratio = gamma(a + f64::from(k)).unwrap() / gamma(a).unwrap();
            assert!(rel(pochhammer(a, k), ratio) < 1e-12);
            assert!(rel(pochhammer(a, k), direct) < 1e-12);
        }
    }
}
