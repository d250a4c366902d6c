//! Poisson kernels `P`, `P_λ` and the Szegő-type kernel `Ψ_r(λ)`.

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::geometry::{psi_form_bracket, OctPair, SpherePoint};
use crate::octonion::Octonion;
use crate::special::{SpectralParam, RHO};

/// `1 - r[θ, ω] = (1 - r) + r [ω - θ, ω]`, accurate for `θ ≈ ω`.
#[inline]
pub fn one_minus_r_bracket(r: f64, theta: &SpherePoint, omega: &SpherePoint) -> Octonion {
    theta.one_minus_bracket(omega) * r + (1.0 - r)
}

fn check_ball(x: &OctPair) -> Result<f64> {
    let n2 = x.norm_sqr();
    if !(n2 < 1.0) {
        return domain(format!("|x|² = {n2} is not inside the unit ball"));
    }
    Ok(n2)
}

/// Harmonic Poisson kernel `P(x, ω) = ((1 - |x|²) / Ψ(x, ω))^ρ`.
pub fn poisson_kernel(x: &OctPair, omega: &SpherePoint) -> Result<f64> {
    let n2 = check_ball(x)?;
    Ok(((1.0 - n2) / psi_form_bracket(x, omega.point())).powi(RHO as i32))
}

/// `P_λ(x, ω) = P(x, ω)^{(iλ+ρ)/(2ρ)} = exp(s ln((1-|x|²)/Ψ(x, ω)))`.
pub fn poisson_kernel_lambda(lambda: SpectralParam, x: &OctPair, omega: &SpherePoint) -> Result<Complex64> {
    let n2 = check_ball(x)?;
    let ratio = (1.0 - n2) / psi_form_bracket(x, omega.point());
    Ok((lambda.exponent() * ratio.ln()).exp())
}

/// `P_λ(rθ, ω)` using the cancellation-free form of `1 - r[θ, ω]`.
pub fn poisson_kernel_polar(
    lambda: SpectralParam,
    r: f64,
    theta: &SpherePoint,
    omega: &SpherePoint,
) -> Result<Complex64> {
    if !(0.0..1.0).contains(&r) {
        return domain(format!("radius {r} outside [0, 1)"));
    }
    let q = (1.0 - r) * (1.0 + r);
    let psi = one_minus_r_bracket(r, theta, omega).norm_sqr();
    Ok((lambda.exponent() * (q / psi).ln()).exp())
}

/// `Ψ_r(λ, θ, ω) = |1 - r[θ, ω]|^{-iλ-ρ}`.
pub fn szego_kernel(lambda: SpectralParam, r: f64, theta: &SpherePoint, omega: &SpherePoint) -> Complex64 {
    let m = one_minus_r_bracket(r, theta, omega).norm();
    (-2.0 * lambda.exponent() * m.ln()).exp()
}

/// `|1 - r ω1|²` for `ω1` with `(Re ω1, |Im ω1|) = (u, v)`.
#[inline]
pub fn zonal_gap_sqr(r: f64, u: f64, v: f64) -> f64 {
    let a = 1.0 - r * u;
    a * a + r * r * v * v
}

/// `P_λ(r e1, ω)` as a function of `(u, v)`.
#[inline]
pub fn poisson_zonal(lambda: SpectralParam, r: f64, u: f64, v: f64) -> Complex64 {
    let q = (1.0 - r) * (1.0 + r);
    (lambda.exponent() * (q / zonal_gap_sqr(r, u, v)).ln()).exp()
}

/// `Ψ_r(λ, e1, ω)` as a function of `(u, v)`.
#[inline]
pub fn szego_zonal(lambda: SpectralParam, r: f64, u: f64, v: f64) -> Complex64 {
    (-lambda.exponent() * zonal_gap_sqr(r, u, v).ln()).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::psi_form;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn lam(x: f64) -> SpectralParam {
        SpectralParam::new(x).unwrap()
    }

    #[test]
    fn origin_and_domain() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let w = SpherePoint::random(&mut rng);
        assert_eq!(poisson_kernel(&OctPair::ZERO, &w).unwrap(), 1.0);
        let v = poisson_kernel_lambda(lam(1.0), &OctPair::ZERO, &w).unwrap();
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(poisson_kernel(w.point(), &w).is_err());
        assert_eq!(szego_kernel(lam(1.0), 0.0, &w, &w), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn harmonic_parameter_gives_real_kernel() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let th = SpherePoint::random(&mut rng);
            let w = SpherePoint::random(&mut rng);
            let x = th.point().scale(0.6);
            let p = poisson_kernel(&x, &w).unwrap();
            let pl = poisson_kernel_lambda(SpectralParam::harmonic(), &x, &w).unwrap();
            assert!((pl - Complex64::new(p, 0.0)).norm() < 1e-12 * p);
        }
    }

    #[test]
    fn modulus_for_real_lambda() {
        // |P_λ(r e1, ω)| = ((1-r²)/|1-rω1|²)^{ρ/2}
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let e1 = SpherePoint::e1();
        for _ in 0..200 {
            let w = SpherePoint::random(&mut rng);
            let r = 0.8;
            let v = poisson_kernel_polar(lam(1.5), r, &e1, &w).unwrap();
            let gap = (1.0 - w.point().x1 * r).norm_sqr();
            let expected = ((1.0 - r * r) / gap).powf(RHO / 2.0);
            assert!((v.norm() - expected).abs() < 1e-12 * expected);
        }
    }

    #[test]
    fn factorization_and_symmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..500 {
            let th = SpherePoint::random(&mut rng);
            let w = SpherePoint::random(&mut rng);
            for r in [0.1, 0.5, 0.9, 0.99] {
                let l = lam(0.7);
                let x = th.point().scale(r);
                let p = poisson_kernel_lambda(l, &x, &w).unwrap();
                let q = (1.0 - r * r) as f64;
                let fact = (l.exponent() * q.ln()).exp() * szego_kernel(l, r, &th, &w);
                assert!((p - fact).norm() < 1e-10 * p.norm());
                let swapped = poisson_kernel_polar(l, r, &w, &th).unwrap();
                assert!((p - swapped).norm() < 1e-10 * p.norm());
                // the inner-product form of Ψ agrees
                let ratio = q / psi_form(&x, w.point());
                let p_inner = (l.exponent() * ratio.ln()).exp();
                assert!((p - p_inner).norm() < 1e-10 * p.norm());
                let m1 = szego_kernel(l, r, &th, &w).norm();
                let m2 = szego_kernel(lam(3.0), r, &th, &w).norm();
                assert!((m1 - m2).abs() < 1e-12 * m1);
            }
        }
    }

    #[test]
    fn zonal_forms_match_pointwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let e1 = SpherePoint::e1();
        for _ in 0..200 {
            let w = SpherePoint::random(&mut rng);
            let (u, v) = (w.point().x1.re(), w.point().x1.im().norm());
            let r = 0.7;
            let a = poisson_kernel_polar(lam(1.0), r, &e1, &w).unwrap();
            let b = poisson_zonal(lam(1.0), r, u, v);
            assert!((a - b).norm() < 1e-12 * a.norm());
            let c = szego_kernel(lam(1.0), r, &e1, &w);
            let d = szego_zonal(lam(1.0), r, u, v);
            assert!((c - d).norm() < 1e-12 * c.norm());
        }
    }
}
