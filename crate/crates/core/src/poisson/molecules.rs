//! The weight `Ω_{η,δ}`, the radii `η_j`, the kernel differences `Δ_j` and
//! a sampled molecule check.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Result};
use crate::geometry::SpherePoint;
use crate::quadrature::{zonal_integrate_focused, QuadratureSpec};
use crate::rng;
use crate::special::{SpectralParam, RHO};

use super::kernels::{one_minus_r_bracket, poisson_zonal};

/// `η_j = 2(1 - 2^{-j}) / (2^{-2j} + 2(1 - 2^{-j}))`.
pub fn eta_j(j: u32) -> f64 {
    let a = 2.0 * (1.0 - 2f64.powi(-(j as i32)));
    a / (4f64.powi(-(j as i32)) + a)
}

/// `1 - η_j`, without cancellation.
fn one_minus_eta(j: u32) -> f64 {
    let eps = 4f64.powi(-(j as i32));
    eps / (eps + 2.0 * (1.0 - 2f64.powi(-(j as i32))))
}

fn harmonic_polar(r: f64, one_minus_r: f64, theta: &SpherePoint, omega: &SpherePoint) -> f64 {
    let q = one_minus_r * (1.0 + r);
    (q / one_minus_r_bracket(r, theta, omega).norm_sqr()).powi(RHO as i32)
}

/// `Δ_j(θ, ω) = P(η_{j+1} θ, ω) - P(η_j θ, ω)` for the harmonic kernel.
pub fn delta_j(j: u32, theta: &SpherePoint, omega: &SpherePoint) -> f64 {
    let outer = harmonic_polar(eta_j(j + 1), one_minus_eta(j + 1), theta, omega);
    let inner = harmonic_polar(eta_j(j), one_minus_eta(j), theta, omega);
    outer - inner
}

fn check_weight_args(eta: f64, delta: f64) -> Result<()> {
    if !(eta > 0.0 && eta.is_finite()) {
        return domain(format!("width η must be positive, got {eta}"));
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return domain(format!("δ must lie in (0, 1], got {delta}"));
    }
    Ok(())
}

fn omega_at(eta: f64, delta: f64, d: f64) -> f64 {
    (eta / (eta + d)).powf(delta) * (eta + d).powf(-2.0 * RHO)
}

/// `Ω_{η,δ}(θ, ω) = η^δ (η + d(θ, ω))^{-δ-2ρ}`.
pub fn omega_weight(eta: f64, delta: f64, theta: &SpherePoint, omega: &SpherePoint) -> Result<f64> {
    check_weight_args(eta, delta)?;
    Ok(omega_at(eta, delta, theta.dist(omega)))
}

/// Smallest constants making the size and smoothness conditions hold for
/// `Δ_j(·, e1)` with width `2^{-j}` on the sampled points, and the
/// cancellation integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MoleculeReport {
    pub j: u32,
    pub width: f64,
    pub delta: f64,
    pub size_constant: f64,
    pub smoothness_constant: f64,
    pub integral: f64,
    pub n_samples: usize,
    pub seed: u64,
}

/// Centre `e1`; the kernel's invariance makes any other centre equivalent.
pub fn molecule_check(
    j: u32,
    delta: f64,
    n_samples: usize,
    seed: u64,
    spec: &QuadratureSpec,
) -> Result<MoleculeReport> {
    let width = 2f64.powi(-(j as i32));
    check_weight_args(width, delta)?;
    let e1 = SpherePoint::e1();
    let near = |c: &SpherePoint, rg: &mut rand_chacha::ChaCha8Rng| {
        let eps = 10f64.powf(rg.random_range(-8.0..0.3));
        let g = SpherePoint::random(rg);
        SpherePoint::normalize(*c.point() + g.point().scale(eps)).unwrap_or(g)
    };
    let chunks: Vec<_> = rng::chunks(n_samples).collect();
    let (size, smooth) = chunks
        .par_iter()
        .map(|&(id, _, len)| {
            let mut rg = rng::stream(seed, id);
            let (mut size, mut smooth) = (0f64, 0f64);
            for _ in 0..len {
                let th = if rg.random::<bool>() { SpherePoint::random(&mut rg) } else { near(&e1, &mut rg) };
                let th2 = near(&th, &mut rg);
                let (d1, d2) = (th.dist(&e1), th2.dist(&e1));
                let (m1, m2) = (delta_j(j, &th, &e1), delta_j(j, &th2, &e1));
                let (w1, w2) = (omega_at(width, delta, d1), omega_at(width, delta, d2));
                size = size.max(m1.abs() / w1);
                let dd = th.dist(&th2);
                if dd > 0.0 {
                    smooth = smooth.max((m1 - m2).abs() / ((dd / width).powf(delta) * (w1 + w2)));
                }
            }
            (size, smooth)
        })
        .reduce(|| (0.0, 0.0), |a, b| (a.0.max(b.0), a.1.max(b.1)));
    let h = SpectralParam::harmonic();
    let (a, b) = (eta_j(j + 1), eta_j(j));
    let integral = zonal_integrate_focused(
        |u, v| {
            let outer = poisson_zonal(h, a, u, v);
            let inner = if b == 0.0 { Complex64::new(1.0, 0.0) } else { poisson_zonal(h, b, u, v) };
            outer - inner
        },
        None,
        spec,
    )?;
    Ok(MoleculeReport {
        j,
        width,
        delta,
        size_constant: size,
        smoothness_constant: smooth,
        integral: integral.re,
        n_samples,
        seed,
    })
}

/// Least-squares exponent `p` in `c_j ~ j^p` over `j ≥ 3`; linear growth
/// is `p ≤ 1`. The first steps are excluded: `η_0 = 0` and the wide
/// kernels of `Δ_1`, `Δ_2` are still far from the small-width regime.
pub fn growth_exponent(c: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = c.iter().enumerate().skip(3).map(|(j, &x)| ((j as f64).ln(), x.ln())).collect();
    if pts.len() < 2 {
        return 0.0;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radii() {
        assert_eq!(eta_j(0), 0.0);
        assert_eq!(eta_j(1), 0.8);
        let mut prev = 0.0;
        for j in 1..20 {
            let e = eta_j(j);
            assert!(e > prev && e < 1.0);
            assert!((1.0 - e - one_minus_eta(j)).abs() < 1e-15);
            prev = e;
        }
    }

    #[test]
    fn weight_on_diagonal_and_errors() {
        let p = SpherePoint::e2();
        for eta in [0.5, 0.125, 2f64.powi(-6)] {
            assert_eq!(omega_weight(eta, 1.0, &p, &p).unwrap(), eta.powf(-2.0 * RHO));
        }
        assert!(omega_weight(0.0, 0.5, &p, &p).is_err());
        assert!(omega_weight(0.5, 0.0, &p, &p).is_err());
        assert!(omega_weight(0.5, 1.5, &p, &p).is_err());
    }

    #[test]
    fn cancellation() {
        let spec = QuadratureSpec::default();
        for j in 0..=6 {
            let r = molecule_check(j, 1.0, 2000, 1, &spec).unwrap();
            assert!(r.integral.abs() < 1e-8, "j={j}: {}", r.integral);
        }
    }

    #[test]
    fn constants_grow_at_most_linearly() {
        let spec = QuadratureSpec::default();
        let reps: Vec<_> = (0..=6).map(|j| molecule_check(j, 1.0, 20_000, 3, &spec).unwrap()).collect();
        for r in &reps {
            assert!(r.size_constant.is_finite() && r.smoothness_constant.is_finite());
        }
        let size = growth_exponent(&reps.iter().map(|r| r.size_constant).collect::<Vec<_>>());
        let smooth = growth_exponent(&reps.iter().map(|r| r.smoothness_constant).collect::<Vec<_>>());
        assert!(size <= 1.0 && smooth <= 1.0, "{size} {smooth}");
    }

    #[test]
    fn exponent_of_power_laws() {
        let c: Vec<f64> = (0..8).map(|j| 3.0 * (j as f64).powi(2)).collect();
        assert!((growth_exponent(&c) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn delta_matches_kernel_difference() {
        use crate::geometry::OctPair;
        use crate::poisson::poisson_kernel;
        let mut rg = rng::stream(5, 0);
        for _ in 0..100 {
            let th = SpherePoint::random(&mut rg);
            let w = SpherePoint::random(&mut rg);
            let j = 2;
            let x: OctPair = th.point().scale(eta_j(j + 1));
            let y: OctPair = th.point().scale(eta_j(j));
            let d = poisson_kernel(&x, &w).unwrap() - poisson_kernel(&y, &w).unwrap();
            assert!((d - delta_j(j, &th, &w)).abs() < 1e-9 * (1.0 + d.abs()));
        }
    }
}
