//! `L²` operator norm of `Ψ_r(λ)`: sampled power iteration and the exact
//! K-type spectrum.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{argument, domain, numeric, Result};
use crate::quadrature::sample_sphere;
use crate::rng;
use crate::special::{hardy_profile, KTypeIndex, RadialPoint, SpectralParam};

use super::kernels::szego_kernel;

/// Largest radius accepted by [`operator_norm_est`].
pub const R_CAP: f64 = 0.999;

const MAX_ITER: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OpNormResult {
    pub value: f64,
    /// `‖Gv - σ²v‖ / σ²` for the final iterate of the Gram operator `G`.
    pub residual: f64,
    pub iterations: usize,
    pub n: usize,
    pub r: f64,
}

/// Largest singular value of `[Ψ_r(λ, θ_i, ω_j) / n]` over `n` uniform
/// points of each kind, by power iteration on `K*K`.
pub fn operator_norm_est(lambda: SpectralParam, r: f64, n: usize, seed: u64) -> Result<OpNormResult> {
    if n < 16 {
        return argument(format!("n must be at least 16, got {n}"));
    }
    if !(0.0..=R_CAP).contains(&r) {
        return domain(format!("r = {r} outside [0, {R_CAP}]"));
    }
    let thetas = sample_sphere(n, rng::derive(seed, 0x7E7A))?;
    let omegas = sample_sphere(n, rng::derive(seed, 0x03E6))?;
    let scale = 1.0 / n as f64;
    let k: Vec<Complex64> = thetas
        .par_iter()
        .flat_map_iter(|th| omegas.iter().map(move |w| szego_kernel(lambda, r, th, w) * scale))
        .collect();
    if k.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return numeric("kernel matrix has non-finite entries");
    }

    let apply = |v: &[Complex64]| -> Vec<Complex64> {
        let kv: Vec<Complex64> = k.par_chunks(n).map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (row, y) in k.chunks(n).zip(&kv) {
            for (o, a) in out.iter_mut().zip(row) {
                *o += a.conj() * y;
            }
        }
        out
    };
    let norm = |v: &[Complex64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();

    let mut v = vec![Complex64::new(1.0 / (n as f64).sqrt(), 0.0); n];
    let mut prev = 0.0;
    for it in 1..=MAX_ITER {
        let u = apply(&v);
        let mu: f64 = v.iter().zip(&u).map(|(a, b)| (a.conj() * b).re).sum();
        let residual = v.iter().zip(&u).map(|(a, b)| (b - a * mu).norm_sqr()).sum::<f64>().sqrt() / mu;
        let nu = norm(&u);
        if !(nu > 0.0 && nu.is_finite()) {
            return numeric("power iteration collapsed");
        }
        let converged = residual < 1e-8 || (it > 1 && (mu - prev).abs() <= 1e-13 * mu);
        if converged {
            return Ok(OpNormResult { value: mu.sqrt(), residual, iterations: it, n, r });
        }
        prev = mu;
        v = u.into_iter().map(|z| z / nu).collect();
    }
    numeric(format!("power iteration did not converge in {MAX_ITER} steps (n = {n}, r = {r})"))
}

/// Exact `‖Ψ_r(λ)‖` restricted to K-types with `l ≤ l_max`: `Ψ_r(λ)` acts
/// on `V^{lm}` by `(1-r²)^{-s} Φ_{λ,lm}(r)`.
pub fn operator_norm_spectral(lambda: SpectralParam, r: f64, l_max: u32) -> Result<f64> {
    let p = RadialPoint::from_r(r)?;
    let mut best: f64 = 0.0;
    for k in KTypeIndex::up_to(l_max) {
        best = best.max(hardy_profile(lambda, k, &p)?.norm());
    }
    Ok(best)
}
