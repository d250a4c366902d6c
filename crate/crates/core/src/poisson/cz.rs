//! Sampled Calderón–Zygmund estimates for the kernels `Ψ_r(λ)`.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{argument, domain, Result};
use crate::geometry::{bracket, OctPair, SpherePoint};
use crate::quadrature::{zonal_integrate_focused, QuadratureSpec};
use crate::rng;
use crate::special::{SpectralParam, RHO};

use super::kernels::{one_minus_r_bracket, szego_kernel, szego_zonal};

/// Slack allowed in the exact inequalities.
pub const EXACT_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CzConfig {
    pub r_grid: Vec<f64>,
    pub delta_grid: Vec<f64>,
    /// Pairs (and triples) sampled for the pointwise estimates.
    pub n_samples: usize,
    pub seed: u64,
    /// Distances `d(θ, e1)` at which the averaged smoothness integral is measured.
    pub q2_dists: Vec<f64>,
}

impl Default for CzConfig {
    fn default() -> Self {
        CzConfig {
            r_grid: vec![0.5, 0.9, 0.99],
            delta_grid: vec![0.2, 0.5, 1.0],
            n_samples: 1_000_000,
            seed: 0,
            q2_dists: vec![0.3, 0.5, 0.7],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CzRecord {
    pub name: String,
    pub r: Option<f64>,
    pub sampled_max_ratio: f64,
    pub fitted_constant: f64,
    pub violations: u64,
    pub n_samples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CzReport {
    pub lambda: f64,
    pub records: Vec<CzRecord>,
}

impl CzReport {
    pub fn get(&self, name: &str, r: Option<f64>) -> Option<&CzRecord> {
        self.records.iter().find(|c| c.name == name && c.r == r)
    }

    pub fn violations(&self) -> u64 {
        self.records.iter().map(|c| c.violations).sum()
    }

    /// Ratio of largest to smallest per-radius fitted constant of `name`.
    pub fn r_spread(&self, name: &str) -> f64 {
        let v: Vec<f64> =
            self.records.iter().filter(|c| c.name == name && c.r.is_some()).map(|c| c.fitted_constant).collect();
        let hi = v.iter().cloned().fold(f64::MIN, f64::max);
        let lo = v.iter().cloned().fold(f64::MAX, f64::min);
        hi / lo
    }
}

/// A point near `θ`: half the draws are uniform, the rest perturb `θ` by a
/// log-uniform amount in `[1e-6, 1]`.
fn partner<R: Rng + ?Sized>(theta: &SpherePoint, rng: &mut R) -> SpherePoint {
    if rng.random::<bool>() {
        return SpherePoint::random(rng);
    }
    let eps = 10f64.powf(rng.random_range(-6.0..0.0));
    let g = SpherePoint::random(rng);
    SpherePoint::normalize(*theta.point() + g.point().scale(eps)).unwrap_or(g)
}

#[derive(Clone, Copy, Default)]
struct Acc {
    max: f64,
    violations: u64,
}

impl Acc {
    fn merge(self, o: Acc) -> Acc {
        Acc { max: self.max.max(o.max), violations: self.violations + o.violations }
    }
}

/// Runs a sampler over `n` draws split into seeded chunks; per-draw output
/// is one accumulator per slot.
fn sample<F>(n: usize, seed: u64, slots: usize, f: F) -> Vec<Acc>
where
    F: Fn(&mut rand_chacha::ChaCha8Rng, &mut [Acc]) + Sync,
{
    let chunks: Vec<_> = rng::chunks(n).collect();
    chunks
        .par_iter()
        .map(|&(id, _, len)| {
            let mut r = rng::stream(seed, id);
            let mut acc = vec![Acc::default(); slots];
            for _ in 0..len {
                f(&mut r, &mut acc);
            }
            acc
        })
        .reduce(|| vec![Acc::default(); slots], |a, b| a.into_iter().zip(b).map(|(x, y)| x.merge(y)).collect())
}

/// All estimates for one `λ`.
pub fn cz_suite(lambda: SpectralParam, config: &CzConfig, spec: &QuadratureSpec) -> Result<CzReport> {
    spec.validate()?;
    if lambda.abs() == 0.0 {
        return domain("λ must be nonzero");
    }
    if config.n_samples < 1 || config.r_grid.is_empty() {
        return argument("CZ suite needs samples and a non-empty r-grid");
    }
    if config.r_grid.iter().any(|r| !(0.0..1.0).contains(r)) {
        return domain("r-grid must lie in [0, 1)");
    }
    let n = config.n_samples;
    let nr = config.r_grid.len();
    let grid = &config.r_grid;
    let la = lambda.abs();
    let mut records = Vec::new();
    let mut push = |name: &str, r: Option<f64>, ratio: f64, fitted: f64, violations: u64, n: usize, seed: u64| {
        records.push(CzRecord {
            name: name.to_string(),
            r,
            sampled_max_ratio: ratio,
            fitted_constant: fitted,
            violations,
            n_samples: n,
            seed,
        })
    };

    // gap bound and size estimate on pairs; slot k < nr is the gap bound at r_k,
    // slot nr + k the size estimate
    let seed_pairs = rng::derive(config.seed, 0x45);
    let acc = sample(n, seed_pairs, 2 * nr, |rg, acc| {
        let th = SpherePoint::random(rg);
        let w = partner(&th, rg);
        let full = th.one_minus_bracket(&w).norm();
        if full == 0.0 {
            return;
        }
        for (k, &r) in grid.iter().enumerate() {
            let part = one_minus_r_bracket(r, &th, &w).norm();
            let ratio = full / part;
            let a = &mut acc[k];
            a.max = a.max.max(ratio);
            if ratio > 2.0 * (1.0 + EXACT_SLACK) {
                a.violations += 1;
            }
            let psi_d = szego_kernel(lambda, r, &th, &w).norm() * full.powf(RHO);
            acc[nr + k].max = acc[nr + k].max.max(psi_d);
        }
    });
    for (k, &r) in grid.iter().enumerate() {
        push("gap", Some(r), acc[k].max / 2.0, acc[k].max, acc[k].violations, n, seed_pairs);
    }
    for (k, &r) in grid.iter().enumerate() {
        push("size", Some(r), acc[nr + k].max, acc[nr + k].max, 0, n, seed_pairs);
    }
    let all_i = acc[nr..].iter().map(|a| a.max).fold(0.0, f64::max);
    push("size", None, all_i, all_i, 0, n, seed_pairs);

    // |[θ - θ', ω]| ≤ d(θ, θ')(d(θ, θ') + 2 d(θ, ω)) on triples
    let seed_tri = rng::derive(config.seed, 0x47);
    let acc = sample(n, seed_tri, 1, |rg, acc| {
        let th = SpherePoint::random(rg);
        let th2 = partner(&th, rg);
        let w = partner(&th, rg);
        let diff: OctPair = *th.point() - *th2.point();
        let lhs = bracket(&diff, w.point()).norm();
        let d = th.dist(&th2);
        let rhs = d * (d + 2.0 * th.dist(&w));
        if rhs > 0.0 {
            acc[0].max = acc[0].max.max(lhs / rhs);
        }
        if lhs > rhs + EXACT_SLACK {
            acc[0].violations += 1;
        }
    });
    push("bracket_lipschitz", None, acc[0].max, acc[0].max, acc[0].violations, n, seed_tri);

    // smoothness on triples with d(θ, ω) ≥ 2 d(θ, θ')
    let seed_ii = rng::derive(config.seed, 0x22);
    let acc = sample(n, seed_ii, nr, |rg, acc| {
        let th = SpherePoint::random(rg);
        let eps = 10f64.powf(rg.random_range(-6.0..0.0));
        let g = SpherePoint::random(rg);
        let Ok(th2) = SpherePoint::normalize(*th.point() + g.point().scale(eps)) else {
            return;
        };
        let w = partner(&th, rg);
        let d12 = th.dist(&th2);
        let dw = th.dist(&w);
        if d12 == 0.0 || dw < 2.0 * d12 {
            return;
        }
        for (k, &r) in grid.iter().enumerate() {
            let diff = (szego_kernel(lambda, r, &th, &w) - szego_kernel(lambda, r, &th2, &w)).norm();
            let ratio = diff * dw.powf(2.0 * RHO + 1.0) / (d12 * (1.0 + la));
            acc[k].max = acc[k].max.max(ratio);
        }
    });
    for (k, &r) in grid.iter().enumerate() {
        push("smoothness", Some(r), acc[k].max, acc[k].max, 0, n, seed_ii);
    }
    let all_ii = acc.iter().map(|a| a.max).fold(0.0, f64::max);
    push("smoothness", None, all_ii, all_ii, 0, n, seed_ii);

    // cancellation by zonal quadrature over the ball d(ω, e1) ≤ δ
    let mut all_iii: f64 = 0.0;
    for &r in grid {
        let mut best: f64 = 0.0;
        for &delta in &config.delta_grid {
            if !(delta > 0.0) {
                return domain(format!("δ must be positive, got {delta}"));
            }
            let v = zonal_integrate_focused(|u, v| szego_zonal(lambda, r, u, v), Some(delta * delta), spec)?;
            best = best.max(v.norm() / (1.0 + 1.0 / la));
        }
        all_iii = all_iii.max(best);
        push("cancellation", Some(r), best, best, 0, config.delta_grid.len(), 0);
    }
    push("cancellation", None, all_iii, all_iii, 0, config.delta_grid.len() * nr, 0);

    // averaged smoothness, Monte Carlo over ω
    let e1 = SpherePoint::e1();
    for (i, &d0) in config.q2_dists.iter().enumerate() {
        let seed_q = rng::derive(config.seed, 0x0200 + i as u64);
        let th = point_at_distance(d0)?;
        let mut best: f64 = 0.0;
        for &r in grid {
            let est = crate::quadrature::sphere_mean(
                |w| {
                    if w.dist(&e1) > 2.0 * th.dist(&e1) {
                        let d = szego_kernel(lambda, r, w, &th) - szego_kernel(lambda, r, w, &e1);
                        num_complex::Complex64::new(d.norm(), 0.0)
                    } else {
                        num_complex::Complex64::new(0.0, 0.0)
                    }
                },
                spec.n_mc,
                seed_q,
            )?;
            best = best.max(est.value.re / (1.0 + la));
        }
        push("averaged_smoothness", Some(d0), best, best, 0, spec.n_mc, seed_q);
    }

    Ok(CzReport { lambda: la, records })
}

/// The point `θ = (θ1, 0)` with `θ1` on the unit circle of `C` and
/// `|1 - θ1| = d0²`, so `d(θ, e1) = d0`.
fn point_at_distance(d0: f64) -> Result<SpherePoint> {
    let t = d0 * d0;
    if !(t > 0.0 && t <= 2.0) {
        return domain(format!("distance {d0} out of range"));
    }
    // θ1 = 1 - t cos α + i t sin α, and |θ1| = 1 gives cos α = t/2
    let ca = t / 2.0;
    let sa = (1.0 - ca * ca).sqrt();
    let mut c = [0.0; 16];
    c[0] = 1.0 - t * ca;
    c[1] = t * sa;
    SpherePoint::normalize(OctPair::from_coords(&c)?)
}
