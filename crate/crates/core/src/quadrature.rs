//! Integration on the sphere `∂B(O^2) ⊂ R^16` and on the ball against the
//! invariant measure `dμ = (1-|x|^2)^{-12} dm`.
//!
//! Sphere integrals use the probability measure `dω`. A function depending
//! only on `ω1` through `(u, v) = (Re ω1, |Im ω1|)` reduces to the half-disk
//!
//! ```text
//! ∫ g dω = (896/π) ∬_{u²+v²<1, v>0} g(u, v) (1-u²-v²)³ v⁶ du dv,
//! ```
//!
//! and ball integrals factor as `S15 ∫ dτ r^15 (1-r²)^{-11} ∫ F(rθ) dθ` in
//! the geodesic radius `τ = artanh r`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{argument, domain, Error, Result};
use crate::geometry::{OctPair, SpherePoint};
use crate::rng;
use crate::special::RadialPoint;

/// Normalization of the zonal half-disk rule, `896/π`.
pub const C_ZONAL: f64 = 896.0 / PI;

/// Total area of the unit sphere `S^15`, `2π^8/Γ(8)`.
pub fn sphere_area() -> f64 {
    2.0 * PI.powi(8) / 5040.0
}

/// Sample and node budgets shared by the integrators.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Monte Carlo sample count.
    pub n_mc: usize,
    /// Gauss nodes per axis, spread over the panels of a graded rule.
    pub n_gauss: usize,
    pub seed: u64,
    /// Largest radius at which kernels are integrated numerically.
    pub r_cap: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { n_mc: 100_000, n_gauss: 200, seed: 0, r_cap: 0.999 }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_mc < 1 {
            return argument("n_mc must be at least 1");
        }
        if self.n_gauss < 2 {
            return argument("n_gauss must be at least 2");
        }
        if !(self.r_cap > 0.0 && self.r_cap < 1.0) {
            return argument(format!("r_cap must lie in (0, 1), got {}", self.r_cap));
        }
        Ok(())
    }
}

/// A Monte Carlo or mixed estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub value: Complex64,
    pub std_err: f64,
    pub n: usize,
}

/// Running sums for a complex sample mean. Merging is associative, and
/// partials are always merged in chunk order so results are reproducible.
#[derive(Clone, Copy, Debug, Default)]
struct Moments {
    sum: Complex64,
    sum_sq: f64,
    n: usize,
}

impl Moments {
    fn push(&mut self, x: Complex64) {
        self.sum += x;
        self.sum_sq += x.norm_sqr();
        self.n += 1;
    }

    fn merge(mut self, o: Moments) -> Moments {
        self.sum += o.sum;
        self.sum_sq += o.sum_sq;
        self.n += o.n;
        self
    }

    fn estimate(&self) -> Estimate {
        let n = self.n as f64;
        let mean = self.sum / n;
        let var = if self.n > 1 { ((self.sum_sq - n * mean.norm_sqr()) / (n - 1.0)).max(0.0) } else { 0.0 };
        Estimate { value: mean, std_err: (var / n).sqrt(), n: self.n }
    }
}

/// `n` i.i.d. uniform sphere points (normalized standard Gaussians in R^16).
pub fn sample_sphere(n: usize, seed: u64) -> Result<Vec<SpherePoint>> {
    if n < 1 {
        return argument("sample_sphere needs n ≥ 1");
    }
    let chunks: Vec<_> = rng::chunks(n).collect();
    let parts: Vec<Vec<SpherePoint>> = chunks
        .par_iter()
        .map(|&(id, _, len)| {
            let mut r = rng::stream(seed, id);
            (0..len).map(|_| SpherePoint::random(&mut r)).collect()
        })
        .collect();
    Ok(parts.into_iter().flatten().collect())
}

/// Sample mean of `f` over `n` uniform sphere points, without storing them.
pub fn sphere_mean<F>(f: F, n: usize, seed: u64) -> Result<Estimate>
where
    F: Fn(&SpherePoint) -> Complex64 + Sync,
{
    if n < 1 {
        return argument("sphere_mean needs n ≥ 1");
    }
    let chunks: Vec<_> = rng::chunks(n).collect();
    let parts: Vec<Result<Moments>> = chunks
        .par_iter()
        .map(|&(id, _, len)| {
            let mut r = rng::stream(seed, id);
            let mut m = Moments::default();
            for _ in 0..len {
                let th = SpherePoint::random(&mut r);
                let x = f(&th);
                if !(x.re.is_finite() && x.im.is_finite()) {
                    return Err(Error::Numeric(format!("non-finite integrand {x} at {:?}", th.point().coords())));
                }
                m.push(x);
            }
            Ok(m)
        })
        .collect();
    let mut total = Moments::default();
    for p in parts {
        total = total.merge(p?);
    }
    Ok(total.estimate())
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { z } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = nf * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Gauss rule on `[a, b]` split into panels at `breaks` (strictly inside),
/// with `n_total` nodes shared across panels and at least 8 per panel.
fn panel_rule(a: f64, b: f64, breaks: &[f64], n_total: usize) -> Vec<(f64, f64)> {
    let mut edges = vec![a];
    edges.extend(breaks.iter().copied().filter(|&x| x > a && x < b));
    edges.push(b);
    let panels = edges.len() - 1;
    let per = (n_total / panels).max(8);
    let (gx, gw) = gauss_legendre(per);
    let mut out = Vec::with_capacity(per * panels);
    for e in edges.windows(2) {
        let (lo, hi) = (e[0], e[1]);
        let h = 0.5 * (hi - lo);
        for (x, w) in gx.iter().zip(&gw) {
            out.push((lo + h * (x + 1.0), h * w));
        }
    }
    out
}

fn check_finite(x: Complex64, where_: impl FnOnce() -> String) -> Result<Complex64> {
    if x.re.is_finite() && x.im.is_finite() {
        Ok(x)
    } else {
        Err(Error::Numeric(format!("non-finite integrand {x} at {}", where_())))
    }
}

/// Half-disk weight `(1 - u² - v²)³ v⁶`, clamped at the rim.
pub fn zonal_weight(u: f64, v: f64) -> f64 {
    let s = (1.0 - u * u - v * v).max(0.0);
    s * s * s * v.powi(6)
}

/// `∫ g(Re ω1, |Im ω1|) dω` by a tensor Gauss rule in polar coordinates
/// `(u, v) = ρ (cos φ, sin φ)` on the half-disk.
pub fn zonal_integrate<G>(g: G, spec: &QuadratureSpec) -> Result<Complex64>
where
    G: Fn(f64, f64) -> Complex64 + Sync,
{
    spec.validate()?;
    let rho = panel_rule(0.0, 1.0, &[0.5, 0.75, 0.875, 0.9375], spec.n_gauss);
    let phi = panel_rule(0.0, PI, &[PI / 4.0, PI / 2.0, 3.0 * PI / 4.0], spec.n_gauss);
    let rows: Vec<Result<Complex64>> = rho
        .par_iter()
        .map(|&(r, wr)| {
            let mut acc = Complex64::new(0.0, 0.0);
            for &(p, wp) in &phi {
                let (u, v) = (r * p.cos(), r * p.sin());
                let w = zonal_weight(u, v);
                if w == 0.0 {
                    continue;
                }
                acc += check_finite(g(u, v), || format!("(u, v) = ({u}, {v})"))? * (w * r * wr * wp);
            }
            Ok(acc)
        })
        .collect();
    let mut total = Complex64::new(0.0, 0.0);
    for r in rows {
        total += r?;
    }
    Ok(total * C_ZONAL)
}

/// Zonal integral in pole-centred coordinates around `ω1 = 1`:
/// `u = 1 - t cos α`, `v = t sin α`, `0 ≤ α < π/2`, `0 ≤ t < 2 cos α`, with
/// weight `t¹⁰ (2 cos α - t)³ sin⁶ α`. Here `t = |1 - ω1| = d(ω, e1)²`, so
/// the rule is graded geometrically in `t` to resolve integrands peaked at
/// `ω = e1`, and `t_max` restricts the integral to the ball `d(ω, e1)² < t_max`.
pub fn zonal_integrate_focused<G>(g: G, t_max: Option<f64>, spec: &QuadratureSpec) -> Result<Complex64>
where
    G: Fn(f64, f64) -> Complex64 + Sync,
{
    spec.validate()?;
    if let Some(t) = t_max {
        if !(t > 0.0) {
            return domain(format!("cap radius must be positive, got {t}"));
        }
    }
    let alpha = panel_rule(0.0, PI / 2.0, &[PI / 8.0, PI / 4.0, 3.0 * PI / 8.0], spec.n_gauss);
    // Geometric breakpoints in s = t / t_end down to 2^-30.
    let breaks: Vec<f64> = (1..=30).rev().map(|k| 2f64.powi(-k)).collect();
    let n_t = spec.n_gauss.max(8 * (breaks.len() + 1));
    let s_rule = panel_rule(0.0, 1.0, &breaks, n_t);
    let rows: Vec<Result<Complex64>> = alpha
        .par_iter()
        .map(|&(a, wa)| {
            let (ca, sa) = (a.cos(), a.sin());
            let t_end = match t_max {
                Some(t) => t.min(2.0 * ca),
                None => 2.0 * ca,
            };
            let mut acc = Complex64::new(0.0, 0.0);
            for &(s, ws) in &s_rule {
                let t = s * t_end;
                let rim = 2.0 * ca - t;
                if rim <= 0.0 {
                    continue;
                }
                let w = t.powi(10) * rim * rim * rim * sa.powi(6);
                let (u, v) = (1.0 - t * ca, t * sa);
                acc += check_finite(g(u, v), || format!("(t, α) = ({t}, {a})"))? * (w * ws * t_end * wa);
            }
            Ok(acc)
        })
        .collect();
    let mut total = Complex64::new(0.0, 0.0);
    for r in rows {
        total += r?;
    }
    Ok(total * C_ZONAL)
}

/// Breakpoints `1 - 2^-k` of the radial rule, in geodesic radius.
fn radial_breaks(t: f64) -> Vec<f64> {
    // Far out the integrands oscillate with period π/|λ| in τ, so the
    // geometric breaks are merged with a uniform grid of spacing 1/2.
    let mut b: Vec<f64> = (1..=52)
        .map(|k| (1.0 - 2f64.powi(-k)).atanh())
        .chain((1..).map(|i| 0.5 * i as f64).take_while(|&tau| tau < t))
        .filter(|&tau| tau < t)
        .collect();
    b.sort_by(f64::total_cmp);
    b.dedup_by(|a, b| (*a - *b).abs() < 0.05);
    b
}

/// Gauss nodes in `τ ∈ [0, t]` (panels split at `r = 1 - 2^-k` and at
/// multiples of 1/2), returning
/// each radius with its plain `dτ` weight.
pub fn radial_rule(t: f64, n_gauss: usize) -> Result<Vec<(RadialPoint, f64)>> {
    if !(t > 0.0 && t.is_finite()) {
        return domain(format!("ball radius t must be positive and finite, got {t}"));
    }
    if n_gauss < 2 {
        return argument("n_gauss must be at least 2");
    }
    let breaks = radial_breaks(t);
    let n_total = n_gauss.max(8 * (breaks.len() + 1));
    panel_rule(0.0, t, &breaks, n_total).into_iter().map(|(tau, w)| Ok((RadialPoint::from_tau(tau)?, w))).collect()
}

/// Radial density of `dμ` in `τ`, without the area constant:
/// `sinh¹⁵ τ cosh⁷ τ = r^15 (1-r²)^{-11}`.
pub fn radial_density(p: &RadialPoint) -> f64 {
    p.r.powi(15) * p.one_minus_r2.powi(-11)
}

/// `∫_{B(0,t)} F dμ` for `F` depending only on `|x|`.
pub fn ball_integrate_radial<F>(f: F, t: f64, spec: &QuadratureSpec) -> Result<Complex64>
where
    F: Fn(&RadialPoint) -> Result<Complex64> + Sync,
{
    spec.validate()?;
    let nodes = radial_rule(t, spec.n_gauss)?;
    let parts: Vec<Result<Complex64>> = nodes
        .par_iter()
        .map(|(p, w)| {
            let v = check_finite(f(p)?, || format!("r = {}", p.r))?;
            Ok(v * (w * radial_density(p)))
        })
        .collect();
    let mut total = Complex64::new(0.0, 0.0);
    for p in parts {
        total += p?;
    }
    Ok(total * sphere_area())
}

/// `∫_{B(0,t)} F dμ` by the radial Gauss rule composed with sphere Monte
/// Carlo: the standard error comes from the spread over sphere directions.
pub fn ball_integrate<F>(f: F, t: f64, spec: &QuadratureSpec) -> Result<Estimate>
where
    F: Fn(&OctPair) -> Complex64 + Sync,
{
    spec.validate()?;
    let nodes = radial_rule(t, spec.n_gauss)?;
    let weights: Vec<(f64, f64)> = nodes.iter().map(|(p, w)| (p.r, w * radial_density(p))).collect();
    let est = sphere_mean(
        |th| weights.iter().map(|&(r, w)| f(&th.point().scale(r)) * w).sum::<Complex64>(),
        spec.n_mc,
        rng::derive(spec.seed, 0xBA11),
    )?;
    let a = sphere_area();
    Ok(Estimate { value: est.value * a, std_err: est.std_err * a, n: est.n })
}
