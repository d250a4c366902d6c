//! Poisson transform on the octonionic hyperbolic plane, Hardy-type and
//! `M₂` norms, the inversion functional `g_t`, operator-norm estimates,
//! Calderón–Zygmund checks and molecules.

pub mod cz;
pub mod kernels;
pub mod molecules;
pub mod opnorm;

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{argument, domain, numeric, Error, Result};
use crate::geometry::{OctPair, SpherePoint};
use crate::quadrature::{
    ball_integrate_radial, gauss_legendre, radial_rule, sphere_area, sphere_mean, zonal_integrate_focused, Estimate,
    QuadratureSpec,
};
use crate::rng;
use crate::special::{hardy_profile, hc_c_function, spherical_fn_at, KTypeIndex, RadialPoint, SpectralParam, RHO};

pub use cz::{cz_suite, CzConfig, CzRecord, CzReport};
pub use kernels::{
    one_minus_r_bracket, poisson_kernel, poisson_kernel_lambda, poisson_kernel_polar, poisson_zonal, szego_kernel,
    szego_zonal, zonal_gap_sqr,
};
pub use molecules::{delta_j, eta_j, growth_exponent, molecule_check, omega_weight, MoleculeReport};
pub use opnorm::{operator_norm_est, operator_norm_spectral, OpNormResult};

/// A function on the boundary sphere, described so the transform can pick
/// the cheapest exact route.
#[derive(Clone)]
pub enum BoundaryFunction {
    Constant(Complex64),
    /// Depends on `ω` only through `(Re ω1, |Im ω1|)`.
    Zonal(Arc<dyn Fn(f64, f64) -> Complex64 + Send + Sync>),
    Callable(Arc<dyn Fn(&SpherePoint) -> Complex64 + Send + Sync>),
}

impl BoundaryFunction {
    pub fn eval(&self, w: &SpherePoint) -> Complex64 {
        match self {
            BoundaryFunction::Constant(c) => *c,
            BoundaryFunction::Zonal(g) => {
                let x1 = w.point().x1;
                g(x1.re(), x1.im().norm())
            }
            BoundaryFunction::Callable(g) => g(w),
        }
    }
}

/// A function on the ball, either radial or general.
#[derive(Clone, Copy)]
pub enum BallFn<'a> {
    Radial(&'a (dyn Fn(&RadialPoint) -> Result<Complex64> + Sync)),
    General(&'a (dyn Fn(&OctPair) -> Complex64 + Sync)),
}

/// `P_λ f(x) = ∫ P_λ(x, ω) f(ω) dω`.
///
/// Constant data, and zonal data at points on the real `e1` axis, go
/// through the pole-centred zonal rule (exact to quadrature accuracy).
/// Everything else is sphere Monte Carlo.
pub fn poisson_transform(
    lambda: SpectralParam,
    f: &BoundaryFunction,
    x: &OctPair,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    spec.validate()?;
    let r = x.norm();
    if !(r <= spec.r_cap) {
        return Err(Error::Refused(format!("|x| = {r} exceeds r_cap = {}", spec.r_cap)));
    }
    let exact = |value: Complex64| Estimate { value, std_err: 0.0, n: 0 };
    if r == 0.0 {
        // P_λ(0, ω) = 1
        return match f {
            BoundaryFunction::Constant(c) => Ok(exact(*c)),
            BoundaryFunction::Zonal(g) => Ok(exact(zonal_integrate_focused(|u, v| g(u, v), None, spec)?)),
            BoundaryFunction::Callable(g) => sphere_mean(|w| g(w), spec.n_mc, rng::derive(spec.seed, 0x9015)),
        };
    }
    match f {
        BoundaryFunction::Constant(c) => {
            let v = zonal_integrate_focused(|u, v| poisson_zonal(lambda, r, u, v), None, spec)?;
            Ok(exact(v * c))
        }
        BoundaryFunction::Zonal(g) if on_real_axis(x) => {
            // x = ±r e1; for -r e1 substitute ω1 → -ω1
            let sign = x.x1.re().signum();
            let v = zonal_integrate_focused(|u, v| poisson_zonal(lambda, r, u, v) * g(sign * u, v), None, spec)?;
            Ok(exact(v))
        }
        _ => sphere_mean(
            |w| match poisson_kernel_lambda(lambda, x, w) {
                Ok(k) => k * f.eval(w),
                Err(_) => Complex64::new(f64::NAN, 0.0),
            },
            spec.n_mc,
            rng::derive(spec.seed, 0x9015),
        ),
    }
}

fn on_real_axis(x: &OctPair) -> bool {
    x.x2.norm() == 0.0 && x.x1.im().norm() == 0.0
}

fn check_r_grid(r_grid: &[f64], r_cap: f64) -> Result<()> {
    if r_grid.is_empty() {
        return argument("r-grid is empty");
    }
    if r_grid.windows(2).any(|w| !(w[0] < w[1])) {
        return argument("r-grid must be strictly increasing");
    }
    if !(r_grid[0] >= 0.0 && r_grid[r_grid.len() - 1] <= r_cap) {
        return domain(format!("r-grid must lie in [0, {r_cap}]"));
    }
    Ok(())
}

fn check_t_grid(t_grid: &[f64]) -> Result<()> {
    if t_grid.is_empty() {
        return argument("t-grid is empty");
    }
    if t_grid.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
        return domain("t-grid entries must be positive and finite");
    }
    Ok(())
}

/// The grid `r = 1 - 2^{-k/m}`, `k = 0..`, up to `r_max`, with `r_max` appended.
pub fn boundary_r_grid(per_octave: u32, r_max: f64) -> Vec<f64> {
    let mut g: Vec<f64> =
        (0..).map(|k| 1.0 - 2f64.powf(-(k as f64) / per_octave as f64)).take_while(|&r| r < r_max).collect();
    g.push(r_max);
    g
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HardyNormResult {
    pub value: f64,
    pub argmax_r: f64,
    pub r_grid: Vec<f64>,
    pub per_r: Vec<f64>,
}

/// Grid estimate of `‖F‖_{*,p} = sup_r (1-r²)^{-ρ/2} (∫ |F(rθ)|^p dθ)^{1/p}`.
pub fn hardy_norm(f: BallFn<'_>, p: f64, r_grid: &[f64], spec: &QuadratureSpec) -> Result<HardyNormResult> {
    spec.validate()?;
    if !(p >= 1.0 && p.is_finite()) {
        return domain(format!("exponent p must be finite and ≥ 1, got {p}"));
    }
    check_r_grid(r_grid, spec.r_cap)?;
    let mut per_r = Vec::with_capacity(r_grid.len());
    for (i, &r) in r_grid.iter().enumerate() {
        let pt = RadialPoint::from_r(r)?;
        let mean = match f {
            BallFn::Radial(g) => g(&pt)?.norm(),
            BallFn::General(g) => {
                let seed = rng::derive(spec.seed, 0x4A2D ^ i as u64);
                let est =
                    sphere_mean(|th| Complex64::new(g(&th.point().scale(r)).norm().powf(p), 0.0), spec.n_mc, seed)?;
                est.value.re.powf(1.0 / p)
            }
        };
        per_r.push(pt.one_minus_r2.powf(-RHO / 2.0) * mean);
    }
    let (i, &value) = per_r.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).expect("grid is non-empty");
    Ok(HardyNormResult { value, argmax_r: r_grid[i], r_grid: r_grid.to_vec(), per_r })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct M2Result {
    pub value: f64,
    pub argmax_t: f64,
    pub t_grid: Vec<f64>,
    pub per_t: Vec<f64>,
}

/// Grid estimate of `M₂(F) = sup_t ((1/t) ∫_{B(0,t)} |F|² dμ)^{1/2}`.
pub fn m2_norm(f: BallFn<'_>, t_grid: &[f64], spec: &QuadratureSpec) -> Result<M2Result> {
    spec.validate()?;
    check_t_grid(t_grid)?;
    let mut per_t = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let integral = match f {
            BallFn::Radial(g) => ball_integrate_radial(|p| Ok(Complex64::new(g(p)?.norm_sqr(), 0.0)), t, spec)?.re,
            BallFn::General(g) => {
                crate::quadrature::ball_integrate(|x| Complex64::new(g(x).norm_sqr(), 0.0), t, spec)?.value.re
            }
        };
        per_t.push((integral / t).sqrt());
    }
    let (i, &value) = per_t.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).expect("grid is non-empty");
    Ok(M2Result { value, argmax_t: t_grid[i], t_grid: t_grid.to_vec(), per_t })
}

/// `g_t` for boundary data in the K-type `V^{lm}`, divided by the data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GtResult {
    pub lambda: f64,
    pub k: KTypeIndex,
    pub t: f64,
    /// `(1/t) ∫_{B(0,t)} |Φ_{λ,lm}|² dμ`.
    pub g_t: f64,
    /// Mean of the integrand density over whole periods ending at `t`.
    pub limit: f64,
    pub periods: u32,
}

/// Radial closed form of the inversion functional.
///
/// For `f ∈ V^{lm}` the functional is `g_t(ω) = κ(t) f(ω)` with
/// `κ(t) = (1/t) ∫_{B(0,t)} |Φ_{λ,lm}(|x|)|² dμ(x)`. The density
/// `h(τ) = |∂B| r^15 |(1-r²)^{-ρ/2} Φ|²` approaches a periodic function of
/// period `π/λ`, so `κ` converges like `1/t`; `limit` averages `h` over the
/// largest whole number of periods in `[t/2, t]` and converges much faster.
pub fn boundary_recover_gt(lambda: SpectralParam, k: KTypeIndex, t: f64, spec: &QuadratureSpec) -> Result<GtResult> {
    spec.validate()?;
    if !lambda.is_real() {
        return domain("the inversion functional needs real λ");
    }
    let lam = lambda.lambda().re.abs();
    let h = |p: &RadialPoint| -> Result<f64> {
        let v = hardy_profile(lambda, k, p)?;
        Ok(sphere_area() * p.r.powi(15) * v.norm_sqr())
    };
    let integral =
        ball_integrate_radial(|p| Ok(Complex64::new(spherical_fn_at(lambda, k, p)?.norm_sqr(), 0.0)), t, spec)?;
    let period = PI / lam;
    let periods = ((t / 2.0) / period).floor().max(1.0) as u32;
    let a = (t - periods as f64 * period).max(0.0);
    let (x, w) = gauss_legendre(16);
    let mut acc = 0.0;
    let panels = 2 * periods;
    let width = (t - a) / panels as f64;
    for i in 0..panels {
        let lo = a + i as f64 * width;
        for (xi, wi) in x.iter().zip(&w) {
            let tau = lo + 0.5 * width * (xi + 1.0);
            acc += 0.5 * width * wi * h(&RadialPoint::from_tau(tau)?)?;
        }
    }
    let limit = acc / (t - a);
    if !(integral.re.is_finite() && limit.is_finite()) {
        return numeric(format!("inversion functional not finite at λ = {lam}, t = {t}"));
    }
    Ok(GtResult { lambda: lam, k, t, g_t: integral.re / t, limit, periods })
}

/// The constant `N` with `lim κ(t) = N |c(λ)|²`, measured at `λ = 1`,
/// `f ≡ 1`, `t = 32`.
pub fn inversion_normalization(spec: &QuadratureSpec) -> Result<f64> {
    let one = SpectralParam::new(1.0)?;
    let gt = boundary_recover_gt(one, KTypeIndex::ZERO, 32.0, spec)?;
    Ok(gt.limit / hc_c_function(one)?.norm_sqr())
}

/// Monte Carlo `g_t(ω) = (1/t) ∫_{B(0,t)} P_{-λ}(x, ω) F(x) dμ(x)`.
///
/// Each sphere direction is paired with its antipode, so for even `F` the
/// estimates at `ω` and `-ω` use identical summands.
pub fn boundary_recover_gt_mc(
    lambda: SpectralParam,
    f: &(dyn Fn(&OctPair) -> Complex64 + Sync),
    t: f64,
    omega: &SpherePoint,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    spec.validate()?;
    if !(t > 0.0) {
        return domain(format!("t must be positive, got {t}"));
    }
    if t.tanh() > spec.r_cap {
        return Err(Error::Refused(format!("tanh(t) = {} exceeds r_cap = {}", t.tanh(), spec.r_cap)));
    }
    let neg = lambda.negated();
    let nodes = radial_rule(t, spec.n_gauss)?;
    let weights: Vec<(f64, f64)> = nodes.iter().map(|(p, w)| (p.r, w * crate::quadrature::radial_density(p))).collect();
    let term = |x: &OctPair| match poisson_kernel_lambda(neg, x, omega) {
        Ok(k) => k * f(x),
        Err(_) => Complex64::new(f64::NAN, 0.0),
    };
    let est = sphere_mean(
        |th| {
            weights
                .iter()
                .map(|&(r, w)| {
                    let x = th.point().scale(r);
                    (term(&x) + term(&(-x))) * (0.5 * w)
                })
                .sum::<Complex64>()
        },
        spec.n_mc,
        rng::derive(spec.seed, 0x6777),
    )?;
    let s = sphere_area() / t;
    Ok(Estimate { value: est.value * s, std_err: est.std_err * s, n: est.n })
}
