//! Spectral parameters, the Harish-Chandra c-function and the generalized
//! spherical functions `Φ_{λ,lm}` of the octonionic hyperbolic plane.

use num_complex::Complex64;
use serde::Serialize;

use super::gamma::{ln_gamma, pochhammer};
use super::hypergeometric::gauss_2f1_split;
use crate::error::{argument, domain, Result};

/// Half the sum of positive roots, `ρ = 11`.
pub const RHO: f64 = 11.0;

/// Spectral parameter `λ`. Real in all estimates; complex values are allowed
/// for the harmonic special case `λ = -iρ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralParam {
    lambda: Complex64,
}

impl SpectralParam {
    pub fn new(lambda: f64) -> Result<Self> {
        Self::complex(Complex64::new(lambda, 0.0))
    }

    pub fn complex(lambda: Complex64) -> Result<Self> {
        if !(lambda.re.is_finite() && lambda.im.is_finite()) {
            return argument(format!("non-finite spectral parameter {lambda}"));
        }
        Ok(SpectralParam { lambda })
    }

    /// `λ = -iρ`, for which `P_λ` is the harmonic Poisson kernel.
    pub fn harmonic() -> Self {
        SpectralParam { lambda: Complex64::new(0.0, -RHO) }
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    /// `|λ|`.
    pub fn abs(&self) -> f64 {
        self.lambda.norm()
    }

    pub fn is_real(&self) -> bool {
        self.lambda.im == 0.0
    }

    pub fn negated(&self) -> Self {
        SpectralParam { lambda: -self.lambda }
    }

    /// `s = (iλ + ρ) / 2`.
    pub fn exponent(&self) -> Complex64 {
        (Complex64::i() * self.lambda + RHO) / 2.0
    }

    /// `1 + |λ| + 1/|λ|`, the growth factor of the operator-norm bounds.
    pub fn growth(&self) -> f64 {
        let a = self.abs();
        1.0 + a + 1.0 / a
    }
}

/// K-type index `(l, m)` with `l ≥ m ≥ 0` and `l ± m` even.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct KTypeIndex {
    pub l: u32,
    pub m: u32,
}

impl KTypeIndex {
    pub fn new(l: u32, m: u32) -> Result<Self> {
        if m > l || (l + m) % 2 != 0 {
            return argument(format!("invalid K-type ({l},{m}): need l ≥ m ≥ 0, l ± m even"));
        }
        Ok(KTypeIndex { l, m })
    }

    pub const ZERO: KTypeIndex = KTypeIndex { l: 0, m: 0 };

    /// All valid indices with `l ≤ l_max`.
    pub fn up_to(l_max: u32) -> Vec<KTypeIndex> {
        (0..=l_max).flat_map(|l| (l % 2..=l).step_by(2).map(move |m| KTypeIndex { l, m })).collect()
    }
}

/// A radius in the ball carried together with `1 - r²` and the geodesic
/// distance `τ = artanh r`, so that points far out towards the boundary do
/// not lose `1 - r²` to rounding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialPoint {
    pub r: f64,
    pub one_minus_r2: f64,
    pub tau: f64,
}

impl RadialPoint {
    pub fn from_r(r: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&r) {
            return domain(format!("radius {r} outside [0, 1)"));
        }
        Ok(RadialPoint { r, one_minus_r2: (1.0 - r) * (1.0 + r), tau: r.atanh() })
    }

    pub fn from_tau(tau: f64) -> Result<Self> {
        if !(tau >= 0.0 && tau.is_finite()) {
            return domain(format!("geodesic radius {tau} must be finite and ≥ 0"));
        }
        let ch = tau.cosh();
        Ok(RadialPoint { r: tau.tanh(), one_minus_r2: 1.0 / (ch * ch), tau })
    }
}

/// Harish-Chandra c-function
/// `c(λ) = Γ(8)Γ(iλ) / (Γ(s-3)Γ(s))`, `s = (iλ+ρ)/2`.
pub fn hc_c_function(lambda: SpectralParam) -> Result<Complex64> {
    let il = Complex64::i() * lambda.lambda();
    if il.norm() == 0.0 {
        return domain("c(λ) has a pole at λ = 0");
    }
    let s = lambda.exponent();
    let l = ln_gamma(Complex64::new(8.0, 0.0))? + ln_gamma(il)? - ln_gamma(s - 3.0)? - ln_gamma(s)?;
    Ok(l.exp())
}

/// `(1-r²)^{-shift} Φ_{λ,lm}(r)`, evaluated with the weight folded into the
/// power of `1-r²` so that neither factor underflows near the boundary.
fn phi_scaled(lambda: SpectralParam, k: KTypeIndex, p: &RadialPoint, shift: f64) -> Result<Complex64> {
    let s = lambda.exponent();
    let (l, m) = (k.l, k.m);
    let pre = pochhammer(s, (l + m) / 2) * pochhammer(s - 3.0, (l - m) / 2) / pochhammer(Complex64::new(8.0, 0.0), l);
    let a = s + f64::from(l + m) / 2.0;
    let b = s + f64::from(l - m) / 2.0 - 3.0;
    let c = Complex64::new(f64::from(l) + 8.0, 0.0);
    let f = gauss_2f1_split(a, b, c, p.r * p.r, p.one_minus_r2)?;
    let weight = ((s - shift) * p.one_minus_r2.ln()).exp();
    Ok(pre * p.r.powi(l as i32) * weight * f)
}

/// Generalized spherical function
/// `Φ_{λ,lm}(r) = (s)_{(l+m)/2} (s-3)_{(l-m)/2} / (8)_l · r^l (1-r²)^s
/// ₂F₁(s+(l+m)/2, s+(l-m)/2-3; l+8; r²)`.
pub fn spherical_fn(lambda: SpectralParam, k: KTypeIndex, r: f64) -> Result<Complex64> {
    spherical_fn_at(lambda, k, &RadialPoint::from_r(r)?)
}

pub fn spherical_fn_at(lambda: SpectralParam, k: KTypeIndex, p: &RadialPoint) -> Result<Complex64> {
    phi_scaled(lambda, k, p, 0.0)
}

/// Hardy-weighted profile `(1-r²)^{-ρ/2} Φ_{λ,lm}(r)`.
pub fn hardy_profile(lambda: SpectralParam, k: KTypeIndex, p: &RadialPoint) -> Result<Complex64> {
    phi_scaled(lambda, k, p, RHO / 2.0)
}
