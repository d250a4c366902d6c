//! Gauss hypergeometric function `₂F₁(a, b; c; z)` for complex parameters and
//! real `z ∈ [0, 1)`.
//!
//! Below [`Z_SWITCH`] the power series is summed directly. Above it the
//! two-term connection formula in powers of `1 - z` is used. Every entry
//! point also has a `_split` form taking `1 - z` as a separate argument so
//! callers that know it more accurately than `1 - z` (for example as
//! `sech² τ`) do not lose it to cancellation.

use num_complex::Complex64;

use super::dd::{Dd, DdComplex};
use crate::error::{domain, Error, Result};

/// Argument above which the connection formula replaces the direct series.
pub const Z_SWITCH: f64 = 0.75;
/// Maximum number of series terms before giving up.
pub const MAX_TERMS: usize = 10_000;
const SERIES_RTOL: f64 = 1e-16;
const SERIES_RTOL_DD: f64 = 1e-33;
const INT_TOL: f64 = 1e-12;

fn near_nonpositive_int(z: Complex64) -> bool {
    z.im.abs() < INT_TOL && z.re < 0.5 && (z.re - z.re.round()).abs() < INT_TOL
}

fn near_int(z: Complex64) -> bool {
    z.im.abs() < INT_TOL && (z.re - z.re.round()).abs() < INT_TOL
}

/// Direct power series. Terminates early when `a` or `b` is a nonpositive
/// integer, in which case `z = 1` is also accepted.
pub fn hyp2f1_series(a: Complex64, b: Complex64, c: Complex64, z: f64) -> Result<Complex64> {
    if near_nonpositive_int(c) {
        return domain(format!("2F1 parameter c = {c} is a nonpositive integer"));
    }
    if !(0.0..=1.0).contains(&z) {
        return domain(format!("2F1 series argument z = {z} outside [0, 1]"));
    }
    let mut sum = Complex64::new(1.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * z;
        sum += term;
        if term.norm() <= SERIES_RTOL * sum.norm() {
            return Ok(sum);
        }
    }
    Err(Error::Numeric(format!(
        "2F1 series did not converge in {MAX_TERMS} terms: a={a}, b={b}, c={c}, z={z}, \
         last term {:e}, partial sum {sum}",
        term.norm()
    )))
}

fn series_dd(a: DdComplex, b: DdComplex, c: DdComplex, q: f64) -> Result<DdComplex> {
    let q = Dd::from_f64(q);
    let mut sum = DdComplex::ONE;
    let mut term = DdComplex::ONE;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        let ratio = (a.add_f64(nf) * b.add_f64(nf)) / (c.add_f64(nf).scale(Dd::from_f64(nf + 1.0)));
        term = (term * ratio).scale(q);
        sum = sum + term;
        if term.norm_f64() <= SERIES_RTOL_DD * sum.norm_f64() {
            return Ok(sum);
        }
    }
    Err(Error::Numeric(format!("2F1 connection series did not converge in {MAX_TERMS} terms at 1-z = {}", q.to_f64())))
}

/// `Γ(n₁)Γ(n₂) / (Γ(d₁)Γ(d₂))`, zero when a denominator argument is a pole.
fn gamma_quotient(num: [DdComplex; 2], den: [DdComplex; 2]) -> Result<DdComplex> {
    let (Some(d0), Some(d1)) = (den[0].gamma(), den[1].gamma()) else {
        return Ok(DdComplex::default());
    };
    match (num[0].gamma(), num[1].gamma()) {
        (Some(n0), Some(n1)) => Ok((n0 * n1) / (d0 * d1)),
        _ => domain("2F1 connection coefficient has a gamma pole in its numerator"),
    }
}

/// Connection formula around `z = 1`, with `q = 1 - z`:
///
/// `F = A F(a, b; a+b-c+1; q) + B q^{c-a-b} F(c-a, c-b; c-a-b+1; q)`,
/// `A = Γ(c)Γ(c-a-b)/(Γ(c-a)Γ(c-b))`, `B = Γ(c)Γ(a+b-c)/(Γ(a)Γ(b))`.
///
/// Requires `c - a - b` not an integer. For the parameters of the spherical
/// functions the two terms nearly cancel (their size exceeds the result by
/// up to eight orders of magnitude at `q = 1/4`), so the formula is
/// evaluated in double-double arithmetic and rounded at the end.
pub fn hyp2f1_connection(a: Complex64, b: Complex64, c: Complex64, q: f64) -> Result<Complex64> {
    if near_int(c - a - b) {
        return domain(format!("2F1 connection formula needs c-a-b non-integer, got {}", c - a - b));
    }
    if near_nonpositive_int(c) {
        return domain(format!("2F1 parameter c = {c} is a nonpositive integer"));
    }
    if !(q > 0.0 && q <= 1.0) {
        return domain(format!("2F1 connection argument 1-z = {q} outside (0, 1]"));
    }
    let (a, b, c) = (DdComplex::from_c64(a), DdComplex::from_c64(b), DdComplex::from_c64(c));
    let d = c - a - b;
    let one = DdComplex::ONE;
    let coef_a = gamma_quotient([c, d], [c - a, c - b])?;
    let coef_b = gamma_quotient([c, -d], [a, b])?;
    let mut out = DdComplex::default();
    if coef_a != DdComplex::default() {
        out = out + coef_a * series_dd(a, b, one - d, q)?;
    }
    if coef_b != DdComplex::default() {
        let q_pow = (d.scale(Dd::from_f64(q).ln())).exp();
        out = out + coef_b * q_pow * series_dd(c - a, c - b, d + one, q)?;
    }
    let out = out.to_c64();
    if !(out.re.is_finite() && out.im.is_finite()) {
        return Err(Error::Numeric(format!("2F1 connection formula overflowed at 1-z = {q}")));
    }
    Ok(out)
}

/// `₂F₁(a, b; c; z)` for `z ∈ [0, 1)`.
pub fn gauss_2f1(a: Complex64, b: Complex64, c: Complex64, z: f64) -> Result<Complex64> {
    gauss_2f1_split(a, b, c, z, 1.0 - z)
}

/// As [`gauss_2f1`] with `q = 1 - z` supplied by the caller.
pub fn gauss_2f1_split(a: Complex64, b: Complex64, c: Complex64, z: f64, q: f64) -> Result<Complex64> {
    if near_nonpositive_int(c) {
        return domain(format!("2F1 parameter c = {c} is a nonpositive integer"));
    }
    if !(0.0..=1.0).contains(&z) || !(q > 0.0 && q <= 1.0) {
        return domain(format!("2F1 argument z = {z} (1-z = {q}) outside [0, 1)"));
    }
    if z == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    // polynomial
    if near_nonpositive_int(a) || near_nonpositive_int(b) {
        return hyp2f1_series(a, b, c, z);
    }
    // Euler transform turns the series into a polynomial
    if near_nonpositive_int(c - a) || near_nonpositive_int(c - b) {
        let d = c - a - b;
        return Ok((d * q.ln()).exp() * hyp2f1_series(c - a, c - b, c, z)?);
    }
    if z <= Z_SWITCH {
        hyp2f1_series(a, b, c, z)
    } else {
        hyp2f1_connection(a, b, c, q)
    }
}
