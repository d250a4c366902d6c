//! Points of the ball `B(O^2)` and its boundary sphere, the forms Φ and Ψ,
//! the bracket `[x, y]` and the non-isotropic distance `d`.

use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{argument, domain, Result};
use crate::octonion::Octonion;
use crate::rng;

/// A point `(x1, x2)` of `O^2 = R^16`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct OctPair {
    pub x1: Octonion,
    pub x2: Octonion,
}

impl OctPair {
    pub const ZERO: OctPair = OctPair { x1: Octonion::ZERO, x2: Octonion::ZERO };

    pub fn new(x1: Octonion, x2: Octonion) -> Self {
        OctPair { x1, x2 }
    }

    /// Reads 16 coordinates, first octonion first. Rejects non-finite input.
    pub fn from_coords(c: &[f64; 16]) -> Result<Self> {
        let mut a = [0.0; 8];
        let mut b = [0.0; 8];
        a.copy_from_slice(&c[..8]);
        b.copy_from_slice(&c[8..]);
        Ok(OctPair { x1: Octonion::new(a)?, x2: Octonion::new(b)? })
    }

    pub fn coords(&self) -> [f64; 16] {
        let mut c = [0.0; 16];
        c[..8].copy_from_slice(self.x1.coeffs());
        c[8..].copy_from_slice(self.x2.coeffs());
        c
    }

    #[inline]
    pub fn norm_sqr(&self) -> f64 {
        self.x1.norm_sqr() + self.x2.norm_sqr()
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Euclidean inner product in `R^16`.
    #[inline]
    pub fn dot(&self, other: &OctPair) -> f64 {
        self.x1.dot(&other.x1) + self.x2.dot(&other.x2)
    }

    #[inline]
    pub fn scale(&self, s: f64) -> OctPair {
        OctPair { x1: self.x1 * s, x2: self.x2 * s }
    }
}

impl Add for OctPair {
    type Output = OctPair;
    fn add(self, o: OctPair) -> OctPair {
        OctPair { x1: self.x1 + o.x1, x2: self.x2 + o.x2 }
    }
}

impl Sub for OctPair {
    type Output = OctPair;
    fn sub(self, o: OctPair) -> OctPair {
        OctPair { x1: self.x1 - o.x1, x2: self.x2 - o.x2 }
    }
}

impl Neg for OctPair {
    type Output = OctPair;
    fn neg(self) -> OctPair {
        self.scale(-1.0)
    }
}

impl Mul<OctPair> for f64 {
    type Output = OctPair;
    fn mul(self, p: OctPair) -> OctPair {
        p.scale(self)
    }
}

/// Tolerance on `| |ω| - 1 |` accepted by [`SpherePoint::new`].
pub const SPHERE_TOL: f64 = 1e-12;

/// A point of the boundary sphere `∂B(O^2)`, `|ω| = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpherePoint(OctPair);

impl SpherePoint {
    /// Accepts `p` if its norm is within [`SPHERE_TOL`] of one, and
    /// renormalizes it exactly onto the sphere.
    pub fn new(p: OctPair) -> Result<Self> {
        let n = p.norm();
        if !n.is_finite() || (n - 1.0).abs() > SPHERE_TOL {
            return domain(format!("sphere point has norm {n}, expected 1"));
        }
        Ok(SpherePoint(p.scale(1.0 / n)))
    }

    /// Radial projection of a nonzero point onto the sphere.
    pub fn normalize(p: OctPair) -> Result<Self> {
        let n = p.norm();
        if !(n > 0.0 && n.is_finite()) {
            return domain("cannot project the zero vector onto the sphere");
        }
        Ok(SpherePoint(p.scale(1.0 / n)))
    }

    /// `e1 = (1, 0)`.
    pub fn e1() -> Self {
        SpherePoint(OctPair::new(Octonion::ONE, Octonion::ZERO))
    }

    /// `e2 = (0, 1)`.
    pub fn e2() -> Self {
        SpherePoint(OctPair::new(Octonion::ZERO, Octonion::ONE))
    }

    /// A uniform point: 16 standard Gaussians, normalized.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let mut c = [0.0; 16];
            c.iter_mut().for_each(|x| *x = rng.sample(StandardNormal));
            let p = OctPair::new(
                Octonion::from_array(c[..8].try_into().unwrap()),
                Octonion::from_array(c[8..].try_into().unwrap()),
            );
            let n = p.norm();
            if n > 1e-150 {
                return SpherePoint(p.scale(1.0 / n));
            }
        }
    }

    #[inline]
    pub fn point(&self) -> &OctPair {
        &self.0
    }

    pub fn antipode(&self) -> Self {
        SpherePoint(-self.0)
    }

    /// `1 - [self, other]` without the cancellation of the direct formula.
    ///
    /// The bracket is real-linear in its first argument and `[ω, ω] = |ω|^2 = 1`,
    /// so `1 - [θ, ω] = [ω - θ, ω]`, which is exactly zero at `θ = ω` and
    /// accurate for nearby points.
    #[inline]
    pub fn one_minus_bracket(&self, other: &SpherePoint) -> Octonion {
        bracket(&(other.0 - self.0), &other.0)
    }

    /// Non-isotropic distance between two sphere points.
    #[inline]
    pub fn dist(&self, other: &SpherePoint) -> f64 {
        self.one_minus_bracket(other).norm().sqrt()
    }
}

/// `Φ(x,y) = Σ |x_j|^2 |y_j|^2 + 2 Re((x1 x2) conj(y1 y2))`.
pub fn phi_form(x: &OctPair, y: &OctPair) -> f64 {
    x.x1.norm_sqr() * y.x1.norm_sqr() + x.x2.norm_sqr() * y.x2.norm_sqr() + 2.0 * (x.x1 * x.x2).dot(&(y.x1 * y.x2))
}

/// The bracket `[x,y] = (conj(x1) y2)(y2^-1 y1) + x2 conj(y2)`, or
/// `conj(x1) y1` when `y2 = 0`. Parenthesization is significant.
#[inline]
pub fn bracket(x: &OctPair, y: &OctPair) -> Octonion {
    if y.x2.is_zero() {
        return x.x1.conj() * y.x1;
    }
    let n2 = y.x2.norm_sqr();
    let y2_inv = y.x2.conj() * (1.0 / n2);
    (x.x1.conj() * y.x2) * (y2_inv * y.x1) + x.x2 * y.x2.conj()
}

/// `Ψ(x,y) = 1 - 2<x,y> + Φ(x,y)`.
pub fn psi_form(x: &OctPair, y: &OctPair) -> f64 {
    1.0 - 2.0 * x.dot(y) + phi_form(x, y)
}

/// `Ψ(x,y) = |1 - [x,y]|^2`.
pub fn psi_form_bracket(x: &OctPair, y: &OctPair) -> f64 {
    (1.0 - bracket(x, y)).norm_sqr()
}

/// `d(a,b) = |1 - [a,b]|^{1/2}` on the closed ball.
///
/// For two points already known to lie on the sphere prefer
/// [`SpherePoint::dist`], which is exact on the diagonal.
pub fn ni_dist(a: &OctPair, b: &OctPair) -> f64 {
    (1.0 - bracket(a, b)).norm().sqrt()
}

/// Monte Carlo estimate of the normalized measure of a d-ball on the sphere.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeEstimate {
    pub delta: f64,
    pub fraction: f64,
    pub std_err: f64,
    pub hits: u64,
    pub n_samples: u64,
}

impl VolumeEstimate {
    fn from_counts(delta: f64, hits: u64, n: u64) -> Self {
        let p = hits as f64 / n as f64;
        VolumeEstimate { delta, fraction: p, std_err: (p * (1.0 - p) / n as f64).sqrt(), hits, n_samples: n }
    }
}

/// Estimates `V(B(e1, δ))`, the normalized measure of `{θ : d(θ, e1) < δ}`,
/// by counting uniform sphere samples. By invariance this is the volume of
/// any d-ball of radius `δ`.
pub fn ball_volume_est(delta: f64, n_samples: usize, seed: u64) -> Result<VolumeEstimate> {
    Ok(ball_volume_profile(&[delta], n_samples, seed)?[0])
}

/// [`ball_volume_est`] for several radii from a single pass over the samples.
pub fn ball_volume_profile(deltas: &[f64], n_samples: usize, seed: u64) -> Result<Vec<VolumeEstimate>> {
    if n_samples == 0 {
        return argument("ball_volume_est needs at least one sample");
    }
    if let Some(d) = deltas.iter().find(|d| !(**d > 0.0)) {
        return domain(format!("ball radius must be positive, got {d}"));
    }
    // [θ, e1] = conj(θ1), so d(θ, e1)^2 = |1 - θ1|
    let thresholds: Vec<f64> = deltas.iter().map(|d| d * d).collect();
    let chunks: Vec<_> = rng::chunks(n_samples).collect();
    let counts = chunks
        .par_iter()
        .map(|&(id, _, len)| {
            let mut r = rng::stream(seed, id);
            let mut hits = vec![0u64; thresholds.len()];
            for _ in 0..len {
                let th = SpherePoint::random(&mut r);
                let gap = (1.0 - th.point().x1).norm();
                for (h, t) in hits.iter_mut().zip(&thresholds) {
                    if gap < *t {
                        *h += 1;
                    }
                }
            }
            hits
        })
        .reduce(
            || vec![0u64; thresholds.len()],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(deltas.iter().zip(counts).map(|(&d, h)| VolumeEstimate::from_counts(d, h, n_samples as u64)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rnd_oct(rng: &mut ChaCha8Rng) -> Octonion {
        let mut c = [0.0; 8];
        c.iter_mut().for_each(|x| *x = rng.sample(StandardNormal));
        Octonion::from_array(c)
    }

    /// Uniform point of the closed unit ball in R^16.
    fn rnd_ball(rng: &mut ChaCha8Rng) -> OctPair {
        let s = SpherePoint::random(rng);
        let r: f64 = rng.random::<f64>().powf(1.0 / 16.0);
        s.point().scale(r)
    }

    fn re(x: f64) -> Octonion {
        Octonion::from_real(x)
    }

    #[test]
    fn phi_examples() {
        let p10 = OctPair::new(re(1.0), Octonion::ZERO);
        let p01 = OctPair::new(Octonion::ZERO, re(1.0));
        assert_eq!(phi_form(&p10, &p10), 1.0);
        assert_eq!(phi_form(&p01, &p10), 0.0);
    }

    #[test]
    fn phi_matches_bracket_square() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20_000 {
            let x = OctPair::new(rnd_oct(&mut rng), rnd_oct(&mut rng));
            let y = OctPair::new(rnd_oct(&mut rng), rnd_oct(&mut rng));
            let a = phi_form(&x, &y);
            let b = bracket(&x, &y).norm_sqr();
            assert!((a - b).abs() <= 1e-12 * a.abs().max(b.abs()), "{a} vs {b}");
        }
    }

    #[test]
    fn bracket_branches() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let x = OctPair::new(rnd_oct(&mut rng), rnd_oct(&mut rng));
        let y1 = rnd_oct(&mut rng);
        let y = OctPair::new(y1, Octonion::ZERO);
        assert_eq!(bracket(&x, &y), x.x1.conj() * y1);

        // [r e1, ω] = r ω1
        for _ in 0..1000 {
            let w = SpherePoint::random(&mut rng);
            let r: f64 = rng.random();
            let x = OctPair::new(re(r), Octonion::ZERO);
            let b = bracket(&x, w.point());
            assert!(b.max_abs_diff(&(w.point().x1 * r)) < 1e-14);
        }
    }

    #[test]
    fn bracket_of_sphere_point_with_itself_is_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut worst = 0.0f64;
        for _ in 0..100_000 {
            let a = SpherePoint::random(&mut rng);
            let b = bracket(a.point(), a.point());
            worst = worst.max(b.max_abs_diff(&Octonion::ONE));
        }
        assert!(worst < 1e-14, "worst {worst}");
    }

    #[test]
    fn psi_examples_and_forms_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let y = rnd_ball(&mut rng);
        assert_eq!(psi_form(&OctPair::ZERO, &y), 1.0);
        assert_eq!(psi_form_bracket(&OctPair::ZERO, &y), 1.0);

        let e1 = SpherePoint::e1();
        for r in [0.0, 0.3, 0.9] {
            let x = OctPair::new(re(r), Octonion::ZERO);
            let expected = (1.0 - r) * (1.0 - r);
            assert!((psi_form(&x, e1.point()) - expected).abs() < 1e-15);
        }

        for _ in 0..20_000 {
            let x = rnd_ball(&mut rng);
            let y = rnd_ball(&mut rng);
            let a = psi_form(&x, &y);
            let b = psi_form_bracket(&x, &y);
            assert!((a - b).abs() <= 1e-12 * a.max(b), "{a} vs {b}");
            assert!(a > 0.0);
        }
    }

    #[test]
    fn distance_examples() {
        let e1 = SpherePoint::e1();
        let e2 = SpherePoint::e2();
        assert_eq!(e1.dist(&e1), 0.0);
        assert!((e1.dist(&e1.antipode()) - 2f64.sqrt()).abs() < 1e-15);
        assert!((e1.dist(&e2) - 1.0).abs() < 1e-15);
        assert!((ni_dist(e1.point(), &(-*e1.point())) - 2f64.sqrt()).abs() < 1e-15);
        assert!((ni_dist(e1.point(), e2.point()) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn distance_is_symmetric_and_positive_off_diagonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20_000 {
            let a = SpherePoint::random(&mut rng);
            let b = SpherePoint::random(&mut rng);
            assert_eq!(a.dist(&a), 0.0);
            let (dab, dba) = (a.dist(&b), b.dist(&a));
            assert!((dab - dba).abs() < 1e-13);
            assert!(dab > 0.0);
            assert!((ni_dist(a.point(), b.point()) - dab).abs() < 1e-7);
        }
    }

    #[test]
    fn triangle_inequality_on_closed_ball() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..50_000 {
            let (a, b, c) = (rnd_ball(&mut rng), rnd_ball(&mut rng), rnd_ball(&mut rng));
            assert!(ni_dist(&a, &c) <= ni_dist(&a, &b) + ni_dist(&b, &c) + 1e-12);
        }
    }

    #[test]
    fn bracket_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20_000 {
            let x = OctPair::new(rnd_oct(&mut rng), rnd_oct(&mut rng));
            let y = OctPair::new(rnd_oct(&mut rng), rnd_oct(&mut rng));
            assert!(bracket(&x, &y).norm() <= x.norm() * y.norm() * (1.0 + 1e-12));
        }
    }

    #[test]
    fn inequality_4_7_on_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for i in 0..20_000 {
            let th = SpherePoint::random(&mut rng);
            let w = SpherePoint::random(&mut rng);
            let thp = if i % 2 == 0 {
                SpherePoint::random(&mut rng)
            } else {
                let eps = 10f64.powf(-4.0 * rng.random::<f64>());
                let g = SpherePoint::random(&mut rng);
                SpherePoint::normalize(*th.point() + g.point().scale(eps)).unwrap()
            };
            let lhs = bracket(&(*th.point() - *thp.point()), w.point()).norm();
            let d = th.dist(&thp);
            assert!(lhs <= d * (d + 2.0 * th.dist(&w)) + 1e-12);
        }
    }

    #[test]
    fn invariance_under_restricted_symmetries() {
        // (x1, x2) -> (a x1, x2 a) for a unit, and (x1, x2) -> (conj x2, conj x1)
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..5_000 {
            let a = rnd_oct(&mut rng);
            let a = a * (1.0 / a.norm());
            let t = |p: &OctPair| OctPair::new(a * p.x1, p.x2 * a);
            let s = |p: &OctPair| OctPair::new(p.x2.conj(), p.x1.conj());
            let x = rnd_ball(&mut rng);
            let y = rnd_ball(&mut rng);
            let d0 = ni_dist(&x, &y);
            assert!((ni_dist(&t(&x), &t(&y)) - d0).abs() < 1e-12);
            assert!((ni_dist(&s(&x), &s(&y)) - d0).abs() < 1e-12);
            let p0 = psi_form(&x, &y);
            assert!((psi_form(&t(&x), &t(&y)) - p0).abs() < 1e-12 * p0);
        }
    }

    #[test]
    fn sphere_point_constructor() {
        let p = OctPair::new(re(1.0 + 1e-13), Octonion::ZERO);
        assert!(SpherePoint::new(p).is_ok());
        let p = OctPair::new(re(1.1), Octonion::ZERO);
        assert!(SpherePoint::new(p).is_err());
        assert!(SpherePoint::normalize(OctPair::ZERO).is_err());
    }

    #[test]
    fn volume_limits() {
        let whole = ball_volume_est(1.5, 20_000, 1).unwrap();
        assert_eq!(whole.fraction, 1.0);
        let tiny = ball_volume_est(0.05, 20_000, 1).unwrap();
        assert_eq!(tiny.fraction, 0.0);
        assert!(ball_volume_est(0.5, 0, 1).is_err());
        assert!(ball_volume_est(0.0, 10, 1).is_err());
    }

    #[test]
    fn volume_is_deterministic_and_monotone() {
        let a = ball_volume_profile(&[0.9, 1.0, 1.2], 50_000, 3).unwrap();
        let b = ball_volume_profile(&[0.9, 1.0, 1.2], 50_000, 3).unwrap();
        assert_eq!(a, b);
        assert!(a[0].fraction <= a[1].fraction && a[1].fraction <= a[2].fraction);
    }
}
