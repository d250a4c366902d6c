//! Double-double arithmetic (about 32 significant digits), real and complex.
//!
//! Only what the connection formula of `₂F₁` needs: field operations,
//! `exp`, `ln`, `sin`, `cos`, `atan2` and a complex `Γ`.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

// π, π/2 and ln 2 to double-double precision.
const PI: Dd = Dd { hi: 3.141_592_653_589_793, lo: 1.224_646_799_147_353_2e-16 };
const HALF_PI: Dd = Dd { hi: 1.570_796_326_794_896_6, lo: 6.123_233_995_736_766e-17 };
const LN2: Dd = Dd { hi: 0.693_147_180_559_945_3, lo: 2.319_046_813_846_299_6e-17 };

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn mul_f64(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        Dd { hi, lo }
    }

    pub fn div_f64(self, b: f64) -> Dd {
        self / Dd::from_f64(b)
    }

    pub fn sqr(self) -> Dd {
        self * self
    }

    pub fn exp(self) -> Dd {
        if self.hi > 709.0 {
            return Dd::from_f64(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Dd::ZERO;
        }
        // x = k ln2 + r, then exp(r) = (exp(r / 32))^32
        let k = (self.hi / LN2.hi).round();
        let r = self - LN2.mul_f64(k);
        let r = r.mul_f64(1.0 / 32.0);
        let mut term = Dd::ONE;
        let mut sum = Dd::ONE;
        for n in 1..=18 {
            term = (term * r).div_f64(f64::from(n));
            sum = sum + term;
        }
        for _ in 0..5 {
            sum = sum.sqr();
        }
        sum.mul_f64(2f64.powi(k as i32))
    }

    /// Natural log of a positive value, by one Newton step on `exp`.
    pub fn ln(self) -> Dd {
        let y0 = Dd::from_f64(self.hi.ln());
        y0 + self * (-y0).exp() - Dd::ONE
    }

    /// `(sin x, cos x)`.
    pub fn sin_cos(self) -> (Dd, Dd) {
        let k = (self.hi / HALF_PI.hi).round();
        let r = self - HALF_PI.mul_f64(k);
        let r2 = r.sqr();
        let mut s = r;
        let mut c = Dd::ONE;
        let mut ts = r;
        let mut tc = Dd::ONE;
        for n in 1..=15 {
            let n = f64::from(n);
            ts = (ts * r2).div_f64(-(2.0 * n) * (2.0 * n + 1.0));
            tc = (tc * r2).div_f64(-(2.0 * n - 1.0) * (2.0 * n));
            s = s + ts;
            c = c + tc;
        }
        match (k as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }

    /// `atan2(y, x)`, refined from the double result by one Newton step.
    pub fn atan2(y: Dd, x: Dd) -> Dd {
        let t0 = Dd::from_f64(y.hi.atan2(x.hi));
        let (s, c) = t0.sin_cos();
        t0 + (y * c - x * s) / (x * c + y * s)
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, b: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::from_f64(q3)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub(crate) struct DdComplex {
    pub re: Dd,
    pub im: Dd,
}

impl DdComplex {
    pub const ONE: DdComplex = DdComplex { re: Dd::ONE, im: Dd::ZERO };

    pub fn from_c64(z: Complex64) -> Self {
        DdComplex { re: Dd::from_f64(z.re), im: Dd::from_f64(z.im) }
    }

    #[cfg(test)]
    pub fn from_f64(x: f64) -> Self {
        DdComplex { re: Dd::from_f64(x), im: Dd::ZERO }
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn norm_sqr(self) -> Dd {
        self.re.sqr() + self.im.sqr()
    }

    pub fn norm_f64(self) -> f64 {
        self.to_c64().norm()
    }

    pub fn add_f64(self, x: f64) -> Self {
        DdComplex { re: self.re + Dd::from_f64(x), im: self.im }
    }

    pub fn scale(self, x: Dd) -> Self {
        DdComplex { re: self.re * x, im: self.im * x }
    }

    pub fn exp(self) -> Self {
        let m = self.re.exp();
        let (s, c) = self.im.sin_cos();
        DdComplex { re: m * c, im: m * s }
    }

    /// Principal logarithm.
    pub fn ln(self) -> Self {
        DdComplex { re: self.norm_sqr().ln().mul_f64(0.5), im: Dd::atan2(self.im, self.re) }
    }

    /// `Γ(z)` by upward recurrence to `Re w ≥ 20` followed by the Stirling
    /// series with 16 Bernoulli terms. `None` at or too far left of the poles.
    pub fn gamma(self) -> Option<Self> {
        const SHIFT_TO: f64 = 20.0;
        if self.re.hi < -200.0 {
            return None;
        }
        let mut w = self;
        let mut prod = DdComplex::ONE;
        while w.re.hi < SHIFT_TO {
            prod = prod * w;
            w = w.add_f64(1.0);
        }
        if prod.re.hi == 0.0 && prod.im.hi == 0.0 {
            return None;
        }
        // (w - 1/2) ln w - w + ln(2π)/2 + Σ B_{2k} / (2k (2k-1) w^{2k-1})
        let ln_w = w.ln();
        let mut l = w.add_f64(-0.5) * ln_w - w;
        let half_ln_2pi = (PI.mul_f64(2.0)).ln().mul_f64(0.5);
        l.re = l.re + half_ln_2pi;
        let inv = DdComplex::ONE / w;
        let inv2 = inv * inv;
        let mut pow = inv;
        for (k, (num, den)) in BERNOULLI.iter().enumerate() {
            let k2 = 2.0 * (k as f64 + 1.0);
            let coef = Dd::from_f64(*num) / Dd::from_f64(*den).mul_f64(k2 * (k2 - 1.0));
            l = l + pow.scale(coef);
            pow = pow * inv2;
        }
        Some(l.exp() / prod)
    }
}

// B_2 .. B_32 as exact numerator / denominator pairs.
const BERNOULLI: [(f64, f64); 16] = [
    (1.0, 6.0),
    (-1.0, 30.0),
    (1.0, 42.0),
    (-1.0, 30.0),
    (5.0, 66.0),
    (-691.0, 2730.0),
    (7.0, 6.0),
    (-3617.0, 510.0),
    (43867.0, 798.0),
    (-174611.0, 330.0),
    (854513.0, 138.0),
    (-236364091.0, 2730.0),
    (8553103.0, 6.0),
    (-23749461029.0, 870.0),
    (8615841276005.0, 14322.0),
    (-7709321041217.0, 510.0),
];

impl Add for DdComplex {
    type Output = DdComplex;
    fn add(self, b: DdComplex) -> DdComplex {
        DdComplex { re: self.re + b.re, im: self.im + b.im }
    }
}

impl Sub for DdComplex {
    type Output = DdComplex;
    fn sub(self, b: DdComplex) -> DdComplex {
        DdComplex { re: self.re - b.re, im: self.im - b.im }
    }
}

impl Neg for DdComplex {
    type Output = DdComplex;
    fn neg(self) -> DdComplex {
        DdComplex { re: -self.re, im: -self.im }
    }
}

impl Mul for DdComplex {
    type Output = DdComplex;
    fn mul(self, b: DdComplex) -> DdComplex {
        DdComplex { re: self.re * b.re - self.im * b.im, im: self.re * b.im + self.im * b.re }
    }
}

impl Div for DdComplex {
    type Output = DdComplex;
    fn div(self, b: DdComplex) -> DdComplex {
        let d = b.norm_sqr();
        let n = self * DdComplex { re: b.re, im: -b.im };
        DdComplex { re: n.re / d, im: n.im / d }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Dd, b: Dd, tol: f64) -> bool {
        ((a - b).to_f64()).abs() <= tol * b.to_f64().abs().max(1e-300)
    }

    #[test]
    fn arithmetic_carries_extra_digits() {
        let third = Dd::ONE / Dd::from_f64(3.0);
        let back = third.mul_f64(3.0) - Dd::ONE;
        assert!(back.to_f64().abs() < 1e-31);
        let x = Dd::from_f64(1.0) + Dd::from_f64(1e-20);
        assert_eq!(x.lo, 1e-20);
    }

    #[test]
    fn exp_ln_round_trip() {
        for x in [-30.0, -1.5, 0.0, 1e-3, 0.7, 2.0, 55.0] {
            let v = Dd::from_f64(x).exp().ln();
            assert!((v - Dd::from_f64(x)).to_f64().abs() < 1e-29 * (1.0 + x.abs()), "{x}");
        }
        // e to double-double precision
        let e = Dd { hi: 2.718_281_828_459_045, lo: 1.445_646_891_729_250_2e-16 };
        assert!(close(Dd::ONE.exp(), e, 1e-30));
    }

    #[test]
    fn trig_identities() {
        for x in [-7.3, -0.2, 0.0, 0.5, 1.6, 3.0, 40.0] {
            let (s, c) = Dd::from_f64(x).sin_cos();
            assert!((s.sqr() + c.sqr() - Dd::ONE).to_f64().abs() < 1e-30);
            assert!((s.to_f64() - x.sin()).abs() < 1e-15);
            let t = Dd::atan2(s, c);
            let wrapped =
                x - (2.0 * std::f64::consts::PI) * ((x + std::f64::consts::PI) / (2.0 * std::f64::consts::PI)).floor();
            assert!((t.to_f64() - wrapped).abs() < 1e-14);
        }
        let (s, _) = PI.sin_cos();
        assert!(s.to_f64().abs() < 1e-31);
    }

    #[test]
    fn gamma_values() {
        // Γ(1/2)^2 = π
        let g = DdComplex::from_f64(0.5).gamma().unwrap();
        let sq = g * g;
        assert!(close(sq.re, PI, 1e-29));
        // Γ(8) = 5040 exactly representable
        let g8 = DdComplex::from_f64(8.0).gamma().unwrap();
        assert!(close(g8.re, Dd::from_f64(5040.0), 1e-29));
        // |Γ(i)|^2 = π / sinh π
        let gi = DdComplex::from_c64(Complex64::new(0.0, 1.0)).gamma().unwrap();
        let e_pi = PI.exp();
        let sinh_pi = (e_pi - Dd::ONE / e_pi).mul_f64(0.5);
        assert!(close(gi.norm_sqr(), PI / sinh_pi, 1e-29));
        assert!(DdComplex::from_f64(-3.0).gamma().is_none());
    }
}
