//! The octonions as 8 real coordinates over the basis `e0..e7`, `e0 = 1`.
//!
//! The algebra is pinned down by `e_m^2 = -1` and anti-commutation of the
//! imaginary units up to one choice. The remaining freedom is the
//! orientation of the seven quaternionic triples (a Fano plane). We freeze
//! the Cayley–Dickson orientation
//!
//! ```text
//! (1,2,3) (1,4,5) (1,7,6) (2,4,6) (2,5,7) (3,4,7) (3,6,5)
//! ```
//!
//! meaning `e_i e_j = e_k` (and cyclic) for each listed triple `(i,j,k)`.
//! Every quantity computed downstream (Φ, Ψ, the bracket norm, the
//! non-isotropic distance) is invariant under a change of admissible table;
//! the property tests in this module are the gate any other table must pass.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use crate::error::{domain, Result};

/// Oriented quaternionic triples of the frozen multiplication table.
pub const FANO_TRIPLES: [[usize; 3]; 7] = [[1, 2, 3], [1, 4, 5], [1, 7, 6], [2, 4, 6], [2, 5, 7], [3, 4, 7], [3, 6, 5]];

/// `MUL_TABLE[i][j] = (sign, k)` with `e_i e_j = sign * e_k`.
pub const MUL_TABLE: [[(i8, u8); 8]; 8] = build_table();

const fn build_table() -> [[(i8, u8); 8]; 8] {
    let mut t = [[(0i8, 0u8); 8]; 8];
    let mut i = 0;
    while i < 8 {
        // e0 is the identity
        t[0][i] = (1, i as u8);
        t[i][0] = (1, i as u8);
        if i > 0 {
            t[i][i] = (-1, 0);
        }
        i += 1;
    }
    let mut n = 0;
    while n < 7 {
        let [a, b, c] = FANO_TRIPLES[n];
        // cyclic: ab = c, bc = a, ca = b; reversed order flips the sign
        t[a][b] = (1, c as u8);
        t[b][c] = (1, a as u8);
        t[c][a] = (1, b as u8);
        t[b][a] = (-1, c as u8);
        t[c][b] = (-1, a as u8);
        t[a][c] = (-1, b as u8);
        n += 1;
    }
    t
}

/// An octonion `c0 e0 + c1 e1 + ... + c7 e7`.
#[derive(Clone, Copy, PartialEq, Default)]
pub struct Octonion {
    c: [f64; 8],
}

impl Octonion {
    pub const ZERO: Octonion = Octonion { c: [0.0; 8] };
    pub const ONE: Octonion = Octonion::from_real(1.0);

    /// Builds an octonion from its coordinates, rejecting NaN and infinities.
    pub fn new(coeffs: [f64; 8]) -> Result<Self> {
        if coeffs.iter().all(|x| x.is_finite()) {
            Ok(Octonion { c: coeffs })
        } else {
            domain("octonion coordinates must be finite")
        }
    }

    /// Builds an octonion without the finiteness check. Used on hot paths
    /// whose inputs are already known to be finite.
    #[inline]
    pub(crate) const fn from_array(c: [f64; 8]) -> Self {
        Octonion { c }
    }

    pub const fn from_real(x: f64) -> Self {
        let mut c = [0.0; 8];
        c[0] = x;
        Octonion { c }
    }

    /// The basis unit `e_i`, `0 <= i < 8`.
    pub fn basis(i: usize) -> Self {
        assert!(i < 8, "basis index out of range: {i}");
        let mut c = [0.0; 8];
        c[i] = 1.0;
        Octonion { c }
    }

    #[inline]
    pub fn coeffs(&self) -> &[f64; 8] {
        &self.c
    }

    #[inline]
    pub fn re(&self) -> f64 {
        self.c[0]
    }

    /// Imaginary part `c1 e1 + ... + c7 e7`.
    #[inline]
    pub fn im(&self) -> Self {
        let mut c = self.c;
        c[0] = 0.0;
        Octonion { c }
    }

    /// The standard involution: keeps `c0`, negates `c1..c7`.
    #[inline]
    pub fn conj(&self) -> Self {
        let c = &self.c;
        Octonion { c: [c[0], -c[1], -c[2], -c[3], -c[4], -c[5], -c[6], -c[7]] }
    }

    #[inline]
    pub fn norm_sqr(&self) -> f64 {
        self.c.iter().map(|x| x * x).sum()
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Euclidean inner product of the coordinate vectors, `Re(a conj(b))`.
    #[inline]
    pub fn dot(&self, other: &Octonion) -> f64 {
        self.c.iter().zip(other.c.iter()).map(|(a, b)| a * b).sum()
    }

    /// `|a|^-2 conj(a)`.
    pub fn inv(&self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if n2 == 0.0 {
            return domain("non-invertible: zero octonion");
        }
        Ok(self.conj() * (1.0 / n2))
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0.0)
    }

    /// Largest absolute coordinate difference.
    pub fn max_abs_diff(&self, other: &Octonion) -> f64 {
        self.c.iter().zip(other.c.iter()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

impl fmt::Debug for Octonion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Octonion{:?}", self.c)
    }
}

impl fmt::Display for Octonion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.c[0])?;
        for (i, x) in self.c.iter().enumerate().skip(1) {
            if *x != 0.0 {
                write!(f, " {} {}e{}", if *x < 0.0 { '-' } else { '+' }, x.abs(), i)?;
            }
        }
        Ok(())
    }
}

impl Mul for Octonion {
    type Output = Octonion;

    #[inline]
    fn mul(self, rhs: Octonion) -> Octonion {
        let mut out = [0.0; 8];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            let row = &MUL_TABLE[i];
            for (j, &b) in rhs.c.iter().enumerate() {
                let (s, k) = row[j];
                out[k as usize] += f64::from(s) * a * b;
            }
        }
        Octonion { c: out }
    }
}

impl Mul<f64> for Octonion {
    type Output = Octonion;

    #[inline]
    fn mul(self, rhs: f64) -> Octonion {
        let mut c = self.c;
        c.iter_mut().for_each(|x| *x *= rhs);
        Octonion { c }
    }
}

impl Mul<Octonion> for f64 {
    type Output = Octonion;

    #[inline]
    fn mul(self, rhs: Octonion) -> Octonion {
        rhs * self
    }
}

impl Div<f64> for Octonion {
    type Output = Octonion;

    #[inline]
    fn div(self, rhs: f64) -> Octonion {
        self * (1.0 / rhs)
    }
}

impl Add for Octonion {
    type Output = Octonion;

    #[inline]
    fn add(self, rhs: Octonion) -> Octonion {
        let mut c = self.c;
        c.iter_mut().zip(rhs.c.iter()).for_each(|(a, b)| *a += b);
        Octonion { c }
    }
}

impl Add<f64> for Octonion {
    type Output = Octonion;

    #[inline]
    fn add(self, rhs: f64) -> Octonion {
        let mut c = self.c;
        c[0] += rhs;
        Octonion { c }
    }
}

impl Sub for Octonion {
    type Output = Octonion;

    #[inline]
    fn sub(self, rhs: Octonion) -> Octonion {
        let mut c = self.c;
        c.iter_mut().zip(rhs.c.iter()).for_each(|(a, b)| *a -= b);
        Octonion { c }
    }
}

impl Sub<Octonion> for f64 {
    type Output = Octonion;

    #[inline]
    fn sub(self, rhs: Octonion) -> Octonion {
        let mut c = (-rhs).c;
        c[0] += self;
        Octonion { c }
    }
}

impl Neg for Octonion {
    type Output = Octonion;

    #[inline]
    fn neg(self) -> Octonion {
        self * -1.0
    }
}

impl AddAssign for Octonion {
    fn add_assign(&mut self, rhs: Octonion) {
        *self = *self + rhs;
    }
}

impl SubAssign for Octonion {
    fn sub_assign(&mut self, rhs: Octonion) {
        *self = *self - rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn e(i: usize) -> Octonion {
        Octonion::basis(i)
    }

    fn random(rng: &mut ChaCha8Rng) -> Octonion {
        let mut c = [0.0; 8];
        c.iter_mut().for_each(|x| *x = rng.random_range(-1.0..1.0));
        Octonion::from_array(c)
    }

    fn rel(a: Octonion, b: Octonion) -> f64 {
        (a - b).norm() / (1.0 + a.norm().max(b.norm()))
    }

    #[test]
    fn identity_and_squares() {
        assert_eq!(e(0) * e(5), e(5));
        assert_eq!(e(5) * e(0), e(5));
        for m in 1..8 {
            assert_eq!(e(m) * e(m), -e(0));
        }
    }

    #[test]
    fn frozen_products() {
        assert_eq!(e(1) * e(2), e(3));
        assert_eq!(e(2) * e(1), -e(3));
        assert_eq!(e(1) * e(4), e(5));
        assert_eq!(e(6) * e(1), e(7));
        assert_eq!(e(5) * e(3), e(6));
    }

    #[test]
    fn anti_commutation_is_exact() {
        for i in 1..8 {
            for j in 1..8 {
                if i != j {
                    assert_eq!(e(i) * e(j), -(e(j) * e(i)), "e{i} e{j}");
                }
            }
        }
    }

    #[test]
    fn table_is_a_permutation_with_signs() {
        // each row hits every basis element exactly once
        for row in MUL_TABLE.iter() {
            let mut seen = [false; 8];
            for &(s, k) in row.iter() {
                assert!(s == 1 || s == -1);
                assert!(!seen[k as usize]);
                seen[k as usize] = true;
            }
        }
    }

    #[test]
    fn basis_is_not_associative() {
        let mut witnesses = 0;
        for i in 1..8 {
            for j in 1..8 {
                for k in 1..8 {
                    if (e(i) * e(j)) * e(k) != e(i) * (e(j) * e(k)) {
                        witnesses += 1;
                    }
                }
            }
        }
        assert!(witnesses > 0);
    }

    #[test]
    fn basis_alternativity_and_moufang_exact() {
        for i in 0..8 {
            for j in 0..8 {
                let (a, b) = (e(i), e(j));
                assert_eq!(a * (a * b), (a * a) * b);
                assert_eq!((a * b) * b, a * (b * b));
                for k in 0..8 {
                    let c = e(k);
                    assert_eq!((a * b) * (c * a), a * ((b * c) * a));
                }
            }
        }
    }

    #[test]
    fn conjugation() {
        assert_eq!(e(0).conj(), e(0));
        assert_eq!(e(4).conj(), -e(4));
        assert_eq!((e(0) + e(1)).conj(), e(0) - e(1));
    }

    #[test]
    fn norms() {
        assert!(((e(0) + e(1)).norm() - 2f64.sqrt()).abs() < 1e-15);
        let v = Octonion::new([1.0 / 8f64.sqrt(); 8]).unwrap();
        assert!((v.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn inverses() {
        assert_eq!((2.0 * e(0)).inv().unwrap(), 0.5 * e(0));
        assert_eq!(e(1).inv().unwrap(), -e(1));
        assert!(Octonion::ZERO.inv().is_err());
    }

    #[test]
    fn constructor_rejects_non_finite() {
        let mut c = [0.0; 8];
        c[3] = f64::NAN;
        assert!(Octonion::new(c).is_err());
        c[3] = f64::INFINITY;
        assert!(Octonion::new(c).is_err());
    }

    #[test]
    fn sampled_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20_000 {
            let (a, b, c) = (random(&mut rng), random(&mut rng), random(&mut rng));
            let nab = (a * b).norm();
            assert!((nab - a.norm() * b.norm()).abs() <= 1e-13 * nab.max(1e-300));
            assert!(rel(a * (a * b), (a * a) * b) < 1e-12);
            assert!(rel((a * b) * b, a * (b * b)) < 1e-12);
            assert!(rel((a * b) * (c * a), a * ((b * c) * a)) < 1e-12);
            assert!(rel(a * a.conj(), Octonion::from_real(a.norm_sqr())) < 1e-13);
            assert!(rel((a * b).conj(), b.conj() * a.conj()) < 1e-13);
            let ab = a * b;
            assert!(rel((a * b) * ab, a * (b * ab)) < 1e-12);
            let inv = a.inv().unwrap();
            assert!(rel(a * inv, Octonion::ONE) < 1e-13);
            assert!(rel(inv * a, Octonion::ONE) < 1e-13);
        }
    }
}
