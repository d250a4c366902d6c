//! 3×3 Hermitian octonionic matrices, the Jordan product, and the
//! embeddings of the ball and its boundary into the exceptional Jordan
//! algebra.
//!
//! Matrices of the ball model carry a factor `√-1` on the off-diagonal
//! entries of the first row and column. Those factors are not represented
//! as complexified octonions; each entry stores an octonion together with a
//! flag saying whether it is multiplied by `√-1`. A product of two flagged
//! entries picks up a sign, flags combine by exclusive or.

use std::fmt;

use crate::error::{domain, Error, Result};
use crate::geometry::OctPair;
use crate::octonion::Octonion;

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Entry {
    pub value: Octonion,
    /// Entry stands for `value ⊗ √-1`.
    pub imaginary: bool,
}

impl Entry {
    fn real(value: Octonion) -> Self {
        Entry { value, imaginary: false }
    }
}

#[derive(Clone, Copy, Default)]
pub struct JordanMatrix {
    e: [[Entry; 3]; 3],
}

/// Entries compare by value; the `√-1` flag of a zero entry is irrelevant.
impl PartialEq for JordanMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.e
            .iter()
            .flatten()
            .zip(other.e.iter().flatten())
            .all(|(a, b)| a.value == b.value && (a.imaginary == b.imaginary || a.value.is_zero()))
    }
}

impl fmt::Debug for JordanMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.e {
            for x in row {
                write!(f, "[{}{}] ", x.value, if x.imaginary { " ⊗i" } else { "" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl JordanMatrix {
    /// Hermitian matrix
    ///
    /// ```text
    /// | a1      u3·s     ū2·s |
    /// | ū3·s    a2       u1   |
    /// | u2·s    ū1       a3   |
    /// ```
    ///
    /// where `s = √-1` when `twisted`, and `s = 1` otherwise.
    pub fn hermitian(a: [f64; 3], u: [Octonion; 3], twisted: bool) -> Self {
        let o = |x: Octonion| Entry { value: x, imaginary: twisted };
        let [u1, u2, u3] = u;
        JordanMatrix {
            e: [
                [Entry::real(Octonion::from_real(a[0])), o(u3), o(u2.conj())],
                [o(u3.conj()), Entry::real(Octonion::from_real(a[1])), Entry::real(u1)],
                [o(u2), Entry::real(u1.conj()), Entry::real(Octonion::from_real(a[2]))],
            ],
        }
    }

    /// `E1 = diag(1, 0, 0)`.
    pub fn e1() -> Self {
        Self::hermitian([1.0, 0.0, 0.0], [Octonion::ZERO; 3], false)
    }

    /// `F2^1`, ones in the (1,3) and (3,1) corners.
    pub fn f21() -> Self {
        Self::hermitian([0.0; 3], [Octonion::ZERO, Octonion::ONE, Octonion::ZERO], false)
    }

    pub fn entry(&self, i: usize, j: usize) -> &Entry {
        &self.e[i][j]
    }

    /// Diagonal entries `a1, a2, a3` (real parts).
    pub fn diagonal(&self) -> [f64; 3] {
        [self.e[0][0].value.re(), self.e[1][1].value.re(), self.e[2][2].value.re()]
    }

    /// Off-diagonal octonions `u1, u2, u3` read from the upper triangle.
    pub fn off_diagonal(&self) -> [Octonion; 3] {
        [self.e[1][2].value, self.e[0][2].value.conj(), self.e[0][1].value]
    }

    pub fn trace(&self) -> f64 {
        self.diagonal().iter().sum()
    }

    fn scale(&self, s: f64) -> Self {
        let mut out = *self;
        out.e.iter_mut().flatten().for_each(|x| x.value = x.value * s);
        out
    }

    /// Ordinary matrix product with flag bookkeeping. Fails when an entry
    /// would mix flagged and unflagged contributions.
    pub fn matmul(&self, other: &JordanMatrix) -> Result<JordanMatrix> {
        let mut out = [[Entry::default(); 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                let mut acc = Octonion::ZERO;
                let mut flag: Option<bool> = None;
                for k in 0..3 {
                    let (a, b) = (self.e[i][k], other.e[k][j]);
                    let p = a.value * b.value;
                    if p.is_zero() {
                        continue;
                    }
                    let f = a.imaginary ^ b.imaginary;
                    match flag {
                        Some(g) if g != f => {
                            return Err(Error::Argument(format!("entry ({i},{j}) mixes real and imaginary terms")))
                        }
                        _ => flag = Some(f),
                    }
                    let sign = if a.imaginary && b.imaginary { -1.0 } else { 1.0 };
                    acc += p * sign;
                }
                *cell = Entry { value: acc, imaginary: flag.unwrap_or(false) };
            }
        }
        Ok(JordanMatrix { e: out })
    }

    fn add(&self, other: &JordanMatrix) -> Result<JordanMatrix> {
        let mut out = *self;
        for i in 0..3 {
            for j in 0..3 {
                let (a, b) = (self.e[i][j], other.e[i][j]);
                let flag = match (a.value.is_zero(), b.value.is_zero()) {
                    (true, _) => b.imaginary,
                    (_, true) => a.imaginary,
                    _ if a.imaginary == b.imaginary => a.imaginary,
                    _ => return Err(Error::Argument(format!("entry ({i},{j}) mixes real and imaginary terms"))),
                };
                out.e[i][j] = Entry { value: a.value + b.value, imaginary: flag };
            }
        }
        Ok(out)
    }

    /// Largest coordinate difference between two matrices, treating
    /// mismatched flags on nonzero entries as infinitely far apart.
    pub fn max_abs_diff(&self, other: &JordanMatrix) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                let (a, b) = (self.e[i][j], other.e[i][j]);
                let d = a.value.max_abs_diff(&b.value);
                if a.imaginary != b.imaginary && !(a.value.is_zero() || b.value.is_zero()) {
                    return f64::INFINITY;
                }
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        self.e.iter().flatten().flat_map(|x| x.value.coeffs().iter()).fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

/// `A ∘ B = (AB + BA) / 2`.
pub fn jordan_product(a: &JordanMatrix, b: &JordanMatrix) -> Result<JordanMatrix> {
    Ok(a.matmul(b)?.add(&b.matmul(a)?)?.scale(0.5))
}

/// The ball embedding
///
/// ```text
///             1      | 1          x̄2 ⊗ √-1     x̄1 ⊗ √-1 |
/// X(x) = ----------  | x2 ⊗ √-1   -|x2|^2      -x2 x̄1   |
///        1 - |x|^2   | x1 ⊗ √-1   -x1 x̄2       -|x1|^2  |
/// ```
pub fn jordan_embed(x: &OctPair) -> Result<JordanMatrix> {
    let n2 = x.norm_sqr();
    if !(n2 < 1.0) {
        return domain(format!("jordan_embed needs |x| < 1, got |x|^2 = {n2}"));
    }
    let (x1, x2) = (x.x1, x.x2);
    // u3 = x̄2, ū2 = x̄1, u1 = -x2 x̄1
    let m = JordanMatrix::hermitian([1.0, -x2.norm_sqr(), -x1.norm_sqr()], [-(x2 * x1.conj()), x1, x2.conj()], true);
    Ok(m.scale(1.0 / (1.0 - n2)))
}

/// The boundary embedding
///
/// ```text
///          | 0   v   ū |
/// Y(u,v) = | v̄   0   0 |
///          | u   0   0 |
/// ```
///
/// for `|u|^2 + |v|^2 = 1`.
pub fn boundary_embed(u: &Octonion, v: &Octonion) -> Result<JordanMatrix> {
    let n2 = u.norm_sqr() + v.norm_sqr();
    if (n2 - 1.0).abs() > 1e-12 {
        return domain(format!("boundary_embed needs |u|^2 + |v|^2 = 1, got {n2}"));
    }
    Ok(JordanMatrix::hermitian([0.0; 3], [Octonion::ZERO, *u, *v], false))
}
