//! Complex quaternions ℍ(ℂ).
//!
//! An element is `q0 e0 + q1 e1 + q2 e2 + q3 e3` with complex coefficients.
//! The quaternion units satisfy `e_k e_k = -1` and the right-handed relations
//! `e1 e2 = e3`, `e2 e3 = e1`, `e3 e1 = e2`. The complex unit `i` commutes
//! with every `e_k`, so the algebra has zero divisors and no inverse is offered.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;

/// Complex scalar coefficient.
pub type ComplexScalar = Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, Copy, PartialEq, Default)]
pub struct Biquaternion {
    pub q: [Complex64; 4],
}

impl Biquaternion {
    pub const ZERO: Biquaternion = Biquaternion { q: [ZERO; 4] };
    pub const ONE: Biquaternion = Biquaternion { q: [ONE, ZERO, ZERO, ZERO] };

    pub const fn new(q0: Complex64, q1: Complex64, q2: Complex64, q3: Complex64) -> Self {
        Biquaternion { q: [q0, q1, q2, q3] }
    }

    /// Real quaternion `a + b e1 + c e2 + d e3`.
    pub fn from_real(a: f64, b: f64, c: f64, d: f64) -> Self {
        Biquaternion::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn scalar(s: Complex64) -> Self {
        Biquaternion { q: [s, ZERO, ZERO, ZERO] }
    }

    pub fn vector(v: [Complex64; 3]) -> Self {
        Biquaternion { q: [ZERO, v[0], v[1], v[2]] }
    }

    /// The unit `e_k` for `k` in `0..4` (`e_0 = 1`).
    pub fn unit(k: usize) -> Self {
        assert!(k < 4, "basis index out of range: {k}");
        let mut q = [ZERO; 4];
        q[k] = ONE;
        Biquaternion { q }
    }

    /// `Sc(Q) = q0`.
    pub fn sc(&self) -> Complex64 {
        self.q[0]
    }

    /// `Vec(Q) = (q1, q2, q3)`.
    pub fn vec(&self) -> [Complex64; 3] {
        [self.q[1], self.q[2], self.q[3]]
    }

    /// Quaternionic conjugation `C_H`: negates the vector part.
    pub fn quat_conj(&self) -> Self {
        Biquaternion::new(self.q[0], -self.q[1], -self.q[2], -self.q[3])
    }

    /// Complex conjugation of every coefficient; fixes the units `e_k`.
    pub fn complex_conj(&self) -> Self {
        Biquaternion { q: self.q.map(|c| c.conj()) }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Biquaternion { q: self.q.map(|c| c * s) }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Biquaternion { q: self.q.map(|c| c * s) }
    }

    /// Euclidean norm of the coefficient vector in ℂ⁴.
    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.q.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.q.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Right multiplication operator `M^P`, i.e. `Q ↦ Q·P`.
    pub fn right_mul(p: Biquaternion) -> impl Fn(Biquaternion) -> Biquaternion {
        move |q| q * p
    }
}

/// Quaternion product of two vectors given by their components:
/// `a b = -<a, b> + a × b`.
pub fn vec_mul(a: [Complex64; 3], b: [Complex64; 3]) -> Biquaternion {
    Biquaternion::new(
        -(a[0] * b[0] + a[1] * b[1] + a[2] * b[2]),
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )
}

impl Mul for Biquaternion {
    type Output = Biquaternion;

    fn mul(self, rhs: Biquaternion) -> Biquaternion {
        let [p0, p1, p2, p3] = self.q;
        let [q0, q1, q2, q3] = rhs.q;
        Biquaternion::new(
            p0 * q0 - p1 * q1 - p2 * q2 - p3 * q3,
            p0 * q1 + p1 * q0 + p2 * q3 - p3 * q2,
            p0 * q2 + p2 * q0 + p3 * q1 - p1 * q3,
            p0 * q3 + p3 * q0 + p1 * q2 - p2 * q1,
        )
    }
}

impl Mul<Complex64> for Biquaternion {
    type Output = Biquaternion;
    fn mul(self, rhs: Complex64) -> Biquaternion {
        self.scale(rhs)
    }
}

impl Mul<f64> for Biquaternion {
    type Output = Biquaternion;
    fn mul(self, rhs: f64) -> Biquaternion {
        self.scale_real(rhs)
    }
}

impl Add for Biquaternion {
    type Output = Biquaternion;
    fn add(self, rhs: Biquaternion) -> Biquaternion {
        let mut q = self.q;
        for (a, b) in q.iter_mut().zip(rhs.q) {
            *a += b;
        }
        Biquaternion { q }
    }
}

impl Sub for Biquaternion {
    type Output = Biquaternion;
    fn sub(self, rhs: Biquaternion) -> Biquaternion {
        let mut q = self.q;
        for (a, b) in q.iter_mut().zip(rhs.q) {
            *a -= b;
        }
        Biquaternion { q }
    }
}

impl AddAssign for Biquaternion {
    fn add_assign(&mut self, rhs: Biquaternion) {
        *self = *self + rhs;
    }
}

impl SubAssign for Biquaternion {
    fn sub_assign(&mut self, rhs: Biquaternion) {
        *self = *self - rhs;
    }
}

impl Neg for Biquaternion {
    type Output = Biquaternion;
    fn neg(self) -> Biquaternion {
        Biquaternion { q: self.q.map(|c| -c) }
    }
}

impl From<Complex64> for Biquaternion {
    fn from(s: Complex64) -> Self {
        Biquaternion::scalar(s)
    }
}

impl From<f64> for Biquaternion {
    fn from(s: f64) -> Self {
        Biquaternion::scalar(s.into())
    }
}

impl fmt::Debug for Biquaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}) + ({})e1 + ({})e2 + ({})e3",
            self.q[0], self.q[1], self.q[2], self.q[3]
        )
    }
}
