//! Small fixed-size geometry used by pitch transforms and skeletal poses.

use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Scalar> Vec3<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    pub fn planar(x: T, y: T) -> Self {
        Self::new(x, y, T::zero())
    }

    pub fn dot(self, other: Self) -> T {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Self) -> Self {
        Self::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm(self) -> T {
        self.dot(self).sqrt()
    }

    pub fn distance(self, other: Self) -> T {
        (self - other).norm()
    }

    pub fn scale(self, k: T) -> Self {
        Self::new(self.x * k, self.y * k, self.z * k)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl<T: Scalar> Add for Vec3<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<T: Scalar> Sub for Vec3<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<T: Scalar> Neg for Vec3<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

/// Rotation quaternion stored `(x, y, z, w)`, scalar part last.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quat<T> {
    pub x: T,
    pub y: T,
    pub z: T,
    pub w: T,
}

impl<T: Scalar> Quat<T> {
    pub fn new(x: T, y: T, z: T, w: T) -> Self {
        Self { x, y, z, w }
    }

    pub fn identity() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::one())
    }

    pub fn norm(self) -> T {
        (self.x * self.x + self.y * self.y + self.z * self.z + self.w * self.w).sqrt()
    }

    pub fn is_identity(self) -> bool {
        self == Self::identity()
    }

    fn vector(self) -> Vec3<T> {
        Vec3::new(self.x, self.y, self.z)
    }

    /// Rotates `v` by this (assumed unit) quaternion.
    pub fn rotate(self, v: Vec3<T>) -> Vec3<T> {
        if self.is_identity() {
            return v;
        }
        let u = self.vector();
        let two = T::one() + T::one();
        let t = u.cross(v).scale(two);
        v + t.scale(self.w) + u.cross(t)
    }
}

impl<T: Scalar> Mul for Quat<T> {
    type Output = Self;
    /// Hamilton product; `a * b` applies `b` first, then `a`.
    fn mul(self, b: Self) -> Self {
        let a = self;
        Self::new(
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
            a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
        )
    }
}

/// Closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval<T> {
    pub lo: T,
    pub hi: T,
}

impl<T: Scalar> Interval<T> {
    pub fn new(lo: T, hi: T) -> Self {
        Self { lo, hi }
    }

    pub fn symmetric(half: T) -> Self {
        Self::new(-half, half)
    }

    pub fn contains(self, v: T) -> bool {
        v >= self.lo && v <= self.hi
    }

    pub fn widen(self, margin: T) -> Self {
        Self::new(self.lo - margin, self.hi + margin)
    }

    pub fn length(self) -> T {
        self.hi - self.lo
    }

    pub fn clamp(self, v: T) -> T {
        v.max(self.lo).min(self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_rotation_is_noop() {
        let v = Vec3::new(1.0_f64, -2.0, 3.0);
        assert_eq!(Quat::identity().rotate(v), v);
    }

    #[test]
    fn quarter_turn_about_z() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let q = Quat::new(0.0, 0.0, h, h);
        let r = q.rotate(Vec3::new(1.0, 0.0, 0.0));
        assert!((r.x).abs() < 1e-12 && (r.y - 1.0).abs() < 1e-12 && r.z.abs() < 1e-12);
        let twice = (q * q).rotate(Vec3::new(1.0, 0.0, 0.0));
        assert!((twice.x + 1.0).abs() < 1e-12 && twice.y.abs() < 1e-12);
    }

    #[test]
    fn interval_ops() {
        let i = Interval::symmetric(52.5_f32);
        assert!(i.contains(-52.5) && i.contains(52.5) && !i.contains(52.6));
        assert_eq!(i.widen(5.0), Interval::new(-57.5, 57.5));
        assert_eq!(i.length(), 105.0);
        assert_eq!(i.clamp(80.0), 52.5);
    }
}
