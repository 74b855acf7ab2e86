//! Small fixed-size vector/matrix types used throughout the crate.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

/// A point or vector in 3-space.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };

impl Vec3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn splat(v: f64) -> Self {
        Vec3::new(v, v, v)
    }

    #[inline]
    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    #[inline]
    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn normalized(self) -> Vec3 {
        self / self.norm()
    }

    #[inline]
    pub fn component(self, i: usize) -> f64 {
        match i {
            0 => self.x,
            1 => self.y,
            2 => self.z,
            _ => panic!("component index out of range: {i}"),
        }
    }

    pub fn set_component(&mut self, i: usize, v: f64) {
        match i {
            0 => self.x = v,
            1 => self.y = v,
            2 => self.z = v,
            _ => panic!("component index out of range: {i}"),
        }
    }

    /// Outer product `self * other^T`.
    pub fn outer(self, o: Vec3) -> Mat3 {
        Mat3::from_rows(self.x * o, self.y * o, self.z * o)
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    #[inline]
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    #[inline]
    fn add_assign(&mut self, o: Vec3) {
        self.x += o.x;
        self.y += o.y;
        self.z += o.z;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    #[inline]
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    #[inline]
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    #[inline]
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    #[inline]
    fn div(self, s: f64) -> Vec3 {
        Vec3::new(self.x / s, self.y / s, self.z / s)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    #[inline]
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// Row-major 3x3 matrix.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Mat3 {
    pub rows: [[f64; 3]; 3],
}

impl Mat3 {
    pub fn from_rows(r0: Vec3, r1: Vec3, r2: Vec3) -> Self {
        Mat3 {
            rows: [[r0.x, r0.y, r0.z], [r1.x, r1.y, r1.z], [r2.x, r2.y, r2.z]],
        }
    }

    pub fn identity() -> Self {
        Mat3 {
            rows: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        }
    }

    pub fn diagonal(d: Vec3) -> Self {
        Mat3 {
            rows: [[d.x, 0.0, 0.0], [0.0, d.y, 0.0], [0.0, 0.0, d.z]],
        }
    }

    pub fn zeros() -> Self {
        Mat3 { rows: [[0.0; 3]; 3] }
    }

    pub fn trace(&self) -> f64 {
        self.rows[0][0] + self.rows[1][1] + self.rows[2][2]
    }

    pub fn mul_vec(&self, v: Vec3) -> Vec3 {
        Vec3::new(
            self.rows[0][0] * v.x + self.rows[0][1] * v.y + self.rows[0][2] * v.z,
            self.rows[1][0] * v.x + self.rows[1][1] * v.y + self.rows[1][2] * v.z,
            self.rows[2][0] * v.x + self.rows[2][1] * v.y + self.rows[2][2] * v.z,
        )
    }

    pub fn scale(&self, s: f64) -> Mat3 {
        let mut out = *self;
        for r in out.rows.iter_mut() {
            for e in r.iter_mut() {
                *e *= s;
            }
        }
        out
    }

    pub fn sub(&self, o: &Mat3) -> Mat3 {
        let mut out = *self;
        for (r, ro) in out.rows.iter_mut().zip(o.rows.iter()) {
            for (e, eo) in r.iter_mut().zip(ro.iter()) {
                *e -= *eo;
            }
        }
        out
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.rows
            .iter()
            .flatten()
            .fold(0.0_f64, |m, &e| m.max(e.abs()))
    }

    pub fn set_column(&mut self, j: usize, v: Vec3) {
        self.rows[0][j] = v.x;
        self.rows[1][j] = v.y;
        self.rows[2][j] = v.z;
    }
}

/// Axis-aligned bounding box.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Aabb {
    pub min: Vec3,
    pub max: Vec3,
}

impl Aabb {
    pub fn new(min: Vec3, max: Vec3) -> Self {
        Aabb { min, max }
    }

    pub fn symmetric(half_extents: Vec3) -> Self {
        Aabb {
            min: -half_extents,
            max: half_extents,
        }
    }

    pub fn extent(&self, axis: usize) -> f64 {
        self.max.component(axis) - self.min.component(axis)
    }

    pub fn contains(&self, p: Vec3) -> bool {
        (0..3).all(|i| {
            p.component(i) >= self.min.component(i) && p.component(i) <= self.max.component(i)
        })
    }

    pub fn max_extent(&self) -> f64 {
        (0..3).map(|i| self.extent(i)).fold(0.0, f64::max)
    }
}

/// Coordinate axis used as a projection direction (1, 2 or 3 in output files).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    #[inline]
    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    /// The two axes spanning the perpendicular coordinate plane.
    pub fn others(self) -> (usize, usize) {
        match self {
            Axis::X => (1, 2),
            Axis::Y => (0, 2),
            Axis::Z => (0, 1),
        }
    }

    /// 1-based label used in CSV output.
    pub fn label(self) -> u8 {
        self.index() as u8 + 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vector_ops() {
        let a = Vec3::new(1.0, 2.0, 3.0);
        let b = Vec3::new(-1.0, 0.5, 2.0);
        assert_eq!(a.dot(b), -1.0 + 1.0 + 6.0);
        assert_eq!(a.cross(b).dot(a), 0.0);
        assert_eq!(a.cross(b).dot(b), 0.0);
        assert!((Vec3::new(3.0, 4.0, 0.0).norm() - 5.0).abs() < 1e-15);
    }

    #[test]
    fn outer_and_matvec() {
        let n = Vec3::new(0.0, 0.0, 1.0);
        let m = n.outer(n);
        let v = Vec3::new(1.0, 2.0, 3.0);
        assert_eq!(m.mul_vec(v), Vec3::new(0.0, 0.0, 3.0));
        assert_eq!(Mat3::identity().mul_vec(v), v);
    }

    #[test]
    fn aabb_contains() {
        let b = Aabb::symmetric(Vec3::splat(1.1));
        assert!(b.contains(Vec3::new(1.0, -1.0, 0.0)));
        assert!(!b.contains(Vec3::new(1.2, 0.0, 0.0)));
    }
}
