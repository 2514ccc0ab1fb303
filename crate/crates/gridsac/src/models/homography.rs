//! Planar homography: `alpha * H * [p; 1] = [q; 1]`.

use super::{normalize_matrix, Correspondence};
use crate::geometry::Point2;
use nalgebra::{Matrix3, Vector3};

/// Denominators smaller than this are treated as a projection to infinity.
pub const PROJECTIVE_EPS: f64 = 1e-12;

/// A 3x3 homography, defined up to scale, stored at unit Frobenius norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Homography {
    m: Matrix3<f64>,
}

impl Homography {
    /// Wrap a matrix, normalizing scale and sign.
    pub fn new(m: Matrix3<f64>) -> Self {
        Self {
            m: normalize_matrix(&m),
        }
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.m
    }

    /// Homogeneous denominator `h3 . [p; 1]` for the projective division.
    pub fn denominator(&self, p: Point2) -> f64 {
        self.m.row(2).transpose().dot(&Vector3::new(p.x, p.y, 1.0))
    }

    /// Map an image-1 point into image 2; `None` when the point lies on the
    /// line mapped to infinity.
    pub fn map_point(&self, p: Point2) -> Option<Point2> {
        let v = self.m * Vector3::new(p.x, p.y, 1.0);
        if v.z.abs() < PROJECTIVE_EPS {
            return None;
        }
        Some(Point2::new(v.x / v.z, v.y / v.z))
    }

    pub fn inverse(&self) -> Option<Homography> {
        self.m.try_inverse().map(Homography::new)
    }

    /// Transfer error in image 2: `|| f(p) - q ||`, `+inf` on degenerate
    /// projection.
    pub fn residual(&self, c: &Correspondence) -> f64 {
        match self.map_point(c.p) {
            Some(mapped) => (mapped - c.q).norm(),
            None => f64::INFINITY,
        }
    }
}
