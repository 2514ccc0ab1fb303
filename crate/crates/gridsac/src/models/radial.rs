//! Radially distorted homography under the one-parameter division model.
//!
//! Coordinates are assumed pre-centered at the principal point; the division
//! model lifts a distorted point to `g(x, lambda) = (u, v, 1 + lambda (u^2 + v^2))`,
//! whose projective normalization is the undistorted point. Two views are
//! related by `H g(x1, lambda1) ~ g(x2, lambda2)`.

use super::{normalize_matrix, Correspondence};
use crate::geometry::Point2;
use nalgebra::{Matrix3, Vector3};

use super::homography::PROJECTIVE_EPS;

/// Division-model lift of a distorted point.
pub fn division_lift(x: Point2, lambda: f64) -> Vector3<f64> {
    Vector3::new(x.x, x.y, 1.0 + lambda * (x.x * x.x + x.y * x.y))
}

/// Remove division-model distortion: `x / (1 + lambda |x|^2)`.
///
/// Returns `None` when the denominator is not positive (the model is not
/// defined that far out).
pub fn undistort(x: Point2, lambda: f64) -> Option<Point2> {
    let d = 1.0 + lambda * (x.x * x.x + x.y * x.y);
    if d <= 0.0 {
        return None;
    }
    Some(x / d)
}

/// Apply division-model distortion (inverse of [`undistort`] along the ray).
///
/// Solves `r_u = r_d / (1 + lambda r_d^2)` for the distorted radius, taking
/// the branch continuous at `lambda -> 0`. `None` when no real solution
/// exists (point outside the distortable range for positive `lambda`).
pub fn distort(x_undistorted: Point2, lambda: f64) -> Option<Point2> {
    let r_u = x_undistorted.norm();
    if lambda == 0.0 || r_u == 0.0 {
        return Some(x_undistorted);
    }
    let disc = 1.0 - 4.0 * lambda * r_u * r_u;
    if disc < 0.0 {
        return None;
    }
    let r_d = 2.0 * r_u / (1.0 + disc.sqrt());
    Some(x_undistorted * (r_d / r_u))
}

/// Homography between division-model distorted views.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialHomography {
    h: Matrix3<f64>,
    pub lambda1: f64,
    pub lambda2: f64,
}

impl RadialHomography {
    pub fn new(h: Matrix3<f64>, lambda1: f64, lambda2: f64) -> Self {
        Self {
            h: normalize_matrix(&h),
            lambda1,
            lambda2,
        }
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.h
    }

    /// Map a distorted image-1 point to undistorted image-2 coordinates:
    /// `f(x) = (h1.g / h3.g, h2.g / h3.g)` with `g = division_lift(x, lambda1)`.
    pub fn map_point(&self, p: Point2) -> Option<Point2> {
        let v = self.h * division_lift(p, self.lambda1);
        if v.z.abs() < PROJECTIVE_EPS {
            return None;
        }
        Some(Point2::new(v.x / v.z, v.y / v.z))
    }

    /// Euclidean distance between `f(p)` and the undistorted `q`, both in
    /// undistorted image-2 coordinates. `+inf` on degenerate denominators.
    pub fn residual(&self, c: &Correspondence) -> f64 {
        let (mapped, q_u) = match (self.map_point(c.p), undistort(c.q, self.lambda2)) {
            (Some(m), Some(u)) => (m, u),
            _ => return f64::INFINITY,
        };
        (mapped - q_u).norm()
    }
}
