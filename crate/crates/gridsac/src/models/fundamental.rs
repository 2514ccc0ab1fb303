//! Epipolar geometry: fundamental matrices and essential-matrix setups.

use super::{normalize_matrix, Correspondence};
use crate::error::{GridsacError, Result};
use crate::geometry::Point2;
use nalgebra::{Matrix3, Vector3};

/// A 3x3 fundamental matrix (`x2^T F x1 = 0`), unit Frobenius norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FundamentalMatrix {
    m: Matrix3<f64>,
}

impl FundamentalMatrix {
    pub fn new(m: Matrix3<f64>) -> Self {
        Self {
            m: normalize_matrix(&m),
        }
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.m
    }

    /// Epipolar line in image 2 implied by an image-1 point: `l2 = F [p; 1]`.
    pub fn epipolar_line_2(&self, p: Point2) -> Vector3<f64> {
        self.m * Vector3::new(p.x, p.y, 1.0)
    }

    /// Epipolar line in image 1 implied by an image-2 point: `l1 = F^T [q; 1]`.
    pub fn epipolar_line_1(&self, q: Point2) -> Vector3<f64> {
        self.m.transpose() * Vector3::new(q.x, q.y, 1.0)
    }

    /// Point-to-epipolar-line distance of `q` in image 2, `+inf` when the
    /// line is undefined (`a2 = b2 = 0`).
    pub fn residual(&self, c: &Correspondence) -> f64 {
        let l = self.epipolar_line_2(c.p);
        let n = (l.x * l.x + l.y * l.y).sqrt();
        if n == 0.0 {
            return f64::INFINITY;
        }
        (l.x * c.q.x + l.y * c.q.y + l.z).abs() / n
    }

    /// |det F|; rank-2 enforcement in the solvers keeps this near zero.
    pub fn det(&self) -> f64 {
        self.m.determinant()
    }
}

/// Essential matrix with the camera intrinsics of both views.
///
/// Verification and culling are delegated to the equivalent fundamental
/// matrix `F = K2^-T E K1^-1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EssentialSetup {
    pub e: Matrix3<f64>,
    pub k1: Matrix3<f64>,
    pub k2: Matrix3<f64>,
}

impl EssentialSetup {
    pub fn new(e: Matrix3<f64>, k1: Matrix3<f64>, k2: Matrix3<f64>) -> Result<Self> {
        for (name, k) in [("K1", &k1), ("K2", &k2)] {
            if k[(1, 0)].abs() > 1e-12 || k[(2, 0)].abs() > 1e-12 || k[(2, 1)].abs() > 1e-12 {
                return Err(GridsacError::Data(format!(
                    "{name} is not upper-triangular"
                )));
            }
            if k[(0, 0)] <= 0.0 || k[(1, 1)] <= 0.0 || k[(2, 2)] <= 0.0 {
                return Err(GridsacError::Data(format!(
                    "{name} must have a positive diagonal"
                )));
            }
        }
        Ok(Self {
            e: normalize_matrix(&e),
            k1,
            k2,
        })
    }

    /// `F = K2^-T E K1^-1`, renormalized.
    pub fn fundamental(&self) -> Result<FundamentalMatrix> {
        let k1_inv = self
            .k1
            .try_inverse()
            .ok_or_else(|| GridsacError::Numerical("singular K1".into()))?;
        let k2_inv = self
            .k2
            .try_inverse()
            .ok_or_else(|| GridsacError::Numerical("singular K2".into()))?;
        Ok(FundamentalMatrix::new(k2_inv.transpose() * self.e * k1_inv))
    }

    /// Relative gap between the two nonzero singular values (0 for an exact
    /// essential matrix).
    pub fn singular_value_gap(&self) -> f64 {
        let sv = self.e.svd(false, false).singular_values;
        let (s1, s2) = (sv[0], sv[1]);
        if s1 == 0.0 {
            return f64::INFINITY;
        }
        (s1 - s2).abs() / s1
    }
}
