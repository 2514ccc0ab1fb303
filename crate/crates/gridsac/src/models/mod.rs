//! Domain types shared by all stages: correspondences, the model families
//! and their residual functions, and verification scores.
//!
//! All types are immutable after construction and the residuals are pure
//! functions, so everything here is safe to share across threads.

mod fundamental;
mod homography;
pub mod radial;

pub use fundamental::{EssentialSetup, FundamentalMatrix};
pub use homography::Homography;
pub use radial::{distort, division_lift, undistort, RadialHomography};

use crate::error::{GridsacError, Result};
use crate::geometry::Point2;
use nalgebra::Matrix3;

/// A 2D-2D point correspondence: `p` in image 1, `q` in image 2, viewed as a
/// single point in the joint 4-D space. The optional `score` is a match
/// quality in `[0, 1]` used for progressive sampling order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correspondence {
    pub p: Point2,
    pub q: Point2,
    pub score: Option<f64>,
}

impl Correspondence {
    pub fn new(p: Point2, q: Point2, score: Option<f64>) -> Result<Self> {
        if !(p.x.is_finite() && p.y.is_finite() && q.x.is_finite() && q.y.is_finite()) {
            return Err(GridsacError::Data("non-finite coordinate".into()));
        }
        if let Some(s) = score {
            if !(0.0..=1.0).contains(&s) || !s.is_finite() {
                return Err(GridsacError::Data(format!("score {s} outside [0, 1]")));
            }
        }
        Ok(Self { p, q, score })
    }
}

/// Shorthand used throughout the tests and examples.
pub fn corr(px: f64, py: f64, qx: f64, qy: f64) -> Correspondence {
    Correspondence {
        p: Point2::new(px, py),
        q: Point2::new(qx, qy),
        score: None,
    }
}

/// Model family selector (drives solver choice and culling strategy).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelFamily {
    Homography,
    Fundamental,
    Essential,
    RadialHomography,
}

impl ModelFamily {
    /// Minimal sample size used by the estimation loop.
    pub fn sample_size(self) -> usize {
        match self {
            ModelFamily::Homography | ModelFamily::RadialHomography => 4,
            ModelFamily::Fundamental => 7,
            // Essential matrices are estimated by the 8-point solver on
            // intrinsics-normalized coordinates.
            ModelFamily::Essential => 8,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ModelFamily::Homography => "homography",
            ModelFamily::Fundamental => "fundamental",
            ModelFamily::Essential => "essential",
            ModelFamily::RadialHomography => "radial_homography",
        }
    }
}

/// A candidate model produced inside the estimation loop.
#[derive(Debug, Clone)]
pub enum Model {
    Homography(Homography),
    Fundamental(FundamentalMatrix),
    /// Essential matrix plus intrinsics; verification goes through the
    /// equivalent fundamental matrix, cached at construction.
    Essential {
        setup: EssentialSetup,
        fundamental: FundamentalMatrix,
    },
    Radial(RadialHomography),
}

impl Model {
    pub fn essential(setup: EssentialSetup) -> Result<Self> {
        let fundamental = setup.fundamental()?;
        Ok(Model::Essential { setup, fundamental })
    }

    pub fn family(&self) -> ModelFamily {
        match self {
            Model::Homography(_) => ModelFamily::Homography,
            Model::Fundamental(_) => ModelFamily::Fundamental,
            Model::Essential { .. } => ModelFamily::Essential,
            Model::Radial(_) => ModelFamily::RadialHomography,
        }
    }

    /// Point-to-model residual in pixels; `+inf` on degenerate evaluations
    /// (point mapped to infinity, epipolar line undefined).
    pub fn residual(&self, c: &Correspondence) -> f64 {
        match self {
            Model::Homography(h) => h.residual(c),
            Model::Fundamental(f) => f.residual(c),
            Model::Essential { fundamental, .. } => fundamental.residual(c),
            Model::Radial(r) => r.residual(c),
        }
    }
}

/// Model quality: consensus size plus the loss used for ranking.
///
/// `loss` is `-inlier_count` for pure inlier counting and the truncated
/// quadratic sum in MSAC mode; lower is better in both cases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Score {
    pub inlier_count: usize,
    pub loss: f64,
    pub evaluated_points: usize,
}

impl Score {
    pub fn worst() -> Self {
        Score {
            inlier_count: 0,
            loss: f64::INFINITY,
            evaluated_points: 0,
        }
    }

    /// Strict quality ordering: lower loss wins, consensus size breaks ties.
    pub fn better_than(&self, other: &Score) -> bool {
        self.loss < other.loss
            || (self.loss == other.loss && self.inlier_count > other.inlier_count)
    }
}

/// Scale a 3x3 matrix to unit Frobenius norm with a deterministic sign:
/// the entry of largest magnitude is made positive.
pub(crate) fn normalize_matrix(m: &Matrix3<f64>) -> Matrix3<f64> {
    let norm = m.norm();
    if norm == 0.0 || !norm.is_finite() {
        return *m;
    }
    let mut scaled = m / norm;
    let mut pivot = 0.0f64;
    for v in scaled.iter() {
        if v.abs() > pivot.abs() {
            pivot = *v;
        }
    }
    if pivot < 0.0 {
        scaled = -scaled;
    }
    scaled
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Matrix3;

    #[test]
    fn correspondence_validation() {
        assert!(Correspondence::new(Point2::new(0.0, 0.0), Point2::new(1.0, 1.0), None).is_ok());
        assert!(
            Correspondence::new(Point2::new(f64::NAN, 0.0), Point2::new(1.0, 1.0), None).is_err()
        );
        assert!(
            Correspondence::new(Point2::new(0.0, 0.0), Point2::new(1.0, 1.0), Some(1.5)).is_err()
        );
    }

    #[test]
    fn score_ordering_prefers_lower_loss_then_more_inliers() {
        let a = Score {
            inlier_count: 10,
            loss: -10.0,
            evaluated_points: 100,
        };
        let b = Score {
            inlier_count: 9,
            loss: -9.0,
            evaluated_points: 100,
        };
        assert!(a.better_than(&b));
        assert!(!b.better_than(&a));
        let tie = Score {
            inlier_count: 11,
            loss: -10.0,
            evaluated_points: 100,
        };
        assert!(tie.better_than(&a));
    }

    #[test]
    fn matrix_normalization_is_scale_and_sign_free() {
        let m = Matrix3::new(1.0, 2.0, 3.0, 4.0, -9.0, 6.0, 7.0, 8.0, 0.5);
        let a = normalize_matrix(&m);
        let b = normalize_matrix(&(m * -3.0));
        assert!((a - b).norm() < 1e-14);
        assert!((a.norm() - 1.0).abs() < 1e-14);
    }
}
