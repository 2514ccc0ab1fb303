//! Synthetic two-view data with known ground truth.
//!
//! Inliers are generated by mapping uniformly drawn points through a random
//! well-conditioned model of the requested family and perturbing the target
//! side with Gaussian noise in the space the family's residual measures (so
//! the residual of a noisy inlier is exactly the noise magnitude). Outliers
//! are uniform in both images. Everything is deterministic per seed.

use crate::error::{GridsacError, Result};
use crate::geometry::{Aabb2, Point2};
use crate::models::{
    distort, Correspondence, EssentialSetup, FundamentalMatrix, Homography, Model, ModelFamily,
    RadialHomography,
};
use nalgebra::{Matrix3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

/// Configuration of one synthetic instance.
#[derive(Debug, Clone)]
pub struct SynthConfig {
    pub family: ModelFamily,
    pub n: usize,
    pub inlier_ratio: f64,
    /// Noise standard deviation per coordinate, in the residual's units.
    pub noise_sigma: f64,
    /// Generation domain of both images.
    pub extent: Aabb2,
    pub seed: u64,
    /// Division-model coefficients for the radial family.
    pub lambdas: (f64, f64),
}

impl SynthConfig {
    pub fn new(
        family: ModelFamily,
        n: usize,
        inlier_ratio: f64,
        noise_sigma: f64,
        seed: u64,
    ) -> Self {
        Self {
            family,
            n,
            inlier_ratio,
            noise_sigma,
            extent: default_extent(family),
            seed,
            lambdas: default_lambdas(family),
        }
    }
}

/// Pixel-scale domain for projective families, normalized centered domain for
/// the division model.
pub fn default_extent(family: ModelFamily) -> Aabb2 {
    match family {
        ModelFamily::RadialHomography => Aabb2::new(Point2::new(-1.0, -1.0), Point2::new(1.0, 1.0)),
        _ => Aabb2::new(Point2::new(0.0, 0.0), Point2::new(640.0, 480.0)),
    }
}

pub fn default_lambdas(family: ModelFamily) -> (f64, f64) {
    match family {
        ModelFamily::RadialHomography => (-0.2, -0.2),
        _ => (0.0, 0.0),
    }
}

/// Intrinsics used for synthetic essential-matrix scenes, derived from the
/// extent so a file-based run can reconstruct them.
pub fn default_intrinsics(extent: &Aabb2) -> Matrix3<f64> {
    let f = 1.2 * extent.width().max(extent.height());
    let c = extent.center();
    Matrix3::new(f, 0.0, c.x, 0.0, f, c.y, 0.0, 0.0, 1.0)
}

/// A generated instance: matches, the ground-truth model and the generator's
/// inlier labels (index-aligned with `corrs`).
#[derive(Debug, Clone)]
pub struct SynthData {
    pub corrs: Vec<Correspondence>,
    pub ground_truth: Model,
    pub is_inlier: Vec<bool>,
}

fn validate(cfg: &SynthConfig) -> Result<()> {
    if !(cfg.inlier_ratio > 0.0 && cfg.inlier_ratio <= 1.0) {
        return Err(GridsacError::Config(format!(
            "inlier ratio {} outside (0, 1]",
            cfg.inlier_ratio
        )));
    }
    if cfg.n < cfg.family.sample_size() {
        return Err(GridsacError::Config(format!(
            "{} points cannot support {}-point samples",
            cfg.n,
            cfg.family.sample_size()
        )));
    }
    if cfg.noise_sigma < 0.0 {
        return Err(GridsacError::Config("noise sigma must be >= 0".into()));
    }
    if cfg.extent.is_empty() || cfg.extent.width() <= 0.0 || cfg.extent.height() <= 0.0 {
        return Err(GridsacError::Config("degenerate extent".into()));
    }
    Ok(())
}

fn uniform_point(rng: &mut ChaCha8Rng, e: &Aabb2) -> Point2 {
    Point2::new(
        rng.gen_range(e.min.x..e.max.x),
        rng.gen_range(e.min.y..e.max.y),
    )
}

/// Random similarity with a mild projective component, mapping the extent
/// roughly onto itself.
fn random_homography(rng: &mut ChaCha8Rng, extent: &Aabb2) -> Homography {
    let c = extent.center();
    let span = extent.width().max(extent.height());
    loop {
        let angle: f64 = rng.gen_range(-0.35..0.35);
        let scale: f64 = rng.gen_range(0.8..1.25);
        let (s, co) = angle.sin_cos();
        let tx = rng.gen_range(-0.1..0.1) * span;
        let ty = rng.gen_range(-0.1..0.1) * span;
        // Keep the homogeneous denominator within [0.7, 1.3] over the extent.
        let px = rng.gen_range(-0.15..0.15) / span;
        let py = rng.gen_range(-0.15..0.15) / span;
        // Rotate and scale about the extent center.
        let a = scale * co;
        let b = -scale * s;
        let d = scale * s;
        let e = scale * co;
        let m = Matrix3::new(
            a,
            b,
            c.x - a * c.x - b * c.y + tx,
            d,
            e,
            c.y - d * c.x - e * c.y + ty,
            px,
            py,
            1.0 - px * c.x - py * c.y,
        );
        if m.determinant().abs() > 1e-9 {
            return Homography::new(m);
        }
    }
}

/// Random calibrated two-view pose: small rotation, sideways-dominant
/// baseline, scene points in front of both cameras.
struct TwoViewScene {
    k: Matrix3<f64>,
    k_inv: Matrix3<f64>,
    r: Matrix3<f64>,
    t: Vector3<f64>,
}

impl TwoViewScene {
    fn random(rng: &mut ChaCha8Rng, extent: &Aabb2) -> Self {
        let k = default_intrinsics(extent);
        let yaw: f64 = rng.gen_range(-0.25..0.25);
        let pitch: f64 = rng.gen_range(-0.15..0.15);
        let (sy, cy) = yaw.sin_cos();
        let (sp, cp) = pitch.sin_cos();
        let r = Matrix3::new(cy, 0.0, sy, 0.0, 1.0, 0.0, -sy, 0.0, cy)
            * Matrix3::new(1.0, 0.0, 0.0, 0.0, cp, -sp, 0.0, sp, cp);
        let t = Vector3::new(
            rng.gen_range(0.4..1.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 },
            rng.gen_range(-0.3..0.3),
            rng.gen_range(-0.2..0.2),
        );
        Self {
            k,
            k_inv: k.try_inverse().expect("intrinsics invertible"),
            r,
            t,
        }
    }

    fn essential(&self) -> Matrix3<f64> {
        let t = self.t;
        Matrix3::new(0.0, -t.z, t.y, t.z, 0.0, -t.x, -t.y, t.x, 0.0) * self.r
    }

    fn fundamental(&self) -> FundamentalMatrix {
        FundamentalMatrix::new(self.k_inv.transpose() * self.essential() * self.k_inv)
    }

    /// One projected pair with both projections inside the extent.
    fn sample_pair(&self, rng: &mut ChaCha8Rng, extent: &Aabb2) -> (Point2, Point2) {
        loop {
            // Back-project a uniform image-1 point to a random depth.
            let p = uniform_point(rng, extent);
            let depth = rng.gen_range(4.0..12.0);
            let x = self.k_inv * Vector3::new(p.x, p.y, 1.0) * depth;
            let x2 = self.r * x + self.t;
            if x2.z < 0.5 {
                continue;
            }
            let q_h = self.k * x2;
            let q = Point2::new(q_h.x / q_h.z, q_h.y / q_h.z);
            if extent.contains(q) {
                return (p, q);
            }
        }
    }
}

/// Matching score convention for synthetic data: inliers get
/// `1 - residual / (3 sigma)` plus mild noise, outliers are uniform over the
/// lower half of the range so the ranking carries usable signal.
fn inlier_score(rng: &mut ChaCha8Rng, residual: f64, sigma: f64) -> f64 {
    let normal = Normal::new(0.0, 0.1).expect("valid sigma");
    let normalized = residual / (3.0 * sigma + 1e-9);
    (1.0 - normalized + normal.sample(rng)).clamp(0.0, 1.0)
}

fn outlier_score(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(0.0..0.5)
}

/// Generate one synthetic instance.
pub fn synth_generate(cfg: &SynthConfig) -> Result<SynthData> {
    validate(cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n_inliers = (cfg.n as f64 * cfg.inlier_ratio).round() as usize;
    let noise = Normal::new(0.0, cfg.noise_sigma.max(1e-300)).expect("valid sigma");
    let mut corrs = Vec::with_capacity(cfg.n);
    let mut is_inlier = Vec::with_capacity(cfg.n);
    let e = &cfg.extent;

    let ground_truth = match cfg.family {
        ModelFamily::Homography => {
            let h = random_homography(&mut rng, e);
            for _ in 0..n_inliers {
                let (p, q) = loop {
                    let p = uniform_point(&mut rng, e);
                    if let Some(q) = h.map_point(p) {
                        if e.inflated(0.25 * e.width()).contains(q) {
                            break (p, q);
                        }
                    }
                };
                let q_noisy = if cfg.noise_sigma > 0.0 {
                    q + Point2::new(noise.sample(&mut rng), noise.sample(&mut rng))
                } else {
                    q
                };
                let r = (q_noisy - q).norm();
                let score = inlier_score(&mut rng, r, cfg.noise_sigma);
                corrs.push(Correspondence {
                    p,
                    q: q_noisy,
                    score: Some(score),
                });
                is_inlier.push(true);
            }
            Model::Homography(h)
        }
        ModelFamily::Fundamental | ModelFamily::Essential => {
            let scene = TwoViewScene::random(&mut rng, e);
            for _ in 0..n_inliers {
                let (p, q) = scene.sample_pair(&mut rng, e);
                let q_noisy = if cfg.noise_sigma > 0.0 {
                    q + Point2::new(noise.sample(&mut rng), noise.sample(&mut rng))
                } else {
                    q
                };
                let r = (q_noisy - q).norm();
                let score = inlier_score(&mut rng, r, cfg.noise_sigma);
                corrs.push(Correspondence {
                    p,
                    q: q_noisy,
                    score: Some(score),
                });
                is_inlier.push(true);
            }
            if cfg.family == ModelFamily::Fundamental {
                Model::Fundamental(scene.fundamental())
            } else {
                let setup = EssentialSetup::new(scene.essential(), scene.k, scene.k)?;
                Model::essential(setup)?
            }
        }
        ModelFamily::RadialHomography => {
            let (l1, l2) = cfg.lambdas;
            let h = random_homography(&mut rng, e);
            let model = RadialHomography::new(*h.matrix(), l1, l2);
            for _ in 0..n_inliers {
                let (p, q, r) = loop {
                    let p = uniform_point(&mut rng, e);
                    let u = match model.map_point(p) {
                        Some(u) => u,
                        None => continue,
                    };
                    // Noise in undistorted coordinates, where the residual
                    // is measured.
                    let u_noisy = if cfg.noise_sigma > 0.0 {
                        u + Point2::new(noise.sample(&mut rng), noise.sample(&mut rng))
                    } else {
                        u
                    };
                    let q = match distort(u_noisy, l2) {
                        Some(q) => q,
                        None => continue,
                    };
                    if e.contains(q) {
                        break (p, q, (u_noisy - u).norm());
                    }
                };
                let score = inlier_score(&mut rng, r, cfg.noise_sigma);
                corrs.push(Correspondence {
                    p,
                    q,
                    score: Some(score),
                });
                is_inlier.push(true);
            }
            Model::Radial(model)
        }
    };

    for _ in n_inliers..cfg.n {
        let p = uniform_point(&mut rng, e);
        let q = uniform_point(&mut rng, e);
        let score = outlier_score(&mut rng);
        corrs.push(Correspondence {
            p,
            q,
            score: Some(score),
        });
        is_inlier.push(false);
    }

    Ok(SynthData {
        corrs,
        ground_truth,
        is_inlier,
    })
}
