//! The robust estimation loop: progressive sampling, minimal solving,
//! strategy-dispatched verification, local optimization and confidence-based
//! termination.
//!
//! The loop is sequential and fully deterministic for a fixed seed: random
//! sampling and the SPRT evaluation order draw from independent streams
//! seeded from the run seed, and verification never consumes randomness.
//! With the rejection factor at 1, swapping the traditional strategy for the
//! grid-partitioned one changes neither the returned consensus nor the
//! number of iterations.

use crate::error::{GridsacError, Result};
use crate::grid::{GridSpec, JointGrid};
use crate::models::undistort;
use crate::models::{Correspondence, Model, ModelFamily, RadialHomography, Score};
use crate::solvers::{
    essential_8pt, fundamental_7pt, fundamental_8pt, homography_4pt, homography_dlt,
};
use crate::verify::{
    count_inliers, inlier_indices, Scoring, SprtParams, Strategy, Verdict, Verifier, VerifyStats,
};
use nalgebra::Matrix3;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};

/// Pool-growth budget of the progressive sampler (iterations after which
/// sampling has fully degenerated to uniform), from the cited scheme.
pub const PROSAC_GROWTH_ITERATIONS: f64 = 200_000.0;

/// Early-rejection factor tuned per family; 1.0 is the provably exact mode.
pub fn default_eps_r(family: ModelFamily) -> f64 {
    match family {
        ModelFamily::Homography => 1.6,
        _ => 1.2,
    }
}

/// Configuration of one estimation run.
#[derive(Debug, Clone)]
pub struct RansacConfig {
    pub family: ModelFamily,
    /// Inlier threshold in pixels.
    pub eps: f64,
    /// Termination confidence, in (0, 1).
    pub confidence: f64,
    pub max_iterations: usize,
    /// When set, run exactly this many iterations (sweep mode).
    pub fixed_iterations: Option<usize>,
    pub strategy: Strategy,
    /// Cells per axis in both images.
    pub cells_per_axis: usize,
    /// Early-rejection factor (>= 1; 1 changes nothing, larger trades
    /// accuracy for speed).
    pub eps_r: f64,
    pub sprt: SprtParams,
    pub seed: u64,
    pub scoring: Scoring,
    pub lo_enabled: bool,
    /// Chebyshev nodes per edge for nonlinear bounds.
    pub bound_nodes: usize,
    /// Intrinsics of both views; required for essential-matrix estimation.
    pub intrinsics: Option<(Matrix3<f64>, Matrix3<f64>)>,
    /// Division-model distortion coefficients; used by radial homographies.
    pub lambdas: (f64, f64),
}

impl RansacConfig {
    pub fn new(family: ModelFamily, eps: f64, seed: u64) -> Self {
        Self {
            family,
            eps,
            confidence: 0.99,
            max_iterations: 5000,
            fixed_iterations: None,
            strategy: Strategy::Traditional,
            cells_per_axis: 4,
            eps_r: default_eps_r(family),
            sprt: SprtParams::standard(),
            seed,
            scoring: Scoring::Ransac,
            lo_enabled: true,
            bound_nodes: crate::bounding::DEFAULT_BOUND_NODES,
            intrinsics: None,
            lambdas: (0.0, 0.0),
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        let m = self.family.sample_size();
        if n < m {
            return Err(GridsacError::Data(format!(
                "{n} correspondences cannot seed a sample of {m}"
            )));
        }
        if self.eps <= 0.0 {
            return Err(GridsacError::Config("threshold must be positive".into()));
        }
        if !(0.0 < self.confidence && self.confidence < 1.0) {
            return Err(GridsacError::Config("confidence must be in (0, 1)".into()));
        }
        if self.max_iterations == 0 {
            return Err(GridsacError::Config("need at least one iteration".into()));
        }
        if self.family == ModelFamily::Essential && self.intrinsics.is_none() {
            return Err(GridsacError::Config(
                "essential-matrix estimation needs intrinsics".into(),
            ));
        }
        Ok(())
    }
}

/// Outcome of an estimation run.
#[derive(Debug, Clone)]
pub struct RansacResult {
    pub best_model: Model,
    /// Score from the final full pass over all correspondences.
    pub best_score: Score,
    /// Inlier indices from the same final pass.
    pub inlier_ids: Vec<u32>,
    pub iterations_run: usize,
    pub stats: VerifyStats,
    pub wall_time: Duration,
}

/// Progressive (PROSAC) sampler: draws concentrate on high-score
/// correspondences first and converge to uniform sampling as the hypothesis
/// pool grows over iterations.
pub struct ProsacSampler {
    /// Correspondence ids sorted by descending quality score.
    sorted: Vec<u32>,
    m: usize,
    t: u64,
    /// Current hypothesis pool size.
    n: usize,
    /// Iteration deadline at which the pool grows past `n`.
    deadline: u64,
    /// Expected number of samples containing only top-`n` points.
    t_n: f64,
}

impl ProsacSampler {
    pub fn new(sorted: Vec<u32>, m: usize) -> Result<Self> {
        let total = sorted.len();
        if total < m || m == 0 {
            return Err(GridsacError::Data(format!(
                "cannot draw {m}-point samples from {total} correspondences"
            )));
        }
        // T_m = T_N * prod_{i=0}^{m-1} (m - i) / (N - i)
        let mut t_m = PROSAC_GROWTH_ITERATIONS;
        for i in 0..m {
            t_m *= (m - i) as f64 / (total - i) as f64;
        }
        Ok(Self {
            sorted,
            m,
            t: 0,
            n: m,
            deadline: 1,
            t_n: t_m,
        })
    }

    /// Pool size the next draw will use (for diagnostics and tests).
    pub fn pool_size(&self) -> usize {
        self.n
    }

    /// Advance the iteration counter without sampling.
    pub fn skip(&mut self, iterations: u64) {
        for _ in 0..iterations {
            self.t += 1;
            self.grow();
        }
    }

    fn grow(&mut self) {
        let total = self.sorted.len();
        while self.n < total && self.t >= self.deadline {
            let t_next = self.t_n * (self.n + 1) as f64 / (self.n + 1 - self.m) as f64;
            self.deadline += (t_next - self.t_n).ceil().max(1.0) as u64;
            self.t_n = t_next;
            self.n += 1;
        }
    }

    /// Draw the minimal sample for the next iteration.
    pub fn sample(&mut self, rng: &mut ChaCha8Rng) -> Vec<u32> {
        self.t += 1;
        self.grow();
        let total = self.sorted.len();
        let mut picks: Vec<usize> = Vec::with_capacity(self.m);
        if self.n < total || self.t < self.deadline {
            // Growth phase: the n-th ranked point plus m-1 draws from the
            // top n-1.
            picks.push(self.n - 1);
            while picks.len() < self.m {
                let c = rng.gen_range(0..self.n - 1);
                if !picks.contains(&c) {
                    picks.push(c);
                }
            }
        } else {
            // Saturated: uniform over everything.
            while picks.len() < self.m {
                let c = rng.gen_range(0..total);
                if !picks.contains(&c) {
                    picks.push(c);
                }
            }
        }
        picks.iter().map(|&i| self.sorted[i]).collect()
    }
}

/// Standard RANSAC iteration count to reach `confidence` with inlier ratio
/// `w` and sample size `m`: `ceil(log(1 - confidence) / log(1 - w^m))`,
/// capped at `max_iterations`.
pub fn termination_iters(w: f64, m: usize, confidence: f64, max_iterations: usize) -> usize {
    if w <= 0.0 {
        return max_iterations;
    }
    if w >= 1.0 {
        return 1;
    }
    let w_m = w.powi(m as i32);
    let denom = (-w_m).ln_1p();
    if denom == 0.0 {
        return max_iterations;
    }
    let raw = ((1.0 - confidence).ln() / denom).ceil();
    if !raw.is_finite() || raw >= max_iterations as f64 {
        max_iterations
    } else {
        (raw as usize).max(1)
    }
}

/// Sort correspondence ids by descending quality score; ties keep input
/// order so the sampling sequence is reproducible.
pub fn prosac_order(data: &[Correspondence]) -> Vec<u32> {
    let mut ids: Vec<u32> = (0..data.len() as u32).collect();
    ids.sort_by(|&a, &b| {
        let sa = data[a as usize].score.unwrap_or(0.0);
        let sb = data[b as usize].score.unwrap_or(0.0);
        sb.partial_cmp(&sa).unwrap_or(std::cmp::Ordering::Equal)
    });
    ids
}

fn undistorted_view(data: &[Correspondence], lambda2: f64) -> Result<Vec<Correspondence>> {
    data.iter()
        .map(|c| {
            let q = undistort(c.q, lambda2).ok_or_else(|| {
                GridsacError::Data(format!(
                    "division model undefined at ({}, {}) for lambda2 = {lambda2}",
                    c.q.x, c.q.y
                ))
            })?;
            Ok(Correspondence { q, ..*c })
        })
        .collect()
}

/// Solve the family's minimal problem on a sample; multi-solution solvers
/// return every candidate.
fn solve_minimal(cfg: &RansacConfig, sample: &[Correspondence]) -> Vec<Model> {
    match cfg.family {
        ModelFamily::Homography => homography_4pt(sample)
            .into_iter()
            .map(Model::Homography)
            .collect(),
        ModelFamily::Fundamental => fundamental_7pt(sample)
            .into_iter()
            .map(Model::Fundamental)
            .collect(),
        ModelFamily::Essential => {
            let (k1, k2) = cfg.intrinsics.expect("validated");
            match essential_8pt(sample, &k1, &k2).and_then(Model::essential) {
                Ok(m) => vec![m],
                Err(_) => Vec::new(),
            }
        }
        ModelFamily::RadialHomography => {
            let (l1, l2) = cfg.lambdas;
            let und: Option<Vec<Correspondence>> = sample
                .iter()
                .map(|c| {
                    Some(Correspondence {
                        p: undistort(c.p, l1)?,
                        q: undistort(c.q, l2)?,
                        score: c.score,
                    })
                })
                .collect();
            match und {
                Some(u) => homography_4pt(&u)
                    .into_iter()
                    .map(|h| Model::Radial(RadialHomography::new(*h.matrix(), l1, l2)))
                    .collect(),
                None => Vec::new(),
            }
        }
    }
}

/// Least-squares refit on an inlier set (local optimization step).
fn refit(cfg: &RansacConfig, inliers: &[Correspondence]) -> Option<Model> {
    match cfg.family {
        ModelFamily::Homography => homography_dlt(inliers).ok().map(Model::Homography),
        ModelFamily::Fundamental => fundamental_8pt(inliers).ok().map(Model::Fundamental),
        ModelFamily::Essential => {
            let (k1, k2) = cfg.intrinsics.expect("validated");
            essential_8pt(inliers, &k1, &k2)
                .and_then(Model::essential)
                .ok()
        }
        ModelFamily::RadialHomography => {
            let (l1, l2) = cfg.lambdas;
            let und: Option<Vec<Correspondence>> = inliers
                .iter()
                .map(|c| {
                    Some(Correspondence {
                        p: undistort(c.p, l1)?,
                        q: undistort(c.q, l2)?,
                        score: c.score,
                    })
                })
                .collect();
            homography_dlt(&und?)
                .ok()
                .map(|h| Model::Radial(RadialHomography::new(*h.matrix(), l1, l2)))
        }
    }
}

/// Iterated least-squares local optimization: up to four rounds of
/// {collect inliers, refit, re-verify}, keeping the best-scoring model seen.
/// Returns the input unchanged when the model has too few inliers or every
/// refit fails.
pub fn local_optimize(
    model: &Model,
    score: &Score,
    cfg: &RansacConfig,
    verifier: &mut Verifier<'_>,
    stats: &mut VerifyStats,
) -> (Model, Score) {
    let m = cfg.family.sample_size();
    let mut best_model = model.clone();
    let mut best_score = *score;
    if score.inlier_count < m + 1 {
        return (best_model, best_score);
    }
    // The rejection factor exists to skip hopeless candidate models; a
    // refinement of the current best is not one, so it is verified with the
    // exact factor (at 1.0 this changes nothing).
    let outer_eps_r = verifier.eps_r;
    verifier.eps_r = 1.0;
    for _ in 0..4 {
        let ids = verifier.collect_inliers(&best_model, stats);
        if ids.len() < m + 1 {
            break;
        }
        let inliers: Vec<Correspondence> =
            ids.iter().map(|&id| verifier.data()[id as usize]).collect();
        let candidate = match refit(cfg, &inliers) {
            Some(c) => c,
            None => break,
        };
        match verifier.verify(&candidate, &best_score, stats) {
            Verdict::Scored(s) if s.better_than(&best_score) => {
                best_model = candidate;
                best_score = s;
            }
            _ => break,
        }
    }
    verifier.eps_r = outer_eps_r;
    (best_model, best_score)
}

/// Run the full estimation loop on `data`.
pub fn ransac(data: &[Correspondence], cfg: &RansacConfig) -> Result<RansacResult> {
    cfg.validate(data.len())?;
    let wall0 = Instant::now();
    let n = data.len();
    let m = cfg.family.sample_size();

    // The grid partitions the joint space verification works in: for radial
    // homographies that is (distorted p, undistorted q).
    let grid = if cfg.strategy.needs_grid() {
        let view;
        let grid_data: &[Correspondence] = if cfg.family == ModelFamily::RadialHomography {
            view = undistorted_view(data, cfg.lambdas.1)?;
            &view
        } else {
            data
        };
        let spec = GridSpec::from_points(grid_data, cfg.cells_per_axis, cfg.cells_per_axis)?;
        Some(JointGrid::build(grid_data, spec)?)
    } else {
        if cfg.family == ModelFamily::RadialHomography {
            // Fail on invalid distortion data regardless of strategy.
            undistorted_view(data, cfg.lambdas.1)?;
        }
        None
    };

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut order_rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9E37_79B9_7F4A_7C15);
    let mut sprt_order: Vec<u32> = (0..n as u32).collect();
    sprt_order.shuffle(&mut order_rng);

    let mut verifier = Verifier::new(
        data,
        grid.as_ref(),
        cfg.strategy,
        cfg.eps,
        cfg.eps_r,
        cfg.scoring,
        cfg.sprt,
        cfg.bound_nodes,
        &sprt_order,
        cfg.seed ^ 0x51B7_A0FF_0DD5_EED5,
    )?;

    let mut sampler = ProsacSampler::new(prosac_order(data), m)?;
    let mut stats = VerifyStats::default();
    let mut best: Option<(Model, Score)> = None;
    let mut dynamic_limit = cfg.max_iterations;
    let mut t = 0usize;

    loop {
        let limit = cfg.fixed_iterations.unwrap_or(dynamic_limit);
        if t >= limit {
            break;
        }
        t += 1;
        let sample_ids = sampler.sample(&mut rng);
        let sample: Vec<Correspondence> = sample_ids.iter().map(|&id| data[id as usize]).collect();
        for model in solve_minimal(cfg, &sample) {
            let best_score = best.as_ref().map(|(_, s)| *s).unwrap_or_else(Score::worst);
            let verdict = verifier.verify(&model, &best_score, &mut stats);
            if let Verdict::Scored(s) = verdict {
                if s.better_than(&best_score) {
                    let (mut new_model, mut new_score) = (model, s);
                    if cfg.lo_enabled {
                        let (lo_model, lo_score) =
                            local_optimize(&new_model, &new_score, cfg, &mut verifier, &mut stats);
                        new_model = lo_model;
                        new_score = lo_score;
                    }
                    verifier
                        .sprt
                        .update_epsilon_good(new_score.inlier_count as f64 / n as f64);
                    dynamic_limit = termination_iters(
                        new_score.inlier_count as f64 / n as f64,
                        m,
                        cfg.confidence,
                        cfg.max_iterations,
                    );
                    best = Some((new_model, new_score));
                }
            }
        }
    }

    let (best_model, _) = best.ok_or_else(|| {
        GridsacError::NoModel(format!(
            "no valid model after {t} iterations of {} estimation",
            cfg.family.name()
        ))
    })?;

    // Final traditional pass: the returned consensus always comes from a
    // full scan, independent of the verification strategy.
    let inlier_ids = inlier_indices(&best_model, data, cfg.eps);
    let best_score = count_inliers(&best_model, data, cfg.eps, cfg.scoring);

    Ok(RansacResult {
        best_model,
        best_score,
        inlier_ids,
        iterations_run: t,
        stats,
        wall_time: wall0.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{corr, Homography};
    use nalgebra::Matrix3;
    use rand::Rng;

    #[test]
    fn termination_examples() {
        assert_eq!(termination_iters(0.5, 4, 0.99, 1_000_000), 72);
        assert_eq!(termination_iters(1.0, 4, 0.99, 1_000_000), 1);
        assert_eq!(termination_iters(0.0, 4, 0.99, 5000), 5000);
        // Closed form for w = 0.1, m = 7 is ~46 million before the cap.
        assert_eq!(termination_iters(0.1, 7, 0.99, usize::MAX), 46_051_700);
        assert_eq!(termination_iters(0.1, 7, 0.99, 5000), 5000);
    }

    #[test]
    fn termination_monotonicity() {
        let mut prev = usize::MAX;
        for i in 1..=9 {
            let w = i as f64 / 10.0;
            let it = termination_iters(w, 4, 0.99, usize::MAX);
            assert!(it <= prev);
            prev = it;
        }
        assert!(
            termination_iters(0.5, 4, 0.999, usize::MAX)
                >= termination_iters(0.5, 4, 0.99, usize::MAX)
        );
    }

    #[test]
    fn first_prosac_sample_comes_from_top_pool() {
        let data: Vec<_> = (0..100)
            .map(|i| {
                let mut c = corr(i as f64, 0.0, i as f64, 0.0);
                c.score = Some(1.0 - i as f64 / 100.0);
                c
            })
            .collect();
        let mut sampler = ProsacSampler::new(prosac_order(&data), 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = sampler.sample(&mut rng);
        // Ids 0..100 are already in score order; the first draw stays within
        // the top m + 1 = 5 ranked points.
        assert!(s.iter().all(|&id| id < 5), "sample {s:?}");
        assert!(s.contains(&4));
    }

    #[test]
    fn prosac_sampler_is_deterministic() {
        let data: Vec<_> = (0..50).map(|i| corr(i as f64, 0.0, 0.0, 0.0)).collect();
        let draw = |seed| {
            let mut sampler = ProsacSampler::new(prosac_order(&data), 4).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..20)
                .map(|_| sampler.sample(&mut rng))
                .collect::<Vec<_>>()
        };
        assert_eq!(draw(7), draw(7));
        assert_ne!(draw(7), draw(8));
    }

    #[test]
    fn saturated_prosac_sampling_is_uniform() {
        // After the growth budget the sampler must draw uniformly over all
        // C(10, 2) = 45 pairs. Chi-square test at p > 0.001 (df = 44).
        let data: Vec<_> = (0..10).map(|i| corr(i as f64, 0.0, 0.0, 0.0)).collect();
        let mut sampler = ProsacSampler::new(prosac_order(&data), 2).unwrap();
        sampler.skip(PROSAC_GROWTH_ITERATIONS as u64 + 10);
        assert_eq!(sampler.pool_size(), 10);
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut counts = std::collections::HashMap::new();
        let draws = 100_000;
        for _ in 0..draws {
            let mut s = sampler.sample(&mut rng);
            s.sort_unstable();
            *counts.entry((s[0], s[1])).or_insert(0u64) += 1;
        }
        assert_eq!(counts.len(), 45);
        let expected = draws as f64 / 45.0;
        let chi2: f64 = counts
            .values()
            .map(|&o| {
                let d = o as f64 - expected;
                d * d / expected
            })
            .sum();
        // 0.999 quantile of chi-square with 44 degrees of freedom.
        assert!(chi2 < 78.75, "chi2 = {chi2}");
    }

    fn exact_homography_data(n: usize, seed: u64) -> (Vec<Correspondence>, Homography) {
        let h = Homography::new(Matrix3::new(
            1.05, 0.08, 6.0, -0.04, 0.96, -3.0, 1e-5, -2e-5, 1.0,
        ));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data = (0..n)
            .map(|_| {
                let p = crate::geometry::Point2::new(
                    rng.gen_range(0.0..640.0),
                    rng.gen_range(0.0..480.0),
                );
                let q = h.map_point(p).unwrap();
                Correspondence { p, q, score: None }
            })
            .collect();
        (data, h)
    }

    #[test]
    fn recovers_exact_homography_quickly() {
        let (data, _) = exact_homography_data(100, 61);
        let mut cfg = RansacConfig::new(ModelFamily::Homography, 1.0, 3);
        cfg.strategy = Strategy::Traditional;
        let res = ransac(&data, &cfg).unwrap();
        assert_eq!(res.best_score.inlier_count, 100);
        assert!(res.iterations_run <= 3, "took {}", res.iterations_run);
        assert_eq!(res.inlier_ids.len(), 100);
    }

    #[test]
    fn fixed_seed_reproduces_result() {
        let (data, _) = exact_homography_data(60, 62);
        let mut cfg = RansacConfig::new(ModelFamily::Homography, 2.0, 17);
        cfg.strategy = Strategy::Partition;
        cfg.cells_per_axis = 3;
        let a = ransac(&data, &cfg).unwrap();
        let b = ransac(&data, &cfg).unwrap();
        assert_eq!(a.best_score, b.best_score);
        assert_eq!(a.inlier_ids, b.inlier_ids);
        assert_eq!(a.iterations_run, b.iterations_run);
        assert_eq!(a.stats.evaluated_points, b.stats.evaluated_points);
        match (&a.best_model, &b.best_model) {
            (Model::Homography(x), Model::Homography(y)) => {
                assert_eq!(x.matrix(), y.matrix());
            }
            _ => panic!("unexpected model kind"),
        }
    }

    #[test]
    fn partition_and_traditional_agree_with_exact_rejection() {
        let mut rng = ChaCha8Rng::seed_from_u64(63);
        let (mut data, _) = exact_homography_data(80, 63);
        for _ in 0..120 {
            data.push(corr(
                rng.gen_range(0.0..640.0),
                rng.gen_range(0.0..480.0),
                rng.gen_range(0.0..640.0),
                rng.gen_range(0.0..480.0),
            ));
        }
        let mut cfg = RansacConfig::new(ModelFamily::Homography, 2.0, 5);
        cfg.eps_r = 1.0;
        cfg.fixed_iterations = Some(60);
        cfg.strategy = Strategy::Traditional;
        let trad = ransac(&data, &cfg).unwrap();
        cfg.strategy = Strategy::Partition;
        let part = ransac(&data, &cfg).unwrap();
        assert_eq!(trad.best_score.inlier_count, part.best_score.inlier_count);
        assert_eq!(trad.inlier_ids, part.inlier_ids);
        assert_eq!(trad.iterations_run, part.iterations_run);
        assert!(part.stats.evaluated_points < trad.stats.evaluated_points);
    }

    #[test]
    fn local_optimization_never_worsens_score() {
        let mut rng = ChaCha8Rng::seed_from_u64(64);
        let (mut data, _) = exact_homography_data(50, 64);
        // Perturb inliers slightly and add outliers.
        for c in data.iter_mut() {
            c.q.x += rng.gen_range(-0.5..0.5);
            c.q.y += rng.gen_range(-0.5..0.5);
        }
        for _ in 0..50 {
            data.push(corr(
                rng.gen_range(0.0..640.0),
                rng.gen_range(0.0..480.0),
                rng.gen_range(0.0..640.0),
                rng.gen_range(0.0..480.0),
            ));
        }
        for seed in 0..20 {
            let mut cfg = RansacConfig::new(ModelFamily::Homography, 2.0, seed);
            cfg.lo_enabled = false;
            cfg.fixed_iterations = Some(30);
            let plain = ransac(&data, &cfg).unwrap();
            cfg.lo_enabled = true;
            let lo = ransac(&data, &cfg).unwrap();
            assert!(
                lo.best_score.inlier_count >= plain.best_score.inlier_count,
                "LO lost inliers: {} < {}",
                lo.best_score.inlier_count,
                plain.best_score.inlier_count
            );
        }
    }

    #[test]
    fn too_few_points_is_an_error() {
        let data: Vec<_> = (0..3).map(|i| corr(i as f64, 0.0, 0.0, 0.0)).collect();
        let cfg = RansacConfig::new(ModelFamily::Homography, 1.0, 1);
        assert!(ransac(&data, &cfg).is_err());
    }
}
