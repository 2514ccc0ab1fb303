//! Model-quality computation strategies.
//!
//! Four interchangeable verifiers measure the consensus of a candidate model:
//!
//! - `Traditional`: residuals of all N correspondences;
//! - `Partition`: grid culling first (see [`crate::bounding`]), then
//!   residuals of the surviving candidates only — with the rejection factor
//!   at 1 the resulting inlier set is provably identical to `Traditional`;
//! - `Sprt`: Wald's sequential probability ratio test over a randomized
//!   point order, aborting verification of likely-bad models;
//! - `PartitionSprt`: culling followed by SPRT on the candidates.
//!
//! Partition strategies also reject models early when the candidate upper
//! bound cannot beat the best consensus so far.

use crate::bounding::cull_cells;
use crate::error::{GridsacError, Result};
use crate::grid::JointGrid;
use crate::models::{Correspondence, Model, Score};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};

/// Inlier scoring mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scoring {
    /// Pure inlier counting; loss is the negated count.
    Ransac,
    /// Truncated quadratic loss `sum min(r^2, eps^2)`.
    Msac,
}

/// Verification strategy selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Traditional,
    Partition,
    Sprt,
    PartitionSprt,
}

impl Strategy {
    pub fn needs_grid(self) -> bool {
        matches!(self, Strategy::Partition | Strategy::PartitionSprt)
    }

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Traditional => "trad",
            Strategy::Partition => "grid",
            Strategy::Sprt => "sprt",
            Strategy::PartitionSprt => "grid-sprt",
        }
    }
}

/// Parameters of the sequential probability ratio test.
#[derive(Debug, Clone, Copy)]
pub struct SprtParams {
    /// Assumed inlier probability of a good model.
    pub epsilon_good: f64,
    /// Inlier probability of a bad (random) model.
    pub delta_bad: f64,
    /// Rejection threshold for the likelihood ratio.
    pub threshold_a: f64,
}

impl SprtParams {
    /// Wald threshold `(1 - beta) / alpha` for error probabilities
    /// `alpha = beta = 0.05`, with a weak initial inlier-ratio guess that is
    /// tightened as better models are found.
    pub fn standard() -> Self {
        Self {
            epsilon_good: 0.1,
            delta_bad: 0.01,
            threshold_a: 0.95 / 0.05,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.epsilon_good > 0.0
            && self.epsilon_good < 1.0
            && self.delta_bad > 0.0
            && self.delta_bad < self.epsilon_good
            && self.threshold_a > 1.0;
        if ok {
            Ok(())
        } else {
            Err(GridsacError::Config(format!(
                "invalid SPRT parameters: eps={} delta={} A={}",
                self.epsilon_good, self.delta_bad, self.threshold_a
            )))
        }
    }

    /// Raise the good-model inlier probability to an observed ratio and
    /// refresh the threshold (constant under the plain Wald bound).
    pub fn update_epsilon_good(&mut self, observed_ratio: f64) {
        let floor = (self.delta_bad * 2.0).min(0.5);
        self.epsilon_good = observed_ratio.clamp(floor, 0.999).max(self.epsilon_good);
        self.threshold_a = 0.95 / 0.05;
    }
}

/// Counters and timers accumulated over a run.
#[derive(Debug, Clone, Copy, Default)]
pub struct VerifyStats {
    /// Residual evaluations performed.
    pub evaluated_points: u64,
    /// Points skipped thanks to cell culling.
    pub culled_points: u64,
    /// Models rejected from the candidate upper bound alone.
    pub early_rejections: u64,
    /// Models that entered verification.
    pub models_verified: u64,
    /// Time spent culling cells (t_r).
    pub cell_rejection_time: Duration,
    /// Time spent computing residuals (t_v).
    pub verification_time: Duration,
}

impl VerifyStats {
    pub fn merge(&mut self, other: &VerifyStats) {
        self.evaluated_points += other.evaluated_points;
        self.culled_points += other.culled_points;
        self.early_rejections += other.early_rejections;
        self.models_verified += other.models_verified;
        self.cell_rejection_time += other.cell_rejection_time;
        self.verification_time += other.verification_time;
    }
}

/// Outcome of verifying one model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Verdict {
    /// Fully scored (possibly on the culled candidate set).
    Scored(Score),
    /// Rejected from the upper bound without evaluating any residual.
    EarlyRejected,
    /// Rejected by the sequential test after a partial scan.
    SprtRejected(Score),
}

impl Verdict {
    pub fn score(&self) -> Option<Score> {
        match self {
            Verdict::Scored(s) => Some(*s),
            _ => None,
        }
    }
}

/// Candidate correspondences surviving the grid culling for `model`, plus
/// the inlier-count upper bound. Every true inlier is among the candidates.
pub fn prefilter(
    model: &Model,
    data: &[Correspondence],
    grid: &JointGrid,
    eps: f64,
    bound_nodes: usize,
) -> (Vec<Correspondence>, usize) {
    let (ids, upper) = prefilter_ids(model, grid, eps, bound_nodes);
    (ids.iter().map(|&id| data[id as usize]).collect(), upper)
}

/// Id-level variant of [`prefilter`].
pub fn prefilter_ids(
    model: &Model,
    grid: &JointGrid,
    eps: f64,
    bound_nodes: usize,
) -> (Vec<u32>, usize) {
    let sel = cull_cells(model, grid, eps, bound_nodes);
    let mut ids = Vec::with_capacity(sel.candidate_count);
    for (c1, c2) in &sel.pairs {
        ids.extend_from_slice(grid.ids_in_cell_pair(*c1, *c2));
    }
    debug_assert_eq!(ids.len(), sel.candidate_count);
    (ids, sel.candidate_count)
}

/// The early model rejection rule: discard when even the optimistic upper
/// bound cannot beat the best consensus, scaled by `eps_r >= 1`.
/// `eps_r = 1` provably never rejects a model that would become the new best.
pub fn early_reject(upper_bound: usize, best_inliers: usize, eps_r: f64) -> bool {
    eps_r * best_inliers as f64 > upper_bound as f64
}

/// Count inliers (residual strictly below `eps`) and compute the loss.
pub fn count_inliers(model: &Model, corrs: &[Correspondence], eps: f64, scoring: Scoring) -> Score {
    let mut inliers = 0usize;
    let mut msac_loss = 0.0f64;
    let eps_sq = eps * eps;
    for c in corrs {
        let r = model.residual(c);
        if r < eps {
            inliers += 1;
        }
        if scoring == Scoring::Msac {
            msac_loss += (r * r).min(eps_sq);
        }
    }
    Score {
        inlier_count: inliers,
        loss: match scoring {
            Scoring::Ransac => -(inliers as f64),
            Scoring::Msac => msac_loss,
        },
        evaluated_points: corrs.len(),
    }
}

/// Indices of all inliers by a full scan.
pub fn inlier_indices(model: &Model, data: &[Correspondence], eps: f64) -> Vec<u32> {
    data.iter()
        .enumerate()
        .filter(|(_, c)| model.residual(c) < eps)
        .map(|(i, _)| i as u32)
        .collect()
}

/// Wald's sequential probability ratio test over correspondences in the
/// given order. Returns the decision and the partial score (full score when
/// accepted).
pub fn sprt_verify<'a, I>(
    model: &Model,
    ordered: I,
    params: &SprtParams,
    eps: f64,
    scoring: Scoring,
) -> (bool, Score)
where
    I: IntoIterator<Item = &'a Correspondence>,
{
    let inlier_factor = params.delta_bad / params.epsilon_good;
    let outlier_factor = (1.0 - params.delta_bad) / (1.0 - params.epsilon_good);
    let eps_sq = eps * eps;
    let mut lambda = 1.0f64;
    let mut inliers = 0usize;
    let mut msac_loss = 0.0f64;
    let mut processed = 0usize;
    for c in ordered {
        processed += 1;
        let r = model.residual(c);
        if r < eps {
            inliers += 1;
            lambda *= inlier_factor;
        } else {
            lambda *= outlier_factor;
        }
        if scoring == Scoring::Msac {
            msac_loss += (r * r).min(eps_sq);
        }
        if lambda > params.threshold_a {
            return (
                false,
                Score {
                    inlier_count: inliers,
                    loss: f64::INFINITY,
                    evaluated_points: processed,
                },
            );
        }
    }
    (
        true,
        Score {
            inlier_count: inliers,
            loss: match scoring {
                Scoring::Ransac => -(inliers as f64),
                Scoring::Msac => msac_loss,
            },
            evaluated_points: processed,
        },
    )
}

/// Strategy-independent verification front end used by the estimation loop.
pub struct Verifier<'a> {
    data: &'a [Correspondence],
    grid: Option<&'a JointGrid>,
    /// Randomized SPRT evaluation order (correspondence ids).
    sprt_order: Vec<u32>,
    /// Per-model rotation into the order, so models never share a rejection
    /// prefix (a fixed prefix of outliers would veto every model alike).
    offset_rng: ChaCha8Rng,
    /// Candidate marks for the combined strategy, keyed by generation so no
    /// per-model clearing is needed.
    candidate_stamp: Vec<u32>,
    stamp_generation: u32,
    pub strategy: Strategy,
    pub eps: f64,
    pub eps_r: f64,
    pub scoring: Scoring,
    pub sprt: SprtParams,
    pub bound_nodes: usize,
}

impl<'a> Verifier<'a> {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        data: &'a [Correspondence],
        grid: Option<&'a JointGrid>,
        strategy: Strategy,
        eps: f64,
        eps_r: f64,
        scoring: Scoring,
        sprt: SprtParams,
        bound_nodes: usize,
        sprt_order: &[u32],
        order_seed: u64,
    ) -> Result<Self> {
        if strategy.needs_grid() && grid.is_none() {
            return Err(GridsacError::Config(format!(
                "strategy {} requires a grid",
                strategy.name()
            )));
        }
        if eps <= 0.0 {
            return Err(GridsacError::Config("threshold must be positive".into()));
        }
        if eps_r < 1.0 {
            return Err(GridsacError::Config("rejection factor must be >= 1".into()));
        }
        sprt.validate()?;
        if sprt_order.len() != data.len() {
            return Err(GridsacError::Config(
                "SPRT order must be a permutation of the data indices".into(),
            ));
        }
        Ok(Self {
            data,
            grid,
            sprt_order: sprt_order.to_vec(),
            offset_rng: ChaCha8Rng::seed_from_u64(order_seed),
            candidate_stamp: vec![0; data.len()],
            stamp_generation: 0,
            strategy,
            eps,
            eps_r,
            scoring,
            sprt,
            bound_nodes,
        })
    }

    fn msac_culled_correction(&self, culled: usize) -> f64 {
        match self.scoring {
            // Culled points are guaranteed outliers: each contributes the
            // truncation constant, keeping the loss identical to a full scan.
            Scoring::Msac => culled as f64 * self.eps * self.eps,
            Scoring::Ransac => 0.0,
        }
    }

    /// Verify one model against the current best consensus.
    pub fn verify(&mut self, model: &Model, best: &Score, stats: &mut VerifyStats) -> Verdict {
        let n = self.data.len();
        match self.strategy {
            Strategy::Traditional => {
                stats.models_verified += 1;
                let t0 = Instant::now();
                let score = count_inliers(model, self.data, self.eps, self.scoring);
                stats.verification_time += t0.elapsed();
                stats.evaluated_points += score.evaluated_points as u64;
                Verdict::Scored(score)
            }
            Strategy::Sprt => {
                stats.models_verified += 1;
                let t0 = Instant::now();
                let off = (self.offset_rng.gen::<u64>() % n.max(1) as u64) as usize;
                let (head, tail) = self.sprt_order.split_at(off);
                let (accepted, mut score) = sprt_verify(
                    model,
                    tail.iter().chain(head).map(|&id| &self.data[id as usize]),
                    &self.sprt,
                    self.eps,
                    self.scoring,
                );
                stats.verification_time += t0.elapsed();
                stats.evaluated_points += score.evaluated_points as u64;
                if accepted {
                    score.evaluated_points = n;
                    Verdict::Scored(score)
                } else {
                    Verdict::SprtRejected(score)
                }
            }
            Strategy::Partition => {
                let grid = self.grid.expect("checked in constructor");
                let t0 = Instant::now();
                let sel = cull_cells(model, grid, self.eps, self.bound_nodes);
                stats.cell_rejection_time += t0.elapsed();
                if early_reject(sel.candidate_count, best.inlier_count, self.eps_r) {
                    stats.early_rejections += 1;
                    return Verdict::EarlyRejected;
                }
                stats.models_verified += 1;
                // Count straight off the bucket slices: no candidate list is
                // materialized on this hot path.
                let t0 = Instant::now();
                let mut inliers = 0usize;
                let mut msac_loss = 0.0f64;
                let eps_sq = self.eps * self.eps;
                for (c1, c2) in &sel.pairs {
                    for &id in grid.ids_in_cell_pair(*c1, *c2) {
                        let r = model.residual(&self.data[id as usize]);
                        if r < self.eps {
                            inliers += 1;
                        }
                        if self.scoring == Scoring::Msac {
                            msac_loss += (r * r).min(eps_sq);
                        }
                    }
                }
                stats.verification_time += t0.elapsed();
                let evaluated = sel.candidate_count;
                let score = Score {
                    inlier_count: inliers,
                    loss: match self.scoring {
                        Scoring::Ransac => -(inliers as f64),
                        Scoring::Msac => msac_loss + self.msac_culled_correction(n - evaluated),
                    },
                    evaluated_points: evaluated,
                };
                stats.evaluated_points += evaluated as u64;
                stats.culled_points += (n - evaluated) as u64;
                Verdict::Scored(score)
            }
            Strategy::PartitionSprt => {
                let grid = self.grid.expect("checked in constructor");
                let t0 = Instant::now();
                let sel = cull_cells(model, grid, self.eps, self.bound_nodes);
                stats.cell_rejection_time += t0.elapsed();
                if early_reject(sel.candidate_count, best.inlier_count, self.eps_r) {
                    stats.early_rejections += 1;
                    return Verdict::EarlyRejected;
                }
                stats.models_verified += 1;
                let t0 = Instant::now();
                // Mark candidates and walk the randomized order lazily; the
                // sequence equals "candidates sorted by shuffled rank".
                self.stamp_generation = self.stamp_generation.wrapping_add(1);
                if self.stamp_generation == 0 {
                    self.candidate_stamp.fill(0);
                    self.stamp_generation = 1;
                }
                let generation = self.stamp_generation;
                for (c1, c2) in &sel.pairs {
                    for &id in grid.ids_in_cell_pair(*c1, *c2) {
                        self.candidate_stamp[id as usize] = generation;
                    }
                }
                let off = (self.offset_rng.gen::<u64>() % n.max(1) as u64) as usize;
                let stamps = &self.candidate_stamp;
                let data = self.data;
                let (head, tail) = self.sprt_order.split_at(off);
                let (accepted, mut score) = sprt_verify(
                    model,
                    tail.iter()
                        .chain(head)
                        .filter(|&&id| stamps[id as usize] == generation)
                        .map(|&id| &data[id as usize]),
                    &self.sprt,
                    self.eps,
                    self.scoring,
                );
                stats.verification_time += t0.elapsed();
                let evaluated = sel.candidate_count;
                stats.evaluated_points += score.evaluated_points as u64;
                stats.culled_points += (n - evaluated) as u64;
                if accepted {
                    score.loss += self.msac_culled_correction(n - evaluated);
                    score.evaluated_points = evaluated;
                    Verdict::Scored(score)
                } else {
                    Verdict::SprtRejected(score)
                }
            }
        }
    }

    /// Inlier ids of a model, using the grid to skip culled points when the
    /// strategy has one. Residual evaluations are charged to `stats`.
    pub fn collect_inliers(&self, model: &Model, stats: &mut VerifyStats) -> Vec<u32> {
        if let (true, Some(grid)) = (self.strategy.needs_grid(), self.grid) {
            let t0 = Instant::now();
            let sel = cull_cells(model, grid, self.eps, self.bound_nodes);
            stats.cell_rejection_time += t0.elapsed();
            let t0 = Instant::now();
            let mut ids = Vec::new();
            for (c1, c2) in &sel.pairs {
                for &id in grid.ids_in_cell_pair(*c1, *c2) {
                    if model.residual(&self.data[id as usize]) < self.eps {
                        ids.push(id);
                    }
                }
            }
            ids.sort_unstable();
            stats.verification_time += t0.elapsed();
            stats.evaluated_points += sel.candidate_count as u64;
            ids
        } else {
            let t0 = Instant::now();
            let ids = inlier_indices(model, self.data, self.eps);
            stats.verification_time += t0.elapsed();
            stats.evaluated_points += self.data.len() as u64;
            ids
        }
    }

    pub fn data(&self) -> &[Correspondence] {
        self.data
    }
}
