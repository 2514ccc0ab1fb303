//! Benchmark sweeps over families, strategies, grid sizes and iteration
//! budgets, with CSV output.
//!
//! Each sweep point generates a synthetic instance, runs a discarded warm-up,
//! then one measured run on a monotonic clock. A traditional-strategy
//! baseline is always run for every (family, iterations, seed) so relative
//! times can be reported; failures become rows with the error column set and
//! the sweep continues.

use crate::engine::{ransac, RansacConfig, RansacResult};
use crate::error::{GridsacError, Result};
use crate::models::{Model, ModelFamily};
use crate::synth::{default_intrinsics, synth_generate, SynthConfig};
use crate::verify::{Scoring, Strategy};

/// Fixed CSV schema; the column order never changes.
pub const CSV_HEADER: &str = "family,strategy,cells,iters,n,inlier_ratio,evaluated_points,models_verified,early_rejections,t_r_ms,t_v_ms,total_ms,rel_total,inliers_found,seed,error";

/// One benchmark run (a row of the CSV).
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub family: String,
    pub strategy: String,
    /// Cells per axis; 0 for strategies without a grid.
    pub cells: usize,
    pub iters: usize,
    pub n: usize,
    pub inlier_ratio: f64,
    pub evaluated_points: u64,
    pub models_verified: u64,
    pub early_rejections: u64,
    pub t_r_ms: f64,
    pub t_v_ms: f64,
    pub total_ms: f64,
    /// Total time relative to the traditional baseline of the same
    /// (family, iters, seed); empty when the baseline failed.
    pub rel_total: Option<f64>,
    pub inliers_found: usize,
    pub seed: u64,
    pub error: Option<String>,
}

/// Cartesian sweep description.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub families: Vec<ModelFamily>,
    pub strategies: Vec<Strategy>,
    /// Cells per axis for grid strategies.
    pub cells_list: Vec<usize>,
    /// Fixed iteration budgets.
    pub iterations_list: Vec<usize>,
    pub seeds: Vec<u64>,
    pub n: usize,
    pub inlier_ratio: f64,
    pub noise_sigma: f64,
    /// Inlier threshold; interpreted in the family's residual units.
    pub eps: f64,
    /// Early-rejection factor (1.0 = provably exact).
    pub eps_r: f64,
    pub scoring: Scoring,
    pub lo_enabled: bool,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.families.is_empty()
            || self.strategies.is_empty()
            || self.iterations_list.is_empty()
            || self.seeds.is_empty()
        {
            return Err(GridsacError::Config(
                "sweep needs at least one family, strategy, iteration count and seed".into(),
            ));
        }
        if self.strategies.iter().any(|s| s.needs_grid()) && self.cells_list.is_empty() {
            return Err(GridsacError::Config(
                "grid strategies need at least one cell count".into(),
            ));
        }
        Ok(())
    }
}

/// Threshold in the units a family's residual is measured in: the sweep's
/// `eps` is taken as pixels and scaled down for the normalized radial domain.
pub fn family_eps(family: ModelFamily, eps: f64) -> f64 {
    match family {
        ModelFamily::RadialHomography => eps / 320.0,
        _ => eps,
    }
}

fn family_sigma(family: ModelFamily, sigma: f64) -> f64 {
    match family {
        ModelFamily::RadialHomography => sigma / 320.0,
        _ => sigma,
    }
}

fn run_config(
    sweep: &SweepConfig,
    family: ModelFamily,
    strategy: Strategy,
    cells: usize,
    iters: usize,
    seed: u64,
) -> Result<(RansacResult, usize)> {
    let synth_cfg = SynthConfig::new(
        family,
        sweep.n,
        sweep.inlier_ratio,
        family_sigma(family, sweep.noise_sigma),
        seed,
    );
    let data = synth_generate(&synth_cfg)?;
    let mut cfg = RansacConfig::new(family, family_eps(family, sweep.eps), seed);
    cfg.strategy = strategy;
    cfg.cells_per_axis = cells.max(1);
    cfg.fixed_iterations = Some(iters);
    cfg.eps_r = sweep.eps_r;
    cfg.scoring = sweep.scoring;
    cfg.lo_enabled = sweep.lo_enabled;
    cfg.lambdas = synth_cfg.lambdas;
    if family == ModelFamily::Essential {
        let k = default_intrinsics(&synth_cfg.extent);
        cfg.intrinsics = Some((k, k));
        if let Model::Essential { setup, .. } = &data.ground_truth {
            cfg.intrinsics = Some((setup.k1, setup.k2));
        }
    }
    // Warm-up (excluded from measurement), then the measured run.
    let _ = ransac(&data.corrs, &cfg)?;
    let result = ransac(&data.corrs, &cfg)?;
    Ok((result, data.corrs.len()))
}

fn row_from_result(
    sweep: &SweepConfig,
    family: ModelFamily,
    strategy: Strategy,
    cells: usize,
    iters: usize,
    seed: u64,
    outcome: Result<(RansacResult, usize)>,
) -> BenchRow {
    let mut row = BenchRow {
        family: family.name().into(),
        strategy: strategy.name().into(),
        cells: if strategy.needs_grid() { cells } else { 0 },
        iters,
        n: sweep.n,
        inlier_ratio: sweep.inlier_ratio,
        evaluated_points: 0,
        models_verified: 0,
        early_rejections: 0,
        t_r_ms: 0.0,
        t_v_ms: 0.0,
        total_ms: 0.0,
        rel_total: None,
        inliers_found: 0,
        seed,
        error: None,
    };
    match outcome {
        Ok((res, _)) => {
            row.evaluated_points = res.stats.evaluated_points;
            row.models_verified = res.stats.models_verified;
            row.early_rejections = res.stats.early_rejections;
            row.t_r_ms = res.stats.cell_rejection_time.as_secs_f64() * 1e3;
            row.t_v_ms = res.stats.verification_time.as_secs_f64() * 1e3;
            row.total_ms = res.wall_time.as_secs_f64() * 1e3;
            row.inliers_found = res.best_score.inlier_count;
        }
        Err(e) => row.error = Some(e.to_string().replace(',', ";")),
    }
    row
}

/// Run the whole sweep. Rows appear in sweep order (family, iterations,
/// seed, strategy, cells), with an appended traditional baseline per
/// (family, iterations, seed) when the strategy list lacks one.
pub fn run_bench(sweep: &SweepConfig) -> Result<Vec<BenchRow>> {
    sweep.validate()?;
    let mut rows = Vec::new();
    let has_traditional = sweep.strategies.contains(&Strategy::Traditional);
    for &family in &sweep.families {
        for &iters in &sweep.iterations_list {
            for &seed in &sweep.seeds {
                for &strategy in &sweep.strategies {
                    let cells_options: Vec<usize> = if strategy.needs_grid() {
                        sweep.cells_list.clone()
                    } else {
                        vec![0]
                    };
                    for cells in cells_options {
                        let outcome = run_config(sweep, family, strategy, cells, iters, seed);
                        rows.push(row_from_result(
                            sweep, family, strategy, cells, iters, seed, outcome,
                        ));
                    }
                }
                if !has_traditional {
                    let outcome = run_config(sweep, family, Strategy::Traditional, 0, iters, seed);
                    rows.push(row_from_result(
                        sweep,
                        family,
                        Strategy::Traditional,
                        0,
                        iters,
                        seed,
                        outcome,
                    ));
                }
            }
        }
    }
    fill_relative_times(&mut rows);
    Ok(rows)
}

/// Compute `rel_total` against the traditional baseline of the same
/// (family, iters, seed).
pub fn fill_relative_times(rows: &mut [BenchRow]) {
    let baselines: std::collections::HashMap<(String, usize, u64), f64> = rows
        .iter()
        .filter(|r| r.strategy == "trad" && r.error.is_none())
        .map(|r| ((r.family.clone(), r.iters, r.seed), r.total_ms))
        .collect();
    for row in rows.iter_mut() {
        if row.error.is_some() {
            continue;
        }
        if let Some(&base) = baselines.get(&(row.family.clone(), row.iters, row.seed)) {
            if base > 0.0 {
                row.rel_total = Some(row.total_ms / base);
            }
        }
    }
}

/// Serialize rows to CSV (UTF-8, `\n` line endings, fixed column order).
pub fn rows_to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{:.4},{},{},{},{:.3},{:.3},{:.3},{},{},{},{}\n",
            r.family,
            r.strategy,
            r.cells,
            r.iters,
            r.n,
            r.inlier_ratio,
            r.evaluated_points,
            r.models_verified,
            r.early_rejections,
            r.t_r_ms,
            r.t_v_ms,
            r.total_ms,
            r.rel_total.map(|v| format!("{v:.4}")).unwrap_or_default(),
            r.inliers_found,
            r.seed,
            r.error.as_deref().unwrap_or("")
        ));
    }
    out
}

/// Parse the CSV produced by [`rows_to_csv`].
pub fn parse_csv(text: &str) -> Result<Vec<BenchRow>> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| GridsacError::Parse {
        line: 1,
        msg: "empty CSV".into(),
    })?;
    if header != CSV_HEADER {
        return Err(GridsacError::Parse {
            line: 1,
            msg: "unexpected CSV header".into(),
        });
    }
    let mut rows = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line_no = idx + 2;
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 16 {
            return Err(GridsacError::Parse {
                line: line_no,
                msg: format!("expected 16 columns, got {}", f.len()),
            });
        }
        let parse_num = |s: &str, what: &str| -> Result<f64> {
            s.parse::<f64>().map_err(|_| GridsacError::Parse {
                line: line_no,
                msg: format!("bad {what}: {s}"),
            })
        };
        rows.push(BenchRow {
            family: f[0].into(),
            strategy: f[1].into(),
            cells: parse_num(f[2], "cells")? as usize,
            iters: parse_num(f[3], "iters")? as usize,
            n: parse_num(f[4], "n")? as usize,
            inlier_ratio: parse_num(f[5], "inlier_ratio")?,
            evaluated_points: parse_num(f[6], "evaluated_points")? as u64,
            models_verified: parse_num(f[7], "models_verified")? as u64,
            early_rejections: parse_num(f[8], "early_rejections")? as u64,
            t_r_ms: parse_num(f[9], "t_r_ms")?,
            t_v_ms: parse_num(f[10], "t_v_ms")?,
            total_ms: parse_num(f[11], "total_ms")?,
            rel_total: if f[12].is_empty() {
                None
            } else {
                Some(parse_num(f[12], "rel_total")?)
            },
            inliers_found: parse_num(f[13], "inliers_found")? as usize,
            seed: parse_num(f[14], "seed")? as u64,
            error: if f[15].is_empty() {
                None
            } else {
                Some(f[15].into())
            },
        });
    }
    Ok(rows)
}
