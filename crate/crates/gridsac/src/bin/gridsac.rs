//! Command-line front end: synthetic data generation, estimation runs,
//! benchmark sweeps and SVG plots.
//!
//! Every command with a `--seed` flag is fully deterministic in its
//! non-timing outputs (timing lines are prefixed with `# time`).
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.

use clap::{Args, Parser, Subcommand};
use gridsac::bench::{parse_csv, rows_to_csv, run_bench, SweepConfig, CSV_HEADER};
use gridsac::engine::{default_eps_r, ransac, RansacConfig};
use gridsac::error::GridsacError;
use gridsac::geometry::{Aabb2, Point2};
use gridsac::matches_io::{parse_matches, write_matches};
use gridsac::models::{Model, ModelFamily};
use gridsac::svg::{emit_svg, PlotKind};
use gridsac::synth::{default_intrinsics, synth_generate, SynthConfig};
use gridsac::verify::{Scoring, Strategy};
use nalgebra::Matrix3;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "gridsac",
    version,
    about = "Robust two-view model estimation with grid-partitioned verification",
    after_help = concat!(
        "Bench CSV schema (fixed column order):\n  ",
        "family,strategy,cells,iters,n,inlier_ratio,evaluated_points,models_verified,",
        "early_rejections,t_r_ms,t_v_ms,total_ms,rel_total,inliers_found,seed,error\n\n",
        "Matches file format: `x1 y1 x2 y2 [score]` per line, `#` comments,\n",
        "optional `extent1 w h` / `extent2 w h` headers."
    )
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a synthetic matches file with known ground truth
    Synth(SynthArgs),
    /// Estimate a model from a matches file
    Estimate(EstimateArgs),
    /// Run a benchmark sweep and emit CSV
    Bench(BenchArgs),
    /// Plot a benchmark CSV as SVG
    Plot(PlotArgs),
}

fn parse_family(s: &str) -> Result<ModelFamily, String> {
    match s {
        "h" => Ok(ModelFamily::Homography),
        "f" => Ok(ModelFamily::Fundamental),
        "e" => Ok(ModelFamily::Essential),
        "rh" => Ok(ModelFamily::RadialHomography),
        _ => Err(format!("unknown model `{s}` (expected h, f, e or rh)")),
    }
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    match s {
        "trad" => Ok(Strategy::Traditional),
        "grid" => Ok(Strategy::Partition),
        "sprt" => Ok(Strategy::Sprt),
        "grid-sprt" => Ok(Strategy::PartitionSprt),
        _ => Err(format!(
            "unknown strategy `{s}` (expected trad, grid, sprt or grid-sprt)"
        )),
    }
}

#[derive(Args)]
struct SynthArgs {
    /// Model family: h, f, e or rh
    #[arg(long, value_parser = parse_family)]
    model: ModelFamily,
    /// Number of correspondences
    #[arg(long, default_value_t = 1000)]
    n: usize,
    /// Inlier ratio in (0, 1]
    #[arg(long, default_value_t = 0.3)]
    ratio: f64,
    /// Gaussian noise sigma (residual units)
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    /// RNG seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output matches file
    #[arg(long)]
    out: PathBuf,
    /// Generation extent `W H` (origin at 0,0); family default when absent
    #[arg(long, num_args = 2, value_names = ["W", "H"])]
    extent: Option<Vec<f64>>,
    /// Division-model coefficients for rh
    #[arg(long, default_value_t = -0.2, allow_hyphen_values = true)]
    lambda1: f64,
    #[arg(long, default_value_t = -0.2, allow_hyphen_values = true)]
    lambda2: f64,
}

#[derive(Args)]
struct EstimateArgs {
    /// Input matches file
    #[arg(long = "in")]
    input: PathBuf,
    /// Model family: h, f, e or rh
    #[arg(long, value_parser = parse_family)]
    model: ModelFamily,
    /// Verification strategy: trad, grid, sprt or grid-sprt
    #[arg(long, value_parser = parse_strategy, default_value = "grid")]
    strategy: Strategy,
    /// Grid cells per axis (both images)
    #[arg(long, default_value_t = 4)]
    cells: usize,
    /// Inlier threshold (pixels)
    #[arg(long, default_value_t = 2.0)]
    threshold: f64,
    /// Early-rejection factor; family default when absent (1.0 = exact)
    #[arg(long)]
    eps_r: Option<f64>,
    /// Fixed iteration count (overrides confidence termination)
    #[arg(long, conflicts_with = "confidence")]
    iters: Option<usize>,
    /// Termination confidence
    #[arg(long, default_value_t = 0.99)]
    confidence: f64,
    /// Iteration cap for confidence termination
    #[arg(long, default_value_t = 5000)]
    max_iters: usize,
    /// RNG seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Use the truncated-quadratic (MSAC) loss
    #[arg(long)]
    msac: bool,
    /// Disable local optimization
    #[arg(long)]
    no_lo: bool,
    /// Division-model coefficients (rh only)
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    lambda1: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    lambda2: f64,
    /// Intrinsics for e: focal length and principal point (same K in both views)
    #[arg(long)]
    focal: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    cx: f64,
    #[arg(long, default_value_t = 0.0)]
    cy: f64,
    /// Write inlier indices here (one per line)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated families (h,f,e,rh)
    #[arg(long, default_value = "h,f")]
    models: String,
    /// Comma-separated strategies (trad,grid,sprt,grid-sprt)
    #[arg(long, default_value = "trad,grid")]
    strategies: String,
    /// Comma-separated cells-per-axis list for grid strategies
    #[arg(long, default_value = "2,4")]
    cells: String,
    /// Comma-separated fixed iteration budgets
    #[arg(long, default_value = "100,1000")]
    iters: String,
    /// Number of seeds (0..seeds-1, offset by --seed-base)
    #[arg(long, default_value_t = 3)]
    seeds: u64,
    #[arg(long, default_value_t = 0)]
    seed_base: u64,
    /// Correspondences per instance
    #[arg(long, default_value_t = 2000)]
    n: usize,
    /// Inlier ratio
    #[arg(long, default_value_t = 0.1)]
    ratio: f64,
    /// Noise sigma (pixels)
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    /// Inlier threshold (pixels)
    #[arg(long, default_value_t = 3.0)]
    threshold: f64,
    /// Early-rejection factor
    #[arg(long, default_value_t = 1.0)]
    eps_r: f64,
    /// Use the MSAC loss
    #[arg(long)]
    msac: bool,
    /// Enable local optimization in benchmark runs
    #[arg(long)]
    lo: bool,
    /// Output CSV path (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PlotArgs {
    /// Input CSV (from `gridsac bench`)
    #[arg(long = "in")]
    input: PathBuf,
    /// Chart kind: relative_time_vs_iters, cdf_times or points_verified
    #[arg(long, value_parser = PlotKind::parse)]
    kind: PlotKind,
    /// Output SVG path
    #[arg(long)]
    out: PathBuf,
}

fn model_matrix(model: &Model) -> (&'static str, Matrix3<f64>) {
    match model {
        Model::Homography(h) => ("homography", *h.matrix()),
        Model::Fundamental(f) => ("fundamental", *f.matrix()),
        Model::Essential { setup, .. } => ("essential", setup.e),
        Model::Radial(r) => ("radial_homography", *r.matrix()),
    }
}

fn print_matrix(name: &str, m: &Matrix3<f64>) {
    print!("{name}");
    for r in 0..3 {
        for c in 0..3 {
            print!(" {:.12e}", m[(r, c)]);
        }
    }
    println!();
}

fn cmd_synth(args: SynthArgs) -> Result<(), GridsacError> {
    let mut cfg = SynthConfig::new(args.model, args.n, args.ratio, args.sigma, args.seed);
    if let Some(wh) = &args.extent {
        cfg.extent = Aabb2::new(Point2::new(0.0, 0.0), Point2::new(wh[0], wh[1]));
    }
    if args.model == ModelFamily::RadialHomography {
        cfg.lambdas = (args.lambda1, args.lambda2);
    }
    let data = synth_generate(&cfg)?;
    // Extent headers are origin-anchored; emit them only when the domain is.
    let extents = (cfg.extent.min == Point2::new(0.0, 0.0)).then_some((&cfg.extent, &cfg.extent));
    write_matches(&args.out, &data.corrs, extents)?;
    println!("family {}", args.model.name());
    println!("n {}", data.corrs.len());
    println!("ratio {}", args.ratio);
    println!("sigma {}", args.sigma);
    println!("seed {}", args.seed);
    let (kind, m) = model_matrix(&data.ground_truth);
    print_matrix(&format!("ground_truth_{kind}"), &m);
    if args.model == ModelFamily::Essential {
        let k = default_intrinsics(&cfg.extent);
        print_matrix("intrinsics", &k);
    }
    if args.model == ModelFamily::RadialHomography {
        println!("lambdas {} {}", cfg.lambdas.0, cfg.lambdas.1);
    }
    println!("wrote {}", args.out.display());
    Ok(())
}

fn cmd_estimate(args: EstimateArgs) -> Result<(), GridsacError> {
    let parsed = parse_matches(&args.input)?;
    let mut cfg = RansacConfig::new(args.model, args.threshold, args.seed);
    cfg.strategy = args.strategy;
    cfg.cells_per_axis = args.cells;
    cfg.eps_r = args.eps_r.unwrap_or_else(|| default_eps_r(args.model));
    cfg.fixed_iterations = args.iters;
    cfg.confidence = args.confidence;
    cfg.max_iterations = args.max_iters;
    cfg.scoring = if args.msac {
        Scoring::Msac
    } else {
        Scoring::Ransac
    };
    cfg.lo_enabled = !args.no_lo;
    cfg.lambdas = (args.lambda1, args.lambda2);
    if args.model == ModelFamily::Essential {
        let focal = args.focal.ok_or_else(|| {
            GridsacError::Config("essential estimation needs --focal (and --cx/--cy)".into())
        })?;
        let k = Matrix3::new(focal, 0.0, args.cx, 0.0, focal, args.cy, 0.0, 0.0, 1.0);
        cfg.intrinsics = Some((k, k));
    }
    let res = ransac(&parsed.corrs, &cfg)?;
    println!("family {}", args.model.name());
    println!("strategy {}", args.strategy.name());
    println!("n {}", parsed.corrs.len());
    println!("threshold {}", args.threshold);
    println!("seed {}", args.seed);
    println!("iterations {}", res.iterations_run);
    println!("inliers {}", res.best_score.inlier_count);
    println!("loss {:.12e}", res.best_score.loss);
    let (kind, m) = model_matrix(&res.best_model);
    print_matrix(&format!("model_{kind}"), &m);
    println!("evaluated_points {}", res.stats.evaluated_points);
    println!("culled_points {}", res.stats.culled_points);
    println!("models_verified {}", res.stats.models_verified);
    println!("early_rejections {}", res.stats.early_rejections);
    println!("# time_total_ms {:.3}", res.wall_time.as_secs_f64() * 1e3);
    println!(
        "# time_cell_rejection_ms {:.3}",
        res.stats.cell_rejection_time.as_secs_f64() * 1e3
    );
    println!(
        "# time_verification_ms {:.3}",
        res.stats.verification_time.as_secs_f64() * 1e3
    );
    if let Some(out) = &args.out {
        let mut text = String::new();
        for id in &res.inlier_ids {
            text.push_str(&format!("{id}\n"));
        }
        std::fs::write(out, text)?;
        println!("wrote {}", out.display());
    }
    Ok(())
}

fn parse_list<T, E: std::fmt::Display>(
    s: &str,
    what: &str,
    f: impl Fn(&str) -> Result<T, E>,
) -> Result<Vec<T>, GridsacError> {
    s.split(',')
        .filter(|p| !p.is_empty())
        .map(|p| f(p.trim()).map_err(|e| GridsacError::Config(format!("bad {what} `{p}`: {e}"))))
        .collect()
}

fn cmd_bench(args: BenchArgs) -> Result<(), GridsacError> {
    let sweep = SweepConfig {
        families: parse_list(&args.models, "model", parse_family)?,
        strategies: parse_list(&args.strategies, "strategy", parse_strategy)?,
        cells_list: parse_list(&args.cells, "cells", |s| s.parse::<usize>())?,
        iterations_list: parse_list(&args.iters, "iters", |s| s.parse::<usize>())?,
        seeds: (args.seed_base..args.seed_base + args.seeds).collect(),
        n: args.n,
        inlier_ratio: args.ratio,
        noise_sigma: args.sigma,
        eps: args.threshold,
        eps_r: args.eps_r,
        scoring: if args.msac {
            Scoring::Msac
        } else {
            Scoring::Ransac
        },
        lo_enabled: args.lo,
    };
    let rows = run_bench(&sweep)?;
    let csv = rows_to_csv(&rows);
    match &args.out {
        Some(path) => {
            std::fs::write(path, &csv)?;
            eprintln!("wrote {} rows to {}", rows.len(), path.display());
        }
        None => print!("{csv}"),
    }
    Ok(())
}

fn cmd_plot(args: PlotArgs) -> Result<(), GridsacError> {
    let text = std::fs::read_to_string(&args.input)?;
    if !text.starts_with(CSV_HEADER) {
        return Err(GridsacError::Data(format!(
            "{} is not a gridsac bench CSV",
            args.input.display()
        )));
    }
    let rows = parse_csv(&text)?;
    let svg = emit_svg(&rows, args.kind);
    std::fs::write(&args.out, svg)?;
    println!("wrote {}", args.out.display());
    Ok(())
}

fn exit_code_for(err: &GridsacError) -> u8 {
    match err {
        GridsacError::Config(_) => 1,
        GridsacError::Data(_) | GridsacError::Parse { .. } | GridsacError::Io(_) => 2,
        GridsacError::Numerical(_) | GridsacError::NoModel(_) => 3,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help/--version requests are successes.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.cmd {
        Cmd::Synth(a) => cmd_synth(a),
        Cmd::Estimate(a) => cmd_estimate(a),
        Cmd::Bench(a) => cmd_bench(a),
        Cmd::Plot(a) => cmd_plot(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
