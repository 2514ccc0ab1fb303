//! A miniature benchmark sweep: run two strategies over two grid sizes,
//! write the CSV and render the relative-time and CDF charts as SVG.
//!
//! ```bash
//! cargo run --release --example bench_and_plot
//! ```

use gridsac::bench::{rows_to_csv, run_bench, SweepConfig};
use gridsac::models::ModelFamily;
use gridsac::svg::{emit_svg, PlotKind};
use gridsac::verify::{Scoring, Strategy};

fn main() {
    let sweep = SweepConfig {
        families: vec![ModelFamily::Homography],
        strategies: vec![Strategy::Partition, Strategy::Sprt, Strategy::PartitionSprt],
        cells_list: vec![2, 4],
        iterations_list: vec![100, 1000],
        seeds: vec![0, 1],
        n: 2000,
        inlier_ratio: 0.15,
        noise_sigma: 1.0,
        eps: 3.0,
        eps_r: 1.0,
        scoring: Scoring::Ransac,
        lo_enabled: false,
    };
    let rows = run_bench(&sweep).expect("sweep");
    let dir = std::env::temp_dir();
    let csv_path = dir.join("gridsac_bench.csv");
    std::fs::write(&csv_path, rows_to_csv(&rows)).expect("write csv");
    println!("wrote {} rows to {}", rows.len(), csv_path.display());

    for (kind, name) in [
        (PlotKind::RelativeTimeVsIters, "gridsac_relative_time.svg"),
        (PlotKind::CdfTimes, "gridsac_cdf.svg"),
        (PlotKind::PointsVerified, "gridsac_points.svg"),
    ] {
        let path = dir.join(name);
        std::fs::write(&path, emit_svg(&rows, kind)).expect("write svg");
        println!("wrote {}", path.display());
    }

    for row in rows.iter().filter(|r| r.iters == 1000 && r.seed == 0) {
        println!(
            "{:<10} cells {}: {:>9} evaluations, rel time {}",
            row.strategy,
            row.cells,
            row.evaluated_points,
            row.rel_total.map(|v| format!("{v:.2}")).unwrap_or_default()
        );
    }
}
