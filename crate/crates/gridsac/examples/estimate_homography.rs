//! Estimate a homography on synthetic data with the grid-partitioned
//! verifier and compare the recovered consensus with the ground truth.
//!
//! ```bash
//! cargo run --release --example estimate_homography
//! ```

use gridsac::engine::{ransac, RansacConfig};
use gridsac::models::ModelFamily;
use gridsac::synth::{synth_generate, SynthConfig};
use gridsac::verify::Strategy;

fn main() {
    let synth = SynthConfig::new(ModelFamily::Homography, 2000, 0.25, 1.0, 42);
    let data = synth_generate(&synth).expect("synthetic generation");
    let true_inliers = data.is_inlier.iter().filter(|&&b| b).count();

    let mut cfg = RansacConfig::new(ModelFamily::Homography, 3.0, 42);
    cfg.strategy = Strategy::Partition;
    cfg.cells_per_axis = 4;
    cfg.eps_r = 1.0;

    let res = ransac(&data.corrs, &cfg).expect("estimation");
    println!("generated inliers: {true_inliers}");
    println!("found inliers:     {}", res.best_score.inlier_count);
    println!("iterations:        {}", res.iterations_run);
    println!(
        "evaluated {} of {} possible residuals ({} culled)",
        res.stats.evaluated_points,
        res.stats.models_verified * data.corrs.len() as u64,
        res.stats.culled_points
    );
    println!("early rejections:  {}", res.stats.early_rejections);
    if let gridsac::models::Model::Homography(h) = &res.best_model {
        println!("estimated H (unit Frobenius norm):\n{:.6}", h.matrix());
    }
}
