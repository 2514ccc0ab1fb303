//! Essential-matrix estimation: solved by the 8-point algorithm on
//! intrinsics-normalized coordinates, verified (and culled) through the
//! equivalent fundamental matrix.
//!
//! ```bash
//! cargo run --release --example estimate_essential
//! ```

use gridsac::engine::{ransac, RansacConfig};
use gridsac::models::{Model, ModelFamily};
use gridsac::synth::{synth_generate, SynthConfig};
use gridsac::verify::Strategy;

fn main() {
    let synth = SynthConfig::new(ModelFamily::Essential, 2000, 0.2, 1.0, 11);
    let data = synth_generate(&synth).expect("synthetic generation");
    let (k1, k2) = match &data.ground_truth {
        Model::Essential { setup, .. } => (setup.k1, setup.k2),
        _ => unreachable!(),
    };

    let mut cfg = RansacConfig::new(ModelFamily::Essential, 2.0, 11);
    cfg.strategy = Strategy::Partition;
    cfg.cells_per_axis = 2;
    cfg.intrinsics = Some((k1, k2));

    let res = ransac(&data.corrs, &cfg).expect("estimation");
    println!("inliers:    {}", res.best_score.inlier_count);
    println!("iterations: {}", res.iterations_run);
    if let Model::Essential { setup, .. } = &res.best_model {
        println!(
            "singular-value gap of E: {:.2e}",
            setup.singular_value_gap()
        );
        println!("estimated E:\n{:.6}", setup.e);
    }
}
