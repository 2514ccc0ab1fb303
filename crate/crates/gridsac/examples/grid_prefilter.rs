//! The joint correspondence grid and the inlier prefilter: bucket matches by
//! 4-D cell pair, cull the cells a model cannot map inliers into, and read
//! off the inlier-count upper bound that drives early model rejection.
//!
//! ```bash
//! cargo run --release --example grid_prefilter
//! ```

use gridsac::grid::{GridSpec, JointGrid};
use gridsac::models::ModelFamily;
use gridsac::synth::{synth_generate, SynthConfig};
use gridsac::verify::{count_inliers, early_reject, prefilter, Scoring};

fn main() {
    let synth = SynthConfig::new(ModelFamily::Homography, 3000, 0.2, 1.0, 5);
    let data = synth_generate(&synth).expect("synthetic generation");

    let spec = GridSpec::from_points(&data.corrs, 4, 4).expect("grid spec");
    let grid = JointGrid::build(&data.corrs, spec).expect("grid build");
    println!(
        "grid: {} joint cells over {} correspondences",
        spec.joint_cells(),
        grid.len()
    );

    let eps = 3.0;
    let (candidates, upper_bound) = prefilter(&data.ground_truth, &data.corrs, &grid, eps, 4);
    let full = count_inliers(&data.ground_truth, &data.corrs, eps, Scoring::Ransac);
    let kept = count_inliers(&data.ground_truth, &candidates, eps, Scoring::Ransac);
    println!(
        "prefilter kept {} of {} points; upper bound {upper_bound} >= true inliers {}",
        candidates.len(),
        data.corrs.len(),
        full.inlier_count
    );
    assert_eq!(
        full.inlier_count, kept.inlier_count,
        "no inlier may be culled"
    );

    // The upper bound rejects hopeless models without any residual work.
    let best_so_far = full.inlier_count;
    println!(
        "a model bounded above by {} against best {best_so_far} would be rejected: {}",
        upper_bound / 3,
        early_reject(upper_bound / 3, best_so_far, 1.0)
    );
}
