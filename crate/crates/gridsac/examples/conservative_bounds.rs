//! Conservative cell bounds per model family: the exact corner bound of a
//! homography, the Bezier bound of a radial mapping (dense samples never
//! escape), and the epipolar angle interval of a fundamental matrix.
//!
//! ```bash
//! cargo run --release --example conservative_bounds
//! ```

use gridsac::bounding::{
    bound_general, bound_homography_cell, epipolar_angle_interval, RadialMapBound,
};
use gridsac::geometry::{Aabb2, Point2};
use gridsac::models::{FundamentalMatrix, Homography, RadialHomography};
use nalgebra::Matrix3;

fn main() {
    let cell = Aabb2::new(Point2::new(0.0, 0.0), Point2::new(100.0, 100.0));
    let image = Aabb2::new(Point2::new(-1e4, -1e4), Point2::new(1e4, 1e4));

    let h = Homography::new(Matrix3::new(
        1.1, 0.05, 10.0, -0.04, 0.95, -5.0, 1e-4, 0.0, 1.0,
    ));
    let (hb, _) = bound_homography_cell(&h, &cell, 2.0, &image);
    println!(
        "homography cell bound: [{:.2}, {:.2}] x [{:.2}, {:.2}]",
        hb.min.x, hb.max.x, hb.min.y, hb.max.y
    );

    let cell_r = Aabb2::new(Point2::new(-0.5, -0.5), Point2::new(0.5, 0.5));
    let radial = RadialHomography::new(
        Matrix3::new(1.02, 0.05, 0.01, -0.04, 0.98, -0.02, 0.03, 0.01, 1.0),
        -0.2,
        -0.2,
    );
    let m_est = RadialMapBound::new(&radial);
    let (rb, fell_back) = bound_general(&|x| radial.map_point(x), &cell_r, 4, 0.01, &m_est, &image);
    println!(
        "radial cell bound:     [{:.4}, {:.4}] x [{:.4}, {:.4}] (fallback: {fell_back})",
        rb.min.x, rb.max.x, rb.min.y, rb.max.y
    );
    let mut escaped = 0;
    for i in 0..1000 {
        let t = i as f64 / 999.0;
        let corners = cell_r.corners();
        for e in 0..4 {
            let a = corners[e];
            let b = corners[(e + 1) % 4];
            let x = a + (b - a) * t;
            if let Some(y) = radial.map_point(x) {
                if !rb.contains(y) {
                    escaped += 1;
                }
            }
        }
    }
    println!("boundary samples escaping the radial bound: {escaped} of 4000");

    let f = FundamentalMatrix::new(Matrix3::new(0.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0, 1.0, 0.1));
    let iv = epipolar_angle_interval(&f, &cell);
    println!(
        "epipolar angle interval of the cell: [{:.4}, {:.4}] rad (wraps: {})",
        iv.lo, iv.hi, iv.wraps
    );
}
