//! The approximation toolbox behind the general cell bound: Chebyshev nodes,
//! Bezier interpolation with the Lagrange error bound, the convex-hull
//! property, and Hermite-to-Bezier conversion from endpoint derivatives.
//!
//! ```bash
//! cargo run --release --example polynomial_bounding
//! ```

use gridsac::geometry::Point2;
use gridsac::polyapprox::{
    chebyshev_nodes, hermite_to_bezier, interpolate_bezier, lagrange_error_bound,
};

fn main() {
    let k = 5;
    let nodes = chebyshev_nodes(0.0, 1.0, k).expect("nodes");
    println!("{k} Chebyshev nodes of [0, 1]: {nodes:.5?}");

    // Interpolate t -> (t, sin(3t)) and compare the measured error with the
    // a-priori bound from |d^5/dt^5 sin(3t)| <= 3^5.
    let f = |t: f64| Point2::new(t, (3.0 * t).sin());
    let samples: Vec<_> = nodes.iter().map(|&t| (t, f(t))).collect();
    let curve = interpolate_bezier(&samples).expect("interpolation");
    let bound = lagrange_error_bound(k, 0.0, 1.0, 3f64.powi(k as i32));
    let mut measured = 0.0f64;
    for i in 0..=10_000 {
        let t = i as f64 / 10_000.0;
        measured = measured.max((curve.eval(t).y - f(t).y).abs());
    }
    println!("interpolation error: measured {measured:.3e} <= bound {bound:.3e}");

    // Convex hull property: the whole curve stays inside the control box.
    let bb = curve.control_aabb();
    let inside = (0..=1000).all(|i| bb.contains(curve.eval(i as f64 / 1000.0)));
    println!("curve contained in its control-point box: {inside}");

    // Rebuild a cubic from endpoint values and first derivatives.
    let cubic = hermite_to_bezier(
        Point2::new(0.0, 0.0),
        Point2::new(1.0, 0.0),
        &[Point2::new(3.0, 0.0)],
        &[Point2::new(3.0, 0.0)],
        3,
    )
    .expect("conversion");
    println!(
        "Hermite-derived control points: {:?}",
        cubic.control_points()
    );
}
