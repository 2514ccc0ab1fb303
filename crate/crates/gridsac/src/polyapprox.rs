//! Polynomial approximation and bounding machinery.
//!
//! Chebyshev nodes, Bezier curves in Bernstein basis (with the convex-hull
//! property used for conservative bounds), interpolation through sampled
//! points, Hermite-to-Bezier conversion from endpoint derivatives, and the
//! classical error bounds for Lagrange, Hermite and Taylor approximation.

use crate::error::{GridsacError, Result};
use crate::geometry::{Aabb2, Point2};
use nalgebra::DMatrix;

/// Largest Bezier degree solved by the direct basis-matrix inversion; the
/// Bernstein evaluation matrix at Chebyshev nodes stays well conditioned up
/// to moderate degrees only.
pub const MAX_INTERPOLATION_DEGREE: usize = 10;

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// The `k` Chebyshev nodes of `[a, b]`:
/// `x_l = (a+b)/2 + (b-a)/2 * cos((2l-1) pi / (2k))`, `l = 1..=k`.
/// Strictly decreasing, all interior to the interval.
pub fn chebyshev_nodes(a: f64, b: f64, k: usize) -> Result<Vec<f64>> {
    if a >= b {
        return Err(GridsacError::Data(format!("empty interval [{a}, {b}]")));
    }
    if k == 0 {
        return Err(GridsacError::Data("need at least one node".into()));
    }
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    Ok((1..=k)
        .map(|l| mid + half * ((2 * l - 1) as f64 * std::f64::consts::PI / (2 * k) as f64).cos())
        .collect())
}

/// Bernstein basis polynomial `B_i^n(t) = C(n, i) t^i (1-t)^(n-i)`.
pub fn bernstein_basis(n: usize, i: usize, t: f64) -> f64 {
    binomial(n, i) * t.powi(i as i32) * (1.0 - t).powi((n - i) as i32)
}

/// A planar Bezier curve given by its control points in Bernstein basis.
#[derive(Debug, Clone, PartialEq)]
pub struct BezierCurve {
    control_points: Vec<Point2>,
}

impl BezierCurve {
    /// Degree is `control_points.len() - 1`, at least 1.
    pub fn new(control_points: Vec<Point2>) -> Result<Self> {
        if control_points.len() < 2 {
            return Err(GridsacError::Data("curve needs degree >= 1".into()));
        }
        if control_points
            .iter()
            .any(|p| !p.x.is_finite() || !p.y.is_finite())
        {
            return Err(GridsacError::Data("non-finite control point".into()));
        }
        Ok(Self { control_points })
    }

    pub fn degree(&self) -> usize {
        self.control_points.len() - 1
    }

    pub fn control_points(&self) -> &[Point2] {
        &self.control_points
    }

    /// De Casteljau evaluation. Numerically stable for `t` in `[0, 1]` and
    /// still exact (as a polynomial) outside it.
    pub fn eval(&self, t: f64) -> Point2 {
        let mut pts = self.control_points.clone();
        let n = pts.len();
        for level in 1..n {
            for i in 0..n - level {
                pts[i] = pts[i] * (1.0 - t) + pts[i + 1] * t;
            }
        }
        pts[0]
    }

    /// Axis-aligned bounding box of the control points; contains the whole
    /// curve by the convex-hull property of the Bernstein basis.
    pub fn control_aabb(&self) -> Aabb2 {
        Aabb2::from_points(self.control_points.iter().copied())
    }

    /// Monomial expansion of each coordinate: coefficient `j` multiplies `t^j`.
    /// Used by tests as an independent route to values and derivatives.
    pub fn monomial_coefficients(&self) -> Vec<Point2> {
        let n = self.degree();
        let mut coeffs = vec![Point2::new(0.0, 0.0); n + 1];
        // b(t) = sum_i b_i C(n,i) t^i (1-t)^(n-i); expand (1-t)^(n-i).
        for (i, b) in self.control_points.iter().enumerate() {
            let cni = binomial(n, i);
            for m in 0..=(n - i) {
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                coeffs[i + m] += *b * cni * binomial(n - i, m) * sign;
            }
        }
        coeffs
    }
}

/// Bezier curve of degree `k - 1` interpolating `k` samples at the given
/// parameters, solved through the Bernstein evaluation matrix.
///
/// Parameters must be distinct, in `[0, 1]`, and `k <= 11` (degree <= 10);
/// an ill-conditioned system (condition estimate above 1e12) is an error.
pub fn interpolate_bezier(samples: &[(f64, Point2)]) -> Result<BezierCurve> {
    let k = samples.len();
    if k < 2 {
        return Err(GridsacError::Data("need at least two samples".into()));
    }
    if k > MAX_INTERPOLATION_DEGREE + 1 {
        return Err(GridsacError::Data(format!(
            "degree {} exceeds the direct-solve cap {}",
            k - 1,
            MAX_INTERPOLATION_DEGREE
        )));
    }
    for (t, _) in samples {
        if !(0.0..=1.0).contains(t) {
            return Err(GridsacError::Data(format!("parameter {t} outside [0, 1]")));
        }
    }
    for i in 0..k {
        for j in (i + 1)..k {
            if (samples[i].0 - samples[j].0).abs() < 1e-14 {
                return Err(GridsacError::Data("duplicate parameters".into()));
            }
        }
    }
    let n = k - 1;
    let basis = DMatrix::from_fn(k, k, |r, c| bernstein_basis(n, c, samples[r].0));
    let rhs = DMatrix::from_fn(k, 2, |r, c| {
        if c == 0 {
            samples[r].1.x
        } else {
            samples[r].1.y
        }
    });
    let svd = basis.svd(true, true);
    let s = &svd.singular_values;
    let smin = s[s.len() - 1];
    if smin <= 0.0 || s[0] / smin > 1e12 {
        return Err(GridsacError::Numerical(
            "interpolation system is ill-conditioned".into(),
        ));
    }
    let sol = svd
        .solve(&rhs, 0.0)
        .map_err(|e| GridsacError::Numerical(e.to_string()))?;
    BezierCurve::new(
        (0..k)
            .map(|i| Point2::new(sol[(i, 0)], sol[(i, 1)]))
            .collect(),
    )
}

/// Bezier control points from endpoint values and derivatives.
///
/// `derivs_start[k]` / `derivs_end[k]` hold the order `k + 1` derivatives of
/// the target curve at parameters 0 and 1. With `r` derivatives prescribed
/// per end, `n >= 2r + 1` must hold; unconstrained interior control points
/// are spaced linearly between the last constrained ones.
pub fn hermite_to_bezier(
    value_start: Point2,
    value_end: Point2,
    derivs_start: &[Point2],
    derivs_end: &[Point2],
    n: usize,
) -> Result<BezierCurve> {
    let r = derivs_start.len().max(derivs_end.len());
    if n < 2 * r + 1 {
        return Err(GridsacError::Data(format!(
            "degree {n} cannot satisfy {r} derivatives per endpoint (need n >= {})",
            2 * r + 1
        )));
    }
    // Endpoint rule b^(k)(0) = n!/(n-k)! Delta^k b_0 gives the forward
    // differences, and b_j = sum_i C(j, i) Delta^i b_0 rebuilds the points.
    let fill_end = |value: Point2, derivs: &[Point2]| -> Vec<Point2> {
        let mut deltas = vec![value];
        for (k, d) in derivs.iter().enumerate() {
            let order = k + 1;
            let scale = factorial(n - order) / factorial(n); // (n-k)!/n!
            deltas.push(*d * scale);
        }
        (0..deltas.len())
            .map(|j| {
                let mut b = Point2::new(0.0, 0.0);
                for (i, d) in deltas.iter().enumerate().take(j + 1) {
                    b += *d * binomial(j, i);
                }
                b
            })
            .collect()
    };
    let start = fill_end(value_start, derivs_start);
    // The reversed curve c(t) = b(1 - t) has c_i = b_{n-i} and
    // c^(k)(0) = (-1)^k b^(k)(1), so the same fill runs from the right.
    let reflected: Vec<Point2> = derivs_end
        .iter()
        .enumerate()
        .map(|(k, d)| if k % 2 == 0 { -*d } else { *d })
        .collect();
    let end = fill_end(value_end, &reflected);

    let mut controls = vec![Point2::new(0.0, 0.0); n + 1];
    for (j, b) in start.iter().enumerate() {
        controls[j] = *b;
    }
    for (j, b) in end.iter().enumerate() {
        controls[n - j] = *b;
    }
    let lo = start.len() - 1; // last constrained from the left
    let hi = n - (end.len() - 1); // first constrained from the right
    if hi > lo + 1 {
        let span = (hi - lo) as f64;
        for j in (lo + 1)..hi {
            let t = (j - lo) as f64 / span;
            controls[j] = controls[lo] * (1.0 - t) + controls[hi] * t;
        }
    }
    BezierCurve::new(controls)
}

/// Worst-case error of Lagrange interpolation at `k` Chebyshev nodes on
/// `[a, b]` for a function whose k-th derivative is bounded by `m`:
/// `((b-a)/2)^k * m / (2^(k-1) k!)`.
pub fn lagrange_error_bound(k: usize, a: f64, b: f64, m: f64) -> f64 {
    debug_assert!(k >= 1 && a < b && m >= 0.0);
    let half = 0.5 * (b - a);
    half.powi(k as i32) * m / (2f64.powi(k as i32 - 1) * factorial(k))
}

/// Worst-case error of the order-`k` two-point Hermite interpolant on
/// `[a, b]` for a function whose derivative of order `2k + 2` is bounded by
/// `m`: `m * ((b-a)/2)^(2k+2) / (2k+2)!`.
pub fn hermite_error_bound(k: usize, a: f64, b: f64, m: f64) -> f64 {
    debug_assert!(a < b && m >= 0.0);
    let half = 0.5 * (b - a);
    m * half.powi((2 * k + 2) as i32) / factorial(2 * k + 2)
}

/// Degree-`k` bivariate Taylor polynomial about `x0`, built from analytic
/// partial derivatives.
#[derive(Debug, Clone)]
pub struct TaylorPoly2 {
    x0: Point2,
    order: usize,
    /// `(a, b, d)` terms: `d = partial_x^a partial_y^b f(x0) / (a! b!)`.
    terms: Vec<(usize, usize, f64)>,
}

impl TaylorPoly2 {
    /// `derivs(a, b)` must return `partial_x^a partial_y^b f(x0)`.
    pub fn from_derivatives(
        x0: Point2,
        k: usize,
        derivs: impl Fn(usize, usize) -> f64,
    ) -> Result<Self> {
        if k > 4 {
            return Err(GridsacError::Data("Taylor order capped at 4".into()));
        }
        let mut terms = Vec::new();
        for total in 0..=k {
            for a in 0..=total {
                let b = total - a;
                terms.push((a, b, derivs(a, b) / (factorial(a) * factorial(b))));
            }
        }
        Ok(Self {
            x0,
            order: k,
            terms,
        })
    }

    pub fn eval(&self, x: Point2) -> f64 {
        let dx = x.x - self.x0.x;
        let dy = x.y - self.x0.y;
        self.terms
            .iter()
            .map(|&(a, b, d)| d * dx.powi(a as i32) * dy.powi(b as i32))
            .sum()
    }

    /// Lagrange remainder bound `m / (k+1)! * |h|_1^(k+1)` where `m` bounds
    /// all order-`k+1` partials on the segment.
    pub fn remainder_bound(&self, m: f64, h: Point2) -> f64 {
        let h1 = h.x.abs() + h.y.abs();
        m / factorial(self.order + 1) * h1.powi(self.order as i32 + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pt(x: f64, y: f64) -> Point2 {
        Point2::new(x, y)
    }

    #[test]
    fn chebyshev_node_values() {
        let n = chebyshev_nodes(-1.0, 1.0, 2).unwrap();
        assert!((n[0] - 0.70711).abs() < 1e-5);
        assert!((n[1] + 0.70711).abs() < 1e-5);
        let n = chebyshev_nodes(0.0, 1.0, 3).unwrap();
        for (got, want) in n.iter().zip([0.93301, 0.5, 0.06699]) {
            assert!((got - want).abs() < 1e-5, "{got} vs {want}");
        }
        let n = chebyshev_nodes(-1.0, 1.0, 1).unwrap();
        assert!(n[0].abs() < 1e-15);
        assert!(chebyshev_nodes(1.0, 1.0, 2).is_err());
    }

    #[test]
    fn chebyshev_nodes_strictly_decreasing_and_interior() {
        let n = chebyshev_nodes(-3.0, 7.0, 9).unwrap();
        for w in n.windows(2) {
            assert!(w[0] > w[1]);
        }
        assert!(n.iter().all(|&x| x > -3.0 && x < 7.0));
    }

    #[test]
    fn quadratic_midpoint() {
        let c = BezierCurve::new(vec![pt(0.0, 0.0), pt(1.0, 2.0), pt(2.0, 0.0)]).unwrap();
        let m = c.eval(0.5);
        assert!((m - pt(1.0, 1.0)).norm() < 1e-15);
        assert_eq!(c.eval(0.0), pt(0.0, 0.0));
        assert_eq!(c.eval(1.0), pt(2.0, 0.0));
    }

    #[test]
    fn de_casteljau_matches_direct_summation() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..100 {
            let ctrl: Vec<_> = (0..4)
                .map(|_| pt(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)))
                .collect();
            let c = BezierCurve::new(ctrl.clone()).unwrap();
            for _ in 0..100 {
                let t: f64 = rng.gen_range(0.0..1.0);
                let direct: Point2 = ctrl
                    .iter()
                    .enumerate()
                    .map(|(i, b)| *b * bernstein_basis(3, i, t))
                    .sum();
                assert!((c.eval(t) - direct).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn partition_of_unity() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for n in 1..=10 {
            for _ in 0..50 {
                let t: f64 = rng.gen_range(0.0..1.0);
                let sum: f64 = (0..=n).map(|i| bernstein_basis(n, i, t)).sum();
                assert!((sum - 1.0).abs() < 1e-12);
            }
        }
    }

    proptest::proptest! {
        /// The Bernstein basis sums to one everywhere on [0, 1].
        #[test]
        fn bernstein_partition_of_unity(n in 1usize..=10, t in 0.0f64..=1.0) {
            let sum: f64 = (0..=n).map(|i| bernstein_basis(n, i, t)).sum();
            proptest::prop_assert!((sum - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn interpolation_reproduces_line_and_endpoints() {
        // Two samples at the ends: control points equal the samples.
        let c = interpolate_bezier(&[(0.0, pt(0.0, 0.0)), (1.0, pt(1.0, 1.0))]).unwrap();
        assert!((c.control_points()[0] - pt(0.0, 0.0)).norm() < 1e-12);
        assert!((c.control_points()[1] - pt(1.0, 1.0)).norm() < 1e-12);

        // Samples on a line: curve reproduces the line, controls collinear.
        let ts = chebyshev_nodes(0.0, 1.0, 5).unwrap();
        let samples: Vec<_> = ts.iter().map(|&t| (t, pt(t, 2.0 * t - 1.0))).collect();
        let c = interpolate_bezier(&samples).unwrap();
        for i in 0..=40 {
            let t = i as f64 / 40.0;
            let got = c.eval(t);
            assert!((got.y - (2.0 * got.x - 1.0)).abs() < 1e-10);
        }
        for w in c.control_points().windows(3) {
            let u = w[1] - w[0];
            let v = w[2] - w[0];
            assert!((u.x * v.y - u.y * v.x).abs() < 1e-9);
        }
    }

    #[test]
    fn interpolation_reproduces_cubic_polynomial() {
        // Degree-3 polynomial sampled at 4 Chebyshev parameters.
        let f = |t: f64| pt(t, 1.0 - 2.0 * t + 3.0 * t * t - 0.5 * t * t * t);
        let ts = chebyshev_nodes(0.0, 1.0, 4).unwrap();
        let samples: Vec<_> = ts.iter().map(|&t| (t, f(t))).collect();
        let c = interpolate_bezier(&samples).unwrap();
        for i in 0..=50 {
            let t = i as f64 / 50.0;
            assert!((c.eval(t) - f(t)).norm() < 1e-9);
        }
    }

    #[test]
    fn interpolation_rejects_bad_input() {
        assert!(interpolate_bezier(&[(0.0, pt(0.0, 0.0)), (0.0, pt(1.0, 0.0))]).is_err());
        assert!(interpolate_bezier(&[(0.0, pt(0.0, 0.0)), (1.5, pt(1.0, 0.0))]).is_err());
        let too_many: Vec<_> = (0..13).map(|i| (i as f64 / 12.0, pt(0.0, 0.0))).collect();
        assert!(interpolate_bezier(&too_many).is_err());
    }

    #[test]
    fn hermite_first_derivative_controls() {
        // b1 = m0 / n + b0 and b_{n-1} = b_n - m1 / n for n = 3.
        let c = hermite_to_bezier(
            pt(0.0, 0.0),
            pt(1.0, 0.0),
            &[pt(3.0, 0.0)],
            &[pt(3.0, 0.0)],
            3,
        )
        .unwrap();
        assert!((c.control_points()[1] - pt(1.0, 0.0)).norm() < 1e-12);
        assert!((c.control_points()[2] - pt(0.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn hermite_needs_enough_degree() {
        assert!(hermite_to_bezier(
            pt(0.0, 0.0),
            pt(1.0, 0.0),
            &[pt(1.0, 0.0), pt(0.0, 0.0)],
            &[pt(1.0, 0.0)],
            4
        )
        .is_err());
    }

    /// Analytic derivatives of the curve via its monomial expansion;
    /// independent of the forward-difference construction.
    fn curve_derivative(c: &BezierCurve, t: f64, order: usize) -> Point2 {
        let coeffs = c.monomial_coefficients();
        let mut out = pt(0.0, 0.0);
        for (j, a) in coeffs.iter().enumerate() {
            if j < order {
                continue;
            }
            let mut fac = 1.0;
            for q in 0..order {
                fac *= (j - q) as f64;
            }
            out += *a * fac * t.powi((j - order) as i32);
        }
        out
    }

    #[test]
    fn hermite_reconstructs_quintic_endpoint_data() {
        // Quintic with easily differentiable coordinates.
        let gamma = |t: f64| pt(t + 0.5 * t.powi(5), 1.0 - t.powi(2) + 0.25 * t.powi(4));
        let d1 = |t: f64| pt(1.0 + 2.5 * t.powi(4), -2.0 * t + t.powi(3));
        let d2 = |t: f64| pt(10.0 * t.powi(3), -2.0 + 3.0 * t.powi(2));
        let c = hermite_to_bezier(
            gamma(0.0),
            gamma(1.0),
            &[d1(0.0), d2(0.0)],
            &[d1(1.0), d2(1.0)],
            5,
        )
        .unwrap();
        for (t, want0, want1, want2) in [
            (0.0, gamma(0.0), d1(0.0), d2(0.0)),
            (1.0, gamma(1.0), d1(1.0), d2(1.0)),
        ] {
            assert!((c.eval(t) - want0).norm() < 1e-9);
            assert!((curve_derivative(&c, t, 1) - want1).norm() < 1e-9);
            assert!((curve_derivative(&c, t, 2) - want2).norm() < 1e-9);
        }
    }

    #[test]
    fn endpoint_derivative_matches_finite_difference() {
        // First derivative at 0 equals n * (b1 - b0).
        let c = BezierCurve::new(vec![
            pt(0.0, 0.0),
            pt(1.0, 2.0),
            pt(3.0, -1.0),
            pt(4.0, 0.0),
        ])
        .unwrap();
        let n = c.degree() as f64;
        let analytic = (c.control_points()[1] - c.control_points()[0]) * n;
        let h = 1e-6;
        let fd = (c.eval(h) - c.eval(0.0)) / h;
        assert!((fd - analytic).norm() < 1e-4);
    }

    #[test]
    fn lagrange_bound_values() {
        assert!((lagrange_error_bound(2, 0.0, 1.0, 1.0) - 0.0625).abs() < 1e-15);
        // k = 1: ((b-a)/2)^1 / (2^0 * 1!) = 0.5
        assert!((lagrange_error_bound(1, 0.0, 1.0, 1.0) - 0.5).abs() < 1e-15);
        assert_eq!(lagrange_error_bound(3, 0.0, 2.0, 0.0), 0.0);
    }

    #[test]
    fn lagrange_bound_dominates_measured_error() {
        // f(t) = sin(4t) on [0, 1], k = 4 nodes, |f''''| <= 256.
        let f = |t: f64| (4.0 * t).sin();
        let k = 4;
        let ts = chebyshev_nodes(0.0, 1.0, k).unwrap();
        let samples: Vec<_> = ts.iter().map(|&t| (t, pt(t, f(t)))).collect();
        let c = interpolate_bezier(&samples).unwrap();
        let bound = lagrange_error_bound(k, 0.0, 1.0, 256.0);
        let mut max_err = 0.0f64;
        for i in 0..=2000 {
            let t = i as f64 / 2000.0;
            max_err = max_err.max((c.eval(t).y - f(t)).abs());
        }
        assert!(max_err <= bound, "measured {max_err} exceeds bound {bound}");
    }

    #[test]
    fn hermite_bound_values() {
        // Linear interpolation (k = 0): M (b-a)^2 / 8.
        assert!((hermite_error_bound(0, 0.0, 1.0, 1.0) - 0.125).abs() < 1e-15);
        assert_eq!(hermite_error_bound(3, -2.0, 5.0, 0.0), 0.0);
    }

    #[test]
    fn hermite_bound_brute_force_weight() {
        // max over [0,1] of |x (1-x)| / 2! equals the k = 0 bound with M = 1.
        let mut max_w = 0.0f64;
        for i in 0..=10_000 {
            let x = i as f64 / 10_000.0;
            max_w = max_w.max((x * (1.0 - x)).abs() / 2.0);
        }
        assert!((max_w - hermite_error_bound(0, 0.0, 1.0, 1.0)).abs() < 1e-6);
    }

    #[test]
    fn taylor_reproduces_polynomial() {
        // f(x, y) = x^2 + y^2 about the origin, order 2.
        let t = TaylorPoly2::from_derivatives(pt(0.0, 0.0), 2, |a, b| match (a, b) {
            (2, 0) | (0, 2) => 2.0,
            _ => 0.0,
        })
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..50 {
            let x = pt(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            assert!((t.eval(x) - (x.x * x.x + x.y * x.y)).abs() < 1e-12);
        }
        assert_eq!(t.remainder_bound(5.0, pt(0.0, 0.0)), 0.0);
    }

    #[test]
    fn taylor_remainder_bounds_exp() {
        // f(x, y) = e^x, order 1 about 0: T = 1 + x, M = e^0.1 on [0, 0.1].
        let t = TaylorPoly2::from_derivatives(pt(0.0, 0.0), 1, |a, b| match (a, b) {
            (0, 0) | (1, 0) => 1.0,
            _ => 0.0,
        })
        .unwrap();
        let h = pt(0.1, 0.0);
        let m = 0.1f64.exp();
        let bound = t.remainder_bound(m, h);
        assert!((bound - m * 0.005).abs() < 1e-15);
        let actual = (0.1f64.exp() - t.eval(h)).abs();
        assert!(actual <= bound);
    }
}
