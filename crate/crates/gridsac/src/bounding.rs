//! Conservative bounds of transformed grid cells and cell-pair culling.
//!
//! For each model family the image of an image-1 cell is enclosed by a
//! structure in image 2 that provably contains every possible mapping of a
//! cell point, inflated by the inlier threshold:
//!
//! - homographies map lines to lines, so the box of the four projected cell
//!   corners is exact (and conservative after inflation);
//! - epipolar geometry maps cells to pencils of lines; culling tests signed
//!   line evaluations at cell corners, which bound the whole pencil by
//!   convexity;
//! - general nonlinear mappings (radial homographies) get a Bezier bound:
//!   each cell edge is sampled at Chebyshev nodes, interpolated, and the
//!   control-point box is offset by the Lagrange interpolation error.
//!
//! When a bound cannot be computed (projection through infinity, vanishing
//! epipolar lines, derivative bound failure) the code falls back to the whole
//! image-2 extent, which is always conservative, and flags the fallback.

use crate::geometry::{Aabb2, Point2};
use crate::grid::{CellIndex, JointGrid};
use crate::models::{FundamentalMatrix, Homography, Model, RadialHomography};
use crate::polyapprox::{chebyshev_nodes, interpolate_bezier, lagrange_error_bound};
use nalgebra::Vector3;

/// Chebyshev nodes per cell edge when bounding nonlinear mappings.
pub const DEFAULT_BOUND_NODES: usize = 4;

const PROJECTIVE_EPS: f64 = 1e-12;

/// Interval of undirected line angles in `[0, pi)`, possibly wrapping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleInterval {
    pub lo: f64,
    pub hi: f64,
    pub wraps: bool,
}

impl AngleInterval {
    /// The whole range `[0, pi)`: the conservative fallback.
    pub fn whole() -> Self {
        Self {
            lo: 0.0,
            hi: std::f64::consts::PI,
            wraps: false,
        }
    }

    pub fn is_whole(&self) -> bool {
        self.width() >= std::f64::consts::PI - 1e-12
    }

    /// Arc length of the interval.
    pub fn width(&self) -> f64 {
        if self.wraps {
            self.hi + std::f64::consts::PI - self.lo
        } else {
            self.hi - self.lo
        }
    }

    /// Membership with wraparound, tolerant by `tol` radians.
    pub fn contains(&self, angle: f64, tol: f64) -> bool {
        let pi = std::f64::consts::PI;
        let a = angle.rem_euclid(pi);
        let rel = (a - self.lo).rem_euclid(pi);
        rel <= self.width() + tol || rel >= pi - tol
    }
}

/// Result of culling one model against the whole grid.
#[derive(Debug, Clone)]
pub struct CellSelection {
    /// Surviving cell pairs (image-1 cell, image-2 cell).
    pub pairs: Vec<(CellIndex, CellIndex)>,
    /// Sum of bucket sizes over the pairs: upper bound on the inlier count.
    pub candidate_count: usize,
    /// Image-1 cells bounded by the whole-extent fallback.
    pub fallback_cells: usize,
}

/// Axis-aligned bound of a homography-projected cell: the box of the four
/// projected corners inflated by `eps`. Exact because homographies map lines
/// to lines.
///
/// When a corner lies on (or the cell straddles) the line mapped to infinity,
/// returns `fallback` inflated by `eps` instead and reports it.
pub fn bound_homography_cell(
    h: &Homography,
    cell: &Aabb2,
    eps: f64,
    fallback: &Aabb2,
) -> (Aabb2, bool) {
    let corners = cell.corners();
    let ws = corners.map(|c| h.denominator(c));
    let all_positive = ws.iter().all(|&w| w > PROJECTIVE_EPS);
    let all_negative = ws.iter().all(|&w| w < -PROJECTIVE_EPS);
    if !(all_positive || all_negative) {
        return (fallback.inflated(eps), true);
    }
    let mut b = Aabb2::empty();
    for c in corners {
        // Denominator checked above; map_point cannot fail here.
        match h.map_point(c) {
            Some(p) => b.expand(p),
            None => return (fallback.inflated(eps), true),
        }
    }
    (b.inflated(eps), false)
}

/// Exact containment test through the inverse mapping: does `H^-1 q` fall in
/// `cell` inflated by `margin` (in image-1 units)?
///
/// `None` when the homography is not invertible or `q` maps through infinity;
/// callers skip the refinement in that case.
pub fn invertible_containment(
    h: &Homography,
    cell: &Aabb2,
    q: Point2,
    margin: f64,
) -> Option<bool> {
    let inv = h.inverse()?;
    let back = inv.map_point(q)?;
    Some(cell.inflated(margin).contains(back))
}

/// Undirected line angle `atan2(b, a)` of a line `ax + by + c = 0`,
/// normalized to `[0, pi)`.
pub fn line_angle(a: f64, b: f64) -> f64 {
    let mut angle = b.atan2(a);
    let pi = std::f64::consts::PI;
    if angle < 0.0 {
        angle += pi;
    }
    if angle >= pi {
        angle -= pi;
    }
    angle
}

/// Interval of epipolar-line angles spanned by a cell, from its four corner
/// lines.
///
/// The epipolar line coefficients are affine in the image-1 point, so the
/// lines of a cell form the convex hull of the corner lines; as long as that
/// hull does not contain the zero line (equivalently, the epipole is outside
/// the cell), the extreme angles are attained at corners. Otherwise every
/// direction occurs and the whole range is returned (conservative fallback).
pub fn epipolar_angle_interval(f: &FundamentalMatrix, cell: &Aabb2) -> AngleInterval {
    let pi = std::f64::consts::PI;
    let normals: Vec<Point2> = cell
        .corners()
        .iter()
        .map(|&c| {
            let l = f.epipolar_line_2(c);
            Point2::new(l.x, l.y)
        })
        .collect();
    if normals.iter().any(|n| n.norm() < PROJECTIVE_EPS) {
        return AngleInterval::whole();
    }
    // Directions mod 2 pi; the corner normals span the full hull directions.
    let mut dirs: Vec<f64> = normals.iter().map(|n| n.y.atan2(n.x)).collect();
    dirs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut largest_gap = 0.0;
    let mut gap_end = 0usize;
    for i in 0..dirs.len() {
        let next = (i + 1) % dirs.len();
        let mut gap = dirs[next] - dirs[i];
        if next == 0 {
            gap += 2.0 * pi;
        }
        if gap > largest_gap {
            largest_gap = gap;
            gap_end = next;
        }
    }
    if largest_gap <= pi + 1e-12 {
        // Origin inside the hull of normals: the cell contains the epipole.
        return AngleInterval::whole();
    }
    // The direction arc runs from the end of the largest gap over all
    // normals; its width is 2 pi minus the gap.
    let width = 2.0 * pi - largest_gap;
    let start = dirs[gap_end];
    let lo = start.rem_euclid(pi);
    let hi_raw = lo + width;
    if hi_raw > pi {
        AngleInterval {
            lo,
            hi: hi_raw - pi,
            wraps: true,
        }
    } else {
        AngleInterval {
            lo,
            hi: hi_raw,
            wraps: false,
        }
    }
}

/// Corner-line evaluations used by the epipolar culling test.
struct EpipolarTables {
    /// Normal magnitudes per image-1 vertex.
    norms: Vec<f64>,
    /// Evaluations `line(v1) . [q(v2); 1]` for all vertex pairs.
    evals: Vec<f64>,
    n1_verts: usize,
    n2_verts: usize,
}

impl EpipolarTables {
    fn build(f: &FundamentalMatrix, grid: &JointGrid) -> Self {
        let (xs1, ys1) = grid.axes_1();
        let (xs2, ys2) = grid.axes_2();
        let n1_verts = xs1.len();
        let n2_verts = xs2.len();
        let mut lines = Vec::with_capacity(n1_verts * n1_verts);
        let mut norms = Vec::with_capacity(n1_verts * n1_verts);
        for y in ys1 {
            for x in xs1 {
                let l = f.epipolar_line_2(Point2::new(*x, *y));
                norms.push((l.x * l.x + l.y * l.y).sqrt());
                lines.push(l);
            }
        }
        let mut evals = vec![0.0; lines.len() * n2_verts * n2_verts];
        for (i, l) in lines.iter().enumerate() {
            let base = i * n2_verts * n2_verts;
            for (jy, qy) in ys2.iter().enumerate() {
                for (jx, qx) in xs2.iter().enumerate() {
                    evals[base + jy * n2_verts + jx] = l.x * qx + l.y * qy + l.z;
                }
            }
        }
        Self {
            norms,
            evals,
            n1_verts,
            n2_verts,
        }
    }

    #[inline]
    fn vertex_1_id(&self, i: usize, j: usize) -> usize {
        j * self.n1_verts + i
    }

    #[inline]
    fn eval(&self, v1: usize, i2: usize, j2: usize) -> f64 {
        self.evals[v1 * self.n2_verts * self.n2_verts + j2 * self.n2_verts + i2]
    }
}

/// Epipolar cell-pair culling: a pair `(C1, C2)` survives unless `C2` lies
/// strictly more than `eps` away on one side of all epipolar lines spanned by
/// `C1`.
///
/// The test evaluates the four corner lines of `C1` at the four corners of
/// `C2`: a correspondence with line distance below `eps` forces mixed or
/// near-zero evaluations, so every true inlier's pair survives. Degenerate
/// corner lines fall back to selecting the whole image-1 cell row.
pub fn cull_cells_epipolar(f: &FundamentalMatrix, grid: &JointGrid, eps: f64) -> CellSelection {
    let tables = EpipolarTables::build(f, grid);
    let n2 = grid.spec().cells_per_axis_2;
    let all_cells_2: Vec<CellIndex> = (0..n2).flat_map(|j| (0..n2).map(move |i| (i, j))).collect();
    let mut pairs = Vec::new();
    let mut fallback_cells = 0usize;

    for c1 in grid.nonempty_cells_1() {
        let corner_ids = [
            tables.vertex_1_id(c1.0, c1.1),
            tables.vertex_1_id(c1.0 + 1, c1.1),
            tables.vertex_1_id(c1.0 + 1, c1.1 + 1),
            tables.vertex_1_id(c1.0, c1.1 + 1),
        ];
        let degenerate = corner_ids
            .iter()
            .any(|&v| tables.norms[v] < PROJECTIVE_EPS || !tables.norms[v].is_finite());
        if degenerate {
            fallback_cells += 1;
            for &c2 in &all_cells_2 {
                pairs.push((c1, c2));
            }
            continue;
        }
        for &c2 in &all_cells_2 {
            let (i2, j2) = c2;
            let corner2 = [(i2, j2), (i2 + 1, j2), (i2 + 1, j2 + 1), (i2, j2 + 1)];
            let mut all_above = true;
            let mut all_below = true;
            'outer: for &v1 in &corner_ids {
                let margin = eps * tables.norms[v1];
                for &(cx, cy) in &corner2 {
                    let e = tables.eval(v1, cx, cy);
                    if e <= margin {
                        all_above = false;
                    }
                    if e >= -margin {
                        all_below = false;
                    }
                    if !all_above && !all_below {
                        break 'outer;
                    }
                }
            }
            if !(all_above || all_below) {
                pairs.push((c1, c2));
            }
        }
    }
    let candidate_count = grid.upper_bound_count(&pairs);
    CellSelection {
        pairs,
        candidate_count,
        fallback_cells,
    }
}

/// Derivative-magnitude bound along a cell edge, used to make the Bezier
/// bound conservative: implementations return `M` with
/// `M >= sup_t || d^k/dt^k f(a + t (b - a)) ||_inf` over `t` in `[0, 1]`,
/// or `None` when no bound can be produced (triggers the extent fallback).
pub trait EdgeDerivativeBound {
    fn derivative_bound(&self, a: Point2, b: Point2, k: usize) -> Option<f64>;
}

/// Zero bound for affine mappings: interpolation is exact from two nodes on.
pub struct ZeroDerivativeBound;

impl EdgeDerivativeBound for ZeroDerivativeBound {
    fn derivative_bound(&self, _a: Point2, _b: Point2, k: usize) -> Option<f64> {
        Some(if k >= 2 { 0.0 } else { f64::INFINITY })
    }
}

/// Quadratic polynomial `c[0] + c[1] t + c[2] t^2` helpers on `[0, 1]`.
#[derive(Debug, Clone, Copy)]
struct Quadratic([f64; 3]);

impl Quadratic {
    fn eval(&self, t: f64) -> f64 {
        self.0[0] + t * (self.0[1] + t * self.0[2])
    }

    /// Interior critical point, if any.
    fn vertex(&self) -> Option<f64> {
        if self.0[2] == 0.0 {
            return None;
        }
        let t = -self.0[1] / (2.0 * self.0[2]);
        (0.0 < t && t < 1.0).then_some(t)
    }

    fn range(&self) -> (f64, f64) {
        let mut lo = self.eval(0.0).min(self.eval(1.0));
        let mut hi = self.eval(0.0).max(self.eval(1.0));
        if let Some(t) = self.vertex() {
            let v = self.eval(t);
            lo = lo.min(v);
            hi = hi.max(v);
        }
        (lo, hi)
    }

    fn abs_max(&self) -> f64 {
        let (lo, hi) = self.range();
        lo.abs().max(hi.abs())
    }

    /// Minimum of |q| over [0, 1]; zero if the sign changes.
    fn abs_min(&self) -> f64 {
        let (lo, hi) = self.range();
        if lo > 0.0 {
            lo
        } else if hi < 0.0 {
            -hi
        } else {
            0.0
        }
    }

    fn derivative_abs_max(&self, order: usize) -> f64 {
        match order {
            0 => self.abs_max(),
            1 => Quadratic([self.0[1], 2.0 * self.0[2], 0.0]).abs_max(),
            2 => 2.0 * self.0[2].abs(),
            _ => 0.0,
        }
    }
}

fn binom(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Bound for a rational coordinate function `N(t) / D(t)` with quadratic
/// numerator and denominator, via the Leibniz recursion
/// `R^(k) = (N^(k) - sum C(k,i) R^(i) D^(k-i)) / D` with the denominator
/// bounded below by its exact minimum magnitude on the edge.
fn rational_derivative_bound(num: Quadratic, den: Quadratic, k: usize) -> Option<f64> {
    let d_min = den.abs_min();
    if d_min <= 0.0 {
        return None;
    }
    let mut r_bounds = Vec::with_capacity(k + 1);
    r_bounds.push(num.derivative_abs_max(0) / d_min);
    for j in 1..=k {
        let mut acc = num.derivative_abs_max(j);
        for i in 0..j {
            acc += binom(j, i) * r_bounds[i] * den.derivative_abs_max(j - i);
        }
        r_bounds.push(acc / d_min);
    }
    Some(r_bounds[k])
}

/// Edge-derivative bound for the radial homography mapping: both coordinate
/// functions are quadratic-over-quadratic rationals along a straight edge.
pub struct RadialMapBound<'a> {
    model: &'a RadialHomography,
}

impl<'a> RadialMapBound<'a> {
    pub fn new(model: &'a RadialHomography) -> Self {
        Self { model }
    }

    /// Coefficients of `h_row . g(a + t d)` as a quadratic in `t`.
    fn row_quadratic(&self, row: usize, a: Point2, d: Point2) -> Quadratic {
        let h = self.model.matrix();
        let lambda = self.model.lambda1;
        let g0 = Vector3::new(a.x, a.y, 1.0 + lambda * (a.x * a.x + a.y * a.y));
        let g1 = Vector3::new(d.x, d.y, 2.0 * lambda * (a.x * d.x + a.y * d.y));
        let g2 = Vector3::new(0.0, 0.0, lambda * (d.x * d.x + d.y * d.y));
        let r = h.row(row).transpose();
        Quadratic([r.dot(&g0), r.dot(&g1), r.dot(&g2)])
    }
}

impl EdgeDerivativeBound for RadialMapBound<'_> {
    fn derivative_bound(&self, a: Point2, b: Point2, k: usize) -> Option<f64> {
        let d = b - a;
        let den = self.row_quadratic(2, a, d);
        let num_u = self.row_quadratic(0, a, d);
        let num_v = self.row_quadratic(1, a, d);
        let bu = rational_derivative_bound(num_u, den, k)?;
        let bv = rational_derivative_bound(num_v, den, k)?;
        Some(bu.max(bv))
    }
}

/// Edge-derivative bound for a plain homography (linear-over-linear rational);
/// used to cross-check the general bound against the exact corner bound.
pub struct HomographyMapBound<'a> {
    model: &'a Homography,
}

impl<'a> HomographyMapBound<'a> {
    pub fn new(model: &'a Homography) -> Self {
        Self { model }
    }

    fn row_linear(&self, row: usize, a: Point2, d: Point2) -> Quadratic {
        let r = self.model.matrix().row(row).transpose();
        let at = r.dot(&Vector3::new(a.x, a.y, 1.0));
        let dt = r.dot(&Vector3::new(d.x, d.y, 0.0));
        Quadratic([at, dt, 0.0])
    }
}

impl EdgeDerivativeBound for HomographyMapBound<'_> {
    fn derivative_bound(&self, a: Point2, b: Point2, k: usize) -> Option<f64> {
        let d = b - a;
        let den = self.row_linear(2, a, d);
        let bu = rational_derivative_bound(self.row_linear(0, a, d), den, k)?;
        let bv = rational_derivative_bound(self.row_linear(1, a, d), den, k)?;
        Some(bu.max(bv))
    }
}

/// General conservative cell bound (nonlinear mappings): per edge, sample the
/// mapping at `k` Chebyshev nodes, interpolate in Bernstein basis, take the
/// control-point box and offset it by `eps` plus the Lagrange interpolation
/// error computed from the derivative bound.
///
/// Falls back to `fallback` inflated by `eps` when the mapping or the
/// derivative bound fails on any edge.
pub fn bound_general(
    f: &dyn Fn(Point2) -> Option<Point2>,
    cell: &Aabb2,
    k: usize,
    eps: f64,
    m_estimator: &dyn EdgeDerivativeBound,
    fallback: &Aabb2,
) -> (Aabb2, bool) {
    debug_assert!((2..=11).contains(&k));
    let corners = cell.corners();
    let mut bound = Aabb2::empty();
    for e in 0..4 {
        let a = corners[e];
        let b = corners[(e + 1) % 4];
        match bound_edge(f, a, b, k, eps, m_estimator) {
            Some(edge_box) => bound = bound.union(&edge_box),
            None => return (fallback.inflated(eps), true),
        }
    }
    (bound, false)
}

/// Bound one straight edge of a cell; `None` requests the caller's fallback.
fn bound_edge(
    f: &dyn Fn(Point2) -> Option<Point2>,
    a: Point2,
    b: Point2,
    k: usize,
    eps: f64,
    m_estimator: &dyn EdgeDerivativeBound,
) -> Option<Aabb2> {
    let nodes = chebyshev_nodes(0.0, 1.0, k).ok()?;
    let mut samples = Vec::with_capacity(k);
    for &t in &nodes {
        let x = a + (b - a) * t;
        samples.push((t, f(x)?));
    }
    let curve = interpolate_bezier(&samples).ok()?;
    let m = m_estimator.derivative_bound(a, b, k)?;
    if !m.is_finite() {
        return None;
    }
    let interp_error = lagrange_error_bound(k, 0.0, 1.0, m);
    Some(curve.control_aabb().inflated(eps + interp_error))
}

/// Cull the grid's cell pairs against one model: dispatches to the corner
/// bound (homography), the epipolar line test (fundamental/essential) or the
/// Bezier bound (radial homography), and lists every `(C1, C2)` whose
/// image-2 cell intersects the bound.
pub fn cull_cells(model: &Model, grid: &JointGrid, eps: f64, bound_nodes: usize) -> CellSelection {
    match model {
        Model::Fundamental(f) => cull_cells_epipolar(f, grid, eps),
        Model::Essential { fundamental, .. } => cull_cells_epipolar(fundamental, grid, eps),
        Model::Homography(h) => {
            let fallback = grid.full_extent_2();
            // Shared lattice vertices are projected once per model; each
            // cell then reads its four precomputed corner images.
            let (xs, ys) = grid.axes_1();
            let nv = xs.len();
            let mut mapped = Vec::with_capacity(nv * nv);
            let mut ws = Vec::with_capacity(nv * nv);
            for y in ys {
                for x in xs {
                    let p = Point2::new(*x, *y);
                    ws.push(h.denominator(p));
                    mapped.push(h.map_point(p).unwrap_or_else(|| Point2::new(0.0, 0.0)));
                }
            }
            cull_mapped(grid, |c1| {
                let ids = [
                    c1.1 * nv + c1.0,
                    c1.1 * nv + c1.0 + 1,
                    (c1.1 + 1) * nv + c1.0 + 1,
                    (c1.1 + 1) * nv + c1.0,
                ];
                let all_positive = ids.iter().all(|&v| ws[v] > PROJECTIVE_EPS);
                let all_negative = ids.iter().all(|&v| ws[v] < -PROJECTIVE_EPS);
                if !(all_positive || all_negative) {
                    return (fallback.inflated(eps), true);
                }
                let mut b = Aabb2::empty();
                for &v in &ids {
                    b.expand(mapped[v]);
                }
                (b.inflated(eps), false)
            })
        }
        Model::Radial(r) => {
            let fallback = grid.full_extent_2();
            let m_est = RadialMapBound::new(r);
            let map = |x: Point2| r.map_point(x);
            // Shared edges are bounded once: results are cached per lattice
            // edge and reused by the adjacent cell.
            let (xs, ys) = grid.axes_1();
            let n = grid.spec().cells_per_axis_1;
            let mut h_edges: Vec<Option<Option<Aabb2>>> = vec![None; n * (n + 1)];
            let mut v_edges: Vec<Option<Option<Aabb2>>> = vec![None; (n + 1) * n];
            let mut edge_box = |horizontal: bool, i: usize, j: usize| -> Option<Aabb2> {
                let (slot, a, b) = if horizontal {
                    (
                        &mut h_edges[j * n + i],
                        Point2::new(xs[i], ys[j]),
                        Point2::new(xs[i + 1], ys[j]),
                    )
                } else {
                    (
                        &mut v_edges[j * (n + 1) + i],
                        Point2::new(xs[i], ys[j]),
                        Point2::new(xs[i], ys[j + 1]),
                    )
                };
                if slot.is_none() {
                    *slot = Some(bound_edge(&map, a, b, bound_nodes, eps, &m_est));
                }
                slot.unwrap()
            };
            cull_mapped(grid, |c1| {
                let boxes = [
                    edge_box(true, c1.0, c1.1),
                    edge_box(true, c1.0, c1.1 + 1),
                    edge_box(false, c1.0, c1.1),
                    edge_box(false, c1.0 + 1, c1.1),
                ];
                let mut bound = Aabb2::empty();
                for b in boxes {
                    match b {
                        Some(eb) => bound = bound.union(&eb),
                        None => return (fallback.inflated(eps), true),
                    }
                }
                (bound, false)
            })
        }
    }
}

/// Shared selection loop: bound every nonempty image-1 cell and list the
/// image-2 cells intersecting the bound.
fn cull_mapped(
    grid: &JointGrid,
    mut bound_of: impl FnMut(CellIndex) -> (Aabb2, bool),
) -> CellSelection {
    let mut pairs = Vec::new();
    let mut fallback_cells = 0usize;
    for c1 in grid.nonempty_cells_1() {
        let (bound, fell_back) = bound_of(c1);
        if fell_back {
            fallback_cells += 1;
        }
        if let Some((i_lo, i_hi, j_lo, j_hi)) = grid.cell_range_2(&bound) {
            for j in j_lo..=j_hi {
                for i in i_lo..=i_hi {
                    pairs.push((c1, (i, j)));
                }
            }
        }
    }
    let candidate_count = grid.upper_bound_count(&pairs);
    CellSelection {
        pairs,
        candidate_count,
        fallback_cells,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use crate::models::{corr, Correspondence};
    use nalgebra::Matrix3;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pt(x: f64, y: f64) -> Point2 {
        Point2::new(x, y)
    }

    fn cell(x0: f64, y0: f64, x1: f64, y1: f64) -> Aabb2 {
        Aabb2::new(pt(x0, y0), pt(x1, y1))
    }

    fn big() -> Aabb2 {
        cell(-1e6, -1e6, 1e6, 1e6)
    }

    #[test]
    fn homography_bound_identity_and_scale() {
        let id = Homography::new(Matrix3::identity());
        let (b, fb) = bound_homography_cell(&id, &cell(0.0, 0.0, 10.0, 10.0), 2.0, &big());
        assert!(!fb);
        assert_eq!(b, cell(-2.0, -2.0, 12.0, 12.0));

        let s = Homography::new(Matrix3::new(2.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 1.0));
        let (b, fb) = bound_homography_cell(&s, &cell(0.0, 0.0, 10.0, 10.0), 1.0, &big());
        assert!(!fb);
        assert_eq!(b, cell(-1.0, -1.0, 21.0, 21.0));
    }

    #[test]
    fn homography_bound_projective_corners() {
        let h = Homography::new(Matrix3::new(1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.01, 0.0, 1.0));
        let (b, fb) = bound_homography_cell(&h, &cell(0.0, 0.0, 10.0, 10.0), 0.0, &big());
        assert!(!fb);
        assert!((b.min - pt(0.0, 0.0)).norm() < 1e-4);
        assert!((b.max - pt(10.0 / 1.1, 10.0)).norm() < 1e-4);
    }

    #[test]
    fn homography_bound_falls_back_across_infinity() {
        // w = x - 5 changes sign inside [0, 10]^2.
        let h = Homography::new(Matrix3::new(1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0, -5.0));
        let (b, fb) = bound_homography_cell(&h, &cell(0.0, 0.0, 10.0, 10.0), 1.0, &big());
        assert!(fb);
        assert_eq!(b, big().inflated(1.0));
    }

    #[test]
    fn containment_through_inverse() {
        let id = Homography::new(Matrix3::identity());
        let c = cell(0.0, 0.0, 10.0, 10.0);
        assert_eq!(
            invertible_containment(&id, &c, pt(5.0, 5.0), 0.0),
            Some(true)
        );
        assert_eq!(
            invertible_containment(&id, &c, pt(11.0, 5.0), 0.0),
            Some(false)
        );
    }

    #[test]
    fn containment_agrees_with_forward_sampling() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let h = Homography::new(Matrix3::new(
            0.9, 0.15, 4.0, -0.1, 1.1, -2.0, 2e-4, -1e-4, 1.0,
        ));
        let c = cell(10.0, 10.0, 60.0, 50.0);
        for _ in 0..500 {
            // Forward-mapped interior points must be contained...
            let x = pt(rng.gen_range(10.0..60.0), rng.gen_range(10.0..50.0));
            let q = h.map_point(x).unwrap();
            assert_eq!(invertible_containment(&h, &c, q, 0.0), Some(true));
            // ...and points forward-mapped from well outside must not be.
            let x_out = pt(rng.gen_range(80.0..200.0), rng.gen_range(80.0..200.0));
            let q_out = h.map_point(x_out).unwrap();
            assert_eq!(invertible_containment(&h, &c, q_out, 0.0), Some(false));
        }
    }

    fn rectified_f() -> FundamentalMatrix {
        FundamentalMatrix::new(Matrix3::new(0.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0, 1.0, 0.0))
    }

    #[test]
    fn rectified_angles_are_degenerate_interval() {
        let f = rectified_f();
        let iv = epipolar_angle_interval(&f, &cell(0.0, 0.0, 10.0, 10.0));
        assert!(!iv.is_whole());
        assert!(iv.width() < 1e-12);
        assert!((iv.lo - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        // Scaling F by a negative constant changes nothing.
        let f_neg = FundamentalMatrix::new(f.matrix() * -3.0);
        let iv2 = epipolar_angle_interval(&f_neg, &cell(0.0, 0.0, 10.0, 10.0));
        assert!((iv2.lo - iv.lo).abs() < 1e-12 && iv2.width() < 1e-12);
    }

    #[test]
    fn interval_contains_all_interior_angles() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut checked = 0;
        while checked < 50 {
            let f = FundamentalMatrix::new(Matrix3::from_fn(|_, _| rng.gen_range(-1.0..1.0)));
            let c = cell(
                rng.gen_range(-50.0..0.0),
                rng.gen_range(-50.0..0.0),
                rng.gen_range(1.0..50.0),
                rng.gen_range(1.0..50.0),
            );
            let iv = epipolar_angle_interval(&f, &c);
            if iv.is_whole() {
                continue;
            }
            checked += 1;
            for _ in 0..1000 {
                let x = pt(
                    rng.gen_range(c.min.x..c.max.x),
                    rng.gen_range(c.min.y..c.max.y),
                );
                let l = f.epipolar_line_2(x);
                let angle = line_angle(l.x, l.y);
                assert!(
                    iv.contains(angle, 1e-9),
                    "angle {angle} outside [{}, {}] wraps={}",
                    iv.lo,
                    iv.hi,
                    iv.wraps
                );
            }
        }
    }

    #[test]
    fn epipole_inside_cell_gives_whole_range() {
        // F with epipole e1 = (0, 0): F * (0,0,1) = 0 -> third column zero.
        let f = FundamentalMatrix::new(Matrix3::new(0.3, -0.2, 0.0, 0.5, 0.9, 0.0, -0.4, 0.1, 0.0));
        let iv = epipolar_angle_interval(&f, &cell(-1.0, -1.0, 1.0, 1.0));
        assert!(iv.is_whole());
    }

    fn grid_from(corrs: &[Correspondence], n1: usize, n2: usize, span: f64) -> JointGrid {
        let e = cell(0.0, 0.0, span, span);
        let spec = GridSpec::new(n1, n2, e, e).unwrap();
        JointGrid::build(corrs, spec).unwrap()
    }

    #[test]
    fn rectified_band_selects_expected_rows() {
        // One correspondence per (C1 row 0, C2 row j) combination.
        let mut corrs = Vec::new();
        for j in 0..10 {
            corrs.push(corr(5.0, 5.0, 5.0, 10.0 * j as f64 + 5.0));
        }
        let grid = grid_from(&corrs, 10, 10, 100.0);
        let sel = cull_cells_epipolar(&rectified_f(), &grid, 1.0);
        // C1 = (0, 0) spans v in [0, 10]; rows overlapping [-1, 11] survive.
        let rows: std::collections::BTreeSet<usize> = sel
            .pairs
            .iter()
            .filter(|(c1, _)| *c1 == (0, 0))
            .map(|(_, c2)| c2.1)
            .collect();
        assert_eq!(rows.into_iter().collect::<Vec<_>>(), vec![0, 1]);
    }

    #[test]
    fn infinite_threshold_selects_everything() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let corrs: Vec<_> = (0..100)
            .map(|_| {
                corr(
                    rng.gen_range(0.0..100.0),
                    rng.gen_range(0.0..100.0),
                    rng.gen_range(0.0..100.0),
                    rng.gen_range(0.0..100.0),
                )
            })
            .collect();
        let grid = grid_from(&corrs, 3, 3, 100.0);
        let f = FundamentalMatrix::new(Matrix3::from_fn(|_, _| rng.gen_range(-1.0..1.0)));
        let sel = cull_cells_epipolar(&f, &grid, 1e12);
        assert_eq!(sel.candidate_count, 100);
    }

    #[test]
    fn epipolar_culling_never_drops_inliers() {
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        for _ in 0..100 {
            let f = FundamentalMatrix::new(Matrix3::from_fn(|_, _| rng.gen_range(-1.0..1.0)));
            let corrs: Vec<_> = (0..200)
                .map(|_| {
                    corr(
                        rng.gen_range(0.0..100.0),
                        rng.gen_range(0.0..100.0),
                        rng.gen_range(0.0..100.0),
                        rng.gen_range(0.0..100.0),
                    )
                })
                .collect();
            let grid = grid_from(&corrs, 4, 4, 100.0);
            let eps = rng.gen_range(0.5..20.0);
            let sel = cull_cells_epipolar(&f, &grid, eps);
            let kept: std::collections::HashSet<_> = sel.pairs.iter().copied().collect();
            for c in &corrs {
                if f.residual(c) < eps {
                    let c1 = crate::grid::cell_of(c.p, &grid.spec().extent_1, 4).unwrap();
                    let c2 = crate::grid::cell_of(c.q, &grid.spec().extent_2, 4).unwrap();
                    assert!(kept.contains(&(c1, c2)), "inlier cell pair culled");
                }
            }
        }
    }

    #[test]
    fn general_bound_identity_with_zero_derivatives() {
        let c = cell(3.0, 4.0, 13.0, 9.0);
        let (b, fb) = bound_general(&|x| Some(x), &c, 2, 1.0, &ZeroDerivativeBound, &big());
        assert!(!fb);
        assert!((b.min - pt(2.0, 3.0)).norm() < 1e-9);
        assert!((b.max - pt(14.0, 10.0)).norm() < 1e-9);
    }

    #[test]
    fn general_bound_contains_exact_homography_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(45);
        for _ in 0..50 {
            let h = Homography::new(Matrix3::new(
                rng.gen_range(0.8..1.2),
                rng.gen_range(-0.2..0.2),
                rng.gen_range(-10.0..10.0),
                rng.gen_range(-0.2..0.2),
                rng.gen_range(0.8..1.2),
                rng.gen_range(-10.0..10.0),
                rng.gen_range(-1e-4..1e-4),
                rng.gen_range(-1e-4..1e-4),
                1.0,
            ));
            let c = cell(0.0, 0.0, 40.0, 30.0);
            let eps = 1.0;
            let (exact, fb1) = bound_homography_cell(&h, &c, eps, &big());
            let m_est = HomographyMapBound::new(&h);
            let (general, fb2) = bound_general(&|x| h.map_point(x), &c, 2, eps, &m_est, &big());
            assert!(!fb1 && !fb2);
            // The general bound must contain the exact one; the excess is the
            // interpolation-error inflation (delta - eps).
            assert!(general.min.x <= exact.min.x + 1e-9);
            assert!(general.min.y <= exact.min.y + 1e-9);
            assert!(general.max.x >= exact.max.x - 1e-9);
            assert!(general.max.y >= exact.max.y - 1e-9);
        }
    }

    #[test]
    fn general_bound_contains_radial_boundary() {
        let mut rng = ChaCha8Rng::seed_from_u64(46);
        let m = Matrix3::new(1.02, 0.05, 0.01, -0.04, 0.98, -0.02, 0.03, 0.01, 1.0);
        let model = RadialHomography::new(m, -0.2, -0.2);
        let c = cell(-0.5, -0.4, 0.3, 0.5);
        let m_est = RadialMapBound::new(&model);
        let (b, fb) = bound_general(&|x| model.map_point(x), &c, 4, 0.0, &m_est, &big());
        assert!(!fb);
        let corners = c.corners();
        for _ in 0..1000 {
            let e = rng.gen_range(0..4);
            let t: f64 = rng.gen_range(0.0..1.0);
            let a = corners[e];
            let d = corners[(e + 1) % 4] - a;
            let x = a + d * t;
            let y = model.map_point(x).unwrap();
            assert!(b.contains(y), "boundary image {y:?} outside bound");
        }
    }

    #[test]
    fn cull_identity_homography_keeps_aligned_cells() {
        let mut corrs = Vec::new();
        for i in 0..2 {
            for j in 0..2 {
                corrs.push(corr(
                    25.0 + 50.0 * i as f64,
                    25.0 + 50.0 * j as f64,
                    25.0 + 50.0 * i as f64,
                    25.0 + 50.0 * j as f64,
                ));
            }
        }
        let grid = grid_from(&corrs, 2, 2, 100.0);
        let h = Model::Homography(Homography::new(Matrix3::identity()));
        let sel = cull_cells(&h, &grid, 0.5, DEFAULT_BOUND_NODES);
        for (c1, c2) in &sel.pairs {
            // Aligned cell always selected; neighbors only within the
            // half-pixel inflation of the shared boundary.
            if c1 != c2 {
                let b1 = grid.cell_extent_1(*c1).inflated(0.5);
                assert!(b1.intersects(&grid.cell_extent_2(*c2)));
            }
        }
        for c1 in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            assert!(sel.pairs.contains(&(c1, c1)));
        }
        assert_eq!(sel.fallback_cells, 0);
    }

    #[test]
    fn selection_monotone_in_threshold() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        let corrs: Vec<_> = (0..300)
            .map(|_| {
                corr(
                    rng.gen_range(0.0..100.0),
                    rng.gen_range(0.0..100.0),
                    rng.gen_range(0.0..100.0),
                    rng.gen_range(0.0..100.0),
                )
            })
            .collect();
        let grid = grid_from(&corrs, 4, 4, 100.0);
        let h = Model::Homography(Homography::new(Matrix3::new(
            1.1, 0.1, 3.0, -0.1, 0.9, -2.0, 1e-4, 0.0, 1.0,
        )));
        let small = cull_cells(&h, &grid, 1.0, DEFAULT_BOUND_NODES);
        let large = cull_cells(&h, &grid, 10.0, DEFAULT_BOUND_NODES);
        let large_set: std::collections::HashSet<_> = large.pairs.iter().copied().collect();
        for p in &small.pairs {
            assert!(large_set.contains(p));
        }
        assert!(small.candidate_count <= large.candidate_count);
    }
}
