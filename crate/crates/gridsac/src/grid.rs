//! Regular-grid partitioning of the joint correspondence space.
//!
//! Both images are divided into `n x n` axis-aligned cells; a correspondence
//! `(p, q)` lives in the joint 4-D cell addressed by the pair
//! (cell of `p`, cell of `q`). Buckets store correspondence indices so a
//! verifier can fetch all candidates of a selected cell pair in O(1).

use crate::error::{GridsacError, Result};
use crate::geometry::{Aabb2, Point2};
use crate::models::Correspondence;

/// A 2-D cell index `(i, j)`: `i` along x, `j` along y.
pub type CellIndex = (usize, usize);

/// Geometry of the two grids: cell counts per axis and the covered extents.
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub cells_per_axis_1: usize,
    pub cells_per_axis_2: usize,
    pub extent_1: Aabb2,
    pub extent_2: Aabb2,
}

impl GridSpec {
    pub fn new(
        cells_per_axis_1: usize,
        cells_per_axis_2: usize,
        extent_1: Aabb2,
        extent_2: Aabb2,
    ) -> Result<Self> {
        if cells_per_axis_1 == 0 || cells_per_axis_2 == 0 {
            return Err(GridsacError::Config("cells per axis must be >= 1".into()));
        }
        for (name, e) in [("extent_1", &extent_1), ("extent_2", &extent_2)] {
            if e.is_empty() || e.width() <= 0.0 || e.height() <= 0.0 {
                return Err(GridsacError::Config(format!("degenerate {name}")));
            }
        }
        Ok(Self {
            cells_per_axis_1,
            cells_per_axis_2,
            extent_1,
            extent_2,
        })
    }

    /// Spec with both extents set to the tight bounding boxes of the points,
    /// minimally padded when the data is degenerate along an axis.
    pub fn from_points(
        corrs: &[Correspondence],
        cells_per_axis_1: usize,
        cells_per_axis_2: usize,
    ) -> Result<Self> {
        let pad = |mut b: Aabb2| {
            if b.is_empty() {
                b = Aabb2::new(Point2::new(0.0, 0.0), Point2::new(1.0, 1.0));
            }
            let eps = 1e-9;
            if b.width() <= 0.0 {
                b.min.x -= 0.5 + eps;
                b.max.x += 0.5 + eps;
            }
            if b.height() <= 0.0 {
                b.min.y -= 0.5 + eps;
                b.max.y += 0.5 + eps;
            }
            b
        };
        let e1 = pad(Aabb2::from_points(corrs.iter().map(|c| c.p)));
        let e2 = pad(Aabb2::from_points(corrs.iter().map(|c| c.q)));
        Self::new(cells_per_axis_1, cells_per_axis_2, e1, e2)
    }

    /// Total number of joint 4-D cells, e.g. 2^4 = 16 for 2 cells per axis
    /// in both images.
    pub fn joint_cells(&self) -> usize {
        let c1 = self.cells_per_axis_1 * self.cells_per_axis_1;
        let c2 = self.cells_per_axis_2 * self.cells_per_axis_2;
        c1 * c2
    }
}

/// Cell index of a point: `floor((x - min) / width * n)` per axis, clamped so
/// points on the max boundary (and anything outside) land in the last cell.
pub fn cell_of(point: Point2, extent: &Aabb2, cells_per_axis: usize) -> Result<CellIndex> {
    if !point.x.is_finite() || !point.y.is_finite() {
        return Err(GridsacError::Data("non-finite coordinate".into()));
    }
    Ok(cell_of_clamped(point, extent, cells_per_axis))
}

#[inline]
pub(crate) fn cell_of_clamped(point: Point2, extent: &Aabb2, n: usize) -> CellIndex {
    let axis = |v: f64, lo: f64, size: f64| -> usize {
        let idx = ((v - lo) / size * n as f64).floor();
        if idx < 0.0 {
            0
        } else if idx as usize >= n {
            n - 1
        } else {
            idx as usize
        }
    };
    (
        axis(point.x, extent.min.x, extent.width()),
        axis(point.y, extent.min.y, extent.height()),
    )
}

/// The joint grid: correspondence indices bucketed per 4-D cell pair.
#[derive(Debug, Clone)]
pub struct JointGrid {
    spec: GridSpec,
    /// Dense buckets indexed by `flat1 * n2^2 + flat2`.
    buckets: Vec<Vec<u32>>,
    /// Number of correspondences whose `p` falls in each image-1 cell.
    per_cell_counts_1: Vec<u32>,
    /// Tight bounding box of the bucketed image-2 points (for fallbacks).
    data_bbox_2: Aabb2,
    /// Effective lattice coordinates (outermost lines pushed to the data
    /// bounding boxes, so clamped points stay inside their cell geometry).
    axes_1: (Vec<f64>, Vec<f64>),
    axes_2: (Vec<f64>, Vec<f64>),
    len: usize,
}

impl JointGrid {
    /// Bucket all correspondences. O(N); insertion order within buckets is
    /// input order, so rebuilding on the same input is bit-identical.
    pub fn build(corrs: &[Correspondence], spec: GridSpec) -> Result<Self> {
        let spec = GridSpec::new(
            spec.cells_per_axis_1,
            spec.cells_per_axis_2,
            spec.extent_1,
            spec.extent_2,
        )?;
        let n1 = spec.cells_per_axis_1;
        let n2 = spec.cells_per_axis_2;
        let mut buckets = vec![Vec::new(); n1 * n1 * n2 * n2];
        let mut per_cell_counts_1 = vec![0u32; n1 * n1];
        for (id, c) in corrs.iter().enumerate() {
            let c1 = cell_of(c.p, &spec.extent_1, n1)?;
            let c2 = cell_of(c.q, &spec.extent_2, n2)?;
            let f1 = c1.1 * n1 + c1.0;
            let f2 = c2.1 * n2 + c2.0;
            buckets[f1 * n2 * n2 + f2].push(id as u32);
            per_cell_counts_1[f1] += 1;
        }
        let data_bbox_1 = Aabb2::from_points(corrs.iter().map(|c| c.p));
        let data_bbox_2 = Aabb2::from_points(corrs.iter().map(|c| c.q));
        let axes_1 = Self::axes(&spec.extent_1, n1, &data_bbox_1);
        let axes_2 = Self::axes(&spec.extent_2, n2, &data_bbox_2);
        Ok(Self {
            spec,
            buckets,
            per_cell_counts_1,
            data_bbox_2,
            axes_1,
            axes_2,
            len: corrs.len(),
        })
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    /// Number of bucketed correspondences.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub(crate) fn flat1(&self, c: CellIndex) -> usize {
        c.1 * self.spec.cells_per_axis_1 + c.0
    }

    #[inline]
    pub(crate) fn flat2(&self, c: CellIndex) -> usize {
        c.1 * self.spec.cells_per_axis_2 + c.0
    }

    /// Correspondence ids with `p` in `c1` and `q` in `c2`; empty for
    /// out-of-range indices.
    pub fn ids_in_cell_pair(&self, c1: CellIndex, c2: CellIndex) -> &[u32] {
        let n1 = self.spec.cells_per_axis_1;
        let n2 = self.spec.cells_per_axis_2;
        if c1.0 >= n1 || c1.1 >= n1 || c2.0 >= n2 || c2.1 >= n2 {
            return &[];
        }
        &self.buckets[self.flat1(c1) * n2 * n2 + self.flat2(c2)]
    }

    /// The correspondences of a cell pair, resolved against the data slice
    /// the grid was built from.
    pub fn corrs_in_cell_pair(
        &self,
        corrs: &[Correspondence],
        c1: CellIndex,
        c2: CellIndex,
    ) -> Vec<Correspondence> {
        self.ids_in_cell_pair(c1, c2)
            .iter()
            .map(|&id| corrs[id as usize])
            .collect()
    }

    /// Sum of bucket sizes over the selected cell pairs: an upper bound on
    /// the inlier count of any model whose culling produced the selection.
    pub fn upper_bound_count(&self, selected: &[(CellIndex, CellIndex)]) -> usize {
        selected
            .iter()
            .map(|&(c1, c2)| self.ids_in_cell_pair(c1, c2).len())
            .sum()
    }

    /// Count of correspondences whose `p` lies in the image-1 cell.
    pub fn count_in_cell_1(&self, c1: CellIndex) -> usize {
        let n1 = self.spec.cells_per_axis_1;
        if c1.0 >= n1 || c1.1 >= n1 {
            return 0;
        }
        self.per_cell_counts_1[self.flat1(c1)] as usize
    }

    /// Rectangle of an image-1 cell on the effective lattice (boundary cells
    /// extended to the data bounding box).
    pub fn cell_extent_1(&self, c: CellIndex) -> Aabb2 {
        let (xs, ys) = self.axes_1();
        Aabb2 {
            min: Point2::new(xs[c.0], ys[c.1]),
            max: Point2::new(xs[c.0 + 1], ys[c.1 + 1]),
        }
    }

    /// Rectangle of an image-2 cell on the effective lattice.
    pub fn cell_extent_2(&self, c: CellIndex) -> Aabb2 {
        let (xs, ys) = self.axes_2();
        Aabb2 {
            min: Point2::new(xs[c.0], ys[c.1]),
            max: Point2::new(xs[c.0 + 1], ys[c.1 + 1]),
        }
    }

    /// All image-1 cells holding at least one correspondence.
    pub fn nonempty_cells_1(&self) -> impl Iterator<Item = CellIndex> + '_ {
        let n1 = self.spec.cells_per_axis_1;
        self.per_cell_counts_1
            .iter()
            .enumerate()
            .filter(|(_, &cnt)| cnt > 0)
            .map(move |(f, _)| (f % n1, f / n1))
    }

    /// Inclusive index ranges `(i_lo, i_hi, j_lo, j_hi)` of the image-2 cells
    /// whose rectangle intersects `b`; `None` for an empty box. Boundary
    /// cells extend outward, so a box beyond the extent still maps to the
    /// nearest boundary cells.
    pub fn cell_range_2(&self, b: &Aabb2) -> Option<(usize, usize, usize, usize)> {
        if b.is_empty() {
            return None;
        }
        let n = self.spec.cells_per_axis_2;
        let e = &self.spec.extent_2;
        let cw = e.width() / n as f64;
        let ch = e.height() / n as f64;
        let clamp = |v: f64| -> usize {
            if v < 0.0 {
                0
            } else if v as usize >= n {
                n - 1
            } else {
                v as usize
            }
        };
        Some((
            clamp(((b.min.x - e.min.x) / cw).floor()),
            clamp(((b.max.x - e.min.x) / cw).floor()),
            clamp(((b.min.y - e.min.y) / ch).floor()),
            clamp(((b.max.y - e.min.y) / ch).floor()),
        ))
    }

    /// Image-2 cells whose rectangle intersects `b` (see [`JointGrid::cell_range_2`]).
    pub fn cells_2_intersecting(&self, b: &Aabb2) -> Vec<CellIndex> {
        match self.cell_range_2(b) {
            None => Vec::new(),
            Some((i_lo, i_hi, j_lo, j_hi)) => {
                let mut out = Vec::with_capacity((i_hi - i_lo + 1) * (j_hi - j_lo + 1));
                for j in j_lo..=j_hi {
                    for i in i_lo..=i_hi {
                        out.push((i, j));
                    }
                }
                out
            }
        }
    }

    /// Grid vertex `(i, j)` of image 1, `i, j` in `0..=cells_per_axis_1`,
    /// on the effective lattice (see [`JointGrid::axes_1`]).
    pub fn vertex_1(&self, i: usize, j: usize) -> Point2 {
        let (xs, ys) = self.axes_1();
        Point2::new(xs[i], ys[j])
    }

    fn axes(extent: &Aabb2, n: usize, data_bbox: &Aabb2) -> (Vec<f64>, Vec<f64>) {
        let w = extent.width() / n as f64;
        let h = extent.height() / n as f64;
        let mut xs: Vec<f64> = (0..=n).map(|i| extent.min.x + i as f64 * w).collect();
        let mut ys: Vec<f64> = (0..=n).map(|j| extent.min.y + j as f64 * h).collect();
        if !data_bbox.is_empty() {
            xs[0] = xs[0].min(data_bbox.min.x);
            ys[0] = ys[0].min(data_bbox.min.y);
            xs[n] = xs[n].max(data_bbox.max.x);
            ys[n] = ys[n].max(data_bbox.max.y);
        }
        (xs, ys)
    }

    /// Vertex coordinates of the effective image-1 lattice. The outermost
    /// lines are pushed out to the data bounding box, so every bucketed point
    /// lies inside its cell rectangle even when it was clamped.
    pub fn axes_1(&self) -> (&[f64], &[f64]) {
        (&self.axes_1.0, &self.axes_1.1)
    }

    /// Vertex coordinates of the effective image-2 lattice.
    pub fn axes_2(&self) -> (&[f64], &[f64]) {
        (&self.axes_2.0, &self.axes_2.1)
    }

    /// Image-2 extent widened to cover all bucketed points; the target of
    /// conservative fallbacks.
    pub fn full_extent_2(&self) -> Aabb2 {
        self.spec.extent_2.union(&self.data_bbox_2)
    }

    /// All cell pairs, row-major. Mostly useful for exhaustive tests.
    pub fn all_pairs(&self) -> Vec<(CellIndex, CellIndex)> {
        let n1 = self.spec.cells_per_axis_1;
        let n2 = self.spec.cells_per_axis_2;
        let mut out = Vec::with_capacity(n1 * n1 * n2 * n2);
        for j1 in 0..n1 {
            for i1 in 0..n1 {
                for j2 in 0..n2 {
                    for i2 in 0..n2 {
                        out.push(((i1, j1), (i2, j2)));
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::corr;
    use rand::{Rng, SeedableRng};

    fn spec_2x2_100() -> GridSpec {
        let e = Aabb2::new(Point2::new(0.0, 0.0), Point2::new(100.0, 100.0));
        GridSpec::new(2, 2, e, e).unwrap()
    }

    #[test]
    fn cell_of_examples() {
        let e = Aabb2::new(Point2::new(0.0, 0.0), Point2::new(100.0, 100.0));
        assert_eq!(cell_of(Point2::new(0.0, 0.0), &e, 4).unwrap(), (0, 0));
        assert_eq!(cell_of(Point2::new(100.0, 100.0), &e, 4).unwrap(), (3, 3));
        assert_eq!(cell_of(Point2::new(25.0, 50.0), &e, 4).unwrap(), (1, 2));
        assert!(cell_of(Point2::new(f64::NAN, 0.0), &e, 4).is_err());
    }

    #[test]
    fn single_bucket_lookup() {
        let corrs = vec![corr(10.0, 10.0, 10.0, 10.0)];
        let grid = JointGrid::build(&corrs, spec_2x2_100()).unwrap();
        assert_eq!(grid.ids_in_cell_pair((0, 0), (0, 0)), &[0]);
        assert_eq!(
            grid.corrs_in_cell_pair(&corrs, (0, 0), (0, 0)),
            vec![corrs[0]]
        );
        assert!(grid.corrs_in_cell_pair(&corrs, (1, 1), (1, 1)).is_empty());
    }

    #[test]
    fn cross_cell_bucket() {
        let corrs = vec![corr(75.0, 10.0, 10.0, 75.0)];
        let grid = JointGrid::build(&corrs, spec_2x2_100()).unwrap();
        assert_eq!(grid.ids_in_cell_pair((1, 0), (0, 1)), &[0]);
    }

    #[test]
    fn degenerate_extent_is_rejected() {
        let e = Aabb2::new(Point2::new(0.0, 0.0), Point2::new(0.0, 100.0));
        assert!(GridSpec::new(2, 2, e, e).is_err());
    }

    #[test]
    fn bucket_sizes_sum_to_n() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let corrs: Vec<_> = (0..10_000)
            .map(|_| {
                corr(
                    rng.gen_range(0.0..100.0),
                    rng.gen_range(0.0..100.0),
                    rng.gen_range(0.0..100.0),
                    rng.gen_range(0.0..100.0),
                )
            })
            .collect();
        let grid = JointGrid::build(&corrs, spec_2x2_100()).unwrap();
        assert_eq!(grid.upper_bound_count(&grid.all_pairs()), 10_000);
        assert_eq!(grid.upper_bound_count(&[]), 0);
    }

    #[test]
    fn union_over_pairs_recovers_input_set() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let corrs: Vec<_> = (0..500)
            .map(|_| {
                corr(
                    rng.gen_range(0.0..100.0),
                    rng.gen_range(0.0..100.0),
                    rng.gen_range(0.0..100.0),
                    rng.gen_range(0.0..100.0),
                )
            })
            .collect();
        let spec = GridSpec::from_points(&corrs, 3, 4).unwrap();
        let grid = JointGrid::build(&corrs, spec).unwrap();
        let mut seen = vec![0usize; corrs.len()];
        for (c1, c2) in grid.all_pairs() {
            for &id in grid.ids_in_cell_pair(c1, c2) {
                seen[id as usize] += 1;
            }
        }
        // Exhaustive and disjoint: each correspondence in exactly one bucket.
        assert!(seen.iter().all(|&s| s == 1));
    }

    #[test]
    fn rebuild_is_deterministic() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let corrs: Vec<_> = (0..200)
            .map(|_| {
                corr(
                    rng.gen_range(0.0..10.0),
                    rng.gen_range(0.0..10.0),
                    rng.gen_range(0.0..10.0),
                    rng.gen_range(0.0..10.0),
                )
            })
            .collect();
        let spec = GridSpec::from_points(&corrs, 4, 4).unwrap();
        let a = JointGrid::build(&corrs, spec).unwrap();
        let b = JointGrid::build(&corrs, spec).unwrap();
        assert_eq!(a.buckets, b.buckets);
    }

    #[test]
    fn clamped_points_stay_inside_boundary_cell_geometry() {
        let e = Aabb2::new(Point2::new(0.0, 0.0), Point2::new(10.0, 10.0));
        let spec = GridSpec::new(2, 2, e, e).unwrap();
        let corrs = vec![corr(-5.0, 3.0, 14.0, 14.0)];
        let grid = JointGrid::build(&corrs, spec).unwrap();
        assert_eq!(grid.ids_in_cell_pair((0, 0), (1, 1)), &[0]);
        assert!(grid.cell_extent_1((0, 0)).contains(corrs[0].p));
        assert!(grid.cell_extent_2((1, 1)).contains(corrs[0].q));
    }

    proptest::proptest! {
        /// Exhaustive and disjoint partition for arbitrary finite inputs.
        #[test]
        fn partition_is_exhaustive_and_disjoint(
            points in proptest::collection::vec(
                (-1e4f64..1e4, -1e4f64..1e4, -1e4f64..1e4, -1e4f64..1e4), 1..200),
            n1 in 1usize..6,
            n2 in 1usize..6,
        ) {
            let corrs: Vec<_> = points
                .iter()
                .map(|&(a, b, c, d)| corr(a, b, c, d))
                .collect();
            let spec = GridSpec::from_points(&corrs, n1, n2).unwrap();
            let grid = JointGrid::build(&corrs, spec).unwrap();
            let mut seen = vec![0usize; corrs.len()];
            for (c1, c2) in grid.all_pairs() {
                for &id in grid.ids_in_cell_pair(c1, c2) {
                    seen[id as usize] += 1;
                }
            }
            proptest::prop_assert!(seen.iter().all(|&s| s == 1));
            proptest::prop_assert_eq!(grid.upper_bound_count(&grid.all_pairs()), corrs.len());
        }
    }

    #[test]
    fn upper_bound_is_monotone_in_selection() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(6);
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
        let grid = JointGrid::build(&corrs, spec_2x2_100()).unwrap();
        let pairs = grid.all_pairs();
        let mut acc = 0;
        for k in 0..pairs.len() {
            let bound = grid.upper_bound_count(&pairs[..k]);
            assert!(bound >= acc);
            acc = bound;
        }
    }
}
