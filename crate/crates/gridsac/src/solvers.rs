//! Minimal and least-squares model solvers used inside the estimation loop.
//!
//! - 4-point homography and n-point homography DLT (Hartley-normalized)
//! - 7-point fundamental matrix (closed-form cubic for the rank-2 constraint)
//! - 8-point fundamental matrix with rank-2 projection
//! - 8-point essential matrix on intrinsics-normalized coordinates with
//!   projection onto the essential manifold
//!
//! All solvers are deterministic: the same sample yields bit-identical output.

use crate::error::{GridsacError, Result};
use crate::geometry::Point2;
use crate::models::{Correspondence, EssentialSetup, FundamentalMatrix, Homography};
use nalgebra::{DMatrix, Matrix3, Vector3};

/// Triangle degeneracy threshold for the normalized area (sine of the angle
/// at a vertex).
const COLLINEAR_EPS: f64 = 1e-9;

/// Relative singular-value threshold for rank decisions in the linear solvers.
const RANK_EPS: f64 = 1e-9;

/// Similarity transform moving the centroid to the origin with RMS distance
/// sqrt(2) (Hartley normalization).
#[derive(Debug, Clone, Copy)]
pub(crate) struct Normalization {
    pub t: Matrix3<f64>,
}

impl Normalization {
    pub fn from_points<I: Iterator<Item = Point2> + Clone>(points: I) -> Result<Self> {
        let mut centroid = Point2::new(0.0, 0.0);
        let mut n = 0usize;
        for p in points.clone() {
            centroid += p;
            n += 1;
        }
        if n == 0 {
            return Err(GridsacError::Numerical("no points to normalize".into()));
        }
        centroid /= n as f64;
        let mut rms = 0.0;
        for p in points {
            rms += (p - centroid).norm_squared();
        }
        rms = (rms / n as f64).sqrt();
        if rms < 1e-12 {
            return Err(GridsacError::Numerical(
                "degenerate (coincident) points".into(),
            ));
        }
        let s = std::f64::consts::SQRT_2 / rms;
        Ok(Self {
            t: Matrix3::new(
                s,
                0.0,
                -s * centroid.x,
                0.0,
                s,
                -s * centroid.y,
                0.0,
                0.0,
                1.0,
            ),
        })
    }

    pub fn apply(&self, p: Point2) -> Point2 {
        Point2::new(
            self.t[(0, 0)] * p.x + self.t[(0, 2)],
            self.t[(1, 1)] * p.y + self.t[(1, 2)],
        )
    }
}

fn collinear(a: Point2, b: Point2, c: Point2) -> bool {
    let u = b - a;
    let v = c - a;
    let (nu, nv) = (u.norm(), v.norm());
    if nu < 1e-12 || nv < 1e-12 {
        return true;
    }
    (u.x * v.y - u.y * v.x).abs() / (nu * nv) < COLLINEAR_EPS
}

/// Any three of the points collinear (or coincident)? Samples too short to
/// form a triangle count as degenerate.
fn has_collinear_triple(points: &[Point2]) -> bool {
    if points.len() < 3 {
        return true;
    }
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            for k in (j + 1)..points.len() {
                if collinear(points[i], points[j], points[k]) {
                    return true;
                }
            }
        }
    }
    false
}

/// Smallest right singular vectors of a design matrix; returns the last
/// `count` rows of V^T together with the singular values.
///
/// The matrix is zero-padded to at least 9 rows: nalgebra computes the thin
/// SVD, which would otherwise omit the null-space directions of a wide
/// matrix.
fn null_vectors(a: &DMatrix<f64>, count: usize) -> Result<(Vec<[f64; 9]>, Vec<f64>)> {
    let a = if a.nrows() < 9 {
        let mut padded = DMatrix::zeros(9, 9);
        padded.view_mut((0, 0), (a.nrows(), 9)).copy_from(a);
        padded
    } else {
        a.clone()
    };
    let svd = a.svd(false, true);
    let v_t = svd
        .v_t
        .as_ref()
        .ok_or_else(|| GridsacError::Numerical("SVD failed".into()))?;
    let mut out = Vec::with_capacity(count);
    let cols = v_t.ncols();
    debug_assert_eq!(cols, 9);
    for r in 0..count {
        let row = v_t.row(v_t.nrows() - 1 - r);
        let mut v = [0.0; 9];
        for c in 0..9 {
            v[c] = row[c];
        }
        out.push(v);
    }
    Ok((out, svd.singular_values.as_slice().to_vec()))
}

fn mat_from_vec9(v: &[f64; 9]) -> Matrix3<f64> {
    Matrix3::new(v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8])
}

/// Homography from exactly four correspondences. Empty when any three of the
/// source or target points are collinear or the system is rank-deficient.
pub fn homography_4pt(sample: &[Correspondence]) -> Vec<Homography> {
    assert_eq!(sample.len(), 4, "homography_4pt needs exactly 4 points");
    let src: Vec<_> = sample.iter().map(|c| c.p).collect();
    let dst: Vec<_> = sample.iter().map(|c| c.q).collect();
    if has_collinear_triple(&src) || has_collinear_triple(&dst) {
        return Vec::new();
    }
    match homography_dlt(sample) {
        Ok(h) => vec![h],
        Err(_) => Vec::new(),
    }
}

/// Algebraic least-squares homography (DLT with Hartley normalization) from
/// four or more correspondences. Exact on noiseless consistent input.
pub fn homography_dlt(points: &[Correspondence]) -> Result<Homography> {
    if points.len() < 4 {
        return Err(GridsacError::Data(format!(
            "homography needs >= 4 correspondences, got {}",
            points.len()
        )));
    }
    let n1 = Normalization::from_points(points.iter().map(|c| c.p))?;
    let n2 = Normalization::from_points(points.iter().map(|c| c.q))?;
    let mut a = DMatrix::zeros(2 * points.len(), 9);
    for (i, c) in points.iter().enumerate() {
        let p = n1.apply(c.p);
        let q = n2.apply(c.q);
        let (x, y) = (p.x, p.y);
        let (u, v) = (q.x, q.y);
        a.set_row(
            2 * i,
            &nalgebra::RowDVector::from_row_slice(&[0.0, 0.0, 0.0, -x, -y, -1.0, v * x, v * y, v])
                .into(),
        );
        a.set_row(
            2 * i + 1,
            &nalgebra::RowDVector::from_row_slice(&[x, y, 1.0, 0.0, 0.0, 0.0, -u * x, -u * y, -u])
                .into(),
        );
    }
    let (vecs, sv) = null_vectors(&a, 1)?;
    // The 8 constraint rows must keep rank 8: the second-smallest singular
    // value must stay well above zero.
    let rank_limit = sv[0] * RANK_EPS;
    if sv.len() >= 2 && sv[sv.len() - 2] < rank_limit {
        return Err(GridsacError::Numerical(
            "rank-deficient homography system".into(),
        ));
    }
    let h_norm = mat_from_vec9(&vecs[0]);
    let t2_inv =
        n2.t.try_inverse()
            .ok_or_else(|| GridsacError::Numerical("normalization not invertible".into()))?;
    let h = t2_inv * h_norm * n1.t;
    if h.determinant().abs() < 1e-14 {
        return Err(GridsacError::Numerical("singular homography".into()));
    }
    Ok(Homography::new(h))
}

/// Epipolar constraint row for normalized points `p` (image 1), `q` (image 2).
fn epipolar_row(p: Point2, q: Point2) -> [f64; 9] {
    [
        q.x * p.x,
        q.x * p.y,
        q.x,
        q.y * p.x,
        q.y * p.y,
        q.y,
        p.x,
        p.y,
        1.0,
    ]
}

/// Real roots of `c3 x^3 + c2 x^2 + c1 x + c0`, Newton-polished.
pub(crate) fn solve_cubic(c3: f64, c2: f64, c1: f64, c0: f64) -> Vec<f64> {
    let max_c = c3.abs().max(c2.abs()).max(c1.abs()).max(c0.abs());
    if max_c == 0.0 {
        return Vec::new();
    }
    let mut roots = if c3.abs() < 1e-12 * max_c {
        // Quadratic (or linear) fallback.
        if c2.abs() < 1e-12 * max_c {
            if c1.abs() < 1e-12 * max_c {
                return Vec::new();
            }
            vec![-c0 / c1]
        } else {
            let disc = c1 * c1 - 4.0 * c2 * c0;
            if disc < 0.0 {
                return Vec::new();
            }
            let sq = disc.sqrt();
            // Numerically stable quadratic roots.
            let q = -0.5 * (c1 + c1.signum() * sq);
            if q == 0.0 {
                vec![0.0]
            } else {
                vec![q / c2, c0 / q]
            }
        }
    } else {
        let p = c2 / c3;
        let q = c1 / c3;
        let r = c0 / c3;
        // Depressed cubic t^3 + a t + b with x = t - p/3.
        let a = q - p * p / 3.0;
        let b = 2.0 * p * p * p / 27.0 - p * q / 3.0 + r;
        let shift = -p / 3.0;
        let disc = b * b / 4.0 + a * a * a / 27.0;
        if disc > 0.0 {
            let sq = disc.sqrt();
            let t = (-b / 2.0 + sq).cbrt() + (-b / 2.0 - sq).cbrt();
            vec![t + shift]
        } else if a == 0.0 && b == 0.0 {
            vec![shift]
        } else {
            // Three real roots: trigonometric form.
            let m = 2.0 * (-a / 3.0).sqrt();
            let arg = (3.0 * b / (a * m)).clamp(-1.0, 1.0);
            let theta = arg.acos() / 3.0;
            (0..3)
                .map(|k| m * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos() + shift)
                .collect()
        }
    };
    for root in roots.iter_mut() {
        for _ in 0..2 {
            let f = ((c3 * *root + c2) * *root + c1) * *root + c0;
            let df = (3.0 * c3 * *root + 2.0 * c2) * *root + c1;
            if df.abs() > 1e-300 {
                *root -= f / df;
            }
        }
    }
    roots
}

/// Fundamental matrices from exactly seven correspondences: the rank-2
/// constraint `det(alpha F1 + (1 - alpha) F2) = 0` is solved in closed form,
/// giving one to three solutions. Empty when the sample is degenerate (null
/// space wider than two).
pub fn fundamental_7pt(sample: &[Correspondence]) -> Vec<FundamentalMatrix> {
    assert_eq!(sample.len(), 7, "fundamental_7pt needs exactly 7 points");
    let n1 = match Normalization::from_points(sample.iter().map(|c| c.p)) {
        Ok(n) => n,
        Err(_) => return Vec::new(),
    };
    let n2 = match Normalization::from_points(sample.iter().map(|c| c.q)) {
        Ok(n) => n,
        Err(_) => return Vec::new(),
    };
    let mut a = DMatrix::zeros(7, 9);
    for (i, c) in sample.iter().enumerate() {
        let row = epipolar_row(n1.apply(c.p), n2.apply(c.q));
        for (j, v) in row.iter().enumerate() {
            a[(i, j)] = *v;
        }
    }
    let (vecs, sv) = match null_vectors(&a, 2) {
        Ok(r) => r,
        Err(_) => return Vec::new(),
    };
    // Degenerate sample: a third vanishing singular value means the null
    // space has dimension > 2. The two zero values from row padding sit at
    // the end, so the third-from-last is the test.
    if sv[0] < 1e-12 || sv[sv.len() - 3] < sv[0] * RANK_EPS {
        return Vec::new();
    }
    let f1 = mat_from_vec9(&vecs[0]);
    let f2 = mat_from_vec9(&vecs[1]);

    // det(alpha F1 + (1 - alpha) F2) as a cubic in alpha, via interpolation
    // at alpha in {0, 1, -1, 2}: exact for a cubic.
    let det_at = |alpha: f64| (f1 * alpha + f2 * (1.0 - alpha)).determinant();
    let (d0, d1, dm1, d2) = (det_at(0.0), det_at(1.0), det_at(-1.0), det_at(2.0));
    let c0 = d0;
    let c2 = (d1 + dm1) / 2.0 - c0;
    // d1 - dm1 = 2 c3 + 2 c1; d2 = 8 c3 + 4 c2 + 2 c1 + c0
    let s = (d1 - dm1) / 2.0; // c3 + c1
    let c3 = (d2 - c0 - 4.0 * c2 - 2.0 * s) / 6.0;
    let c1 = s - c3;

    let t2t = n2.t.transpose();
    let mut out = Vec::new();
    for alpha in solve_cubic(c3, c2, c1, c0) {
        if !alpha.is_finite() {
            continue;
        }
        let f_norm = f1 * alpha + f2 * (1.0 - alpha);
        let f = t2t * f_norm * n1.t;
        if f.norm() < 1e-12 {
            continue;
        }
        let fm = FundamentalMatrix::new(f);
        if fm.det().abs() <= 1e-8 {
            out.push(fm);
        }
    }
    out
}

/// Least-squares fundamental matrix from eight or more correspondences
/// (Hartley-normalized), projected onto rank 2 by zeroing the smallest
/// singular value.
pub fn fundamental_8pt(points: &[Correspondence]) -> Result<FundamentalMatrix> {
    if points.len() < 8 {
        return Err(GridsacError::Data(format!(
            "fundamental_8pt needs >= 8 correspondences, got {}",
            points.len()
        )));
    }
    let n1 = Normalization::from_points(points.iter().map(|c| c.p))?;
    let n2 = Normalization::from_points(points.iter().map(|c| c.q))?;
    let mut a = DMatrix::zeros(points.len(), 9);
    for (i, c) in points.iter().enumerate() {
        let row = epipolar_row(n1.apply(c.p), n2.apply(c.q));
        for (j, v) in row.iter().enumerate() {
            a[(i, j)] = *v;
        }
    }
    let (vecs, sv) = null_vectors(&a, 1)?;
    if sv[sv.len() - 2] < sv[0] * RANK_EPS {
        return Err(GridsacError::Numerical(
            "rank-deficient fundamental system".into(),
        ));
    }
    let f_norm = mat_from_vec9(&vecs[0]);
    let f_rank2 = project_rank2(&f_norm)?;
    Ok(FundamentalMatrix::new(n2.t.transpose() * f_rank2 * n1.t))
}

fn project_rank2(m: &Matrix3<f64>) -> Result<Matrix3<f64>> {
    let svd = m.svd(true, true);
    let (u, v_t) = (
        svd.u
            .ok_or_else(|| GridsacError::Numerical("SVD failed".into()))?,
        svd.v_t
            .ok_or_else(|| GridsacError::Numerical("SVD failed".into()))?,
    );
    let s = svd.singular_values;
    Ok(u * Matrix3::from_diagonal(&Vector3::new(s[0], s[1], 0.0)) * v_t)
}

/// Essential matrix from eight or more correspondences: 8-point on
/// intrinsics-normalized coordinates, then projection onto the essential
/// manifold (`s1 = s2 = (s1 + s2) / 2`, `s3 = 0`).
pub fn essential_8pt(
    points: &[Correspondence],
    k1: &Matrix3<f64>,
    k2: &Matrix3<f64>,
) -> Result<EssentialSetup> {
    if points.len() < 8 {
        return Err(GridsacError::Data(format!(
            "essential_8pt needs >= 8 correspondences, got {}",
            points.len()
        )));
    }
    let k1_inv = k1
        .try_inverse()
        .ok_or_else(|| GridsacError::Numerical("singular K1".into()))?;
    let k2_inv = k2
        .try_inverse()
        .ok_or_else(|| GridsacError::Numerical("singular K2".into()))?;
    let unproject = |k_inv: &Matrix3<f64>, p: Point2| -> Point2 {
        let v = k_inv * Vector3::new(p.x, p.y, 1.0);
        Point2::new(v.x / v.z, v.y / v.z)
    };
    let normalized: Vec<_> = points
        .iter()
        .map(|c| Correspondence {
            p: unproject(&k1_inv, c.p),
            q: unproject(&k2_inv, c.q),
            score: None,
        })
        .collect();
    // The 8-point estimate in K-normalized coordinates is a fundamental
    // matrix of those coordinates; snap it to the essential manifold.
    let f = fundamental_8pt(&normalized)?;
    let svd = f.matrix().svd(true, true);
    let (u, v_t) = (
        svd.u
            .ok_or_else(|| GridsacError::Numerical("SVD failed".into()))?,
        svd.v_t
            .ok_or_else(|| GridsacError::Numerical("SVD failed".into()))?,
    );
    let s = svd.singular_values;
    let mean = 0.5 * (s[0] + s[1]);
    let e = u * Matrix3::from_diagonal(&Vector3::new(mean, mean, 0.0)) * v_t;
    EssentialSetup::new(e, *k1, *k2)
}

/// Fundamental matrix equivalent to an essential setup (`F = K2^-T E K1^-1`).
pub fn f_from_e(setup: &EssentialSetup) -> Result<FundamentalMatrix> {
    setup.fundamental()
}
