//! Robust geometric model estimation with grid-partitioned model verification.
//!
//! `gridsac` is a RANSAC-family estimator for two-view geometry (homographies,
//! fundamental and essential matrices, radially distorted homographies) whose
//! model verification stage partitions the joint correspondence space into a
//! pair of regular grids. Each candidate model maps grid cells of the first
//! image into conservative bounds in the second image; correspondences whose
//! cell pair cannot contain an inlier are rejected before any residual is
//! computed. With the rejection margin at its safe default the surviving
//! inlier set is identical to the one a full scan produces, so the speed-up
//! costs no accuracy.
//!
//! The main pieces:
//!
//! - [`models`]: correspondence and model types with their residual functions
//! - [`grid`]: the joint correspondence grid (bucketed cell pairs)
//! - [`solvers`]: minimal and least-squares solvers (4-point homography,
//!   7/8-point fundamental matrix)
//! - [`polyapprox`]: Chebyshev/Lagrange/Hermite approximation and Bezier
//!   bounding machinery used for nonlinear mappings
//! - [`bounding`]: conservative cell bounds and cell-pair culling per model family
//! - [`verify`]: verification strategies (full scan, grid prefilter, SPRT,
//!   grid+SPRT) and early model rejection
//! - [`engine`]: the estimation loop (PROSAC sampling, local optimization,
//!   confidence-based termination)
//! - [`synth`], [`matches_io`], [`bench`], [`svg`]: synthetic data, the matches
//!   file format, benchmark sweeps and plots
//!
//! See the `examples/` directory for runnable walkthroughs of each capability,
//! and the `gridsac` binary for the `synth` / `estimate` / `bench` / `plot`
//! command line.

pub mod bench;
pub mod bounding;
pub mod engine;
pub mod error;
pub mod geometry;
pub mod grid;
pub mod matches_io;
pub mod models;
pub mod polyapprox;
pub mod solvers;
pub mod svg;
pub mod synth;
pub mod verify;

pub use engine::{ransac, RansacConfig, RansacResult};
pub use error::GridsacError;
pub use geometry::Aabb2;
pub use grid::{GridSpec, JointGrid};
pub use models::{
    Correspondence, EssentialSetup, FundamentalMatrix, Homography, Model, ModelFamily,
    RadialHomography, Score,
};
pub use verify::{Scoring, SprtParams, Strategy, VerifyStats};
