//! Robust geometric estimation by candidate clustering.
//!
//! The estimation recipe implemented here has three moving parts:
//!
//! 1. **Candidate generation** — minimal solvers ([`solvers`]) turn small
//!    feature subsets into many hypothesis transforms: SVD point alignment
//!    for poses, 4-point DLT for homographies.
//! 2. **Clustering** — correct hypotheses pile up in transform space while
//!    mismatches scatter. [`cluster`] finds the dense subset with pairwise
//!    metrics ([`metrics`]), iterative trimming and MAD pruning.
//! 3. **Robust averaging** — [`average`] condenses the surviving cluster
//!    into one estimate: medoid, Karcher mean, log-Euclidean mean, split
//!    mean, or the Weiszfeld geometric median.
//!
//! Two end-to-end pipelines are built on those parts: [`localize`] for 6-DoF
//! pose estimation from labeled landmarks, and [`stitch`] for homography
//! estimation and panorama compositing. [`ransac`] provides the classical
//! fixed-budget DLT+RANSAC baseline the clustering route is compared against.
//!
//! All randomized operations take an explicit seed and are bit-reproducible;
//! all types are plain values, safe to share across threads.

pub mod average;
pub mod blend;
pub mod cluster;
pub mod config;
pub mod geom;
pub mod jsonio;
pub mod localize;
pub mod metrics;
pub mod ransac;
pub mod raster;
pub mod solvers;
pub mod stitch;
pub mod warp;

pub use geom::{Homography, NormalizationMode, Pose, Rotation, Twist};
pub use solvers::{Landmark, LandmarkMap, Match2D, PoseCandidate};
