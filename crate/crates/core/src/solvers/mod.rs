//! Minimal-problem solvers: feature subsets in, candidate transforms out.
//!
//! - [`svd_align`]: closed-form rigid alignment of ≥3 point pairs.
//! - [`enumerate_pose_candidates`]: all class-consistent triplet assignments
//!   between observed and mapped landmarks, each solved to a pose.
//! - [`dlt_homography`]: normalized 4-point DLT.
//! - [`sample_homography_candidates`]: seeded minimal-subset sampling.

use nalgebra::{Vector2, Vector3};
use serde::{Deserialize, Serialize};
use thiserror::Error;

mod align;
mod dlt;

pub use align::{enumerate_pose_candidates, svd_align};
pub use dlt::{dlt_homography, sample_homography_candidates, HomographyCandidate};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    /// Input geometry leaves the solution under-determined (collinear
    /// points, rank-deficient design matrix).
    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(&'static str),
    #[error("need at least {needed} observations, got {got}")]
    TooFewObservations { needed: usize, got: usize },
    #[error("only {got} valid candidates out of {requested} requested (minimum {minimum})")]
    InsufficientValidCandidates {
        requested: usize,
        got: usize,
        minimum: usize,
    },
}

/// A labeled 3D map point. The label is the feature class (e.g. goal post,
/// line crossing); correspondences may only pair equal labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Landmark {
    #[serde(rename = "p")]
    pub position: Vector3<f64>,
    #[serde(rename = "c")]
    pub class_label: String,
}

impl Landmark {
    pub fn new(position: Vector3<f64>, class_label: impl Into<String>) -> Self {
        Landmark {
            position,
            class_label: class_label.into(),
        }
    }
}

/// Global-frame landmark map with its label alphabet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LandmarkMap {
    pub labels: Vec<String>,
    pub landmarks: Vec<Landmark>,
}

impl LandmarkMap {
    /// Indices of map landmarks carrying `label`.
    pub fn indices_with_label(&self, label: &str) -> Vec<usize> {
        self.landmarks
            .iter()
            .enumerate()
            .filter(|(_, l)| l.class_label == label)
            .map(|(i, _)| i)
            .collect()
    }
}

/// A 2D point correspondence between two images, in pixels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Match2D {
    pub p: Vector2<f64>,
    pub q: Vector2<f64>,
}

impl Match2D {
    pub fn new(p: Vector2<f64>, q: Vector2<f64>) -> Self {
        Match2D { p, q }
    }
}

/// A hypothesis pose with the observation/map triplet that produced it and
/// the alignment RMS residual.
#[derive(Debug, Clone, PartialEq)]
pub struct PoseCandidate {
    pub pose: crate::geom::Pose,
    /// Indices into the observation list.
    pub observation_indices: [usize; 3],
    /// Map landmark index assigned to each observation, in the same order.
    pub map_indices: [usize; 3],
    /// RMS of ‖pose·obsᵢ − mapᵢ‖ over the triplet.
    pub residual: f64,
}
