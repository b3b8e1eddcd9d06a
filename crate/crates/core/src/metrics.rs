//! Pairwise distances between transforms, pluggable into the clustering
//! module.
//!
//! Pose metrics: relative transform error (split translation/rotation),
//! Lie-log scalar distance, and point-set induced distance. Homography
//! metrics: Lie-algebra (geodesic) distance and Frobenius distance on
//! normalized matrices. The Lie-algebra distance can fail when the relative
//! transform leaves the principal-log domain; clustering callers substitute
//! the Frobenius distance for that pair and count the fallback.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{gl3, se3, so3, Homography, NormalizationMode, Pose};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("point-set distance needs at least one reference point")]
    EmptyPointSet,
}

/// Parameters for the SE(3) scalar metrics.
///
/// `lambda` weighs radians against scene units (default 1.0, i.e. one scene
/// unit per radian). `reference_points` feeds the point-set metric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Se3MetricConfig {
    pub lambda: f64,
    pub reference_points: Option<Vec<Vector3<f64>>>,
}

impl Default for Se3MetricConfig {
    fn default() -> Self {
        Se3MetricConfig {
            lambda: 1.0,
            reference_points: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HomographyMetricKind {
    #[serde(rename = "hlie")]
    LieAlgebra,
    #[serde(rename = "hfro")]
    Frobenius,
}

/// Relative transform error between two poses: Δ = T₁⁻¹T₂, returned as
/// (‖t_Δ‖, ‖log(R_Δ)‖) — translational and rotational error separately.
pub fn relative_transform_error(t1: &Pose, t2: &Pose) -> (f64, f64) {
    let delta = t1.inverse().compose(t2);
    (
        delta.translation.norm(),
        so3::log(&delta.rotation).norm(),
    )
}

/// Scalar Lie-log distance √(‖ρ‖² + λ²‖φ‖²) of the error twist
/// ξ = log(T₁⁻¹T₂). Symmetric and left-invariant.
pub fn lie_log_distance(t1: &Pose, t2: &Pose, lambda: f64) -> f64 {
    let xi = se3::log(&t1.inverse().compose(t2));
    (xi.rho.norm_squared() + lambda * lambda * xi.phi.norm_squared()).sqrt()
}

/// RMS deviation of the two transformed point clouds: how differently the
/// two poses move the reference points.
pub fn point_set_distance(
    t1: &Pose,
    t2: &Pose,
    points: &[Vector3<f64>],
) -> Result<f64, MetricError> {
    if points.is_empty() {
        return Err(MetricError::EmptyPointSet);
    }
    let sum: f64 = points
        .iter()
        .map(|p| (t1.apply(p) - t2.apply(p)).norm_squared())
        .sum();
    Ok((sum / points.len() as f64).sqrt())
}

/// Geodesic deviation in the projective group: ‖log(H₁⁻¹H₂)‖_F after
/// normalizing both arguments to unit determinant. Zero iff the two are
/// projectively equal. Propagates the log-domain error so the caller can
/// fall back to [`homography_frobenius_distance`].
pub fn homography_lie_distance(
    h1: &Homography,
    h2: &Homography,
) -> Result<f64, crate::geom::GeomError> {
    let a = h1.renormalized(NormalizationMode::UnitDeterminant)?;
    let b = h2.renormalized(NormalizationMode::UnitDeterminant)?;
    let rel = a.matrix().try_inverse().ok_or(
        crate::geom::GeomError::DegenerateHomography("not invertible"),
    )? * b.matrix();
    Ok(gl3::log(&rel)?.norm())
}

/// Frobenius distance between unit-determinant normalizations, with the
/// sign of the second argument flipped if that reduces the distance (the
/// projective ± ambiguity).
pub fn homography_frobenius_distance(
    h1: &Homography,
    h2: &Homography,
) -> Result<f64, crate::geom::GeomError> {
    let a = h1.renormalized(NormalizationMode::UnitDeterminant)?;
    let b = h2.renormalized(NormalizationMode::UnitDeterminant)?;
    let plus = (a.matrix() - b.matrix()).norm();
    let minus = (a.matrix() + b.matrix()).norm();
    Ok(plus.min(minus))
}

/// Outcome of one pairwise distance evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Distance {
    pub value: f64,
    /// True when the Lie-algebra metric failed for this pair and the
    /// Frobenius distance was substituted.
    pub fell_back: bool,
}

impl Distance {
    fn plain(value: f64) -> Self {
        Distance {
            value,
            fell_back: false,
        }
    }
}

/// A pairwise metric over candidate transforms. Implementations are pure;
/// clustering may evaluate them from multiple threads.
pub trait Metric<E>: Sync {
    fn distance(&self, a: &E, b: &E) -> Distance;
}

/// Pose metrics selectable by config name.
#[derive(Debug, Clone, PartialEq)]
pub enum PoseMetric {
    /// `"rte"`: e_t + λ·e_r collapsed to a scalar (the local-filter ranking
    /// combination).
    Rte { lambda: f64 },
    /// `"lielog"`: √(‖ρ‖² + λ²‖φ‖²).
    LieLog { lambda: f64 },
    /// `"pointset"`: RMS over the reference points.
    PointSet { points: Vec<Vector3<f64>> },
}

impl Metric<Pose> for PoseMetric {
    fn distance(&self, a: &Pose, b: &Pose) -> Distance {
        match self {
            PoseMetric::Rte { lambda } => {
                let (et, er) = relative_transform_error(a, b);
                Distance::plain(et + lambda * er)
            }
            PoseMetric::LieLog { lambda } => Distance::plain(lie_log_distance(a, b, *lambda)),
            PoseMetric::PointSet { points } => {
                // Nonempty points is validated at construction/config time.
                Distance::plain(point_set_distance(a, b, points).unwrap_or(f64::INFINITY))
            }
        }
    }
}

/// Homography metrics selectable by config name. The Lie-algebra variant
/// falls back to the Frobenius distance (flagged) whenever the pair leaves
/// the principal-log domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HomographyMetric(pub HomographyMetricKind);

impl Metric<Homography> for HomographyMetric {
    fn distance(&self, a: &Homography, b: &Homography) -> Distance {
        match self.0 {
            HomographyMetricKind::LieAlgebra => match homography_lie_distance(a, b) {
                Ok(v) => Distance::plain(v),
                Err(_) => Distance {
                    value: homography_frobenius_distance(a, b).unwrap_or(f64::INFINITY),
                    fell_back: true,
                },
            },
            HomographyMetricKind::Frobenius => Distance::plain(
                homography_frobenius_distance(a, b).unwrap_or(f64::INFINITY),
            ),
        }
    }
}
