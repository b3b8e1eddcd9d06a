//! Robust cluster-center averaging on SE(3) and homography space.
//!
//! SE(3) schemes: Karcher (intrinsic) mean, log-Euclidean mean, split mean
//! (translation arithmetic, rotation chordal), and medoid selection.
//! Homography schemes: intrinsic Lie mean and the Weiszfeld geometric
//! median on the Lie algebra, both re-anchoring the tangent space at every
//! iterate.

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cluster;
use crate::geom::{gl3, se3, Homography, NormalizationMode, Pose, Rotation, Twist};
use crate::metrics::{HomographyMetric, HomographyMetricKind, PoseMetric};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AverageError {
    #[error("cannot average an empty set")]
    EmptyInput,
    /// The arithmetic rotation mean is rank-deficient (antipodal inputs):
    /// its two smallest singular values vanish.
    #[error("degenerate rotation mean")]
    DegenerateRotationMean,
    /// Every member fell outside the log domain of the anchor.
    #[error("no members in the logarithm domain")]
    NoUsableMembers,
}

/// SE(3) averaging scheme, selectable by config name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PoseAverageScheme {
    Karcher,
    LogEuclidean,
    Split,
    Medoid,
}

/// Homography center scheme, selectable by config name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HomographyAverageScheme {
    LieMean,
    LieMedian,
    Medoid,
}

/// Iteration limits for the intrinsic means. Defaults: tol = 1e-10,
/// max_iter = 100.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AveragingConfig {
    pub scheme: PoseAverageScheme,
    pub max_iter: usize,
    pub tol: f64,
}

impl Default for AveragingConfig {
    fn default() -> Self {
        AveragingConfig {
            scheme: PoseAverageScheme::Karcher,
            max_iter: 100,
            tol: 1e-10,
        }
    }
}

/// An averaged value plus convergence diagnostics. Iterative schemes that
/// hit max_iter return their best iterate with `converged = false`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanResult<T> {
    pub value: T,
    pub converged: bool,
    pub iterations: usize,
    /// Members excluded because the anchor logarithm failed (homography
    /// schemes only).
    pub excluded: usize,
}

impl<T> MeanResult<T> {
    fn exact(value: T) -> Self {
        MeanResult {
            value,
            converged: true,
            iterations: 0,
            excluded: 0,
        }
    }
}

// ── SE(3) ────────────────────────────────────────────────────────────────

/// Karcher (Fréchet) mean: iteratively refines the intrinsic mean,
/// initialized at the medoid so the result is order-independent.
///
/// Iteration: μ ← μ·exp(mean of log(μ⁻¹Tᵢ)) until the mean twist norm drops
/// below `tol`.
pub fn karcher_mean_se3(
    poses: &[Pose],
    max_iter: usize,
    tol: f64,
) -> Result<MeanResult<Pose>, AverageError> {
    if poses.is_empty() {
        return Err(AverageError::EmptyInput);
    }
    let seed = cluster::medoid(poses, &PoseMetric::LieLog { lambda: 1.0 })
        .map_err(|_| AverageError::EmptyInput)?;
    let mut mu = poses[seed];
    for iter in 1..=max_iter {
        let mu_inv = mu.inverse();
        let mut acc = Twist::zero();
        for t in poses {
            acc = acc + se3::log(&mu_inv.compose(t));
        }
        let step = acc.scaled(1.0 / poses.len() as f64);
        mu = mu.compose(&se3::exp(&step));
        if step.norm() < tol {
            return Ok(MeanResult {
                value: mu,
                converged: true,
                iterations: iter,
                excluded: 0,
            });
        }
    }
    Ok(MeanResult {
        value: mu,
        converged: false,
        iterations: max_iter,
        excluded: 0,
    })
}

/// Log-Euclidean mean: exponential of the arithmetic mean of pose
/// logarithms. Single pass; requires all rotation angles below π.
pub fn log_euclidean_mean_se3(poses: &[Pose]) -> Result<Pose, AverageError> {
    if poses.is_empty() {
        return Err(AverageError::EmptyInput);
    }
    let mut acc = Twist::zero();
    for t in poses {
        acc = acc + se3::log(t);
    }
    Ok(se3::exp(&acc.scaled(1.0 / poses.len() as f64)))
}

/// Split mean: arithmetic translation mean and chordal (SVD-projected)
/// rotation mean. Errors when the rotation inputs are antipodal enough that
/// the arithmetic matrix mean loses rank.
pub fn split_mean_se3(poses: &[Pose]) -> Result<Pose, AverageError> {
    if poses.is_empty() {
        return Err(AverageError::EmptyInput);
    }
    let n = poses.len() as f64;
    let t_mean = poses
        .iter()
        .map(|p| p.translation)
        .sum::<nalgebra::Vector3<f64>>()
        / n;
    let m_mean = poses
        .iter()
        .map(|p| *p.rotation.matrix())
        .sum::<Matrix3<f64>>()
        / n;
    let sv = m_mean.svd(false, false).singular_values;
    if sv[1] < 1e-9 && sv[2] < 1e-9 {
        return Err(AverageError::DegenerateRotationMean);
    }
    let r = Rotation::project(&m_mean).map_err(|_| AverageError::DegenerateRotationMean)?;
    Ok(Pose::new(r, t_mean))
}

/// Dispatch an SE(3) averaging scheme over a pose set.
pub fn average_poses(
    poses: &[Pose],
    cfg: &AveragingConfig,
) -> Result<MeanResult<Pose>, AverageError> {
    match cfg.scheme {
        PoseAverageScheme::Karcher => karcher_mean_se3(poses, cfg.max_iter, cfg.tol),
        PoseAverageScheme::LogEuclidean => log_euclidean_mean_se3(poses).map(MeanResult::exact),
        PoseAverageScheme::Split => split_mean_se3(poses).map(MeanResult::exact),
        PoseAverageScheme::Medoid => {
            let i = cluster::medoid(poses, &PoseMetric::LieLog { lambda: 1.0 })
                .map_err(|_| AverageError::EmptyInput)?;
            Ok(MeanResult::exact(poses[i]))
        }
    }
}

// ── Homographies ─────────────────────────────────────────────────────────

fn unit_det(h: &Homography) -> Result<Homography, AverageError> {
    h.renormalized(NormalizationMode::UnitDeterminant)
        .map_err(|_| AverageError::NoUsableMembers)
}

/// Logs of anchor⁻¹·Hᵢ for all members inside the log domain; out-of-domain
/// members are skipped and counted.
fn anchored_logs(
    anchor: &Homography,
    hs: &[Homography],
) -> Result<(Vec<Matrix3<f64>>, usize), AverageError> {
    let anchor_inv = anchor
        .matrix()
        .try_inverse()
        .ok_or(AverageError::NoUsableMembers)?;
    let mut logs = Vec::with_capacity(hs.len());
    let mut excluded = 0;
    for h in hs {
        match gl3::log(&(anchor_inv * h.matrix())) {
            Ok(l) => logs.push(l),
            Err(_) => excluded += 1,
        }
    }
    if logs.is_empty() {
        return Err(AverageError::NoUsableMembers);
    }
    Ok((logs, excluded))
}

/// Intrinsic (Karcher-style) mean on the projective group, anchored at the
/// medoid and iterated to a fixed point.
pub fn lie_mean_homography(
    hs: &[Homography],
    max_iter: usize,
    tol: f64,
) -> Result<MeanResult<Homography>, AverageError> {
    if hs.is_empty() {
        return Err(AverageError::EmptyInput);
    }
    let normalized: Vec<Homography> =
        hs.iter().map(unit_det).collect::<Result<_, _>>()?;
    let seed = cluster::medoid(&normalized, &HomographyMetric(HomographyMetricKind::LieAlgebra))
        .map_err(|_| AverageError::EmptyInput)?;
    let mut mu = normalized[seed];
    let mut excluded = 0;
    for iter in 1..=max_iter {
        let (logs, skipped) = anchored_logs(&mu, &normalized)?;
        excluded = skipped;
        let mean_log = logs.iter().sum::<Matrix3<f64>>() / logs.len() as f64;
        mu = Homography::new(
            mu.matrix() * gl3::exp(&mean_log),
            NormalizationMode::UnitDeterminant,
        )
        .map_err(|_| AverageError::NoUsableMembers)?;
        if mean_log.norm() < tol {
            return Ok(MeanResult {
                value: mu,
                converged: true,
                iterations: iter,
                excluded,
            });
        }
    }
    Ok(MeanResult {
        value: mu,
        converged: false,
        iterations: max_iter,
        excluded,
    })
}

/// Weiszfeld geometric median on the Lie algebra, re-anchoring the tangent
/// space at every iterate and halving any step that would increase the
/// Σ-distance objective, so the objective is non-increasing throughout.
pub fn lie_median_homography(
    hs: &[Homography],
    max_iter: usize,
    tol: f64,
) -> Result<MeanResult<Homography>, AverageError> {
    lie_median_homography_traced(hs, max_iter, tol).map(|(res, _)| res)
}

/// [`lie_median_homography`] plus the per-iteration Σ-distance objective
/// values (starting at the medoid anchor), for monotonicity checks.
pub fn lie_median_homography_traced(
    hs: &[Homography],
    max_iter: usize,
    tol: f64,
) -> Result<(MeanResult<Homography>, Vec<f64>), AverageError> {
    if hs.is_empty() {
        return Err(AverageError::EmptyInput);
    }
    let normalized: Vec<Homography> =
        hs.iter().map(unit_det).collect::<Result<_, _>>()?;
    let seed = cluster::medoid(&normalized, &HomographyMetric(HomographyMetricKind::LieAlgebra))
        .map_err(|_| AverageError::EmptyInput)?;
    let mut mu = normalized[seed];

    let objective = |logs: &[Matrix3<f64>]| -> f64 { logs.iter().map(|l| l.norm()).sum() };
    let (mut logs, mut excluded) = anchored_logs(&mu, &normalized)?;
    let mut obj = objective(&logs);
    let mut trace = vec![obj];

    for iter in 1..=max_iter {
        // Weiszfeld step in the current tangent space, weights 1/max(d, ε).
        let mut num = Matrix3::zeros();
        let mut den = 0.0;
        for l in &logs {
            let w = 1.0 / l.norm().max(1e-12);
            num += l * w;
            den += w;
        }
        let mut step = num / den;
        let mut accepted = false;
        for _ in 0..30 {
            let candidate = Homography::new(
                mu.matrix() * gl3::exp(&step),
                NormalizationMode::UnitDeterminant,
            )
            .map_err(|_| AverageError::NoUsableMembers)?;
            let (cand_logs, cand_excluded) = anchored_logs(&candidate, &normalized)?;
            let cand_obj = objective(&cand_logs);
            if cand_obj <= obj + 1e-12 {
                mu = candidate;
                logs = cand_logs;
                excluded = cand_excluded;
                let step_norm = step.norm();
                obj = cand_obj;
                trace.push(obj);
                if step_norm < tol {
                    return Ok((
                        MeanResult {
                            value: mu,
                            converged: true,
                            iterations: iter,
                            excluded,
                        },
                        trace,
                    ));
                }
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            // No descent direction left: already at the minimizer.
            return Ok((
                MeanResult {
                    value: mu,
                    converged: true,
                    iterations: iter,
                    excluded,
                },
                trace,
            ));
        }
    }
    Ok((
        MeanResult {
            value: mu,
            converged: false,
            iterations: max_iter,
            excluded,
        },
        trace,
    ))
}

/// Dispatch a homography center scheme over a candidate set.
pub fn average_homographies(
    hs: &[Homography],
    scheme: HomographyAverageScheme,
    max_iter: usize,
    tol: f64,
) -> Result<MeanResult<Homography>, AverageError> {
    match scheme {
        HomographyAverageScheme::LieMean => lie_mean_homography(hs, max_iter, tol),
        HomographyAverageScheme::LieMedian => lie_median_homography(hs, max_iter, tol),
        HomographyAverageScheme::Medoid => {
            if hs.is_empty() {
                return Err(AverageError::EmptyInput);
            }
            let i = cluster::medoid(hs, &HomographyMetric(HomographyMetricKind::LieAlgebra))
                .map_err(|_| AverageError::EmptyInput)?;
            Ok(MeanResult::exact(hs[i]))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::so3;
    use crate::metrics::{homography_lie_distance, lie_log_distance};
    use approx::assert_relative_eq;
    use nalgebra::Vector3;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_pose(rng: &mut impl Rng, t_scale: f64, r_scale: f64) -> Pose {
        Pose::new(
            so3::exp(&(Vector3::new(
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            ) * r_scale)),
            Vector3::new(
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            ) * t_scale,
        )
    }

    fn random_twist(rng: &mut impl Rng, scale: f64) -> Twist {
        Twist::new(
            Vector3::new(
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            ) * scale,
            Vector3::new(
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            ) * scale,
        )
    }

    #[test]
    fn all_schemes_are_idempotent_on_constant_lists() {
        let t = random_pose(&mut ChaCha8Rng::seed_from_u64(1), 1.0, 1.0);
        let poses = vec![t; 7];
        for scheme in [
            PoseAverageScheme::Karcher,
            PoseAverageScheme::LogEuclidean,
            PoseAverageScheme::Split,
            PoseAverageScheme::Medoid,
        ] {
            let cfg = AveragingConfig {
                scheme,
                ..Default::default()
            };
            let mean = average_poses(&poses, &cfg).unwrap().value;
            assert!(
                lie_log_distance(&mean, &t, 1.0) < 1e-10,
                "{scheme:?} not idempotent"
            );
        }
    }

    #[test]
    fn karcher_two_point_mean_is_geodesic_midpoint() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let t1 = random_pose(&mut rng, 1.0, 0.8);
        let t2 = t1.compose(&se3::exp(&random_twist(&mut rng, 0.5)));
        let mean = karcher_mean_se3(&[t1, t2], 100, 1e-12).unwrap();
        assert!(mean.converged);
        let half = se3::log(&t1.inverse().compose(&mean.value));
        let full = se3::log(&t1.inverse().compose(&t2));
        assert_relative_eq!(half.rho, full.rho * 0.5, epsilon = 1e-8);
        assert_relative_eq!(half.phi, full.phi * 0.5, epsilon = 1e-8);
    }

    #[test]
    fn karcher_mean_recovers_monte_carlo_center() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let t_star = random_pose(&mut rng, 1.0, 1.0);
        let spread = 0.2;
        let poses: Vec<Pose> = (0..100)
            .map(|_| t_star.compose(&se3::exp(&random_twist(&mut rng, spread))))
            .collect();
        let mean = karcher_mean_se3(&poses, 100, 1e-12).unwrap().value;
        // Sample standard error of the tangent coordinates ~ spread/√n up
        // to the twist-norm factor; 3× covers it comfortably.
        let se = spread * (2.0f64).sqrt() / (100f64).sqrt();
        assert!(lie_log_distance(&mean, &t_star, 1.0) < 3.0 * se);
    }

    #[test]
    fn karcher_is_fixed_point() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let poses: Vec<Pose> = (0..20)
            .map(|_| random_pose(&mut rng, 0.3, 0.3))
            .collect();
        let mean = karcher_mean_se3(&poses, 200, 1e-12).unwrap();
        assert!(mean.converged);
        let mu_inv = mean.value.inverse();
        let mut acc = Twist::zero();
        for t in &poses {
            acc = acc + se3::log(&mu_inv.compose(t));
        }
        assert!(acc.scaled(1.0 / poses.len() as f64).norm() < 1e-10);
    }

    #[test]
    fn log_euclidean_symmetric_pair_gives_identity() {
        let xi = Twist::new(Vector3::new(0.4, -0.1, 0.2), Vector3::new(0.1, 0.3, -0.2));
        let poses = vec![se3::exp(&xi), se3::exp(&xi.scaled(-1.0))];
        let mean = log_euclidean_mean_se3(&poses).unwrap();
        assert!(lie_log_distance(&mean, &Pose::identity(), 1.0) < 1e-10);
    }

    #[test]
    fn log_euclidean_tracks_karcher_on_tight_clusters() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let t_star = random_pose(&mut rng, 1.0, 1.0);
        let poses: Vec<Pose> = (0..40)
            .map(|_| t_star.compose(&se3::exp(&random_twist(&mut rng, 0.1))))
            .collect();
        let le = log_euclidean_mean_se3(&poses).unwrap();
        let ka = karcher_mean_se3(&poses, 100, 1e-12).unwrap().value;
        assert!(lie_log_distance(&le, &ka, 1.0) < 1e-3);
    }

    #[test]
    fn split_mean_cancels_symmetric_inputs() {
        let theta = 0.6;
        let poses = vec![
            Pose::new(
                so3::exp(&Vector3::new(0.0, 0.0, theta)),
                Vector3::new(1.0, 0.0, 0.0),
            ),
            Pose::new(
                so3::exp(&Vector3::new(0.0, 0.0, -theta)),
                Vector3::new(-1.0, 0.0, 0.0),
            ),
        ];
        let mean = split_mean_se3(&poses).unwrap();
        assert!(lie_log_distance(&mean, &Pose::identity(), 1.0) < 1e-12);
    }

    #[test]
    fn split_mean_tracks_karcher_on_tight_clusters() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let t_star = random_pose(&mut rng, 1.0, 1.0);
        let poses: Vec<Pose> = (0..40)
            .map(|_| t_star.compose(&se3::exp(&random_twist(&mut rng, 0.1))))
            .collect();
        let sp = split_mean_se3(&poses).unwrap();
        let ka = karcher_mean_se3(&poses, 100, 1e-12).unwrap().value;
        assert!(lie_log_distance(&sp, &ka, 1.0) < 1e-3);
    }

    #[test]
    fn split_mean_rejects_antipodal_rotations() {
        use std::f64::consts::PI;
        let poses = vec![
            Pose::new(so3::exp(&Vector3::new(PI, 0.0, 0.0)), Vector3::zeros()),
            Pose::new(so3::exp(&Vector3::new(0.0, PI, 0.0)), Vector3::zeros()),
            Pose::new(so3::exp(&Vector3::new(0.0, 0.0, PI)), Vector3::zeros()),
            Pose::identity(),
        ];
        assert_eq!(
            split_mean_se3(&poses),
            Err(AverageError::DegenerateRotationMean)
        );
    }

    #[test]
    fn karcher_mean_is_left_equivariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let poses: Vec<Pose> = (0..15)
            .map(|_| random_pose(&mut rng, 0.4, 0.4))
            .collect();
        let g = random_pose(&mut rng, 2.0, 1.5);
        let moved: Vec<Pose> = poses.iter().map(|t| g.compose(t)).collect();
        let m1 = g.compose(&karcher_mean_se3(&poses, 200, 1e-12).unwrap().value);
        let m2 = karcher_mean_se3(&moved, 200, 1e-12).unwrap().value;
        assert!(lie_log_distance(&m1, &m2, 1.0) < 1e-8);
    }

    #[test]
    fn log_euclidean_left_equivariant_on_tight_clusters() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let poses: Vec<Pose> = (0..15)
            .map(|_| se3::exp(&random_twist(&mut rng, 0.05)))
            .collect();
        let g = se3::exp(&random_twist(&mut rng, 0.05));
        let moved: Vec<Pose> = poses.iter().map(|t| g.compose(t)).collect();
        let m1 = g.compose(&log_euclidean_mean_se3(&poses).unwrap());
        let m2 = log_euclidean_mean_se3(&moved).unwrap();
        assert!(lie_log_distance(&m1, &m2, 1.0) < 1e-4);
    }

    #[test]
    fn schemes_agree_on_tight_clusters() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let t_star = random_pose(&mut rng, 1.0, 1.0);
        let poses: Vec<Pose> = (0..30)
            .map(|_| t_star.compose(&se3::exp(&random_twist(&mut rng, 0.05))))
            .collect();
        let ka = karcher_mean_se3(&poses, 100, 1e-12).unwrap().value;
        let le = log_euclidean_mean_se3(&poses).unwrap();
        let sp = split_mean_se3(&poses).unwrap();
        assert!(lie_log_distance(&ka, &le, 1.0) < 1e-3);
        assert!(lie_log_distance(&ka, &sp, 1.0) < 1e-3);
    }

    fn near_identity_homography(rng: &mut impl Rng, scale: f64) -> Homography {
        let a = Matrix3::from_fn(|_, _| rng.random_range(-scale..scale));
        Homography::new(gl3::exp(&a), NormalizationMode::UnitDeterminant).unwrap()
    }

    #[test]
    fn lie_mean_of_constant_list_is_that_homography() {
        let h = near_identity_homography(&mut ChaCha8Rng::seed_from_u64(10), 0.3);
        let res = lie_mean_homography(&vec![h; 5], 100, 1e-12).unwrap();
        assert!(homography_lie_distance(&res.value, &h).unwrap() < 1e-10);
    }

    #[test]
    fn lie_mean_of_inverse_pair_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let h = near_identity_homography(&mut rng, 0.1);
        let hinv = h.inverse().unwrap();
        let res = lie_mean_homography(&[h, hinv], 100, 1e-12).unwrap();
        let id = Homography::identity(NormalizationMode::UnitDeterminant);
        assert!(homography_lie_distance(&res.value, &id).unwrap() < 1e-8);
    }

    #[test]
    fn lie_mean_recovers_planted_center() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let h_star = near_identity_homography(&mut rng, 0.4);
        let spread = 0.05;
        let hs: Vec<Homography> = (0..50)
            .map(|_| {
                let noise = Matrix3::from_fn(|_, _| rng.random_range(-spread..spread));
                Homography::new(
                    h_star.matrix() * gl3::exp(&noise),
                    NormalizationMode::UnitDeterminant,
                )
                .unwrap()
            })
            .collect();
        let res = lie_mean_homography(&hs, 100, 1e-12).unwrap();
        let se = spread * 3.0 / (50f64).sqrt();
        assert!(homography_lie_distance(&res.value, &h_star).unwrap() < 3.0 * se);
    }

    #[test]
    fn lie_median_of_constant_list_is_that_homography() {
        let h = near_identity_homography(&mut ChaCha8Rng::seed_from_u64(13), 0.3);
        let res = lie_median_homography(&vec![h; 5], 100, 1e-12).unwrap();
        assert!(homography_lie_distance(&res.value, &h).unwrap() < 1e-10);
    }

    #[test]
    fn lie_median_ignores_a_moving_outlier() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let base = near_identity_homography(&mut rng, 0.05);
        let twin = Homography::new(
            base.matrix() * gl3::exp(&(Matrix3::from_fn(|_, _| rng.random_range(-1.0..1.0)) * 1e-4)),
            NormalizationMode::UnitDeterminant,
        )
        .unwrap();
        let outlier_dir = Matrix3::from_fn(|_, _| rng.random_range(-1.0..1.0)) * 0.3;
        let far = Homography::new(gl3::exp(&outlier_dir), NormalizationMode::UnitDeterminant)
            .unwrap();
        let farther = Homography::new(
            gl3::exp(&(outlier_dir * 2.0)),
            NormalizationMode::UnitDeterminant,
        )
        .unwrap();
        let m1 = lie_median_homography(&[base, twin, far], 200, 1e-12)
            .unwrap()
            .value;
        let m2 = lie_median_homography(&[base, twin, farther], 200, 1e-12)
            .unwrap()
            .value;
        assert!(homography_lie_distance(&m1, &base).unwrap() < 1e-3);
        assert!(homography_lie_distance(&m1, &m2).unwrap() < 1e-6);
    }

    #[test]
    fn lie_median_objective_beats_medoid() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let hs: Vec<Homography> = (0..50)
            .map(|_| near_identity_homography(&mut rng, 0.15))
            .collect();
        let median = lie_median_homography(&hs, 300, 1e-12).unwrap().value;
        let medoid_idx =
            cluster::medoid(&hs, &HomographyMetric(HomographyMetricKind::LieAlgebra)).unwrap();
        let obj = |center: &Homography| -> f64 {
            hs.iter()
                .map(|h| homography_lie_distance(center, h).unwrap())
                .sum()
        };
        assert!(obj(&median) <= obj(&hs[medoid_idx]) + 1e-9);
    }

    #[test]
    fn weiszfeld_objective_is_monotone() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        for _ in 0..10 {
            let hs: Vec<Homography> = (0..20)
                .map(|_| near_identity_homography(&mut rng, 0.2))
                .collect();
            let (res, trace) = lie_median_homography_traced(&hs, 500, 1e-9).unwrap();
            assert!(res.converged);
            for w in trace.windows(2) {
                assert!(w[1] <= w[0] + 1e-12, "objective increased: {} → {}", w[0], w[1]);
            }
        }
    }
}
