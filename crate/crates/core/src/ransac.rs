//! Classical fixed-budget RANSAC baselines and the shared evaluation
//! metrics (symmetric reprojection error, inlier ratio).
//!
//! The homography variant runs DLT on seeded 4-subsets for exactly the
//! configured number of iterations — degenerate draws count against the
//! budget and there is no early exit, so comparisons against the clustering
//! route happen under an identical sampling budget. A 3D variant reuses the
//! same protocol with triplet alignment as the minimal solver.

use rand::seq::index::sample as sample_indices;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{Homography, Pose};
use crate::solvers::{dlt_homography, svd_align, Landmark, LandmarkMap, Match2D};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RansacError {
    #[error("need at least {needed} correspondences, got {got}")]
    TooFewMatches { needed: usize, got: usize },
    #[error("every sampled minimal subset was degenerate")]
    NoValidHypothesis,
}

/// Fixed-budget RANSAC parameters. Defaults: 1000 iterations, 2 px inlier
/// threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RansacConfig {
    pub iterations: usize,
    /// Inlier threshold on the per-match symmetric reprojection error, px.
    pub threshold_px: f64,
    pub seed: u64,
}

impl Default for RansacConfig {
    fn default() -> Self {
        RansacConfig {
            iterations: 1000,
            threshold_px: 2.0,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RansacResult {
    pub homography: Homography,
    /// Sorted, unique indices of matches within the threshold of the final
    /// (refined) homography.
    pub inlier_indices: Vec<usize>,
    /// Sampling attempts consumed — always equals the configured budget.
    pub iterations_used: usize,
}

/// Per-match symmetric reprojection error and its mean.
///
/// Each match scores ½(‖q − π(H·p)‖ + ‖p − π(H⁻¹·q)‖); a point mapped onto
/// the line at infinity (|w| < 1e-12) scores +∞, which propagates into the
/// mean as a visible sentinel rather than being silently dropped.
pub fn symmetric_reprojection_error(h: &Homography, matches: &[Match2D]) -> (Vec<f64>, f64) {
    let h_inv = h.matrix().try_inverse();
    let per_match: Vec<f64> = matches
        .iter()
        .map(|m| {
            let forward = h.apply(&m.p).map(|q| (q - m.q).norm());
            let backward = h_inv.and_then(|inv| {
                let v = inv * nalgebra::Vector3::new(m.q.x, m.q.y, 1.0);
                if v.z.abs() < 1e-12 {
                    None
                } else {
                    Some((nalgebra::Vector2::new(v.x / v.z, v.y / v.z) - m.p).norm())
                }
            });
            match (forward, backward) {
                (Some(f), Some(b)) => 0.5 * (f + b),
                _ => f64::INFINITY,
            }
        })
        .collect();
    let mean = per_match.iter().sum::<f64>() / per_match.len().max(1) as f64;
    (per_match, mean)
}

/// Fraction of matches that are inliers.
pub fn inlier_ratio(inlier_count: usize, total: usize) -> f64 {
    inlier_count as f64 / total as f64
}

fn inliers_of(h: &Homography, matches: &[Match2D], threshold: f64) -> (Vec<usize>, f64) {
    let (per_match, _) = symmetric_reprojection_error(h, matches);
    let inliers: Vec<usize> = (0..matches.len())
        .filter(|&i| per_match[i] <= threshold)
        .collect();
    let mean_inlier_sre = if inliers.is_empty() {
        f64::INFINITY
    } else {
        inliers.iter().map(|&i| per_match[i]).sum::<f64>() / inliers.len() as f64
    };
    (inliers, mean_inlier_sre)
}

/// Outcome of [`refine_homography`].
#[derive(Debug, Clone, PartialEq)]
pub struct RefineResult {
    pub homography: Homography,
    /// False when the refit was rejected (no inliers, degenerate refit, or
    /// the refit raised the mean inlier error) and the input was returned.
    pub improved: bool,
}

/// Guarded inlier re-estimation: refit DLT on the inliers of `h` and keep
/// the result only if it does not raise the mean error over that same
/// inlier set (comparing on a common set keeps the guard meaningful when
/// the refit captures additional threshold-edge inliers).
pub fn refine_homography(h: &Homography, matches: &[Match2D], threshold: f64) -> RefineResult {
    let (inliers, current_sre) = inliers_of(h, matches, threshold);
    if inliers.len() < 4 {
        return RefineResult {
            homography: *h,
            improved: false,
        };
    }
    let subset: Vec<Match2D> = inliers.iter().map(|&i| matches[i]).collect();
    match dlt_homography(&subset) {
        Ok(refit) => {
            let (_, refit_sre) = symmetric_reprojection_error(&refit, &subset);
            if refit_sre <= current_sre {
                RefineResult {
                    homography: refit,
                    improved: true,
                }
            } else {
                RefineResult {
                    homography: *h,
                    improved: false,
                }
            }
        }
        Err(_) => RefineResult {
            homography: *h,
            improved: false,
        },
    }
}

/// DLT+RANSAC with a fixed iteration budget.
///
/// Exactly `cfg.iterations` seeded 4-subsets are drawn; degenerate draws
/// burn budget. The best hypothesis (most inliers, ties by lower mean
/// inlier error, then lower hypothesis index) is refined on its inlier set
/// with the guard of [`refine_homography`], and the inliers are recomputed
/// once against the final estimate.
pub fn ransac_homography(
    matches: &[Match2D],
    cfg: &RansacConfig,
) -> Result<RansacResult, RansacError> {
    if matches.len() < 4 {
        return Err(RansacError::TooFewMatches {
            needed: 4,
            got: matches.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut best: Option<(Homography, usize, f64)> = None;
    for _ in 0..cfg.iterations {
        let idx = sample_indices(&mut rng, matches.len(), 4).into_vec();
        let subset: Vec<Match2D> = idx.iter().map(|&i| matches[i]).collect();
        let Ok(h) = dlt_homography(&subset) else {
            continue;
        };
        let (inliers, mean_sre) = inliers_of(&h, matches, cfg.threshold_px);
        let better = match &best {
            None => true,
            Some((_, n, sre)) => {
                inliers.len() > *n || (inliers.len() == *n && mean_sre < *sre)
            }
        };
        if better {
            best = Some((h, inliers.len(), mean_sre));
        }
    }
    let (hypothesis, _, _) = best.ok_or(RansacError::NoValidHypothesis)?;
    let final_h = refine_homography(&hypothesis, matches, cfg.threshold_px).homography;
    let (inlier_indices, _) = inliers_of(&final_h, matches, cfg.threshold_px);
    Ok(RansacResult {
        homography: final_h,
        inlier_indices,
        iterations_used: cfg.iterations,
    })
}

// ── 3D baseline ──────────────────────────────────────────────────────────

#[derive(Debug, Clone, PartialEq)]
pub struct RansacPoseResult {
    pub pose: Pose,
    pub inlier_indices: Vec<usize>,
    pub iterations_used: usize,
}

/// Residual of one observation under a pose hypothesis: distance from the
/// transformed observation to the nearest map landmark with the same label.
fn landmark_residual(pose: &Pose, obs: &Landmark, map: &LandmarkMap) -> f64 {
    let transformed = pose.apply(&obs.position);
    map.landmarks
        .iter()
        .filter(|l| l.class_label == obs.class_label)
        .map(|l| (l.position - transformed).norm())
        .fold(f64::INFINITY, f64::min)
}

fn pose_inliers(
    pose: &Pose,
    observations: &[Landmark],
    map: &LandmarkMap,
    threshold: f64,
) -> (Vec<usize>, f64) {
    let residuals: Vec<f64> = observations
        .iter()
        .map(|o| landmark_residual(pose, o, map))
        .collect();
    let inliers: Vec<usize> = (0..observations.len())
        .filter(|&i| residuals[i] <= threshold)
        .collect();
    let mean = if inliers.is_empty() {
        f64::INFINITY
    } else {
        inliers.iter().map(|&i| residuals[i]).sum::<f64>() / inliers.len() as f64
    };
    (inliers, mean)
}

/// Fixed-budget RANSAC over landmark observations: seeded observation
/// triplets with a random class-consistent map assignment per draw, scored
/// by nearest-same-label residuals, with a guarded re-alignment on the
/// final inlier set.
pub fn ransac_pose(
    observations: &[Landmark],
    map: &LandmarkMap,
    iterations: usize,
    threshold: f64,
    seed: u64,
) -> Result<RansacPoseResult, RansacError> {
    if observations.len() < 3 {
        return Err(RansacError::TooFewMatches {
            needed: 3,
            got: observations.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(Pose, usize, f64)> = None;
    for _ in 0..iterations {
        let idx = sample_indices(&mut rng, observations.len(), 3).into_vec();
        // Random class-consistent assignment for the drawn triplet.
        let mut chosen = [usize::MAX; 3];
        let mut ok = true;
        for (slot, &oi) in idx.iter().enumerate() {
            let pool: Vec<usize> = map
                .indices_with_label(&observations[oi].class_label)
                .into_iter()
                .filter(|mi| !chosen[..slot].contains(mi))
                .collect();
            if pool.is_empty() {
                ok = false;
                break;
            }
            chosen[slot] = pool[rng.random_range(0..pool.len())];
        }
        if !ok {
            continue;
        }
        let src: Vec<_> = idx.iter().map(|&i| observations[i].position).collect();
        let dst: Vec<_> = chosen
            .iter()
            .map(|&i| map.landmarks[i].position)
            .collect();
        let Ok(pose) = svd_align(&src, &dst) else {
            continue;
        };
        let (inliers, mean) = pose_inliers(&pose, observations, map, threshold);
        let better = match &best {
            None => true,
            Some((_, n, m)) => inliers.len() > *n || (inliers.len() == *n && mean < *m),
        };
        if better {
            best = Some((pose, inliers.len(), mean));
        }
    }
    let (hypothesis, _, hyp_mean) = best.ok_or(RansacError::NoValidHypothesis)?;

    // Guarded refinement: re-align on the inliers matched to their nearest
    // same-label landmarks.
    let (inliers, _) = pose_inliers(&hypothesis, observations, map, threshold);
    let mut final_pose = hypothesis;
    if inliers.len() >= 3 {
        let src: Vec<_> = inliers.iter().map(|&i| observations[i].position).collect();
        let dst: Vec<_> = inliers
            .iter()
            .map(|&i| {
                let transformed = hypothesis.apply(&observations[i].position);
                map.landmarks
                    .iter()
                    .filter(|l| l.class_label == observations[i].class_label)
                    .min_by(|a, b| {
                        (a.position - transformed)
                            .norm()
                            .partial_cmp(&(b.position - transformed).norm())
                            .unwrap()
                    })
                    .unwrap()
                    .position
            })
            .collect();
        if let Ok(refit) = svd_align(&src, &dst) {
            let (_, refit_mean) = pose_inliers(&refit, observations, map, threshold);
            if refit_mean <= hyp_mean {
                final_pose = refit;
            }
        }
    }
    let (inlier_indices, _) = pose_inliers(&final_pose, observations, map, threshold);
    Ok(RansacPoseResult {
        pose: final_pose,
        inlier_indices,
        iterations_used: iterations,
    })
}
