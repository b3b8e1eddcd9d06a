//! Rigid point alignment and landmark candidate enumeration.

use nalgebra::{Matrix3, Vector3};
use rand::seq::index::sample as sample_indices;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::geom::{Pose, Rotation};

use super::{Landmark, LandmarkMap, PoseCandidate, SolverError};

/// Closed-form least-squares rigid alignment (Kabsch): returns the pose `T`
/// minimizing Σ‖T·srcᵢ − dstᵢ‖².
///
/// Centroid subtraction, cross-covariance SVD, determinant-corrected
/// rotation (never a reflection), then `t = c_dst − R·c_src`. Errors when
/// the source points are collinear: the two smallest singular values of the
/// cross-covariance vanish and rotation about the line is unobservable.
pub fn svd_align(src: &[Vector3<f64>], dst: &[Vector3<f64>]) -> Result<Pose, SolverError> {
    if src.len() < 3 || src.len() != dst.len() {
        return Err(SolverError::TooFewObservations {
            needed: 3,
            got: src.len().min(dst.len()),
        });
    }
    let n = src.len() as f64;
    let c_src: Vector3<f64> = src.iter().sum::<Vector3<f64>>() / n;
    let c_dst: Vector3<f64> = dst.iter().sum::<Vector3<f64>>() / n;

    let mut cov = Matrix3::zeros();
    for (s, d) in src.iter().zip(dst) {
        cov += (s - c_src) * (d - c_dst).transpose();
    }

    let svd = cov.svd(true, true);
    let sv = &svd.singular_values;
    // Relative gap: σ₂ and σ₃ both negligible means collinear input.
    if sv[1] < 1e-9 * sv[0].max(f64::MIN_POSITIVE) && sv[2] < 1e-9 * sv[0].max(f64::MIN_POSITIVE)
    {
        return Err(SolverError::DegenerateConfiguration(
            "collinear points: rotation about the line is unobservable",
        ));
    }
    let (u, v_t) = match (svd.u, svd.v_t) {
        (Some(u), Some(v_t)) => (u, v_t),
        _ => return Err(SolverError::DegenerateConfiguration("SVD failed")),
    };
    // cov = U Σ Vᵀ; R = V·diag(1,1,det(VUᵀ))·Uᵀ maps src onto dst.
    let v = v_t.transpose();
    let mut d = Matrix3::identity();
    if (v * u.transpose()).determinant() < 0.0 {
        d[(2, 2)] = -1.0;
    }
    let r = Rotation::from_matrix_unchecked(v * d * u.transpose());
    let t = c_dst - r.apply(&c_src);
    Ok(Pose::new(r, t))
}

fn alignment_rms(pose: &Pose, src: &[Vector3<f64>], dst: &[Vector3<f64>]) -> f64 {
    let sum: f64 = src
        .iter()
        .zip(dst)
        .map(|(s, d)| (pose.apply(s) - d).norm_squared())
        .sum();
    (sum / src.len() as f64).sqrt()
}

/// Enumerate candidate poses from labeled landmark observations.
///
/// For every observation triplet {i<j<k} and every class-consistent ordered
/// assignment to distinct map landmarks, aligns the observed triplet onto
/// the assigned map triplet with [`svd_align`] and emits a
/// [`PoseCandidate`]. Degenerate triplets are skipped. When the number of
/// (triplet, assignment) pairs exceeds `max_candidates`, a uniform seeded
/// subsample is solved instead; the subsample is chosen before solving, in
/// ascending enumeration order, so results are reproducible.
pub fn enumerate_pose_candidates(
    observations: &[Landmark],
    map: &LandmarkMap,
    max_candidates: usize,
    seed: u64,
) -> Result<Vec<PoseCandidate>, SolverError> {
    if observations.len() < 3 {
        return Err(SolverError::TooFewObservations {
            needed: 3,
            got: observations.len(),
        });
    }

    // Per-observation candidate map indices by label.
    let label_matches: Vec<Vec<usize>> = observations
        .iter()
        .map(|o| map.indices_with_label(&o.class_label))
        .collect();

    // Enumerate assignments index-only first; SVD work happens after the cap.
    let mut assignments: Vec<([usize; 3], [usize; 3])> = Vec::new();
    let n = observations.len();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                for &a in &label_matches[i] {
                    for &b in &label_matches[j] {
                        if b == a {
                            continue;
                        }
                        for &c in &label_matches[k] {
                            if c == a || c == b {
                                continue;
                            }
                            assignments.push(([i, j, k], [a, b, c]));
                        }
                    }
                }
            }
        }
    }

    if assignments.len() > max_candidates {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut chosen = sample_indices(&mut rng, assignments.len(), max_candidates).into_vec();
        chosen.sort_unstable();
        assignments = chosen.into_iter().map(|i| assignments[i]).collect();
    }

    let mut out = Vec::with_capacity(assignments.len());
    for (obs_idx, map_idx) in assignments {
        let src: Vec<_> = obs_idx.iter().map(|&i| observations[i].position).collect();
        let dst: Vec<_> = map_idx.iter().map(|&i| map.landmarks[i].position).collect();
        match svd_align(&src, &dst) {
            Ok(pose) => out.push(PoseCandidate {
                residual: alignment_rms(&pose, &src, &dst),
                pose,
                observation_indices: obs_idx,
                map_indices: map_idx,
            }),
            Err(SolverError::DegenerateConfiguration(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}
