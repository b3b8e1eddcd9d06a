//! Seeded synthetic scene and match generators with planted ground truth.

use clap_core::geom::{gl3, Homography, NormalizationMode, Pose, Rotation};
use clap_core::solvers::{Landmark, LandmarkMap, Match2D};
use nalgebra::{Matrix3, Vector2, Vector3};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

/// Parameters for a synthetic 3D localization scene.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSceneParams {
    pub n_landmarks: usize,
    pub n_observed: usize,
    /// Fraction of observations replaced by outliers (uniform position,
    /// uniform valid label); the outlier count is exactly
    /// round(fraction · n_observed).
    pub outlier_fraction: f64,
    /// Standard deviation of the Gaussian position noise on inlier
    /// observations, scene units.
    pub noise_sigma: f64,
    pub label_alphabet: Vec<String>,
    /// Scene bounding box dimensions; landmarks are uniform in the
    /// origin-centered box.
    pub scene_extent: Vector3<f64>,
    pub seed: u64,
}

impl Default for SynthSceneParams {
    fn default() -> Self {
        SynthSceneParams {
            n_landmarks: 12,
            n_observed: 20,
            outlier_fraction: 0.0,
            noise_sigma: 0.0,
            label_alphabet: ["G", "L", "X", "T"].map(String::from).to_vec(),
            scene_extent: Vector3::new(10.0, 10.0, 4.0),
            seed: 0,
        }
    }
}

/// A generated 3D scene: global map, robot-frame observations, true pose.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthScene {
    pub map: LandmarkMap,
    pub observations: Vec<Landmark>,
    pub gt_pose: Pose,
}

fn uniform_in_box(rng: &mut ChaCha8Rng, extent: &Vector3<f64>) -> Vector3<f64> {
    Vector3::new(
        rng.random_range(-0.5..0.5) * extent.x,
        rng.random_range(-0.5..0.5) * extent.y,
        rng.random_range(-0.5..0.5) * extent.z,
    )
}

/// Uniform random rotation via a normalized Gaussian quaternion.
fn uniform_rotation(rng: &mut ChaCha8Rng) -> Rotation {
    let normal = Normal::new(0.0f64, 1.0).expect("unit normal");
    let (w, x, y, z) = loop {
        let q: [f64; 4] = [
            normal.sample(rng),
            normal.sample(rng),
            normal.sample(rng),
            normal.sample(rng),
        ];
        let n = (q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]).sqrt();
        if n > 1e-6 {
            break (q[0] / n, q[1] / n, q[2] / n, q[3] / n);
        }
    };
    let m = Matrix3::new(
        1.0 - 2.0 * (y * y + z * z),
        2.0 * (x * y - w * z),
        2.0 * (x * z + w * y),
        2.0 * (x * y + w * z),
        1.0 - 2.0 * (x * x + z * z),
        2.0 * (y * z - w * x),
        2.0 * (x * z - w * y),
        2.0 * (y * z + w * x),
        1.0 - 2.0 * (x * x + y * y),
    );
    Rotation::from_matrix_unchecked(m)
}

/// Generate a 3D scene: landmarks uniform in the extent box with labels
/// cycling the alphabet, a uniform ground-truth pose, noisy inlier
/// observations in the robot frame, and exactly
/// round(outlier_fraction · n_observed) outliers. Deterministic per seed.
pub fn synth_scene_3d(params: &SynthSceneParams) -> SynthScene {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let map = LandmarkMap {
        labels: params.label_alphabet.clone(),
        landmarks: (0..params.n_landmarks)
            .map(|i| {
                Landmark::new(
                    uniform_in_box(&mut rng, &params.scene_extent),
                    params.label_alphabet[i % params.label_alphabet.len()].clone(),
                )
            })
            .collect(),
    };

    // Pose uniform in the central half of the box, arbitrary orientation.
    let gt_pose = Pose::new(
        uniform_rotation(&mut rng),
        uniform_in_box(&mut rng, &(params.scene_extent * 0.5)),
    );

    let n_outliers = (params.outlier_fraction * params.n_observed as f64).round() as usize;
    let n_inliers = params.n_observed - n_outliers;
    let normal = Normal::new(0.0, params.noise_sigma.max(0.0)).expect("noise sigma ≥ 0");
    let gt_inv = gt_pose.inverse();

    let mut observations: Vec<Landmark> = Vec::with_capacity(params.n_observed);
    for i in 0..n_inliers {
        // Observed landmarks cycle through the map so every scene exercises
        // repeated sightings once n_observed exceeds the map size.
        let l = &map.landmarks[i % map.landmarks.len()];
        let noise = Vector3::new(
            normal.sample(&mut rng),
            normal.sample(&mut rng),
            normal.sample(&mut rng),
        );
        observations.push(Landmark::new(
            gt_inv.apply(&l.position) + noise,
            l.class_label.clone(),
        ));
    }
    for _ in 0..n_outliers {
        let label = params.label_alphabet
            [rng.random_range(0..params.label_alphabet.len())]
        .clone();
        observations.push(Landmark::new(
            uniform_in_box(&mut rng, &params.scene_extent),
            label,
        ));
    }
    observations.shuffle(&mut rng);

    SynthScene {
        map,
        observations,
        gt_pose,
    }
}

/// Parameters for a synthetic 2D match set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthMatchParams {
    pub n_matches: usize,
    /// Fraction of matches replaced by outliers (uniform in both images);
    /// the count is exactly round(fraction · n_matches).
    pub outlier_fraction: f64,
    /// Pixel noise standard deviation on inlier destinations.
    pub noise_sigma: f64,
    pub image_size: (usize, usize),
    /// Frobenius norm of the homography generator in normalized image
    /// coordinates; 0 gives the identity.
    pub gt_homography_spread: f64,
    pub seed: u64,
}

impl Default for SynthMatchParams {
    fn default() -> Self {
        SynthMatchParams {
            n_matches: 200,
            outlier_fraction: 0.0,
            noise_sigma: 0.5,
            image_size: (640, 480),
            gt_homography_spread: 0.1,
            seed: 0,
        }
    }
}

/// A generated match set with its planted homography. `outlier_flags[i]`
/// marks the matches that were drawn as outliers.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthMatches {
    pub matches: Vec<Match2D>,
    pub gt_h: Homography,
    pub outlier_flags: Vec<bool>,
}

/// Generate matches under a planted homography.
///
/// The ground truth is the exponential of a bounded random traceless
/// generator in normalized image coordinates (conjugated back to pixels),
/// so translation, rotation, scale and a modest perspective stay balanced
/// at every spread. Inlier matches are forward-projected with pixel noise
/// and kept only when both endpoints land in-image; outliers are uniform in
/// both images. Deterministic per seed.
pub fn synth_matches_2d(params: &SynthMatchParams) -> SynthMatches {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let (w, h) = (params.image_size.0 as f64, params.image_size.1 as f64);

    // Pixel → normalized [−1, 1]² similarity.
    let s = Matrix3::new(2.0 / w, 0.0, -1.0, 0.0, 2.0 / h, -1.0, 0.0, 0.0, 1.0);
    let s_inv = s.try_inverse().expect("similarity is invertible");
    let gt_matrix = if params.gt_homography_spread > 0.0 {
        let mut a = Matrix3::from_fn(|_, _| rng.random_range(-1.0..1.0));
        let trace = a.trace();
        for i in 0..3 {
            a[(i, i)] -= trace / 3.0;
        }
        let norm = a.norm();
        if norm > 0.0 {
            a *= params.gt_homography_spread / norm;
        }
        s_inv * gl3::exp(&a) * s
    } else {
        Matrix3::identity()
    };
    let gt_h = Homography::new(gt_matrix, NormalizationMode::UnitLowerRight)
        .expect("bounded generator stays invertible");

    let n_outliers = (params.outlier_fraction * params.n_matches as f64).round() as usize;
    let n_inliers = params.n_matches - n_outliers;
    let normal = Normal::new(0.0, params.noise_sigma.max(0.0)).expect("noise sigma ≥ 0");

    let mut matches = Vec::with_capacity(params.n_matches);
    let mut flags = Vec::with_capacity(params.n_matches);
    let mut attempts = 0usize;
    while matches.len() < n_inliers && attempts < 1000 * params.n_matches.max(1) {
        attempts += 1;
        let p = Vector2::new(rng.random_range(0.0..w), rng.random_range(0.0..h));
        let Some(projected) = gt_h.apply(&p) else {
            continue;
        };
        let q = projected + Vector2::new(normal.sample(&mut rng), normal.sample(&mut rng));
        if q.x >= 0.0 && q.x < w && q.y >= 0.0 && q.y < h {
            matches.push(Match2D::new(p, q));
            flags.push(false);
        }
    }
    for _ in 0..n_outliers {
        matches.push(Match2D::new(
            Vector2::new(rng.random_range(0.0..w), rng.random_range(0.0..h)),
            Vector2::new(rng.random_range(0.0..w), rng.random_range(0.0..h)),
        ));
        flags.push(true);
    }
    // Shuffle matches and flags in lockstep.
    let mut order: Vec<usize> = (0..matches.len()).collect();
    order.shuffle(&mut rng);
    let matches = order.iter().map(|&i| matches[i]).collect();
    let outlier_flags = order.iter().map(|&i| flags[i]).collect();

    SynthMatches {
        matches,
        gt_h,
        outlier_flags,
    }
}
