//! Distance-structure diagnostics (scratch).

use clap_core::cluster::{pairwise_distances, trim_iterate, TrimConfig};
use clap_core::geom::{Homography, NormalizationMode};
use clap_core::metrics::{
    homography_frobenius_distance, homography_lie_distance, HomographyMetric,
    HomographyMetricKind,
};
use clap_core::solvers::{sample_homography_candidates, Match2D};
use nalgebra::{Matrix3, Vector2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn project(h: &Matrix3<f64>, p: Vector2<f64>) -> Vector2<f64> {
    let q = h * nalgebra::Vector3::new(p.x, p.y, 1.0);
    Vector2::new(q.x / q.z, q.y / q.z)
}

fn known_h() -> Matrix3<f64> {
    Matrix3::new(1.05, 0.04, 18.0, -0.06, 0.97, -9.0, 1e-4, -6e-5, 1.0)
}

fn synth_matches(h: &Matrix3<f64>, n: usize, outliers: usize, noise: f64, seed: u64) -> Vec<Match2D> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let p = Vector2::new(rng.random_range(0.0..640.0), rng.random_range(0.0..480.0));
            if i < outliers {
                Match2D::new(
                    p,
                    Vector2::new(rng.random_range(0.0..640.0), rng.random_range(0.0..480.0)),
                )
            } else {
                let q = project(h, p)
                    + Vector2::new(
                        rng.random_range(-noise..noise.max(1e-12)),
                        rng.random_range(-noise..noise.max(1e-12)),
                    );
                Match2D::new(p, q)
            }
        })
        .collect()
}

fn quartiles(mut v: Vec<f64>) -> (f64, f64, f64) {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    if v.is_empty() {
        return (f64::NAN, f64::NAN, f64::NAN);
    }
    (v[v.len() / 4], v[v.len() / 2], v[3 * v.len() / 4])
}

fn main() {
    let h_true = known_h();
    let gt = Homography::new(h_true, NormalizationMode::UnitLowerRight).unwrap();

    for noise in [0.1, 0.5] {
        for seed in 0..3u64 {
            let matches = synth_matches(&h_true, 200, 120, noise, 3000 + seed);
            let cands = sample_homography_candidates(&matches, 400, seed).unwrap();
            let hs: Vec<Homography> = cands.iter().map(|c| c.homography).collect();

            // Pure candidates = all four source indices < 120? No: first 120
            // are outliers in synth. Inliers are indices >= 120.
            let pure: Vec<usize> = cands
                .iter()
                .enumerate()
                .filter(|(_, c)| c.source_indices.iter().all(|&i| i >= 120))
                .map(|(i, _)| i)
                .collect();

            let d_gt: Vec<f64> = hs
                .iter()
                .map(|h| homography_lie_distance(h, &gt).unwrap_or(f64::NAN))
                .collect();
            let pure_d: Vec<f64> = pure.iter().map(|&i| d_gt[i]).filter(|d| d.is_finite()).collect();
            let (pq1, pq2, pq3) = quartiles(pure_d.clone());

            // Lie vs substituted pair scales.
            let mut lie_vals = Vec::new();
            let mut sub_vals = Vec::new();
            let mut rng = ChaCha8Rng::seed_from_u64(99);
            for _ in 0..4000 {
                let i = rng.random_range(0..hs.len());
                let j = rng.random_range(0..hs.len());
                if i == j {
                    continue;
                }
                match homography_lie_distance(&hs[i], &hs[j]) {
                    Ok(v) => lie_vals.push(v),
                    Err(_) => {
                        sub_vals.push(homography_frobenius_distance(&hs[i], &hs[j]).unwrap())
                    }
                }
            }
            let (lq1, lq2, lq3) = quartiles(lie_vals);
            let (sq1, sq2, sq3) = quartiles(sub_vals);

            // Frobenius-metric medoid + trim.
            let fro = HomographyMetric(HomographyMetricKind::Frobenius);
            let (dm, _) = pairwise_distances(&hs, &fro);
            let n = hs.len();
            let mut best = 0;
            let mut best_sum = f64::INFINITY;
            for i in 0..n {
                let s: f64 = (0..n).map(|j| dm[(i, j)]).sum();
                if s < best_sum {
                    best_sum = s;
                    best = i;
                }
            }
            let trim_fro = trim_iterate(
                &hs,
                &fro,
                &TrimConfig { trim_fraction: 0.2, rounds: 5, mad_k: 0.0 },
            )
            .unwrap();

            println!(
                "noise {noise} seed {seed}: pure {}/400, pure d_gt quartiles ({pq1:.2} {pq2:.2} {pq3:.2}) | \
                 lie-pair q ({lq1:.1} {lq2:.1} {lq3:.1}), substituted-pair q ({sq1:.1} {sq2:.1} {sq3:.1}) | \
                 fro-medoid d_gt {:.3}, fro-trim-center d_gt {:.3} (pure? {})",
                pure.len(),
                d_gt[best],
                d_gt[trim_fro.center_index],
                pure.contains(&trim_fro.center_index),
            );
        }
    }
}
