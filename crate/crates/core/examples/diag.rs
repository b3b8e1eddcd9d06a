//! Scratch diagnostics for the stitching cluster (not part of the public
//! surface; run with `cargo run -p clap-core --example diag`).

use clap_core::cluster::{pairwise_distances, trim_iterate, TrimConfig};
use clap_core::geom::{Homography, NormalizationMode};
use clap_core::metrics::{
    homography_lie_distance, HomographyMetric, HomographyMetricKind, Metric,
};
use clap_core::ransac::{ransac_homography, RansacConfig};
use clap_core::solvers::{sample_homography_candidates, Match2D};
use clap_core::stitch::{clap_homography, StitchConfig};
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

fn main() {
    let h_true = known_h();
    let gt = Homography::new(h_true, NormalizationMode::UnitLowerRight).unwrap();
    let metric = HomographyMetric(HomographyMetricKind::LieAlgebra);

    for seed in 0..6u64 {
        let matches = synth_matches(&h_true, 200, 120, 0.5, 3000 + seed);
        let cands = sample_homography_candidates(&matches, 400, seed).unwrap();
        let hs: Vec<Homography> = cands.iter().map(|c| c.homography).collect();

        let d_gt: Vec<f64> = hs
            .iter()
            .map(|h| homography_lie_distance(h, &gt).unwrap_or(f64::NAN))
            .collect();
        let near = d_gt.iter().filter(|d| **d < 0.01).count();
        let mut sorted: Vec<f64> = d_gt.iter().cloned().filter(|d| d.is_finite()).collect();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let nan_count = d_gt.iter().filter(|d| d.is_nan()).count();

        let (dm, fallbacks) = pairwise_distances(&hs, &metric);
        // Medoid of all 400.
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
        let trim = trim_iterate(&hs, &metric, &TrimConfig { trim_fraction: 0.2, rounds: 5, mad_k: 0.0 }).unwrap();
        let (hc, diag) = clap_homography(&matches, &StitchConfig::default(), seed).unwrap();
        let rr = ransac_homography(&matches, &RansacConfig { seed, ..Default::default() }).unwrap();

        println!(
            "seed {seed}: near-GT {near}/400 (log-fail {nan_count}), median d_gt {:.2}, p10 {:.4} | \
             medoid d_gt {:.4}, trim-center d_gt {:.4}, fallback pairs {fallbacks} | \
             clap d_gt {:.5} (refined {}), ransac d_gt {:.5}",
            sorted[sorted.len() / 2],
            sorted[sorted.len() / 10],
            d_gt[best],
            d_gt[trim.center_index],
            homography_lie_distance(&hc, &gt).unwrap_or(f64::NAN),
            diag.refined,
            homography_lie_distance(&rr.homography, &gt).unwrap_or(f64::NAN),
        );
    }
}
