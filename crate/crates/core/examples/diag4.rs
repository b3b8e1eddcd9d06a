//! k-NN density-peak center diagnostics (scratch).

use clap_core::cluster::pairwise_distances;
use clap_core::geom::{Homography, NormalizationMode};
use clap_core::metrics::{homography_lie_distance, HomographyMetric, HomographyMetricKind};
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

fn main() {
    let h_true = known_h();
    let gt = Homography::new(h_true, NormalizationMode::UnitLowerRight).unwrap();
    let metric = HomographyMetric(HomographyMetricKind::LieAlgebra);

    let ks = [3usize, 4, 6, 8];
    let mut locks = [0usize; 4];
    let seeds = 30u64;
    for seed in 0..seeds {
        let matches = synth_matches(&h_true, 200, 120, 0.5, 3000 + seed);
        let cands = sample_homography_candidates(&matches, 400, seed).unwrap();
        let hs: Vec<Homography> = cands.iter().map(|c| c.homography).collect();
        let n = hs.len();
        let (dm, _) = pairwise_distances(&hs, &metric);
        let d_gt: Vec<f64> = hs
            .iter()
            .map(|h| homography_lie_distance(h, &gt).unwrap_or(f64::INFINITY))
            .collect();

        for (ki, &k) in ks.iter().enumerate() {
            let mut best = 0;
            let mut best_knn = f64::INFINITY;
            for i in 0..n {
                let mut row: Vec<f64> = (0..n).filter(|&j| j != i).map(|j| dm[(i, j)]).collect();
                row.sort_by(|a, b| a.partial_cmp(b).unwrap());
                let dk = row[k - 1];
                if dk < best_knn {
                    best_knn = dk;
                    best = i;
                }
            }
            if seed < 4 {
                println!(
                    "seed {seed} k {k}: center kNN-dist {best_knn:.2}, d_gt {:.2}",
                    d_gt[best]
                );
            }
            if d_gt[best] < 30.0 {
                locks[ki] += 1;
            }
        }
    }
    println!("locks (d_gt<30) / {seeds}: k=3 → {}, k=4 → {}, k=6 → {}, k=8 → {}", locks[0], locks[1], locks[2], locks[3]);
}
