//! Acceptance-5 dry run (scratch): head-to-head p90 at 60% outliers and
//! median-SRE agreement at 20%.

use clap_core::ransac::{ransac_homography, symmetric_reprojection_error, RansacConfig};
use clap_core::stitch::{clap_homography, StitchConfig};
use clap_harness::eval::lie_distance_to_gt;
use clap_harness::synth::{synth_matches_2d, SynthMatchParams};
use std::time::Instant;

fn quantile(sorted: &[f64], q: f64) -> f64 {
    sorted[((sorted.len() - 1) as f64 * q) as usize]
}

fn main() {
    let start = Instant::now();
    let seeds = 100u64;

    for outlier_fraction in [0.6, 0.2] {
        let mut clap_lie = Vec::new();
        let mut ransac_lie = Vec::new();
        let mut clap_sre = Vec::new();
        let mut ransac_sre = Vec::new();
        for seed in 0..seeds {
            let synth = synth_matches_2d(&SynthMatchParams {
                n_matches: 200,
                outlier_fraction,
                noise_sigma: 0.5,
                gt_homography_spread: 0.1,
                seed: 5000 + seed,
                ..Default::default()
            });
            let (hc, _) = clap_homography(&synth.matches, &StitchConfig::default(), seed).unwrap();
            let rr = ransac_homography(
                &synth.matches,
                &RansacConfig {
                    seed,
                    ..Default::default()
                },
            )
            .unwrap();
            clap_lie.push(lie_distance_to_gt(&hc, &synth.gt_h).unwrap());
            ransac_lie.push(lie_distance_to_gt(&rr.homography, &synth.gt_h).unwrap());
            clap_sre.push(symmetric_reprojection_error(&hc, &synth.matches).1);
            ransac_sre.push(symmetric_reprojection_error(&rr.homography, &synth.matches).1);
        }
        for v in [&mut clap_lie, &mut ransac_lie, &mut clap_sre, &mut ransac_sre] {
            v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        }
        println!(
            "outliers {outlier_fraction}: clap lie p50/p90 {:.4}/{:.4}, ransac {:.4}/{:.4} | p90 ok: {} | sre medians {:.4} vs {:.4} (Δ {:.4})",
            quantile(&clap_lie, 0.5),
            quantile(&clap_lie, 0.9),
            quantile(&ransac_lie, 0.5),
            quantile(&ransac_lie, 0.9),
            quantile(&clap_lie, 0.9) <= quantile(&ransac_lie, 0.9),
            quantile(&clap_sre, 0.5),
            quantile(&ransac_sre, 0.5),
            (quantile(&clap_sre, 0.5) - quantile(&ransac_sre, 0.5)).abs(),
        );
    }
    println!("total {:.1}s", start.elapsed().as_secs_f64());
}
