//! Error anatomy for 3D global mode (scratch).

use clap_core::average::PoseAverageScheme;
use clap_core::localize::{localize3d, LocalizeConfig};
use clap_core::metrics::relative_transform_error;
use clap_harness::synth::{synth_scene_3d, SynthSceneParams};
use nalgebra::Vector3;

fn quantile(sorted: &[f64], q: f64) -> f64 {
    sorted[((sorted.len() - 1) as f64 * q) as usize]
}

fn main() {
    let extent = Vector3::new(10.0, 10.0, 4.0);
    let diameter = extent.norm();
    let trials = 60u64;
    let labels: Vec<String> = (0..12).map(|i| format!("L{i}")).collect();

    for scheme in [PoseAverageScheme::Medoid, PoseAverageScheme::Karcher] {
        for (rounds, trim, mad_k) in [(5, 0.2, 3.0), (5, 0.2, 1.0), (8, 0.3, 1.0)] {
            let mut rel_t = Vec::new();
            let mut rel_r = Vec::new();
            for seed in 0..trials {
                let scene = synth_scene_3d(&SynthSceneParams {
                    n_landmarks: 12,
                    n_observed: 20,
                    outlier_fraction: 0.55,
                    noise_sigma: 0.02,
                    label_alphabet: labels.clone(),
                    scene_extent: extent,
                    seed: 1000 + seed,
                });
                let mut cfg = LocalizeConfig {
                    max_candidates: 2000,
                    ..Default::default()
                };
                cfg.average.scheme = scheme;
                cfg.trim.rounds = rounds;
                cfg.trim.trim_fraction = trim;
                cfg.trim.mad_k = mad_k;
                let est = localize3d(&scene.observations, &scene.map, &cfg, seed).unwrap();
                let (et, er) = relative_transform_error(&est.pose, &scene.gt_pose);
                rel_t.push(et / diameter);
                rel_r.push(er);
            }
            rel_t.sort_by(|a, b| a.partial_cmp(b).unwrap());
            rel_r.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let ok = rel_t
                .iter()
                .zip(&rel_r)
                .filter(|(t, r)| **t < 0.05 && **r < 0.1)
                .count();
            println!(
                "{scheme:?} rounds {rounds} trim {trim} mad {mad_k}: ok {ok}/{trials}, rel_t q50 {:.4} q90 {:.4} q99 {:.4}, rel_r q90 {:.4}",
                quantile(&rel_t, 0.5),
                quantile(&rel_t, 0.9),
                quantile(&rel_t, 0.99),
                quantile(&rel_r, 0.9),
            );
        }
    }
}
