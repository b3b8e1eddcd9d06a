//! Acceptance-4 dry run (scratch): success rates for 3D global-mode
//! localization at 55% outliers under different scene shapes.

use clap_core::localize::{localize3d, LocalizeConfig};
use clap_core::metrics::relative_transform_error;
use clap_harness::synth::{synth_scene_3d, SynthSceneParams};
use nalgebra::Vector3;
use std::time::Instant;

fn main() {
    let configs: Vec<(&str, Vec<String>, usize, usize, f64)> = vec![
        (
            "A: 12 lm / 4 labels / cap 1500",
            ["G", "L", "X", "T"].map(String::from).to_vec(),
            12,
            1500,
            0.02,
        ),
        (
            "B: 12 lm / 6 labels / cap 1500",
            ["A", "B", "C", "D", "E", "F"].map(String::from).to_vec(),
            12,
            1500,
            0.02,
        ),
        (
            "C: 12 lm / 12 labels / cap 2000",
            (0..12).map(|i| format!("L{i}")).collect(),
            12,
            2000,
            0.02,
        ),
    ];

    let extent = Vector3::new(10.0, 10.0, 4.0);
    let diameter = extent.norm();
    let trials = 60u64;

    for (name, labels, n_landmarks, max_candidates, sigma) in configs {
        let start = Instant::now();
        let mut ok = 0;
        let mut worst: f64 = 0.0;
        for seed in 0..trials {
            let scene = synth_scene_3d(&SynthSceneParams {
                n_landmarks,
                n_observed: 20,
                outlier_fraction: 0.55,
                noise_sigma: sigma,
                label_alphabet: labels.clone(),
                scene_extent: extent,
                seed: 1000 + seed,
            });
            let cfg = LocalizeConfig {
                max_candidates,
                ..Default::default()
            };
            match localize3d(&scene.observations, &scene.map, &cfg, seed) {
                Ok(est) => {
                    let (et, er) = relative_transform_error(&est.pose, &scene.gt_pose);
                    if et < 0.05 * diameter && er < 0.1 {
                        ok += 1;
                    } else {
                        worst = worst.max(et / diameter);
                    }
                }
                Err(e) => println!("  seed {seed} error: {e}"),
            }
        }
        println!(
            "{name}: {ok}/{trials} ok, worst rel-t {worst:.3}, {:.1}s total",
            start.elapsed().as_secs_f64()
        );
    }
}
