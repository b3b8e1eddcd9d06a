//! Ambiguous-alphabet check for the 3D acceptance config (scratch).
use clap_core::average::PoseAverageScheme;
use clap_core::localize::{localize3d, LocalizeConfig};
use clap_core::metrics::relative_transform_error;
use clap_harness::synth::{synth_scene_3d, SynthSceneParams};
use nalgebra::Vector3;
use std::time::Instant;

fn main() {
    let extent = Vector3::new(10.0, 10.0, 4.0);
    let diameter = extent.norm();
    for (name, labels, cap) in [
        ("4 labels", ["G", "L", "X", "T"].map(String::from).to_vec(), 2000),
        ("6 labels", ["A", "B", "C", "D", "E", "F"].map(String::from).to_vec(), 2000),
    ] {
        let start = Instant::now();
        let mut ok = 0;
        let trials = 60;
        let mut worst = (0.0f64, 0.0f64);
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
            let mut cfg = LocalizeConfig { max_candidates: cap, ..Default::default() };
            cfg.average.scheme = PoseAverageScheme::Medoid;
            let est = localize3d(&scene.observations, &scene.map, &cfg, seed).unwrap();
            let (et, er) = relative_transform_error(&est.pose, &scene.gt_pose);
            if et < 0.05 * diameter && er < 0.1 {
                ok += 1;
            } else if et / diameter > worst.0 {
                worst = (et / diameter, er);
            }
        }
        println!("{name} cap {cap}: {ok}/{trials} ok, worst miss rel_t {:.3} er {:.3}, {:.1}s", worst.0, worst.1, start.elapsed().as_secs_f64());
    }
}
