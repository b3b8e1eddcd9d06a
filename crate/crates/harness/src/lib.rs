//! Benchmark harness: seeded synthetic scenes with planted ground truth,
//! the evaluation metrics, and a spec-driven runner exporting CSV tables.
//!
//! Everything is reproducible: a bench spec plus a seed list produces
//! byte-identical exports, regardless of thread count.

pub mod bench;
pub mod eval;
pub mod synth;

pub use bench::{run_bench, BenchOutput, BenchSpec};
pub use eval::{lie_distance_to_gt, EvalRecord};
pub use synth::{synth_matches_2d, synth_scene_3d, SynthMatchParams, SynthSceneParams};
