//! `clap-estimate`: generate synthetic data, localize in 3D, stitch image
//! pairs, and run reproducible benchmarks.

use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use nalgebra::Vector3;
use serde::Serialize;

use clap_core::config::PipelineConfig;
use clap_core::jsonio::{self, HomographyJson, MatchesJson, PoseJson};
use clap_core::localize::{localize3d, EstimateFlags, LocalizeConfig, ModeUsed};
use clap_core::raster::Raster;
use clap_core::stitch::{stitch, StitchConfig};
use clap_harness::bench::BenchSpec;
use clap_harness::synth::{
    synth_matches_2d, synth_scene_3d, SynthMatchParams, SynthSceneParams,
};

#[derive(Parser)]
#[command(
    name = "clap-estimate",
    about = "Robust geometric estimation by candidate clustering",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate synthetic scenes or match sets with planted ground truth.
    #[command(subcommand)]
    Synth(SynthCommand),
    /// Estimate a 6-DoF pose from labeled landmark observations.
    Localize3d(Localize3dArgs),
    /// Stitch two images from point correspondences.
    Stitch(StitchArgs),
    /// Run a benchmark spec and export CSV tables.
    Bench(BenchArgs),
}

#[derive(Subcommand)]
enum SynthCommand {
    /// Synthetic 3D localization scene (map, observations, true pose).
    Scene3d(SynthScene3dArgs),
    /// Synthetic 2D match set with a planted homography.
    Matches2d(SynthMatches2dArgs),
}

#[derive(Args)]
struct SynthScene3dArgs {
    #[arg(long, default_value_t = 12)]
    n_landmarks: usize,
    #[arg(long, default_value_t = 20)]
    n_observed: usize,
    #[arg(long, default_value_t = 0.0)]
    outlier_fraction: f64,
    #[arg(long, default_value_t = 0.0)]
    noise_sigma: f64,
    /// Label alphabet, comma separated.
    #[arg(long, default_value = "G,L,X,T", value_delimiter = ',')]
    labels: Vec<String>,
    /// Scene extent, comma separated (x,y,z).
    #[arg(long, default_value = "10,10,4", value_delimiter = ',', num_args = 3)]
    extent: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path for the landmark map JSON.
    #[arg(long)]
    out_map: PathBuf,
    /// Output path for the observations JSON.
    #[arg(long)]
    out_obs: PathBuf,
    /// Output path for the ground-truth pose JSON.
    #[arg(long)]
    out_gt: Option<PathBuf>,
}

#[derive(Args)]
struct SynthMatches2dArgs {
    #[arg(long, default_value_t = 200)]
    n_matches: usize,
    #[arg(long, default_value_t = 0.0)]
    outlier_fraction: f64,
    #[arg(long, default_value_t = 0.5)]
    noise_sigma: f64,
    /// Image size as WIDTHxHEIGHT.
    #[arg(long, default_value = "640x480")]
    image_size: String,
    /// Generator spread of the planted homography (0 = identity).
    #[arg(long, default_value_t = 0.1)]
    spread: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path for the matches JSON.
    #[arg(long)]
    out: PathBuf,
    /// Output path for the ground-truth homography JSON.
    #[arg(long)]
    out_gt: Option<PathBuf>,
}

#[derive(Args)]
struct Localize3dArgs {
    /// Landmark map JSON (global frame).
    #[arg(long)]
    map: PathBuf,
    /// Observations JSON (robot frame, same shape as the map).
    #[arg(long)]
    obs: PathBuf,
    /// Pipeline config TOML; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Initial pose JSON enabling local mode when the config asks for it.
    #[arg(long)]
    initial_pose: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output pose JSON (pose plus survivors/mode/flags).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct StitchArgs {
    /// Left image (PPM/PGM).
    #[arg(long)]
    left: PathBuf,
    /// Right image (PPM/PGM).
    #[arg(long)]
    right: PathBuf,
    /// Matches JSON mapping left pixels to right pixels.
    #[arg(long)]
    matches: PathBuf,
    /// Pipeline config TOML; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output panorama (PPM/PGM).
    #[arg(long)]
    out: PathBuf,
    /// Output report JSON.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Bench spec TOML.
    #[arg(long)]
    spec: PathBuf,
    /// Directory for the CSV exports.
    #[arg(long)]
    out_dir: PathBuf,
}

/// Pose estimate output: the pose JSON extended with diagnostics.
#[derive(Serialize)]
struct PoseEstimateJson {
    #[serde(flatten)]
    pose: PoseJson,
    survivors: usize,
    mode: ModeUsed,
    flags: EstimateFlags,
}

fn load_config(path: &Option<PathBuf>) -> Result<PipelineConfig> {
    match path {
        Some(p) => PipelineConfig::from_file(p).context("loading pipeline config"),
        None => Ok(PipelineConfig::default()),
    }
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Synth(SynthCommand::Scene3d(args)) => {
            let params = SynthSceneParams {
                n_landmarks: args.n_landmarks,
                n_observed: args.n_observed,
                outlier_fraction: args.outlier_fraction,
                noise_sigma: args.noise_sigma,
                label_alphabet: args.labels,
                scene_extent: Vector3::new(args.extent[0], args.extent[1], args.extent[2]),
                seed: args.seed,
            };
            let scene = synth_scene_3d(&params);
            jsonio::write_json(&scene.map, &args.out_map)?;
            let observations = clap_core::solvers::LandmarkMap {
                labels: scene.map.labels.clone(),
                landmarks: scene.observations,
            };
            jsonio::write_json(&observations, &args.out_obs)?;
            if let Some(path) = args.out_gt {
                jsonio::write_json(&PoseJson::from(&scene.gt_pose), &path)?;
            }
            eprintln!(
                "scene3d: {} landmarks, {} observations → {}",
                scene.map.landmarks.len(),
                observations.landmarks.len(),
                args.out_obs.display()
            );
        }
        Command::Synth(SynthCommand::Matches2d(args)) => {
            let (w, h) = args
                .image_size
                .split_once('x')
                .and_then(|(a, b)| Some((a.parse().ok()?, b.parse().ok()?)))
                .context("--image-size must look like 640x480")?;
            let params = SynthMatchParams {
                n_matches: args.n_matches,
                outlier_fraction: args.outlier_fraction,
                noise_sigma: args.noise_sigma,
                image_size: (w, h),
                gt_homography_spread: args.spread,
                seed: args.seed,
            };
            let synth = synth_matches_2d(&params);
            jsonio::write_json(
                &MatchesJson {
                    matches: synth.matches,
                },
                &args.out,
            )?;
            if let Some(path) = args.out_gt {
                jsonio::write_json(&HomographyJson::from(&synth.gt_h), &path)?;
            }
            eprintln!("matches2d: {} matches → {}", params.n_matches, args.out.display());
        }
        Command::Localize3d(args) => {
            let map = jsonio::read_landmark_set(&args.map).context("loading map")?;
            let obs = jsonio::read_landmark_set(&args.obs).context("loading observations")?;
            let pipeline = load_config(&args.config)?;
            let mut cfg = LocalizeConfig::from_pipeline(&pipeline)?;
            if let Some(path) = args.initial_pose {
                let text = std::fs::read_to_string(&path).context("loading initial pose")?;
                let pose_json: PoseJson = serde_json::from_str(&text)?;
                cfg.initial_pose = Some(pose_json.to_pose()?);
            }
            let est = localize3d(&obs.landmarks, &map, &cfg, args.seed)
                .context("localization failed")?;
            jsonio::write_json(
                &PoseEstimateJson {
                    pose: PoseJson::from(&est.pose),
                    survivors: est.survivor_count,
                    mode: est.mode_used,
                    flags: est.flags,
                },
                &args.out,
            )?;
            eprintln!(
                "localize3d: {} survivors ({:?} mode) → {}",
                est.survivor_count,
                est.mode_used,
                args.out.display()
            );
        }
        Command::Stitch(args) => {
            let left = Raster::load_pnm(&args.left).context("loading left image")?;
            let right = Raster::load_pnm(&args.right).context("loading right image")?;
            let matches = jsonio::read_matches(&args.matches).context("loading matches")?;
            let pipeline = load_config(&args.config)?;
            let cfg = StitchConfig::from_pipeline(&pipeline)?;
            let (pano, report) =
                stitch(&left, &right, &matches, &cfg, args.seed).context("stitching failed")?;
            pano.save_pnm(&args.out).context("writing panorama")?;
            if let Some(path) = args.report {
                jsonio::write_json(&report, &path)?;
            }
            eprintln!(
                "stitch: {}×{} panorama, mean SRE {:.3} px, inlier ratio {:.3} → {}",
                pano.width,
                pano.height,
                report.sre_mean,
                report.inlier_ratio,
                args.out.display()
            );
        }
        Command::Bench(args) => {
            let spec = BenchSpec::from_file(&args.spec).context("loading bench spec")?;
            let output = clap_harness::run_bench(&spec).context("bench run failed")?;
            output
                .write_exports(&args.out_dir)
                .context("writing exports")?;
            let failed = output.records.iter().filter(|r| r.status != "ok").count();
            eprintln!(
                "bench: {} cells ({} failed) → {}",
                output.records.len(),
                failed,
                args.out_dir.display()
            );
        }
    }
    Ok(())
}
