use std::path::PathBuf;

use clap::Args;
use mitfas_core::{
    run_pipeline, MeasureKind, OutputFormat, PipelineConfig, SamplingConfig, SearchConfig,
};
use serde::Deserialize;

use crate::CliError;

#[derive(Args)]
pub struct AlignArgs {
    /// Directory of numbered frames (PNG or binary PGM/PPM).
    #[arg(long)]
    frames: Option<PathBuf>,
    /// Bounding-box file: text lines `frame_index x y w h` or a JSON array.
    #[arg(long)]
    bboxes: Option<PathBuf>,
    /// Output directory for aligned patches, sampled copies and the manifest.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Histogram bin count.
    #[arg(long)]
    bins: Option<usize>,
    /// Sliding-window stride in pixels.
    #[arg(long)]
    stride: Option<u32>,
    /// Comma-separated scale grid, e.g. 0.9,1.0,1.1
    #[arg(long)]
    scales: Option<String>,
    /// Comma-separated rotation grid in radians, e.g. 0
    #[arg(long)]
    thetas: Option<String>,
    /// Search-area size as a multiple of the previous window.
    #[arg(long)]
    expansion: Option<f64>,
    /// Re-localization cadence in frames.
    #[arg(long)]
    relocalize_every: Option<usize>,
    /// Similarity measure: mi, euclidean, cosine, psnr or ssim.
    #[arg(long)]
    measure: Option<String>,
    /// Weight of the pairwise MI term in the sampling objective.
    #[arg(long)]
    alpha: Option<f64>,
    /// Weight of the joint MI term in the sampling objective.
    #[arg(long)]
    beta: Option<f64>,
    /// Number of frames to sample.
    #[arg(long)]
    n_frames: Option<usize>,
    /// Seed for the sampling RNG.
    #[arg(long)]
    seed: Option<u64>,
    /// Sample over raw grayscale frames instead of aligned patches.
    #[arg(long)]
    sample_raw: bool,
    /// TOML config file mirroring every flag; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
}

/// TOML mirror of the command line. Any present key acts as the flag.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    frames: Option<PathBuf>,
    bboxes: Option<PathBuf>,
    out: Option<PathBuf>,
    bins: Option<usize>,
    stride: Option<u32>,
    scales: Option<Vec<f64>>,
    thetas: Option<Vec<f64>>,
    expansion: Option<f64>,
    relocalize_every: Option<usize>,
    relocalize_floor: Option<f64>,
    measure: Option<String>,
    alpha: Option<f64>,
    beta: Option<f64>,
    n_frames: Option<usize>,
    seed: Option<u64>,
    stride_max: Option<usize>,
    sample_raw: Option<bool>,
    output_format: Option<String>,
}

fn parse_float_list(raw: &str, what: &str) -> Result<Vec<f64>, CliError> {
    raw.split(',')
        .map(|item| {
            item.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Config(format!("cannot parse {what} entry {item:?}")))
        })
        .collect()
}

fn load_file_config(path: &PathBuf) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read config file {path:?}: {e}")))?;
    toml::from_str(&text).map_err(|e| CliError::Config(format!("bad config file {path:?}: {e}")))
}

pub fn run(args: AlignArgs) -> Result<(), CliError> {
    let file = match &args.config {
        Some(path) => load_file_config(path)?,
        None => FileConfig::default(),
    };

    let frames = args
        .frames
        .or(file.frames)
        .ok_or_else(|| CliError::Config("--frames is required (flag or config file)".into()))?;
    let bboxes = args
        .bboxes
        .or(file.bboxes)
        .ok_or_else(|| CliError::Config("--bboxes is required (flag or config file)".into()))?;
    let out = args
        .out
        .or(file.out)
        .ok_or_else(|| CliError::Config("--out is required (flag or config file)".into()))?;

    let search_defaults = SearchConfig::default();
    let sampling_defaults = SamplingConfig::default();

    let scale_set = match args.scales {
        Some(raw) => parse_float_list(&raw, "--scales")?,
        None => file.scales.unwrap_or(search_defaults.scale_set),
    };
    let theta_set = match args.thetas {
        Some(raw) => parse_float_list(&raw, "--thetas")?,
        None => file.thetas.unwrap_or(search_defaults.theta_set),
    };
    let measure = match args.measure.or(file.measure) {
        Some(raw) => raw
            .parse::<MeasureKind>()
            .map_err(|e| CliError::Config(e.to_string()))?,
        None => search_defaults.measure,
    };
    let output_format = match file.output_format.as_deref() {
        None | Some("pgm") => OutputFormat::Pgm,
        Some("png") => OutputFormat::Png,
        Some(other) => {
            return Err(CliError::Config(format!(
                "unknown output_format {other:?} (expected pgm or png)"
            )))
        }
    };

    let config = PipelineConfig {
        search: SearchConfig {
            stride: args
                .stride
                .or(file.stride)
                .unwrap_or(search_defaults.stride),
            scale_set,
            theta_set,
            search_expansion: args
                .expansion
                .or(file.expansion)
                .unwrap_or(search_defaults.search_expansion),
            bins: args.bins.or(file.bins).unwrap_or(search_defaults.bins),
            relocalize_every: args
                .relocalize_every
                .or(file.relocalize_every)
                .unwrap_or(search_defaults.relocalize_every),
            relocalize_mi_floor: file
                .relocalize_floor
                .unwrap_or(search_defaults.relocalize_mi_floor),
            measure,
        },
        sampling: SamplingConfig {
            alpha: args.alpha.or(file.alpha).unwrap_or(sampling_defaults.alpha),
            beta: args.beta.or(file.beta).unwrap_or(sampling_defaults.beta),
            n_frames: args
                .n_frames
                .or(file.n_frames)
                .unwrap_or(sampling_defaults.n_frames),
            bins: args.bins.or(file.bins).unwrap_or(sampling_defaults.bins),
            seed: args.seed.or(file.seed).unwrap_or(sampling_defaults.seed),
            stride_max: file.stride_max,
        },
        sample_raw: args.sample_raw || file.sample_raw.unwrap_or(false),
        output_format,
    };

    let manifest = run_pipeline(&frames, &bboxes, &out, &config)?;
    println!(
        "aligned {} frames; sampled indices {:?}",
        manifest.trace.len(),
        manifest.sample.indices
    );
    println!("outputs in {}", out.display());
    Ok(())
}
