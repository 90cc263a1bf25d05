//! End-to-end orchestration: load frames and annotations, convert to
//! grayscale, align, sample, and persist aligned patches plus a manifest.
//! On failure every output written so far is removed, so a manifest on disk
//! always describes a complete run.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::alignment::{align_sequence, SearchConfig};
use crate::error::{Error, Result};
use crate::io::bboxes::{load_bboxes, validate_annotations, BBoxAnnotation};
use crate::io::frames::{load_frames, save_patch};
use crate::io::manifest::{
    write_manifest, InputFingerprint, RunManifest, StageTiming, SCHEMA_VERSION,
};
use crate::mi::PixelPatch;
use crate::sampling::{sample_sequence, SamplingConfig};
use crate::transforms::{to_grayscale, Frame};
use crate::util::fnv1a_64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Pgm,
    Png,
}

impl OutputFormat {
    fn extension(&self) -> &'static str {
        match self {
            OutputFormat::Pgm => "pgm",
            OutputFormat::Png => "png",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default)]
pub struct PipelineConfig {
    pub search: SearchConfig,
    pub sampling: SamplingConfig,
    /// Sample over raw grayscale frames instead of aligned patches.
    pub sample_raw: bool,
    pub output_format: OutputFormat,
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        self.search.validate()?;
        self.sampling.validate()
    }
}

struct OutputTracker {
    created: Vec<PathBuf>,
}

impl OutputTracker {
    fn new() -> Self {
        Self {
            created: Vec::new(),
        }
    }

    fn track(&mut self, path: PathBuf) -> PathBuf {
        self.created.push(path.clone());
        path
    }

    fn cleanup(&self) {
        for path in self.created.iter().rev() {
            if path.is_dir() {
                let _ = std::fs::remove_dir_all(path);
            } else {
                let _ = std::fs::remove_file(path);
            }
        }
    }
}

/// Runs the full pipeline and writes `aligned/`, `sampled/` and
/// `manifest.json` under `out_dir`. Annotations beyond frame 0 feed the
/// re-localization detector hook.
pub fn run_pipeline(
    frames_dir: &Path,
    bbox_file: &Path,
    out_dir: &Path,
    config: &PipelineConfig,
) -> Result<RunManifest> {
    config.validate()?;

    let mut timings = Vec::new();
    let clock = Instant::now();
    let frames = load_frames(frames_dir)?;
    let annotations = load_bboxes(bbox_file)?;
    validate_annotations(
        &annotations,
        frames.len(),
        frames[0].width(),
        frames[0].height(),
    )?;
    if config.sampling.n_frames > frames.len() {
        return Err(Error::InvalidConfig(format!(
            "n_frames {} exceeds the {}-frame sequence",
            config.sampling.n_frames,
            frames.len()
        )));
    }
    timings.push(StageTiming {
        stage: "load".into(),
        seconds: clock.elapsed().as_secs_f64(),
    });

    let created_out_dir = !out_dir.exists();
    std::fs::create_dir_all(out_dir)?;
    let mut tracker = OutputTracker::new();
    if created_out_dir {
        tracker.track(out_dir.to_path_buf());
    }

    match run_stages(
        &frames,
        &annotations,
        out_dir,
        config,
        timings,
        &mut tracker,
    ) {
        Ok(manifest) => Ok(manifest),
        Err(e) => {
            tracker.cleanup();
            Err(e)
        }
    }
}

fn run_stages(
    frames: &[Frame],
    annotations: &[BBoxAnnotation],
    out_dir: &Path,
    config: &PipelineConfig,
    mut timings: Vec<StageTiming>,
    tracker: &mut OutputTracker,
) -> Result<RunManifest> {
    let input = InputFingerprint {
        frame_count: frames.len(),
        width: frames[0].width(),
        height: frames[0].height(),
        channels: frames[0].channels(),
        frame_hashes: frames
            .iter()
            .map(|f| format!("{:016x}", fnv1a_64(f.values())))
            .collect(),
    };

    let clock = Instant::now();
    let gray: Vec<Frame> = frames.iter().map(to_grayscale).collect::<Result<_>>()?;
    timings.push(StageTiming {
        stage: "grayscale".into(),
        seconds: clock.elapsed().as_secs_f64(),
    });

    let seed_bbox = annotations
        .iter()
        .find(|a| a.frame_index == 0)
        .expect("frame-0 seed checked by load_bboxes")
        .bbox;
    let mut detector_boxes = std::collections::HashMap::new();
    for a in annotations.iter().filter(|a| a.frame_index > 0) {
        detector_boxes.insert(a.frame_index, a.bbox);
    }

    let clock = Instant::now();
    let mut hook = |_: &Frame, t: usize| -> crate::alignment::DetectorResult {
        Ok(detector_boxes.get(&t).copied())
    };
    let (trace, patches) = align_sequence(&gray, &seed_bbox, &config.search, Some(&mut hook))?;
    timings.push(StageTiming {
        stage: "align".into(),
        seconds: clock.elapsed().as_secs_f64(),
    });

    let clock = Instant::now();
    let sample_input: Vec<PixelPatch> = if config.sample_raw {
        gray.iter().map(|f| f.to_patch()).collect::<Result<_>>()?
    } else {
        patches.clone()
    };
    let sample = sample_sequence(&sample_input, &config.sampling)?;
    timings.push(StageTiming {
        stage: "sample".into(),
        seconds: clock.elapsed().as_secs_f64(),
    });

    let clock = Instant::now();
    let ext = config.output_format.extension();
    let aligned_dir = tracker.track(out_dir.join("aligned"));
    std::fs::create_dir_all(&aligned_dir)?;
    for (t, patch) in patches.iter().enumerate() {
        save_patch(patch, &aligned_dir.join(format!("frame_{t:06}.{ext}")))?;
    }
    let sampled_dir = tracker.track(out_dir.join("sampled"));
    std::fs::create_dir_all(&sampled_dir)?;
    for (rank, &index) in sample.indices.iter().enumerate() {
        let patch = &sample_input[index];
        save_patch(
            patch,
            &sampled_dir.join(format!("sample_{rank:02}_frame_{index:06}.{ext}")),
        )?;
    }
    timings.push(StageTiming {
        stage: "write".into(),
        seconds: clock.elapsed().as_secs_f64(),
    });

    let manifest = RunManifest {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").into(),
        search: config.search.clone(),
        sampling: config.sampling.clone(),
        sample_raw: config.sample_raw,
        input,
        trace,
        sample,
        timings,
    };
    let manifest_path = tracker.track(out_dir.join("manifest.json"));
    write_manifest(&manifest, &manifest_path)?;
    Ok(manifest)
}
