//! Frame-sequence ingestion, annotation parsing, run manifests, and the
//! end-to-end pipeline.

pub mod bboxes;
pub mod frames;
pub mod manifest;
pub mod pipeline;

pub use bboxes::{load_bboxes, validate_annotations, AnnotationSource, BBoxAnnotation};
pub use frames::{load_frames, save_patch};
pub use manifest::{
    read_manifest, write_manifest, InputFingerprint, RunManifest, StageTiming, SCHEMA_VERSION,
};
pub use pipeline::{run_pipeline, OutputFormat, PipelineConfig};
