//! Mutual-information temporal feature alignment and joint-MI frame sampling
//! for aerial video frame sequences.
//!
//! Given raw frames and a single bounding-box seed, the library tracks the
//! actor by maximizing histogram-based mutual information over a discrete
//! transform grid (translation, scale, optional rotation), producing an
//! aligned actor-centered patch per frame, then greedily selects the least
//! redundant frames by combining pairwise and approximate joint MI.

pub mod alignment;
pub mod error;
pub mod io;
pub mod measures;
pub mod mi;
pub mod sampling;
pub mod synth;
pub mod transforms;
pub(crate) mod util;

pub use alignment::{
    align_sequence, propagate_search_area, search_best_window, AlignmentTrace, DetectorHook,
    DetectorResult, FrameRecord, SearchConfig,
};
pub use error::{Error, ErrorCategory, Result};
pub use io::{
    load_bboxes, load_frames, read_manifest, run_pipeline, write_manifest, BBoxAnnotation,
    InputFingerprint, OutputFormat, PipelineConfig, RunManifest, SCHEMA_VERSION,
};
pub use measures::{cosine_similarity, euclidean_distance, psnr, ssim, MeasureKind, Polarity};
pub use mi::{
    build_joint_histogram, entropy, joint_entropy, joint_mi_approx, joint_mi_exact,
    mutual_information, mutual_information_from_histogram, patch_entropy, pmfs_from_histogram,
    JointHistogram, PixelPatch, PmfPair, DEFAULT_BINS,
};
pub use sampling::{
    candidate_pool, sample_sequence, score_candidate, SampleResult, SampleStep, SamplingConfig,
};
pub use transforms::{
    extract_patch, make_reference, to_grayscale, BBox, Frame, Rect, ReferenceSpec, TransformParams,
};
