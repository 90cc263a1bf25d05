use std::path::PathBuf;

use thiserror::Error;

use crate::transforms::Rect;

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse classification used by callers (e.g. the CLI) to map failures to
/// exit codes: configuration, input data, or runtime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    Config,
    Input,
    Runtime,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("patch dimensions differ: {left_width}x{left_height} vs {right_width}x{right_height}")]
    DimensionMismatch {
        left_width: u32,
        left_height: u32,
        right_width: u32,
        right_height: u32,
    },

    #[error("histogram bin count {bins} outside supported range [2, 256]")]
    InvalidBins { bins: usize },

    #[error("patch has invalid geometry: {0}")]
    InvalidPatch(String),

    #[error("joint histogram is empty (total count 0)")]
    EmptyHistogram,

    #[error("probability mass function is not normalized (sum = {sum})")]
    InvalidDistribution { sum: f64 },

    #[error("sampled patch set is empty")]
    EmptySampleSet,

    #[error("exact joint-MI table needs {required} cells, exceeding the limit of {limit}")]
    JointTableTooLarge { required: u128, limit: u64 },

    #[error("unsupported channel count {channels} (expected 1 or 3)")]
    UnsupportedChannels { channels: u8 },

    #[error("transformed window center ({x:.1}, {y:.1}) lies outside the {width}x{height} frame")]
    WindowOutOfRange {
        x: f64,
        y: f64,
        width: u32,
        height: u32,
    },

    #[error("region degenerates to zero area after clamping to the frame")]
    DegenerateRegion,

    #[error(
        "bounding box {x},{y} {w}x{h} does not intersect the {frame_width}x{frame_height} frame"
    )]
    BBoxOutsideFrame {
        x: i64,
        y: i64,
        w: u32,
        h: u32,
        frame_width: u32,
        frame_height: u32,
    },

    #[error("search grid is empty for area {area:?}")]
    EmptySearchGrid { area: Rect },

    #[error("alignment failed at frame {frame}: {source}")]
    AlignmentFailed {
        frame: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("detector hook failed at frame {frame}: {message}")]
    Detector { frame: usize, message: String },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("candidate pool is empty past index {k_prev} (sequence length {total})")]
    PoolExhausted { k_prev: usize, total: usize },

    #[error("sampling exhausted at step {step}; indices so far: {indices:?}")]
    SamplingExhausted { step: usize, indices: Vec<usize> },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("frame sequence has a gap: missing index {missing}")]
    FrameGap { missing: u64 },

    #[error("duplicate frame index {index} ({first:?} and {second:?})")]
    DuplicateFrameIndex {
        index: u64,
        first: PathBuf,
        second: PathBuf,
    },

    #[error("frame {path:?} is {width}x{height}, expected {expected_width}x{expected_height}")]
    HeterogeneousFrames {
        path: PathBuf,
        width: u32,
        height: u32,
        expected_width: u32,
        expected_height: u32,
    },

    #[error("cannot decode {path:?}: {message}")]
    Decode { path: PathBuf, message: String },

    #[error("no frame files found in {dir:?}")]
    NoFrames { dir: PathBuf },

    #[error("cannot parse a frame index from file name {path:?}")]
    UnindexedFrame { path: PathBuf },

    #[error("malformed bounding-box record at line {line}: {message}")]
    BBoxParse { line: usize, message: String },

    #[error("bounding-box annotations lack a frame-0 seed")]
    MissingSeed,

    #[error(
        "annotation for frame {frame_index} is out of range (sequence has {frame_count} frames)"
    )]
    AnnotationOutOfRange {
        frame_index: usize,
        frame_count: usize,
    },

    #[error("sprite leaves the frame at step {step}")]
    SpriteOutOfBounds { step: usize },

    #[error("manifest schema version {found} unsupported (expected {expected})")]
    SchemaVersion { found: u64, expected: u32 },

    #[error("cannot parse manifest: {0}")]
    ManifestParse(#[from] serde_json::Error),

    #[error("similarity is undefined for an all-zero patch")]
    UndefinedSimilarity,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn category(&self) -> ErrorCategory {
        use Error::*;
        match self {
            InvalidBins { .. } | InvalidConfig(_) | MissingSeed => ErrorCategory::Config,
            FrameGap { .. }
            | DuplicateFrameIndex { .. }
            | HeterogeneousFrames { .. }
            | Decode { .. }
            | NoFrames { .. }
            | UnindexedFrame { .. }
            | BBoxParse { .. }
            | AnnotationOutOfRange { .. }
            | BBoxOutsideFrame { .. }
            | SchemaVersion { .. }
            | ManifestParse(_) => ErrorCategory::Input,
            AlignmentFailed { source, .. } => source.category(),
            _ => ErrorCategory::Runtime,
        }
    }
}
