//! Sliding-window similarity-maximization search with search-area propagation
//! and a re-localization policy, producing the aligned patch sequence.
//!
//! The displacement grid is anchored at the search-area center, so with
//! `search_expansion = 1.0` the only candidate is the previous window and the
//! worst-case quantization error of a single search is half a stride per axis
//! (given a similarity landscape that decays away from its peak).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{MeasureKind, Polarity};
use crate::mi::{PixelPatch, DEFAULT_BINS, MAX_BINS, MIN_BINS};
use crate::transforms::{
    self, enlarge_bbox, extract_patch, make_reference, BBox, Frame, Rect, ReferenceSpec,
    TransformParams,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchConfig {
    /// Sliding-window stride in pixels.
    pub stride: u32,
    pub scale_set: Vec<f64>,
    /// Rotation grid in radians; `[0.0]` assumes stabilized footage.
    pub theta_set: Vec<f64>,
    /// Search-area size as a multiple of the previous window.
    pub search_expansion: f64,
    pub bins: usize,
    /// Fixed re-localization cadence in frames.
    pub relocalize_every: usize,
    /// Re-localize when a score drops below this fraction of the running
    /// mean of prior scores in the current tracking segment.
    pub relocalize_mi_floor: f64,
    pub measure: MeasureKind,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            stride: 10,
            scale_set: vec![0.9, 1.0, 1.1],
            theta_set: vec![0.0],
            search_expansion: 1.25,
            bins: DEFAULT_BINS,
            relocalize_every: 16,
            relocalize_mi_floor: 0.5,
            measure: MeasureKind::Mi,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.stride == 0 {
            return Err(Error::InvalidConfig("stride must be at least 1".into()));
        }
        if self.scale_set.is_empty() || self.scale_set.iter().any(|&s| s.is_nan() || s <= 0.0) {
            return Err(Error::InvalidConfig(
                "scale_set must be nonempty with positive entries".into(),
            ));
        }
        if self.theta_set.is_empty() {
            return Err(Error::InvalidConfig("theta_set must be nonempty".into()));
        }
        for &theta in &self.theta_set {
            if theta <= -std::f64::consts::PI || theta > std::f64::consts::PI {
                return Err(Error::InvalidConfig(format!(
                    "theta {theta} outside (-pi, pi]"
                )));
            }
        }
        if self.search_expansion.is_nan() || self.search_expansion < 1.0 {
            return Err(Error::InvalidConfig(format!(
                "search_expansion must be at least 1, got {}",
                self.search_expansion
            )));
        }
        if !(MIN_BINS..=MAX_BINS).contains(&self.bins) {
            return Err(Error::InvalidBins { bins: self.bins });
        }
        if self.relocalize_every == 0 {
            return Err(Error::InvalidConfig(
                "relocalize_every must be at least 1".into(),
            ));
        }
        if self.relocalize_mi_floor.is_nan() || self.relocalize_mi_floor < 0.0 {
            return Err(Error::InvalidConfig(
                "relocalize_mi_floor must be nonnegative".into(),
            ));
        }
        Ok(())
    }
}

/// Per-frame record of the alignment run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameRecord {
    pub frame_index: usize,
    pub params: TransformParams,
    /// Similarity score of the chosen window against the reference used at
    /// this step (bits for MI).
    #[serde(with = "crate::util::score_serde")]
    pub score: f64,
    pub search_area: Rect,
    pub relocalized: bool,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct AlignmentTrace {
    pub records: Vec<FrameRecord>,
}

impl AlignmentTrace {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

pub type DetectorResult =
    std::result::Result<Option<BBox>, Box<dyn std::error::Error + Send + Sync>>;
/// Caller-supplied localization hook: frame and frame index to optional box.
pub type DetectorHook<'a> = dyn FnMut(&Frame, usize) -> DetectorResult + 'a;

/// Search area for the next frame: the window placed by `prev`, expanded by
/// `expansion` about its center and clamped to the frame.
pub fn propagate_search_area(
    prev: &TransformParams,
    ref_size: (u32, u32),
    expansion: f64,
    frame_width: u32,
    frame_height: u32,
) -> Rect {
    let win_w = (prev.scale * ref_size.0 as f64).round().max(1.0);
    let win_h = (prev.scale * ref_size.1 as f64).round().max(1.0);
    let area_w = (expansion * win_w).round().max(1.0) as i64;
    let area_h = (expansion * win_h).round().max(1.0) as i64;
    let x = (prev.displacement.0 + (win_h - area_h as f64) / 2.0).round() as i64;
    let y = (prev.displacement.1 + (win_w - area_w as f64) / 2.0).round() as i64;
    BBox::new(x, y, area_w as u32, area_h as u32)
        .clamp_to_frame(frame_width, frame_height)
        .unwrap_or(Rect {
            x: 0,
            y: 0,
            w: frame_width,
            h: frame_height,
        })
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    dx: i64,
    dy: i64,
    scale: f64,
    theta: f64,
    win_w: i64,
    win_h: i64,
}

#[derive(Debug, Clone, Copy)]
struct Scored {
    candidate: Candidate,
    score: f64,
    ranked: f64,
    center_dist2: f64,
}

/// Total order on scored candidates: better ranked score first, then the
/// window center closest to the search-area center, then the scale closest
/// to 1, then the smallest |theta|, then lexicographic (dx, dy), and finally
/// (scale, theta) so the order is total. Reducing with this comparator is
/// order-independent, which keeps parallel evaluation deterministic.
fn better(a: &Scored, b: &Scored) -> bool {
    if a.ranked != b.ranked {
        return a.ranked > b.ranked;
    }
    if a.center_dist2 != b.center_dist2 {
        return a.center_dist2 < b.center_dist2;
    }
    let dev_a = (a.candidate.scale - 1.0).abs();
    let dev_b = (b.candidate.scale - 1.0).abs();
    if dev_a != dev_b {
        return dev_a < dev_b;
    }
    if a.candidate.theta.abs() != b.candidate.theta.abs() {
        return a.candidate.theta.abs() < b.candidate.theta.abs();
    }
    if a.candidate.dx != b.candidate.dx {
        return a.candidate.dx < b.candidate.dx;
    }
    if a.candidate.dy != b.candidate.dy {
        return a.candidate.dy < b.candidate.dy;
    }
    if a.candidate.scale != b.candidate.scale {
        return a.candidate.scale < b.candidate.scale;
    }
    a.candidate.theta < b.candidate.theta
}

fn ceil_div(a: i64, b: i64) -> i64 {
    (a + b - 1).div_euclid(b)
}

fn grid_positions(anchor: i64, stride: i64, lo: i64, hi: i64) -> Vec<i64> {
    if lo > hi {
        return Vec::new();
    }
    let k_min = ceil_div(lo - anchor, stride);
    let k_max = (hi - anchor).div_euclid(stride);
    (k_min..=k_max).map(|k| anchor + k * stride).collect()
}

fn build_grid(area: &Rect, ref_size: (u32, u32), config: &SearchConfig) -> Vec<Candidate> {
    let stride = config.stride as i64;
    let ax = area.x as i64;
    let ay = area.y as i64;
    let ah = area.h as i64;
    let aw = area.w as i64;
    let mut grid = Vec::new();
    for &scale in &config.scale_set {
        let win_w = ((scale * ref_size.0 as f64).round() as i64).max(1);
        let win_h = ((scale * ref_size.1 as f64).round() as i64).max(1);
        if win_w > aw || win_h > ah {
            continue;
        }
        let x_anchor = ax + (ah - win_h) / 2;
        let y_anchor = ay + (aw - win_w) / 2;
        for dx in grid_positions(x_anchor, stride, ax, ax + ah - win_h) {
            for dy in grid_positions(y_anchor, stride, ay, ay + aw - win_w) {
                for &theta in &config.theta_set {
                    grid.push(Candidate {
                        dx,
                        dy,
                        scale,
                        theta,
                        win_w,
                        win_h,
                    });
                }
            }
        }
    }
    grid
}

/// Evaluates the full discrete grid (no early exit) of displacements at the
/// configured stride within `search_area`, crossed with the scale and theta
/// sets, and returns the best transform with its score.
pub fn search_best_window(
    frame: &Frame,
    reference: &ReferenceSpec,
    search_area: Rect,
    config: &SearchConfig,
) -> Result<(TransformParams, f64)> {
    config.validate()?;
    let ref_size = (reference.patch.width(), reference.patch.height());
    let grid = build_grid(&search_area, ref_size, config);
    if grid.is_empty() {
        return Err(Error::EmptySearchGrid { area: search_area });
    }

    let (area_cx, area_cy) = search_area.center();
    let scored: Vec<Scored> = grid
        .par_iter()
        .map(|c| -> Result<Scored> {
            let params = TransformParams {
                theta: c.theta,
                displacement: (c.dx as f64, c.dy as f64),
                scale: c.scale,
            };
            let patch = extract_patch(frame, &params, ref_size.0, ref_size.1)?;
            let score = config
                .measure
                .evaluate(&patch, &reference.patch, config.bins)?;
            let ranked = match config.measure.polarity() {
                Polarity::HigherBetter => score,
                Polarity::LowerBetter => -score,
            };
            let cx = c.dx as f64 + (c.win_h as f64 - 1.0) / 2.0;
            let cy = c.dy as f64 + (c.win_w as f64 - 1.0) / 2.0;
            let center_dist2 = (cx - area_cx).powi(2) + (cy - area_cy).powi(2);
            Ok(Scored {
                candidate: *c,
                score,
                ranked,
                center_dist2,
            })
        })
        .collect::<Result<_>>()?;

    let best = scored
        .iter()
        .copied()
        .reduce(|a, b| if better(&b, &a) { b } else { a })
        .expect("grid is nonempty");
    Ok((
        TransformParams {
            theta: best.candidate.theta,
            displacement: (best.candidate.dx as f64, best.candidate.dy as f64),
            scale: best.candidate.scale,
        },
        best.score,
    ))
}

/// One re-localization: ask the detector (when present) for a box, derive a
/// search area from it (full frame otherwise), and search against the
/// original frame-0 reference.
fn relocalize_step(
    frames: &[Frame],
    gray: &[Frame],
    t: usize,
    reference0: &ReferenceSpec,
    config: &SearchConfig,
    detector: &mut Option<&mut DetectorHook<'_>>,
) -> Result<(Rect, TransformParams, f64)> {
    let frame_width = gray[t].width();
    let frame_height = gray[t].height();
    let ref_size = (reference0.patch.width(), reference0.patch.height());
    let bbox = match detector.as_mut() {
        Some(hook) => hook(&frames[t], t).map_err(|e| Error::Detector {
            frame: t,
            message: e.to_string(),
        })?,
        None => None,
    };
    let area = relocalization_area(bbox.as_ref(), ref_size, config, frame_width, frame_height);
    let (params, score) = search_best_window(&gray[t], reference0, area, config).map_err(|e| {
        Error::AlignmentFailed {
            frame: t,
            source: Box::new(e),
        }
    })?;
    Ok((area, params, score))
}

fn relocalization_area(
    bbox: Option<&BBox>,
    ref_size: (u32, u32),
    config: &SearchConfig,
    frame_width: u32,
    frame_height: u32,
) -> Rect {
    let full = Rect {
        x: 0,
        y: 0,
        w: frame_width,
        h: frame_height,
    };
    let Some(bbox) = bbox else { return full };
    let enlarged = enlarge_bbox(bbox);
    let w = enlarged.w.max(ref_size.0) as f64;
    let h = enlarged.h.max(ref_size.1) as f64;
    let area_w = (config.search_expansion * w).round() as i64;
    let area_h = (config.search_expansion * h).round() as i64;
    let x = enlarged.x + (enlarged.h as i64 - area_h) / 2;
    let y = enlarged.y + (enlarged.w as i64 - area_w) / 2;
    BBox::new(x, y, area_w as u32, area_h as u32)
        .clamp_to_frame(frame_width, frame_height)
        .unwrap_or(full)
}

/// Aligns a frame sequence against a chained reference. The reference starts
/// from `seed_bbox` on frame 0 and is replaced by each newly aligned patch;
/// the frame-0 reference is retained for re-localization restarts, which fire
/// on a fixed cadence or when the score drops below the configured fraction
/// of the running segment mean. Returns one aligned patch per frame, all of
/// reference dimensions.
pub fn align_sequence(
    frames: &[Frame],
    seed_bbox: &BBox,
    config: &SearchConfig,
    mut detector: Option<&mut DetectorHook<'_>>,
) -> Result<(AlignmentTrace, Vec<PixelPatch>)> {
    config.validate()?;
    if frames.is_empty() {
        return Err(Error::Precondition("frame sequence is empty".into()));
    }
    let frame_width = frames[0].width();
    let frame_height = frames[0].height();
    for frame in frames {
        if frame.width() != frame_width || frame.height() != frame_height {
            return Err(Error::Precondition(format!(
                "frames must share dimensions; found {}x{} and {}x{}",
                frame_width,
                frame_height,
                frame.width(),
                frame.height()
            )));
        }
    }

    let gray: Vec<Frame> = frames
        .iter()
        .map(transforms::to_grayscale)
        .collect::<Result<_>>()?;

    let reference0 = make_reference(&gray[0], seed_bbox)?;
    let ref_size = (reference0.patch.width(), reference0.patch.height());
    let ref_rect = Rect {
        x: reference0.origin_params.displacement.0 as u32,
        y: reference0.origin_params.displacement.1 as u32,
        w: ref_size.0,
        h: ref_size.1,
    };
    let self_score = config
        .measure
        .evaluate(&reference0.patch, &reference0.patch, config.bins)?;

    let mut records = vec![FrameRecord {
        frame_index: 0,
        params: reference0.origin_params,
        score: self_score,
        search_area: ref_rect,
        relocalized: false,
    }];
    let mut patches = vec![reference0.patch.clone()];

    let mut current = reference0.clone();
    // Scores accepted since the last re-localization; the frame-0 self-match
    // is an entropy, not a cross-frame score, and is excluded.
    let mut segment: Vec<f64> = Vec::new();

    for t in 1..frames.len() {
        let wrap = |e: Error| Error::AlignmentFailed {
            frame: t,
            source: Box::new(e),
        };

        let cadence = t % config.relocalize_every == 0;
        let (area, params, score, relocalized) = if cadence {
            let (area, params, score) =
                relocalize_step(frames, &gray, t, &reference0, config, &mut detector)?;
            (area, params, score, true)
        } else {
            let area = propagate_search_area(
                &current.origin_params,
                ref_size,
                config.search_expansion,
                frame_width,
                frame_height,
            );
            let (params, score) =
                search_best_window(&gray[t], &current, area, config).map_err(wrap)?;
            let floor_hit = config.measure.polarity() == Polarity::HigherBetter
                && !segment.is_empty()
                && score
                    < config.relocalize_mi_floor
                        * (segment.iter().sum::<f64>() / segment.len() as f64);
            if floor_hit {
                let (area, params, score) =
                    relocalize_step(frames, &gray, t, &reference0, config, &mut detector)?;
                (area, params, score, true)
            } else {
                (area, params, score, false)
            }
        };

        if relocalized {
            segment.clear();
        }
        let patch = extract_patch(&gray[t], &params, ref_size.0, ref_size.1).map_err(wrap)?;
        segment.push(score);
        current = ReferenceSpec {
            patch: patch.clone(),
            origin_params: params,
            source_frame_index: t,
        };
        records.push(FrameRecord {
            frame_index: t,
            params,
            score,
            search_area: area,
            relocalized,
        });
        patches.push(patch);
    }

    Ok((AlignmentTrace { records }, patches))
}
