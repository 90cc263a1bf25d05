//! The region-extraction operation (rotation, translation, scaling) and
//! reference-image construction from a bounding box.
//!
//! Frame coordinates follow the raw-frame convention: origin at the top-left
//! corner, `x` along rows (downward), `y` along columns (rightward). Every
//! type in this module uses that axis naming.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mi::PixelPatch;

/// Fraction added to the box height overall (split per [`TOP_MARGIN`] and a
/// symmetric remainder) when building a reference image.
pub const VERTICAL_ENLARGEMENT: f64 = 0.25;
/// Fraction added to the box width, split symmetrically.
pub const HORIZONTAL_ENLARGEMENT: f64 = 0.10;
/// Extra margin added above the top edge for actions with vertical extent.
pub const TOP_MARGIN: f64 = 0.15;

/// A raw video frame: 8-bit, row-major, channel-interleaved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    width: u32,
    height: u32,
    channels: u8,
    values: Vec<u8>,
}

impl Frame {
    pub fn new(width: u32, height: u32, channels: u8, values: Vec<u8>) -> Result<Self> {
        if channels != 1 && channels != 3 {
            return Err(Error::UnsupportedChannels { channels });
        }
        let expected = width as usize * height as usize * channels as usize;
        if width == 0 || height == 0 || values.len() != expected {
            return Err(Error::InvalidPatch(format!(
                "{}x{}x{} frame needs {} values, got {}",
                width,
                height,
                channels,
                expected,
                values.len()
            )));
        }
        Ok(Self {
            width,
            height,
            channels,
            values,
        })
    }

    /// Builds a single-channel frame from a grayscale patch.
    pub fn from_patch(patch: &PixelPatch) -> Self {
        Self {
            width: patch.width(),
            height: patch.height(),
            channels: 1,
            values: patch.values().to_vec(),
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn channels(&self) -> u8 {
        self.channels
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    pub fn is_gray(&self) -> bool {
        self.channels == 1
    }

    /// Intensity at row `x`, column `y` of a single-channel frame.
    #[inline]
    pub fn gray_at(&self, x: u32, y: u32) -> u8 {
        debug_assert_eq!(self.channels, 1);
        self.values[x as usize * self.width as usize + y as usize]
    }

    /// Reinterprets a single-channel frame as a patch.
    pub fn to_patch(&self) -> Result<PixelPatch> {
        if self.channels != 1 {
            return Err(Error::UnsupportedChannels {
                channels: self.channels,
            });
        }
        PixelPatch::new(self.width, self.height, self.values.clone())
    }
}

/// Parameters of the region-extraction operation: rotation angle, translation
/// and scale. `displacement` is `(dx, dy)` in frame coordinates (dx along
/// rows, dy along columns).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransformParams {
    pub theta: f64,
    pub displacement: (f64, f64),
    pub scale: f64,
}

impl TransformParams {
    pub fn identity() -> Self {
        Self {
            theta: 0.0,
            displacement: (0.0, 0.0),
            scale: 1.0,
        }
    }

    pub fn translation(dx: f64, dy: f64) -> Self {
        Self {
            theta: 0.0,
            displacement: (dx, dy),
            scale: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.scale.is_nan() || self.scale <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "scale must be positive, got {}",
                self.scale
            )));
        }
        if self.theta <= -std::f64::consts::PI || self.theta > std::f64::consts::PI {
            return Err(Error::InvalidConfig(format!(
                "theta must lie in (-pi, pi], got {}",
                self.theta
            )));
        }
        Ok(())
    }
}

/// Axis-aligned bounding box; `x` is the top row, `y` the left column, `h`
/// the vertical (row) extent and `w` the horizontal (column) extent. The
/// origin may be negative for boxes partially outside the frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BBox {
    pub x: i64,
    pub y: i64,
    pub w: u32,
    pub h: u32,
}

impl BBox {
    pub fn new(x: i64, y: i64, w: u32, h: u32) -> Self {
        Self { x, y, w, h }
    }

    pub fn intersects_frame(&self, frame_width: u32, frame_height: u32) -> bool {
        self.w > 0
            && self.h > 0
            && self.x < frame_height as i64
            && self.y < frame_width as i64
            && self.x + self.h as i64 > 0
            && self.y + self.w as i64 > 0
    }

    /// Intersection with the frame, or `None` when empty.
    pub fn clamp_to_frame(&self, frame_width: u32, frame_height: u32) -> Option<Rect> {
        let x0 = self.x.max(0);
        let y0 = self.y.max(0);
        let x1 = (self.x + self.h as i64).min(frame_height as i64);
        let y1 = (self.y + self.w as i64).min(frame_width as i64);
        if x1 <= x0 || y1 <= y0 {
            return None;
        }
        Some(Rect {
            x: x0 as u32,
            y: y0 as u32,
            w: (y1 - y0) as u32,
            h: (x1 - x0) as u32,
        })
    }
}

/// A rectangle fully inside a frame, same axis naming as [`BBox`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rect {
    pub x: u32,
    pub y: u32,
    pub w: u32,
    pub h: u32,
}

impl Rect {
    pub fn center(&self) -> (f64, f64) {
        (
            self.x as f64 + (self.h as f64 - 1.0) / 2.0,
            self.y as f64 + (self.w as f64 - 1.0) / 2.0,
        )
    }
}

/// Reference image plus the parameters it was extracted with.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceSpec {
    pub patch: PixelPatch,
    pub origin_params: TransformParams,
    pub source_frame_index: usize,
}

/// BT.601 luma conversion; single-channel frames pass through unchanged.
pub fn to_grayscale(frame: &Frame) -> Result<Frame> {
    match frame.channels {
        1 => Ok(frame.clone()),
        3 => {
            let mut values = Vec::with_capacity(frame.values.len() / 3);
            for rgb in frame.values.chunks_exact(3) {
                let luma = 0.299 * rgb[0] as f64 + 0.587 * rgb[1] as f64 + 0.114 * rgb[2] as f64;
                values.push(luma.round().clamp(0.0, 255.0) as u8);
            }
            Frame::new(frame.width, frame.height, 1, values)
        }
        channels => Err(Error::UnsupportedChannels { channels }),
    }
}

#[inline]
fn sample_bilinear(frame: &Frame, x: f64, y: f64) -> f64 {
    // Clamp-to-edge: out-of-bounds coordinates take the nearest border pixel.
    let x = x.clamp(0.0, frame.height as f64 - 1.0);
    let y = y.clamp(0.0, frame.width as f64 - 1.0);
    let x0 = x.floor() as u32;
    let y0 = y.floor() as u32;
    let x1 = (x0 + 1).min(frame.height - 1);
    let y1 = (y0 + 1).min(frame.width - 1);
    let fx = x - x0 as f64;
    let fy = y - y0 as f64;

    let p00 = frame.gray_at(x0, y0) as f64;
    let p01 = frame.gray_at(x0, y1) as f64;
    let p10 = frame.gray_at(x1, y0) as f64;
    let p11 = frame.gray_at(x1, y1) as f64;

    let top = p00 + fy * (p01 - p00);
    let bottom = p10 + fy * (p11 - p10);
    top + fx * (bottom - top)
}

/// Extracts an `out_w` x `out_h` patch: each output pixel `(u, v)` samples the
/// source at `R(theta) * (scale*u, scale*v) + displacement` with bilinear
/// interpolation and clamp-to-edge behavior.
pub fn extract_patch(
    frame: &Frame,
    params: &TransformParams,
    out_w: u32,
    out_h: u32,
) -> Result<PixelPatch> {
    if !frame.is_gray() {
        return Err(Error::UnsupportedChannels {
            channels: frame.channels,
        });
    }
    if out_w == 0 || out_h == 0 {
        return Err(Error::InvalidPatch(format!(
            "output dimensions must be positive, got {out_w}x{out_h}"
        )));
    }
    params.validate()?;

    let (sin, cos) = params.theta.sin_cos();
    let (dx, dy) = params.displacement;
    let s = params.scale;
    let map = |u: f64, v: f64| -> (f64, f64) {
        let su = s * u;
        let sv = s * v;
        (cos * su - sin * sv + dx, sin * su + cos * sv + dy)
    };

    let (cx, cy) = map((out_h as f64 - 1.0) / 2.0, (out_w as f64 - 1.0) / 2.0);
    if cx < 0.0 || cx > frame.height as f64 - 1.0 || cy < 0.0 || cy > frame.width as f64 - 1.0 {
        return Err(Error::WindowOutOfRange {
            x: cx,
            y: cy,
            width: frame.width,
            height: frame.height,
        });
    }

    let mut values = Vec::with_capacity(out_w as usize * out_h as usize);
    for u in 0..out_h {
        for v in 0..out_w {
            let (sx, sy) = map(u as f64, v as f64);
            values.push(sample_bilinear(frame, sx, sy).round().clamp(0.0, 255.0) as u8);
        }
    }
    PixelPatch::new(out_w, out_h, values)
}

fn round_px(v: f64) -> i64 {
    v.round() as i64
}

/// The reference enlargement before clamping: width grows by 10% (split
/// symmetrically), height by 25% (15% of `h` above the top edge plus 10%
/// split symmetrically). Dimensions round half-up with a 1-pixel floor.
pub fn enlarge_bbox(bbox: &BBox) -> BBox {
    let w = bbox.w as f64;
    let h = bbox.h as f64;
    let ew = round_px((1.0 + HORIZONTAL_ENLARGEMENT) * w).max(1) as u32;
    let eh = round_px((1.0 + VERTICAL_ENLARGEMENT) * h).max(1) as u32;
    let left = bbox.y - round_px(HORIZONTAL_ENLARGEMENT / 2.0 * w);
    let top = bbox.x - round_px((TOP_MARGIN + (VERTICAL_ENLARGEMENT - TOP_MARGIN) / 2.0) * h);
    BBox::new(top, left, ew, eh)
}

/// Builds the reference image from a bounding box on a grayscale frame.
pub fn make_reference(frame: &Frame, bbox: &BBox) -> Result<ReferenceSpec> {
    if !bbox.intersects_frame(frame.width, frame.height) {
        return Err(Error::BBoxOutsideFrame {
            x: bbox.x,
            y: bbox.y,
            w: bbox.w,
            h: bbox.h,
            frame_width: frame.width,
            frame_height: frame.height,
        });
    }
    let rect = enlarge_bbox(bbox)
        .clamp_to_frame(frame.width, frame.height)
        .ok_or(Error::DegenerateRegion)?;
    let params = TransformParams::translation(rect.x as f64, rect.y as f64);
    let patch = extract_patch(frame, &params, rect.w, rect.h)?;
    Ok(ReferenceSpec {
        patch,
        origin_params: params,
        source_frame_index: 0,
    })
}
