//! Bounding-box annotation files. Two formats are accepted: whitespace- or
//! comma-separated text lines `frame_index x y w h` (with `#` comments), or a
//! JSON array of objects with the same fields. `x` is the top row, `y` the
//! left column.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::transforms::BBox;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnnotationSource {
    Seed,
    Detector,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BBoxAnnotation {
    pub frame_index: usize,
    pub bbox: BBox,
    pub source: AnnotationSource,
}

#[derive(Deserialize)]
struct JsonRecord {
    frame_index: usize,
    x: i64,
    y: i64,
    w: u32,
    h: u32,
}

fn parse_text_line(line_no: usize, line: &str) -> Result<Option<BBoxAnnotation>> {
    let trimmed = line.trim();
    if trimmed.is_empty() || trimmed.starts_with('#') {
        return Ok(None);
    }
    let fields: Vec<&str> = trimmed
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|f| !f.is_empty())
        .collect();
    if fields.len() != 5 {
        return Err(Error::BBoxParse {
            line: line_no,
            message: format!(
                "expected 5 fields (frame_index x y w h), got {}",
                fields.len()
            ),
        });
    }
    let parse_int = |field: &str, name: &str| -> Result<i64> {
        field.parse().map_err(|_| Error::BBoxParse {
            line: line_no,
            message: format!("cannot parse {name} from {field:?}"),
        })
    };
    let frame_index = parse_int(fields[0], "frame_index")?;
    let x = parse_int(fields[1], "x")?;
    let y = parse_int(fields[2], "y")?;
    let w = parse_int(fields[3], "w")?;
    let h = parse_int(fields[4], "h")?;
    if frame_index < 0 {
        return Err(Error::BBoxParse {
            line: line_no,
            message: "frame_index must be nonnegative".into(),
        });
    }
    if w <= 0 || h <= 0 {
        return Err(Error::BBoxParse {
            line: line_no,
            message: format!("box dimensions must be positive, got {w}x{h}"),
        });
    }
    Ok(Some(BBoxAnnotation {
        frame_index: frame_index as usize,
        bbox: BBox::new(x, y, w as u32, h as u32),
        source: AnnotationSource::Seed,
    }))
}

/// Parses annotations and checks that a frame-0 seed is present. Frame-bound
/// validation happens in [`validate_annotations`] once dimensions are known.
pub fn load_bboxes(path: &Path) -> Result<Vec<BBoxAnnotation>> {
    let text = std::fs::read_to_string(path)?;
    let mut annotations = Vec::new();
    if text.trim_start().starts_with('[') {
        let records: Vec<JsonRecord> =
            serde_json::from_str(&text).map_err(|e| Error::BBoxParse {
                line: e.line(),
                message: e.to_string(),
            })?;
        for (i, r) in records.into_iter().enumerate() {
            if r.w == 0 || r.h == 0 {
                return Err(Error::BBoxParse {
                    line: i,
                    message: format!("box dimensions must be positive, got {}x{}", r.w, r.h),
                });
            }
            annotations.push(BBoxAnnotation {
                frame_index: r.frame_index,
                bbox: BBox::new(r.x, r.y, r.w, r.h),
                source: AnnotationSource::Seed,
            });
        }
    } else {
        for (i, line) in text.lines().enumerate() {
            if let Some(record) = parse_text_line(i + 1, line)? {
                annotations.push(record);
            }
        }
    }
    if !annotations.iter().any(|a| a.frame_index == 0) {
        return Err(Error::MissingSeed);
    }
    Ok(annotations)
}

/// Validates annotations against the sequence length and frame bounds.
pub fn validate_annotations(
    annotations: &[BBoxAnnotation],
    frame_count: usize,
    frame_width: u32,
    frame_height: u32,
) -> Result<()> {
    for a in annotations {
        if a.frame_index >= frame_count {
            return Err(Error::AnnotationOutOfRange {
                frame_index: a.frame_index,
                frame_count,
            });
        }
        if !a.bbox.intersects_frame(frame_width, frame_height) {
            return Err(Error::BBoxOutsideFrame {
                x: a.bbox.x,
                y: a.bbox.y,
                w: a.bbox.w,
                h: a.bbox.h,
                frame_width,
                frame_height,
            });
        }
    }
    Ok(())
}

/// Writes annotations in the text format, one record per line.
pub fn save_bboxes(annotations: &[BBoxAnnotation], path: &Path) -> Result<()> {
    let mut text = String::from("# frame_index x y w h\n");
    for a in annotations {
        text.push_str(&format!(
            "{} {} {} {} {}\n",
            a.frame_index, a.bbox.x, a.bbox.y, a.bbox.w, a.bbox.h
        ));
    }
    std::fs::write(path, text)?;
    Ok(())
}
