//! Loading frame sequences from numbered still images (PNG, binary PGM/PPM)
//! and persisting patches.

use std::path::{Path, PathBuf};

use image::{DynamicImage, ExtendedColorType, ImageFormat};

use crate::error::{Error, Result};
use crate::mi::PixelPatch;
use crate::transforms::Frame;

const SUPPORTED_EXTENSIONS: [&str; 3] = ["png", "pgm", "ppm"];

fn frame_index_from_name(path: &Path) -> Result<u64> {
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .ok_or_else(|| Error::UnindexedFrame { path: path.into() })?;
    // The index is the last contiguous digit run in the stem.
    let mut digits = String::new();
    let mut current = String::new();
    for ch in stem.chars() {
        if ch.is_ascii_digit() {
            current.push(ch);
        } else {
            if !current.is_empty() {
                digits = std::mem::take(&mut current);
            }
        }
    }
    if !current.is_empty() {
        digits = current;
    }
    digits
        .parse()
        .map_err(|_| Error::UnindexedFrame { path: path.into() })
}

fn decode_frame(path: &Path) -> Result<Frame> {
    let img = image::open(path).map_err(|e| Error::Decode {
        path: path.into(),
        message: e.to_string(),
    })?;
    let frame = match img {
        DynamicImage::ImageLuma8(gray) => {
            let (w, h) = gray.dimensions();
            Frame::new(w, h, 1, gray.into_raw())?
        }
        DynamicImage::ImageLuma16(_) | DynamicImage::ImageLumaA8(_) => {
            let gray = img.to_luma8();
            let (w, h) = gray.dimensions();
            Frame::new(w, h, 1, gray.into_raw())?
        }
        other => {
            let rgb = other.to_rgb8();
            let (w, h) = rgb.dimensions();
            Frame::new(w, h, 3, rgb.into_raw())?
        }
    };
    Ok(frame)
}

/// Loads all frames in a directory, ordered by the numeric index embedded in
/// each file name (e.g. `frame_000001.pgm`). Indices must be consecutive and
/// all frames must share dimensions.
pub fn load_frames(dir: &Path) -> Result<Vec<Frame>> {
    let mut entries: Vec<(u64, PathBuf)> = Vec::new();
    for entry in std::fs::read_dir(dir)? {
        let path = entry?.path();
        if !path.is_file() {
            continue;
        }
        let ext = path
            .extension()
            .and_then(|e| e.to_str())
            .map(|e| e.to_ascii_lowercase());
        match ext {
            Some(e) if SUPPORTED_EXTENSIONS.contains(&e.as_str()) => {
                entries.push((frame_index_from_name(&path)?, path));
            }
            _ => continue,
        }
    }
    if entries.is_empty() {
        return Err(Error::NoFrames { dir: dir.into() });
    }
    entries.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    for pair in entries.windows(2) {
        if pair[0].0 == pair[1].0 {
            return Err(Error::DuplicateFrameIndex {
                index: pair[0].0,
                first: pair[0].1.clone(),
                second: pair[1].1.clone(),
            });
        }
        if pair[1].0 != pair[0].0 + 1 {
            return Err(Error::FrameGap {
                missing: pair[0].0 + 1,
            });
        }
    }

    let mut frames = Vec::with_capacity(entries.len());
    for (_, path) in &entries {
        let frame = decode_frame(path)?;
        if let Some(first) = frames.first() {
            let first: &Frame = first;
            if frame.width() != first.width() || frame.height() != first.height() {
                return Err(Error::HeterogeneousFrames {
                    path: path.clone(),
                    width: frame.width(),
                    height: frame.height(),
                    expected_width: first.width(),
                    expected_height: first.height(),
                });
            }
        }
        frames.push(frame);
    }
    Ok(frames)
}

/// Writes an 8-bit grayscale patch; the format follows the file extension
/// (`.pgm` or `.png`).
pub fn save_patch(patch: &PixelPatch, path: &Path) -> Result<()> {
    let format = match path.extension().and_then(|e| e.to_str()) {
        Some("png") => ImageFormat::Png,
        _ => ImageFormat::Pnm,
    };
    image::save_buffer_with_format(
        path,
        patch.values(),
        patch.width(),
        patch.height(),
        ExtendedColorType::L8,
        format,
    )
    .map_err(|e| Error::Decode {
        path: path.into(),
        message: e.to_string(),
    })
}

/// Writes a frame as PGM (1 channel) or PPM (3 channels).
pub fn save_frame(frame: &Frame, path: &Path) -> Result<()> {
    let color = if frame.channels() == 1 {
        ExtendedColorType::L8
    } else {
        ExtendedColorType::Rgb8
    };
    image::save_buffer_with_format(
        path,
        frame.values(),
        frame.width(),
        frame.height(),
        color,
        ImageFormat::Pnm,
    )
    .map_err(|e| Error::Decode {
        path: path.into(),
        message: e.to_string(),
    })
}
