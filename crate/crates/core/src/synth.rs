//! Deterministic synthetic sequences with ground-truth sprite motion, used by
//! tests and acceptance runs. Backgrounds are seeded two-octave value noise
//! so mutual information sees a nontrivial background term; a flat background
//! would make alignment degenerate.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::mi::PixelPatch;
use crate::transforms::{BBox, Frame};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Background {
    TexturedNoise,
    Gradient,
}

#[derive(Debug, Clone)]
pub struct MotionSpec {
    /// Sprite top-left position (row, column) before `path[0]` is applied.
    pub start: (i32, i32),
    /// Per-frame (dx, dy) sprite displacements, accumulated from `start`;
    /// `path[0]` applies to frame 0. Length equals the frame count.
    pub path: Vec<(i32, i32)>,
    /// Per-frame sprite scale; length equals the frame count.
    pub scale_drift: Vec<f64>,
    pub background: Background,
    /// Standard deviation of additive Gaussian pixel noise; 0 disables it.
    pub noise_sigma: f64,
    pub seed: u64,
}

impl MotionSpec {
    /// A constant-scale spec with the given path and noise level.
    pub fn new(start: (i32, i32), path: Vec<(i32, i32)>, noise_sigma: f64, seed: u64) -> Self {
        let frames = path.len();
        Self {
            start,
            path,
            scale_drift: vec![1.0; frames],
            background: Background::TexturedNoise,
            noise_sigma,
            seed,
        }
    }
}

/// A straight path: no displacement on frame 0, then `(dx, dy)` per frame.
pub fn linear_path(frames: usize, dx: i32, dy: i32) -> Vec<(i32, i32)> {
    (0..frames)
        .map(|t| if t == 0 { (0, 0) } else { (dx, dy) })
        .collect()
}

/// A linear path with uniform integer jitter in `[-amp, amp]` added to every
/// step after the first.
pub fn jittered_path(frames: usize, dx: i32, dy: i32, amp: i32, seed: u64) -> Vec<(i32, i32)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..frames)
        .map(|t| {
            if t == 0 {
                (0, 0)
            } else {
                (
                    dx + rng.gen_range(-amp..=amp),
                    dy + rng.gen_range(-amp..=amp),
                )
            }
        })
        .collect()
}

fn sub_seed(seed: u64, salt: u64) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(salt)
}

/// Seeded value noise: a random lattice with the given cell size, bilinearly
/// interpolated between lattice points.
pub fn value_noise_patch(width: u32, height: u32, cell: u32, seed: u64) -> PixelPatch {
    let cell = cell.max(1);
    let lat_w = width / cell + 2;
    let lat_h = height / cell + 2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lattice = vec![0u8; (lat_w * lat_h) as usize];
    rng.fill_bytes(&mut lattice);
    PixelPatch::from_fn(width, height, |x, y| {
        let fx = x as f64 / cell as f64;
        let fy = y as f64 / cell as f64;
        let x0 = fx.floor() as u32;
        let y0 = fy.floor() as u32;
        let tx = fx - x0 as f64;
        let ty = fy - y0 as f64;
        let at = |lx: u32, ly: u32| lattice[(lx * lat_w + ly) as usize] as f64;
        let top = at(x0, y0) * (1.0 - ty) + at(x0, y0 + 1) * ty;
        let bottom = at(x0 + 1, y0) * (1.0 - ty) + at(x0 + 1, y0 + 1) * ty;
        (top * (1.0 - tx) + bottom * tx).round() as u8
    })
}

/// A sprite texture with a coarse octave (wide MI basin) and a fine octave
/// (sharp MI peak), so discrete search both finds and localizes it.
pub fn textured_sprite(width: u32, height: u32, seed: u64) -> PixelPatch {
    let coarse = value_noise_patch(width, height, 6, sub_seed(seed, 1));
    let fine = value_noise_patch(width, height, 2, sub_seed(seed, 2));
    PixelPatch::from_fn(width, height, |x, y| {
        let v = 0.55 * coarse.get(x, y) as f64 + 0.45 * fine.get(x, y) as f64;
        v.round().clamp(0.0, 255.0) as u8
    })
}

fn background_patch(width: u32, height: u32, background: Background, seed: u64) -> PixelPatch {
    match background {
        Background::TexturedNoise => {
            let coarse = value_noise_patch(width, height, 24, sub_seed(seed, 11));
            let fine = value_noise_patch(width, height, 7, sub_seed(seed, 12));
            PixelPatch::from_fn(width, height, |x, y| {
                let v = 0.65 * coarse.get(x, y) as f64 + 0.35 * fine.get(x, y) as f64;
                v.round().clamp(0.0, 255.0) as u8
            })
        }
        Background::Gradient => PixelPatch::from_fn(width, height, |x, y| {
            (((x as u64 * 151) / height.max(1) as u64 + (y as u64 * 101) / width.max(1) as u64)
                % 256) as u8
        }),
    }
}

fn resample_sprite(sprite: &PixelPatch, scale: f64) -> PixelPatch {
    if scale == 1.0 {
        return sprite.clone();
    }
    let w = ((sprite.width() as f64 * scale).round() as u32).max(1);
    let h = ((sprite.height() as f64 * scale).round() as u32).max(1);
    let frame = Frame::from_patch(sprite);
    let params = crate::transforms::TransformParams {
        theta: 0.0,
        displacement: (0.0, 0.0),
        scale: sprite.height() as f64 / h as f64,
    };
    crate::transforms::extract_patch(&frame, &params, w, h).expect("sprite resample fits")
}

/// Renders the sequence: seeded background, sprite composited at the
/// cumulative path position and per-frame scale, then additive Gaussian
/// noise clamped to [0, 255]. Ground-truth boxes are exact.
pub fn generate_sequence(
    frame_width: u32,
    frame_height: u32,
    sprite: &PixelPatch,
    spec: &MotionSpec,
) -> Result<(Vec<Frame>, Vec<BBox>)> {
    if spec.path.is_empty() {
        return Err(Error::InvalidConfig("path must be nonempty".into()));
    }
    if spec.scale_drift.len() != spec.path.len() {
        return Err(Error::InvalidConfig(format!(
            "scale_drift has {} entries for {} frames",
            spec.scale_drift.len(),
            spec.path.len()
        )));
    }
    if spec.scale_drift.iter().any(|&s| s.is_nan() || s <= 0.0) {
        return Err(Error::InvalidConfig("scales must be positive".into()));
    }
    if spec.noise_sigma.is_nan() || spec.noise_sigma < 0.0 {
        return Err(Error::InvalidConfig(
            "noise_sigma must be nonnegative".into(),
        ));
    }

    let background = background_patch(frame_width, frame_height, spec.background, spec.seed);
    let mut noise_rng = ChaCha8Rng::seed_from_u64(sub_seed(spec.seed, 99));
    let normal = if spec.noise_sigma > 0.0 {
        Some(Normal::new(0.0, spec.noise_sigma).expect("finite sigma"))
    } else {
        None
    };

    let mut frames = Vec::with_capacity(spec.path.len());
    let mut boxes = Vec::with_capacity(spec.path.len());
    let mut pos = spec.start;
    for (step, (&(dx, dy), &scale)) in spec.path.iter().zip(&spec.scale_drift).enumerate() {
        pos = (pos.0 + dx, pos.1 + dy);
        let scaled = resample_sprite(sprite, scale);
        let (sw, sh) = (scaled.width(), scaled.height());
        if pos.0 < 0
            || pos.1 < 0
            || pos.0 + sh as i32 > frame_height as i32
            || pos.1 + sw as i32 > frame_width as i32
        {
            return Err(Error::SpriteOutOfBounds { step });
        }

        let mut values = background.values().to_vec();
        for u in 0..sh {
            for v in 0..sw {
                let row = (pos.0 as u32 + u) as usize;
                let col = (pos.1 as u32 + v) as usize;
                values[row * frame_width as usize + col] = scaled.get(u, v);
            }
        }
        if let Some(normal) = &normal {
            for value in &mut values {
                let noisy = *value as f64 + normal.sample(&mut noise_rng);
                *value = noisy.round().clamp(0.0, 255.0) as u8;
            }
        }
        frames.push(Frame::new(frame_width, frame_height, 1, values)?);
        boxes.push(BBox::new(pos.0 as i64, pos.1 as i64, sw, sh));
    }
    Ok((frames, boxes))
}
