//! Patch-similarity measures: mutual information plus the four baselines it
//! is compared against (Euclidean distance, cosine similarity, PSNR, SSIM).
//!
//! The alignment search consumes these through [`MeasureKind`], whose
//! polarity flag says whether larger or smaller values indicate a better
//! match.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mi::{self, PixelPatch, DEFAULT_BINS};

const SSIM_WINDOW: usize = 8;
const SSIM_C1: f64 = (0.01 * 255.0) * (0.01 * 255.0);
const SSIM_C2: f64 = (0.03 * 255.0) * (0.03 * 255.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    HigherBetter,
    LowerBetter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum MeasureKind {
    #[default]
    Mi,
    Euclidean,
    Cosine,
    Psnr,
    Ssim,
}

impl MeasureKind {
    pub fn polarity(&self) -> Polarity {
        match self {
            MeasureKind::Euclidean => Polarity::LowerBetter,
            _ => Polarity::HigherBetter,
        }
    }

    /// Evaluates the measure on a patch pair. `bins` only affects `Mi`.
    pub fn evaluate(&self, a: &PixelPatch, b: &PixelPatch, bins: usize) -> Result<f64> {
        match self {
            MeasureKind::Mi => mi::mutual_information(a, b, bins),
            MeasureKind::Euclidean => euclidean_distance(a, b),
            MeasureKind::Cosine => cosine_similarity(a, b),
            MeasureKind::Psnr => psnr(a, b),
            MeasureKind::Ssim => ssim(a, b),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            MeasureKind::Mi => "mi",
            MeasureKind::Euclidean => "euclidean",
            MeasureKind::Cosine => "cosine",
            MeasureKind::Psnr => "psnr",
            MeasureKind::Ssim => "ssim",
        }
    }
}

impl std::str::FromStr for MeasureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mi" => Ok(MeasureKind::Mi),
            "euclidean" => Ok(MeasureKind::Euclidean),
            "cosine" => Ok(MeasureKind::Cosine),
            "psnr" => Ok(MeasureKind::Psnr),
            "ssim" => Ok(MeasureKind::Ssim),
            other => Err(Error::InvalidConfig(format!(
                "unknown measure {other:?} (expected mi, euclidean, cosine, psnr or ssim)"
            ))),
        }
    }
}

/// Convenience wrapper using the default bin count for MI.
pub fn evaluate_default(kind: MeasureKind, a: &PixelPatch, b: &PixelPatch) -> Result<f64> {
    kind.evaluate(a, b, DEFAULT_BINS)
}

fn check_dims(a: &PixelPatch, b: &PixelPatch) -> Result<()> {
    if !a.same_dims(b) {
        return Err(Error::DimensionMismatch {
            left_width: a.width(),
            left_height: a.height(),
            right_width: b.width(),
            right_height: b.height(),
        });
    }
    Ok(())
}

pub fn euclidean_distance(a: &PixelPatch, b: &PixelPatch) -> Result<f64> {
    check_dims(a, b)?;
    let mut sum = 0.0;
    for (&va, &vb) in a.values().iter().zip(b.values()) {
        let d = va as f64 - vb as f64;
        sum += d * d;
    }
    Ok(sum.sqrt())
}

pub fn cosine_similarity(a: &PixelPatch, b: &PixelPatch) -> Result<f64> {
    check_dims(a, b)?;
    let mut dot = 0.0;
    let mut norm_a = 0.0;
    let mut norm_b = 0.0;
    for (&va, &vb) in a.values().iter().zip(b.values()) {
        let fa = va as f64;
        let fb = vb as f64;
        dot += fa * fb;
        norm_a += fa * fa;
        norm_b += fb * fb;
    }
    if norm_a == 0.0 || norm_b == 0.0 {
        return Err(Error::UndefinedSimilarity);
    }
    Ok(dot / (norm_a.sqrt() * norm_b.sqrt()))
}

/// Peak signal-to-noise ratio in dB; `+inf` when the patches are identical.
pub fn psnr(a: &PixelPatch, b: &PixelPatch) -> Result<f64> {
    check_dims(a, b)?;
    let mut sum = 0.0;
    for (&va, &vb) in a.values().iter().zip(b.values()) {
        let d = va as f64 - vb as f64;
        sum += d * d;
    }
    let mse = sum / a.len() as f64;
    if mse == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (255.0 * 255.0 / mse).log10())
}

/// Mean local SSIM over 8x8 sliding windows (step 1), uniform weighting,
/// stabilizers C1 = (0.01*255)^2 and C2 = (0.03*255)^2.
pub fn ssim(a: &PixelPatch, b: &PixelPatch) -> Result<f64> {
    check_dims(a, b)?;
    let w = a.width() as usize;
    let h = a.height() as usize;
    if w < SSIM_WINDOW || h < SSIM_WINDOW {
        return Err(Error::InvalidPatch(format!(
            "ssim needs patches of at least {SSIM_WINDOW}x{SSIM_WINDOW}, got {w}x{h}"
        )));
    }

    // Summed-area tables of a, b, a^2, b^2 and a*b make each window O(1).
    let stride = w + 1;
    let mut sa = vec![0.0f64; (w + 1) * (h + 1)];
    let mut sb = vec![0.0f64; (w + 1) * (h + 1)];
    let mut saa = vec![0.0f64; (w + 1) * (h + 1)];
    let mut sbb = vec![0.0f64; (w + 1) * (h + 1)];
    let mut sab = vec![0.0f64; (w + 1) * (h + 1)];
    let av = a.values();
    let bv = b.values();
    for x in 0..h {
        for y in 0..w {
            let fa = av[x * w + y] as f64;
            let fb = bv[x * w + y] as f64;
            let idx = (x + 1) * stride + (y + 1);
            let up = x * stride + (y + 1);
            let left = (x + 1) * stride + y;
            let diag = x * stride + y;
            sa[idx] = fa + sa[up] + sa[left] - sa[diag];
            sb[idx] = fb + sb[up] + sb[left] - sb[diag];
            saa[idx] = fa * fa + saa[up] + saa[left] - saa[diag];
            sbb[idx] = fb * fb + sbb[up] + sbb[left] - sbb[diag];
            sab[idx] = fa * fb + sab[up] + sab[left] - sab[diag];
        }
    }
    let window_sum = |table: &[f64], x: usize, y: usize| -> f64 {
        let x1 = x + SSIM_WINDOW;
        let y1 = y + SSIM_WINDOW;
        table[x1 * stride + y1] - table[x * stride + y1] - table[x1 * stride + y]
            + table[x * stride + y]
    };

    let n = (SSIM_WINDOW * SSIM_WINDOW) as f64;
    let mut total = 0.0;
    let mut windows = 0usize;
    for x in 0..=(h - SSIM_WINDOW) {
        for y in 0..=(w - SSIM_WINDOW) {
            let mu_a = window_sum(&sa, x, y) / n;
            let mu_b = window_sum(&sb, x, y) / n;
            let var_a = window_sum(&saa, x, y) / n - mu_a * mu_a;
            let var_b = window_sum(&sbb, x, y) / n - mu_b * mu_b;
            let cov = window_sum(&sab, x, y) / n - mu_a * mu_b;
            let num = (2.0 * mu_a * mu_b + SSIM_C1) * (2.0 * cov + SSIM_C2);
            let den = (mu_a * mu_a + mu_b * mu_b + SSIM_C1) * (var_a + var_b + SSIM_C2);
            total += num / den;
            windows += 1;
        }
    }
    Ok(total / windows as f64)
}
