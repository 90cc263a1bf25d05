//! Histogram-based estimation of entropy, joint entropy, mutual information,
//! and joint mutual information between 8-bit pixel patches.
//!
//! All probabilities come from equal-width binning of co-located pixel pairs;
//! logarithms are base 2, so every quantity is in bits. The convention
//! `0 * log 0 = 0` is applied per cell.

use crate::error::{Error, Result};

pub const MIN_BINS: usize = 2;
pub const MAX_BINS: usize = 256;
/// Appendix-style default: 128 histogram bins.
pub const DEFAULT_BINS: usize = 128;
/// Cell-count guard for the exact joint-MI table (`bins^(k+1)` cells).
pub const JOINT_TABLE_CELL_LIMIT: u64 = 1 << 20;

/// A fixed-size 8-bit intensity grid, row-major. The first coordinate (`x`)
/// runs along rows (downward), the second (`y`) along columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PixelPatch {
    width: u32,
    height: u32,
    values: Vec<u8>,
}

impl PixelPatch {
    pub fn new(width: u32, height: u32, values: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidPatch(format!(
                "dimensions must be positive, got {width}x{height}"
            )));
        }
        let expected = width as usize * height as usize;
        if values.len() != expected {
            return Err(Error::InvalidPatch(format!(
                "{}x{} patch needs {} values, got {}",
                width,
                height,
                expected,
                values.len()
            )));
        }
        Ok(Self {
            width,
            height,
            values,
        })
    }

    /// Builds a patch by evaluating `f(x, y)` at every pixel (x = row).
    pub fn from_fn(width: u32, height: u32, mut f: impl FnMut(u32, u32) -> u8) -> Self {
        let mut values = Vec::with_capacity(width as usize * height as usize);
        for x in 0..height {
            for y in 0..width {
                values.push(f(x, y));
            }
        }
        Self {
            width,
            height,
            values,
        }
    }

    pub fn constant(width: u32, height: u32, value: u8) -> Self {
        Self::from_fn(width, height, |_, _| value)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn get(&self, x: u32, y: u32) -> u8 {
        self.values[x as usize * self.width as usize + y as usize]
    }

    pub fn same_dims(&self, other: &PixelPatch) -> bool {
        self.width == other.width && self.height == other.height
    }
}

fn check_dims(a: &PixelPatch, b: &PixelPatch) -> Result<()> {
    if !a.same_dims(b) {
        return Err(Error::DimensionMismatch {
            left_width: a.width,
            left_height: a.height,
            right_width: b.width,
            right_height: b.height,
        });
    }
    Ok(())
}

fn check_bins(bins: usize) -> Result<()> {
    if !(MIN_BINS..=MAX_BINS).contains(&bins) {
        return Err(Error::InvalidBins { bins });
    }
    Ok(())
}

/// Equal-width bin for an 8-bit intensity: `floor(v * bins / 256)`.
#[inline]
pub fn bin_index(value: u8, bins: usize) -> usize {
    (value as usize * bins) >> 8
}

/// B x B table counting co-located pixel-intensity bin pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointHistogram {
    bins: usize,
    counts: Vec<u64>,
    total: u64,
}

impl JointHistogram {
    pub fn bins(&self) -> usize {
        self.bins
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    #[inline]
    pub fn count(&self, i: usize, j: usize) -> u64 {
        self.counts[i * self.bins + j]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Marginal counts of the first patch (row sums).
    pub fn row_sums(&self) -> Vec<u64> {
        self.counts
            .chunks_exact(self.bins)
            .map(|row| row.iter().sum())
            .collect()
    }

    /// Marginal counts of the second patch (column sums).
    pub fn col_sums(&self) -> Vec<u64> {
        let mut sums = vec![0u64; self.bins];
        for row in self.counts.chunks_exact(self.bins) {
            for (sum, &count) in sums.iter_mut().zip(row) {
                *sum += count;
            }
        }
        sums
    }
}

/// Normalized joint distribution plus its two marginals.
#[derive(Debug, Clone, PartialEq)]
pub struct PmfPair {
    pub bins: usize,
    /// B x B joint probabilities, row-major.
    pub joint: Vec<f64>,
    pub marginal_v: Vec<f64>,
    pub marginal_z: Vec<f64>,
}

/// Bins co-located pixel pairs of two equally sized patches.
pub fn build_joint_histogram(
    a: &PixelPatch,
    b: &PixelPatch,
    bins: usize,
) -> Result<JointHistogram> {
    check_bins(bins)?;
    check_dims(a, b)?;
    let mut counts = vec![0u64; bins * bins];
    for (&va, &vb) in a.values.iter().zip(&b.values) {
        counts[bin_index(va, bins) * bins + bin_index(vb, bins)] += 1;
    }
    Ok(JointHistogram {
        bins,
        counts,
        total: a.values.len() as u64,
    })
}

/// Normalizes a joint histogram into a joint pmf and its marginals.
pub fn pmfs_from_histogram(h: &JointHistogram) -> Result<PmfPair> {
    if h.total == 0 {
        return Err(Error::EmptyHistogram);
    }
    let n = h.total as f64;
    let joint: Vec<f64> = h.counts.iter().map(|&c| c as f64 / n).collect();
    let marginal_v = h.row_sums().iter().map(|&c| c as f64 / n).collect();
    let marginal_z = h.col_sums().iter().map(|&c| c as f64 / n).collect();
    Ok(PmfPair {
        bins: h.bins,
        joint,
        marginal_v,
        marginal_z,
    })
}

const PMF_SUM_TOLERANCE: f64 = 1e-9;

fn check_pmf(pmf: &[f64]) -> Result<()> {
    let mut sum = 0.0;
    for &p in pmf {
        if p < 0.0 {
            return Err(Error::InvalidDistribution { sum: p });
        }
        sum += p;
    }
    if (sum - 1.0).abs() > PMF_SUM_TOLERANCE {
        return Err(Error::InvalidDistribution { sum });
    }
    Ok(())
}

fn entropy_unchecked(pmf: &[f64]) -> f64 {
    let mut h = 0.0;
    for &p in pmf {
        if p > 0.0 {
            h -= p * p.log2();
        }
    }
    h.max(0.0)
}

/// Shannon entropy in bits of a discrete pmf.
pub fn entropy(pmf: &[f64]) -> Result<f64> {
    check_pmf(pmf)?;
    Ok(entropy_unchecked(pmf))
}

/// Joint Shannon entropy in bits of a flattened B x B joint pmf.
pub fn joint_entropy(joint: &[f64]) -> Result<f64> {
    check_pmf(joint)?;
    Ok(entropy_unchecked(joint))
}

fn entropy_from_counts(counts: &[u64], total: u64) -> f64 {
    let n = total as f64;
    let mut h = 0.0;
    for &c in counts {
        if c > 0 {
            let p = c as f64 / n;
            h -= p * p.log2();
        }
    }
    h.max(0.0)
}

#[inline]
fn mi_term(c: u64, row: u64, col: u64, n: f64) -> f64 {
    let p = c as f64 / n;
    p * ((c as f64 * n) / (row as f64 * col as f64)).log2()
}

/// Mutual information in bits from a prebuilt joint histogram.
///
/// Cells are accumulated as transpose-invariant (diagonal, symmetric-pair)
/// partial sums, so swapping the two patches yields a bit-identical result.
pub fn mutual_information_from_histogram(h: &JointHistogram) -> Result<f64> {
    if h.total == 0 {
        return Err(Error::EmptyHistogram);
    }
    let b = h.bins;
    let n = h.total as f64;
    let rows = h.row_sums();
    let cols = h.col_sums();
    let mut acc = 0.0;
    for i in 0..b {
        let diag = h.counts[i * b + i];
        if diag > 0 {
            acc += mi_term(diag, rows[i], cols[i], n);
        }
        for j in (i + 1)..b {
            let upper = h.counts[i * b + j];
            let lower = h.counts[j * b + i];
            if upper == 0 && lower == 0 {
                continue;
            }
            let mut pair = 0.0;
            if upper > 0 {
                pair += mi_term(upper, rows[i], cols[j], n);
            }
            if lower > 0 {
                pair += mi_term(lower, rows[j], cols[i], n);
            }
            acc += pair;
        }
    }
    Ok(acc.max(0.0))
}

/// Mutual information in bits between two patches at the given bin count.
pub fn mutual_information(a: &PixelPatch, b: &PixelPatch, bins: usize) -> Result<f64> {
    let h = build_joint_histogram(a, b, bins)?;
    mutual_information_from_histogram(&h)
}

/// Entropy in bits of a patch's own B-bin intensity histogram.
pub fn patch_entropy(patch: &PixelPatch, bins: usize) -> Result<f64> {
    check_bins(bins)?;
    let mut counts = vec![0u64; bins];
    for &v in &patch.values {
        counts[bin_index(v, bins)] += 1;
    }
    Ok(entropy_from_counts(&counts, patch.values.len() as u64))
}

fn check_sampled(sampled: &[PixelPatch], candidate: &PixelPatch) -> Result<()> {
    if sampled.is_empty() {
        return Err(Error::EmptySampleSet);
    }
    for patch in sampled {
        check_dims(patch, candidate)?;
    }
    Ok(())
}

/// Low-dimensional approximation of joint MI: the mean of pairwise MI values
/// between each sampled patch and the candidate.
pub fn joint_mi_approx(sampled: &[PixelPatch], candidate: &PixelPatch, bins: usize) -> Result<f64> {
    check_bins(bins)?;
    check_sampled(sampled, candidate)?;
    let mut sum = 0.0;
    for patch in sampled {
        sum += mutual_information(patch, candidate, bins)?;
    }
    Ok(sum / sampled.len() as f64)
}

/// Exact joint MI `I(F_0,...,F_k; candidate)` from the full (k+2)-dimensional
/// histogram over co-located pixel tuples. Test oracle; guarded against table
/// blow-up by [`JOINT_TABLE_CELL_LIMIT`].
pub fn joint_mi_exact(sampled: &[PixelPatch], candidate: &PixelPatch, bins: usize) -> Result<f64> {
    check_bins(bins)?;
    check_sampled(sampled, candidate)?;

    let cells = (bins as u128).pow(sampled.len() as u32 + 1);
    if cells > JOINT_TABLE_CELL_LIMIT as u128 {
        return Err(Error::JointTableTooLarge {
            required: cells,
            limit: JOINT_TABLE_CELL_LIMIT,
        });
    }

    let tuple_cells = (cells / bins as u128) as usize;
    let mut full = vec![0u64; cells as usize];
    let mut tuple = vec![0u64; tuple_cells];
    let mut cand = vec![0u64; bins];
    for p in 0..candidate.values.len() {
        let mut idx = 0usize;
        let mut radix = 1usize;
        for patch in sampled {
            idx += bin_index(patch.values[p], bins) * radix;
            radix *= bins;
        }
        let c = bin_index(candidate.values[p], bins);
        tuple[idx] += 1;
        cand[c] += 1;
        full[idx + c * radix] += 1;
    }

    let total = candidate.values.len() as u64;
    let h_tuple = entropy_from_counts(&tuple, total);
    let h_cand = entropy_from_counts(&cand, total);
    let h_all = entropy_from_counts(&full, total);
    Ok((h_tuple + h_cand - h_all).max(0.0))
}
