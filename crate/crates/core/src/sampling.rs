//! Greedy informative-frame selection: each step picks, from a randomly
//! bounded candidate pool, the frame minimizing a weighted sum of pairwise MI
//! with the previous pick and approximate joint MI with everything picked so
//! far. Lower scores mean less redundancy, so the argmin wins.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mi::{self, PixelPatch, DEFAULT_BINS, MAX_BINS, MIN_BINS};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SamplingConfig {
    /// Weight of the pairwise term against the previous pick.
    pub alpha: f64,
    /// Weight of the joint term against all picks so far.
    pub beta: f64,
    /// Number of frames to select.
    pub n_frames: usize,
    pub bins: usize,
    pub seed: u64,
    /// Upper bound of the per-step random stride; defaults to
    /// `max(1, 2 * floor(total / n_frames))` when unset.
    pub stride_max: Option<usize>,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            beta: 1.0,
            n_frames: 16,
            bins: DEFAULT_BINS,
            seed: 0,
            stride_max: None,
        }
    }
}

impl SamplingConfig {
    pub fn validate(&self) -> Result<()> {
        if self.alpha.is_nan() || self.alpha < 0.0 || self.beta.is_nan() || self.beta < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "alpha and beta must be nonnegative, got {} and {}",
                self.alpha, self.beta
            )));
        }
        if self.alpha == 0.0 && self.beta == 0.0 {
            return Err(Error::InvalidConfig(
                "alpha and beta cannot both be zero".into(),
            ));
        }
        if self.n_frames == 0 {
            return Err(Error::InvalidConfig("n_frames must be at least 1".into()));
        }
        if !(MIN_BINS..=MAX_BINS).contains(&self.bins) {
            return Err(Error::InvalidBins { bins: self.bins });
        }
        if self.stride_max == Some(0) {
            return Err(Error::InvalidConfig("stride_max must be at least 1".into()));
        }
        Ok(())
    }
}

pub fn default_stride_max(total: usize, n_frames: usize) -> usize {
    (2 * (total / n_frames)).max(1)
}

/// One greedy pick after the start frame: the chosen index, its score, and
/// the inclusive candidate-pool bounds it was chosen from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleStep {
    pub index: usize,
    pub score: f64,
    pub pool_lo: usize,
    pub pool_hi: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleResult {
    pub seed: u64,
    /// All selected indices in increasing order, the start frame included.
    pub indices: Vec<usize>,
    /// One record per pick after the start frame.
    pub steps: Vec<SampleStep>,
}

/// The candidate pool after a pick at `k_prev` with stride `r`: all indices
/// in `(k_prev, min(k_prev + r, total - 1)]`, returned as inclusive bounds.
pub fn candidate_pool(k_prev: usize, r: usize, total: usize) -> Result<(usize, usize)> {
    if r == 0 {
        return Err(Error::InvalidConfig("stride must be at least 1".into()));
    }
    if total == 0 || k_prev >= total - 1 {
        return Err(Error::PoolExhausted { k_prev, total });
    }
    let lo = k_prev + 1;
    let hi = (k_prev + r).min(total - 1);
    Ok((lo, hi))
}

/// The selection objective: `alpha * I(prev; candidate) + (beta / |sampled|)
/// * sum_j I(sampled[j]; candidate)`. Lower is better.
pub fn score_candidate(
    prev: &PixelPatch,
    sampled: &[PixelPatch],
    candidate: &PixelPatch,
    config: &SamplingConfig,
) -> Result<f64> {
    if sampled.is_empty() {
        return Err(Error::EmptySampleSet);
    }
    if sampled.last() != Some(prev) {
        return Err(Error::Precondition(
            "prev must be the last element of the sampled set".into(),
        ));
    }
    let pairwise = mi::mutual_information(prev, candidate, config.bins)?;
    let joint = mi::joint_mi_approx(sampled, candidate, config.bins)?;
    Ok(config.alpha * pairwise + config.beta * joint)
}

/// Greedy selection of `n_frames` indices over a patch sequence. The start
/// frame is drawn uniformly from `[0, total - n_frames]` so a full sample
/// always exists when every stride draws 1; each later pick minimizes
/// [`score_candidate`] over a freshly drawn pool, ties broken by the smallest
/// index. All randomness comes from the seeded generator.
pub fn sample_sequence(patches: &[PixelPatch], config: &SamplingConfig) -> Result<SampleResult> {
    config.validate()?;
    let total = patches.len();
    if total < config.n_frames {
        return Err(Error::InvalidConfig(format!(
            "cannot sample {} frames from a sequence of {}",
            config.n_frames, total
        )));
    }
    for patch in &patches[1..] {
        if !patch.same_dims(&patches[0]) {
            return Err(Error::Precondition("patches must share dimensions".into()));
        }
    }

    let stride_max = config
        .stride_max
        .unwrap_or_else(|| default_stride_max(total, config.n_frames));
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let start = rng.gen_range(0..=total - config.n_frames);
    let mut indices = vec![start];
    let mut steps = Vec::with_capacity(config.n_frames - 1);
    let mut sampled = vec![patches[start].clone()];

    for step in 1..config.n_frames {
        let r = rng.gen_range(1..=stride_max);
        let k_prev = *indices.last().expect("nonempty");
        let (lo, hi) = candidate_pool(k_prev, r, total).map_err(|_| Error::SamplingExhausted {
            step,
            indices: indices.clone(),
        })?;

        let prev = sampled.last().expect("nonempty").clone();
        let mut best: Option<(usize, f64)> = None;
        for (k, candidate) in patches.iter().enumerate().take(hi + 1).skip(lo) {
            let score = score_candidate(&prev, &sampled, candidate, config)?;
            // Strictly-less keeps the smallest index on ties.
            if best.is_none_or(|(_, s)| score < s) {
                best = Some((k, score));
            }
        }
        let (index, score) = best.expect("pool is nonempty");
        indices.push(index);
        sampled.push(patches[index].clone());
        steps.push(SampleStep {
            index,
            score,
            pool_lo: lo,
            pool_hi: hi,
        });
    }

    Ok(SampleResult {
        seed: config.seed,
        indices,
        steps,
    })
}
