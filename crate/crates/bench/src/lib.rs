//! Shared fixtures for the criterion benches.

use mitfas_core::synth::{textured_sprite, value_noise_patch};
use mitfas_core::PixelPatch;

pub fn bench_patch_pair(side: u32) -> (PixelPatch, PixelPatch) {
    (
        value_noise_patch(side, side, 5, 101),
        textured_sprite(side, side, 202),
    )
}
