use std::path::PathBuf;

use clap::Args;
use mitfas_core::io::bboxes::{save_bboxes, AnnotationSource, BBoxAnnotation};
use mitfas_core::io::frames::save_frame;
use mitfas_core::synth::{
    generate_sequence, jittered_path, linear_path, textured_sprite, MotionSpec,
};

use crate::CliError;

#[derive(Args)]
pub struct SynthArgs {
    /// Output directory for the fixture (frames + bboxes.txt).
    #[arg(long)]
    out: PathBuf,
    /// Number of frames to generate.
    #[arg(long, default_value_t = 32)]
    frames: usize,
    /// Frame size as WIDTHxHEIGHT.
    #[arg(long, default_value = "320x240")]
    size: String,
    /// Sprite motion: `linear:DX,DY` or `jitter:DX,DY,AMP` (pixels per frame;
    /// DX along rows, DY along columns).
    #[arg(long, default_value = "linear:4,0")]
    path: String,
    /// Gaussian pixel-noise standard deviation.
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sprite size as WIDTHxHEIGHT.
    #[arg(long, default_value = "32x44")]
    sprite_size: String,
}

fn parse_size(raw: &str, what: &str) -> Result<(u32, u32), CliError> {
    let parts: Vec<&str> = raw.split('x').collect();
    if parts.len() != 2 {
        return Err(CliError::Config(format!(
            "{what} must look like WIDTHxHEIGHT, got {raw:?}"
        )));
    }
    let w = parts[0]
        .parse()
        .map_err(|_| CliError::Config(format!("bad width in {what}: {raw:?}")))?;
    let h = parts[1]
        .parse()
        .map_err(|_| CliError::Config(format!("bad height in {what}: {raw:?}")))?;
    Ok((w, h))
}

fn parse_path(raw: &str, frames: usize, seed: u64) -> Result<Vec<(i32, i32)>, CliError> {
    let (kind, rest) = raw
        .split_once(':')
        .ok_or_else(|| CliError::Config(format!("--path must be KIND:ARGS, got {raw:?}")))?;
    let numbers: Vec<i32> = rest
        .split(',')
        .map(|n| {
            n.trim()
                .parse()
                .map_err(|_| CliError::Config(format!("bad --path number {n:?}")))
        })
        .collect::<Result<_, _>>()?;
    match (kind, numbers.as_slice()) {
        ("linear", [dx, dy]) => Ok(linear_path(frames, *dx, *dy)),
        ("jitter", [dx, dy, amp]) => Ok(jittered_path(frames, *dx, *dy, *amp, seed)),
        _ => Err(CliError::Config(format!(
            "--path must be linear:DX,DY or jitter:DX,DY,AMP, got {raw:?}"
        ))),
    }
}

pub fn run(args: SynthArgs) -> Result<(), CliError> {
    if args.frames == 0 {
        return Err(CliError::Config("--frames must be at least 1".into()));
    }
    let (width, height) = parse_size(&args.size, "--size")?;
    let (sprite_w, sprite_h) = parse_size(&args.sprite_size, "--sprite-size")?;
    let path = parse_path(&args.path, args.frames, args.seed)?;

    // Start in the corner quadrant opposite to the net motion so linear paths
    // have the longest possible run before leaving the frame.
    let net: (i64, i64) = path
        .iter()
        .fold((0, 0), |acc, d| (acc.0 + d.0 as i64, acc.1 + d.1 as i64));
    let margin = 8i64;
    let start_x = if net.0 >= 0 {
        margin
    } else {
        height as i64 - sprite_h as i64 - margin
    };
    let start_y = if net.1 >= 0 {
        margin
    } else {
        width as i64 - sprite_w as i64 - margin
    };

    let sprite = textured_sprite(sprite_w, sprite_h, args.seed);
    let spec = MotionSpec::new(
        (start_x as i32, start_y as i32),
        path,
        args.noise,
        args.seed,
    );
    let (frames, boxes) = generate_sequence(width, height, &sprite, &spec)?;

    std::fs::create_dir_all(&args.out).map_err(mitfas_core::Error::from)?;
    for (t, frame) in frames.iter().enumerate() {
        save_frame(frame, &args.out.join(format!("frame_{t:06}.pgm")))?;
    }
    let annotations: Vec<BBoxAnnotation> = boxes
        .iter()
        .enumerate()
        .map(|(t, &bbox)| BBoxAnnotation {
            frame_index: t,
            bbox,
            source: AnnotationSource::Seed,
        })
        .collect();
    save_bboxes(&annotations, &args.out.join("bboxes.txt"))?;

    println!(
        "wrote {} frames ({}) and bboxes.txt to {}",
        frames.len(),
        args.size,
        args.out.display()
    );
    Ok(())
}
