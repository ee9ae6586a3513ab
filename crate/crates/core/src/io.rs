//! 8-bit PGM/PNG image I/O.
//!
//! Pixels are carried internally as `f64` in the native `0..=255` scale.
//! Conversion back to 8 bits always goes through [`quantize_u8`].

use std::path::{Path, PathBuf};

use image::{DynamicImage, GrayImage, ImageFormat, RgbImage};

use crate::augment::ImageBuffer;
use crate::error::{invalid, Result};
use crate::grid::{Channel, Grid};

/// Round half away from zero, then clamp to `0..=255`. NaN maps to 0.
pub fn quantize_u8(v: f64) -> u8 {
    if v.is_nan() {
        return 0;
    }
    v.round().clamp(0.0, 255.0) as u8
}

/// Round-trip every channel through [`quantize_u8`].
pub fn to_uint8_values(img: &ImageBuffer) -> ImageBuffer {
    img.map_channels(|ch| ch.map(|&v| f64::from(quantize_u8(v))))
        .expect("shape preserved")
}

pub fn is_supported(path: &Path) -> bool {
    matches!(
        path.extension()
            .and_then(|e| e.to_str())
            .map(|e| e.to_ascii_lowercase())
            .as_deref(),
        Some("png" | "pgm" | "ppm" | "pnm")
    )
}

/// Load an 8-bit gray or RGB image. Alpha is dropped; other color types are
/// converted to RGB.
pub fn load_image(path: &Path) -> Result<ImageBuffer> {
    let dynamic = image::open(path)?;
    let channels = match dynamic {
        DynamicImage::ImageLuma8(g) => vec![plane(g.width(), g.height(), g.as_raw(), 1, 0)],
        DynamicImage::ImageLumaA8(_) => {
            let g = dynamic.to_luma8();
            vec![plane(g.width(), g.height(), g.as_raw(), 1, 0)]
        }
        other => {
            let rgb = other.to_rgb8();
            (0..3)
                .map(|c| plane(rgb.width(), rgb.height(), rgb.as_raw(), 3, c))
                .collect()
        }
    };
    ImageBuffer::new(channels)
}

fn plane(width: u32, height: u32, raw: &[u8], stride: usize, offset: usize) -> Channel {
    let (rows, cols) = (height as usize, width as usize);
    Grid::from_fn(rows, cols, |r, c| f64::from(raw[(r * cols + c) * stride + offset]))
}

fn format_for(path: &Path) -> Result<ImageFormat> {
    match path
        .extension()
        .and_then(|e| e.to_str())
        .map(|e| e.to_ascii_lowercase())
        .as_deref()
    {
        Some("png") => Ok(ImageFormat::Png),
        Some("pgm" | "ppm" | "pnm") => Ok(ImageFormat::Pnm),
        _ => Err(invalid(format!("unsupported output extension: {}", path.display()))),
    }
}

/// Write a 1-channel image as gray or a 3-channel image as RGB, quantized
/// with [`quantize_u8`]. PNM output is binary (P5/P6).
pub fn save_image(path: &Path, img: &ImageBuffer) -> Result<()> {
    let format = format_for(path)?;
    let (rows, cols) = img.shape();
    let (w, h) = (cols as u32, rows as u32);
    match img.num_channels() {
        1 => {
            let raw = img.channel(0).as_slice().iter().map(|&v| quantize_u8(v)).collect();
            let g = GrayImage::from_raw(w, h, raw).expect("buffer sized from shape");
            g.save_with_format(path, format)?;
        }
        3 => {
            let mut raw = Vec::with_capacity(rows * cols * 3);
            for i in 0..rows * cols {
                for ch in img.channels() {
                    raw.push(quantize_u8(ch.as_slice()[i]));
                }
            }
            let rgb = RgbImage::from_raw(w, h, raw).expect("buffer sized from shape");
            rgb.save_with_format(path, format)?;
        }
        n => return Err(invalid(format!("cannot write a {n}-channel image"))),
    }
    Ok(())
}

/// Supported images under `path`: the file itself, or the directory's
/// entries sorted by name (non-recursive).
pub fn list_images(path: &Path) -> Result<Vec<PathBuf>> {
    if path.is_file() {
        return Ok(vec![path.to_path_buf()]);
    }
    let mut files: Vec<PathBuf> = std::fs::read_dir(path)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && is_supported(p))
        .collect();
    files.sort();
    Ok(files)
}
