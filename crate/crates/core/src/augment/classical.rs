//! Pixel-domain augmentations.
//!
//! All operators act on every channel with the same geometry.

use rand_distr::{Distribution, Normal};

use super::image::ImageBuffer;
use crate::error::{invalid, Result};
use crate::grid::{Channel, Grid};
use crate::seed;

/// Slack for treating a sample coordinate as inside the frame.
const EDGE_EPS: f64 = 1e-9;

/// Add independent `Normal(0, sigma²)` noise to every pixel.
pub fn gaussian_noise(img: &ImageBuffer, sigma: f64, seed: u64) -> Result<ImageBuffer> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(invalid(format!("sigma must be finite and >= 0, got {sigma}")));
    }
    if sigma == 0.0 {
        return Ok(img.clone());
    }
    let normal = Normal::new(0.0, sigma).map_err(|e| invalid(e.to_string()))?;
    let mut rng = seed::rng(seed);
    img.map_channels(|ch| ch.map(|&v| v + normal.sample(&mut rng)))
}

/// Mirror left to right.
pub fn flip_h(img: &ImageBuffer) -> ImageBuffer {
    img.map_channels(|ch| {
        let cols = ch.cols();
        Grid::from_fn(ch.rows(), cols, |r, c| *ch.get(r, cols - 1 - c))
    })
    .expect("flip preserves shape")
}

/// Rotate by `90·k` degrees counter-clockwise as displayed. Exact index
/// permutation; odd `k` swaps the dimensions.
pub fn perfect_rotation(img: &ImageBuffer, k: i64) -> ImageBuffer {
    img.map_channels(|ch| rot90(ch, k.rem_euclid(4)))
        .expect("rotation keeps channels consistent")
}

fn rot90(ch: &Channel, k: i64) -> Channel {
    let (rows, cols) = ch.shape();
    match k {
        0 => ch.clone(),
        1 => Grid::from_fn(cols, rows, |i, j| *ch.get(j, cols - 1 - i)),
        2 => Grid::from_fn(rows, cols, |i, j| *ch.get(rows - 1 - i, cols - 1 - j)),
        3 => Grid::from_fn(cols, rows, |i, j| *ch.get(rows - 1 - j, i)),
        _ => unreachable!("k is reduced mod 4"),
    }
}

/// Bilinear sample at fractional `(y, x)`, `None` outside the pixel grid.
fn sample_bilinear(ch: &Channel, y: f64, x: f64) -> Option<f64> {
    let (rows, cols) = ch.shape();
    let (ymax, xmax) = ((rows - 1) as f64, (cols - 1) as f64);
    if y < -EDGE_EPS || x < -EDGE_EPS || y > ymax + EDGE_EPS || x > xmax + EDGE_EPS {
        return None;
    }
    Some(sample_clamped(ch, y, x))
}

fn sample_clamped(ch: &Channel, y: f64, x: f64) -> f64 {
    let (rows, cols) = ch.shape();
    let y = y.clamp(0.0, (rows - 1) as f64);
    let x = x.clamp(0.0, (cols - 1) as f64);
    let (y0, x0) = (y.floor() as usize, x.floor() as usize);
    let (y1, x1) = ((y0 + 1).min(rows - 1), (x0 + 1).min(cols - 1));
    let (fy, fx) = (y - y0 as f64, x - x0 as f64);
    let top = ch.get(y0, x0) * (1.0 - fx) + ch.get(y0, x1) * fx;
    let bottom = ch.get(y1, x0) * (1.0 - fx) + ch.get(y1, x1) * fx;
    top * (1.0 - fy) + bottom * fy
}

/// Rotate by an arbitrary angle (degrees, counter-clockwise as displayed)
/// about the image center with bilinear interpolation. Samples that fall
/// outside the source frame are 0.
pub fn classical_rotation(img: &ImageBuffer, angle_deg: f64) -> Result<ImageBuffer> {
    if !angle_deg.is_finite() {
        return Err(invalid(format!("rotation angle must be finite, got {angle_deg}")));
    }
    if angle_deg == 0.0 {
        return Ok(img.clone());
    }
    let (sin, cos) = angle_deg.to_radians().sin_cos();
    let (rows, cols) = img.shape();
    let cy = (rows as f64 - 1.0) / 2.0;
    let cx = (cols as f64 - 1.0) / 2.0;
    img.map_channels(|ch| {
        Grid::from_fn(rows, cols, |i, j| {
            // Cartesian coordinates with v pointing up; pull back through R(-θ)
            let u = j as f64 - cx;
            let v = cy - i as f64;
            let us = cos * u + sin * v;
            let vs = -sin * u + cos * v;
            sample_bilinear(ch, cy - vs, cx + us).unwrap_or(0.0)
        })
    })
}

/// Bilinear resize with pixel-center alignment.
pub fn resize_bilinear(ch: &Channel, rows: usize, cols: usize) -> Result<Channel> {
    if rows == 0 || cols == 0 {
        return Err(invalid("resize target must be non-empty"));
    }
    let sy = ch.rows() as f64 / rows as f64;
    let sx = ch.cols() as f64 / cols as f64;
    Ok(Grid::from_fn(rows, cols, |i, j| {
        sample_clamped(ch, (i as f64 + 0.5) * sy - 0.5, (j as f64 + 0.5) * sx - 0.5)
    }))
}

/// Enlarge by `enlarge` and cut the central `out` window.
///
/// The enlarged size is `round(dim · enlarge)`; the window offset is
/// `(enlarged − out) / 2` rounded down.
pub fn center_crop(img: &ImageBuffer, enlarge: f64, out: (usize, usize)) -> Result<ImageBuffer> {
    if !(enlarge > 1.0 && enlarge.is_finite()) {
        return Err(invalid(format!("crop enlarge factor must be > 1, got {enlarge}")));
    }
    let (rows, cols) = img.shape();
    let big = (
        (rows as f64 * enlarge).round() as usize,
        (cols as f64 * enlarge).round() as usize,
    );
    if out.0 == 0 || out.1 == 0 || out.0 > big.0 || out.1 > big.1 {
        return Err(invalid(format!(
            "crop window {out:?} does not fit the enlarged image {big:?}"
        )));
    }
    let off = ((big.0 - out.0) / 2, (big.1 - out.1) / 2);
    let sy = rows as f64 / big.0 as f64;
    let sx = cols as f64 / big.1 as f64;
    img.map_channels(|ch| {
        Grid::from_fn(out.0, out.1, |i, j| {
            let y = ((i + off.0) as f64 + 0.5) * sy - 0.5;
            let x = ((j + off.1) as f64 + 0.5) * sx - 0.5;
            sample_clamped(ch, y, x)
        })
    })
}

/// Source coordinate in the original image for output row/column `i` of a
/// [`center_crop`] along one axis.
pub fn crop_source_coord(dim: usize, enlarge: f64, out: usize, i: usize) -> f64 {
    let big = (dim as f64 * enlarge).round() as usize;
    let off = (big - out) / 2;
    ((i + off) as f64 + 0.5) * dim as f64 / big as f64 - 0.5
}
