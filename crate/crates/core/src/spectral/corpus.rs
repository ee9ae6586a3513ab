use super::report::{SpectrumMeta, SpectrumReport};
use super::svd::singular_values;
use crate::augment::{resize_bilinear, run_pipeline_indexed, AugmentParams, AugmentSpec, ImageBuffer};
use crate::error::{invalid, Result};
use crate::io::quantize_u8;

/// How corpus images are prepared before augmentation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorpusOptions {
    /// Images are converted to gray and, when set, resized to `size × size`.
    /// Without a size every image must already share one shape.
    pub size: Option<usize>,
    /// Supplementary path: renormalize quantum outputs and round-trip every
    /// plane through 8-bit before the SVD. When unset, quantum outputs are
    /// analysed as raw floats without renormalization.
    pub convert_uint8: bool,
}

impl Default for CorpusOptions {
    fn default() -> Self {
        Self {
            size: Some(256),
            convert_uint8: false,
        }
    }
}

/// Gray conversion and, for `Some(size)`, bilinear resize to `size × size`.
pub fn prepare(img: &ImageBuffer, size: Option<usize>) -> Result<ImageBuffer> {
    let gray = img.to_gray();
    let gray = match size {
        Some(size) if gray.shape() != (size, size) => resize_bilinear(&gray, size, size)?,
        _ => gray,
    };
    ImageBuffer::gray(gray)
}

/// Spectra of every output plane for one prepared image.
pub fn image_spectra(
    img: &ImageBuffer,
    spec: &AugmentSpec,
    params: &AugmentParams,
    image_index: u64,
    convert_uint8: bool,
) -> Result<Vec<Vec<f64>>> {
    let params = AugmentParams {
        renormalize: convert_uint8,
        ..params.clone()
    };
    let out = run_pipeline_indexed(img, spec, &params, image_index)?;
    Ok(out
        .planes()
        .into_iter()
        .map(|plane| {
            if convert_uint8 {
                singular_values(&plane.map(|&v| f64::from(quantize_u8(v))))
            } else {
                singular_values(plane)
            }
        })
        .collect())
}

/// Mean spectrum of `spec` over the first `count` images of `corpus`.
///
/// Image `i` runs with image index `i`, so each gets its own random draws.
pub fn average_spectra(
    corpus: &[ImageBuffer],
    spec: &AugmentSpec,
    count: usize,
    params: &AugmentParams,
    options: CorpusOptions,
) -> Result<SpectrumReport> {
    if count == 0 {
        return Err(invalid("count must be at least 1"));
    }
    if corpus.len() < count {
        return Err(invalid(format!(
            "corpus has {} images, {count} requested",
            corpus.len()
        )));
    }
    let mut sums: Option<Vec<Vec<f64>>> = None;
    let mut shape = None;
    for (i, img) in corpus[..count].iter().enumerate() {
        let prepared = prepare(img, options.size)?;
        if *shape.get_or_insert(prepared.shape()) != prepared.shape() {
            return Err(invalid(format!(
                "image {i} has shape {:?}, image 0 has {:?}; resize the corpus to one size",
                prepared.shape(),
                shape.unwrap()
            )));
        }
        let spectra = image_spectra(&prepared, spec, params, i as u64, options.convert_uint8)?;
        match &mut sums {
            None => sums = Some(spectra),
            Some(acc) => {
                for (a, s) in acc.iter_mut().zip(&spectra) {
                    for (x, y) in a.iter_mut().zip(s) {
                        *x += y;
                    }
                }
            }
        }
    }
    let values = sums
        .expect("count >= 1")
        .into_iter()
        .map(|v| v.into_iter().map(|x| x / count as f64).collect())
        .collect();
    Ok(SpectrumReport::new(
        SpectrumMeta {
            spec: spec.to_string(),
            theta_max: params.theta_max,
            seed: params.seed,
            corpus_size: count,
            convert_uint8: options.convert_uint8,
        },
        values,
    ))
}

/// Population variance of `values[range]`.
pub fn index_range_variance(values: &[f64], range: std::ops::Range<usize>) -> f64 {
    let slice = &values[range];
    let n = slice.len() as f64;
    let mean = slice.iter().sum::<f64>() / n;
    slice.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n
}

/// Mean of `values[range]`.
pub fn index_range_mean(values: &[f64], range: std::ops::Range<usize>) -> f64 {
    let slice = &values[range];
    slice.iter().sum::<f64>() / slice.len() as f64
}
