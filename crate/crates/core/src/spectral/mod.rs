//! Singular-value spectra of images and states.

mod corpus;
mod report;
mod stats;
mod svd;

pub use corpus::{
    average_spectra, image_spectra, index_range_mean, index_range_variance, prepare,
    CorpusOptions,
};
pub use report::{spectrum_diff, SpectrumMeta, SpectrumReport};
pub use stats::{
    gaussian_approx_check, qrz_factor_stats, sample_phase_sums, GaussianCheck, GAUSSIAN_KS_THRESHOLD,
};
pub use svd::{complex_singular_values, linf_distance, schmidt_coefficients, singular_values};
