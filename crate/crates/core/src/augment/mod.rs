//! Classical and quantum-inspired augmentations and the pipeline language
//! that composes them.

mod classical;
mod image;
mod pipeline;
mod quantum;
mod spec;

pub use classical::{
    center_crop, classical_rotation, crop_source_coord, flip_h, gaussian_noise, perfect_rotation,
    resize_bilinear,
};
pub use image::ImageBuffer;
pub use pipeline::{run_pipeline, run_pipeline_indexed, AugmentParams, PipelineOutput};
pub use quantum::{minmax_renormalize, project_abs, project_imag, project_real, Renormalized};
pub use spec::{parse_spec, parse_spec_permissive, AugmentSpec, Expr, Op};
