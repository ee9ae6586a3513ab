use rand::Rng;
use serde::{Deserialize, Serialize};

use super::classical::{center_crop, classical_rotation, flip_h, gaussian_noise, perfect_rotation};
use super::image::ImageBuffer;
use super::quantum::{minmax_renormalize, project_abs, project_imag, project_real};
use super::spec::{AugmentSpec, Op};
use crate::error::{invalid, Result};
use crate::grid::Channel;
use crate::qcore::{apply_plan, apply_qrz_fast, embed, sample_plan, AmplitudeState, AxisMode};
use crate::seed;

/// Tunables shared by every operator in a pipeline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AugmentParams {
    /// Upper bound Θ of the uniform rotation angles, radians.
    pub theta_max: f64,
    /// Gaussian noise standard deviation in native pixel units.
    pub gn_sigma: f64,
    /// Classical rotation angles are drawn from `[-cr_bound_deg, cr_bound_deg]`.
    pub cr_bound_deg: f64,
    pub crop_enlarge: f64,
    /// Crop window; `None` keeps the incoming size.
    pub crop_out: Option<(usize, usize)>,
    pub seed: u64,
    /// Min-max renormalize quantum outputs against the pre-rotation image.
    pub renormalize: bool,
}

impl Default for AugmentParams {
    fn default() -> Self {
        Self {
            theta_max: 0.01,
            gn_sigma: 1.0,
            cr_bound_deg: 35.0,
            crop_enlarge: 1.15,
            crop_out: None,
            seed: 0,
            renormalize: true,
        }
    }
}

impl AugmentParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.theta_max >= 0.0 && self.theta_max.is_finite()) {
            return Err(invalid(format!("theta_max must be >= 0, got {}", self.theta_max)));
        }
        if !(self.gn_sigma >= 0.0 && self.gn_sigma.is_finite()) {
            return Err(invalid(format!("gn_sigma must be >= 0, got {}", self.gn_sigma)));
        }
        if !(0.0..=180.0).contains(&self.cr_bound_deg) {
            return Err(invalid(format!(
                "cr_bound_deg must lie in [0, 180], got {}",
                self.cr_bound_deg
            )));
        }
        if !(self.crop_enlarge > 1.0 && self.crop_enlarge.is_finite()) {
            return Err(invalid(format!(
                "crop_enlarge must be > 1, got {}",
                self.crop_enlarge
            )));
        }
        Ok(())
    }
}

/// Output of [`run_pipeline`].
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOutput {
    /// The augmented image, or the real planes of an unprojected quantum
    /// result.
    pub image: ImageBuffer,
    /// Imaginary planes when the pipeline ends in an unprojected `QR_*`.
    pub imag: Option<ImageBuffer>,
    /// Number of planes whose renormalization hit a constant input.
    pub degenerate_planes: usize,
}

impl PipelineOutput {
    pub fn is_complex(&self) -> bool {
        self.imag.is_some()
    }

    /// Real planes followed by imaginary planes.
    pub fn planes(&self) -> Vec<&Channel> {
        let mut out: Vec<&Channel> = self.image.channels().iter().collect();
        if let Some(im) = &self.imag {
            out.extend(im.channels());
        }
        out
    }
}

enum Value {
    Pixels(ImageBuffer),
    Amplitudes {
        states: Vec<AmplitudeState>,
        reference: ImageBuffer,
    },
}

/// Run `spec` on `img` as image number 0.
pub fn run_pipeline(img: &ImageBuffer, spec: &AugmentSpec, params: &AugmentParams) -> Result<PipelineOutput> {
    run_pipeline_indexed(img, spec, params, 0)
}

/// Run `spec` on `img`, innermost operator first.
///
/// Each node draws from its own stream, [`seed::node_seed`] of
/// `(params.seed, image_index, depth, op)`. Random geometric choices and
/// rotation plans are drawn once per image and shared by all channels; noise
/// is drawn per pixel per channel. After a quantum subtree is projected (or
/// at the end, for an unprojected result) each plane is min-max renormalized
/// against the image that entered the innermost `QR_*` of that subtree.
pub fn run_pipeline_indexed(
    img: &ImageBuffer,
    spec: &AugmentSpec,
    params: &AugmentParams,
    image_index: u64,
) -> Result<PipelineOutput> {
    params.validate()?;
    let mut degenerate_planes = 0;
    let mut value = Value::Pixels(img.clone());
    for (i, op) in spec.ops().into_iter().enumerate() {
        let node_seed = seed::node_seed(params.seed, image_index, i + 1, op.name());
        value = step(value, op, params, node_seed, &mut degenerate_planes)?;
    }
    match value {
        Value::Pixels(image) => Ok(PipelineOutput {
            image,
            imag: None,
            degenerate_planes,
        }),
        Value::Amplitudes { states, reference } => {
            let re = finish(&states, &reference, project_real, params, &mut degenerate_planes)?;
            let im = finish(&states, &reference, project_imag, params, &mut degenerate_planes)?;
            Ok(PipelineOutput {
                image: re,
                imag: Some(im),
                degenerate_planes,
            })
        }
    }
}

fn finish(
    states: &[AmplitudeState],
    reference: &ImageBuffer,
    project: fn(&AmplitudeState) -> Channel,
    params: &AugmentParams,
    degenerate: &mut usize,
) -> Result<ImageBuffer> {
    let channels = states
        .iter()
        .zip(reference.channels())
        .map(|(state, orig)| {
            let projected = project(state);
            if !params.renormalize {
                return projected;
            }
            let r = minmax_renormalize(&projected, orig);
            *degenerate += usize::from(r.degenerate);
            r.channel
        })
        .collect();
    ImageBuffer::new(channels)
}

fn step(
    value: Value,
    op: Op,
    params: &AugmentParams,
    node_seed: u64,
    degenerate: &mut usize,
) -> Result<Value> {
    match (op, value) {
        (Op::GaussianNoise, Value::Pixels(img)) => {
            Ok(Value::Pixels(gaussian_noise(&img, params.gn_sigma, node_seed)?))
        }
        (Op::Flip, Value::Pixels(img)) => {
            let flip: bool = seed::rng(node_seed).random_bool(0.5);
            Ok(Value::Pixels(if flip { flip_h(&img) } else { img }))
        }
        (Op::PerfectRotation, Value::Pixels(img)) => {
            let k: i64 = seed::rng(node_seed).random_range(0..4);
            Ok(Value::Pixels(perfect_rotation(&img, k)))
        }
        (Op::ClassicalRotation, Value::Pixels(img)) => {
            let b = params.cr_bound_deg;
            let angle = seed::rng(node_seed).random_range(-b..=b);
            Ok(Value::Pixels(classical_rotation(&img, angle)?))
        }
        (Op::Crop, Value::Pixels(img)) => {
            let out = params.crop_out.unwrap_or(img.shape());
            Ok(Value::Pixels(center_crop(&img, params.crop_enlarge, out)?))
        }
        (Op::Quantum(mode), Value::Pixels(img)) => {
            let states = img.channels().iter().map(embed).collect::<Result<Vec<_>>>()?;
            let states = rotate(&states, mode, params.theta_max, node_seed)?;
            Ok(Value::Amplitudes {
                states,
                reference: img,
            })
        }
        (Op::Quantum(mode), Value::Amplitudes { states, reference }) => Ok(Value::Amplitudes {
            states: rotate(&states, mode, params.theta_max, node_seed)?,
            reference,
        }),
        (Op::Real, Value::Amplitudes { states, reference }) => Ok(Value::Pixels(finish(
            &states, &reference, project_real, params, degenerate,
        )?)),
        (Op::Abs, Value::Amplitudes { states, reference }) => Ok(Value::Pixels(finish(
            &states, &reference, project_abs, params, degenerate,
        )?)),
        (op, _) => Err(invalid(format!("operator {op} applied to the wrong kind of data"))),
    }
}

/// One plan per image, applied to every channel. Z-only plans take the
/// diagonal fast path.
fn rotate(states: &[AmplitudeState], mode: AxisMode, theta_max: f64, seed: u64) -> Result<Vec<AmplitudeState>> {
    let n = states[0].n_qubits();
    let plan = sample_plan(n, mode, theta_max, seed)?;
    match plan.z_angles() {
        Some(angles) => states.iter().map(|s| apply_qrz_fast(s, &angles)).collect(),
        None => states.iter().map(|s| apply_plan(s, &plan)).collect(),
    }
}
