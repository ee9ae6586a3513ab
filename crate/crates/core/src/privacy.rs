//! Pixel-level differential privacy and the limits of rotation-based
//! obfuscation.
//!
//! [`dp_noise`] is the Laplace mechanism at a fixed per-pixel sensitivity.
//! [`strong_rotation_encrypt`] uses a seeded rotation plan as a secret key.
//! [`non_dp_witness`] shows that the rotation itself is not differentially
//! private: it leaves every Schmidt coefficient (the image's singular values)
//! unchanged, so the output spectrum identifies its source with certainty.

use rand_distr::{Distribution, Exp};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::augment::{project_abs, ImageBuffer};
use crate::error::{invalid, Result};
use crate::grid::Channel;
use crate::qcore::{apply_plan, apply_qrz_fast, embed, sample_plan, AmplitudeState, AxisMode, RotationPlan};
use crate::seed;
use crate::spectral::{linf_distance, schmidt_coefficients, singular_values};

/// Parameters of the Laplace mechanism.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DpParams {
    pub epsilon: f64,
    /// Maximum per-pixel change, in pixel units.
    pub sensitivity: f64,
    /// Reported only; the Laplace mechanism is pure ε-DP.
    pub delta: f64,
    pub seed: u64,
}

impl DpParams {
    pub fn new(epsilon: f64, seed: u64) -> Self {
        Self {
            epsilon,
            sensitivity: 255.0,
            delta: 0.0,
            seed,
        }
    }

    pub fn scale(&self) -> f64 {
        self.sensitivity / self.epsilon
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(invalid(format!("epsilon must be > 0, got {}", self.epsilon)));
        }
        if !(self.sensitivity > 0.0 && self.sensitivity.is_finite()) {
            return Err(invalid(format!("sensitivity must be > 0, got {}", self.sensitivity)));
        }
        if !(0.0..=1.0).contains(&self.delta) {
            return Err(invalid(format!("delta must lie in [0, 1], got {}", self.delta)));
        }
        Ok(())
    }
}

/// Laplace(0, scale) as the difference of two Exp(1/scale) draws.
pub struct Laplace {
    exp: Exp<f64>,
}

impl Laplace {
    pub fn new(scale: f64) -> Result<Self> {
        let exp = Exp::new(1.0 / scale).map_err(|e| invalid(format!("laplace scale {scale}: {e}")))?;
        Ok(Self { exp })
    }
}

impl Distribution<f64> for Laplace {
    fn sample<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.exp.sample(rng) - self.exp.sample(rng)
    }
}

/// Add independent Laplace(sensitivity/ε) noise to every pixel of every
/// channel.
pub fn dp_noise(img: &ImageBuffer, params: &DpParams) -> Result<ImageBuffer> {
    params.validate()?;
    let laplace = Laplace::new(params.scale())?;
    let mut rng = seed::rng(params.seed);
    img.map_channels(|ch| ch.map(|&v| v + laplace.sample(&mut rng)))
}

/// Output of [`strong_rotation_encrypt`].
#[derive(Debug, Clone)]
pub struct Encrypted {
    /// `abs()` of the rotated state, per channel.
    pub image: ImageBuffer,
    /// The key.
    pub plan: RotationPlan,
    states: Vec<AmplitudeState>,
}

impl Encrypted {
    /// The full rotated states, recoverable only with [`Encrypted::plan`].
    pub fn complex_states(&self) -> &[AmplitudeState] {
        &self.states
    }
}

/// Rotate every channel by a seeded Z-only plan with angles on
/// `[0, theta_max]` and publish the modulus.
///
/// The modulus of a diagonal phase rotation equals the modulus of the input,
/// so for real images the published image is `|img|` for every key; all key
/// material lives in the retained complex states.
pub fn strong_rotation_encrypt(img: &ImageBuffer, theta_max: f64, seed: u64) -> Result<Encrypted> {
    let states = img.channels().iter().map(embed).collect::<Result<Vec<_>>>()?;
    let plan = sample_plan(states[0].n_qubits(), AxisMode::Z, theta_max, seed)?;
    let angles = plan.z_angles().expect("Z-only plan");
    let states = states
        .iter()
        .map(|s| apply_qrz_fast(s, &angles))
        .collect::<Result<Vec<_>>>()?;
    let image = ImageBuffer::new(states.iter().map(project_abs).collect())?;
    Ok(Encrypted { image, plan, states })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    /// Every trial identified its source exactly: the rotation is not DP.
    Positive,
    /// Some trial failed to identify its source.
    Negative,
    /// The two inputs share a spectrum, so the test cannot distinguish them.
    Inconclusive,
}

/// Result of [`non_dp_witness`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub trials: usize,
    /// Smallest distance between an output spectrum and its own source's.
    pub min_own_distance: f64,
    /// Largest such distance; must stay below the identification tolerance.
    pub max_own_distance: f64,
    /// Smallest distance between an output spectrum and the other source's.
    pub min_cross_distance: f64,
    /// Half the distance between the two source spectra.
    pub gap: f64,
    pub verdict: Verdict,
}

/// Distance below which an output spectrum counts as its source's.
pub const IDENTIFY_TOL: f64 = 1e-9;

fn log2_exact(v: usize) -> Option<usize> {
    v.is_power_of_two().then(|| v.trailing_zeros() as usize)
}

fn spectra(img: &ImageBuffer) -> Vec<Vec<f64>> {
    img.channels().iter().map(singular_values).collect()
}

fn spectra_distance(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter().zip(b).map(|(x, y)| linf_distance(x, y)).fold(0.0, f64::max)
}

fn rotated_spectra(channels: &[Channel], cut: usize, theta_max: f64, seed: u64) -> Result<Vec<Vec<f64>>> {
    let states = channels.iter().map(embed).collect::<Result<Vec<_>>>()?;
    let plan = sample_plan(states[0].n_qubits(), AxisMode::Xyz, theta_max, seed)?;
    states
        .iter()
        .map(|s| schmidt_coefficients(&apply_plan(s, &plan)?, cut))
        .collect()
}

/// Apply independent full `QR_XYZ` plans (no projection) to both images in
/// each of `trials` trials and check that the output spectrum of each
/// identifies its source.
///
/// Images must share shape and channel count, with power-of-two sides so the
/// state bipartition at the row boundary is exactly the image matrix.
pub fn non_dp_witness(
    img_a: &ImageBuffer,
    img_b: &ImageBuffer,
    theta_max: f64,
    seed: u64,
    trials: usize,
) -> Result<WitnessReport> {
    if img_a.shape() != img_b.shape() || img_a.num_channels() != img_b.num_channels() {
        return Err(invalid("witness images must share shape and channel count"));
    }
    if trials == 0 {
        return Err(invalid("at least one trial is required"));
    }
    let (rows, cols) = img_a.shape();
    let (Some(cut), Some(col_bits)) = (log2_exact(rows), log2_exact(cols)) else {
        return Err(invalid(format!("witness images need power-of-two sides, got {rows}x{cols}")));
    };
    if cut == 0 || col_bits == 0 {
        return Err(invalid("witness images need at least two rows and two columns"));
    }

    let spec_a = spectra(img_a);
    let spec_b = spectra(img_b);
    let source_gap = spectra_distance(&spec_a, &spec_b);
    let gap = source_gap / 2.0;

    let per_trial = (0..trials)
        .into_par_iter()
        .map(|t| {
            let out_a = rotated_spectra(img_a.channels(), cut, theta_max, seed::derive(seed, &format!("trial{t}/a")))?;
            let out_b = rotated_spectra(img_b.channels(), cut, theta_max, seed::derive(seed, &format!("trial{t}/b")))?;
            let own = [spectra_distance(&out_a, &spec_a), spectra_distance(&out_b, &spec_b)];
            let cross = [spectra_distance(&out_a, &spec_b), spectra_distance(&out_b, &spec_a)];
            Ok((own, cross))
        })
        .collect::<Result<Vec<_>>>()?;

    let owns = per_trial.iter().flat_map(|(o, _)| o.iter().copied());
    let crosses = per_trial.iter().flat_map(|(_, c)| c.iter().copied());
    let min_own_distance = owns.clone().fold(f64::INFINITY, f64::min);
    let max_own_distance = owns.fold(0.0, f64::max);
    let min_cross_distance = crosses.fold(f64::INFINITY, f64::min);

    let verdict = if source_gap < IDENTIFY_TOL {
        Verdict::Inconclusive
    } else if max_own_distance < IDENTIFY_TOL && min_cross_distance > gap {
        Verdict::Positive
    } else {
        Verdict::Negative
    };
    Ok(WitnessReport {
        trials,
        min_own_distance,
        max_own_distance,
        min_cross_distance,
        gap,
        verdict,
    })
}
