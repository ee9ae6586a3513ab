//! Statistics of the accumulated Z phase behind `real(QR_Z)`.
//!
//! With Z-only angles `θ_i ~ U[0, Θ]`, `real(QR_Z)` multiplies pixel `k` by
//! `cos(ζ_k / 2)` where `ζ_k = Σ_i ±θ_i`, the sign being `+` for every qubit
//! whose address bit is 0 and `−` where it is 1. For an address with `m` set
//! bits, `ζ_k` is a sum of `n` signed uniforms (Irwin–Hall up to sign), with
//! mean `(n − 2m)Θ/2` and variance `nΘ²/12`.
//!
//! This `ζ_k` is the negation of [`crate::qcore::qrz_phases`]; the cosine is
//! even so the factor is the same either way.

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{invalid, Result};
use crate::qcore::{sample_plan, AxisMode};
use crate::seed;

/// Mean and variance of `ζ_k` for `n` qubits and an address with `m` ones.
pub fn qrz_factor_stats(n: usize, theta_max: f64, m: usize) -> Result<(f64, f64)> {
    if m > n {
        return Err(invalid(format!("popcount {m} exceeds qubit count {n}")));
    }
    let mu = (n as f64 - 2.0 * m as f64) * theta_max / 2.0;
    let sigma2 = n as f64 * theta_max * theta_max / 12.0;
    Ok((mu, sigma2))
}

/// Draw `samples` Z-only plans and return `ζ_k` for the address whose low
/// `m` bits are set.
pub fn sample_phase_sums(n: usize, theta_max: f64, m: usize, samples: usize, seed: u64) -> Result<Vec<f64>> {
    if m > n {
        return Err(invalid(format!("popcount {m} exceeds qubit count {n}")));
    }
    (0..samples)
        .map(|t| {
            let plan = sample_plan(n, AxisMode::Z, theta_max, seed::derive(seed, &format!("plan{t}")))?;
            let angles = plan.z_angles().expect("Z-only plan");
            Ok(angles
                .iter()
                .enumerate()
                .map(|(i, a)| if i < m { -a } else { *a })
                .sum())
        })
        .collect()
}

/// Kolmogorov–Smirnov distance of the empirical `ζ` distribution (all bits 0)
/// from `Normal(μ, σ²)` with matching moments.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaussianCheck {
    pub n: usize,
    pub samples: usize,
    pub mu: f64,
    pub sigma2: f64,
    pub ks_distance: f64,
    pub threshold: f64,
    pub pass: bool,
}

pub const GAUSSIAN_KS_THRESHOLD: f64 = 0.02;

pub fn gaussian_approx_check(n: usize, theta_max: f64, samples: usize, seed: u64) -> Result<GaussianCheck> {
    if n == 0 {
        return Err(invalid("n must be at least 1"));
    }
    if samples < 10_000 {
        return Err(invalid(format!("need at least 10^4 samples, got {samples}")));
    }
    if !(theta_max > 0.0 && theta_max.is_finite()) {
        return Err(invalid("theta_max must be positive"));
    }
    let (mu, sigma2) = qrz_factor_stats(n, theta_max, 0)?;
    let mut xs = sample_phase_sums(n, theta_max, 0, samples, seed)?;
    xs.sort_by(f64::total_cmp);
    let normal = Normal::new(mu, sigma2.sqrt()).map_err(|e| invalid(e.to_string()))?;
    let total = xs.len() as f64;
    let ks_distance = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = normal.cdf(x);
            (f - i as f64 / total).abs().max((f - (i + 1) as f64 / total).abs())
        })
        .fold(0.0, f64::max);
    Ok(GaussianCheck {
        n,
        samples,
        mu,
        sigma2,
        ks_distance,
        threshold: GAUSSIAN_KS_THRESHOLD,
        pass: ks_distance < GAUSSIAN_KS_THRESHOLD,
    })
}
