use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::gate::{rotation_gate_unchecked, Axis, Gate2x2};
use crate::error::{invalid, Error, Result};
use crate::seed;

/// Which axes a sampled plan rotates about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AxisMode {
    X,
    Y,
    Z,
    /// All three axes per qubit, in an independently shuffled order.
    Xyz,
}

impl AxisMode {
    pub fn label(self) -> &'static str {
        match self {
            AxisMode::X => "X",
            AxisMode::Y => "Y",
            AxisMode::Z => "Z",
            AxisMode::Xyz => "XYZ",
        }
    }
}

impl fmt::Display for AxisMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for AxisMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "X" => Ok(AxisMode::X),
            "Y" => Ok(AxisMode::Y),
            "Z" => Ok(AxisMode::Z),
            "XYZ" => Ok(AxisMode::Xyz),
            other => Err(invalid(format!("unknown axis mode '{other}'"))),
        }
    }
}

/// One rotation about a single axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rotation {
    pub axis: Axis,
    pub angle: f64,
}

/// Per-qubit ordered rotations. `per_qubit[i][0]` is applied to qubit `i`
/// first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RotationPlan {
    pub per_qubit: Vec<Vec<Rotation>>,
    pub theta_max: f64,
    pub seed: u64,
}

impl RotationPlan {
    pub fn n_qubits(&self) -> usize {
        self.per_qubit.len()
    }

    /// Plan with a single `axis` rotation per qubit at the given angles.
    pub fn single_axis(axis: Axis, angles: &[f64]) -> Self {
        let theta_max = angles.iter().copied().fold(0.0, f64::max);
        Self {
            per_qubit: angles
                .iter()
                .map(|&angle| vec![Rotation { axis, angle }])
                .collect(),
            theta_max,
            seed: 0,
        }
    }

    /// Composed 2×2 gate for each qubit: later rotations multiply on the left.
    pub fn composed_gates(&self) -> Result<Vec<Gate2x2>> {
        self.per_qubit
            .iter()
            .enumerate()
            .map(|(q, rots)| {
                let mut axes_seen = [false; 3];
                let mut g = Gate2x2::IDENTITY;
                for r in rots {
                    if !r.angle.is_finite() {
                        return Err(invalid(format!("qubit {q}: non-finite angle")));
                    }
                    let slot = &mut axes_seen[r.axis as usize];
                    if *slot {
                        return Err(invalid(format!("qubit {q}: axis {} repeated", r.axis)));
                    }
                    *slot = true;
                    g = rotation_gate_unchecked(r.axis, r.angle) * g;
                }
                Ok(g)
            })
            .collect()
    }

    /// Angles of a Z-only plan, one per qubit, or `None` if any qubit uses
    /// another axis or more than one rotation.
    pub fn z_angles(&self) -> Option<Vec<f64>> {
        self.per_qubit
            .iter()
            .map(|rots| match rots.as_slice() {
                [] => Some(0.0),
                [Rotation { axis: Axis::Z, angle }] => Some(*angle),
                _ => None,
            })
            .collect()
    }
}

/// Draw a random plan.
///
/// Angles are uniform on the closed interval `[0, theta_max]`. In
/// [`AxisMode::Xyz`] each qubit gets a uniformly shuffled `(X, Y, Z)` order
/// and three independent angles. The stream is [`seed::rng`] of `seed`:
/// qubit 0 first, and within a qubit the shuffle precedes the angles.
pub fn sample_plan(n_qubits: usize, mode: AxisMode, theta_max: f64, seed: u64) -> Result<RotationPlan> {
    if n_qubits == 0 {
        return Err(invalid("a plan needs at least one qubit"));
    }
    if !(theta_max >= 0.0 && theta_max.is_finite()) {
        return Err(invalid(format!("theta_max must be finite and >= 0, got {theta_max}")));
    }
    let mut rng = seed::rng(seed);
    let per_qubit = (0..n_qubits)
        .map(|_| {
            let axes: Vec<Axis> = match mode {
                AxisMode::X => vec![Axis::X],
                AxisMode::Y => vec![Axis::Y],
                AxisMode::Z => vec![Axis::Z],
                AxisMode::Xyz => {
                    let mut all = Axis::ALL.to_vec();
                    all.shuffle(&mut rng);
                    all
                }
            };
            axes.into_iter()
                .map(|axis| Rotation {
                    axis,
                    angle: rng.random_range(0.0..=theta_max),
                })
                .collect()
        })
        .collect();
    Ok(RotationPlan {
        per_qubit,
        theta_max,
        seed,
    })
}

/// The plan that undoes `plan`: per-qubit order reversed, angles negated.
pub fn invert_plan(plan: &RotationPlan) -> RotationPlan {
    RotationPlan {
        per_qubit: plan
            .per_qubit
            .iter()
            .map(|rots| {
                rots.iter()
                    .rev()
                    .map(|r| Rotation {
                        axis: r.axis,
                        angle: -r.angle,
                    })
                    .collect()
            })
            .collect(),
        theta_max: plan.theta_max,
        seed: plan.seed,
    }
}
