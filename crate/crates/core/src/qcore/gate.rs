use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Bloch-sphere rotation axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axis::X => "X",
            Axis::Y => "Y",
            Axis::Z => "Z",
        };
        f.write_str(s)
    }
}

/// A 2×2 complex matrix, row-major: `[[m[0], m[1]], [m[2], m[3]]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gate2x2(pub [Complex64; 4]);

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

impl Gate2x2 {
    pub const IDENTITY: Gate2x2 = Gate2x2([ONE, ZERO, ZERO, ONE]);

    /// Hadamard gate.
    pub fn hadamard() -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Gate2x2([h, h, h, -h])
    }

    /// The π/2 phase gate `S = diag(1, i)`.
    pub fn phase_s() -> Self {
        Gate2x2([ONE, ZERO, ZERO, Complex64::i()])
    }

    pub fn dagger(&self) -> Self {
        let [a, b, c, d] = self.0;
        Gate2x2([a.conj(), c.conj(), b.conj(), d.conj()])
    }

    /// `max |(G·G†) - I|` over the four entries.
    pub fn unitarity_error(&self) -> f64 {
        (*self * self.dagger()).max_abs_diff(&Self::IDENTITY)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Mul for Gate2x2 {
    type Output = Gate2x2;

    fn mul(self, rhs: Gate2x2) -> Gate2x2 {
        let [a, b, c, d] = self.0;
        let [e, f, g, h] = rhs.0;
        Gate2x2([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h])
    }
}

/// `exp(-i θ σ/2)` for the Pauli operator `σ` of `axis`.
pub fn rotation_gate(axis: Axis, theta: f64) -> Result<Gate2x2> {
    if !theta.is_finite() {
        return Err(invalid(format!("rotation angle must be finite, got {theta}")));
    }
    Ok(rotation_gate_unchecked(axis, theta))
}

pub(crate) fn rotation_gate_unchecked(axis: Axis, theta: f64) -> Gate2x2 {
    let (s, c) = (theta / 2.0).sin_cos();
    match axis {
        Axis::X => Gate2x2([
            Complex64::new(c, 0.0),
            Complex64::new(0.0, -s),
            Complex64::new(0.0, -s),
            Complex64::new(c, 0.0),
        ]),
        Axis::Y => Gate2x2([
            Complex64::new(c, 0.0),
            Complex64::new(-s, 0.0),
            Complex64::new(s, 0.0),
            Complex64::new(c, 0.0),
        ]),
        Axis::Z => Gate2x2([
            Complex64::new(c, -s),
            ZERO,
            ZERO,
            Complex64::new(c, s),
        ]),
    }
}
