//! Amplitude embedding and per-qubit Bloch rotations.
//!
//! An image channel is flattened row-major into a state vector of length
//! `N = 2^n` and rotated by a tensor product of single-qubit gates. Because
//! no gate couples two qubits, the rotation is applied one qubit at a time in
//! `O(N log N)` instead of as an `N × N` matrix.

mod apply;
mod gate;
mod plan;
mod state;

pub use apply::{apply_plan, apply_plan_in_place, apply_qrz_fast, apply_qrz_in_place, qrz_phases, qrz_phases_into};
pub use gate::{rotation_gate, Axis, Gate2x2};
pub use plan::{invert_plan, sample_plan, AxisMode, Rotation, RotationPlan};
pub use state::{embed, extract, AmplitudeState, MAX_EMBED_QUBITS};
