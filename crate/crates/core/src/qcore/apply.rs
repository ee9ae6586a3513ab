use num_complex::Complex64;

use super::gate::Gate2x2;
use super::plan::RotationPlan;
use super::state::AmplitudeState;
use crate::error::{invalid, Result};

/// Apply `plan` to `state` without materializing the `N × N` operator.
///
/// A pass views the state as a `2 × N/2` matrix, left multiplies it by one
/// qubit's composed gate and writes the transpose back out flattened. The
/// row index of that view is the most significant address bit, and the
/// transpose rotates the address bits left by one, so pass `p` acts on qubit
/// `n - 1 - p` and after `n` passes every qubit has been hit once and the
/// original bit order is restored. Cost is `O(N log N)`.
///
/// Passes are fused in pairs: a `4 × N/4` view multiplied by `A ⊗ B` does two
/// single-qubit passes with one sweep over memory.
pub fn apply_plan(state: &AmplitudeState, plan: &RotationPlan) -> Result<AmplitudeState> {
    let mut out = state.clone();
    apply_plan_in_place(&mut out, plan, &mut Vec::new())?;
    Ok(out)
}

/// [`apply_plan`] on `state` itself. `scratch` is resized as needed and can
/// be reused across calls to avoid reallocating.
pub fn apply_plan_in_place(
    state: &mut AmplitudeState,
    plan: &RotationPlan,
    scratch: &mut Vec<Complex64>,
) -> Result<()> {
    if plan.n_qubits() != state.n_qubits() {
        return Err(invalid(format!(
            "plan has {} qubits, state has {}",
            plan.n_qubits(),
            state.n_qubits()
        )));
    }
    let gates = plan.composed_gates()?;
    scratch.resize(state.len(), Complex64::new(0.0, 0.0));
    let amps = state.amplitudes_vec_mut();
    let mut order = gates.iter().rev();
    while let Some(first) = order.next() {
        match order.next() {
            Some(second) => reshape_multiply_transpose_pair(amps, scratch, first, second),
            None => reshape_multiply_transpose(amps, scratch, first),
        }
        std::mem::swap(amps, scratch);
    }
    Ok(())
}

fn reshape_multiply_transpose(src: &[Complex64], dst: &mut [Complex64], gate: &Gate2x2) {
    let half = src.len() / 2;
    let (top, bottom) = src.split_at(half);
    let [g00, g01, g10, g11] = gate.0;
    for ((pair, &a), &b) in dst.chunks_exact_mut(2).zip(top).zip(bottom) {
        pair[0] = g00 * a + g01 * b;
        pair[1] = g10 * a + g11 * b;
    }
}

/// Two passes at once: the top address bit takes `first`, the next one
/// `second`, and the address rotates left by two.
fn reshape_multiply_transpose_pair(src: &[Complex64], dst: &mut [Complex64], first: &Gate2x2, second: &Gate2x2) {
    let quarter = src.len() / 4;
    let m: [[Complex64; 4]; 4] =
        std::array::from_fn(|r| std::array::from_fn(|s| first.0[(r >> 1) * 2 + (s >> 1)] * second.0[(r & 1) * 2 + (s & 1)]));
    let (s0, rest) = src.split_at(quarter);
    let (s1, rest) = rest.split_at(quarter);
    let (s2, s3) = rest.split_at(quarter);
    let rows = s0.iter().zip(s1).zip(s2.iter().zip(s3));
    for (out, ((&x0, &x1), (&x2, &x3))) in dst.chunks_exact_mut(4).zip(rows) {
        for (o, row) in out.iter_mut().zip(&m) {
            *o = row[0] * x0 + row[1] * x1 + row[2] * x2 + row[3] * x3;
        }
    }
}

/// Signed phase sum `φ_k = Σ_i s_i(k) θ_i` for every address `k`, where
/// `s_i(k) = +1` if bit `i` of `k` is set and `-1` otherwise.
///
/// Built by doubling, `O(N)`.
pub fn qrz_phases(angles: &[f64]) -> Vec<f64> {
    let mut phases = Vec::new();
    qrz_phases_into(angles, &mut phases);
    phases
}

/// [`qrz_phases`] into a reusable buffer.
pub fn qrz_phases_into(angles: &[f64], phases: &mut Vec<f64>) {
    phases.clear();
    phases.reserve(1 << angles.len());
    phases.push(0.0);
    for &theta in angles {
        let len = phases.len();
        for k in 0..len {
            let p = phases[k];
            phases[k] = p - theta;
            phases.push(p + theta);
        }
    }
}

/// Z-only rotation as a diagonal: amplitude `k` is multiplied by
/// `exp(i φ_k / 2)` (see [`qrz_phases`]). `O(N)`.
pub fn apply_qrz_fast(state: &AmplitudeState, angles: &[f64]) -> Result<AmplitudeState> {
    let mut out = state.clone();
    apply_qrz_in_place(&mut out, angles, &mut Vec::new())?;
    Ok(out)
}

/// [`apply_qrz_fast`] on `state` itself, with a reusable phase buffer.
pub fn apply_qrz_in_place(state: &mut AmplitudeState, angles: &[f64], phases: &mut Vec<f64>) -> Result<()> {
    if angles.len() != state.n_qubits() {
        return Err(invalid(format!(
            "{} angles for a {}-qubit state",
            angles.len(),
            state.n_qubits()
        )));
    }
    if let Some(bad) = angles.iter().find(|a| !a.is_finite()) {
        return Err(invalid(format!("non-finite angle {bad}")));
    }
    qrz_phases_into(angles, phases);
    for (a, phi) in state.amplitudes_vec_mut().iter_mut().zip(phases.iter()) {
        *a *= Complex64::from_polar(1.0, phi / 2.0);
    }
    Ok(())
}
