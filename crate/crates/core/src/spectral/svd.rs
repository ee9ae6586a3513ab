use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::grid::{Channel, ComplexGrid};
use crate::qcore::AmplitudeState;

fn sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// The `min(rows, cols)` singular values of a real channel, descending.
pub fn singular_values(channel: &Channel) -> Vec<f64> {
    let m = DMatrix::from_row_slice(channel.rows(), channel.cols(), channel.as_slice());
    sorted_desc(m.singular_values().iter().copied().collect())
}

/// Singular values of a complex 2D array, descending.
pub fn complex_singular_values(grid: &ComplexGrid) -> Vec<f64> {
    let m = DMatrix::from_row_slice(grid.rows(), grid.cols(), grid.as_slice());
    sorted_desc(m.singular_values().iter().copied().collect())
}

/// Schmidt coefficients across the bipartition after qubit `cut`.
///
/// The state is reshaped row-major to `2^cut × 2^(n−cut)`: the high `cut`
/// qubits index rows and the low `n − cut` qubits index columns. For an
/// embedded `2^cut × 2^(n−cut)` image this is the image itself.
pub fn schmidt_coefficients(state: &AmplitudeState, cut: usize) -> Result<Vec<f64>> {
    let n = state.n_qubits();
    if cut == 0 || cut >= n {
        return Err(invalid(format!("cut {cut} must lie in 1..={}", n.saturating_sub(1))));
    }
    let m = DMatrix::<Complex64>::from_row_slice(1 << cut, 1 << (n - cut), state.amplitudes());
    Ok(sorted_desc(m.singular_values().iter().copied().collect()))
}

/// `max_i |a_i − b_i|` over the common prefix, with missing entries read as 0.
pub fn linf_distance(a: &[f64], b: &[f64]) -> f64 {
    let len = a.len().max(b.len());
    (0..len)
        .map(|i| (a.get(i).unwrap_or(&0.0) - b.get(i).unwrap_or(&0.0)).abs())
        .fold(0.0, f64::max)
}
