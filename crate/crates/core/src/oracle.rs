//! Naive dense reference for plan application.
//!
//! Builds the full `2^n × 2^n` operator as an explicit Kronecker product and
//! applies it as a plain matrix-vector product. Used by tests and as the
//! `O(N²)` baseline in benchmarks; intentionally unoptimized.

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::qcore::{AmplitudeState, RotationPlan};

/// Largest qubit count [`build_dense`] accepts (4096² complex entries).
pub const DEFAULT_MAX_QUBITS: usize = 12;

/// A dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    dim: usize,
    entries: Vec<Complex64>,
}

impl DenseOperator {
    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.entries[r * self.dim + c]
    }

    /// `self ⊗ rhs`.
    pub fn kron(&self, rhs: &DenseOperator) -> DenseOperator {
        let dim = self.dim * rhs.dim;
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..self.dim {
            for j in 0..self.dim {
                let a = self.get(i, j);
                for k in 0..rhs.dim {
                    for l in 0..rhs.dim {
                        entries[(i * rhs.dim + k) * dim + j * rhs.dim + l] = a * rhs.get(k, l);
                    }
                }
            }
        }
        DenseOperator { dim, entries }
    }

    pub fn conj_transpose(&self) -> DenseOperator {
        let n = self.dim;
        let mut entries = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                entries.push(self.get(c, r).conj());
            }
        }
        DenseOperator { dim: n, entries }
    }

    pub fn matmul(&self, rhs: &DenseOperator) -> DenseOperator {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                for j in 0..n {
                    entries[i * n + j] += a * rhs.get(k, j);
                }
            }
        }
        DenseOperator { dim: n, entries }
    }

    pub fn max_abs_diff(&self, other: &DenseOperator) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |U·U† − I|`.
    pub fn unitarity_error(&self) -> f64 {
        self.matmul(&self.conj_transpose())
            .max_abs_diff(&DenseOperator::identity(self.dim))
    }
}

fn gate_operator(rows: [[Complex64; 2]; 2]) -> DenseOperator {
    DenseOperator {
        dim: 2,
        entries: vec![rows[0][0], rows[0][1], rows[1][0], rows[1][1]],
    }
}

/// `G^(n-1) ⊗ … ⊗ G^(0)` with [`DEFAULT_MAX_QUBITS`] as the size cap.
pub fn build_dense(plan: &RotationPlan) -> Result<DenseOperator> {
    build_dense_capped(plan, DEFAULT_MAX_QUBITS)
}

/// [`build_dense`] with an explicit qubit cap.
pub fn build_dense_capped(plan: &RotationPlan, max_qubits: usize) -> Result<DenseOperator> {
    let n = plan.n_qubits();
    if n > max_qubits {
        return Err(Error::ResourceLimit(format!(
            "dense operator for {n} qubits exceeds the {max_qubits}-qubit cap"
        )));
    }
    let gates = plan.composed_gates()?;
    // qubit n-1 is the leftmost (most significant) factor
    let mut op = DenseOperator::identity(1);
    for g in gates.iter().rev() {
        let [a, b, c, d] = g.0;
        op = op.kron(&gate_operator([[a, b], [c, d]]));
    }
    Ok(op)
}

pub fn apply_dense(op: &DenseOperator, state: &AmplitudeState) -> Result<AmplitudeState> {
    if op.dim != state.len() {
        return Err(invalid(format!(
            "operator dimension {} does not match state length {}",
            op.dim,
            state.len()
        )));
    }
    let amps = state.amplitudes();
    let out = op
        .entries
        .chunks_exact(op.dim)
        .map(|row| row.iter().zip(amps).map(|(m, a)| m * a).sum())
        .collect();
    AmplitudeState::from_amplitudes(out, state.source_shape())
}
