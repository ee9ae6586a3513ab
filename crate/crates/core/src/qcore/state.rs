use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::grid::{Channel, ComplexGrid, Grid};

/// A non-normalized amplitude-encoded state of `n_qubits` qubits.
///
/// Address bit `i` of an amplitude index corresponds to qubit `i`
/// (little-endian). The first `rows * cols` amplitudes hold the source
/// channel in row-major order; the remaining `pad_len` were zero at embed
/// time.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeState {
    amplitudes: Vec<Complex64>,
    n_qubits: usize,
    source_shape: (usize, usize),
    pad_len: usize,
}

impl AmplitudeState {
    /// Wrap a raw amplitude vector whose length is a power of two.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>, source_shape: (usize, usize)) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(invalid(format!(
                "amplitude vector length {len} is not a power of two >= 2"
            )));
        }
        let payload = source_shape.0 * source_shape.1;
        if payload == 0 || payload > len {
            return Err(invalid(format!(
                "source shape {source_shape:?} does not fit in {len} amplitudes"
            )));
        }
        Ok(Self {
            n_qubits: len.trailing_zeros() as usize,
            amplitudes,
            source_shape,
            pad_len: len - payload,
        })
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn source_shape(&self) -> (usize, usize) {
        self.source_shape
    }

    pub fn pad_len(&self) -> usize {
        self.pad_len
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.len(), other.len(), "state length mismatch");
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub(crate) fn amplitudes_vec_mut(&mut self) -> &mut Vec<Complex64> {
        &mut self.amplitudes
    }
}

/// Largest register [`embed`] will allocate: 2^26 complex doubles, 1 GiB.
pub const MAX_EMBED_QUBITS: usize = 26;

/// Row-major flatten of `channel`, zero-padded to the next power of two.
///
/// No normalization is applied. A single pixel is padded to two amplitudes so
/// the state always has at least one qubit.
pub fn embed(channel: &Channel) -> Result<AmplitudeState> {
    if channel.is_empty() {
        return Err(invalid("cannot embed an empty channel"));
    }
    let len = register_len(channel.as_slice().len())?;
    let mut amplitudes: Vec<Complex64> = channel
        .as_slice()
        .iter()
        .map(|&v| Complex64::new(v, 0.0))
        .collect();
    amplitudes.resize(len, Complex64::new(0.0, 0.0));
    AmplitudeState::from_amplitudes(amplitudes, channel.shape())
}

fn register_len(payload: usize) -> Result<usize> {
    let len = payload.next_power_of_two().max(2);
    if len > 1 << MAX_EMBED_QUBITS {
        return Err(Error::ResourceLimit(format!(
            "{payload} values need more than {MAX_EMBED_QUBITS} qubits"
        )));
    }
    Ok(len)
}

/// Inverse of [`embed`]: the first `rows * cols` amplitudes, reshaped.
/// Anything rotated into the padding is dropped.
pub fn extract(state: &AmplitudeState) -> ComplexGrid {
    let (rows, cols) = state.source_shape;
    Grid::from_vec(rows, cols, state.amplitudes[..rows * cols].to_vec())
        .expect("state invariant guarantees payload length")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch(rows: usize, cols: usize, v: &[f64]) -> Channel {
        Grid::from_vec(rows, cols, v.to_vec()).unwrap()
    }

    fn re(state: &AmplitudeState) -> Vec<f64> {
        state.amplitudes().iter().map(|a| a.re).collect()
    }

    #[test]
    fn register_size_limit() {
        assert_eq!(register_len(1).unwrap(), 2);
        assert_eq!(register_len(1 << MAX_EMBED_QUBITS).unwrap(), 1 << MAX_EMBED_QUBITS);
        assert!(matches!(
            register_len((1 << MAX_EMBED_QUBITS) + 1),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn embed_square() {
        let s = embed(&ch(2, 2, &[1.0, 2.0, 3.0, 4.0])).unwrap();
        assert_eq!(re(&s), vec![1.0, 2.0, 3.0, 4.0]);
        assert_eq!(s.n_qubits(), 2);
        assert_eq!(s.pad_len(), 0);
    }

    #[test]
    fn embed_pads_to_power_of_two() {
        let s = embed(&ch(1, 3, &[1.0, 2.0, 3.0])).unwrap();
        assert_eq!(re(&s), vec![1.0, 2.0, 3.0, 0.0]);
        assert_eq!(s.n_qubits(), 2);
        assert_eq!(s.pad_len(), 1);
    }

    #[test]
    fn embed_256_square_uses_16_qubits() {
        let s = embed(&Grid::filled(256, 256, 1.0)).unwrap();
        assert_eq!(s.n_qubits(), 16);
        assert_eq!(s.pad_len(), 0);
    }

    #[test]
    fn embed_empty_fails() {
        let empty: Channel = Grid::from_vec(0, 0, vec![]).unwrap();
        assert!(embed(&empty).is_err());
    }

    #[test]
    fn extract_drops_padding() {
        let amps = [1.0, 2.0, 3.0, 9.0]
            .iter()
            .map(|&v| Complex64::new(v, 0.0))
            .collect();
        let s = AmplitudeState::from_amplitudes(amps, (1, 3)).unwrap();
        let g = extract(&s);
        assert_eq!(g.shape(), (1, 3));
        let vals: Vec<f64> = g.as_slice().iter().map(|a| a.re).collect();
        assert_eq!(vals, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn round_trip_is_exact() {
        let img = Grid::from_fn(5, 7, |r, c| (r * 7 + c) as f64 * 1.5 - 3.0);
        let back = extract(&embed(&img).unwrap());
        assert_eq!(back.map(|a| a.re), img);
        assert!(back.as_slice().iter().all(|a| a.im == 0.0));
    }
}
