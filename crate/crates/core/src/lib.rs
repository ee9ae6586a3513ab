//! Quantum-inspired image augmentation.
//!
//! Images are amplitude-embedded into an `n`-qubit state vector, rotated by
//! random single-qubit Bloch rotations in `O(N log N)`, and projected back to
//! pixels with `real()` or `abs()`. The crate also provides the classical
//! augmentations these are composed with, a small pipeline language for
//! nesting them, singular-value spectrum analysis, and Laplace-mechanism
//! differential-privacy noise.

pub mod augment;
pub mod bench;
pub mod cli;
mod error;
pub mod grid;
pub mod io;
pub mod oracle;
pub mod privacy;
pub mod qcore;
pub mod seed;
pub mod spectral;

pub use error::{Error, Result};
pub use num_complex::Complex64;
