//! Wall-clock scaling measurements for the rotation kernels.

use std::hint::black_box;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::oracle::{apply_dense, build_dense, DEFAULT_MAX_QUBITS};
use crate::qcore::{apply_plan_in_place, apply_qrz_in_place, sample_plan, AmplitudeState, AxisMode};
use crate::seed;

/// Largest register the fast paths are benchmarked at.
pub const MAX_BENCH_QUBITS: usize = 24;

/// Minimum wall time of one timed batch.
const MIN_BATCH: Duration = Duration::from_millis(10);

/// Median per-call time of `f` over `reps` batches. Each batch repeats `f`
/// until it has run for at least a couple of milliseconds.
pub fn median_time(reps: usize, mut f: impl FnMut()) -> Duration {
    f();
    let mut iters = 1u32;
    loop {
        let start = Instant::now();
        for _ in 0..iters {
            f();
        }
        if start.elapsed() >= MIN_BATCH || iters >= 1 << 20 {
            break;
        }
        iters *= 2;
    }
    let mut samples: Vec<Duration> = (0..reps.max(1))
        .map(|_| {
            let start = Instant::now();
            for _ in 0..iters {
                f();
            }
            start.elapsed() / iters
        })
        .collect();
    samples.sort();
    samples[samples.len() / 2]
}

pub fn random_state(n_qubits: usize, seed: u64) -> AmplitudeState {
    let mut rng = seed::rng(seed);
    let amps = (0..1usize << n_qubits)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    AmplitudeState::from_amplitudes(amps, (1, 1 << n_qubits)).expect("power-of-two length")
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub n_qubits: usize,
    /// Generic `QR_XYZ` reshape path, seconds.
    pub generic_s: f64,
    /// Diagonal `QR_Z` path, seconds.
    pub qrz_s: f64,
    /// Dense oracle matrix-vector product, seconds (build excluded).
    pub dense_s: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchTable {
    pub rows: Vec<BenchRow>,
    /// Least-squares slope of `log t` against `log N`.
    pub generic_exponent: f64,
    pub qrz_exponent: f64,
    pub dense_exponent: Option<f64>,
}

impl BenchTable {
    /// `t(n + 2) / t(n)` for the column picked by `pick`, for every `n` where
    /// both are present.
    pub fn ratios(&self, pick: impl Fn(&BenchRow) -> Option<f64>) -> Vec<(usize, f64)> {
        self.rows
            .iter()
            .filter_map(|r| {
                let next = self.rows.iter().find(|s| s.n_qubits == r.n_qubits + 2)?;
                Some((r.n_qubits, pick(next)? / pick(r)?))
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n_qubits,generic_s,qrz_s,dense_s\n");
        for r in &self.rows {
            let dense = r.dense_s.map_or(String::new(), |d| format!("{d:e}"));
            out.push_str(&format!("{},{:e},{:e},{}\n", r.n_qubits, r.generic_s, r.qrz_s, dense));
        }
        out
    }
}

fn fit_exponent(points: &[(usize, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let xs: Vec<f64> = points.iter().map(|(n, _)| *n as f64 * std::f64::consts::LN_2).collect();
    let ys: Vec<f64> = points.iter().map(|(_, t)| t.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Some(sxy / sxx)
}

/// Time the three paths for every `n` in `min_qubits..=max_qubits`. The dense
/// oracle runs only for `n` in `dense_range`, capped at the oracle limit.
pub fn bench_scaling(
    min_qubits: usize,
    max_qubits: usize,
    dense_range: std::ops::RangeInclusive<usize>,
    reps: usize,
    seed: u64,
) -> Result<BenchTable> {
    if min_qubits == 0 || min_qubits > max_qubits {
        return Err(invalid(format!(
            "qubit range must satisfy 1 <= min <= max, got {min_qubits}..={max_qubits}"
        )));
    }
    if max_qubits > MAX_BENCH_QUBITS {
        return Err(Error::ResourceLimit(format!(
            "benchmarks run up to {MAX_BENCH_QUBITS} qubits, got {max_qubits}"
        )));
    }
    let mut rows = Vec::new();
    for n in min_qubits..=max_qubits {
        let state = random_state(n, seed::derive(seed, &format!("state{n}")));
        let plan = sample_plan(n, AxisMode::Xyz, 0.01, seed::derive(seed, &format!("plan{n}")))?;
        let zplan = sample_plan(n, AxisMode::Z, 0.01, seed::derive(seed, &format!("zplan{n}")))?;
        let angles = zplan.z_angles().expect("Z-only plan");

        // Kernels run in place on reused buffers so allocation and page
        // faults stay out of the timings.
        let mut work = state.clone();
        let mut scratch = Vec::new();
        let generic = median_time(reps, || {
            apply_plan_in_place(&mut work, &plan, &mut scratch).expect("sizes match");
            black_box(&work);
        });
        let mut work = state.clone();
        let mut phases = Vec::new();
        let qrz = median_time(reps, || {
            apply_qrz_in_place(&mut work, &angles, &mut phases).expect("sizes match");
            black_box(&work);
        });
        let dense = if dense_range.contains(&n) && n <= DEFAULT_MAX_QUBITS {
            let op = build_dense(&plan)?;
            let t = median_time(reps, || {
                black_box(apply_dense(&op, black_box(&state)).expect("sizes match"));
            });
            Some(t.as_secs_f64())
        } else {
            None
        };
        rows.push(BenchRow {
            n_qubits: n,
            generic_s: generic.as_secs_f64(),
            qrz_s: qrz.as_secs_f64(),
            dense_s: dense,
        });
    }
    let col = |f: fn(&BenchRow) -> Option<f64>| -> Vec<(usize, f64)> {
        rows.iter().filter_map(|r| Some((r.n_qubits, f(r)?))).collect()
    };
    Ok(BenchTable {
        generic_exponent: fit_exponent(&col(|r| Some(r.generic_s))).unwrap_or(f64::NAN),
        qrz_exponent: fit_exponent(&col(|r| Some(r.qrz_s))).unwrap_or(f64::NAN),
        dense_exponent: fit_exponent(&col(|r| r.dense_s)),
        rows,
    })
}
