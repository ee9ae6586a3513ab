//! Acceptance checks.
//!
//! Runs as a plain binary (`harness = false`) so every criterion prints one
//! PASS/FAIL line on every run. Pass criterion numbers as arguments to run a
//! subset: `cargo test --test acceptance -- 1 8`.

use std::f64::consts::PI;
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use qiaug::augment::{
    flip_h, parse_spec, parse_spec_permissive, perfect_rotation, resize_bilinear, run_pipeline, AugmentParams,
    ImageBuffer,
};
use qiaug::bench::{bench_scaling, random_state};
use qiaug::grid::Grid;
use qiaug::io::{load_image, quantize_u8, save_image};
use qiaug::oracle::{apply_dense, build_dense};
use qiaug::privacy::{dp_noise, non_dp_witness, DpParams, Verdict};
use qiaug::qcore::{
    apply_plan, apply_qrz_fast, embed, rotation_gate, sample_plan, Axis, AxisMode, Gate2x2, RotationPlan,
};
use qiaug::seed;
use qiaug::spectral::{gaussian_approx_check, linf_distance, sample_phase_sums, schmidt_coefficients, singular_values};
use rand::Rng;

type Criterion = (u32, &'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

const MODES: [AxisMode; 4] = [AxisMode::X, AxisMode::Y, AxisMode::Z, AxisMode::Xyz];

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

/// The five standard gray test images.
fn standard_images() -> Vec<(&'static str, ImageBuffer)> {
    ["camera", "coins", "moon", "page", "text"]
        .into_iter()
        .map(|name| (name, load_image(&fixtures().join(format!("{name}.pgm"))).unwrap()))
        .collect()
}

fn random_image(rows: usize, cols: usize, seed: u64) -> ImageBuffer {
    let mut rng = seed::rng(seed);
    ImageBuffer::gray(Grid::from_fn(rows, cols, |_, _| rng.random_range(0.0..255.0))).unwrap()
}

fn gray_resized(img: &ImageBuffer, rows: usize, cols: usize) -> ImageBuffer {
    ImageBuffer::gray(resize_bilinear(&img.to_gray(), rows, cols).unwrap()).unwrap()
}

fn c1_oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for n in 2..=10 {
        for t in 0..100 {
            let s = seed::derive(1, &format!("{n}/{t}"));
            let state = random_state(n, s);
            let plan = sample_plan(n, MODES[t % 4], 2.0 * PI, s ^ 0xA5).unwrap();
            let fast = apply_plan(&state, &plan).unwrap();
            let dense = apply_dense(&build_dense(&plan).unwrap(), &state).unwrap();
            worst = worst.max(fast.max_abs_diff(&dense));
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= 1e-12 && elapsed < Duration::from_secs(120),
        format!("max |fast - dense| = {worst:.2e} (tol 1e-12), {:.1}s (limit 120s)", elapsed.as_secs_f64()),
    )
}

fn c2_norm_preservation() -> Outcome {
    let start = Instant::now();
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for t in 0..1000 {
        let n = 1 + t % 20;
        let s = seed::derive(2, &t.to_string());
        let state = random_state(n, s);
        let plan = sample_plan(n, MODES[t % 4], 2.0 * PI, s ^ 0x5A).unwrap();
        let ratio = apply_plan(&state, &plan).unwrap().norm() / state.norm();
        lo = lo.min(ratio);
        hi = hi.max(ratio);
    }
    let elapsed = start.elapsed();
    let pass = lo >= 1.0 - 1e-10 && hi <= 1.0 + 1e-10 && elapsed < Duration::from_secs(60);
    outcome(
        pass,
        format!(
            "norm ratio in [1{:+.2e}, 1{:+.2e}] (tol 1e-10), {:.1}s (limit 60s)",
            lo - 1.0,
            hi - 1.0,
            elapsed.as_secs_f64()
        ),
    )
}

fn c3_fast_path_identity() -> Outcome {
    let mut worst: f64 = 0.0;
    for t in 0..100 {
        let n = 1 + t % 16;
        let s = seed::derive(3, &t.to_string());
        let state = random_state(n, s);
        let mut rng = seed::rng(s ^ 1);
        let angles: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0 * PI..2.0 * PI)).collect();
        let fast = apply_qrz_fast(&state, &angles).unwrap();
        let generic = apply_plan(&state, &RotationPlan::single_axis(Axis::Z, &angles)).unwrap();
        worst = worst.max(fast.max_abs_diff(&generic));
    }
    outcome(worst <= 1e-13, format!("max |fast - generic| = {worst:.2e} (tol 1e-13)"))
}

fn c4_closed_form_real_qrz() -> Outcome {
    let spec = parse_spec("real(QR_Z(x))").unwrap();
    let mut worst: f64 = 0.0;
    let mut shapes: Vec<(usize, usize)> = (1..=12).map(|n| (1 << (n / 2), 1 << (n - n / 2))).collect();
    shapes.extend([(5, 7), (3, 11), (40, 50)]);
    for (i, &(rows, cols)) in shapes.iter().enumerate() {
        for theta_max in [0.01, 1.0, 7.0] {
            let img = random_image(rows, cols, seed::derive(4, &i.to_string()));
            let params = AugmentParams {
                theta_max,
                seed: 11,
                renormalize: false,
                ..AugmentParams::default()
            };
            let out = run_pipeline(&img, &spec, &params).unwrap();
            let n = (rows * cols).next_power_of_two().max(2).trailing_zeros() as usize;
            let plan = sample_plan(n, AxisMode::Z, theta_max, seed::node_seed(11, 0, 1, "QR_Z")).unwrap();
            let angles = plan.z_angles().unwrap();
            for (k, (&x, &y)) in img.channel(0).as_slice().iter().zip(out.image.channel(0).as_slice()).enumerate() {
                // bit 1 contributes +θ/2, bit 0 −θ/2; cos is even so only |phase| matters
                let phase: f64 = (0..n)
                    .map(|q| if k >> q & 1 == 1 { angles[q] / 2.0 } else { -angles[q] / 2.0 })
                    .sum();
                worst = worst.max((x * phase.cos() - y).abs());
            }
        }
    }
    outcome(worst <= 1e-12, format!("max |pipeline - x*cos(phase)| = {worst:.2e} (tol 1e-12), n <= 12"))
}

fn c5_spectral_invariance() -> Outcome {
    let sizes = [16, 32, 64, 128, 256];
    let mut worst: f64 = 0.0;
    for t in 0..50 {
        let side = sizes[t % sizes.len()];
        let s = seed::derive(5, &t.to_string());
        let img = random_image(side, side, s);
        let base = singular_values(img.channel(0));
        let state = embed(img.channel(0)).unwrap();
        let plan = sample_plan(state.n_qubits(), MODES[t % 4], 2.0 * PI, s ^ 3).unwrap();
        let rotated = apply_plan(&state, &plan).unwrap();
        let cut = side.trailing_zeros() as usize;
        let after = schmidt_coefficients(&rotated, cut).unwrap();
        worst = worst.max(linf_distance(&base, &after));
    }
    let generic = gray_resized(&standard_images()[0].1, 64, 64);
    let params = AugmentParams {
        theta_max: 0.01,
        ..AugmentParams::default()
    };
    let projected = run_pipeline(&generic, &parse_spec("real(QR_Z(x))").unwrap(), &params).unwrap();
    let change = linf_distance(&singular_values(generic.channel(0)), &singular_values(projected.image.channel(0)));
    outcome(
        worst <= 1e-9 && change > 1e-8,
        format!("unprojected max spectrum change {worst:.2e} (tol 1e-9); real(QR_Z) change {change:.2e} (> 1e-8)"),
    )
}

fn c6_classical_invariance() -> Outcome {
    let images = standard_images();
    let mut worst: f64 = 0.0;
    for (_, img) in &images {
        let base = singular_values(img.channel(0));
        let mut variants = vec![flip_h(img)];
        variants.extend((1..4).map(|k| perfect_rotation(img, k)));
        for v in variants {
            worst = worst.max(linf_distance(&base, &singular_values(v.channel(0))));
        }
    }
    // Seed and mid-spectrum window fixed before the first run: seed 0,
    // indices [len/4, 3 len/4).
    let gn = parse_spec("GN(x)").unwrap();
    let params = AugmentParams {
        gn_sigma: 1.0,
        seed: 0,
        ..AugmentParams::default()
    };
    let mut hits = 0;
    let mut notes = Vec::new();
    for (name, img) in &images {
        let base = singular_values(img.channel(0));
        let noisy = singular_values(run_pipeline(img, &gn, &params).unwrap().image.channel(0));
        let mid = base.len() / 4..3 * base.len() / 4;
        let mean = |v: &[f64]| v[mid.clone()].iter().sum::<f64>() / mid.len() as f64;
        let lead = noisy[0] - base[0];
        let mid_shift = mean(&noisy) - mean(&base);
        let ok = lead < 0.0 && mid_shift > 0.0;
        hits += usize::from(ok);
        notes.push(format!("{name}: d_s1={lead:+.3} d_mid={mid_shift:+.3}"));
    }
    outcome(
        worst <= 1e-10 && hits >= 4,
        format!(
            "F/PR max spectrum change {worst:.2e} (tol 1e-10); GN sign pattern on {hits}/5 (need 4) [{}]",
            notes.join(", ")
        ),
    )
}

fn c7_identity_cases() -> Outcome {
    let spec = parse_spec_permissive("abs(QR_Z(x))").unwrap();
    let mut float_worst: f64 = 0.0;
    let mut byte_mismatches = 0usize;
    let mut images: Vec<ImageBuffer> = standard_images().into_iter().map(|(_, i)| i).collect();
    images.push(random_image(37, 53, 7));
    images.push(load_image(&fixtures().join("astronaut_96.png")).unwrap());
    for (i, img) in images.iter().enumerate() {
        for theta_max in [0.01, 1.0, 10.0] {
            let params = AugmentParams {
                theta_max,
                seed: i as u64,
                ..AugmentParams::default()
            };
            let out = run_pipeline(img, &spec, &params).unwrap();
            float_worst = float_worst.max(out.image.max_abs_diff(img));
            for (a, b) in out.image.channels().iter().zip(img.channels()) {
                byte_mismatches += a
                    .as_slice()
                    .iter()
                    .zip(b.as_slice())
                    .filter(|(x, y)| quantize_u8(**x) != quantize_u8(**y))
                    .count();
            }
        }
    }
    let mut zero_plan_exact = true;
    for n in 1..=12 {
        let state = random_state(n, seed::derive(7, &n.to_string()));
        for mode in MODES {
            let plan = sample_plan(n, mode, 0.0, 1).unwrap();
            zero_plan_exact &= apply_plan(&state, &plan).unwrap() == state;
            zero_plan_exact &= apply_dense(&build_dense(&plan).unwrap(), &state).unwrap() == state;
        }
        zero_plan_exact &= apply_qrz_fast(&state, &vec![0.0; n]).unwrap() == state;
    }
    outcome(
        byte_mismatches == 0 && float_worst <= 1e-12 && zero_plan_exact,
        format!(
            "abs(QR_Z): {byte_mismatches} 8-bit mismatches, float max diff {float_worst:.2e} (rounding only); \
             theta=0 plans bit-exact: {zero_plan_exact}"
        ),
    )
}

fn c8_conjugation_identities() -> Outcome {
    let h = Gate2x2::hadamard();
    let s = Gate2x2::phase_s();
    let mut rng = seed::rng(8);
    let (mut x_err, mut y_err, mut y_circuit_err): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..50 {
        let theta = rng.random_range(-2.0 * PI..2.0 * PI);
        let rz = rotation_gate(Axis::Z, theta).unwrap();
        let rx = rotation_gate(Axis::X, theta).unwrap();
        let ry = rotation_gate(Axis::Y, theta).unwrap();
        x_err = x_err.max(rx.max_abs_diff(&(h * rz * h)));
        y_err = y_err.max(ry.max_abs_diff(&(s.dagger() * h * rz * h * s)));
        y_circuit_err = y_circuit_err.max(ry.max_abs_diff(&(s * h * rz * h * s.dagger())));
    }
    outcome(
        x_err <= 1e-12 && y_err <= 1e-12,
        format!(
            "|R_X - H R_Z H| = {x_err:.2e}; |R_Y - S'H R_Z H S| = {y_err:.2e} (tol 1e-12); \
             |R_Y - S H R_Z H S'| = {y_circuit_err:.2e}"
        ),
    )
}

fn c9_irwin_hall() -> Outcome {
    let start = Instant::now();
    let (n, theta_max, samples) = (16usize, 0.01, 100_000usize);
    let want_var = n as f64 * theta_max * theta_max / 12.0;
    let mut pass = true;
    let mut notes = Vec::new();
    for m in [0usize, 5, 8] {
        let xs = sample_phase_sums(n, theta_max, m, samples, seed::derive(9, &m.to_string())).unwrap();
        let k = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / k;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0);
        let want_mean = (n as f64 - 2.0 * m as f64) * theta_max / 2.0;
        let z = (mean - want_mean) / (want_var / k).sqrt();
        let rel = (var - want_var).abs() / want_var;
        pass &= z.abs() <= 3.0 && rel <= 0.05;
        notes.push(format!("m={m}: z={z:+.2} var_err={:.2}%", rel * 100.0));
    }
    let at16 = gaussian_approx_check(16, theta_max, samples, 90).unwrap();
    let at1 = gaussian_approx_check(1, theta_max, samples, 91).unwrap();
    pass &= at16.ks_distance < 0.02 && at1.ks_distance >= 0.02;
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(60);
    outcome(
        pass,
        format!(
            "{}; KS n=16 {:.4} (< 0.02), n=1 {:.4} (>= 0.02); {:.1}s (limit 60s)",
            notes.join(", "),
            at16.ks_distance,
            at1.ks_distance,
            elapsed.as_secs_f64()
        ),
    )
}

fn c10_complexity() -> Outcome {
    let start = Instant::now();
    let table = bench_scaling(8, 22, 8..=12, 9, 0).unwrap();
    let generic: Vec<(usize, f64)> = table
        .ratios(|r| Some(r.generic_s))
        .into_iter()
        .filter(|(n, _)| *n >= 16)
        .collect();
    let dense: Vec<(usize, f64)> = table.ratios(|r| r.dense_s).into_iter().filter(|(n, _)| *n >= 8).collect();
    let qrz: Vec<(usize, f64)> = table.ratios(|r| Some(r.qrz_s)).into_iter().filter(|(n, _)| *n >= 16).collect();
    let elapsed = start.elapsed();
    let pass = !generic.is_empty()
        && generic.iter().all(|(_, r)| *r < 6.0)
        && !dense.is_empty()
        && dense.iter().all(|(_, r)| (12.0..=20.0).contains(r))
        && elapsed < Duration::from_secs(300);
    let fmt = |v: &[(usize, f64)]| v.iter().map(|(n, r)| format!("{n}:{r:.2}")).collect::<Vec<_>>().join(" ");
    outcome(
        pass,
        format!(
            "t(n+2)/t(n) generic [{}] (< 6), dense [{}] (in [12, 20]), QR_Z [{}]; {:.1}s (limit 300s)",
            fmt(&generic),
            fmt(&dense),
            fmt(&qrz),
            elapsed.as_secs_f64()
        ),
    )
}

fn c11_laplace_calibration() -> Outcome {
    let zeros = ImageBuffer::gray(Grid::filled(1000, 1000, 0.0)).unwrap();
    let mut pass = true;
    let mut notes = Vec::new();
    for eps in [0.5, 5.0, 50.0] {
        let noisy = dp_noise(&zeros, &DpParams::new(eps, seed::derive(11, &eps.to_string()))).unwrap();
        let xs = noisy.channel(0).as_slice();
        let k = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / k;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0);
        let want = 2.0 * (255.0 / eps).powi(2);
        let rel = (var - want).abs() / want;
        pass &= rel <= 0.05;
        notes.push(format!("eps={eps}: {:.2}%", rel * 100.0));
    }
    outcome(pass, format!("variance error vs 2(255/eps)^2: {} (tol 5%)", notes.join(", ")))
}

fn c12_non_dp_witness() -> Outcome {
    let images = standard_images();
    let camera = gray_resized(&images[0].1, 64, 64);
    let mut neighbor = camera.channel(0).clone();
    *neighbor.get_mut(10, 10) = 255.0 - *neighbor.get(10, 10);
    let neighbor = ImageBuffer::gray(neighbor).unwrap();
    let coins = gray_resized(&images[1].1, 64, 64);
    let pairs = [("camera/one-pixel neighbor", &camera, &neighbor), ("camera/coins", &camera, &coins)];
    let mut pass = true;
    let mut notes = Vec::new();
    for theta_max in [0.01, 1.0] {
        for (label, a, b) in pairs {
            let r = non_dp_witness(a, b, theta_max, 12, 100).unwrap();
            pass &= r.verdict == Verdict::Positive;
            notes.push(format!("{label} theta={theta_max}: {:?}", r.verdict));
        }
        let same = non_dp_witness(&camera, &camera, theta_max, 12, 100).unwrap();
        pass &= same.verdict == Verdict::Inconclusive;
        notes.push(format!("identical theta={theta_max}: {:?}", same.verdict));
    }
    outcome(pass, notes.join(", "))
}

fn qiaug(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_qiaug")).args(args).output().unwrap()
}

fn dir_snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap())
        })
        .collect();
    files.sort();
    files
}

fn c13_cli_determinism() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let input = tmp.path().join("in");
    std::fs::create_dir(&input).unwrap();
    std::fs::copy(fixtures().join("astronaut_96.png"), input.join("astronaut.png")).unwrap();
    let camera = load_image(&fixtures().join("camera.pgm")).unwrap();
    save_image(&input.join("camera.pgm"), &gray_resized(&camera, 48, 40)).unwrap();
    let input = input.to_str().unwrap();

    let runs: Vec<(&str, Vec<&str>)> = vec![
        ("augment-xyz", vec!["augment", "--spec", "abs(QR_XYZ(C(F(CR(x)))))", "--seed", "3", "--count", "2"]),
        ("augment-complex", vec!["augment", "--spec", "QR_XYZ(x)", "--seed", "4"]),
        ("augment-gn", vec!["augment", "--spec", "real(QR_Z(GN(x)))", "--format", "png"]),
        ("dp", vec!["dp", "--spec", "abs(QR_Z(x))", "--theta-max", "0.15", "--epsilon", "5", "--seed", "5"]),
        ("demo", vec!["demo", "--seed", "6"]),
    ];
    let mut differing = Vec::new();
    let mut files = 0;
    for (label, args) in &runs {
        let mut snapshots = Vec::new();
        for (rep, jobs) in ["1", "4"].iter().enumerate() {
            let out = tmp.path().join(format!("{label}-{rep}"));
            let out_s = out.to_str().unwrap();
            let demo_input = format!("{input}/astronaut.png");
            let src = if *label == "demo" { demo_input.as_str() } else { input };
            let mut full = args.clone();
            full.extend(["-i", src, "-o", out_s, "--jobs", jobs]);
            let status = qiaug(&full);
            assert!(status.status.success(), "{label}: {}", String::from_utf8_lossy(&status.stderr));
            snapshots.push(dir_snapshot(&out));
        }
        files += snapshots[0].len();
        if snapshots[0] != snapshots[1] || snapshots[0].is_empty() {
            differing.push(*label);
        }
    }
    for (label, fmt) in [("spectrum-csv", "csv"), ("spectrum-json", "json")] {
        let outputs: Vec<Vec<u8>> = (0..2)
            .map(|_| {
                let out = qiaug(&[
                    "spectrum",
                    "--spec",
                    "real(QR_Z(F(PR(x))))",
                    "--size",
                    "32",
                    "--seed",
                    "7",
                    "--format",
                    fmt,
                    "-i",
                    input,
                ]);
                assert!(out.status.success(), "{label}: {}", String::from_utf8_lossy(&out.stderr));
                out.stdout
            })
            .collect();
        files += 1;
        if outputs[0] != outputs[1] || outputs[0].is_empty() {
            differing.push(label);
        }
    }
    outcome(
        differing.is_empty(),
        format!(
            "{} invocations x2 (thread counts 1 and 4), {files} output files compared byte for byte; differing: {differing:?}",
            runs.len() + 2
        ),
    )
}

fn main() {
    let criteria: [Criterion; 13] = [
        (1, "oracle equivalence", c1_oracle_equivalence),
        (2, "norm preservation", c2_norm_preservation),
        (3, "fast-path identity", c3_fast_path_identity),
        (4, "closed-form real(QR_Z)", c4_closed_form_real_qrz),
        (5, "spectral invariance", c5_spectral_invariance),
        (6, "classical invariance set", c6_classical_invariance),
        (7, "identity cases", c7_identity_cases),
        (8, "conjugation identities", c8_conjugation_identities),
        (9, "Irwin-Hall statistics", c9_irwin_hall),
        (10, "complexity", c10_complexity),
        (11, "DP calibration", c11_laplace_calibration),
        (12, "non-DP witness", c12_non_dp_witness),
        (13, "CLI determinism", c13_cli_determinism),
    ];
    let selected: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = Vec::new();
    for (id, name, check) in criteria {
        if !selected.is_empty() && !selected.contains(&id) {
            continue;
        }
        let result = panic::catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|e| {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                outcome(false, format!("panicked: {msg}"))
            });
        let verdict = if result.pass { "PASS" } else { "FAIL" };
        println!("criterion {id:>2} [{verdict}] {name}: {}", result.detail);
        if !result.pass {
            failed.push(id);
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
