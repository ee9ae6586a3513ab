//! Command-line interface.
//!
//! Settings resolve in three layers: built-in defaults, then the JSON file
//! given by `--config`, then explicit flags. Exit status is 0 on success, 1
//! for usage, parse and validation errors, 2 for I/O errors and 3 when a
//! resource limit is hit.

use std::collections::HashMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::augment::{
    parse_spec, parse_spec_permissive, resize_bilinear, run_pipeline_indexed, AugmentParams, AugmentSpec,
    ImageBuffer, PipelineOutput,
};
use crate::bench::bench_scaling;
use crate::error::{invalid, Error, Result};
use crate::io::{list_images, load_image, save_image};
use crate::privacy::{dp_noise, DpParams};
use crate::seed;
use crate::spectral::{average_spectra, spectrum_diff, CorpusOptions};

/// The augmentation methods rendered by `demo`, in catalog order.
pub const DEMO_CATALOG: [&str; 14] = [
    "x",
    "GN(x)",
    "F(PR(x))",
    "C(F(CR(x)))",
    "real(QR_Y(x))",
    "abs(QR_X(x))",
    "real(QR_Z(x))",
    "real(QR_XYZ(x))",
    "abs(QR_XYZ(x))",
    "QR_XYZ(x)",
    "real(QR_Z(GN(x)))",
    "real(QR_Z(F(PR(x))))",
    "real(QR_Z(C(F(CR(x)))))",
    "abs(QR_XYZ(C(F(CR(x)))))",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Pgm,
    Png,
    Csv,
    Json,
}

/// Everything a run needs besides the subcommand's own arguments. The JSON
/// config file has exactly these fields; all are optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub spec: String,
    pub params: AugmentParams,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
    /// Copies per image for `augment` and `dp`; images averaged for
    /// `spectrum` (all when unset).
    pub count: Option<usize>,
    /// Overrides `params.seed`.
    pub seed: Option<u64>,
    pub convert_uint8: bool,
    /// Resize inputs to power-of-two sides instead of zero-padding.
    pub resize_pow2: bool,
    /// Worker threads; all cores when unset.
    pub jobs: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            spec: "x".to_string(),
            params: AugmentParams::default(),
            input: None,
            output: None,
            format: None,
            count: None,
            seed: None,
            convert_uint8: false,
            resize_pow2: false,
            jobs: None,
        }
    }
}

impl RunConfig {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    fn input(&self) -> Result<&Path> {
        self.input.as_deref().ok_or_else(|| invalid("an --input path is required"))
    }

    fn output(&self) -> Result<&Path> {
        self.output.as_deref().ok_or_else(|| invalid("an --output path is required"))
    }

    fn copies(&self) -> usize {
        self.count.unwrap_or(1)
    }
}

#[derive(Debug, Parser)]
#[command(name = "qiaug", version, about = "Quantum-inspired image augmentation")]
pub struct Cli {
    #[command(flatten)]
    shared: SharedArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct SharedArgs {
    /// Augmentation pipeline, e.g. "real(QR_Z(F(PR(x))))".
    #[arg(long, global = true)]
    spec: Option<String>,
    /// Upper bound of the random rotation angles, radians [default: 0.01].
    #[arg(long, global = true)]
    theta_max: Option<f64>,
    /// Gaussian noise standard deviation in pixel units [default: 1.0].
    #[arg(long, global = true)]
    gn_sigma: Option<f64>,
    /// Classical rotation bound, degrees [default: 35].
    #[arg(long, global = true)]
    cr_bound: Option<f64>,
    /// Crop enlargement factor [default: 1.15].
    #[arg(long, global = true)]
    crop_enlarge: Option<f64>,
    /// Crop window as ROWSxCOLS [default: incoming size].
    #[arg(long, global = true, value_parser = parse_shape)]
    crop_out: Option<(usize, usize)>,
    /// Base seed for every random draw [default: 0].
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Copies per image (augment, dp) or images averaged (spectrum).
    #[arg(long, global = true)]
    count: Option<usize>,
    /// Renormalize and round-trip through 8 bits before analysis.
    #[arg(long, global = true)]
    uint8: bool,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// JSON run configuration; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Resize inputs to power-of-two sides instead of zero-padding.
    #[arg(long, global = true)]
    resize_pow2: bool,
    /// Worker threads [default: all cores].
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Input image or directory.
    #[arg(short, long, global = true)]
    input: Option<PathBuf>,
    /// Output directory, or report file (stdout when omitted).
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Augment an image or a directory of images.
    Augment,
    /// Singular value spectrum of a pipeline, with its difference to the baseline.
    Spectrum {
        /// Resize every image to SIZE x SIZE first.
        #[arg(long)]
        size: Option<usize>,
    },
    /// Time the rotation kernels against the register size.
    Bench {
        #[arg(long, default_value_t = 8)]
        min_qubits: usize,
        #[arg(long, default_value_t = 20)]
        max_qubits: usize,
        #[arg(long, default_value_t = 5)]
        reps: usize,
        /// Largest register the dense oracle is timed at.
        #[arg(long, default_value_t = 12)]
        dense_max: usize,
    },
    /// Augment, then add Laplace noise.
    Dp {
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 255.0)]
        sensitivity: f64,
    },
    /// Render every catalog method on one image.
    Demo,
}

fn parse_shape(text: &str) -> std::result::Result<(usize, usize), String> {
    let (r, c) = text
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected ROWSxCOLS, got '{text}'"))?;
    let dim = |s: &str| s.trim().parse::<usize>().map_err(|e| format!("'{s}': {e}"));
    Ok((dim(r)?, dim(c)?))
}

impl SharedArgs {
    fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_json_file(path)?,
            None => RunConfig::default(),
        };
        if let Some(v) = &self.spec {
            cfg.spec = v.clone();
        }
        if let Some(v) = self.theta_max {
            cfg.params.theta_max = v;
        }
        if let Some(v) = self.gn_sigma {
            cfg.params.gn_sigma = v;
        }
        if let Some(v) = self.cr_bound {
            cfg.params.cr_bound_deg = v;
        }
        if let Some(v) = self.crop_enlarge {
            cfg.params.crop_enlarge = v;
        }
        if let Some(v) = self.crop_out {
            cfg.params.crop_out = Some(v);
        }
        if self.seed.is_some() {
            cfg.seed = self.seed;
        }
        if self.count.is_some() {
            cfg.count = self.count;
        }
        cfg.convert_uint8 |= self.uint8;
        if self.format.is_some() {
            cfg.format = self.format;
        }
        cfg.resize_pow2 |= self.resize_pow2;
        if self.jobs.is_some() {
            cfg.jobs = self.jobs;
        }
        if self.input.is_some() {
            cfg.input = self.input.clone();
        }
        if self.output.is_some() {
            cfg.output = self.output.clone();
        }
        if let Some(seed) = cfg.seed {
            cfg.params.seed = seed;
        }
        cfg.params.validate()?;
        if cfg.count == Some(0) {
            return Err(invalid("--count must be at least 1"));
        }
        if cfg.jobs == Some(0) {
            return Err(invalid("--jobs must be at least 1"));
        }
        Ok(cfg)
    }
}

/// Map an error to the process exit status.
pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Io(_) | Error::Image(_) => 2,
        Error::ResourceLimit(_) => 3,
        Error::InvalidInput(_) | Error::Syntax { .. } | Error::Semantic(_) | Error::Json(_) => 1,
    }
}

/// Parse `args` (including the program name) and run.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qiaug: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn execute(cli: &Cli) -> Result<()> {
    let cfg = cli.shared.resolve()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.unwrap_or(0))
        .build()
        .map_err(|e| invalid(format!("thread pool: {e}")))?;
    pool.install(|| match &cli.command {
        Command::Augment => cmd_augment(&cfg),
        Command::Spectrum { size } => cmd_spectrum(&cfg, *size),
        Command::Bench {
            min_qubits,
            max_qubits,
            reps,
            dense_max,
        } => cmd_bench(&cfg, *min_qubits, *max_qubits, *reps, *dense_max),
        Command::Dp { epsilon, sensitivity } => cmd_dp(&cfg, *epsilon, *sensitivity),
        Command::Demo => cmd_demo(&cfg),
    })
}

fn load_input(path: &Path, resize_pow2: bool) -> Result<ImageBuffer> {
    let img = load_image(path)?;
    if !resize_pow2 {
        return Ok(img);
    }
    let (rows, cols) = img.shape();
    let (r, c) = (rows.next_power_of_two(), cols.next_power_of_two());
    if (r, c) == (rows, cols) {
        return Ok(img);
    }
    ImageBuffer::new(
        img.channels()
            .iter()
            .map(|ch| resize_bilinear(ch, r, c))
            .collect::<Result<Vec<_>>>()?,
    )
}

fn image_files(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let input = cfg.input()?;
    let files = list_images(input)?;
    if files.is_empty() {
        return Err(invalid(format!("no PGM/PNG images under {}", input.display())));
    }
    Ok(files)
}

/// Output stem per input file: the file stem, or the full file name when
/// two inputs share a stem.
fn output_stems(files: &[PathBuf]) -> Vec<String> {
    let stem = |p: &Path| p.file_stem().unwrap_or_default().to_string_lossy().into_owned();
    let mut seen: HashMap<String, usize> = HashMap::new();
    for f in files {
        *seen.entry(stem(f)).or_default() += 1;
    }
    files
        .iter()
        .map(|f| {
            let s = stem(f);
            if seen[&s] > 1 {
                f.file_name().unwrap_or_default().to_string_lossy().replace('.', "_")
            } else {
                s
            }
        })
        .collect()
}

fn image_format(cfg: &RunConfig, source: &Path) -> Result<Format> {
    match cfg.format {
        Some(f @ (Format::Pgm | Format::Png)) => Ok(f),
        Some(f) => Err(invalid(format!("{f:?} is not an image format; use pgm or png"))),
        None => Ok(match source.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("png") => Format::Png,
            _ => Format::Pgm,
        }),
    }
}

fn extension(format: Format, img: &ImageBuffer) -> &'static str {
    match (format, img.num_channels()) {
        (Format::Png, _) => "png",
        (_, 1) => "pgm",
        _ => "ppm",
    }
}

/// Write `out` as `<dir>/<stem>.<ext>`, or as `_re`/`_im` pairs when complex.
fn write_output(dir: &Path, stem: &str, format: Format, out: &PipelineOutput) -> Result<()> {
    match &out.imag {
        None => save_image(&dir.join(format!("{stem}.{}", extension(format, &out.image))), &out.image),
        Some(im) => {
            save_image(&dir.join(format!("{stem}_re.{}", extension(format, &out.image))), &out.image)?;
            save_image(&dir.join(format!("{stem}_im.{}", extension(format, im))), im)
        }
    }
}

fn copy_stem(stem: &str, copy: usize, copies: usize) -> String {
    if copies == 1 {
        stem.to_string()
    } else {
        format!("{stem}_{copy}")
    }
}

/// Run `per_copy` for every (image, copy) pair in parallel. Copy `c` of
/// image `i` uses image index `i * copies + c` for its random streams.
fn for_each_copy(
    cfg: &RunConfig,
    per_copy: impl Fn(&ImageBuffer, u64, &Path, &str, Format) -> Result<()> + Sync,
) -> Result<()> {
    let files = image_files(cfg)?;
    let dir = cfg.output()?;
    fs::create_dir_all(dir)?;
    let stems = output_stems(&files);
    let copies = cfg.copies();
    files.par_iter().zip(stems.par_iter()).enumerate().try_for_each(|(i, (path, stem))| {
        let img = load_input(path, cfg.resize_pow2)?;
        let format = image_format(cfg, path)?;
        (0..copies).try_for_each(|c| {
            let index = (i * copies + c) as u64;
            per_copy(&img, index, dir, &copy_stem(stem, c, copies), format)
        })
    })
}

fn cmd_augment(cfg: &RunConfig) -> Result<()> {
    let spec = parse_spec(&cfg.spec)?;
    for_each_copy(cfg, |img, index, dir, stem, format| {
        let out = run_pipeline_indexed(img, &spec, &cfg.params, index)?;
        write_output(dir, stem, format, &out)
    })
}

fn cmd_dp(cfg: &RunConfig, epsilon: f64, sensitivity: f64) -> Result<()> {
    let spec = parse_spec_permissive(&cfg.spec)?;
    let base = DpParams {
        sensitivity,
        ..DpParams::new(epsilon, cfg.params.seed)
    };
    base.validate()?;
    for_each_copy(cfg, |img, index, dir, stem, format| {
        let out = run_pipeline_indexed(img, &spec, &cfg.params, index)?;
        if out.is_complex() {
            return Err(invalid(format!(
                "{spec} has a complex result; project it with real() or abs() before noising"
            )));
        }
        let params = DpParams {
            seed: seed::derive(cfg.params.seed, &format!("img{index}/dp")),
            ..base.clone()
        };
        let noisy = PipelineOutput {
            image: dp_noise(&out.image, &params)?,
            ..out
        };
        write_output(dir, stem, format, &noisy)
    })
}

fn report_format(cfg: &RunConfig) -> Result<Format> {
    match cfg.format {
        None => Ok(Format::Csv),
        Some(f @ (Format::Csv | Format::Json)) => Ok(f),
        Some(f) => Err(invalid(format!("{f:?} is not a report format; use csv or json"))),
    }
}

fn emit(cfg: &RunConfig, text: &str) -> Result<()> {
    match &cfg.output {
        Some(path) => Ok(fs::write(path, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_spectrum(cfg: &RunConfig, size: Option<usize>) -> Result<()> {
    let spec = parse_spec(&cfg.spec)?;
    let format = report_format(cfg)?;
    let files = image_files(cfg)?;
    let count = cfg.count.unwrap_or(files.len());
    if count > files.len() {
        return Err(invalid(format!(
            "--count {count} exceeds the {} images found",
            files.len()
        )));
    }
    let corpus = files[..count]
        .par_iter()
        .map(|p| load_input(p, cfg.resize_pow2))
        .collect::<Result<Vec<_>>>()?;
    let options = CorpusOptions {
        size,
        convert_uint8: cfg.convert_uint8,
    };
    let (report, baseline) = rayon::join(
        || average_spectra(&corpus, &spec, count, &cfg.params, options),
        || average_spectra(&corpus, &AugmentSpec::baseline(), count, &cfg.params, options),
    );
    let report = spectrum_diff(&report?, &baseline?)?;
    let text = match format {
        Format::Json => report.to_json()? + "\n",
        _ => report.to_csv(),
    };
    emit(cfg, &text)
}

fn cmd_bench(cfg: &RunConfig, min_qubits: usize, max_qubits: usize, reps: usize, dense_max: usize) -> Result<()> {
    let format = report_format(cfg)?;
    let table = bench_scaling(min_qubits, max_qubits, min_qubits..=dense_max, reps, cfg.params.seed)?;
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&table)? + "\n",
        _ => {
            eprintln!("generic_exponent={:.3}", table.generic_exponent);
            eprintln!("qrz_exponent={:.3}", table.qrz_exponent);
            if let Some(d) = table.dense_exponent {
                eprintln!("dense_exponent={d:.3}");
            }
            table.to_csv()
        }
    };
    emit(cfg, &text)
}

/// File-name slug for a spec: `real(QR_Z(F(PR(x))))` becomes
/// `real_QR_Z_F_PR_x`.
fn slug(spec: &str) -> String {
    if spec == "x" {
        return "BL".to_string();
    }
    spec.split(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
        .filter(|s| !s.is_empty())
        .collect::<Vec<_>>()
        .join("_")
}

fn cmd_demo(cfg: &RunConfig) -> Result<()> {
    let files = image_files(cfg)?;
    let source = &files[0];
    let img = load_input(source, cfg.resize_pow2)?;
    let format = image_format(cfg, source)?;
    let dir = cfg.output()?;
    fs::create_dir_all(dir)?;
    DEMO_CATALOG.par_iter().enumerate().try_for_each(|(i, text)| {
        let spec = parse_spec(text)?;
        let out = run_pipeline_indexed(&img, &spec, &cfg.params, 0)?;
        write_output(dir, &format!("{i:02}_{}", slug(text)), format, &out)
    })
}
