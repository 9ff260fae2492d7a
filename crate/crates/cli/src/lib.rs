//! Batch processing front end: expands input paths, runs the selected
//! pipeline on every PGM, writes outputs and CSV dumps, and prints a
//! line-oriented report to the given writer.
//!
//! All per-file work goes through the library; the CLI layer adds no image
//! processing of its own, so its outputs are byte-identical to the
//! corresponding library composition.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use softthresh::{
    hard_threshold, otsu_threshold, read_pgm, soft_threshold, soft_threshold_with_band, write_pgm,
    AutoParams, Distribution, GreyImage, Histogram, SoftThresholded, TransferSpec, WindowSpec,
};

/// Processing pipeline selected on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    /// Binarize: black at or below the threshold, white above.
    Hard,
    /// Greyscale transfer function with automatic band width.
    Soft,
    /// Shading subtraction, then soft thresholding of the flattened image.
    SoftShading,
}

/// Transfer-function distribution names as they appear on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum DistArg {
    Uniform,
    Logistic,
    Normal,
}

impl From<DistArg> for Distribution {
    fn from(d: DistArg) -> Self {
        match d {
            DistArg::Uniform => Distribution::Uniform,
            DistArg::Logistic => Distribution::Logistic,
            DistArg::Normal => Distribution::Normal,
        }
    }
}

/// Everything a batch run needs; validated before any file is touched.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub inputs: Vec<PathBuf>,
    pub output: PathBuf,
    pub mode: Mode,
    pub dist: Distribution,
    pub threshold: Option<u8>,
    pub alpha: f64,
    pub band: Option<f64>,
    pub k: Option<usize>,
    pub dump_histogram: Option<PathBuf>,
    pub dump_curve: Option<PathBuf>,
    pub workers: usize,
}

struct Plan {
    mode: Mode,
    dist: Distribution,
    threshold: Option<u8>,
    auto: AutoParams,
    band: Option<f64>,
    window: Option<WindowSpec>,
    dump_histogram: Option<PathBuf>,
    dump_curve: Option<PathBuf>,
}

/// Validates the configuration and runs the batch. Returns the process exit
/// code: 0 when every file succeeded, 1 when any file failed. Configuration
/// problems are reported as `Err` without touching any file.
pub fn run(cfg: &RunConfig, report: &mut dyn Write) -> Result<i32, String> {
    let plan = validate(cfg)?;
    let jobs = expand_inputs(&cfg.inputs)?;

    if (plan.dump_histogram.is_some() || plan.dump_curve.is_some()) && jobs.len() != 1 {
        return Err(format!(
            "--dump-histogram/--dump-curve require exactly one input image, found {}",
            jobs.len()
        ));
    }

    let output_is_dir = cfg.output.is_dir()
        || jobs.len() > 1
        || cfg.inputs.iter().any(|p| p.is_dir());
    if output_is_dir && !jobs.is_empty() {
        fs::create_dir_all(&cfg.output)
            .map_err(|e| format!("cannot create output directory {}: {e}", cfg.output.display()))?;
    }

    let results: Mutex<Vec<Option<FileOutcome>>> = Mutex::new(vec![None; jobs.len()]);
    let next = AtomicUsize::new(0);
    let n_workers = cfg.workers.min(jobs.len());
    std::thread::scope(|scope| {
        for _ in 0..n_workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= jobs.len() {
                    break;
                }
                let out_path = if output_is_dir {
                    cfg.output.join(jobs[i].file_name().expect("expanded inputs are files"))
                } else {
                    cfg.output.clone()
                };
                let outcome = process_file(&jobs[i], &out_path, &plan);
                results.lock().expect("worker panicked")[i] = Some(outcome);
            });
        }
    });

    let mut failed = false;
    for outcome in results.into_inner().expect("worker panicked").into_iter().flatten() {
        for line in &outcome.lines {
            writeln!(report, "{line}").map_err(|e| format!("cannot write report: {e}"))?;
        }
        failed |= !outcome.ok;
    }
    Ok(if failed { 1 } else { 0 })
}

fn validate(cfg: &RunConfig) -> Result<Plan, String> {
    if cfg.workers == 0 {
        return Err("--workers must be at least 1".into());
    }
    let auto = AutoParams::new(cfg.alpha).map_err(|e| e.to_string())?;
    if let Some(band) = cfg.band {
        if band <= 0.0 || band.is_nan() {
            return Err(format!("--band must be positive, got {band}"));
        }
        if cfg.mode == Mode::Hard {
            return Err("--band has no effect in hard mode".into());
        }
    }
    let window = match (cfg.mode, cfg.k) {
        (Mode::SoftShading, Some(k)) => Some(WindowSpec::new(k).map_err(|e| e.to_string())?),
        (Mode::SoftShading, None) => {
            return Err("--k is required in soft-shading mode".into());
        }
        (_, Some(_)) => {
            return Err("--k is only valid in soft-shading mode".into());
        }
        (_, None) => None,
    };
    if cfg.mode == Mode::Hard && cfg.dump_curve.is_some() {
        return Err("--dump-curve needs a transfer function; hard mode has none".into());
    }
    Ok(Plan {
        mode: cfg.mode,
        dist: cfg.dist,
        threshold: cfg.threshold,
        auto,
        band: cfg.band,
        window,
        dump_histogram: cfg.dump_histogram.clone(),
        dump_curve: cfg.dump_curve.clone(),
    })
}

/// Expands each argument: directories contribute their `.pgm` files
/// (flat scan, sorted by name), plain paths are taken as-is.
fn expand_inputs(inputs: &[PathBuf]) -> Result<Vec<PathBuf>, String> {
    let mut files = Vec::new();
    for input in inputs {
        if input.is_dir() {
            let mut found = Vec::new();
            let entries = fs::read_dir(input)
                .map_err(|e| format!("cannot read directory {}: {e}", input.display()))?;
            for entry in entries {
                let entry = entry.map_err(|e| format!("cannot read directory {}: {e}", input.display()))?;
                let path = entry.path();
                let is_pgm = path
                    .extension()
                    .is_some_and(|ext| ext.eq_ignore_ascii_case("pgm"));
                if path.is_file() && is_pgm {
                    found.push(path);
                }
            }
            found.sort();
            files.extend(found);
        } else {
            files.push(input.clone());
        }
    }
    Ok(files)
}

#[derive(Clone)]
struct FileOutcome {
    ok: bool,
    lines: Vec<String>,
}

fn process_file(input: &Path, output: &Path, plan: &Plan) -> FileOutcome {
    match process_file_inner(input, output, plan) {
        Ok(lines) => FileOutcome { ok: true, lines },
        Err(message) => FileOutcome {
            ok: false,
            lines: vec![format!("ERROR {}: {message}", input.display())],
        },
    }
}

fn process_file_inner(input: &Path, output: &Path, plan: &Plan) -> Result<Vec<String>, String> {
    let bytes = fs::read(input).map_err(|e| format!("cannot read: {e}"))?;
    let img = read_pgm(&bytes).map_err(|e| e.to_string())?;

    let mut lines = Vec::new();
    let (result, detail) = apply_pipeline(&img, plan).map_err(|e| e.to_string())?;

    fs::write(output, write_pgm(&result, false))
        .map_err(|e| format!("cannot write {}: {e}", output.display()))?;

    if let Some(path) = &plan.dump_histogram {
        fs::write(path, dump_histogram(&detail.analyzed_histogram))
            .map_err(|e| format!("cannot write histogram dump: {e}"))?;
    }
    if let Some(path) = &plan.dump_curve {
        let spec = detail
            .curve
            .ok_or_else(|| "no transfer function to dump (hard fallback)".to_string())?;
        fs::write(path, dump_curve(&spec)).map_err(|e| format!("cannot write curve dump: {e}"))?;
    }

    let mut fields = format!("t={}", detail.threshold);
    if let Some(k) = plan.window {
        fields = format!("k={} {fields}", k.side());
    }
    if let Some(v_w) = detail.white_mean {
        fields.push_str(&format!(" v_w={v_w:.3}"));
    }
    if let Some(band) = detail.band {
        let name = match plan.dist {
            Distribution::Uniform => "h",
            Distribution::Logistic => "theta",
            Distribution::Normal => "sigma",
        };
        fields.push_str(&format!(" {name}={band:.4}"));
        if plan.band.is_some() {
            fields.push_str(" (explicit)");
        }
    }
    lines.push(format!(
        "OK {} -> {} {fields}",
        input.display(),
        output.display()
    ));
    if detail.fallback {
        lines.push(format!(
            "WARN {}: no pixels above t={}; applied hard threshold",
            input.display(),
            detail.threshold
        ));
    }
    Ok(lines)
}

struct Detail {
    threshold: u8,
    white_mean: Option<f64>,
    band: Option<f64>,
    fallback: bool,
    /// Histogram of the image the threshold was computed on (the flattened
    /// image in soft-shading mode), paired with `curve` for plotting.
    analyzed_histogram: Histogram,
    curve: Option<TransferSpec>,
}

fn apply_pipeline(img: &GreyImage, plan: &Plan) -> softthresh::Result<(GreyImage, Detail)> {
    match plan.mode {
        Mode::Hard => {
            let hist = img.histogram();
            let t = match plan.threshold {
                Some(t) => t,
                None => otsu_threshold(&hist)?,
            };
            let out = hard_threshold(img, t);
            let detail = Detail {
                threshold: t,
                white_mean: None,
                band: None,
                fallback: false,
                analyzed_histogram: hist,
                curve: None,
            };
            Ok((out, detail))
        }
        Mode::Soft => {
            let soft = run_soft(img, plan)?;
            let detail = detail_from_soft(&soft, img.histogram(), plan.dist);
            Ok((soft.image, detail))
        }
        Mode::SoftShading => {
            let window = plan.window.expect("validated: soft-shading carries k");
            let flattened = softthresh::shading_subtraction(img, window);
            let soft = run_soft(&flattened, plan)?;
            let detail = detail_from_soft(&soft, flattened.histogram(), plan.dist);
            Ok((soft.image, detail))
        }
    }
}

fn run_soft(img: &GreyImage, plan: &Plan) -> softthresh::Result<SoftThresholded> {
    match plan.band {
        Some(band) => soft_threshold_with_band(img, plan.threshold, plan.dist, band),
        None => soft_threshold(img, plan.threshold, plan.dist, &plan.auto),
    }
}

fn detail_from_soft(soft: &SoftThresholded, hist: Histogram, dist: Distribution) -> Detail {
    Detail {
        threshold: soft.threshold,
        white_mean: soft.white_mean,
        band: soft.band,
        fallback: soft.used_hard_fallback(),
        analyzed_histogram: hist,
        curve: soft
            .band
            .map(|band| TransferSpec::new(dist, soft.threshold, band).expect("band is positive")),
    }
}

/// 256 CSV lines `v,count` with grey values ascending.
pub fn dump_histogram(hist: &Histogram) -> String {
    let mut out = String::with_capacity(256 * 8);
    for v in 0..=255usize {
        out.push_str(&format!("{v},{}\n", hist.counts()[v]));
    }
    out
}

/// 256 CSV lines `v,g(v)` with the unrounded transfer value to 6 decimals.
pub fn dump_curve(spec: &TransferSpec) -> String {
    let mut out = String::with_capacity(256 * 14);
    for v in 0..=255u16 {
        out.push_str(&format!("{v},{:.6}\n", spec.value(f64::from(v))));
    }
    out
}
