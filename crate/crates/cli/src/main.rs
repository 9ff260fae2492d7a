use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use softthresh_cli::{run, DistArg, Mode, RunConfig};

/// Enhance scanned document images by soft thresholding.
///
/// Processes PGM files (or directories of them) with hard thresholding,
/// soft thresholding, or soft thresholding after shading subtraction.
#[derive(Parser, Debug)]
#[command(name = "softthresh", version, about)]
struct Args {
    /// Input PGM files or directories (directories are scanned flat for *.pgm).
    #[arg(required = true)]
    inputs: Vec<PathBuf>,

    /// Output file (single input) or directory.
    #[arg(short, long)]
    output: PathBuf,

    /// Processing pipeline.
    #[arg(long, value_enum, default_value_t = Mode::Soft)]
    mode: Mode,

    /// Distribution underlying the transfer function.
    #[arg(long, value_enum, default_value_t = DistArg::Logistic)]
    dist: DistArg,

    /// Threshold grey value; computed with Otsu's method when omitted.
    #[arg(long)]
    threshold: Option<u8>,

    /// White-mean calibration level: the mean white grey value maps to alpha*255.
    #[arg(long, default_value_t = 0.99)]
    alpha: f64,

    /// Explicit band width in the native unit of the chosen distribution
    /// (h for uniform, theta for logistic, sigma for normal); overrides the
    /// automatic calibration.
    #[arg(long)]
    band: Option<f64>,

    /// Window side length for shading subtraction (odd; required for
    /// soft-shading). Choose it large enough that every window contains
    /// background pixels.
    #[arg(long)]
    k: Option<usize>,

    /// Write the analyzed image's histogram as CSV (v,count per line).
    #[arg(long, value_name = "CSV")]
    dump_histogram: Option<PathBuf>,

    /// Write the transfer function as CSV (v,g(v) per line, 6 decimals).
    #[arg(long, value_name = "CSV")]
    dump_curve: Option<PathBuf>,

    /// Number of parallel workers for batch processing.
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cfg = RunConfig {
        inputs: args.inputs,
        output: args.output,
        mode: args.mode,
        dist: args.dist.into(),
        threshold: args.threshold,
        alpha: args.alpha,
        band: args.band,
        k: args.k,
        dump_histogram: args.dump_histogram,
        dump_curve: args.dump_curve,
        workers: args.workers,
    };
    let mut stdout = std::io::stdout().lock();
    match run(&cfg, &mut stdout) {
        Ok(0) => ExitCode::SUCCESS,
        Ok(_) => ExitCode::FAILURE,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
