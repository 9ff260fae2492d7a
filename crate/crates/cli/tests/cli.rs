//! Behavior tests for the batch front end, driving the library entry point
//! directly with temporary files.

use std::fs;
use std::path::PathBuf;

use softthresh::{hard_threshold, otsu_threshold, read_pgm, write_pgm, GreyImage};
use softthresh_cli::{run, Mode, RunConfig};
use tempfile::TempDir;

fn base_config(inputs: Vec<PathBuf>, output: PathBuf) -> RunConfig {
    RunConfig {
        inputs,
        output,
        mode: Mode::Soft,
        dist: softthresh::Distribution::Logistic,
        threshold: None,
        alpha: 0.99,
        band: None,
        k: None,
        dump_histogram: None,
        dump_curve: None,
        workers: 1,
    }
}

fn checkerboard(w: usize, h: usize) -> GreyImage {
    GreyImage::from_fn(w, h, |x, y| if (x + y) % 2 == 0 { 40 } else { 210 }).unwrap()
}

fn write_input(dir: &TempDir, name: &str, img: &GreyImage) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, write_pgm(img, false)).unwrap();
    path
}

#[test]
fn hard_mode_matches_library_golden() {
    let dir = TempDir::new().unwrap();
    let img = GreyImage::from_fn(16, 12, |x, y| ((x * 17 + y * 29) % 256) as u8).unwrap();
    let input = write_input(&dir, "in.pgm", &img);
    let output = dir.path().join("out.pgm");

    let mut cfg = base_config(vec![input], output.clone());
    cfg.mode = Mode::Hard;
    cfg.threshold = Some(135);
    let mut report = Vec::new();
    assert_eq!(run(&cfg, &mut report).unwrap(), 0);

    let expected = write_pgm(&hard_threshold(&img, 135), false);
    assert_eq!(fs::read(&output).unwrap(), expected);
    let text = String::from_utf8(report).unwrap();
    assert!(text.contains("t=135"), "{text}");
}

#[test]
fn soft_mode_reports_otsu_threshold() {
    let dir = TempDir::new().unwrap();
    let img = checkerboard(20, 20);
    let input = write_input(&dir, "in.pgm", &img);
    let output = dir.path().join("out.pgm");

    let cfg = base_config(vec![input], output);
    let mut report = Vec::new();
    assert_eq!(run(&cfg, &mut report).unwrap(), 0);

    let t = otsu_threshold(&img.histogram()).unwrap();
    let text = String::from_utf8(report).unwrap();
    assert!(text.contains(&format!("t={t} ")), "{text}");
    assert!(text.contains("v_w="), "{text}");
    assert!(text.contains("theta="), "{text}");
}

#[test]
fn empty_input_directory_is_a_successful_noop() {
    let dir = TempDir::new().unwrap();
    let empty = dir.path().join("scans");
    fs::create_dir(&empty).unwrap();
    let cfg = base_config(vec![empty], dir.path().join("out"));
    let mut report = Vec::new();
    assert_eq!(run(&cfg, &mut report).unwrap(), 0);
    assert!(report.is_empty());
}

#[test]
fn directory_inputs_are_scanned_flat_and_sorted() {
    let dir = TempDir::new().unwrap();
    let scans = dir.path().join("scans");
    fs::create_dir(&scans).unwrap();
    let img = checkerboard(8, 8);
    fs::write(scans.join("b.pgm"), write_pgm(&img, false)).unwrap();
    fs::write(scans.join("a.pgm"), write_pgm(&img, false)).unwrap();
    fs::write(scans.join("ignored.txt"), "not an image").unwrap();
    fs::create_dir(scans.join("nested")).unwrap();
    fs::write(scans.join("nested").join("c.pgm"), write_pgm(&img, false)).unwrap();

    let out_dir = dir.path().join("out");
    let cfg = base_config(vec![scans], out_dir.clone());
    let mut report = Vec::new();
    assert_eq!(run(&cfg, &mut report).unwrap(), 0);

    let text = String::from_utf8(report).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2, "{text}");
    assert!(lines[0].contains("a.pgm"));
    assert!(lines[1].contains("b.pgm"));
    assert!(out_dir.join("a.pgm").exists());
    assert!(out_dir.join("b.pgm").exists());
    assert!(!out_dir.join("c.pgm").exists());
}

#[test]
fn failing_file_reports_error_and_processing_continues() {
    let dir = TempDir::new().unwrap();
    let img = checkerboard(8, 8);
    let good = write_input(&dir, "good.pgm", &img);
    let bad = dir.path().join("bad.pgm");
    fs::write(&bad, b"P6 not a greymap").unwrap();
    let out_dir = dir.path().join("out");

    let cfg = base_config(vec![bad, good], out_dir.clone());
    let mut report = Vec::new();
    assert_eq!(run(&cfg, &mut report).unwrap(), 1);

    let text = String::from_utf8(report).unwrap();
    assert!(text.contains("ERROR"), "{text}");
    assert!(text.contains("bad magic"), "{text}");
    assert!(text.contains("OK"), "{text}");
    assert!(out_dir.join("good.pgm").exists());
    assert!(!out_dir.join("bad.pgm").exists());
}

#[test]
fn fallback_warning_when_white_class_is_empty() {
    let dir = TempDir::new().unwrap();
    let img = checkerboard(8, 8);
    let input = write_input(&dir, "in.pgm", &img);
    let output = dir.path().join("out.pgm");

    let mut cfg = base_config(vec![input], output.clone());
    cfg.threshold = Some(250);
    let mut report = Vec::new();
    assert_eq!(run(&cfg, &mut report).unwrap(), 0);

    let text = String::from_utf8(report).unwrap();
    assert!(text.contains("WARN"), "{text}");
    assert!(text.contains("hard threshold"), "{text}");
    let expected = write_pgm(&hard_threshold(&img, 250), false);
    assert_eq!(fs::read(&output).unwrap(), expected);
}

#[test]
fn dump_histogram_matches_library_counts() {
    let dir = TempDir::new().unwrap();
    let img = GreyImage::constant(6, 4, 42).unwrap();
    let input = write_input(&dir, "in.pgm", &img);
    let hist_csv = dir.path().join("hist.csv");

    let mut cfg = base_config(vec![input], dir.path().join("out.pgm"));
    cfg.mode = Mode::Hard;
    cfg.threshold = Some(10);
    cfg.dump_histogram = Some(hist_csv.clone());
    let mut report = Vec::new();
    assert_eq!(run(&cfg, &mut report).unwrap(), 0);

    let text = fs::read_to_string(&hist_csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 256);
    assert_eq!(lines[42], "42,24");

    let hist = img.histogram();
    let mut total = 0u64;
    for (v, line) in lines.iter().enumerate() {
        let (lv, lc) = line.split_once(',').unwrap();
        assert_eq!(lv.parse::<usize>().unwrap(), v);
        let c: u64 = lc.parse().unwrap();
        assert_eq!(c, hist.counts()[v]);
        total += c;
    }
    assert_eq!(total, 24);
}

#[test]
fn dump_curve_shape_and_midpoint() {
    let dir = TempDir::new().unwrap();
    let img = checkerboard(8, 8);
    let input = write_input(&dir, "in.pgm", &img);
    let curve_csv = dir.path().join("curve.csv");

    let mut cfg = base_config(vec![input], dir.path().join("out.pgm"));
    cfg.dist = softthresh::Distribution::Uniform;
    cfg.threshold = Some(128);
    cfg.band = Some(40.0);
    cfg.dump_curve = Some(curve_csv.clone());
    let mut report = Vec::new();
    assert_eq!(run(&cfg, &mut report).unwrap(), 0);

    let text = fs::read_to_string(&curve_csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 256);
    assert_eq!(lines[128], "128,127.500000");

    let values: Vec<f64> = lines
        .iter()
        .map(|l| l.split_once(',').unwrap().1.parse::<f64>().unwrap())
        .collect();
    assert!(values.windows(2).all(|w| w[0] <= w[1]));
    // Uniform width h leaves exactly h - 1 strictly interior samples.
    let interior = values.iter().filter(|&&g| g > 0.0 && g < 255.0).count();
    assert_eq!(interior, 39);
}

#[test]
fn incompatible_flags_are_rejected_before_processing() {
    let dir = TempDir::new().unwrap();
    let img = checkerboard(8, 8);
    let input = write_input(&dir, "in.pgm", &img);
    let output = dir.path().join("out.pgm");

    let mut bad_k = base_config(vec![input.clone()], output.clone());
    bad_k.k = Some(9);
    assert!(run(&bad_k, &mut Vec::new()).is_err());

    let mut missing_k = base_config(vec![input.clone()], output.clone());
    missing_k.mode = Mode::SoftShading;
    assert!(run(&missing_k, &mut Vec::new()).is_err());

    let mut even_k = base_config(vec![input.clone()], output.clone());
    even_k.mode = Mode::SoftShading;
    even_k.k = Some(8);
    assert!(run(&even_k, &mut Vec::new()).is_err());

    let mut hard_band = base_config(vec![input.clone()], output.clone());
    hard_band.mode = Mode::Hard;
    hard_band.band = Some(10.0);
    assert!(run(&hard_band, &mut Vec::new()).is_err());

    let mut hard_curve = base_config(vec![input.clone()], output.clone());
    hard_curve.mode = Mode::Hard;
    hard_curve.dump_curve = Some(dir.path().join("c.csv"));
    assert!(run(&hard_curve, &mut Vec::new()).is_err());

    let mut bad_alpha = base_config(vec![input.clone()], output.clone());
    bad_alpha.alpha = 1.2;
    assert!(run(&bad_alpha, &mut Vec::new()).is_err());

    let mut no_workers = base_config(vec![input.clone()], output.clone());
    no_workers.workers = 0;
    assert!(run(&no_workers, &mut Vec::new()).is_err());

    let mut multi_dump = base_config(vec![input.clone(), input.clone()], dir.path().join("out"));
    multi_dump.dump_histogram = Some(dir.path().join("h.csv"));
    assert!(run(&multi_dump, &mut Vec::new()).is_err());

    // Nothing was written by any rejected configuration.
    assert!(!output.exists());
}

#[test]
fn soft_shading_mode_runs_end_to_end() {
    let dir = TempDir::new().unwrap();
    // Shaded page: ramp background with a dark bar.
    let img = GreyImage::from_fn(64, 32, |x, y| {
        if (28..36).contains(&x) && (4..28).contains(&y) {
            20
        } else {
            (170 + x / 2) as u8
        }
    })
    .unwrap();
    let input = write_input(&dir, "page.pgm", &img);
    let output = dir.path().join("out.pgm");

    let mut cfg = base_config(vec![input], output.clone());
    cfg.mode = Mode::SoftShading;
    cfg.k = Some(17);
    let mut report = Vec::new();
    assert_eq!(run(&cfg, &mut report).unwrap(), 0);

    let text = String::from_utf8(report).unwrap();
    assert!(text.contains("k=17"), "{text}");
    let out = read_pgm(&fs::read(&output).unwrap()).unwrap();
    assert!(out.same_dimensions(&img));
}
