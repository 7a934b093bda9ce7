//! The four batch commands. Every output file embeds the artifact version
//! and the SHA-256 of the raw config bytes; identical configs and seeds
//! produce byte-identical outputs.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use log::info;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde_json::json;

use tpgabor::gabor::{
    default_x_samples, dual_window, frame_check, verify_biorthogonality, FrameVerdict,
    LatticeParams,
};
use tpgabor::sampling::{
    apply_reconstruction, jittered_sequence, max_gap_admissible, read_points_csv, resolve_config,
    sampling_left_inverse, write_reconstruction_csv, Reconstruction, SiSignal,
};
use tpgabor::tp_linalg::{
    det_sign_oracle_with_margin, schur_bound, sw_check, DetClass, IndexWindow, PointSequence,
};
use tpgabor::Error as TpError;

use crate::config::{
    DualWindowConfig, FrameScanConfig, SampleReconstructConfig, TpVerifyConfig, XSource,
};
use crate::Format;

/// Command failure with its exit code per the CLI contract:
/// 1 verification disagreement, 2 config error, 3 density violation,
/// 4 numerical failure, 5 admissibility failure.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: msg.into(),
        }
    }
}

/// Default mapping from library errors: validation problems are config
/// errors, conditioning problems are numerical, density is its own code.
fn map_core_error(e: TpError, sampling_context: bool) -> CliError {
    let code = match &e {
        TpError::DensityViolation { .. } => 3,
        TpError::SingularSubmatrix { .. }
        | TpError::NegativeDeterminant { .. }
        | TpError::DegenerateSpectrum { .. }
        | TpError::UnboundedEntries => 4,
        TpError::ConditionViolated(_)
        | TpError::InvalidEpsilon { .. }
        | TpError::WindowTooSmall(_) => 5,
        TpError::ConditionCrViolated(_) => {
            if sampling_context {
                5
            } else {
                4
            }
        }
        _ => 2,
    };
    CliError {
        code,
        message: e.to_string(),
    }
}

/// Static metadata stamped into every output file.
pub struct RunMeta {
    pub config_sha256: String,
    pub seed: u64,
}

impl RunMeta {
    fn version(&self) -> &'static str {
        env!("CARGO_PKG_VERSION")
    }

    fn json_fields(&self) -> serde_json::Value {
        json!({
            "artifact_version": self.version(),
            "config_sha256": self.config_sha256,
            "seed": self.seed,
        })
    }

    fn csv_comment(&self) -> String {
        format!(
            "# tpgabor {} config_sha256={} seed={}",
            self.version(),
            self.config_sha256,
            self.seed
        )
    }
}

fn write_json_report(path: &Path, meta: &RunMeta, mut body: serde_json::Value) -> Result<(), CliError> {
    let obj = body
        .as_object_mut()
        .expect("report body is always an object");
    obj.insert("meta".into(), meta.json_fields());
    let text = serde_json::to_string_pretty(&body)
        .map_err(|e| CliError::config(format!("serialize report: {e}")))?;
    fs::write(path, text + "\n")
        .map_err(|e| CliError::config(format!("write {}: {e}", path.display())))?;
    info!("wrote {}", path.display());
    Ok(())
}

fn create_csv(path: &Path, meta: &RunMeta) -> Result<fs::File, CliError> {
    let mut f = fs::File::create(path)
        .map_err(|e| CliError::config(format!("create {}: {e}", path.display())))?;
    writeln!(f, "{}", meta.csv_comment())
        .map_err(|e| CliError::config(format!("write {}: {e}", path.display())))?;
    Ok(f)
}

fn parse_config<T: serde::de::DeserializeOwned>(bytes: &[u8]) -> Result<T, CliError> {
    serde_json::from_slice(bytes).map_err(|e| CliError::config(format!("config: {e}")))
}

// ---------------------------------------------------------------------------
// tp-verify

/// Sorted points in `[0, range]` with pairwise separation `min_sep`.
fn sorted_points(rng: &mut ChaCha12Rng, n: usize, range: f64, min_sep: f64) -> Vec<f64> {
    loop {
        let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..range)).collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        if n < 2 || v.windows(2).all(|w| w[1] - w[0] >= min_sep) {
            return v;
        }
    }
}

fn interlacing_slack(xs: &[f64], ys: &[f64], m: usize, n: usize) -> f64 {
    let nn = xs.len();
    let mut slack = f64::INFINITY;
    for j in 1..=nn {
        if j > m {
            slack = slack.min(ys[j - 1] - xs[j - m - 1]);
        }
        if j + n <= nn {
            slack = slack.min(xs[j + n - 1] - ys[j - 1]);
        }
    }
    slack
}

pub fn cmd_tp_verify(
    config_bytes: &[u8],
    out: &Path,
    meta: &RunMeta,
    _format: Format,
) -> Result<(), CliError> {
    let cfg: TpVerifyConfig = parse_config(config_bytes)?;
    let g = cfg.window;
    let (m, n) = g.type_counts();
    if m + n < 2 {
        return Err(CliError::config(format!(
            "window type m + n = {} < 2; the determinant criterion needs type >= 2",
            m + n
        )));
    }
    if cfg.max_points == 0 || cfg.range <= 0.0 || cfg.min_separation <= 0.0 {
        return Err(CliError::config("max_points, range, min_separation must be positive"));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(meta.seed);
    let mut positives = 0usize;
    let mut zeros = 0usize;
    let mut disagreements = 0usize;
    let mut min_positive_margin = f64::INFINITY;
    let mut max_zero_ratio = 0.0f64;
    for _ in 0..cfg.trials {
        let (xs, ys) = loop {
            let size = rng.random_range(1..=cfg.max_points);
            let xs = sorted_points(&mut rng, size, cfg.range, cfg.min_separation);
            let ys = if rng.random_bool(0.5) {
                let mut ys: Vec<f64> = xs
                    .iter()
                    .map(|x| x + rng.random_range(-0.35..0.35))
                    .collect();
                ys.sort_by(|a, b| a.partial_cmp(b).unwrap());
                if size >= 2 && ys.windows(2).any(|w| w[1] - w[0] < cfg.min_separation) {
                    continue;
                }
                ys
            } else {
                sorted_points(&mut rng, size, cfg.range, cfg.min_separation)
            };
            if interlacing_slack(&xs, &ys, m, n).abs() >= cfg.margin {
                break (xs, ys);
            }
        };
        let sw = sw_check(&xs, &ys, m, n).map_err(|e| map_core_error(e, false))?;
        let (class, det, tol) =
            det_sign_oracle_with_margin(&g, &xs, &ys).map_err(|e| map_core_error(e, false))?;
        match class {
            DetClass::Positive => {
                positives += 1;
                min_positive_margin = min_positive_margin.min(det / tol.max(1e-300));
            }
            DetClass::Zero => {
                zeros += 1;
                max_zero_ratio = max_zero_ratio.max(det.abs() / tol.max(1e-300));
            }
        }
        if (class == DetClass::Positive) != sw {
            disagreements += 1;
        }
    }
    write_json_report(
        &out.join("tp_verify_report.json"),
        meta,
        json!({
            "trials": cfg.trials,
            "positives": positives,
            "zeros": zeros,
            "disagreements": disagreements,
            "min_positive_det_over_tol": finite_or_null(min_positive_margin),
            "max_zero_det_over_tol": max_zero_ratio,
        }),
    )?;
    if disagreements > 0 {
        return Err(CliError {
            code: 1,
            message: format!("{disagreements} disagreement(s) between determinant sign and interlacing test"),
        });
    }
    Ok(())
}

fn finite_or_null(v: f64) -> serde_json::Value {
    if v.is_finite() {
        json!(v)
    } else {
        serde_json::Value::Null
    }
}

// ---------------------------------------------------------------------------
// dual-window

pub fn cmd_dual_window(
    config_bytes: &[u8],
    out: &Path,
    meta: &RunMeta,
    format: Format,
) -> Result<(), CliError> {
    let cfg: DualWindowConfig = parse_config(config_bytes)?;
    let lat = LatticeParams::new(cfg.alpha, cfg.beta).map_err(|e| map_core_error(e, false))?;
    let g = cfg.window;
    let dw = dual_window(&g, &lat, cfg.grid_cells).map_err(|e| match e {
        TpError::TypeTooSmall { .. } => CliError::config(e.to_string()),
        other => map_core_error(other, false),
    })?;
    let deviation = verify_biorthogonality(&g, &dw, cfg.kmax, cfg.lmax, cfg.quad_nodes)
        .map_err(|e| map_core_error(e, false))?;
    let bessel = tpgabor::gabor::bessel_check(&dw).map_err(|e| map_core_error(e, false))?;

    let (lo, hi) = dw.support_interval();
    let r = dw.oversampling_order();
    let (m, n) = dw.type_counts();
    // Structural support check over the stored grid.
    let mut support_ok = true;
    for cell in dw.cells() {
        for &j in &cell.xi_indices {
            for frac in [0.0, 0.5, 0.999_999] {
                let t = cell.x_lo + (cell.x_hi - cell.x_lo) * frac + cfg.alpha * j as f64;
                if t < lo - 1e-12 || t > hi + 1e-12 {
                    support_ok = false;
                }
            }
        }
    }
    let card_bound = (r + 1) * (m + n);

    match format {
        Format::Csv => {
            let mut f = create_csv(&out.join("dual_window.csv"), meta)?;
            dw.write_csv(&mut f, cfg.samples_per_cell)
                .map_err(|e| CliError::config(format!("write dual_window.csv: {e}")))?;
        }
        Format::Json => {
            let mut rows = Vec::new();
            for cell in dw.cells() {
                for s in 0..cfg.samples_per_cell {
                    let x = cell.x_lo
                        + (cell.x_hi - cell.x_lo) * (s as f64 + 0.5) / cfg.samples_per_cell as f64;
                    let (indices, values) =
                        dw.coeff_row(x).map_err(|e| map_core_error(e, false))?;
                    for (idx, &j) in indices.iter().enumerate() {
                        rows.push(json!({
                            "x": x,
                            "j": j,
                            "t": x + cfg.alpha * j as f64,
                            "gamma_value": values[idx],
                        }));
                    }
                }
            }
            write_json_report(&out.join("dual_window.json"), meta, json!({ "samples": rows }))?;
        }
    }

    write_json_report(
        &out.join("biorthogonality_report.json"),
        meta,
        json!({
            "alpha": cfg.alpha,
            "beta": cfg.beta,
            "oversampling_order": r,
            "kmax": cfg.kmax,
            "lmax": cfg.lmax,
            "max_deviation": deviation,
            "support_interval": [lo, hi],
            "support_ok": support_ok,
            "max_support_cardinality": dw.max_support_cardinality(),
            "cardinality_bound": card_bound,
            "sup_gamma": dw.sup_entry(),
            "min_selection_det": dw.min_det(),
            "bessel_sum": bessel,
            "grid_cells": dw.cells().len(),
        }),
    )
}

// ---------------------------------------------------------------------------
// frame-scan

pub fn cmd_frame_scan(
    config_bytes: &[u8],
    out: &Path,
    meta: &RunMeta,
    format: Format,
) -> Result<(), CliError> {
    let cfg: FrameScanConfig = parse_config(config_bytes)?;
    let mut results = Vec::new();
    let mut table_rows = Vec::new();
    for &(alpha, beta) in &cfg.pairs {
        let entry = (|| -> Result<serde_json::Value, TpError> {
            let lat = LatticeParams::new(alpha, beta)?;
            let xs = default_x_samples(alpha, cfg.x_count);
            let (verdict, fb) = frame_check(&cfg.window, &lat, &cfg.sizes, &xs)?;
            for row in &fb.table {
                table_rows.push((alpha, beta, row.x, row.size, row.lambda_min, row.lambda_max));
            }
            Ok(json!({
                "alpha": alpha,
                "beta": beta,
                "density": alpha * beta,
                "verdict": if verdict == FrameVerdict::Frame { "Frame" } else { "NotFrame" },
                "bounds": serde_json::to_value(&fb).expect("FrameBounds serializes"),
            }))
        })();
        match entry {
            Ok(v) => results.push(v),
            // Per-pair failures are recorded, not fatal.
            Err(e) => results.push(json!({
                "alpha": alpha,
                "beta": beta,
                "error": e.to_string(),
            })),
        }
    }
    if format == Format::Csv && !table_rows.is_empty() {
        let mut f = create_csv(&out.join("frame_scan_table.csv"), meta)?;
        writeln!(f, "alpha,beta,x,size,lambda_min,lambda_max")
            .map_err(|e| CliError::config(e.to_string()))?;
        for (a, b, x, s, lmin, lmax) in &table_rows {
            writeln!(f, "{a:.16e},{b:.16e},{x:.16e},{s},{lmin:.16e},{lmax:.16e}")
                .map_err(|e| CliError::config(e.to_string()))?;
        }
    }
    write_json_report(
        &out.join("frame_scan.json"),
        meta,
        json!({ "pairs": results }),
    )
}

// ---------------------------------------------------------------------------
// sample-reconstruct

pub fn cmd_sample_reconstruct(
    config_bytes: &[u8],
    out: &Path,
    meta: &RunMeta,
    _format: Format,
) -> Result<(), CliError> {
    let cfg: SampleReconstructConfig = parse_config(config_bytes)?;
    let g = cfg.window;
    let y = PointSequence::uniform(
        0.0,
        cfg.node_step,
        IndexWindow::new(-cfg.node_halfwidth, cfg.node_halfwidth),
    )
    .map_err(|e| map_core_error(e, true))?;

    let (x, loaded_values) = match &cfg.x {
        XSource::Jitter {
            max_gap,
            first_index,
            count,
        } => (
            jittered_sequence(*max_gap, *first_index, *count, meta.seed),
            None,
        ),
        XSource::Csv { path } => {
            let file = fs::File::open(path)
                .map_err(|e| CliError::config(format!("open {path}: {e}")))?;
            let (seq, values) = read_points_csv(std::io::BufReader::new(file))
                .map_err(|e| CliError::config(e.to_string()))?;
            (seq, values)
        }
    };

    let report = max_gap_admissible(&x, cfg.node_step);
    if !report.ok {
        return Err(CliError {
            code: 5,
            message: format!(
                "sample set inadmissible: max gap {} >= node step {}",
                report.max_gap, cfg.node_step
            ),
        });
    }
    let scfg = resolve_config(&x, &y, cfg.node_step).map_err(|e| map_core_error(e, true))?;
    let gamma = sampling_left_inverse(&g, &x, &y, &scfg).map_err(|e| map_core_error(e, true))?;
    let bound = schur_bound(&gamma).map_err(|e| map_core_error(e, true))?;
    let certified = gamma.row_window();

    let admissibility_json = json!({
        "max_gap": report.max_gap,
        "epsilon": scfg.epsilon,
        "oversampling_order": scfg.r,
        "node_step": cfg.node_step,
    });

    if let Some(values) = loaded_values {
        // Direct reconstruction of supplied sample values.
        let recon = apply_reconstruction(&gamma, &x, &values);
        write_recon_csv(out, meta, &y, &recon)?;
        return write_json_report(
            &out.join("reconstruction_report.json"),
            meta,
            json!({
                "admissibility": admissibility_json,
                "certified_window": [certified.lo, certified.hi],
                "schur_bound": bound,
                "mode": "csv",
            }),
        );
    }

    // Synthetic round-trips.
    let mut rng = ChaCha12Rng::seed_from_u64(meta.seed ^ 0x5157_5ec0);
    let mut max_rel_error = 0.0f64;
    let mut sum_rel_error = 0.0f64;
    let mut max_noise_l2 = 0.0f64;
    let mut max_noise_coeff_dev = 0.0f64;
    let mut first_recon: Option<Reconstruction> = None;
    for s in 0..cfg.signals {
        let mut coeffs = vec![0.0; y.window().len()];
        for (i, c) in coeffs.iter_mut().enumerate() {
            let k = i as i64 + y.window().lo;
            if k.abs() <= cfg.coeff_halfwidth {
                *c = rng.random_range(-1.0..1.0);
            }
        }
        let f = SiSignal::new(g.clone(), y.clone(), coeffs.clone())
            .map_err(|e| map_core_error(e, true))?;
        let clean: Vec<f64> = x
            .window()
            .iter()
            .map(|j| f.evaluate(x.position(j)))
            .collect();
        let recon_clean = apply_reconstruction(&gamma, &x, &clean);
        let mut err = 0.0f64;
        let mut norm = 0.0f64;
        for k in certified.iter() {
            let truth = coeffs[(k - y.window().lo) as usize];
            let got = recon_clean.coeffs[(k - certified.lo) as usize];
            err += (got - truth).powi(2);
            norm += truth.powi(2);
        }
        let rel = err.sqrt() / norm.sqrt().max(1e-300);
        max_rel_error = max_rel_error.max(rel);
        sum_rel_error += rel;
        if cfg.noise > 0.0 {
            let noisy: Vec<f64> = clean
                .iter()
                .map(|v| v + rng.random_range(-cfg.noise..cfg.noise))
                .collect();
            let noise_l2 = clean
                .iter()
                .zip(&noisy)
                .map(|(a, b)| (a - b).powi(2))
                .sum::<f64>()
                .sqrt();
            let recon_noisy = apply_reconstruction(&gamma, &x, &noisy);
            let dev = recon_clean
                .coeffs
                .iter()
                .zip(&recon_noisy.coeffs)
                .map(|(a, b)| (a - b).powi(2))
                .sum::<f64>()
                .sqrt();
            max_noise_l2 = max_noise_l2.max(noise_l2);
            max_noise_coeff_dev = max_noise_coeff_dev.max(dev);
        }
        if s == 0 {
            first_recon = Some(recon_clean);
        }
    }
    if let Some(recon) = &first_recon {
        write_recon_csv(out, meta, &y, recon)?;
    }
    write_json_report(
        &out.join("reconstruction_report.json"),
        meta,
        json!({
            "admissibility": admissibility_json,
            "certified_window": [certified.lo, certified.hi],
            "signals": cfg.signals,
            "coeff_halfwidth": cfg.coeff_halfwidth,
            "max_relative_error": max_rel_error,
            "mean_relative_error": sum_rel_error / (cfg.signals.max(1) as f64),
            "schur_bound": bound,
            "noise": cfg.noise,
            "max_noise_l2": max_noise_l2,
            "max_noise_coeff_deviation": max_noise_coeff_dev,
            "noise_coeff_bound": bound * max_noise_l2,
            "mode": "synthetic",
        }),
    )
}

fn write_recon_csv(
    out: &Path,
    meta: &RunMeta,
    y: &PointSequence,
    recon: &Reconstruction,
) -> Result<(), CliError> {
    let mut f = create_csv(&out.join("reconstruction.csv"), meta)?;
    write_reconstruction_csv(&mut f, y, recon)
        .map_err(|e| CliError::config(format!("write reconstruction.csv: {e}")))
}

/// Resolves the output directory, creating it if needed.
pub fn prepare_out_dir(out: &Path) -> Result<PathBuf, CliError> {
    fs::create_dir_all(out)
        .map_err(|e| CliError::config(format!("create out dir {}: {e}", out.display())))?;
    Ok(out.to_path_buf())
}
