//! Sampling in quasi shift-invariant spaces `V_Y(g)`.
//!
//! A signal is `f = Σ_k c_k g(·−y_k)` over a quasi-uniform node sequence
//! `Y`. A sample set `X` is admissible when a quasi-uniform subsequence
//! `X' ⊆ X` puts one point in every `ε`-shrunk node interval and `r + 1`
//! points in every `ε`-shrunk `r`-fold interval; then the pre-Gramian
//! `[g(x_j − y_k)]` has a banded, `ℓ²`-bounded left-inverse and `c = Γ·f(X)`
//! recovers the coefficients exactly on the interior of the data window.

use std::io::{BufRead, Write};

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gabor::oversampling_order;
use crate::tp_kernel::TpWindow;
use crate::tp_linalg::{
    build_left_inverse_row, rows_to_banded, BandedMatrix, IndexWindow, PointSequence,
};

/// Sampling configuration: oversampling order `r` and node clearance `ε`
/// (must satisfy `0 < ε < q_Y/2`). The quasi-uniform subsequence `X'` is
/// chosen by the greedy `ε`-separation rule of [`select_subsequence`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingConfig {
    pub r: usize,
    pub epsilon: f64,
}

/// Separation `q = inf gaps` and mesh `Q = sup gaps` of a node sequence.
/// Strict monotonicity is enforced when the sequence is built; a repeated
/// point fails there with `NonIncreasingSequence`.
pub fn quasi_uniform_params(y: &PointSequence) -> (f64, f64) {
    y.separation_mesh()
}

/// Default subsequence selector: keep a point when it is at least `ε` away
/// from the last kept point. The result is `ε`-separated (hence
/// quasi-uniform over a finite window) and as dense as the rule allows.
pub fn select_subsequence(x: &PointSequence, eps: f64) -> Vec<i64> {
    let mut kept = Vec::with_capacity(x.window().len());
    let mut last = f64::NEG_INFINITY;
    for j in x.window().iter() {
        let xj = x.position(j);
        if xj - last >= eps {
            kept.push(j);
            last = xj;
        }
    }
    kept
}

/// Condition `C_r(ε)` with the default subsequence selector.
pub fn condition_cr_eps(x: &PointSequence, y: &PointSequence, cfg: &SamplingConfig) -> bool {
    let (q, _) = y.separation_mesh();
    if !(cfg.epsilon > 0.0 && cfg.epsilon < 0.5 * q) {
        return false;
    }
    let kept = select_subsequence(x, cfg.epsilon);
    condition_cr_eps_with(x, y, cfg, &kept)
}

/// Condition `C_r(ε)` against an explicit admissible subsequence (sorted
/// window indices into `x`): every `(y_k + ε, y_{k+1} − ε)` holds a point,
/// every `(y_k + ε, y_{k+r} − ε)` holds at least `r + 1`.
pub fn condition_cr_eps_with(
    x: &PointSequence,
    y: &PointSequence,
    cfg: &SamplingConfig,
    allowed: &[i64],
) -> bool {
    if cfg.r == 0 {
        return false;
    }
    let count_in = |a: f64, b: f64| -> usize {
        allowed
            .iter()
            .filter(|&&j| {
                let xj = x.position(j);
                xj > a && xj < b
            })
            .count()
    };
    let win = y.window();
    for k in win.lo..win.hi {
        if count_in(y.position(k) + cfg.epsilon, y.position(k + 1) - cfg.epsilon) < 1 {
            return false;
        }
    }
    for k in win.lo..=(win.hi - cfg.r as i64) {
        if count_in(
            y.position(k) + cfg.epsilon,
            y.position(k + cfg.r as i64) - cfg.epsilon,
        ) < cfg.r + 1
        {
            return false;
        }
    }
    true
}

/// Node range a row-`k` selection touches, by window type.
fn selection_node_range(m: usize, n: usize, r: usize, k: i64) -> (i64, i64) {
    if n == 0 {
        let (a, b) = selection_node_range(0, m, r, -k);
        return (-b, -a);
    }
    if m == 0 && n == 1 {
        return (k - 1, k + 1);
    }
    if m == 0 {
        let nn = ((n - 1) * (r + 1)) as i64;
        return (k - 1, k + nn - 1);
    }
    let nn = if n == 1 {
        (m * (r + 1) + 1) as i64
    } else {
        ((m + n - 1) * (r + 1)) as i64
    };
    let k1 = k - ((r + 1) * m) as i64 + 1;
    (k1, k1 + nn - 1)
}

/// Rows whose selections fit entirely inside the node window and the span
/// of the sample data.
pub fn certified_rows(
    g: &TpWindow,
    x: &PointSequence,
    y: &PointSequence,
    cfg: &SamplingConfig,
) -> Result<IndexWindow> {
    let (m, n) = g.type_counts();
    let ywin = y.window();
    let (x_first, x_last) = (x.first_position(), x.last_position());
    let mut lo = None;
    let mut hi = None;
    for k in ywin.iter() {
        let (node_lo, node_hi) = selection_node_range(m, n, cfg.r, k);
        let fits = node_lo >= ywin.lo
            && node_hi <= ywin.hi
            && y.position(node_lo) >= x_first
            && y.position(node_hi) <= x_last;
        if fits {
            if lo.is_none() {
                lo = Some(k);
            }
            hi = Some(k);
        }
    }
    match (lo, hi) {
        (Some(lo), Some(hi)) => Ok(IndexWindow::new(lo, hi)),
        _ => Err(Error::WindowTooSmall(
            "no row's selection fits inside the data window".into(),
        )),
    }
}

/// Banded left-inverse of the pre-Gramian under `C_r(ε)`, rows limited to
/// the certified interior window.
pub fn sampling_left_inverse(
    g: &TpWindow,
    x: &PointSequence,
    y: &PointSequence,
    cfg: &SamplingConfig,
) -> Result<BandedMatrix> {
    let (m, n) = g.type_counts();
    if m + n < 2 {
        return Err(Error::TypeTooSmall { m, n });
    }
    let (q, _) = y.separation_mesh();
    if !(cfg.epsilon > 0.0 && cfg.epsilon < 0.5 * q) {
        return Err(Error::InvalidEpsilon {
            eps: cfg.epsilon,
            half_q: 0.5 * q,
        });
    }
    if !condition_cr_eps(x, y, cfg) {
        return Err(Error::ConditionViolated(format!(
            "C_{}({}) fails over the declared windows",
            cfg.r, cfg.epsilon
        )));
    }
    let kept = select_subsequence(x, cfg.epsilon);
    let rows_window = certified_rows(g, x, y, cfg)?;
    let rows = rows_window
        .iter()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|k| build_left_inverse_row(g, x, y, k, cfg.r, cfg.epsilon, Some(&kept)))
        .collect::<Result<Vec<_>>>()?;
    rows_to_banded(rows, rows_window, x.window())
}

/// A signal in `V_Y(g)`: coefficients over the node window.
#[derive(Debug, Clone, PartialEq)]
pub struct SiSignal {
    g: TpWindow,
    nodes: PointSequence,
    coeffs: Vec<f64>,
}

impl SiSignal {
    pub fn new(g: TpWindow, nodes: PointSequence, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != nodes.window().len() {
            return Err(Error::LengthMismatch {
                left: coeffs.len(),
                right: nodes.window().len(),
            });
        }
        Ok(SiSignal { g, nodes, coeffs })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn nodes(&self) -> &PointSequence {
        &self.nodes
    }

    /// `f(t) = Σ_k c_k g(t − y_k)`.
    pub fn evaluate(&self, t: f64) -> f64 {
        let win = self.nodes.window();
        win.iter()
            .map(|k| {
                self.coeffs[(k - win.lo) as usize] * self.g.evaluate(t - self.nodes.position(k))
            })
            .sum()
    }

    /// `‖f‖₂²` via the Gram matrix of translates, whose entries are the
    /// autocorrelation window at node differences.
    pub fn l2_norm_sq(&self) -> f64 {
        let acf = self.g.autocorrelation();
        let win = self.nodes.window();
        let mut acc = 0.0;
        for k in win.iter() {
            for l in win.iter() {
                acc += self.coeffs[(k - win.lo) as usize]
                    * self.coeffs[(l - win.lo) as usize]
                    * acf.evaluate(self.nodes.position(k) - self.nodes.position(l));
            }
        }
        acc
    }
}

/// Result of a coefficient reconstruction: values for every certified node
/// row.
#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    pub certified: IndexWindow,
    pub coeffs: Vec<f64>,
}

/// Recovers coefficients `c = Γ·samples` on the certified interior window;
/// `samples[i]` is `f(x_j)` for `j = x.window().lo + i`.
pub fn reconstruct(
    g: &TpWindow,
    x: &PointSequence,
    y: &PointSequence,
    cfg: &SamplingConfig,
    samples: &[f64],
) -> Result<Reconstruction> {
    if samples.len() != x.window().len() {
        return Err(Error::LengthMismatch {
            left: samples.len(),
            right: x.window().len(),
        });
    }
    let gamma = sampling_left_inverse(g, x, y, cfg)?;
    Ok(apply_reconstruction(&gamma, x, samples))
}

/// Applies an already-built left-inverse to a sample vector.
pub fn apply_reconstruction(
    gamma: &BandedMatrix,
    x: &PointSequence,
    samples: &[f64],
) -> Reconstruction {
    let certified = gamma.row_window();
    let xlo = x.window().lo;
    let coeffs = certified
        .iter()
        .map(|k| {
            let row = gamma.row(k);
            row.values
                .iter()
                .enumerate()
                .map(|(off, v)| v * samples[(row.first_col + off as i64 - xlo) as usize])
                .sum()
        })
        .collect();
    Reconstruction { certified, coeffs }
}

/// Admissibility of a sample set against uniform nodes `hℤ`: requires
/// `max gap < h` and proposes the clearance `ε = (h − max gap)/2` plus the
/// oversampling order for the gap ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub ok: bool,
    pub max_gap: f64,
    pub epsilon: f64,
    pub r: usize,
}

pub fn max_gap_admissible(x: &PointSequence, h: f64) -> AdmissibilityReport {
    let (_, max_gap) = x.separation_mesh();
    if max_gap >= h {
        return AdmissibilityReport {
            ok: false,
            max_gap,
            epsilon: 0.0,
            r: 0,
        };
    }
    let r = oversampling_order(max_gap, 1.0 / h).expect("max_gap/h < 1");
    AdmissibilityReport {
        ok: true,
        max_gap,
        epsilon: 0.5 * (h - max_gap),
        r,
    }
}

/// Turns the max-gap recipe into a configuration that actually passes the
/// `C_r(ε)` check against the given nodes. The `ε`-margins eat into the
/// interval counting, so the base order can fall one short for dense sample
/// sets; the order is raised minimally (the counting argument guarantees a
/// finite order works whenever the max gap is below the node step).
pub fn resolve_config(
    x: &PointSequence,
    y: &PointSequence,
    h: f64,
) -> Result<SamplingConfig> {
    let report = max_gap_admissible(x, h);
    if !report.ok {
        return Err(Error::ConditionViolated(format!(
            "max gap {} is not below the node step {h}",
            report.max_gap
        )));
    }
    for r in report.r..=report.r + 16 {
        let cfg = SamplingConfig {
            r,
            epsilon: report.epsilon,
        };
        if condition_cr_eps(x, y, &cfg) {
            return Ok(cfg);
        }
    }
    Err(Error::ConditionViolated(format!(
        "no oversampling order in [{}, {}] satisfies C_r({}) over the windows",
        report.r,
        report.r + 16,
        report.epsilon
    )))
}

/// Riesz bounds of the translate system `{g(·−y_k)}`.
///
/// Uniform nodes `hℤ`: min/max over `ξ ∈ [0, 1/h)` of the periodization
/// `Σ_k |ĝ(ξ + k/h)|²`, truncated once the polynomial tail bound drops
/// below `1e−12` of the partial sum. Quasi-uniform nodes: eigenvalue
/// extremes of the Gram section built from the autocorrelation window.
pub fn riesz_bounds(g: &TpWindow, y: &PointSequence) -> Result<(f64, f64)> {
    let (lower, upper) = if y.is_uniform() {
        let (q, _) = y.separation_mesh();
        riesz_bounds_uniform(g, q, 1024)
    } else {
        riesz_bounds_gram(g, y)
    };
    if lower <= 1e-12 * upper.max(1e-300) {
        return Err(Error::DegenerateSpectrum { lower });
    }
    Ok((lower, upper))
}

/// Periodization route for `Y = hℤ`.
pub fn riesz_bounds_uniform(g: &TpWindow, h: f64, grid: usize) -> (f64, f64) {
    let two_m = 2 * g.order() as i32;
    // |ĝ(ζ)|² ≤ D / ζ^{2M} everywhere.
    let mut d = 1.0 / (g.scale_c() * g.scale_c());
    for &delta in g.deltas() {
        d /= (2.0 * std::f64::consts::PI * delta).powi(2);
    }
    let mut lower = f64::INFINITY;
    let mut upper = 0.0f64;
    for i in 0..grid {
        let xi = i as f64 / (grid as f64 * h);
        let mut partial;
        let mut kk: i64 = 8;
        loop {
            partial = (-kk..=kk)
                .map(|k| g.fourier(xi + k as f64 / h).norm_sqr())
                .sum();
            let tail = d * h.powi(two_m) / (two_m as f64 - 1.0)
                * ((kk as f64).powi(1 - two_m) + ((kk - 1) as f64).powi(1 - two_m));
            if tail < 1e-12 * partial || kk > 1 << 20 {
                break;
            }
            kk *= 2;
        }
        lower = lower.min(partial);
        upper = upper.max(partial);
    }
    (lower, upper)
}

/// Gram-section route for quasi-uniform nodes.
pub fn riesz_bounds_gram(g: &TpWindow, y: &PointSequence) -> (f64, f64) {
    let acf = g.autocorrelation();
    let positions = y.positions();
    let size = positions.len();
    let gram = DMatrix::from_fn(size, size, |a, b| acf.evaluate(positions[a] - positions[b]));
    let eig = SymmetricEigen::new(gram);
    let lower = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let upper = eig.eigenvalues.iter().copied().fold(0.0f64, f64::max);
    (lower, upper)
}

/// Jittered sample sequence with max gap at most `target_gap`: base step
/// `0.75·target_gap` plus i.i.d. uniform jitter in `±0.125·target_gap`
/// (gaps then lie in `[0.5, 1.0]·target_gap`). Randomness is ChaCha12 from
/// the given seed, so identical seeds reproduce identical sequences.
pub fn jittered_sequence(
    target_gap: f64,
    first_index: i64,
    count: usize,
    seed: u64,
) -> PointSequence {
    let base = 0.75 * target_gap;
    let amp = 0.125 * target_gap;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let points: Vec<f64> = (0..count)
        .map(|i| base * (first_index + i as i64) as f64 + rng.random_range(-amp..amp))
        .collect();
    PointSequence::from_points(first_index, points).expect("jitter keeps strict monotonicity")
}

/// Reads a point table `index,position[,value]` (optional header line).
pub fn read_points_csv<R: BufRead>(r: R) -> Result<(PointSequence, Option<Vec<f64>>)> {
    let mut indices: Vec<i64> = Vec::new();
    let mut points: Vec<f64> = Vec::new();
    let mut values: Vec<f64> = Vec::new();
    for (lineno, line) in r.lines().enumerate() {
        let line = line.map_err(|e| Error::WindowTooSmall(format!("csv read: {e}")))?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        if lineno == 0 && fields[0].parse::<i64>().is_err() {
            continue; // header
        }
        if fields.len() < 2 {
            return Err(Error::WindowTooSmall(format!(
                "csv line {} needs at least index,position",
                lineno + 1
            )));
        }
        let idx: i64 = fields[0]
            .parse()
            .map_err(|_| Error::WindowTooSmall(format!("bad index on line {}", lineno + 1)))?;
        let pos: f64 = fields[1]
            .parse()
            .map_err(|_| Error::WindowTooSmall(format!("bad position on line {}", lineno + 1)))?;
        indices.push(idx);
        points.push(pos);
        if fields.len() >= 3 {
            let v: f64 = fields[2].parse().map_err(|_| {
                Error::WindowTooSmall(format!("bad value on line {}", lineno + 1))
            })?;
            values.push(v);
        }
    }
    if indices.is_empty() {
        return Err(Error::WindowTooSmall("csv holds no points".into()));
    }
    for (i, w) in indices.windows(2).enumerate() {
        if w[1] != w[0] + 1 {
            return Err(Error::WindowTooSmall(format!(
                "indices must be consecutive, got {} after {} (line {})",
                w[1],
                w[0],
                i + 2
            )));
        }
    }
    if !values.is_empty() && values.len() != points.len() {
        return Err(Error::LengthMismatch {
            left: values.len(),
            right: points.len(),
        });
    }
    let seq = PointSequence::from_points(indices[0], points)?;
    Ok((seq, if values.is_empty() { None } else { Some(values) }))
}

/// Writes reconstruction results `(index, node, coefficient, certified)`;
/// uncertified boundary rows carry a zero coefficient and flag 0.
pub fn write_reconstruction_csv<W: Write>(
    mut w: W,
    y: &PointSequence,
    recon: &Reconstruction,
) -> std::io::Result<()> {
    writeln!(w, "index,node,coefficient,certified")?;
    for k in y.window().iter() {
        let (c, flag) = if recon.certified.contains(k) {
            (recon.coeffs[(k - recon.certified.lo) as usize], 1)
        } else {
            (0.0, 0)
        };
        writeln!(w, "{},{:.16e},{:.16e},{}", k, y.position(k), c, flag)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::Rng;

    fn two_sided() -> TpWindow {
        TpWindow::new(0.5, 0.0, &[1.0, -1.0]).unwrap()
    }

    fn unit_nodes(halfwidth: i64) -> PointSequence {
        PointSequence::uniform(0.0, 1.0, IndexWindow::new(-halfwidth, halfwidth)).unwrap()
    }

    #[test]
    fn quasi_uniform_gaps() {
        let y = unit_nodes(5);
        assert_eq!(quasi_uniform_params(&y), (1.0, 1.0));
        let z = PointSequence::from_points(0, vec![0.0, 0.5, 1.2, 2.0]).unwrap();
        assert_eq!(quasi_uniform_params(&z), (0.5, 0.8));
        assert!(PointSequence::from_points(0, vec![0.0, 1.0, 1.0]).is_err());
    }

    #[test]
    fn cr_eps_small_cases() {
        let y = unit_nodes(6);
        let x = PointSequence::uniform(0.0, 0.4, IndexWindow::new(-40, 40)).unwrap();
        assert!(condition_cr_eps(&x, &y, &SamplingConfig { r: 2, epsilon: 0.05 }));
        // eps >= q_Y / 2 is rejected by the precondition.
        assert!(!condition_cr_eps(&x, &y, &SamplingConfig { r: 2, epsilon: 0.5 }));
        // Half-integer grid: (a) holds at eps = 0.4 but (b) needs two points
        // in intervals of length 1.2 that hold only one.
        let xh = PointSequence::uniform(0.5, 1.0, IndexWindow::new(-40, 40)).unwrap();
        assert!(!condition_cr_eps(&xh, &y, &SamplingConfig { r: 1, epsilon: 0.4 }));
    }

    #[test]
    fn eps_monotonicity() {
        let y = unit_nodes(6);
        let x = jittered_sequence(0.8, -20, 41, 7);
        let cfg = SamplingConfig { r: 4, epsilon: 0.09 };
        let kept = select_subsequence(&x, cfg.epsilon);
        if condition_cr_eps_with(&x, &y, &cfg, &kept) {
            for eps in [0.05, 0.02, 0.005] {
                let smaller = SamplingConfig { r: 4, epsilon: eps };
                assert!(condition_cr_eps_with(&x, &y, &smaller, &kept));
            }
        }
    }

    #[test]
    fn evaluate_signal_cases() {
        let g = two_sided();
        let y = unit_nodes(4);
        let mut c = vec![0.0; y.window().len()];
        c[4] = 1.0; // delta at node 0
        let f = SiSignal::new(g.clone(), y.clone(), c).unwrap();
        for &t in &[-1.0, 0.0, 0.4, 2.0] {
            assert_relative_eq!(f.evaluate(t), g.evaluate(t), max_relative = 1e-13, epsilon = 1e-300);
        }
        // Two-term sum.
        let y2 = PointSequence::from_points(0, vec![0.0, 1.0]).unwrap();
        let f2 = SiSignal::new(g.clone(), y2, vec![1.0, 1.0]).unwrap();
        assert_relative_eq!(f2.evaluate(0.5), 2.0 * (-0.5f64).exp(), max_relative = 1e-13);
    }

    #[test]
    fn reconstruct_round_trip() {
        let g = two_sided();
        let y = unit_nodes(16);
        let x = jittered_sequence(0.8, -28, 57, 42);
        let report = max_gap_admissible(&x, 1.0);
        assert!(report.ok);
        let cfg = SamplingConfig {
            r: report.r,
            epsilon: report.epsilon,
        };
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let mut coeffs = vec![0.0; y.window().len()];
        for (k, c) in coeffs.iter_mut().enumerate() {
            let idx = k as i64 + y.window().lo;
            if idx.abs() <= 8 {
                *c = rng.random_range(-1.0..1.0);
            }
        }
        let f = SiSignal::new(g.clone(), y.clone(), coeffs.clone()).unwrap();
        let samples: Vec<f64> = x.window().iter().map(|j| f.evaluate(x.position(j))).collect();
        let recon = reconstruct(&g, &x, &y, &cfg, &samples).unwrap();
        assert!(recon.certified.lo <= -8 && recon.certified.hi >= 8);
        let mut err = 0.0f64;
        let mut norm = 0.0f64;
        for k in recon.certified.iter() {
            let truth = coeffs[(k - y.window().lo) as usize];
            let got = recon.coeffs[(k - recon.certified.lo) as usize];
            err += (got - truth).powi(2);
            norm += truth.powi(2);
        }
        assert!(err.sqrt() <= 1e-8 * norm.sqrt().max(1.0), "err = {err:e}");
        // Zero samples give zero coefficients.
        let zeros = vec![0.0; samples.len()];
        let rz = reconstruct(&g, &x, &y, &cfg, &zeros).unwrap();
        assert!(rz.coeffs.iter().all(|&c| c == 0.0));
    }

    #[test]
    fn resolve_config_escalates_order_for_dense_grids() {
        // A 0.4-grid against unit nodes: the recipe r = 1 cannot put two
        // points in (k + 0.3, k + 0.7); r = 2 works and must be chosen.
        let y = unit_nodes(8);
        let x = PointSequence::uniform(0.0, 0.4, IndexWindow::new(-40, 40)).unwrap();
        let cfg = resolve_config(&x, &y, 1.0).unwrap();
        assert_eq!(cfg.r, 2);
        assert!(condition_cr_eps(&x, &y, &cfg));
        // The jittered 0.8-gap case keeps the recipe order.
        let xj = jittered_sequence(0.8, -28, 57, 42);
        let report = max_gap_admissible(&xj, 1.0);
        let cfgj = resolve_config(&xj, &unit_nodes(12), 1.0).unwrap();
        assert_eq!(cfgj.r, report.r);
        // Max gap at the node step is rejected outright.
        let grid = PointSequence::uniform(0.5, 1.0, IndexWindow::new(-9, 9)).unwrap();
        assert!(resolve_config(&grid, &y, 1.0).is_err());
    }

    #[test]
    fn max_gap_rule() {
        let x = jittered_sequence(0.8, -10, 21, 5);
        let rep = max_gap_admissible(&x, 1.0);
        assert!(rep.ok);
        assert!(rep.max_gap < 0.8);
        assert_relative_eq!(rep.epsilon, 0.5 * (1.0 - rep.max_gap));
        // max gap 1.0 is sharp.
        let grid = PointSequence::uniform(0.0, 1.0, IndexWindow::new(-5, 5)).unwrap();
        assert!(!max_gap_admissible(&grid, 1.0).ok);
        // h = 2 admits a 1.5-step grid.
        let wide = PointSequence::uniform(0.0, 1.5, IndexWindow::new(-5, 5)).unwrap();
        let rep2 = max_gap_admissible(&wide, 2.0);
        assert!(rep2.ok);
        assert_relative_eq!(rep2.epsilon, 0.25);
    }

    #[test]
    fn riesz_bounds_uniform_positive() {
        let g = two_sided();
        let y = unit_nodes(8);
        let (lower, upper) = riesz_bounds(&g, &y).unwrap();
        assert!(lower > 0.0 && lower <= upper);
        // hat g has no real zeros: the periodization minimum stays away
        // from zero (for e^{-|t|}, h=1 it is about 0.068 at xi = 1/2).
        assert!(lower > 0.05);
        assert!((0.05..0.09).contains(&lower));
    }

    #[test]
    fn riesz_gram_route_and_rayleigh() {
        let g = two_sided();
        let y = PointSequence::from_points(-3, vec![-2.9, -2.0, -1.2, 0.0, 0.7, 1.9, 2.8]).unwrap();
        let (lower, upper) = riesz_bounds(&g, &y).unwrap();
        assert!(lower > 0.0 && lower <= upper);
        // Rayleigh quotients of signals lie inside the bounds.
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for _ in 0..20 {
            let c: Vec<f64> = (0..y.window().len())
                .map(|_| rng.random_range(-1.0..1.0))
                .collect();
            let f = SiSignal::new(g.clone(), y.clone(), c.clone()).unwrap();
            let c_norm_sq: f64 = c.iter().map(|v| v * v).sum();
            let q = f.l2_norm_sq() / c_norm_sq;
            assert!(q >= lower - 1e-9 && q <= upper + 1e-9);
        }
    }

    #[test]
    fn riesz_routes_agree_for_uniform_nodes() {
        // Gram sections are compressions of the Laurent operator whose
        // symbol is the periodization, so their spectra sit inside the
        // periodization envelope and the lower edge tightens with size.
        let g = two_sided();
        let (lo_p, hi_p) = riesz_bounds_uniform(&g, 1.0, 2048);
        let (lo_small, _) = riesz_bounds_gram(&g, &unit_nodes(8));
        let (lo_big, hi_big) = riesz_bounds_gram(&g, &unit_nodes(24));
        assert!(lo_big >= lo_p - 1e-9);
        assert!(hi_big <= hi_p + 1e-9);
        assert!(lo_big <= lo_small + 1e-12);
        assert!((lo_big - lo_p) / lo_p < 0.5);
    }

    #[test]
    fn csv_round_trip_points() {
        let mut buf = Vec::new();
        buf.extend_from_slice(b"index,position,value\n");
        buf.extend_from_slice(b"-1,-0.5,1.25\n0,0.25,2.5\n1,1.0,-0.75\n");
        let (seq, values) = read_points_csv(std::io::Cursor::new(buf)).unwrap();
        assert_eq!(seq.window(), IndexWindow::new(-1, 1));
        assert_eq!(seq.position(0), 0.25);
        assert_eq!(values.unwrap(), vec![1.25, 2.5, -0.75]);
    }
}
