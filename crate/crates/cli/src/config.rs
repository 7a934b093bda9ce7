//! Per-command JSON configuration schemas.

use serde::Deserialize;
use tpgabor::TpWindow;

fn default_trials() -> usize {
    200
}
fn default_max_points() -> usize {
    4
}
fn default_range() -> f64 {
    4.0
}
fn default_min_separation() -> f64 {
    0.08
}
fn default_margin() -> f64 {
    0.04
}

/// `tp-verify`: randomized determinant-vs-interlacing agreement trials.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TpVerifyConfig {
    pub window: TpWindow,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_max_points")]
    pub max_points: usize,
    #[serde(default = "default_range")]
    pub range: f64,
    #[serde(default = "default_min_separation")]
    pub min_separation: f64,
    /// Cases within this interlacing slack of the boundary are re-drawn.
    #[serde(default = "default_margin")]
    pub margin: f64,
}

fn default_grid_cells() -> usize {
    256
}
fn default_samples_per_cell() -> usize {
    8
}
fn default_kmax() -> i64 {
    5
}
fn default_quad_nodes() -> usize {
    32
}

/// `dual-window`: synthesize the compactly supported dual window and verify
/// biorthogonality.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DualWindowConfig {
    pub window: TpWindow,
    pub alpha: f64,
    pub beta: f64,
    #[serde(default = "default_grid_cells")]
    pub grid_cells: usize,
    #[serde(default = "default_samples_per_cell")]
    pub samples_per_cell: usize,
    #[serde(default = "default_kmax")]
    pub kmax: i64,
    #[serde(default = "default_kmax")]
    pub lmax: i64,
    #[serde(default = "default_quad_nodes")]
    pub quad_nodes: usize,
}

fn default_sizes() -> Vec<usize> {
    vec![16, 32, 64, 128]
}
fn default_x_count() -> usize {
    17
}

/// `frame-scan`: Ron–Shen spectral estimates over a list of lattice pairs.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameScanConfig {
    pub window: TpWindow,
    pub pairs: Vec<(f64, f64)>,
    #[serde(default = "default_sizes")]
    pub sizes: Vec<usize>,
    #[serde(default = "default_x_count")]
    pub x_count: usize,
}

fn default_node_step() -> f64 {
    1.0
}
fn default_node_halfwidth() -> i64 {
    32
}
fn default_coeff_halfwidth() -> i64 {
    20
}
fn default_signals() -> usize {
    100
}
fn default_jitter_first_index() -> i64 {
    -55
}
fn default_jitter_count() -> usize {
    111
}

/// Where the sample set comes from.
#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum XSource {
    /// Seeded jitter generator with the given max gap.
    Jitter {
        max_gap: f64,
        #[serde(default = "default_jitter_first_index")]
        first_index: i64,
        #[serde(default = "default_jitter_count")]
        count: usize,
    },
    /// CSV table `index,position[,value]`; when values are present they are
    /// reconstructed directly instead of synthetic signals.
    Csv { path: String },
}

/// `sample-reconstruct`: admissibility check, left-inverse construction,
/// and coefficient round-trips on `V_{hZ}(g)`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleReconstructConfig {
    pub window: TpWindow,
    #[serde(default = "default_node_step")]
    pub node_step: f64,
    #[serde(default = "default_node_halfwidth")]
    pub node_halfwidth: i64,
    #[serde(default = "default_coeff_halfwidth")]
    pub coeff_halfwidth: i64,
    #[serde(default = "default_signals")]
    pub signals: usize,
    pub x: XSource,
    #[serde(default)]
    pub noise: f64,
}
