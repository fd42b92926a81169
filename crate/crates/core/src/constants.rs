//! Numerical settings and regression thresholds.
//!
//! Thresholds marked "pilot" were calibrated on desk-scale runs of this
//! crate (CP1, default seeds) and are regression values, not sharp
//! constants. Bump [`THRESHOLDS_VERSION`] whenever one of them changes.

use crate::geometry::Model;

pub const THRESHOLDS_VERSION: u32 = 1;

/// Version tag written into every cache file and report.
pub const SCHEMA_VERSION: u32 = 1;

// Search grids and local refinement.

/// Fibonacci nodes per `CP1` factor for sup-norm and Lebesgue searches:
/// `max(4000, 60 k^2)` on CP1. On the product the grid is a tensor product,
/// so the per-factor count is reduced to `max(256, 24 k^2)`.
pub fn search_grid_per_factor(model: Model, k: u32) -> usize {
    let k2 = (k as usize).pow(2);
    match model {
        Model::Cp1 => (60 * k2).max(4000),
        Model::Cp1xCp1 => (24 * k2).max(256),
    }
}

/// Grid candidates kept per field before refinement.
pub const REFINE_KEEP: usize = 32;
/// Separated candidates refined by ascent.
pub const REFINE_STARTS: usize = 6;
/// Ascent steps per refinement.
pub const REFINE_STEPS: usize = 50;
/// Relative change allowed between the full and the halved grid (sup-norms).
pub const SUP_STABILITY_REL: f64 = 1e-8;
/// Same for Lebesgue constants.
pub const LEBESGUE_STABILITY_REL: f64 = 1e-4;

// Fekete solver.

pub const DEFAULT_GRAD_TOL: f64 = 1e-9;
pub const DEFAULT_MAX_ITERS: usize = 20_000;
/// Accept a configuration as Fekete when every Lagrange section has sup-norm
/// at most `1 + CERTIFICATE_TOL`.
pub const CERTIFICATE_TOL: f64 = 1e-6;
/// Exchange-and-reascend rounds of the polish stage.
pub const POLISH_ROUNDS: usize = 16;
/// Largest product-model level solved by default (N = 36).
pub const PRODUCT_MAX_K: u32 = 5;

pub fn default_starts(n: usize) -> usize {
    8 + n.div_ceil(4)
}

// Experiments.

pub const DEFAULT_SEED: u64 = 7;
pub const CAP_CENTERS: usize = 500;
pub const WITNESS_EPS: f64 = 0.2;
pub const WITNESS_CANDIDATES: usize = 100;
pub const MIN_TRIALS: usize = 50;
/// Band half-widths for the sup-norm tail fractions.
pub const SUP_TAIL_EPS: [f64; 3] = [0.25, 0.5, 1.0];
/// Thresholds `C` for the sampling-ratio tail fractions.
pub const RATIO_TAIL_C: [f64; 4] = [2.0, 3.0, 4.0, 6.0];

// Regression thresholds.

/// Lower bound on `sqrt(k) * min separation` (pilot; k = 1..=40 on CP1).
pub const SEPARATION_DELTA: f64 = 0.5;
/// Cap relative error at the icosahedron, `r_scale = 1` (pilot).
pub const CAP_RELERR_ICOSAHEDRON: f64 = 1.5;
/// Cap relative error at `k = 32` must not exceed this over `r_k` (pilot).
pub const CAP_RELERR_CONST: f64 = 3.0;
/// Median of `||s||_inf / sqrt(log N)` (pilot).
pub const SUP_MEDIAN_BAND: (f64, f64) = (0.8, 1.3);
/// 95th percentile of the sampling ratio (pilot).
pub const RATIO_Q95_MAX: f64 = 4.0;
/// Required factor between the witness ratio and the random 99th percentile.
pub const WITNESS_CONTRAST: f64 = 10.0;
/// Band for the `L^2` sampling statistic (pilot).
pub const L2_BAND: (f64, f64) = (0.2, 5.0);
/// Band for `E[max_j |s(x_j)|] / sqrt(log N)` (pilot).
pub const FEKETE_MAX_BAND: (f64, f64) = (0.5, 1.3);
/// Worst oversampled ratio at `a = 1.5` (pilot).
pub const OVERSAMPLED_MAX: f64 = 6.0;
/// Relative Monte Carlo slack when checking that a worst-case statistic is
/// non-growing in `k`.
pub const NON_GROWING_SLACK: f64 = 0.05;
/// Density of the greedy separated subset (pilot).
pub const SEPARATED_DENSITY: f64 = 0.2;
/// Lower bound on the increment-variance statistic for separated pairs.
pub const COVARIANCE_MIN: f64 = 1.5;
/// Constant in `|K_k(p, q)| <= C k^n exp(-sqrt(k) d)`, validated by grid scan.
pub const OFFDIAG_CONST: f64 = 4.0;
