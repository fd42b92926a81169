//! Gaussian random sections and the Monte Carlo experiments built on them.
//!
//! Trial `t` of an ensemble with master seed `s` draws from the ChaCha8
//! stream `(s, t)`, so every trial is reproducible in isolation and reports
//! do not depend on the thread count. Reductions run in trial order.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::constants;
use crate::error::{Error, Result};
use crate::fekete::Configuration;
use crate::interpolation;
use crate::report::{self, ExperimentReport};
use crate::sections::{Section, SectionSpace};

/// Sections chunked per shared grid scan; bounds memory for large trial counts.
const BATCH: usize = 64;

#[derive(Debug, Clone)]
pub struct GaussianEnsemble {
    pub space: SectionSpace,
    pub master_seed: u64,
}

impl GaussianEnsemble {
    pub fn new(space: SectionSpace, master_seed: u64) -> Self {
        Self { space, master_seed }
    }

    fn rng(&self, trial: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(trial);
        rng
    }

    /// iid complex Gaussian coefficients with `E|c_j|^2 = 1/N`.
    pub fn sample_section(&self, trial: u64) -> Section {
        let mut rng = self.rng(trial);
        let n = self.space.dim();
        let scale = (2.0 * n as f64).sqrt().recip();
        let coeffs = (0..n)
            .map(|_| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                Complex64::new(re * scale, im * scale)
            })
            .collect();
        self.space.section(coeffs).expect("dimension matches")
    }

    pub fn samples(&self, trials: usize) -> Vec<Section> {
        (0..trials as u64).map(|t| self.sample_section(t)).collect()
    }

    /// Sup-norms of trials `0..trials`, in trial order.
    pub fn sup_norms(&self, trials: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(trials);
        for start in (0..trials).step_by(BATCH) {
            let batch: Vec<Section> = (start..(start + BATCH).min(trials)).map(|t| self.sample_section(t as u64)).collect();
            out.extend(self.space.sup_norm_many(&batch).iter().map(|s| s.value));
        }
        out
    }

    fn report(&self, experiment: &str, trials: usize) -> ExperimentReport {
        ExperimentReport::new(experiment, self.space.model(), self.space.k(), self.master_seed)
            .param("trials", trials)
            .param("thresholds_version", constants::THRESHOLDS_VERSION)
    }
}

fn check_trials(trials: usize) -> Result<()> {
    if trials < constants::MIN_TRIALS {
        return Err(Error::InsufficientTrials { min: constants::MIN_TRIALS, got: trials });
    }
    Ok(())
}

fn check_space(ens: &GaussianEnsemble, config: &Configuration) -> Result<()> {
    if ens.space != config.space {
        return Err(Error::SpaceMismatch);
    }
    Ok(())
}

fn fraction(values: &[f64], pred: impl Fn(f64) -> bool) -> f64 {
    values.iter().filter(|&&v| pred(v)).count() as f64 / values.len() as f64
}

fn push_summary(report: &mut ExperimentReport, label: &str, stats: Vec<(String, f64)>) {
    report.push_row(label, stats.iter().map(|(k, v)| (k.as_str(), *v)));
}

fn log_n(space: &SectionSpace) -> f64 {
    (space.dim() as f64).ln()
}

/// Quantiles of `||s||_inf` and of `||s||_inf / sqrt(log N)`, plus the
/// fractions of trials with `| ||s||_inf - sqrt(n log k) | >= eps`.
pub fn sup_norm_experiment(ens: &GaussianEnsemble, trials: usize) -> Result<ExperimentReport> {
    check_trials(trials)?;
    let sups = ens.sup_norms(trials);
    let space = &ens.space;
    let scaled: Vec<f64> = sups.iter().map(|s| s / log_n(space).sqrt()).collect();
    let center = (space.model().dim() as f64 * (space.k().max(1) as f64).ln()).sqrt();
    let mut r = ens.report("sup", trials);
    push_summary(&mut r, "sup_norm", report::summary("sup", &sups));
    push_summary(&mut r, "sup_over_sqrt_log_n", report::summary("scaled", &scaled));
    let tails: Vec<(String, f64)> = constants::SUP_TAIL_EPS
        .iter()
        .map(|&e| (format!("tail_eps_{e}"), fraction(&sups, |v| (v - center).abs() >= e)))
        .chain([("center".to_string(), center)])
        .collect();
    push_summary(&mut r, "tails", tails);
    Ok(r)
}

/// Per-trial ratios `sup |s| / max_j |s(x_j)|` over the given nodes.
pub fn sampling_ratios(ens: &GaussianEnsemble, nodes: &[crate::geometry::Point], trials: usize) -> Vec<f64> {
    let sups = ens.sup_norms(trials);
    sups.iter()
        .enumerate()
        .map(|(t, sup)| {
            let s = ens.sample_section(t as u64);
            sup / nodes.iter().map(|p| s.eval_norm(p)).fold(0.0, f64::max)
        })
        .collect()
}

fn ratio_tails(ratios: &[f64]) -> Vec<(String, f64)> {
    constants::RATIO_TAIL_C.iter().map(|&c| (format!("tail_c_{c}"), fraction(ratios, |v| v > c))).collect()
}

/// Sampling ratio `rho(s) = sup |s| / max over Fekete nodes of |s|`.
pub fn sampling_ratio_experiment(ens: &GaussianEnsemble, config: &Configuration, trials: usize) -> Result<ExperimentReport> {
    check_trials(trials)?;
    check_space(ens, config)?;
    let ratios = sampling_ratios(ens, &config.points, trials);
    let mut r = ens.report("ratio", trials);
    push_summary(&mut r, "ratio", report::summary("rho", &ratios));
    push_summary(&mut r, "tails", ratio_tails(&ratios));
    Ok(r)
}

/// `r(s) = ||s||_2^2 / (N^{-1} sum_j |s(x_j)|^2)`.
pub fn l2_ratio(s: &Section, nodes: &[crate::geometry::Point]) -> f64 {
    let discrete = nodes.iter().map(|p| s.eval_norm(p).powi(2)).sum::<f64>() / nodes.len() as f64;
    s.norm_sq() / discrete
}

pub fn l2_sampling_experiment(ens: &GaussianEnsemble, config: &Configuration, trials: usize) -> Result<ExperimentReport> {
    check_trials(trials)?;
    check_space(ens, config)?;
    let mut ratios = Vec::with_capacity(trials);
    let mut parseval_gap = 0.0f64;
    for t in 0..trials as u64 {
        let s = ens.sample_section(t);
        let quad = s.inner_quadrature(&s)?.re;
        parseval_gap = parseval_gap.max((quad - s.norm_sq()).abs() / s.norm_sq());
        ratios.push(l2_ratio(&s, &config.points));
    }
    let s0 = ens.space.basis_section(0);
    let mut r = ens.report("l2", trials);
    push_summary(&mut r, "l2_ratio", report::summary("r", &ratios));
    r.push_row(
        "checks",
        [
            ("spread", ratios.iter().copied().fold(0.0, f64::max) / ratios.iter().copied().fold(f64::INFINITY, f64::min)),
            ("parseval_quadrature_max_relative_gap", parseval_gap),
            ("r_basis_section_0", l2_ratio(&s0, &config.points)),
        ],
    );
    Ok(r)
}

/// Frame-independent increment bound `L_ij = 2 - 2 |K(x_i, x_j)| / N` over
/// all pairs of `subset`.
pub fn covariance_check(space: &SectionSpace, config: &Configuration, subset: &[usize]) -> Result<ExperimentReport> {
    if let Some(&bad) = subset.iter().find(|&&i| i >= config.points.len()) {
        return Err(Error::Domain(format!("subset index {bad} out of range")));
    }
    let n = space.dim() as f64;
    let mut min_l = f64::INFINITY;
    let mut max_k = 0.0f64;
    let mut pairs = 0usize;
    for (a, &i) in subset.iter().enumerate() {
        for &j in &subset[a + 1..] {
            let kij = space.bergman_norm(&config.points[i], &config.points[j]) / n;
            min_l = min_l.min(2.0 - 2.0 * kij);
            max_k = max_k.max(kij);
            pairs += 1;
        }
    }
    let mut r = ExperimentReport::new("covariance", space.model(), space.k(), config.solver_meta.seed)
        .param("subset_size", subset.len());
    r.push_row("pairs", [("pairs", pairs as f64), ("min_l", min_l), ("max_kernel_over_n", max_k)]);
    Ok(r)
}

/// Mean, quantiles and spread of `max_j |s(x_j)|` over Fekete nodes.
pub fn fekete_max_experiment(ens: &GaussianEnsemble, config: &Configuration, trials: usize) -> Result<ExperimentReport> {
    check_trials(trials)?;
    check_space(ens, config)?;
    let maxima: Vec<f64> = (0..trials as u64)
        .map(|t| {
            let s = ens.sample_section(t);
            config.points.iter().map(|p| s.eval_norm(p)).fold(0.0, f64::max)
        })
        .collect();
    let m = report::mean(&maxima);
    let space = &ens.space;
    let n_log_k = space.model().dim() as f64 * (space.k().max(1) as f64).ln();
    let mut r = ens.report("max", trials);
    push_summary(&mut r, "node_max", report::summary("max", &maxima));
    r.push_row(
        "scaled",
        [
            ("mean_over_sqrt_n_log_k", m / n_log_k.sqrt()),
            ("mean_over_sqrt_log_n", m / log_n(space).sqrt()),
            ("std", report::std_dev(&maxima)),
        ],
    );
    Ok(r)
}

/// Sampling ratio of level-`k` sections over the nodes of a level-`m`
/// configuration, `m >= k`, plus the witness section of level `k` built
/// against those nodes (CP1 only).
pub fn oversampling_experiment(
    space_k: &SectionSpace,
    config_m: &Configuration,
    ens: &GaussianEnsemble,
    trials: usize,
    eps: f64,
) -> Result<ExperimentReport> {
    check_trials(trials)?;
    if ens.space != *space_k || space_k.model() != config_m.model() {
        return Err(Error::SpaceMismatch);
    }
    let (k, m) = (space_k.k(), config_m.k());
    if m < k {
        return Err(Error::LevelMismatch { k, m });
    }
    let ratios = sampling_ratios(ens, &config_m.points, trials);
    let witness = match space_k.model() {
        crate::geometry::Model::Cp1 => {
            interpolation::default_witness(space_k, &config_m.points, eps, ens.master_seed)?.1
        }
        crate::geometry::Model::Cp1xCp1 => f64::NAN,
    };
    let worst = ratios.iter().copied().fold(witness.max(0.0), f64::max);
    let mut r = ens.report("oversample", trials).param("m", m).param("eps", eps);
    push_summary(&mut r, "ratio", report::summary("rho", &ratios));
    r.push_row("worst", [("witness_ratio", witness), ("worst_ratio", worst)]);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Model;

    #[test]
    fn samples_are_reproducible() {
        let ens = GaussianEnsemble::new(SectionSpace::new(Model::Cp1, 8), 3);
        assert_eq!(ens.sample_section(17), ens.sample_section(17));
        assert_ne!(ens.sample_section(17), ens.sample_section(18));
    }

    #[test]
    fn sampler_moments() {
        let trials = 10_000;
        let ens = GaussianEnsemble::new(SectionSpace::new(Model::Cp1, 8), 1);
        let n = ens.space.dim();
        let samples = ens.samples(trials);
        let norms: Vec<f64> = samples.iter().map(|s| s.norm_sq()).collect();
        assert!((report::mean(&norms) - 1.0).abs() < 0.03);
        let nf = n as f64;
        for (i, j) in [(0, 1), (2, 7), (4, 5)] {
            let c: Complex64 = samples.iter().map(|s| s.coeffs()[i] * s.coeffs()[j].conj()).sum::<Complex64>() / trials as f64;
            assert!(c.norm() < 3.0 / ((trials as f64).sqrt() * nf));
        }
    }

    #[test]
    fn too_few_trials() {
        let ens = GaussianEnsemble::new(SectionSpace::new(Model::Cp1, 4), 1);
        assert!(matches!(sup_norm_experiment(&ens, 0), Err(Error::InsufficientTrials { .. })));
    }

    #[test]
    fn covariance_examples() {
        let space = SectionSpace::new(Model::Cp1, 2);
        let p = interpolation::cp1_point([0.0, 0.0, 1.0]);
        let q = interpolation::cp1_point([0.0, 0.0, -1.0]);
        let c = Configuration::unchecked(&space, vec![p, q, p]).unwrap();
        let r = covariance_check(&space, &c, &[0, 1]).unwrap();
        assert!((r.stat("pairs", "min_l").unwrap() - 2.0).abs() < 1e-15);
        let r = covariance_check(&space, &c, &[0, 2]).unwrap();
        assert!(r.stat("pairs", "min_l").unwrap().abs() < 1e-12);
    }

    #[test]
    fn basis_section_l2_ratio_closed_form() {
        // |S_0|^2 is 2 at the north pole and 0 at the south pole
        let space = SectionSpace::new(Model::Cp1, 1);
        let nodes = vec![interpolation::cp1_point([0.0, 0.0, 1.0]), interpolation::cp1_point([0.0, 0.0, -1.0])];
        assert!((l2_ratio(&space.basis_section(0), &nodes) - 1.0).abs() < 1e-15);
    }
}
