//! `fekete-lab` command-line front end.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 invalid configuration,
//! 3 solver non-convergence, 4 cache miss under `--no-solve`. Errors are
//! written to stderr as one JSON object.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cache::Cache;
use crate::constants;
use crate::error::Error;
use crate::fekete::{self, Configuration, SolverOptions};
use crate::geometry::Model;
use crate::interpolation;
use crate::random::{self, GaussianEnsemble};
use crate::report::ExperimentReport;
use crate::sections::{self, SectionSpace};

/// Content hash of the crate sources this binary was built from.
pub const CODE_HASH: &str = env!("FEKETE_LAB_CODE_HASH");

/// Environment variable that overrides `--cache-dir`.
pub const CACHE_ENV: &str = "FEKETE_LAB_CACHE";

const MAX_K_CP1: u32 = 128;
const MAX_K_BERGMAN: u32 = 64;
const DEFAULT_TRIALS: usize = 200;
const DEFAULT_A: f64 = 1.5;
const DEFAULT_R_SCALE: f64 = 1.0;
const DEFAULT_CACHE_DIR: &str = "fekete-cache";
const DEFAULT_OUT_DIR: &str = "reports";

#[derive(Parser, Debug)]
#[command(name = "fekete-lab", version, about = "Fekete points, Lebesgue constants and random sections on CP1 and CP1xCP1")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Args, Debug, Default)]
struct Flags {
    /// Model geometry: cp1 or cp1xcp1.
    #[arg(long, global = true)]
    model: Option<String>,
    /// Line bundle power.
    #[arg(long, global = true, allow_hyphen_values = true)]
    k: Option<i64>,
    /// Comma-separated list of powers; overrides --k.
    #[arg(long, global = true, allow_hyphen_values = true)]
    k_list: Option<String>,
    /// Random starts for the Fekete solver.
    #[arg(long, global = true, allow_hyphen_values = true)]
    starts: Option<i64>,
    /// Monte Carlo trials.
    #[arg(long, global = true, allow_hyphen_values = true)]
    trials: Option<i64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Witness ball parameter, in (0, 1).
    #[arg(long, global = true, allow_hyphen_values = true)]
    eps: Option<f64>,
    /// Oversampling factor, at least 1.
    #[arg(long, global = true, allow_hyphen_values = true)]
    a: Option<f64>,
    /// Cap radius scale for equidistribution.
    #[arg(long, global = true, allow_hyphen_values = true)]
    r_scale: Option<f64>,
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true, allow_hyphen_values = true)]
    threads: Option<i64>,
    /// Fail with exit code 4 instead of solving when a configuration is not cached.
    #[arg(long, global = true)]
    no_solve: bool,
    /// Validate and print the plan without computing.
    #[arg(long, global = true)]
    dry_run: bool,
    /// Run experiments against configurations that failed certification.
    #[arg(long, global = true)]
    allow_uncertified: bool,
    /// JSON file with run parameters; command-line flags take precedence.
    /// Besides the flag names it accepts the solver settings `max_iters` and
    /// `grad_tol`.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Fekete configurations.
    #[command(subcommand)]
    Fekete(FeketeCmd),
    /// Lebesgue constant of the cached Fekete configuration.
    Lebesgue,
    /// Witness section with a large sup-to-node ratio.
    Witness,
    /// Gaussian random section experiments.
    #[command(subcommand)]
    Random(RandomCmd),
    /// Sampling ratio over the Fekete nodes of level ceil(a k).
    Oversample,
    /// Diagnostics.
    #[command(subcommand)]
    Diag(DiagCmd),
    /// Configuration cache.
    #[command(subcommand)]
    Cache(CacheCmd),
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum FeketeCmd {
    /// Solve (or load) and cache Fekete configurations.
    Solve,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum RandomCmd {
    Sup,
    Ratio,
    L2,
    Max,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum DiagCmd {
    Separation,
    Equidist,
    Bergman,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum CacheCmd {
    Ls,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Fekete(FeketeCmd::Solve) => "fekete solve",
            Command::Lebesgue => "lebesgue",
            Command::Witness => "witness",
            Command::Random(RandomCmd::Sup) => "random sup",
            Command::Random(RandomCmd::Ratio) => "random ratio",
            Command::Random(RandomCmd::L2) => "random l2",
            Command::Random(RandomCmd::Max) => "random max",
            Command::Oversample => "oversample",
            Command::Diag(DiagCmd::Separation) => "diag separation",
            Command::Diag(DiagCmd::Equidist) => "diag equidist",
            Command::Diag(DiagCmd::Bergman) => "diag bergman",
            Command::Cache(CacheCmd::Ls) => "cache ls",
        }
    }

    fn needs_k(self) -> bool {
        !matches!(self, Command::Cache(_))
    }
}

/// Parameters accepted in a `--config` file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    model: Option<String>,
    k: Option<i64>,
    k_list: Option<Vec<i64>>,
    starts: Option<i64>,
    trials: Option<i64>,
    seed: Option<u64>,
    eps: Option<f64>,
    a: Option<f64>,
    r_scale: Option<f64>,
    cache_dir: Option<PathBuf>,
    out_dir: Option<PathBuf>,
    threads: Option<i64>,
    no_solve: Option<bool>,
    allow_uncertified: Option<bool>,
    max_iters: Option<i64>,
    grad_tol: Option<f64>,
}

/// Fully resolved and validated run parameters, embedded in every artifact.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub model: Model,
    pub k: Vec<u32>,
    pub starts: Option<usize>,
    pub max_iters: usize,
    pub grad_tol: f64,
    pub trials: usize,
    pub seed: u64,
    pub eps: f64,
    pub a: f64,
    pub r_scale: f64,
    pub cache_dir: PathBuf,
    pub out_dir: PathBuf,
    pub threads: Option<usize>,
    pub no_solve: bool,
    pub allow_uncertified: bool,
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    fn validation(message: impl Into<String>) -> Self {
        Self { code: 2, kind: "validation", message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::NonConvergence { .. } => (3, "non_convergence"),
            Error::Domain(_)
            | Error::InsufficientTrials { .. }
            | Error::LevelMismatch { .. }
            | Error::ModelMismatch(_)
            | Error::CountMismatch { .. } => (2, "validation"),
            Error::Uncertified => (1, "uncertified"),
            Error::Schema(_) => (1, "schema"),
            Error::Io(_) => (1, "io"),
            _ => (1, "runtime"),
        };
        Self { code, kind, message: e.to_string() }
    }
}

fn positive(name: &str, v: Option<i64>) -> Result<Option<usize>, CliError> {
    match v {
        None => Ok(None),
        Some(x) if x >= 1 => Ok(Some(x as usize)),
        Some(x) => Err(CliError::validation(format!("--{name} must be at least 1, got {x}"))),
    }
}

fn resolve(command: Command, flags: &Flags) -> Result<RunConfig, CliError> {
    let file = match &flags.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::validation(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str::<FileConfig>(&text)
                .map_err(|e| CliError::validation(format!("{}: {e}", path.display())))?
        }
        None => FileConfig::default(),
    };
    let model_name = flags.model.clone().or(file.model).unwrap_or_else(|| "cp1".into());
    let model: Model = model_name.parse().map_err(|e: Error| CliError::validation(e.to_string()))?;

    let ks: Vec<i64> = if let Some(list) = &flags.k_list {
        list.split(',')
            .map(|s| s.trim().parse::<i64>().map_err(|_| CliError::validation(format!("bad --k-list entry {s:?}"))))
            .collect::<Result<_, _>>()?
    } else if let Some(k) = flags.k {
        vec![k]
    } else if let Some(list) = file.k_list {
        list
    } else {
        file.k.into_iter().collect()
    };
    if command.needs_k() && ks.is_empty() {
        return Err(CliError::validation("--k or --k-list is required"));
    }
    let max_k = match (command, model) {
        (Command::Diag(DiagCmd::Bergman), _) => MAX_K_BERGMAN,
        (_, Model::Cp1) => MAX_K_CP1,
        (_, Model::Cp1xCp1) => constants::PRODUCT_MAX_K,
    };
    let k = ks
        .iter()
        .map(|&k| {
            if (1..=max_k as i64).contains(&k) {
                Ok(k as u32)
            } else {
                Err(CliError::validation(format!("k = {k} outside 1..={max_k} for {model} {}", command.name())))
            }
        })
        .collect::<Result<Vec<_>, _>>()?;

    let trials = positive("trials", flags.trials.or(file.trials))?.unwrap_or(DEFAULT_TRIALS);
    if matches!(command, Command::Random(_) | Command::Oversample) && trials < constants::MIN_TRIALS {
        return Err(CliError::validation(format!("--trials must be at least {}, got {trials}", constants::MIN_TRIALS)));
    }
    let eps = flags.eps.or(file.eps).unwrap_or(constants::WITNESS_EPS);
    if !(eps > 0.0 && eps < 1.0) {
        return Err(CliError::validation(format!("--eps must lie in (0, 1), got {eps}")));
    }
    let a = flags.a.or(file.a).unwrap_or(DEFAULT_A);
    if !(a >= 1.0 && a.is_finite()) {
        return Err(CliError::validation(format!("--a must be at least 1, got {a}")));
    }
    let r_scale = flags.r_scale.or(file.r_scale).unwrap_or(DEFAULT_R_SCALE);
    if !(r_scale > 0.0 && r_scale.is_finite()) {
        return Err(CliError::validation(format!("--r-scale must be positive, got {r_scale}")));
    }
    if model == Model::Cp1xCp1 && matches!(command, Command::Witness | Command::Oversample) {
        return Err(CliError::validation(format!("{} is available on cp1 only", command.name())));
    }
    if command == Command::Oversample {
        for &k in &k {
            if oversample_level(k, a) > MAX_K_CP1 {
                return Err(CliError::validation(format!("ceil(a k) exceeds {MAX_K_CP1} for k = {k}")));
            }
        }
    }
    let grad_tol = file.grad_tol.unwrap_or(constants::DEFAULT_GRAD_TOL);
    if !(grad_tol > 0.0 && grad_tol.is_finite()) {
        return Err(CliError::validation(format!("grad_tol must be positive, got {grad_tol}")));
    }
    let cache_dir = std::env::var_os(CACHE_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
        .or_else(|| flags.cache_dir.clone())
        .or(file.cache_dir)
        .unwrap_or_else(|| DEFAULT_CACHE_DIR.into());
    Ok(RunConfig {
        command: command.name().to_string(),
        model,
        k,
        starts: positive("starts", flags.starts.or(file.starts))?,
        max_iters: positive("max_iters", file.max_iters)?.unwrap_or(constants::DEFAULT_MAX_ITERS),
        grad_tol,
        trials,
        seed: flags.seed.or(file.seed).unwrap_or(constants::DEFAULT_SEED),
        eps,
        a,
        r_scale,
        cache_dir,
        out_dir: flags.out_dir.clone().or(file.out_dir).unwrap_or_else(|| DEFAULT_OUT_DIR.into()),
        threads: positive("threads", flags.threads.or(file.threads))?,
        no_solve: flags.no_solve || file.no_solve.unwrap_or(false),
        allow_uncertified: flags.allow_uncertified || file.allow_uncertified.unwrap_or(false),
    })
}

impl PartialEq for Command {
    fn eq(&self, other: &Self) -> bool {
        self.name() == other.name()
    }
}

fn oversample_level(k: u32, a: f64) -> u32 {
    (a * k as f64 - 1e-9).ceil() as u32
}

struct Runner<'a> {
    rc: &'a RunConfig,
    cache: Cache,
    out: &'a mut dyn Write,
}

impl Runner<'_> {
    fn emit(&mut self, v: Value) -> Result<(), CliError> {
        writeln!(self.out, "{v}").map_err(|e| CliError::from(Error::from(e)))
    }

    fn solver_options(&self) -> SolverOptions {
        SolverOptions {
            starts: self.rc.starts,
            max_iters: self.rc.max_iters,
            grad_tol: self.rc.grad_tol,
            ..SolverOptions::with_seed(self.rc.seed)
        }
    }

    /// Cached configuration for `(model, k)`, solving and caching it when
    /// absent unless `--no-solve` is set.
    fn configuration(&mut self, k: u32) -> Result<Configuration, CliError> {
        let model = self.rc.model;
        let config = match self.cache.load(model, k)? {
            Some(c) => c,
            None if self.rc.no_solve => {
                return Err(CliError {
                    code: 4,
                    kind: "missing_cache",
                    message: format!("no cached configuration for {model} k={k} in {}", self.cache.dir().display()),
                })
            }
            None => {
                // Reload so a fresh solve and a cache hit see the same bits.
                let c = fekete::solve_fekete(&SectionSpace::new(model, k), &self.solver_options())?;
                self.cache.save(&c)?;
                self.cache.load(model, k)?.ok_or_else(|| CliError {
                    code: 1,
                    kind: "io",
                    message: format!("cache entry for {model} k={k} vanished after writing"),
                })?
            }
        };
        Ok(config)
    }

    fn certified(&mut self, k: u32) -> Result<Configuration, CliError> {
        let c = self.configuration(k)?;
        if !c.is_certified() && !self.rc.allow_uncertified {
            return Err(CliError {
                code: 1,
                kind: "uncertified",
                message: format!(
                    "{} k={k} has max Lagrange sup {} (pass --allow-uncertified to continue)",
                    c.model(),
                    c.certificate.max_lagrange_sup
                ),
            });
        }
        Ok(c)
    }

    fn write_report(&mut self, report: ExperimentReport) -> Result<(), CliError> {
        let generated = chrono::Utc::now().to_rfc3339();
        let rc = serde_json::to_value(self.rc).expect("serializable");
        let header = vec![
            ("generated".to_string(), generated.clone()),
            ("code_hash".to_string(), CODE_HASH.to_string()),
            ("run_config".to_string(), rc.to_string()),
        ];
        let extra = json!({ "generated": generated, "code_hash": CODE_HASH, "run_config": rc });
        let (json_path, csv_path) = report.write(&self.rc.out_dir, &header, &extra)?;
        self.emit(json!({
            "experiment": report.experiment,
            "model": report.model,
            "k": report.k,
            "json": json_path,
            "csv": csv_path,
        }))
    }

    fn run(&mut self, command: Command) -> Result<(), CliError> {
        if command == Command::Cache(CacheCmd::Ls) {
            return self.cache_ls();
        }
        for k in self.rc.k.clone() {
            let space = SectionSpace::new(self.rc.model, k);
            let report = match command {
                Command::Fekete(FeketeCmd::Solve) => self.solve(k)?,
                Command::Lebesgue => self.lebesgue(k)?,
                Command::Witness => {
                    let c = self.certified(k)?;
                    witness_report(&c, self.rc.eps, self.rc.seed)?
                }
                Command::Random(RandomCmd::Sup) => {
                    random::sup_norm_experiment(&GaussianEnsemble::new(space, self.rc.seed), self.rc.trials)?
                }
                Command::Random(sub) => {
                    let c = self.certified(k)?;
                    let ens = GaussianEnsemble::new(space, self.rc.seed);
                    match sub {
                        RandomCmd::Ratio => random::sampling_ratio_experiment(&ens, &c, self.rc.trials)?,
                        RandomCmd::L2 => random::l2_sampling_experiment(&ens, &c, self.rc.trials)?,
                        _ => random::fekete_max_experiment(&ens, &c, self.rc.trials)?,
                    }
                }
                Command::Oversample => {
                    let m = oversample_level(k, self.rc.a);
                    let c = self.certified(m)?;
                    let ens = GaussianEnsemble::new(space.clone(), self.rc.seed);
                    random::oversampling_experiment(&space, &c, &ens, self.rc.trials, self.rc.eps)?
                        .param("a", self.rc.a)
                }
                Command::Diag(DiagCmd::Separation) => {
                    let c = self.certified(k)?;
                    separation_report(&c)?
                }
                Command::Diag(DiagCmd::Equidist) => {
                    let c = self.certified(k)?;
                    fekete::cap_discrepancy(&c, self.rc.r_scale)?
                }
                Command::Diag(DiagCmd::Bergman) => bergman_report(&space, self.rc.seed),
                Command::Cache(_) => unreachable!("handled above"),
            };
            self.write_report(report)?;
        }
        Ok(())
    }

    fn solve(&mut self, k: u32) -> Result<ExperimentReport, CliError> {
        let c = self.configuration(k)?;
        let mut r = ExperimentReport::new("fekete", c.model(), k, c.solver_meta.seed)
            .param("starts", c.solver_meta.starts)
            .param("cache_file", self.cache.path(c.model(), k).display().to_string());
        let mut stats = vec![
            ("n", c.space.dim() as f64),
            ("log_vdm", c.log_vdm),
            ("max_lagrange_sup", c.certificate.max_lagrange_sup),
            ("grad_norm", c.certificate.grad_norm),
            ("certified", if c.is_certified() { 1.0 } else { 0.0 }),
            ("min_separation", fekete::min_separation(&c)),
            ("iterations", c.solver_meta.iterations as f64),
        ];
        if c.model() == Model::Cp1 {
            stats.push(("pair_energy", fekete::pair_energy_oracle(&c.points)?));
        }
        r.push_row("configuration", stats);
        Ok(r)
    }

    fn lebesgue(&mut self, k: u32) -> Result<ExperimentReport, CliError> {
        let c = self.certified(k)?;
        let basis = interpolation::lagrange_sections(&c)?;
        let l = interpolation::lebesgue_constant(&basis);
        let n = c.space.dim() as f64;
        let argmax: Vec<String> = l.argmax.to_reals().iter().map(|x| x.to_string()).collect();
        append_lebesgue_csv(
            &self.rc.out_dir.join("lebesgue.csv"),
            &[
                c.model().name().to_string(),
                k.to_string(),
                c.space.dim().to_string(),
                l.value.to_string(),
                (l.value / n).to_string(),
                (l.value / n.ln()).to_string(),
                argmax.join(" "),
                l.grid_size.to_string(),
            ],
        )?;
        let mut r = ExperimentReport::new("lebesgue", c.model(), k, c.solver_meta.seed);
        r.push_row(
            "lebesgue",
            [
                ("n", n),
                ("lambda", l.value),
                ("lambda_over_n", l.value / n),
                ("lambda_over_log_n", l.value / n.ln()),
                ("grid_size", l.grid_size as f64),
                ("stable", if l.stable { 1.0 } else { 0.0 }),
                ("collocation_condition_number", basis.collocation_condition_number),
            ],
        );
        Ok(r)
    }

    fn cache_ls(&mut self) -> Result<(), CliError> {
        for (model, k) in self.cache.entries()? {
            let line = match self.cache.load(model, k) {
                Ok(Some(c)) => json!({
                    "model": model,
                    "k": k,
                    "n": c.space.dim(),
                    "log_vdm": c.log_vdm,
                    "certified": c.is_certified(),
                    "max_lagrange_sup": c.certificate.max_lagrange_sup,
                    "path": self.cache.path(model, k),
                }),
                Ok(None) => continue,
                Err(e) => json!({ "model": model, "k": k, "error": e.to_string() }),
            };
            self.emit(line)?;
        }
        Ok(())
    }
}

const LEBESGUE_COLUMNS: [&str; 8] =
    ["model", "k", "N", "lambda", "lambda_over_N", "lambda_over_logN", "argmax", "grid_size"];

fn append_lebesgue_csv(path: &Path, record: &[String]) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(Error::from)?;
    }
    let fresh = !path.exists();
    let file = fs::OpenOptions::new().create(true).append(true).open(path).map_err(Error::from)?;
    let mut w = csv::Writer::from_writer(file);
    let io = |e: csv::Error| CliError::from(Error::from(std::io::Error::other(e.to_string())));
    if fresh {
        w.write_record(LEBESGUE_COLUMNS).map_err(io)?;
    }
    w.write_record(record).map_err(io)?;
    w.flush().map_err(|e| CliError::from(Error::from(e)))?;
    Ok(())
}

/// Witness section for a certified configuration with the default center rule.
pub fn witness_report(c: &Configuration, eps: f64, seed: u64) -> crate::error::Result<ExperimentReport> {
    let (_, ratio, d) = interpolation::default_witness(&c.space, &c.points, eps, seed)?;
    let mut r = ExperimentReport::new("witness", c.model(), c.k(), seed).param("eps", eps);
    r.push_row(
        "witness",
        [
            ("ratio", ratio),
            ("degree", d.degree as f64),
            ("radius", d.radius),
            ("vanishing_nodes", d.vanishing_nodes.len() as f64),
            ("vanishing_factor_at_center", d.vanishing_factor_at_center),
            ("sup", d.sup.value),
            ("sup_stable", if d.sup.stable { 1.0 } else { 0.0 }),
            ("node_max", d.node_max),
        ],
    );
    Ok(r)
}

/// Separation constant, separated-subset density at `rho = k^{1/4} / sqrt k`
/// and the increment-variance bound on that subset.
pub fn separation_report(c: &Configuration) -> crate::error::Result<ExperimentReport> {
    let k = c.k() as f64;
    let rho = k.powf(0.25) / k.sqrt();
    let subset = fekete::separated_subset(c, rho);
    let cov = random::covariance_check(&c.space, c, &subset)?;
    let mut r = ExperimentReport::new("separation", c.model(), c.k(), c.solver_meta.seed);
    r.push_row(
        "separation",
        [
            ("min_separation", fekete::min_separation(c)),
            ("rho", rho),
            ("subset_size", subset.len() as f64),
            ("subset_density", subset.len() as f64 / c.points.len() as f64),
        ],
    );
    r.rows.extend(cov.rows.into_iter().map(|mut row| {
        row.seed = r.seed;
        row
    }));
    Ok(r)
}

pub fn bergman_report(space: &SectionSpace, seed: u64) -> ExperimentReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = sections::bergman_diagnostics(space, 100, &mut rng);
    let mut r = ExperimentReport::new("bergman", space.model(), space.k(), seed);
    let mut stats = vec![
        ("diagonal_max_error", d.diagonal_max_error),
        ("diagonal_sum_max_relative_error", d.diagonal_sum_max_relative_error),
        ("closed_form_max_error", d.closed_form_max_error),
        ("offdiag_max_ratio", d.offdiag_max_ratio),
        ("offdiag_const", constants::OFFDIAG_CONST),
    ];
    if let Some(e) = d.reproducing_max_error {
        stats.push(("reproducing_max_error", e));
    }
    r.push_row("bergman", stats);
    r
}

fn plan(rc: &RunConfig) -> Vec<Value> {
    let cache = Cache::new(&rc.cache_dir);
    rc.k.iter()
        .map(|&k| {
            let level = if rc.command == "oversample" { oversample_level(k, rc.a) } else { k };
            let needs_config = !matches!(rc.command.as_str(), "random sup" | "diag bergman" | "cache ls");
            json!({
                "command": rc.command,
                "model": rc.model,
                "k": k,
                "n": sections::dim(rc.model, k),
                "configuration_level": needs_config.then_some(level),
                "cached": needs_config.then(|| cache.path(rc.model, level).exists()),
            })
        })
        .collect()
}

fn report_error(err: &mut dyn Write, e: &CliError) {
    let _ = writeln!(err, "{}", json!({ "error": e.kind, "message": e.message, "exit_code": e.code }));
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_from<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand) {
                let _ = write!(out, "{}", e.render());
                return 0;
            }
            report_error(err, &CliError::validation(e.render().to_string().trim().to_string()));
            return 2;
        }
    };
    let rc = match resolve(cli.command, &cli.flags) {
        Ok(rc) => rc,
        Err(e) => {
            report_error(err, &e);
            return e.code;
        }
    };
    if cli.flags.dry_run {
        let _ = writeln!(out, "{}", json!({ "dry_run": true, "run_config": rc, "plan": plan(&rc) }));
        return 0;
    }
    if let Some(n) = rc.threads {
        // a second call in the same process keeps the existing pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let mut runner = Runner { rc: &rc, cache: Cache::new(&rc.cache_dir), out };
    match runner.run(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            report_error(err, &e);
            e.code
        }
    }
}

pub fn run() -> i32 {
    run_from(std::env::args_os(), &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_from(std::iter::once("fekete-lab").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn validation_failures_exit_2() {
        for args in [
            &["lebesgue", "--model", "cp1", "--k", "-1"][..],
            &["random", "ratio", "--k", "16", "--trials", "0"],
            &["witness", "--k", "8", "--eps", "1.5"],
            &["lebesgue", "--model", "cp2", "--k", "3"],
            &["fekete", "solve", "--model", "cp1xcp1", "--k", "9"],
            &["fekete", "solve"],
            &["bogus"],
        ] {
            let (code, _, err) = run_args(args);
            assert_eq!(code, 2, "{args:?}");
            let v: Value = serde_json::from_str(err.trim()).unwrap();
            assert_eq!(v["error"], "validation");
        }
    }

    #[test]
    fn dry_run_prints_plan() {
        let (code, out, _) = run_args(&["oversample", "--k-list", "8,16", "--a", "1.5", "--dry-run"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(out.trim()).unwrap();
        assert_eq!(v["plan"][1]["configuration_level"], 24);
        assert_eq!(v["run_config"]["k"], json!([8, 16]));
    }

    #[test]
    fn config_file_rejects_unknown_keys() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.json");
        fs::write(&path, r#"{"k": 4, "colour": "red"}"#).unwrap();
        let (code, _, _) = run_args(&["lebesgue", "--config", path.to_str().unwrap(), "--dry-run"]);
        assert_eq!(code, 2);
        fs::write(&path, r#"{"k": 4, "trials": 60}"#).unwrap();
        let (code, out, _) = run_args(&["random", "sup", "--config", path.to_str().unwrap(), "--dry-run"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("\"trials\":60"));
    }
}
