//! Fekete configurations: maximizers of `log |det(B_i(x_j))|`.
//!
//! The solver runs multi-start projected gradient ascent on the product of
//! unit spheres, with the gradient from Jacobi's formula. A polish stage
//! then moves single points to the maximum of their Lagrange section, which
//! multiplies `|vdm|` by exactly that maximum. Acceptance is decided by the
//! certificate `max_j sup |l_j| <= 1 + tol`; Fekete points are not unique,
//! so positions are never compared.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants;
use crate::error::{Error, Result};
use crate::geometry::{cap_measure, fibonacci_grid, uniform_sample, Model, Point};
use crate::interpolation;
use crate::linalg::Lu;
use crate::report::ExperimentReport;
use crate::search::{self, Gradient};
use crate::sections::SectionSpace;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub max_lagrange_sup: f64,
    pub grad_norm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverMeta {
    pub seed: u64,
    pub starts: usize,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Number of random starts; `None` means `8 + ceil(N/4)`.
    pub starts: Option<usize>,
    pub max_iters: usize,
    pub grad_tol: f64,
    pub seed: u64,
    pub polish: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            starts: None,
            max_iters: constants::DEFAULT_MAX_ITERS,
            grad_tol: constants::DEFAULT_GRAD_TOL,
            seed: constants::DEFAULT_SEED,
            polish: true,
        }
    }
}

impl SolverOptions {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }
}

/// An ordered point configuration with its Vandermonde value and
/// certificate.
#[derive(Debug, Clone)]
pub struct Configuration {
    pub space: SectionSpace,
    pub points: Vec<Point>,
    pub log_vdm: f64,
    pub certificate: Certificate,
    pub solver_meta: SolverMeta,
}

impl Configuration {
    /// Evaluates `log_vdm`, the projected gradient norm and the Lagrange
    /// certificate for a given point set.
    pub fn from_points(space: &SectionSpace, points: Vec<Point>, meta: SolverMeta) -> Result<Self> {
        let (log_vdm, grads) = log_vdm_and_grad(space, &points)?;
        let grad_norm = total_norm(&grads);
        let basis = interpolation::lagrange_coefficients(space, &points)?;
        let sups = space.sup_norm_many(&basis);
        let max_lagrange_sup = sups.iter().map(|s| s.value).fold(0.0, f64::max);
        Ok(Self {
            space: space.clone(),
            points,
            log_vdm,
            certificate: Certificate { max_lagrange_sup, grad_norm },
            solver_meta: meta,
        })
    }

    /// Configuration without certificate evaluation; singular point sets
    /// are allowed and get `log_vdm = -inf`.
    pub fn unchecked(space: &SectionSpace, points: Vec<Point>) -> Result<Self> {
        let log_vdm = space.vandermonde_lognorm(&points)?;
        Ok(Self {
            space: space.clone(),
            points,
            log_vdm,
            certificate: Certificate { max_lagrange_sup: f64::INFINITY, grad_norm: f64::INFINITY },
            solver_meta: SolverMeta { seed: 0, starts: 0, iterations: 0 },
        })
    }

    pub fn model(&self) -> Model {
        self.space.model()
    }

    pub fn k(&self) -> u32 {
        self.space.k()
    }

    pub fn is_certified(&self) -> bool {
        self.certificate.max_lagrange_sup <= 1.0 + constants::CERTIFICATE_TOL
    }
}

fn total_norm(g: &[Gradient]) -> f64 {
    g.iter().map(search::gradient_norm_sq).sum::<f64>().sqrt()
}

/// `log |vdm|` and, per point, its projected gradient (Jacobi's formula
/// `d log det M = tr(M^{-1} dM)`).
pub fn log_vdm_and_grad(space: &SectionSpace, points: &[Point]) -> Result<(f64, Vec<Gradient>)> {
    let m = space.collocation(points)?;
    let lu = Lu::factor(&m);
    if lu.is_singular() {
        return Err(Error::Singular);
    }
    let inv = lu.inverse();
    let grads = points
        .iter()
        .enumerate()
        .map(|(j, p)| {
            let (_, derivs) = space.eval_basis_jet(p);
            let w = inv.row(j);
            let mut g: Gradient = derivs
                .iter()
                .map(|[d0, d1]| {
                    let g0: num_complex::Complex64 = w.iter().zip(d0).map(|(a, b)| a * b).sum();
                    let g1: num_complex::Complex64 = w.iter().zip(d1).map(|(a, b)| a * b).sum();
                    [g0.conj(), g1.conj()]
                })
                .collect();
            search::project_tangent(p, &mut g);
            g
        })
        .collect();
    Ok((lu.log_abs_det(), grads))
}

fn value(space: &SectionSpace, points: &[Point]) -> f64 {
    space.vandermonde_lognorm(points).unwrap_or(f64::NEG_INFINITY)
}

fn retract_all(points: &[Point], grads: &[Gradient], t: f64) -> Vec<Point> {
    points.iter().zip(grads).map(|(p, g)| p.retract(g, t)).collect()
}

/// Real inner product of two per-point tangent fields.
fn field_dot(a: &[Gradient], b: &[Gradient]) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(ga, gb)| ga.iter().zip(gb))
        .map(|(x, y)| (x[0].conj() * y[0] + x[1].conj() * y[1]).re)
        .sum()
}

fn field_axpy(y: &mut [Gradient], a: f64, x: &[Gradient]) {
    for (gy, gx) in y.iter_mut().zip(x) {
        for (u, v) in gy.iter_mut().zip(gx) {
            u[0] += a * v[0];
            u[1] += a * v[1];
        }
    }
}

fn field_scale(x: &[Gradient], a: f64) -> Vec<Gradient> {
    x.iter().map(|g| g.iter().map(|u| [u[0] * a, u[1] * a]).collect()).collect()
}

/// Moves a tangent field from `from` to `to`: rotate each factor by the
/// phase that aligns the two representatives, then project.
fn transport(from: &[Point], to: &[Point], field: &[Gradient]) -> Vec<Gradient> {
    from.iter()
        .zip(to)
        .zip(field)
        .map(|((a, b), g)| {
            let mut out: Gradient = a
                .factors()
                .iter()
                .zip(b.factors())
                .zip(g)
                .map(|((p, q), u)| {
                    let rot = phase_to(p, q);
                    [u[0] * rot, u[1] * rot]
                })
                .collect();
            search::project_tangent(b, &mut out);
            out
        })
        .collect()
}

/// Unit complex `c` with `c p` closest to `q`.
fn phase_to(p: &crate::geometry::ProjPoint, q: &crate::geometry::ProjPoint) -> num_complex::Complex64 {
    let (u, v) = (p.coords(), q.coords());
    let c = v[0] * u[0].conj() + v[1] * u[1].conj();
    if c.norm() > 0.0 {
        c / c.norm()
    } else {
        num_complex::Complex64::new(1.0, 0.0)
    }
}

/// Tangent displacement at `to` pointing away from `from`.
fn displacement(from: &[Point], to: &[Point]) -> Vec<Gradient> {
    from.iter()
        .zip(to)
        .map(|(a, b)| {
            let mut d: Gradient = a
                .factors()
                .iter()
                .zip(b.factors())
                .map(|(p, q)| {
                    let rot = phase_to(p, q);
                    let (u, v) = (p.coords(), q.coords());
                    [v[0] - rot * u[0], v[1] - rot * u[1]]
                })
                .collect();
            search::project_tangent(b, &mut d);
            d
        })
        .collect()
}

#[derive(Debug, Clone)]
struct Ascent {
    points: Vec<Point>,
    log_vdm: f64,
    grad_norm: f64,
    iterations: usize,
}

const LBFGS_MEMORY: usize = 12;

/// Riemannian L-BFGS ascent with backtracking. Curvature pairs are carried
/// along by [`transport`]. Steps pass an Armijo test while the expected gain
/// is resolvable in floating point; below that the value is flat to
/// round-off and a step is accepted when it shrinks the gradient.
fn ascend(space: &SectionSpace, start: Vec<Point>, opts: &SolverOptions) -> Result<Ascent> {
    let k = space.k().max(1) as f64;
    let mut x = start;
    let (mut fx, mut g) = log_vdm_and_grad(space, &x)?;
    let mut gn2 = field_dot(&g, &g);
    // pairs (s, y) with y = g_old - g_new, so s . y > 0 near a maximum
    let mut memory: std::collections::VecDeque<(Vec<Gradient>, Vec<Gradient>)> = Default::default();
    let mut iterations = 0;
    while gn2.sqrt() > opts.grad_tol && iterations < opts.max_iters {
        let mut dir = two_loop(&memory, &g).unwrap_or_else(|| field_scale(&g, 1.0 / k));
        let mut slope = field_dot(&dir, &g);
        if !(slope > 0.0) {
            memory.clear();
            dir = field_scale(&g, 1.0 / k);
            slope = gn2 / k;
        }
        let noise = 1e-13 * fx.abs().max(1.0);
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let y = retract_all(&x, &dir, t);
            let fy = value(space, &y);
            let gain = 1e-4 * t * slope;
            if fy >= fx + gain || (gain < noise && fy >= fx - noise) {
                if let Ok((_, gy)) = log_vdm_and_grad(space, &y) {
                    if fy >= fx + gain || field_dot(&gy, &gy) < gn2 {
                        accepted = Some((y, fy, gy));
                        break;
                    }
                }
            }
            t *= 0.5;
        }
        let Some((y, fy, gy)) = accepted else {
            if memory.is_empty() {
                break;
            }
            memory.clear();
            continue;
        };
        iterations += 1;
        let s = displacement(&x, &y);
        let mut yv = transport(&x, &y, &g);
        field_axpy(&mut yv, -1.0, &gy);
        for (ms, my) in memory.iter_mut() {
            *ms = transport(&x, &y, ms);
            *my = transport(&x, &y, my);
        }
        if field_dot(&s, &yv) > 1e-12 * field_dot(&s, &s).sqrt() * field_dot(&yv, &yv).sqrt() {
            if memory.len() == LBFGS_MEMORY {
                memory.pop_front();
            }
            memory.push_back((s, yv));
        }
        x = y;
        fx = fy.max(fx);
        g = gy;
        gn2 = field_dot(&g, &g);
    }
    fx = value(space, &x);
    Ok(Ascent { points: x, log_vdm: fx, grad_norm: gn2.sqrt(), iterations })
}

/// L-BFGS two-loop recursion; `None` without curvature pairs.
fn two_loop(memory: &std::collections::VecDeque<(Vec<Gradient>, Vec<Gradient>)>, g: &[Gradient]) -> Option<Vec<Gradient>> {
    let (s_last, y_last) = memory.back()?;
    let mut q = g.to_vec();
    let mut alphas = Vec::with_capacity(memory.len());
    for (s, y) in memory.iter().rev() {
        let rho = 1.0 / field_dot(y, s);
        let a = rho * field_dot(s, &q);
        field_axpy(&mut q, -a, y);
        alphas.push((a, rho));
    }
    let gamma = field_dot(s_last, y_last) / field_dot(y_last, y_last);
    let mut r = field_scale(&q, gamma);
    for ((s, y), (a, rho)) in memory.iter().zip(alphas.into_iter().rev()) {
        let b = rho * field_dot(y, &r);
        field_axpy(&mut r, a - b, s);
    }
    Some(r)
}

fn random_start(model: Model, n: usize, seed: u64, start: usize) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(start as u64);
    (0..n).map(|_| uniform_sample(model, &mut rng)).collect()
}

/// Best of several local maximizers of `log |vdm|`, polished and certified.
pub fn solve_fekete(space: &SectionSpace, opts: &SolverOptions) -> Result<Configuration> {
    let n = space.dim();
    if n < 2 {
        return Err(Error::Domain(format!("Fekete problem needs N >= 2, got N = {n}")));
    }
    if !(opts.grad_tol > 0.0) {
        return Err(Error::Domain("grad_tol must be positive".into()));
    }
    let starts = opts.starts.unwrap_or_else(|| constants::default_starts(n));
    if starts == 0 {
        return Err(Error::Domain("at least one start is required".into()));
    }
    let runs: Vec<Result<Ascent>> = (0..starts)
        .into_par_iter()
        .map(|s| ascend(space, random_start(space.model(), n, opts.seed, s), opts))
        .collect();
    let mut best: Option<Ascent> = None;
    let mut best_grad = f64::INFINITY;
    for run in runs.into_iter().flatten() {
        best_grad = best_grad.min(run.grad_norm);
        if run.grad_norm > opts.grad_tol {
            continue;
        }
        // strict comparison keeps the lowest start index on ties
        if best.as_ref().is_none_or(|b| run.log_vdm > b.log_vdm) {
            best = Some(run);
        }
    }
    let mut best = best.ok_or(Error::NonConvergence { grad_tol: opts.grad_tol, best: best_grad })?;
    if opts.polish {
        best = polish(space, best, opts)?;
    }
    let meta = SolverMeta { seed: opts.seed, starts, iterations: best.iterations };
    Configuration::from_points(space, best.points, meta)
}

/// Exchange stage: while some Lagrange section exceeds one in sup-norm,
/// move its node to the argmax and re-run the ascent.
fn polish(space: &SectionSpace, mut cur: Ascent, opts: &SolverOptions) -> Result<Ascent> {
    for _ in 0..constants::POLISH_ROUNDS {
        let basis = interpolation::lagrange_coefficients(space, &cur.points)?;
        let sups = space.sup_norm_many(&basis);
        let (j, worst) = sups
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.value.total_cmp(&b.1.value))
            .map(|(j, s)| (j, *s))
            .expect("nonempty");
        if worst.value <= 1.0 + constants::CERTIFICATE_TOL {
            break;
        }
        let mut moved = cur.points.clone();
        moved[j] = worst.argmax;
        let next = ascend(space, moved, opts)?;
        if next.grad_norm > opts.grad_tol || next.log_vdm <= cur.log_vdm {
            break;
        }
        let iterations = cur.iterations + next.iterations;
        cur = Ascent { iterations, ..next };
    }
    Ok(cur)
}

/// `sum_{i<j} log sin d(x_i, x_j)` on CP1.
///
/// By the factorization `det(a_j^{k-i} b_j^i) = prod_{i<j} (a_i b_j - a_j b_i)`
/// this equals `log |vdm| - sum_a log c_{k,a}` without any linear algebra.
pub fn pair_energy_oracle(points: &[Point]) -> Result<f64> {
    let cp1: Vec<_> = points
        .iter()
        .map(|p| p.as_cp1().copied().ok_or_else(|| Error::ModelMismatch(p.model().to_string())))
        .collect::<Result<_>>()?;
    let mut e = 0.0;
    for i in 0..cp1.len() {
        for j in i + 1..cp1.len() {
            e += cp1[i].wedge(&cp1[j]).ln();
        }
    }
    Ok(e)
}

/// `sqrt(k) * min_{i != j} d(x_i, x_j)`.
pub fn min_separation(config: &Configuration) -> f64 {
    let pts = &config.points;
    let mut d = f64::INFINITY;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            d = d.min(pts[i].distance(&pts[j]));
        }
    }
    (config.k() as f64).sqrt() * d
}

/// Maximum over `centers` of `|#(F ∩ B(x, r)) / N - cap(r)| / cap(r)` with
/// closed balls.
pub fn cap_relative_error(points: &[Point], model: Model, radius: f64, centers: &[Point]) -> Result<f64> {
    let cap = cap_measure(model, radius)?;
    if cap == 0.0 {
        return Err(Error::Domain("cap radius must be positive".into()));
    }
    let n = points.len() as f64;
    Ok(centers
        .iter()
        .map(|c| {
            let count = points.iter().filter(|p| p.distance(c) <= radius + 1e-12).count() as f64;
            (count / n - cap).abs() / cap
        })
        .fold(0.0, f64::max))
}

/// Quasi-uniform cap centers: Fibonacci lattice with about `count` nodes.
pub fn cap_centers(model: Model, count: usize) -> Vec<Point> {
    match model {
        Model::Cp1 => fibonacci_grid(model, count),
        Model::Cp1xCp1 => fibonacci_grid(model, (count as f64).sqrt().ceil() as usize),
    }
}

/// Equidistribution discrepancy at radius `r_k / sqrt(k)`, `r_k = r_scale k^{1/4}`.
pub fn cap_discrepancy(config: &Configuration, r_scale: f64) -> Result<ExperimentReport> {
    if !(r_scale > 0.0) {
        return Err(Error::Domain("r_scale must be positive".into()));
    }
    let k = config.k() as f64;
    let r_k = r_scale * k.powf(0.25);
    let radius = (r_k / k.sqrt()).min(config.model().diameter());
    let centers = cap_centers(config.model(), constants::CAP_CENTERS);
    let rel = cap_relative_error(&config.points, config.model(), radius, &centers)?;
    let mut report = ExperimentReport::new("equidist", config.model(), config.k(), config.solver_meta.seed)
        .param("r_scale", r_scale)
        .param("centers", centers.len());
    report.push_row(
        "cap",
        [
            ("r_k", r_k),
            ("radius", radius),
            ("cap_measure", cap_measure(config.model(), radius)?),
            ("max_relative_error", rel),
            ("relative_error_times_r_k", rel * r_k),
        ],
    );
    Ok(report)
}

/// Greedy maximal subset (in index order) with pairwise distances `>= rho`.
pub fn separated_subset(config: &Configuration, rho: f64) -> Vec<usize> {
    separated_indices(&config.points, rho)
}

pub fn separated_indices(points: &[Point], rho: f64) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    for (i, p) in points.iter().enumerate() {
        if chosen.iter().all(|&j| points[j].distance(p) >= rho) {
            chosen.push(i);
        }
    }
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ProjPoint;
    use num_complex::Complex64;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4};

    fn sphere_points(v: &[[f64; 3]]) -> Vec<Point> {
        v.iter().map(|&x| Point::Cp1(ProjPoint::from_sphere(x))).collect()
    }

    fn octahedron() -> Vec<Point> {
        sphere_points(&[
            [1.0, 0.0, 0.0],
            [-1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, -1.0, 0.0],
            [0.0, 0.0, 1.0],
            [0.0, 0.0, -1.0],
        ])
    }

    #[test]
    fn antipodal_pair_is_critical() {
        let space = SectionSpace::new(Model::Cp1, 1);
        let pts = sphere_points(&[[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]]);
        let (v, g) = log_vdm_and_grad(&space, &pts).unwrap();
        assert!((v - 2f64.ln()).abs() < 1e-15);
        assert!(total_norm(&g) < 1e-14);
    }

    #[test]
    fn repeated_point_is_singular() {
        let space = SectionSpace::new(Model::Cp1, 2);
        let p = sphere_points(&[[0.3, 0.2, 0.9], [1.0, 0.0, 0.0]]);
        let pts = vec![p[0], p[1], p[0]];
        assert!(matches!(log_vdm_and_grad(&space, &pts), Err(Error::Singular)));
    }

    #[test]
    fn pair_energy_examples() {
        assert!(pair_energy_oracle(&sphere_points(&[[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]])).unwrap().abs() < 1e-15);
        let e = pair_energy_oracle(&octahedron()).unwrap();
        assert!((e + 6.0 * 2f64.ln()).abs() < 1e-13);
        let prod = Point::Product([ProjPoint::from_sphere([0.0, 0.0, 1.0]); 2]);
        assert!(matches!(pair_energy_oracle(&[prod]), Err(Error::ModelMismatch(_))));
    }

    #[test]
    fn separation_examples() {
        let space = SectionSpace::new(Model::Cp1, 5);
        let c = Configuration::unchecked(&space, octahedron()).unwrap();
        assert!((min_separation(&c) - 5f64.sqrt() * FRAC_PI_4).abs() < 1e-12);
        let mut dup = octahedron();
        dup[5] = dup[0];
        let c = Configuration::unchecked(&space, dup).unwrap();
        assert_eq!(c.log_vdm, f64::NEG_INFINITY);
        assert_eq!(min_separation(&c), 0.0);
        let pair = Configuration::unchecked(
            &SectionSpace::new(Model::Cp1, 1),
            sphere_points(&[[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]]),
        )
        .unwrap();
        assert!((min_separation(&pair) - FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn separated_subset_examples() {
        let space = SectionSpace::new(Model::Cp1, 5);
        let c = Configuration::unchecked(&space, octahedron()).unwrap();
        assert_eq!(separated_subset(&c, 0.0), (0..6).collect::<Vec<_>>());
        assert_eq!(separated_subset(&c, 2.0).len(), 1);
        let s = separated_subset(&c, FRAC_PI_3);
        assert_eq!(s, vec![0, 1]);
    }

    #[test]
    fn cap_error_examples() {
        let pts = sphere_points(&[[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]]);
        let e = cap_relative_error(&pts, Model::Cp1, FRAC_PI_4, &pts[..1]).unwrap();
        assert!(e.abs() < 1e-12);
        let e = cap_relative_error(&pts, Model::Cp1, FRAC_PI_2, &cap_centers(Model::Cp1, 50)).unwrap();
        assert!(e.abs() < 1e-12);
    }

    #[test]
    fn gradient_matches_central_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for (model, k) in [(Model::Cp1, 2), (Model::Cp1, 6), (Model::Cp1xCp1, 2)] {
            let space = SectionSpace::new(model, k);
            let pts: Vec<Point> = (0..space.dim()).map(|_| uniform_sample(model, &mut rng)).collect();
            let (_, g) = log_vdm_and_grad(&space, &pts).unwrap();
            for j in [0, space.dim() - 1] {
                let mut dir: Gradient = (0..model.factors())
                    .map(|f| [Complex64::new(0.4, 0.1 * f as f64), Complex64::new(-0.3, 0.7)])
                    .collect();
                search::project_tangent(&pts[j], &mut dir);
                let h = 1e-5;
                let mut plus = pts.clone();
                plus[j] = pts[j].retract(&dir, h);
                let mut minus = pts.clone();
                minus[j] = pts[j].retract(&dir, -h);
                let fd = (value(&space, &plus) - value(&space, &minus)) / (2.0 * h);
                let an: f64 = g[j].iter().zip(&dir).map(|(a, b)| (a[0].conj() * b[0] + a[1].conj() * b[1]).re).sum();
                assert!((fd - an).abs() <= 1e-5 * an.abs().max(1.0), "{model} k={k} j={j}: {fd} vs {an}");
            }
        }
    }

    #[test]
    fn solve_k1_is_antipodal() {
        let space = SectionSpace::new(Model::Cp1, 1);
        let c = solve_fekete(&space, &SolverOptions::default()).unwrap();
        assert!((c.log_vdm - 2f64.ln()).abs() < 1e-9);
        assert!(c.is_certified());
        assert!((c.points[0].distance(&c.points[1]) - FRAC_PI_2).abs() < 1e-6);
    }

    #[test]
    fn solve_rejects_bad_options() {
        let space = SectionSpace::new(Model::Cp1, 2);
        let opts = SolverOptions { grad_tol: 0.0, ..SolverOptions::default() };
        assert!(matches!(solve_fekete(&space, &opts), Err(Error::Domain(_))));
        let opts = SolverOptions { max_iters: 1, polish: false, starts: Some(2), ..SolverOptions::default() };
        assert!(matches!(solve_fekete(&space, &opts), Err(Error::NonConvergence { .. })));
        assert!(solve_fekete(&SectionSpace::new(Model::Cp1, 0), &SolverOptions::default()).is_err());
    }
}
