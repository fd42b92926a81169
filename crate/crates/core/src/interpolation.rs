//! Lagrange sections, the interpolation projection, Lebesgue constants and
//! the witness section that forces the Lebesgue constant to grow.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::constants;
use crate::error::{Error, Result};
use crate::fekete::Configuration;
use crate::geometry::{uniform_sample, Model, Point, ProjPoint};
use crate::linalg::Lu;
use crate::search::{self, Gradient};
use crate::sections::{dot, Section, SectionSpace, SupNorm};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Lagrange sections `l_j` of a node set: `|l_j(x_i)| = delta_ij`.
#[derive(Debug, Clone)]
pub struct LagrangeBasis {
    pub space: SectionSpace,
    pub points: Vec<Point>,
    pub sections: Vec<Section>,
    /// One-norm condition number of the collocation matrix.
    pub collocation_condition_number: f64,
}

/// Coefficients of the Lagrange sections: column `j` solves `M^T c = e_j`
/// with `M[(i, j)] = B_i(x_j)`.
pub fn lagrange_coefficients(space: &SectionSpace, points: &[Point]) -> Result<Vec<Section>> {
    Ok(lagrange_with_lu(space, points)?.0)
}

fn lagrange_with_lu(space: &SectionSpace, points: &[Point]) -> Result<(Vec<Section>, f64)> {
    let m = space.collocation(points)?;
    let lu = Lu::factor(&m);
    if lu.is_singular() {
        return Err(Error::Singular);
    }
    let n = space.dim();
    let mut sections = Vec::with_capacity(n);
    let mut inv_norm = 0.0f64;
    for j in 0..n {
        let mut e = vec![ZERO; n];
        e[j] = Complex64::new(1.0, 0.0);
        let c = lu.solve_transpose(&e);
        inv_norm = inv_norm.max(c.iter().map(|z| z.norm()).sum());
        sections.push(space.section(c)?);
    }
    // columns of M^{-T} are rows of M^{-1}; max row sum of M^{-1} is its inf-norm,
    // which equals the one-norm of M^{-T}
    let cond = m.transpose().norm_one() * inv_norm;
    Ok((sections, cond))
}

pub fn lagrange_sections(config: &Configuration) -> Result<LagrangeBasis> {
    lagrange_basis(&config.space, &config.points)
}

pub fn lagrange_basis(space: &SectionSpace, points: &[Point]) -> Result<LagrangeBasis> {
    let (sections, cond) = lagrange_with_lu(space, points)?;
    Ok(LagrangeBasis {
        space: space.clone(),
        points: points.to_vec(),
        sections,
        collocation_condition_number: cond,
    })
}

impl LagrangeBasis {
    /// `(l_1(p), ..., l_N(p))` in the canonical frame.
    pub fn eval_all(&self, p: &Point) -> Vec<Complex64> {
        let b = self.space.eval_basis(p);
        self.sections.iter().map(|s| dot(s.coeffs(), &b)).collect()
    }

    /// `sum_j |l_j(p)|`.
    pub fn lebesgue_function(&self, p: &Point) -> f64 {
        self.eval_all(p).iter().map(|z| z.norm()).sum()
    }

    fn lebesgue_and_grad(&self, p: &Point) -> (f64, Gradient) {
        let (val, derivs) = self.space.eval_basis_jet(p);
        let mut total = 0.0;
        let mut g: Gradient = vec![[ZERO; 2]; derivs.len()];
        for s in &self.sections {
            let v = dot(s.coeffs(), &val);
            let n = v.norm();
            total += n;
            if n < 1e-300 {
                continue;
            }
            for (gf, [d0, d1]) in g.iter_mut().zip(&derivs) {
                gf[0] += v * dot(s.coeffs(), d0).conj() / n;
                gf[1] += v * dot(s.coeffs(), d1).conj() / n;
            }
        }
        (total, g)
    }
}

/// `pi_k(s) = sum_j v_j l_j`.
pub fn interpolate(basis: &LagrangeBasis, node_values: &[Complex64]) -> Result<Section> {
    let n = basis.space.dim();
    if node_values.len() != n {
        return Err(Error::CountMismatch { expected: n, got: node_values.len() });
    }
    let mut coeffs = vec![ZERO; n];
    for (v, s) in node_values.iter().zip(&basis.sections) {
        for (c, l) in coeffs.iter_mut().zip(s.coeffs()) {
            *c += v * l;
        }
    }
    basis.space.section(coeffs)
}

#[derive(Debug, Clone, Copy)]
pub struct Lebesgue {
    pub value: f64,
    pub argmax: Point,
    pub grid_size: usize,
    pub stable: bool,
}

/// `max_x sum_j |l_j(x)|` by grid scan plus ascent, checked against the
/// half-size grid.
pub fn lebesgue_constant(basis: &LagrangeBasis) -> Lebesgue {
    let grid = basis.space.search_grid(false);
    let (v1, p1) = lebesgue_scan(basis, &grid);
    let (v2, p2) = lebesgue_scan(basis, &basis.space.search_grid(true));
    let stable = (v1 - v2).abs() <= constants::LEBESGUE_STABILITY_REL * v1.max(v2);
    let (value, argmax) = if v2 > v1 { (v2, p2) } else { (v1, p1) };
    Lebesgue { value, argmax, grid_size: grid.len(), stable }
}

fn lebesgue_scan(basis: &LagrangeBasis, grid: &[Point]) -> (f64, Point) {
    let n = basis.space.dim();
    let tops = search::scan_top(grid, 1, constants::REFINE_KEEP, |p, out| {
        let mut b = vec![ZERO; n];
        basis.space.eval_basis_into(p, &mut b);
        out[0] = basis.sections.iter().map(|s| dot(s.coeffs(), &b).norm()).sum();
    });
    let k = basis.space.k() as f64;
    let top = &tops[0];
    let mut best = (top[0].value, grid[top[0].index]);
    for start in search::separated(grid, top, constants::REFINE_STARTS, 0.5 / (k + 1.0).sqrt()) {
        let a = search::ascend(start, 1.0 / (k + 1.0), constants::REFINE_STEPS, |p| basis.lebesgue_and_grad(p));
        if a.value > best.0 {
            best = (a.value, a.point);
        }
    }
    best
}

/// `rho_k = eps log k / ((1 - eps) sqrt k)`.
pub fn witness_radius(k: u32, eps: f64) -> f64 {
    let k = k as f64;
    eps * k.ln() / ((1.0 - eps) * k.sqrt())
}

/// Degree of the vanishing factor, `ceil(eps k)`.
pub fn witness_degree(k: u32, eps: f64) -> u32 {
    (eps * k as f64 - 1e-12).ceil().max(0.0) as u32
}

#[derive(Debug, Clone)]
pub struct WitnessDiagnostics {
    pub center: Point,
    pub radius: f64,
    pub degree: u32,
    /// Nodes inside the open ball `B(x, rho_k)`.
    pub vanishing_nodes: Vec<usize>,
    /// `|l~(x)|` after sup-normalization of the vanishing factor.
    pub vanishing_factor_at_center: f64,
    pub sup: SupNorm,
    pub node_max: f64,
}

/// Nodes of `points` strictly within `radius` of `x`.
pub fn nodes_in_ball(points: &[Point], x: &Point, radius: f64) -> Vec<usize> {
    (0..points.len()).filter(|&i| points[i].distance(x) < radius).collect()
}

/// Monomial coefficients of a binary form: `m[a]` multiplies `v0^(d-a) v1^a`.
fn poly_mul_linear(m: &[Complex64], l0: Complex64, l1: Complex64) -> Vec<Complex64> {
    let mut out = vec![ZERO; m.len() + 1];
    for (a, c) in m.iter().enumerate() {
        out[a] += c * l0;
        out[a + 1] += c * l1;
    }
    out
}

fn monomial_section(space: &SectionSpace, m: &[Complex64]) -> Result<Section> {
    let coeffs = m.iter().zip(space.normalizers()).map(|(c, n)| c / n).collect();
    space.section(coeffs)
}

/// The witness `s = l~ * <., x>^(k - d)` on `CP1`, where `l~` of degree
/// `d = ceil(eps k)` vanishes at the nodes in `B(x, rho_k)` and is padded with
/// `<., x>` factors. Returns `s` with `sup |s| / max_nodes |s|`.
pub fn witness_section(
    space: &SectionSpace,
    config: &Configuration,
    eps: f64,
    x: &Point,
) -> Result<(Section, f64, WitnessDiagnostics)> {
    witness_for_nodes(space, &config.points, eps, x)
}

/// [`witness_section`] against an arbitrary node set, possibly of another level.
pub fn witness_for_nodes(
    space: &SectionSpace,
    nodes: &[Point],
    eps: f64,
    x: &Point,
) -> Result<(Section, f64, WitnessDiagnostics)> {
    if space.model() != Model::Cp1 {
        return Err(Error::ModelMismatch(space.model().to_string()));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain(format!("eps must lie in (0, 1), got {eps}")));
    }
    let xc = *x.as_cp1().ok_or_else(|| Error::ModelMismatch(x.model().to_string()))?;
    let k = space.k();
    let degree = witness_degree(k, eps);
    let radius = witness_radius(k, eps);
    let inside = nodes_in_ball(nodes, x, radius);
    if inside.len() > degree as usize {
        return Err(Error::BudgetExceeded { count: inside.len(), budget: degree as usize });
    }
    let [x0, x1] = xc.coords();
    let mut m = vec![Complex64::new(1.0, 0.0)];
    for &i in &inside {
        let [p0, p1] = nodes[i].as_cp1().expect("cp1 nodes").coords();
        // v ^ p = v0 p1 - v1 p0
        m = poly_mul_linear(&m, p1, -p0);
    }
    while m.len() <= degree as usize {
        m = poly_mul_linear(&m, x0.conj(), x1.conj());
    }
    let low = SectionSpace::new(Model::Cp1, degree);
    let tilde = monomial_section(&low, &m)?;
    let tilde_sup = tilde.sup_norm().value;
    let m: Vec<Complex64> = m.iter().map(|c| c / tilde_sup).collect();
    let vanishing_factor_at_center = monomial_section(&low, &m)?.eval_norm(x);
    let mut full = m;
    for _ in degree..k {
        full = poly_mul_linear(&full, x0.conj(), x1.conj());
    }
    let s = monomial_section(space, &full)?;
    let sup = s.sup_norm();
    let node_max = nodes.iter().map(|p| s.eval_norm(p)).fold(0.0, f64::max);
    let ratio = sup.value / node_max;
    let diag = WitnessDiagnostics {
        center: *x,
        radius,
        degree,
        vanishing_nodes: inside,
        vanishing_factor_at_center,
        sup,
        node_max,
    };
    Ok((s, ratio, diag))
}

/// Among `candidates` uniform draws from `seed`, the point whose witness ball
/// holds the fewest nodes; ties go to the lowest draw index.
pub fn witness_center(nodes: &[Point], k: u32, eps: f64, seed: u64, candidates: usize) -> Point {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let radius = witness_radius(k, eps);
    let model = nodes.first().map(|p| p.model()).unwrap_or(Model::Cp1);
    let mut best: Option<(usize, Point)> = None;
    for _ in 0..candidates.max(1) {
        let p = uniform_sample(model, &mut rng);
        let c = nodes_in_ball(nodes, &p, radius).len();
        if best.as_ref().is_none_or(|(bc, _)| c < *bc) {
            best = Some((c, p));
        }
    }
    best.expect("at least one candidate").1
}

/// Witness with the default center rule.
pub fn default_witness(
    space: &SectionSpace,
    nodes: &[Point],
    eps: f64,
    seed: u64,
) -> Result<(Section, f64, WitnessDiagnostics)> {
    let x = witness_center(nodes, space.k(), eps, seed, constants::WITNESS_CANDIDATES);
    witness_for_nodes(space, nodes, eps, &x)
}

/// Canonical-frame values of `s` at the canonical representatives of `points`.
pub fn node_values(s: &Section, points: &[Point]) -> Vec<Complex64> {
    points.iter().map(|p| s.eval(p)).collect()
}

pub fn cp1_point(x: [f64; 3]) -> Point {
    Point::Cp1(ProjPoint::from_sphere(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fekete::{solve_fekete, SolverOptions};
    use crate::linalg::{det_cofactor, minor, Matrix};
    use rand_distr::{Distribution, StandardNormal};

    fn antipodal() -> Vec<Point> {
        vec![cp1_point([0.0, 0.0, 1.0]), cp1_point([0.0, 0.0, -1.0])]
    }

    fn random_points(model: Model, n: usize, seed: u64) -> Vec<Point> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| uniform_sample(model, &mut rng)).collect()
    }

    fn random_section(space: &SectionSpace, seed: u64) -> Section {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = (0..space.dim())
            .map(|_| Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)))
            .collect();
        space.section(c).unwrap()
    }

    #[test]
    fn antipodal_lagrange() {
        let space = SectionSpace::new(Model::Cp1, 1);
        let b = lagrange_basis(&space, &antipodal()).unwrap();
        let c = b.sections[0].coeffs();
        assert!((c[0] - Complex64::new(0.5f64.sqrt(), 0.0)).norm() < 1e-15);
        assert!(c[1].norm() < 1e-15);
        assert!((b.collocation_condition_number - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lagrange_delta_property() {
        for (model, k) in [(Model::Cp1, 7), (Model::Cp1, 20), (Model::Cp1xCp1, 3)] {
            let space = SectionSpace::new(model, k);
            let pts = random_points(model, space.dim(), 3);
            let b = lagrange_basis(&space, &pts).unwrap();
            for (i, p) in pts.iter().enumerate() {
                for (j, l) in b.eval_all(p).iter().enumerate() {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((l - want).norm() < 1e-8, "{model} k={k}");
                }
            }
        }
    }

    #[test]
    fn lagrange_matches_cofactor_formula() {
        // l_j = sum_i (-1)^(i+j) det(minor(M, i, j)) B_i / det M
        for k in [1, 3, 7] {
            let space = SectionSpace::new(Model::Cp1, k);
            let pts = random_points(Model::Cp1, space.dim(), 11);
            let m: Matrix = space.collocation(&pts).unwrap();
            let det = det_cofactor(&m);
            let b = lagrange_basis(&space, &pts).unwrap();
            for j in 0..space.dim() {
                for i in 0..space.dim() {
                    let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                    let c = sign * det_cofactor(&minor(&m, i, j)) / det;
                    assert!((c - b.sections[j].coeffs()[i]).norm() < 1e-9 * c.norm().max(1.0));
                }
            }
        }
    }

    #[test]
    fn singular_nodes_rejected() {
        let space = SectionSpace::new(Model::Cp1, 2);
        let p = cp1_point([0.0, 1.0, 0.0]);
        let pts = vec![p, cp1_point([1.0, 0.0, 0.0]), p];
        assert!(matches!(lagrange_basis(&space, &pts), Err(Error::Singular)));
    }

    #[test]
    fn interpolation_reproduces_sections() {
        for (model, k) in [(Model::Cp1, 5), (Model::Cp1, 32), (Model::Cp1xCp1, 2)] {
            let space = SectionSpace::new(model, k);
            let pts = random_points(model, space.dim(), 5);
            let b = lagrange_basis(&space, &pts).unwrap();
            let s = random_section(&space, 9);
            let t = interpolate(&b, &node_values(&s, &pts)).unwrap();
            let scale = s.norm_sq().sqrt();
            for (a, c) in s.coeffs().iter().zip(t.coeffs()) {
                assert!((a - c).norm() < 1e-8 * scale, "{model} k={k}");
            }
        }
    }

    #[test]
    fn interpolation_edge_cases() {
        let space = SectionSpace::new(Model::Cp1, 3);
        let pts = random_points(Model::Cp1, 4, 1);
        let b = lagrange_basis(&space, &pts).unwrap();
        assert_eq!(interpolate(&b, &[ZERO; 4]).unwrap().norm_sq(), 0.0);
        assert!(matches!(interpolate(&b, &[ZERO; 3]), Err(Error::CountMismatch { expected: 4, got: 3 })));
        let zero = SectionSpace::new(Model::Cp1, 0);
        let b = lagrange_basis(&zero, &pts[..1]).unwrap();
        let v = Complex64::new(0.6, -0.8) * 3.0;
        let s = interpolate(&b, &[v]).unwrap();
        for p in &pts {
            assert!((s.eval_norm(p) - 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn interpolation_phase_covariance() {
        let space = SectionSpace::new(Model::Cp1, 6);
        let pts = random_points(Model::Cp1, 7, 2);
        let b = lagrange_basis(&space, &pts).unwrap();
        let vals: Vec<Complex64> = (0..7).map(|i| Complex64::new(i as f64, 1.0)).collect();
        let u = Complex64::from_polar(1.0, 0.7);
        let s = interpolate(&b, &vals).unwrap();
        let rot: Vec<Complex64> = vals.iter().map(|v| v * u).collect();
        let t = interpolate(&b, &rot).unwrap();
        for (a, c) in s.coeffs().iter().zip(t.coeffs()) {
            assert!((a * u - c).norm() < 1e-12);
        }
    }

    #[test]
    fn lebesgue_antipodal_is_sqrt2() {
        let space = SectionSpace::new(Model::Cp1, 1);
        let b = lagrange_basis(&space, &antipodal()).unwrap();
        let l = lebesgue_constant(&b);
        assert!((l.value - 2f64.sqrt()).abs() < 1e-6, "{}", l.value);
        assert!(l.stable);
    }

    #[test]
    fn lebesgue_at_least_one() {
        let space = SectionSpace::new(Model::Cp1, 4);
        let pts = random_points(Model::Cp1, 5, 8);
        let b = lagrange_basis(&space, &pts).unwrap();
        let l = lebesgue_constant(&b);
        assert!(l.value >= 1.0);
        for p in &pts {
            assert!((b.lebesgue_function(p) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn octahedron_certificate() {
        let space = SectionSpace::new(Model::Cp1, 5);
        let c = solve_fekete(&space, &SolverOptions::default()).unwrap();
        assert!(c.is_certified(), "{:?}", c.certificate);
        let b = lagrange_sections(&c).unwrap();
        let sup = space.sup_norm_many(&b.sections).iter().map(|s| s.value).fold(0.0, f64::max);
        assert!((sup - 1.0).abs() < 1e-6);
        let l = lebesgue_constant(&b);
        assert!(l.value <= 6.0 * (1.0 + 1e-6));
    }

    #[test]
    fn witness_vanishes_on_ball_nodes() {
        let space = SectionSpace::new(Model::Cp1, 16);
        let nodes = random_points(Model::Cp1, 17, 4);
        let radius = witness_radius(16, 0.4);
        // center on a node so the ball is nonempty
        let x = nodes[0];
        let (s, ratio, d) = witness_for_nodes(&space, &nodes, 0.4, &x).unwrap();
        assert!(!d.vanishing_nodes.is_empty());
        assert_eq!(d.vanishing_nodes, nodes_in_ball(&nodes, &x, radius));
        for &i in &d.vanishing_nodes {
            assert!(s.eval_norm(&nodes[i]) < 1e-12);
        }
        assert!(ratio >= 1.0 - 1e-9);
        assert!(d.vanishing_factor_at_center <= 1.0 + 1e-9);
    }

    #[test]
    fn witness_errors() {
        let space = SectionSpace::new(Model::Cp1, 4);
        let nodes = random_points(Model::Cp1, 5, 4);
        assert!(matches!(witness_for_nodes(&space, &nodes, 0.0, &nodes[0]), Err(Error::Domain(_))));
        assert!(matches!(witness_for_nodes(&space, &nodes, 1.0, &nodes[0]), Err(Error::Domain(_))));
        let crowded = vec![nodes[0]; 5];
        assert!(matches!(
            witness_for_nodes(&space, &crowded, 0.2, &nodes[0]),
            Err(Error::BudgetExceeded { count: 5, budget: 1 })
        ));
        let prod = SectionSpace::new(Model::Cp1xCp1, 2);
        let pts = random_points(Model::Cp1xCp1, 9, 1);
        assert!(matches!(witness_for_nodes(&prod, &pts, 0.2, &pts[0]), Err(Error::ModelMismatch(_))));
    }

    #[test]
    fn witness_center_is_deterministic() {
        let nodes = random_points(Model::Cp1, 17, 4);
        let a = witness_center(&nodes, 16, 0.2, 7, 100);
        let b = witness_center(&nodes, 16, 0.2, 7, 100);
        assert_eq!(a, b);
    }
}
