//! Holomorphic sections of `O(k)` on `CP1` and `O(k, k)` on `CP1 x CP1`.
//!
//! A section is a homogeneous polynomial evaluated at the canonical unit
//! representative of a point; its pointwise norm is the modulus. The basis
//! `B_a(v) = c_{k,a} v0^(k-a) v1^a` with `c_{k,a} = sqrt((k+1) binom(k,a))` is
//! orthonormal for the normalized volume. On the product the basis is the
//! tensor product, ordered lexicographically in `(a, b)`.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants;
use crate::error::{Error, Result};
use crate::geometry::{fibonacci_grid, quadrature_rule, Model, Point, ProjPoint};
use crate::linalg::{Lu, Matrix};
use crate::search::{self, Gradient};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `H^0(X, L^k)` on a model geometry.
#[derive(Debug, Clone)]
pub struct SectionSpace {
    model: Model,
    k: u32,
    norms: Arc<[f64]>,
}

impl PartialEq for SectionSpace {
    fn eq(&self, other: &Self) -> bool {
        self.model == other.model && self.k == other.k
    }
}

/// `c_{k,a} = sqrt((k+1) binom(k,a))` for `a = 0..=k`.
pub fn normalizers(k: u32) -> Vec<f64> {
    let mut binom = 1.0f64;
    let mut out = Vec::with_capacity(k as usize + 1);
    for a in 0..=k {
        if a > 0 {
            binom = binom * (k - a + 1) as f64 / a as f64;
        }
        out.push(((k + 1) as f64 * binom).sqrt());
    }
    out
}

/// Values and holomorphic partial derivatives of the level-`k` basis on one
/// `CP1` factor.
struct FactorJet {
    val: Vec<Complex64>,
    d0: Vec<Complex64>,
    d1: Vec<Complex64>,
}

impl SectionSpace {
    pub fn new(model: Model, k: u32) -> Self {
        Self { model, k, norms: normalizers(k).into() }
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn dim(&self) -> usize {
        (self.k as usize + 1).pow(self.model.dim() as u32)
    }

    /// Per-factor normalizers `c_{k,a}`.
    pub fn normalizers(&self) -> &[f64] {
        &self.norms
    }

    fn check_point(&self, p: &Point) {
        assert_eq!(p.model(), self.model, "point model does not match the section space");
    }

    fn factor_values(&self, p: &ProjPoint, out: &mut [Complex64]) {
        let [x, y] = p.coords();
        let k = self.k as usize;
        // out[a] = x^(k-a) y^a, built from both ends to avoid division.
        let mut pow_y = Complex64::new(1.0, 0.0);
        for o in out.iter_mut().take(k + 1) {
            *o = pow_y;
            pow_y *= y;
        }
        let mut pow_x = Complex64::new(1.0, 0.0);
        for a in (0..=k).rev() {
            out[a] *= pow_x * self.norms[a];
            pow_x *= x;
        }
    }

    fn factor_jet(&self, p: &ProjPoint) -> FactorJet {
        let k = self.k as usize;
        let [x, y] = p.coords();
        let mut xp = vec![Complex64::new(1.0, 0.0); k + 1];
        let mut yp = vec![Complex64::new(1.0, 0.0); k + 1];
        for i in 1..=k {
            xp[i] = xp[i - 1] * x;
            yp[i] = yp[i - 1] * y;
        }
        let mut jet = FactorJet { val: vec![ZERO; k + 1], d0: vec![ZERO; k + 1], d1: vec![ZERO; k + 1] };
        for a in 0..=k {
            let c = self.norms[a];
            jet.val[a] = xp[k - a] * yp[a] * c;
            if a < k {
                jet.d0[a] = xp[k - a - 1] * yp[a] * (c * (k - a) as f64);
            }
            if a > 0 {
                jet.d1[a] = xp[k - a] * yp[a - 1] * (c * a as f64);
            }
        }
        jet
    }

    /// Writes the basis values at `p` into `out` (length `dim()`).
    pub fn eval_basis_into(&self, p: &Point, out: &mut [Complex64]) {
        self.check_point(p);
        let m = self.k as usize + 1;
        match p {
            Point::Cp1(q) => self.factor_values(q, out),
            Point::Product([q1, q2]) => {
                let mut a = vec![ZERO; m];
                let mut b = vec![ZERO; m];
                self.factor_values(q1, &mut a);
                self.factor_values(q2, &mut b);
                for (i, ai) in a.iter().enumerate() {
                    for (j, bj) in b.iter().enumerate() {
                        out[i * m + j] = ai * bj;
                    }
                }
            }
        }
    }

    pub fn eval_basis(&self, p: &Point) -> Vec<Complex64> {
        let mut out = vec![ZERO; self.dim()];
        self.eval_basis_into(p, &mut out);
        out
    }

    /// Basis values and their holomorphic derivatives with respect to the
    /// two ambient coordinates of each factor: `derivs[f][m][i]`.
    pub fn eval_basis_jet(&self, p: &Point) -> (Vec<Complex64>, Vec<[Vec<Complex64>; 2]>) {
        self.check_point(p);
        let m = self.k as usize + 1;
        match p {
            Point::Cp1(q) => {
                let j = self.factor_jet(q);
                (j.val, vec![[j.d0, j.d1]])
            }
            Point::Product([q1, q2]) => {
                let a = self.factor_jet(q1);
                let b = self.factor_jet(q2);
                let n = m * m;
                let mut val = vec![ZERO; n];
                let mut da = [vec![ZERO; n], vec![ZERO; n]];
                let mut db = [vec![ZERO; n], vec![ZERO; n]];
                for i in 0..m {
                    for j in 0..m {
                        let idx = i * m + j;
                        val[idx] = a.val[i] * b.val[j];
                        da[0][idx] = a.d0[i] * b.val[j];
                        da[1][idx] = a.d1[i] * b.val[j];
                        db[0][idx] = a.val[i] * b.d0[j];
                        db[1][idx] = a.val[i] * b.d1[j];
                    }
                }
                (val, vec![da, db])
            }
        }
    }

    pub fn basis_section(&self, index: usize) -> Section {
        let mut coeffs = vec![ZERO; self.dim()];
        coeffs[index] = Complex64::new(1.0, 0.0);
        Section { space: self.clone(), coeffs }
    }

    pub fn zero(&self) -> Section {
        Section { space: self.clone(), coeffs: vec![ZERO; self.dim()] }
    }

    pub fn section(&self, coeffs: Vec<Complex64>) -> Result<Section> {
        if coeffs.len() != self.dim() {
            return Err(Error::CountMismatch { expected: self.dim(), got: coeffs.len() });
        }
        Ok(Section { space: self.clone(), coeffs })
    }

    /// `|K_k(p, q)|` in closed form: `(k+1) |<p, q>|^k` per factor.
    /// The overlap is divided by `|p| |q| = sqrt(|<p,q>|^2 + |p ^ q|^2)` so
    /// representative norms off by an ulp are not raised to the power `k`.
    pub fn bergman_norm(&self, p: &Point, q: &Point) -> f64 {
        self.check_point(p);
        self.check_point(q);
        let k = self.k as i32;
        p.factors()
            .iter()
            .zip(q.factors())
            .map(|(a, b)| (self.k as f64 + 1.0) * (a.overlap(b) / a.overlap(b).hypot(a.wedge(b))).powi(k))
            .product()
    }

    /// `K_k(p, q) = sum_i B_i(p) conj(B_i(q))` in the canonical frames.
    pub fn bergman_kernel(&self, p: &Point, q: &Point) -> Complex64 {
        let bp = self.eval_basis(p);
        let bq = self.eval_basis(q);
        bp.iter().zip(&bq).map(|(a, b)| a * b.conj()).sum()
    }

    /// Normalized Bergman kernel at `p`: equals one at `p` in norm and has
    /// squared `L^2` norm `1 / N`.
    pub fn peak_section(&self, p: &Point) -> Section {
        let b = self.eval_basis(p);
        let kpp = self.bergman_norm(p, p);
        Section { space: self.clone(), coeffs: b.iter().map(|z| z.conj() / kpp).collect() }
    }

    /// Collocation matrix `M[(i, j)] = B_i(x_j)`.
    pub fn collocation(&self, points: &[Point]) -> Result<Matrix> {
        if points.len() != self.dim() {
            return Err(Error::CountMismatch { expected: self.dim(), got: points.len() });
        }
        let cols: Vec<Vec<Complex64>> = points.iter().map(|p| self.eval_basis(p)).collect();
        Ok(Matrix::from_columns(&cols))
    }

    /// `log |det(B_i(x_j))|`, `-inf` for numerically singular configurations.
    pub fn vandermonde_lognorm(&self, points: &[Point]) -> Result<f64> {
        let m = self.collocation(points)?;
        Ok(Lu::factor(&m).log_abs_det())
    }

    /// Quasi-uniform search grid sized for features at scale `1/sqrt(k)`.
    pub fn search_grid(&self, halve: bool) -> Vec<Point> {
        let n = constants::search_grid_per_factor(self.model, self.k);
        fibonacci_grid(self.model, if halve { n / 2 } else { n })
    }

    /// Sup-norms of several sections of this space sharing one grid scan.
    pub fn sup_norm_many(&self, sections: &[Section]) -> Vec<SupNorm> {
        let full = sup_scan(self, sections, &self.search_grid(false));
        let half = sup_scan(self, sections, &self.search_grid(true));
        full.into_iter()
            .zip(half)
            .map(|((v1, p1), (v2, p2))| {
                let scale = v1.max(v2);
                let stable = scale == 0.0 || (v1 - v2).abs() <= constants::SUP_STABILITY_REL * scale;
                if v2 > v1 {
                    SupNorm { value: v2, argmax: p2, stable }
                } else {
                    SupNorm { value: v1, argmax: p1, stable }
                }
            })
            .collect()
    }
}

/// Result of a sup-norm search. `value` is attained at `argmax`, hence a
/// lower bound for the true maximum; `stable` records whether halving the
/// grid left it unchanged to the configured relative tolerance.
#[derive(Debug, Clone, Copy)]
pub struct SupNorm {
    pub value: f64,
    pub argmax: Point,
    pub stable: bool,
}

fn sup_scan(space: &SectionSpace, sections: &[Section], grid: &[Point]) -> Vec<(f64, Point)> {
    let n = space.dim();
    let tops = search::scan_top(grid, sections.len(), constants::REFINE_KEEP, |p, out| {
        let mut b = vec![ZERO; n];
        space.eval_basis_into(p, &mut b);
        for (o, s) in out.iter_mut().zip(sections) {
            *o = dot(&s.coeffs, &b).norm();
        }
    });
    let min_sep = 0.5 / (space.k as f64 + 1.0).sqrt();
    let step0 = 1.0 / (space.k as f64 + 1.0);
    sections
        .iter()
        .zip(tops)
        .map(|(s, top)| {
            let best_grid = top[0];
            if best_grid.value == 0.0 {
                return (0.0, grid[best_grid.index]);
            }
            let mut best = (best_grid.value, grid[best_grid.index]);
            for start in search::separated(grid, &top, constants::REFINE_STARTS, min_sep) {
                let a = search::ascend(start, step0, constants::REFINE_STEPS, |p| s.log_norm_and_grad(p));
                let v = a.value.exp();
                if v > best.0 {
                    best = (v, a.point);
                }
            }
            best
        })
        .collect()
}

pub(crate) fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// An element `sum_i c_i B_i` of a [`SectionSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    space: SectionSpace,
    coeffs: Vec<Complex64>,
}

impl Section {
    pub fn space(&self) -> &SectionSpace {
        &self.space
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Value in the canonical frame at the canonical representative of `p`.
    pub fn eval(&self, p: &Point) -> Complex64 {
        dot(&self.coeffs, &self.space.eval_basis(p))
    }

    pub fn eval_norm(&self, p: &Point) -> f64 {
        self.eval(p).norm()
    }

    /// Value and holomorphic derivatives per factor coordinate.
    pub fn eval_jet(&self, p: &Point) -> (Complex64, Vec<[Complex64; 2]>) {
        let (val, derivs) = self.space.eval_basis_jet(p);
        let v = dot(&self.coeffs, &val);
        let d = derivs.iter().map(|[d0, d1]| [dot(&self.coeffs, d0), dot(&self.coeffs, d1)]).collect();
        (v, d)
    }

    /// `log |s(p)|` and its ambient gradient `conj(ds / s)`.
    pub fn log_norm_and_grad(&self, p: &Point) -> (f64, Gradient) {
        let (v, d) = self.eval_jet(p);
        let n = v.norm();
        if n == 0.0 {
            return (f64::NEG_INFINITY, vec![[ZERO; 2]; d.len()]);
        }
        let g = d.iter().map(|[a, b]| [(a / v).conj(), (b / v).conj()]).collect();
        (n.ln(), g)
    }

    /// `|s(p)|` and its ambient gradient `s conj(ds) / |s|`; the gradient is
    /// zero where `s` vanishes.
    pub fn norm_and_grad(&self, p: &Point) -> (f64, Gradient) {
        let (v, d) = self.eval_jet(p);
        let n = v.norm();
        if n < 1e-300 {
            return (n, vec![[ZERO; 2]; d.len()]);
        }
        let g = d.iter().map(|[a, b]| [v * a.conj() / n, v * b.conj() / n]).collect();
        (n, g)
    }

    pub fn inner(&self, other: &Section) -> Result<Complex64> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a * b.conj()).sum())
    }

    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `int <s, t> dV` by the exact product quadrature; the independent
    /// route to [`Section::inner`].
    pub fn inner_quadrature(&self, other: &Section) -> Result<Complex64> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(quadrature_rule(self.space.model, self.space.k)
            .iter()
            .map(|(p, w)| {
                let b = self.space.eval_basis(p);
                dot(&self.coeffs, &b) * dot(&other.coeffs, &b).conj() * *w
            })
            .sum())
    }

    pub fn sup_norm(&self) -> SupNorm {
        self.space.sup_norm_many(std::slice::from_ref(self)).pop().expect("one section")
    }

    pub fn scale(&self, z: Complex64) -> Section {
        Section { space: self.space.clone(), coeffs: self.coeffs.iter().map(|c| c * z).collect() }
    }

    pub fn to_json(&self) -> SectionJson {
        SectionJson {
            model: self.space.model,
            k: self.space.k,
            coeffs: self.coeffs.iter().map(|c| [c.re, c.im]).collect(),
        }
    }

    pub fn from_json(j: &SectionJson) -> Result<Section> {
        SectionSpace::new(j.model, j.k).section(j.coeffs.iter().map(|c| Complex64::new(c[0], c[1])).collect())
    }
}

/// Wire form of a section: `{"model", "k", "coeffs": [[re, im], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectionJson {
    pub model: Model,
    pub k: u32,
    pub coeffs: Vec<[f64; 2]>,
}

pub fn dim(model: Model, k: u32) -> usize {
    (k as usize + 1).pow(model.dim() as u32)
}

/// Bergman kernel identities checked numerically.
#[derive(Debug, Clone, Copy)]
pub struct BergmanDiagnostics {
    /// `max | |K(x, x)| - N |` over random points, closed form.
    pub diagonal_max_error: f64,
    /// `max | |K_sum(x, x)| - N | / N` with the kernel summed over the basis.
    pub diagonal_sum_max_relative_error: f64,
    /// `max |K_closed(x, y) - |K_sum(x, y)|| / N` over random pairs.
    pub closed_form_max_error: f64,
    /// `max |int s(y) K(x, y) dV(y) - s(x)|` for one random section, or `None`
    /// above the quadrature budget.
    pub reproducing_max_error: Option<f64>,
    /// `max |K(p, q)| / (C k^n exp(-sqrt(k) d(p, q)))` over a distance scan.
    pub offdiag_max_ratio: f64,
}

/// Largest level for which the reproducing-property quadrature is run.
pub const REPRODUCING_MAX_K: u32 = 8;

pub fn bergman_diagnostics<R: rand::Rng + ?Sized>(space: &SectionSpace, samples: usize, rng: &mut R) -> BergmanDiagnostics {
    let model = space.model;
    let n = space.dim() as f64;
    let pts: Vec<Point> = (0..samples).map(|_| crate::geometry::uniform_sample(model, rng)).collect();
    let mut diagonal_max_error = 0.0f64;
    let mut diagonal_sum_max_relative_error = 0.0f64;
    let mut closed_form_max_error = 0.0f64;
    for (i, x) in pts.iter().enumerate() {
        diagonal_max_error = diagonal_max_error.max((space.bergman_norm(x, x) - n).abs());
        diagonal_sum_max_relative_error =
            diagonal_sum_max_relative_error.max((space.bergman_kernel(x, x).norm() - n).abs() / n);
        if let Some(y) = pts.get(i + 1) {
            closed_form_max_error =
                closed_form_max_error.max((space.bergman_norm(x, y) - space.bergman_kernel(x, y).norm()).abs() / n);
        }
    }
    let reproducing_max_error = (space.k <= REPRODUCING_MAX_K).then(|| {
        let coeffs = (0..space.dim())
            .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        let s = Section { space: space.clone(), coeffs };
        let rule = quadrature_rule(model, space.k);
        pts.iter()
            .take(20)
            .map(|x| {
                let v: Complex64 = rule.iter().map(|(y, w)| s.eval(y) * space.bergman_kernel(x, y) * *w).sum();
                (v - s.eval(x)).norm()
            })
            .fold(0.0, f64::max)
    });
    BergmanDiagnostics {
        diagonal_max_error,
        diagonal_sum_max_relative_error,
        closed_form_max_error,
        reproducing_max_error,
        offdiag_max_ratio: offdiag_scan(space, 400, 32),
    }
}

/// `max |K(p, q)| / (C k^n exp(-sqrt(k) d))` over `d` in `[0, diameter]`;
/// on the product the distance is split between the factors at
/// `splits + 1` angles.
pub fn offdiag_scan(space: &SectionSpace, steps: usize, splits: usize) -> f64 {
    let k = space.k as f64;
    let n = space.model.dim() as i32;
    let north = ProjPoint::from_sphere([0.0, 0.0, 1.0]);
    let at = |d: f64| ProjPoint::canonicalize([Complex64::new(d.cos(), 0.0), Complex64::new(d.sin(), 0.0)]).expect("unit");
    let bound = |d: f64| constants::OFFDIAG_CONST * k.powi(n) * (-k.sqrt() * d).exp();
    let mut worst = 0.0f64;
    for i in 0..=steps {
        let d = space.model.diameter() * i as f64 / steps as f64;
        match space.model {
            Model::Cp1 => {
                let q = Point::Cp1(at(d));
                let p = Point::Cp1(north);
                worst = worst.max(space.bergman_norm(&p, &q) / bound(p.distance(&q)));
            }
            Model::Cp1xCp1 => {
                for j in 0..=splits {
                    let phi = std::f64::consts::FRAC_PI_2 * j as f64 / splits as f64;
                    let (d1, d2) = (d * phi.cos(), d * phi.sin());
                    if d1 > std::f64::consts::FRAC_PI_2 + 1e-12 || d2 > std::f64::consts::FRAC_PI_2 + 1e-12 {
                        continue;
                    }
                    let p = Point::Product([north, north]);
                    let q = Point::Product([at(d1.min(std::f64::consts::FRAC_PI_2)), at(d2.min(std::f64::consts::FRAC_PI_2))]);
                    worst = worst.max(space.bergman_norm(&p, &q) / bound(p.distance(&q)));
                }
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::uniform_sample;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_4, SQRT_2};

    fn pt(r: [f64; 4]) -> Point {
        Point::Cp1(ProjPoint::from_reals(r).unwrap())
    }

    fn random_section(space: &SectionSpace, rng: &mut ChaCha8Rng) -> Section {
        let c = (0..space.dim()).map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
        space.section(c).unwrap()
    }

    #[test]
    fn dimensions() {
        assert_eq!(SectionSpace::new(Model::Cp1, 3).dim(), 4);
        assert_eq!(SectionSpace::new(Model::Cp1, 0).dim(), 1);
        assert_eq!(SectionSpace::new(Model::Cp1xCp1, 2).dim(), 9);
    }

    #[test]
    fn basis_values() {
        let b = SectionSpace::new(Model::Cp1, 1).eval_basis(&pt([1.0, 0.0, 0.0, 0.0]));
        assert!((b[0].re - SQRT_2).abs() < 1e-15 && b[1].norm() == 0.0);
        let b = SectionSpace::new(Model::Cp1, 2).eval_basis(&pt([1.0, 0.0, 1.0, 0.0]));
        let expect = [3f64.sqrt() / 2.0, 6f64.sqrt() / 2.0, 3f64.sqrt() / 2.0];
        for (z, e) in b.iter().zip(expect) {
            assert!((z - Complex64::new(e, 0.0)).norm() < 1e-15);
        }
        let b = SectionSpace::new(Model::Cp1, 0).eval_basis(&pt([0.3, 0.1, -0.2, 0.7]));
        assert_eq!(b, vec![Complex64::new(1.0, 0.0)]);
    }

    #[test]
    fn eval_norm_examples_and_phase_invariance() {
        let k = 5;
        let space = SectionSpace::new(Model::Cp1, k);
        let s0 = space.basis_section(0);
        assert!((s0.eval_norm(&pt([1.0, 0.0, 0.0, 0.0])) - 6f64.sqrt()).abs() < 1e-14);
        assert_eq!(space.zero().eval_norm(&pt([0.2, 0.0, 0.4, 1.0])), 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = random_section(&space, &mut rng);
        let p = ProjPoint::uniform(&mut rng);
        let [a, b] = p.coords();
        let ph = Complex64::from_polar(1.0, 1.234);
        let q = ProjPoint::canonicalize([a * ph, b * ph]).unwrap();
        let direct: Complex64 = space.eval_basis(&Point::Cp1(p)).iter().zip(s.coeffs()).map(|(x, y)| x * y).sum();
        assert!((s.eval_norm(&Point::Cp1(q)) - direct.norm()).abs() < 1e-13);
    }

    #[test]
    fn inner_product_examples() {
        let space = SectionSpace::new(Model::Cp1, 4);
        for i in 0..5 {
            for j in 0..5 {
                let v = space.basis_section(i).inner(&space.basis_section(j)).unwrap();
                assert_eq!(v, Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0));
            }
        }
        let other = SectionSpace::new(Model::Cp1, 3);
        assert!(matches!(space.zero().inner(&other.zero()), Err(Error::SpaceMismatch)));
    }

    #[test]
    fn orthonormality_under_quadrature() {
        for model in [Model::Cp1, Model::Cp1xCp1] {
            let space = SectionSpace::new(model, 4);
            for i in 0..space.dim() {
                for j in 0..space.dim() {
                    let v = space.basis_section(i).inner_quadrature(&space.basis_section(j)).unwrap();
                    let e = if i == j { 1.0 } else { 0.0 };
                    assert!((v - Complex64::new(e, 0.0)).norm() < 1e-10, "{model} {i} {j} {v}");
                }
            }
        }
        let s3 = SectionSpace::new(Model::Cp1, 3);
        assert!(s3.basis_section(0).inner_quadrature(&s3.basis_section(1)).unwrap().norm() < 1e-14);
    }

    #[test]
    fn parseval_matches_quadrature() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for k in [6, 12] {
            let space = SectionSpace::new(Model::Cp1, k);
            let s = random_section(&space, &mut rng);
            let t = random_section(&space, &mut rng);
            let a = s.inner(&t).unwrap();
            let b = s.inner_quadrature(&t).unwrap();
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn bergman_closed_form_vs_direct_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for model in [Model::Cp1, Model::Cp1xCp1] {
            for k in [0, 1, 2, 7] {
                let space = SectionSpace::new(model, k);
                for _ in 0..10 {
                    let p = uniform_sample(model, &mut rng);
                    let q = uniform_sample(model, &mut rng);
                    let direct = space.bergman_kernel(&p, &q).norm();
                    assert!((space.bergman_norm(&p, &q) - direct).abs() < 1e-10 * (1.0 + direct));
                    assert!((space.bergman_norm(&p, &p) - space.dim() as f64).abs() < 1e-10);
                }
            }
        }
        let s2 = SectionSpace::new(Model::Cp1, 2);
        let e0 = pt([1.0, 0.0, 0.0, 0.0]);
        assert_eq!(s2.bergman_norm(&e0, &pt([0.0, 0.0, 1.0, 0.0])), 0.0);
        let q = pt([FRAC_PI_4.cos(), 0.0, FRAC_PI_4.sin(), 0.0]);
        assert!((s2.bergman_norm(&e0, &q) - 1.5).abs() < 1e-14);
    }

    #[test]
    fn peak_section_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for k in [1, 4, 9] {
            let space = SectionSpace::new(Model::Cp1, k);
            let p = uniform_sample(Model::Cp1, &mut rng);
            let phi = space.peak_section(&p);
            assert!((phi.eval_norm(&p) - 1.0).abs() < 1e-13);
            assert!((phi.norm_sq() - 1.0 / (k as f64 + 1.0)).abs() < 1e-14);
            let anti = Point::Cp1(p.as_cp1().unwrap().antipode());
            assert!(phi.eval_norm(&anti) < 1e-14);
        }
    }

    #[test]
    fn vandermonde_examples() {
        let space = SectionSpace::new(Model::Cp1, 1);
        let v = space.vandermonde_lognorm(&[pt([1.0, 0.0, 0.0, 0.0]), pt([0.0, 0.0, 1.0, 0.0])]).unwrap();
        assert!((v - 2f64.ln()).abs() < 1e-15);
        let p = pt([0.6, 0.0, 0.8, 0.0]);
        let space = SectionSpace::new(Model::Cp1, 2);
        let v = space.vandermonde_lognorm(&[p, pt([0.0, 0.0, 1.0, 0.0]), p]).unwrap();
        assert_eq!(v, f64::NEG_INFINITY);
        assert!(matches!(space.vandermonde_lognorm(&[p]), Err(Error::CountMismatch { .. })));
    }

    #[test]
    fn sup_norm_examples() {
        let k = 6;
        let space = SectionSpace::new(Model::Cp1, k);
        let s = space.basis_section(0).sup_norm();
        assert!((s.value - 7f64.sqrt()).abs() < 1e-9);
        assert!(s.argmax.distance(&pt([1.0, 0.0, 0.0, 0.0])) < 1e-4);
        assert_eq!(space.zero().sup_norm().value, 0.0);
        let h = 0.5f64.sqrt();
        let s = SectionSpace::new(Model::Cp1, 1).section(vec![Complex64::new(h, 0.0); 2]).unwrap().sup_norm();
        assert!((s.value - SQRT_2).abs() < 1e-9);
        assert!(s.argmax.distance(&pt([1.0, 0.0, 1.0, 0.0])) < 1e-4);
        assert!(s.stable);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for model in [Model::Cp1, Model::Cp1xCp1] {
            let space = SectionSpace::new(model, 3);
            let s = random_section(&space, &mut rng);
            let p = uniform_sample(model, &mut rng);
            let (_, mut g) = s.norm_and_grad(&p);
            search::project_tangent(&p, &mut g);
            let mut dir: Gradient =
                (0..model.factors()).map(|_| [Complex64::new(0.3, -0.2), Complex64::new(-0.1, 0.4)]).collect();
            search::project_tangent(&p, &mut dir);
            let h = 1e-6;
            let fd = (s.eval_norm(&p.retract(&dir, h)) - s.eval_norm(&p.retract(&dir, -h))) / (2.0 * h);
            let an: f64 = g.iter().zip(&dir).map(|(a, b)| (a[0].conj() * b[0] + a[1].conj() * b[1]).re).sum();
            assert!((fd - an).abs() < 1e-6 * (1.0 + an.abs()), "{model}: {fd} vs {an}");
        }
    }

    #[test]
    fn json_shape() {
        let s = SectionSpace::new(Model::Cp1, 1).section(vec![Complex64::new(1.0, 2.0), Complex64::new(0.0, -1.0)]).unwrap();
        let txt = serde_json::to_string(&s.to_json()).unwrap();
        assert_eq!(txt, r#"{"model":"cp1","k":1,"coeffs":[[1.0,2.0],[0.0,-1.0]]}"#);
        let back = Section::from_json(&serde_json::from_str(&txt).unwrap()).unwrap();
        assert_eq!(back, s);
    }
}
