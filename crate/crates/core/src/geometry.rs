//! Model geometries: the Riemann sphere `CP1` with the Fubini–Study metric
//! and the product `CP1 x CP1`.
//!
//! Points of `CP1` are unit vectors of `C^2` modulo phase. The distance is
//! `d(p, q) = arccos |<p, q>|`, so `d` ranges over `[0, pi/2]` and the angle
//! on the round sphere is `2 d`. Volume is normalized to total mass one.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::quad;

/// Inputs with norm at or below this are rejected.
pub const ZERO_TOL: f64 = 1e-12;
/// A coordinate counts as nonzero for phase normalization above this modulus.
pub const PHASE_TOL: f64 = 1e-12;

const GOLDEN_ANGLE: f64 = PI * 0.763_932_022_500_210_3; // pi * (3 - sqrt 5)

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Model {
    #[serde(rename = "cp1")]
    Cp1,
    #[serde(rename = "cp1xcp1")]
    Cp1xCp1,
}

impl Model {
    /// Complex dimension.
    pub fn dim(self) -> usize {
        match self {
            Model::Cp1 => 1,
            Model::Cp1xCp1 => 2,
        }
    }

    /// Number of `CP1` factors; equals the complex dimension on both models.
    pub fn factors(self) -> usize {
        self.dim()
    }

    pub fn diameter(self) -> f64 {
        FRAC_PI_2 * (self.dim() as f64).sqrt()
    }

    pub fn name(self) -> &'static str {
        match self {
            Model::Cp1 => "cp1",
            Model::Cp1xCp1 => "cp1xcp1",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Model {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cp1" => Ok(Model::Cp1),
            "cp1xcp1" => Ok(Model::Cp1xCp1),
            other => Err(Error::Domain(format!("unknown model {other:?}"))),
        }
    }
}

/// A point of `CP1`, stored as its canonical unit representative: the first
/// coordinate with modulus above [`PHASE_TOL`] is real and positive.
#[derive(Debug, Clone, Copy)]
pub struct ProjPoint {
    v: [Complex64; 2],
}

impl ProjPoint {
    pub fn canonicalize(raw: [Complex64; 2]) -> Result<Self> {
        let norm = (raw[0].norm_sqr() + raw[1].norm_sqr()).sqrt();
        if !(norm > ZERO_TOL) {
            return Err(Error::ZeroVector);
        }
        let mut v = [raw[0] / norm, raw[1] / norm];
        let lead = if v[0].norm() > PHASE_TOL { v[0] } else { v[1] };
        let phase = lead.conj() / lead.norm();
        v[0] *= phase;
        v[1] *= phase;
        if v[0].norm() > PHASE_TOL {
            v[0] = Complex64::new(v[0].norm(), 0.0);
        } else {
            v[1] = Complex64::new(v[1].norm(), 0.0);
        }
        Ok(Self { v })
    }

    /// The affine point `[1 : z]`.
    pub fn from_affine(z: Complex64) -> Self {
        Self::canonicalize([Complex64::new(1.0, 0.0), z]).expect("nonzero")
    }

    /// Point corresponding to a direction on the unit 2-sphere, with the
    /// north pole `(0, 0, 1)` mapped to `[1 : 0]`.
    pub fn from_sphere(x: [f64; 3]) -> Self {
        let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        let z = (x[2] / r).clamp(-1.0, 1.0);
        let phi = x[1].atan2(x[0]);
        Self::from_polar((1.0 + z) * 0.5, phi)
    }

    /// `cos^2(theta/2)` and azimuth; the representative is
    /// `(cos(theta/2), e^{i phi} sin(theta/2))`.
    fn from_polar(cos_half_sq: f64, phi: f64) -> Self {
        let c = cos_half_sq.clamp(0.0, 1.0).sqrt();
        let s = (1.0 - cos_half_sq).clamp(0.0, 1.0).sqrt();
        Self::canonicalize([Complex64::new(c, 0.0), Complex64::from_polar(s, phi)]).expect("unit")
    }

    pub fn to_sphere(&self) -> [f64; 3] {
        let w = self.v[1] * self.v[0].conj();
        [2.0 * w.re, 2.0 * w.im, self.v[0].norm_sqr() - self.v[1].norm_sqr()]
    }

    pub fn coords(&self) -> [Complex64; 2] {
        self.v
    }

    pub fn to_reals(&self) -> [f64; 4] {
        [self.v[0].re, self.v[0].im, self.v[1].re, self.v[1].im]
    }

    pub fn from_reals(r: [f64; 4]) -> Result<Self> {
        Self::canonicalize([Complex64::new(r[0], r[1]), Complex64::new(r[2], r[3])])
    }

    /// `|<p, q>|` on unit representatives, i.e. `cos d(p, q)`.
    pub fn overlap(&self, other: &ProjPoint) -> f64 {
        self.inner(other).norm()
    }

    /// Hermitian product `p0 conj(q0) + p1 conj(q1)` of the representatives.
    pub fn inner(&self, other: &ProjPoint) -> Complex64 {
        self.v[0] * other.v[0].conj() + self.v[1] * other.v[1].conj()
    }

    /// `|p ∧ q|`, i.e. `sin d(p, q)`.
    pub fn wedge(&self, other: &ProjPoint) -> f64 {
        (self.v[0] * other.v[1] - self.v[1] * other.v[0]).norm()
    }

    pub fn distance(&self, other: &ProjPoint) -> f64 {
        self.wedge(other).atan2(self.overlap(other))
    }

    /// Moves along a tangent direction of the unit sphere of `C^2` and
    /// renormalizes.
    pub fn retract(&self, dir: [Complex64; 2], t: f64) -> Self {
        Self::canonicalize([self.v[0] + dir[0] * t, self.v[1] + dir[1] * t])
            .expect("retraction of a unit vector along a tangent stays nonzero")
    }

    /// Orthogonal point (distance `pi/2`).
    pub fn antipode(&self) -> Self {
        Self::canonicalize([-self.v[1].conj(), self.v[0].conj()]).expect("unit")
    }

    pub fn uniform<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let g: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
            if let Ok(p) = Self::from_reals(g) {
                return p;
            }
        }
    }
}

impl PartialEq for ProjPoint {
    /// Coordinatewise agreement of canonical representatives to `1e-12`.
    fn eq(&self, other: &Self) -> bool {
        (0..2).all(|i| {
            (self.v[i].re - other.v[i].re).abs() <= 1e-12 && (self.v[i].im - other.v[i].im).abs() <= 1e-12
        })
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_reals().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProjPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = <[f64; 4]>::deserialize(d)?;
        ProjPoint::from_reals(r).map_err(D::Error::custom)
    }
}

/// A point of one of the model geometries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Point {
    Cp1(ProjPoint),
    Product([ProjPoint; 2]),
}

impl Point {
    pub fn model(&self) -> Model {
        match self {
            Point::Cp1(_) => Model::Cp1,
            Point::Product(_) => Model::Cp1xCp1,
        }
    }

    pub fn factors(&self) -> &[ProjPoint] {
        match self {
            Point::Cp1(p) => std::slice::from_ref(p),
            Point::Product(ps) => ps,
        }
    }

    pub fn from_factors(model: Model, f: &[ProjPoint]) -> Self {
        match model {
            Model::Cp1 => Point::Cp1(f[0]),
            Model::Cp1xCp1 => Point::Product([f[0], f[1]]),
        }
    }

    pub fn as_cp1(&self) -> Option<&ProjPoint> {
        match self {
            Point::Cp1(p) => Some(p),
            Point::Product(_) => None,
        }
    }

    /// Factor distances combined in the Euclidean way.
    pub fn distance(&self, other: &Point) -> f64 {
        debug_assert_eq!(self.model(), other.model());
        self.factors()
            .iter()
            .zip(other.factors())
            .map(|(a, b)| a.distance(b).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// Retraction along per-factor tangent directions.
    pub fn retract(&self, dir: &[[Complex64; 2]], t: f64) -> Point {
        match self {
            Point::Cp1(p) => Point::Cp1(p.retract(dir[0], t)),
            Point::Product([p, q]) => Point::Product([p.retract(dir[0], t), q.retract(dir[1], t)]),
        }
    }

    pub fn to_reals(&self) -> Vec<f64> {
        self.factors().iter().flat_map(|p| p.to_reals()).collect()
    }

    pub fn from_reals(model: Model, r: &[f64]) -> Result<Self> {
        let need = 4 * model.factors();
        if r.len() != need {
            return Err(Error::CountMismatch { expected: need, got: r.len() });
        }
        let fs: Vec<ProjPoint> = r
            .chunks(4)
            .map(|c| ProjPoint::from_reals([c[0], c[1], c[2], c[3]]))
            .collect::<Result<_>>()?;
        Ok(Point::from_factors(model, &fs))
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_reals().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = Vec::<f64>::deserialize(d)?;
        let model = match r.len() {
            4 => Model::Cp1,
            8 => Model::Cp1xCp1,
            n => return Err(D::Error::custom(format!("point needs 4 or 8 reals, got {n}"))),
        };
        Point::from_reals(model, &r).map_err(D::Error::custom)
    }
}

pub fn distance(p: &Point, q: &Point) -> f64 {
    p.distance(q)
}

/// Draw from the normalized Fubini–Study volume (independently per factor).
pub fn uniform_sample<R: Rng + ?Sized>(model: Model, rng: &mut R) -> Point {
    match model {
        Model::Cp1 => Point::Cp1(ProjPoint::uniform(rng)),
        Model::Cp1xCp1 => Point::Product([ProjPoint::uniform(rng), ProjPoint::uniform(rng)]),
    }
}

/// Normalized volume of the closed metric ball of radius `r`.
pub fn cap_measure(model: Model, r: f64) -> Result<f64> {
    let diam = model.diameter();
    if !(r >= 0.0 && r <= diam + 1e-12) {
        return Err(Error::Domain(format!("cap radius {r} outside [0, {diam}]")));
    }
    let r = r.min(diam);
    Ok(match model {
        Model::Cp1 => r.sin().powi(2),
        Model::Cp1xCp1 => product_cap(r),
    })
}

// Each factor distance has density sin(2d) on [0, pi/2] and CDF sin^2(d).
// Integrate the first factor against the CDF of the second; the integrand
// sin^2(sqrt(r^2 - t^2)) is analytic in t, with a kink only where the inner
// radius reaches pi/2.
fn product_cap(r: f64) -> f64 {
    if r == 0.0 {
        return 0.0;
    }
    let outer = r.min(FRAC_PI_2);
    let full = (r * r - FRAC_PI_2 * FRAC_PI_2).max(0.0).sqrt().min(outer);
    let inner = |t: f64| {
        let u = (r * r - t * t).max(0.0).sqrt();
        (2.0 * t).sin() * u.min(FRAC_PI_2).sin().powi(2)
    };
    let head = if full > 0.0 { full.sin().powi(2) } else { 0.0 };
    let tail = if outer > full { quad::integrate(inner, full, outer, 64) } else { 0.0 };
    (head + tail).min(1.0)
}

/// Tensor rule on each `CP1` factor: Gauss–Legendre in `cos theta` with
/// `degree + 2` nodes times `2 degree + 4` equispaced azimuths. Exact for
/// `F conj(G)` whenever `F`, `G` are sections of level at most `degree`.
pub fn quadrature_rule(model: Model, degree: u32) -> Vec<(Point, f64)> {
    let factor = cp1_quadrature(degree);
    match model {
        Model::Cp1 => factor.into_iter().map(|(p, w)| (Point::Cp1(p), w)).collect(),
        Model::Cp1xCp1 => {
            let mut out = Vec::with_capacity(factor.len() * factor.len());
            for &(p, wp) in &factor {
                for &(q, wq) in &factor {
                    out.push((Point::Product([p, q]), wp * wq));
                }
            }
            out
        }
    }
}

fn cp1_quadrature(degree: u32) -> Vec<(ProjPoint, f64)> {
    let n_t = degree as usize + 2;
    let n_phi = 2 * degree as usize + 4;
    let (t, w) = quad::gauss_legendre(n_t);
    let mut out = Vec::with_capacity(n_t * n_phi);
    for (&ti, &wi) in t.iter().zip(&w) {
        for j in 0..n_phi {
            let phi = 2.0 * PI * j as f64 / n_phi as f64;
            out.push((ProjPoint::from_polar((1.0 + ti) * 0.5, phi), 0.5 * wi / n_phi as f64));
        }
    }
    out
}

/// Spherical Fibonacci lattice with `n` nodes, mapped to `CP1`.
pub fn fibonacci_cp1(n: usize) -> Vec<ProjPoint> {
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            ProjPoint::from_polar((1.0 + z) * 0.5, GOLDEN_ANGLE * i as f64)
        })
        .collect()
}

/// Quasi-uniform grid on the model: the Fibonacci lattice per factor, taken
/// as a tensor product on `CP1 x CP1`.
pub fn fibonacci_grid(model: Model, per_factor: usize) -> Vec<Point> {
    let f = fibonacci_cp1(per_factor);
    match model {
        Model::Cp1 => f.into_iter().map(Point::Cp1).collect(),
        Model::Cp1xCp1 => f.iter().flat_map(|&p| f.iter().map(move |&q| Point::Product([p, q]))).collect(),
    }
}
