//! C ABI for `fekete-lab`.
//!
//! Handles are opaque and owned by the caller, who releases them with the
//! matching `*_free` function. Every fallible call returns an [`FkStatus`];
//! on failure [`fk_last_error_message`] describes the error for the calling
//! thread. Points are passed as flat `double` arrays with four reals
//! `(re z0, im z0, re z1, im z1)` per `CP1` factor, so `fk_space_point_len`
//! doubles per point.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use fekete_lab::interpolation::{lagrange_sections, lebesgue_constant};
use fekete_lab::{Configuration, Error, GaussianEnsemble, Model, Point, Section, SectionSpace, SolverOptions};

pub const FK_MODEL_CP1: u32 = 0;
pub const FK_MODEL_CP1XCP1: u32 = 1;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    BufferTooSmall = 3,
    Mismatch = 4,
    Singular = 5,
    NonConvergence = 6,
    Io = 7,
    Panic = 8,
}

pub struct FkSpace(SectionSpace);

pub struct FkConfig(Configuration);

pub struct FkSection(Section);

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct FkCertificate {
    pub log_vdm: f64,
    pub max_lagrange_sup: f64,
    pub grad_norm: f64,
    pub certified: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(FkStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Singular => FkStatus::Singular,
            Error::NonConvergence { .. } => FkStatus::NonConvergence,
            Error::SpaceMismatch
            | Error::CountMismatch { .. }
            | Error::ModelMismatch(_)
            | Error::LevelMismatch { .. } => FkStatus::Mismatch,
            Error::Io(_) | Error::Schema(_) => FkStatus::Io,
            _ => FkStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn fail<T>(status: FkStatus, msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure(status, msg.into()))
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> FkStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FkStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_error(format!("internal panic: {msg}"));
            FkStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().map_or_else(|| fail(FkStatus::NullPointer, format!("{what} is null")), Ok)
}

unsafe fn slice<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], Failure> {
    if p.is_null() {
        return fail(FkStatus::NullPointer, format!("{what} is null"));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn out_slice<'a>(p: *mut f64, len: usize, need: usize, what: &str) -> Result<&'a mut [f64], Failure> {
    if p.is_null() {
        return fail(FkStatus::NullPointer, format!("{what} is null"));
    }
    if len < need {
        return fail(FkStatus::BufferTooSmall, format!("{what} holds {len} doubles, {need} needed"));
    }
    Ok(std::slice::from_raw_parts_mut(p, len))
}

unsafe fn write<T>(out: *mut T, v: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return fail(FkStatus::NullPointer, format!("{what} is null"));
    }
    out.write(v);
    Ok(())
}

fn point_len(model: Model) -> usize {
    4 * model.factors()
}

fn points(model: Model, reals: &[f64]) -> Result<Vec<Point>, Failure> {
    let len = point_len(model);
    if !reals.len().is_multiple_of(len) {
        return fail(FkStatus::InvalidArgument, format!("{} reals is not a multiple of {len}", reals.len()));
    }
    Ok(reals.chunks(len).map(|c| Point::from_reals(model, c)).collect::<Result<_, _>>()?)
}

unsafe fn point(space: &SectionSpace, p: *const f64, what: &str) -> Result<Point, Failure> {
    let model = space.model();
    Ok(Point::from_reals(model, slice(p, point_len(model), what)?)?)
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn fk_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn fk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Creates the section space `H^0(X, L^k)` for `model` (`FK_MODEL_*`).
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fk_space_new(model: u32, k: u32, out: *mut *mut FkSpace) -> FkStatus {
    guard(|| {
        let model = match model {
            FK_MODEL_CP1 => Model::Cp1,
            FK_MODEL_CP1XCP1 => Model::Cp1xCp1,
            m => return fail(FkStatus::InvalidArgument, format!("unknown model {m}")),
        };
        write(out, Box::into_raw(Box::new(FkSpace(SectionSpace::new(model, k)))), "out")
    })
}

/// # Safety
/// `space` must be null or a handle from [`fk_space_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fk_space_free(space: *mut FkSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

/// Dimension `N` of the space; 0 for a null handle.
///
/// # Safety
/// `space` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fk_space_dim(space: *const FkSpace) -> usize {
    space.as_ref().map_or(0, |s| s.0.dim())
}

/// Doubles per point (4 on `CP1`, 8 on `CP1 x CP1`); 0 for a null handle.
///
/// # Safety
/// `space` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fk_space_point_len(space: *const FkSpace) -> usize {
    space.as_ref().map_or(0, |s| point_len(s.0.model()))
}

/// Writes the orthonormal basis at `point` as `N` interleaved complex
/// values (`2N` doubles).
///
/// # Safety
/// `point` must hold `fk_space_point_len` doubles and `out` `out_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn fk_space_eval_basis(
    space: *const FkSpace,
    point: *const f64,
    out: *mut f64,
    out_len: usize,
) -> FkStatus {
    guard(|| {
        let space = &borrow(space, "space")?.0;
        let p = self::point(space, point, "point")?;
        let out = out_slice(out, out_len, 2 * space.dim(), "out")?;
        for (o, b) in out.chunks_mut(2).zip(space.eval_basis(&p)) {
            o[0] = b.re;
            o[1] = b.im;
        }
        Ok(())
    })
}

/// `|K_k(p, q)|` of the Bergman kernel.
///
/// # Safety
/// `p` and `q` must hold `fk_space_point_len` doubles each.
#[no_mangle]
pub unsafe extern "C" fn fk_space_bergman_norm(
    space: *const FkSpace,
    p: *const f64,
    q: *const f64,
    out: *mut f64,
) -> FkStatus {
    guard(|| {
        let space = &borrow(space, "space")?.0;
        let (p, q) = (point(space, p, "p")?, point(space, q, "q")?);
        write(out, space.bergman_norm(&p, &q), "out")
    })
}

/// `log |det(B_i(x_j))|` for `n_points` points; `-inf` when singular.
///
/// # Safety
/// `points` must hold `n_points * fk_space_point_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn fk_space_vandermonde_lognorm(
    space: *const FkSpace,
    points: *const f64,
    n_points: usize,
    out: *mut f64,
) -> FkStatus {
    guard(|| {
        let space = &borrow(space, "space")?.0;
        let reals = slice(points, n_points * point_len(space.model()), "points")?;
        let pts = self::points(space.model(), reals)?;
        write(out, space.vandermonde_lognorm(&pts)?, "out")
    })
}

/// Solves for a Fekete configuration. `starts == 0` selects the default
/// number of random starts.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fk_fekete_solve(
    space: *const FkSpace,
    seed: u64,
    starts: u32,
    out: *mut *mut FkConfig,
) -> FkStatus {
    guard(|| {
        let space = &borrow(space, "space")?.0;
        if out.is_null() {
            return fail(FkStatus::NullPointer, "out is null");
        }
        let opts = SolverOptions { starts: (starts > 0).then_some(starts as usize), ..SolverOptions::with_seed(seed) };
        let c = fekete_lab::fekete::solve_fekete(space, &opts)?;
        write(out, Box::into_raw(Box::new(FkConfig(c))), "out")
    })
}

/// Builds a configuration from given points and evaluates its certificate.
///
/// # Safety
/// `points` must hold `fk_space_dim * fk_space_point_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn fk_config_from_points(
    space: *const FkSpace,
    points: *const f64,
    out: *mut *mut FkConfig,
) -> FkStatus {
    guard(|| {
        let space = &borrow(space, "space")?.0;
        let reals = slice(points, space.dim() * point_len(space.model()), "points")?;
        let pts = self::points(space.model(), reals)?;
        let meta = fekete_lab::SolverMeta { seed: 0, starts: 0, iterations: 0 };
        let c = Configuration::from_points(space, pts, meta)?;
        write(out, Box::into_raw(Box::new(FkConfig(c))), "out")
    })
}

/// # Safety
/// `config` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fk_config_free(config: *mut FkConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

/// Number of points; 0 for a null handle.
///
/// # Safety
/// `config` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fk_config_num_points(config: *const FkConfig) -> usize {
    config.as_ref().map_or(0, |c| c.0.points.len())
}

/// Copies the points into `out` (`num_points * point_len` doubles).
///
/// # Safety
/// `out` must be valid for `out_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn fk_config_points(config: *const FkConfig, out: *mut f64, out_len: usize) -> FkStatus {
    guard(|| {
        let c = &borrow(config, "config")?.0;
        let len = point_len(c.model());
        let out = out_slice(out, out_len, c.points.len() * len, "out")?;
        for (o, p) in out.chunks_mut(len).zip(&c.points) {
            o.copy_from_slice(&p.to_reals());
        }
        Ok(())
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fk_config_certificate(config: *const FkConfig, out: *mut FkCertificate) -> FkStatus {
    guard(|| {
        let c = &borrow(config, "config")?.0;
        let cert = FkCertificate {
            log_vdm: c.log_vdm,
            max_lagrange_sup: c.certificate.max_lagrange_sup,
            grad_norm: c.certificate.grad_norm,
            certified: c.is_certified(),
        };
        write(out, cert, "out")
    })
}

/// Lebesgue constant `max_x sum_j |l_j(x)|` of the configuration.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fk_config_lebesgue(config: *const FkConfig, out: *mut f64) -> FkStatus {
    guard(|| {
        let c = &borrow(config, "config")?.0;
        write(out, lebesgue_constant(&lagrange_sections(c)?).value, "out")
    })
}

/// The `j`-th Lagrange section of the configuration.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fk_section_lagrange(config: *const FkConfig, j: usize, out: *mut *mut FkSection) -> FkStatus {
    guard(|| {
        let c = &borrow(config, "config")?.0;
        if j >= c.points.len() {
            return fail(FkStatus::InvalidArgument, format!("index {j} out of range for {} points", c.points.len()));
        }
        let s = lagrange_sections(c)?.sections.swap_remove(j);
        write(out, Box::into_raw(Box::new(FkSection(s))), "out")
    })
}

/// Draw `trial` of the Gaussian ensemble seeded with `seed`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fk_section_gaussian(
    space: *const FkSpace,
    seed: u64,
    trial: u64,
    out: *mut *mut FkSection,
) -> FkStatus {
    guard(|| {
        let space = &borrow(space, "space")?.0;
        let s = GaussianEnsemble::new(space.clone(), seed).sample_section(trial);
        write(out, Box::into_raw(Box::new(FkSection(s))), "out")
    })
}

/// # Safety
/// `section` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fk_section_free(section: *mut FkSection) {
    if !section.is_null() {
        drop(Box::from_raw(section));
    }
}

/// Pointwise norm `|s(p)|`.
///
/// # Safety
/// `point` must hold `fk_space_point_len` doubles of the section's space.
#[no_mangle]
pub unsafe extern "C" fn fk_section_eval_norm(section: *const FkSection, point: *const f64, out: *mut f64) -> FkStatus {
    guard(|| {
        let s = &borrow(section, "section")?.0;
        let p = self::point(s.space(), point, "point")?;
        write(out, s.eval_norm(&p), "out")
    })
}

/// Sup-norm `max_X |s|` by grid search and local refinement.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fk_section_sup_norm(section: *const FkSection, out: *mut f64) -> FkStatus {
    guard(|| {
        let s = &borrow(section, "section")?.0;
        write(out, s.sup_norm().value, "out")
    })
}
