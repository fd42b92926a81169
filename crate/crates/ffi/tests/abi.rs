use std::ffi::CStr;
use std::ptr;

use fekete_lab_ffi::*;

fn space(model: u32, k: u32) -> *mut FkSpace {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { fk_space_new(model, k, &mut s) }, FkStatus::Ok);
    s
}

fn last_error() -> String {
    let p = fk_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

const NORTH: [f64; 4] = [1.0, 0.0, 0.0, 0.0];
const SOUTH: [f64; 4] = [0.0, 0.0, 1.0, 0.0];

#[test]
fn space_queries() {
    let s = space(FK_MODEL_CP1XCP1, 3);
    unsafe {
        assert_eq!(fk_space_dim(s), 16);
        assert_eq!(fk_space_point_len(s), 8);
        let mut buf = vec![0.0; 32];
        let p = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0];
        assert_eq!(fk_space_eval_basis(s, p.as_ptr(), buf.as_mut_ptr(), buf.len()), FkStatus::Ok);
        let k_pp: f64 = buf.chunks(2).map(|c| c[0] * c[0] + c[1] * c[1]).sum();
        assert!((k_pp - 16.0).abs() < 1e-12);
        let mut v = 0.0;
        assert_eq!(fk_space_bergman_norm(s, p.as_ptr(), p.as_ptr(), &mut v), FkStatus::Ok);
        assert!((v - 16.0).abs() < 1e-12);
        fk_space_free(s);
    }
    assert_eq!(unsafe { fk_space_dim(ptr::null()) }, 0);
}

#[test]
fn antipodal_pair() {
    let s = space(FK_MODEL_CP1, 1);
    let pts = [NORTH, SOUTH].concat();
    unsafe {
        let mut v = 0.0;
        assert_eq!(fk_space_vandermonde_lognorm(s, pts.as_ptr(), 2, &mut v), FkStatus::Ok);
        assert!((v - 2f64.ln()).abs() < 1e-12);

        let mut c = ptr::null_mut();
        assert_eq!(fk_config_from_points(s, pts.as_ptr(), &mut c), FkStatus::Ok);
        let mut cert = FkCertificate::default();
        assert_eq!(fk_config_certificate(c, &mut cert), FkStatus::Ok);
        assert!(cert.certified);
        assert!((cert.max_lagrange_sup - 1.0).abs() < 1e-9);
        let mut l = 0.0;
        assert_eq!(fk_config_lebesgue(c, &mut l), FkStatus::Ok);
        assert!((l - 2f64.sqrt()).abs() < 1e-6);

        let mut sec = ptr::null_mut();
        assert_eq!(fk_section_lagrange(c, 0, &mut sec), FkStatus::Ok);
        let (mut at0, mut at1) = (0.0, 0.0);
        fk_section_eval_norm(sec, NORTH.as_ptr(), &mut at0);
        fk_section_eval_norm(sec, SOUTH.as_ptr(), &mut at1);
        assert!((at0 - 1.0).abs() < 1e-12 && at1.abs() < 1e-12);
        fk_section_free(sec);
        assert_eq!(fk_section_lagrange(c, 2, &mut sec), FkStatus::InvalidArgument);
        fk_config_free(c);
        fk_space_free(s);
    }
}

#[test]
fn solve_octahedron() {
    let s = space(FK_MODEL_CP1, 5);
    unsafe {
        let mut c = ptr::null_mut();
        assert_eq!(fk_fekete_solve(s, 7, 4, &mut c), FkStatus::Ok);
        assert_eq!(fk_config_num_points(c), 6);
        let mut cert = FkCertificate::default();
        fk_config_certificate(c, &mut cert);
        assert!(cert.certified);
        let mut pts = vec![0.0; 24];
        assert_eq!(fk_config_points(c, pts.as_mut_ptr(), 23), FkStatus::BufferTooSmall);
        assert_eq!(fk_config_points(c, pts.as_mut_ptr(), 24), FkStatus::Ok);
        let mut v = 0.0;
        fk_space_vandermonde_lognorm(s, pts.as_ptr(), 6, &mut v);
        assert!((v - cert.log_vdm).abs() < 1e-9);
        fk_config_free(c);
        fk_space_free(s);
    }
}

#[test]
fn gaussian_sections_are_reproducible() {
    let s = space(FK_MODEL_CP1, 6);
    unsafe {
        let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
        fk_section_gaussian(s, 11, 3, &mut a);
        fk_section_gaussian(s, 11, 3, &mut b);
        let (mut x, mut y) = (0.0, 0.0);
        fk_section_eval_norm(a, NORTH.as_ptr(), &mut x);
        fk_section_eval_norm(b, NORTH.as_ptr(), &mut y);
        assert_eq!(x, y);
        let mut sup = 0.0;
        assert_eq!(fk_section_sup_norm(a, &mut sup), FkStatus::Ok);
        assert!(sup >= x);
        fk_section_free(a);
        fk_section_free(b);
        fk_space_free(s);
    }
}

#[test]
fn errors_set_status_and_message() {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { fk_space_new(9, 1, &mut s) }, FkStatus::InvalidArgument);
    assert!(last_error().contains("unknown model"));
    assert_eq!(unsafe { fk_space_new(FK_MODEL_CP1, 1, ptr::null_mut()) }, FkStatus::NullPointer);

    let s = space(FK_MODEL_CP1, 1);
    unsafe {
        let mut c = ptr::null_mut();
        let same = [NORTH, NORTH].concat();
        assert_eq!(fk_config_from_points(s, same.as_ptr(), &mut c), FkStatus::Singular);
        let zero = [0.0; 4];
        let mut v = 0.0;
        assert_eq!(fk_space_bergman_norm(s, zero.as_ptr(), NORTH.as_ptr(), &mut v), FkStatus::InvalidArgument);
        assert_eq!(fk_space_bergman_norm(s, ptr::null(), NORTH.as_ptr(), &mut v), FkStatus::NullPointer);
        let mut buf = [0.0; 3];
        assert_eq!(fk_space_eval_basis(s, NORTH.as_ptr(), buf.as_mut_ptr(), 3), FkStatus::BufferTooSmall);
        fk_space_free(s);
    }
    let s = space(FK_MODEL_CP1, 0);
    unsafe {
        let mut c = ptr::null_mut();
        assert_eq!(fk_fekete_solve(s, 1, 1, &mut c), FkStatus::InvalidArgument);
        assert!(c.is_null());
        fk_space_free(s);
    }
    let mut v = 0.0;
    let status = unsafe { fk_space_bergman_norm(ptr::null(), NORTH.as_ptr(), NORTH.as_ptr(), &mut v) };
    assert_eq!(status, FkStatus::NullPointer);
    assert!(last_error().contains("space"));
}

#[test]
fn version_is_a_c_string() {
    let v = unsafe { CStr::from_ptr(fk_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
