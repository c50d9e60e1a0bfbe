use std::ffi::{CStr, CString};
use std::ptr;

use crvol_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(crvol_last_error()) }.to_string_lossy().into_owned()
}

fn domain(name: &str) -> *mut CrvolDomain {
    let name = CString::new(name).unwrap();
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { crvol_domain_builtin(name.as_ptr(), &mut d) }, CrvolStatus::Ok);
    assert!(!d.is_null());
    d
}

#[test]
fn ball_invariants_through_handles() {
    let d = domain("unit_ball");
    let mut p = CrvolPoint::default();
    assert_eq!(unsafe { crvol_boundary_point(d, 0.4, 1.0, -2.0, &mut p) }, CrvolStatus::Ok);
    assert!((p.z_re.hypot(p.z_im).hypot(p.w_re.hypot(p.w_im)) - 1.0).abs() < 1e-14);
    let mut inv = CrvolPointInvariants::default();
    assert_eq!(unsafe { crvol_webster_at(d, p, &mut inv) }, CrvolStatus::Ok);
    assert!((inv.scal - 2.0).abs() < 1e-10);
    assert!(inv.a11_re.hypot(inv.a11_im) < 1e-10);
    assert_eq!(last_error(), "");
    unsafe { crvol_domain_free(d) };
}

#[test]
fn analyze_and_volume() {
    let d = domain("unit_ball");
    assert_eq!(unsafe { crvol_domain_set_mesh(d, 12, 6, 6) }, CrvolStatus::Ok);
    let mut it = CrvolIntegrals::default();
    assert_eq!(unsafe { crvol_analyze(d, &mut it) }, CrvolStatus::Ok);
    let half_pi2 = std::f64::consts::PI.powi(2) / 2.0;
    assert!((it.c0 / half_pi2 - 1.0).abs() < 1e-10);
    assert!((it.c1 / half_pi2 - 1.0).abs() < 1e-10);
    let mut v = 0.0;
    assert_eq!(unsafe { crvol_volume_of_sublevel(d, -1.0, &mut v) }, CrvolStatus::Ok);
    let mut exact = 0.0;
    assert_eq!(unsafe { crvol_ball_closed_form(CrvolBallQuantity::Volume, -1.0, &mut exact) }, CrvolStatus::Ok);
    assert!((v - exact).abs() < 1e-9);
    unsafe { crvol_domain_free(d) };
}

#[test]
fn fit_round_trip() {
    let eps: Vec<f64> = (0..12).map(|k| -0.5 * 0.8f64.powi(k)).collect();
    let vol: Vec<f64> = eps.iter().map(|e| 2.0 / (e * e) - 1.0 / e + 0.75 + 0.1 * e).collect();
    let mut f = CrvolVolumeExpansion::default();
    assert_eq!(unsafe { crvol_fit_volume(eps.as_ptr(), vol.as_ptr(), eps.len(), &mut f) }, CrvolStatus::Ok);
    assert!((f.renormalized_volume - 0.75).abs() < 1e-9);
    assert!(f.log_coefficient.abs() < 1e-9);
}

#[test]
fn anomaly_of_constant_is_zero() {
    let d = domain("unit_ball");
    unsafe { crvol_domain_set_mesh(d, 4, 6, 6) };
    let text = CString::new("0.25").unwrap();
    let mut e = ptr::null_mut();
    assert_eq!(unsafe { crvol_expr_parse(text.as_ptr(), &mut e) }, CrvolStatus::Ok);
    let mut a = CrvolAnomaly::default();
    assert_eq!(unsafe { crvol_conformal_anomaly(d, e, &mut a) }, CrvolStatus::Ok);
    assert!(a.full.abs() < 1e-12 && a.linearized.abs() < 1e-12);
    unsafe {
        crvol_expr_free(e);
        crvol_domain_free(d);
    }
}

#[test]
fn errors_set_status_and_message() {
    let mut d = ptr::null_mut();
    let bad = CString::new("torus(2)").unwrap();
    assert_eq!(unsafe { crvol_domain_builtin(bad.as_ptr(), &mut d) }, CrvolStatus::UnknownDomain);
    assert!(last_error().contains("torus"));
    assert!(d.is_null());

    let expr = CString::new("1 + * z").unwrap();
    let mut e = ptr::null_mut();
    assert_eq!(unsafe { crvol_expr_parse(expr.as_ptr(), &mut e) }, CrvolStatus::Syntax);

    assert_eq!(unsafe { crvol_domain_builtin(ptr::null(), &mut d) }, CrvolStatus::NullPointer);
    let mut x = 0.0;
    assert_eq!(unsafe { crvol_volume_of_sublevel(ptr::null(), -1.0, &mut x) }, CrvolStatus::NullPointer);

    let ell = domain("ellipsoid(1,1.5)");
    assert_eq!(unsafe { crvol_volume_of_sublevel(ell, -0.1, &mut x) }, CrvolStatus::Unsupported);
    assert!(last_error().contains("special_phi"));
    assert_eq!(unsafe { crvol_ball_closed_form(CrvolBallQuantity::HTilde, 3.0, &mut x) }, CrvolStatus::Numerical);
    unsafe { crvol_domain_free(ell) };
}

#[test]
fn config_document() {
    let doc = CString::new("name = \"squashed\"\nrho = \"abs2(z) + 2*abs2(w) - 1\"\n").unwrap();
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { crvol_domain_from_toml(doc.as_ptr(), &mut d) }, CrvolStatus::Ok);
    unsafe { crvol_domain_free(d) };
    let bad = CString::new("name = 3").unwrap();
    assert_eq!(unsafe { crvol_domain_from_toml(bad.as_ptr(), &mut d) }, CrvolStatus::Config);
}

#[test]
fn header_declares_the_api() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/crvol.h")).unwrap();
    for name in ["crvol_domain_builtin", "crvol_last_error", "crvol_fit_volume", "typedef struct CrvolDomain CrvolDomain", "CRVOL_STATUS_OK"] {
        assert!(h.contains(name), "header lacks {name}");
    }
}

#[test]
fn header_compiles_as_c() {
    let dir = std::env::temp_dir().join(format!("crvol-header-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("use.c");
    std::fs::write(
        &src,
        "#include \"crvol.h\"\nint main(void) { CrvolDomain *d = 0; CrvolStatus s = crvol_domain_builtin(\"unit_ball\", &d); (void)s; return 0; }\n",
    )
    .unwrap();
    let status = std::process::Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-I", concat!(env!("CARGO_MANIFEST_DIR"), "/include")])
        .arg(&src)
        .status();
    match status {
        Ok(s) => assert!(s.success(), "header does not compile"),
        Err(_) => eprintln!("no C compiler found; header syntax not checked"),
    }
}
