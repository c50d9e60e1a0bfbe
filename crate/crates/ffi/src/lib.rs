//! C ABI over `crvol`.
//!
//! Domains and expressions are opaque handles created and freed here. Every
//! fallible call returns a [`CrvolStatus`]; on failure the message is kept per
//! thread and read back with [`crvol_last_error`].

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use crvol::crgeom::{boundary_point_radial, build_mesh, evaluate_mesh, hopf_direction, webster_at};
use crvol::dsl::{builtin_from_str, load_domain_spec, parse_expression, DomainSpec, ExprNode};
use crvol::expand::{predicted_c, v_integrals};
use crvol::renorm::{ball, conformal_anomaly, fit_volume_expansion, volume_of_sublevel};
use crvol::{CrError, C64};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrvolStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Syntax = 3,
    Config = 4,
    UnknownDomain = 5,
    Eval = 6,
    Numerical = 7,
    Unsupported = 8,
    Panic = 9,
}

/// Opaque domain handle.
pub struct CrvolDomain {
    spec: DomainSpec,
}

/// Opaque parsed expression.
pub struct CrvolExpr {
    expr: ExprNode,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CrvolPoint {
    pub z_re: f64,
    pub z_im: f64,
    pub w_re: f64,
    pub w_im: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CrvolPointInvariants {
    pub scal: f64,
    pub a11_re: f64,
    pub a11_im: f64,
    pub residual: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CrvolIntegrals {
    pub c0: f64,
    pub c1: f64,
    pub log_coefficient: f64,
    pub log_scale: f64,
    pub contact_volume: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CrvolVolumeExpansion {
    pub c0: f64,
    pub c1: f64,
    pub log_coefficient: f64,
    pub renormalized_volume: f64,
    pub fit_residual: f64,
    pub condition: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CrvolAnomaly {
    pub full: f64,
    pub via_f_derivatives: f64,
    pub linearized: f64,
    pub scale: f64,
}

/// Closed-form ball quantities for [`crvol_ball_closed_form`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrvolBallQuantity {
    /// φ as a function of the radius R.
    Phi = 0,
    HTilde = 1,
    TransverseCurvature = 2,
    SFactor = 3,
    DvProfile = 4,
    /// Vol({φ < ε}) as a function of ε.
    Volume = 5,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let clean: String = message.chars().filter(|&c| c != '\0').collect();
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(clean).expect("nul bytes removed"));
}

fn status_of(e: &CrError) -> CrvolStatus {
    match e {
        CrError::Syntax { .. } => CrvolStatus::Syntax,
        CrError::Config { .. } => CrvolStatus::Config,
        CrError::UnknownDomain(_) => CrvolStatus::UnknownDomain,
        CrError::Eval { .. } => CrvolStatus::Eval,
        CrError::Unsupported(_) => CrvolStatus::Unsupported,
        _ => CrvolStatus::Numerical,
    }
}

/// Runs `f`, converting errors and panics into a status plus the last-error message.
fn guard(f: impl FnOnce() -> Result<(), (CrvolStatus, String)>) -> CrvolStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            CrvolStatus::Ok
        }
        Ok(Err((status, message))) => {
            set_error(&message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            CrvolStatus::Panic
        }
    }
}

fn lib(e: CrError) -> (CrvolStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (CrvolStatus, String) {
    (CrvolStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (CrvolStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (CrvolStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn domain_ref<'a>(d: *const CrvolDomain) -> Result<&'a CrvolDomain, (CrvolStatus, String)> {
    d.as_ref().ok_or_else(|| null("domain"))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), (CrvolStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn crvol_version() -> *const c_char {
    static VERSION: &[u8] = concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes();
    VERSION.as_ptr() as *const c_char
}

/// Message of the last failed call on this thread, empty after a success.
/// The pointer stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn crvol_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Built-in domain by name, e.g. `"unit_ball"` or `"bumped_ball(0.05,2)"`.
#[no_mangle]
pub unsafe extern "C" fn crvol_domain_builtin(name: *const c_char, out: *mut *mut CrvolDomain) -> CrvolStatus {
    guard(|| {
        let name = read_str(name, "name")?;
        let spec = builtin_from_str(name).map_err(lib)?;
        write_out(out, Box::into_raw(Box::new(CrvolDomain { spec })))
    })
}

/// Domain from a TOML configuration document.
#[no_mangle]
pub unsafe extern "C" fn crvol_domain_from_toml(text: *const c_char, out: *mut *mut CrvolDomain) -> CrvolStatus {
    guard(|| {
        let text = read_str(text, "config text")?;
        let spec = load_domain_spec(text).map_err(lib)?;
        write_out(out, Box::into_raw(Box::new(CrvolDomain { spec })))
    })
}

#[no_mangle]
pub unsafe extern "C" fn crvol_domain_free(d: *mut CrvolDomain) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

#[no_mangle]
pub unsafe extern "C" fn crvol_domain_set_mesh(d: *mut CrvolDomain, n_eta: usize, n_xi1: usize, n_xi2: usize) -> CrvolStatus {
    guard(|| {
        let d = d.as_mut().ok_or_else(|| null("domain"))?;
        if n_eta == 0 || n_xi1 == 0 || n_xi2 == 0 {
            return Err((CrvolStatus::Config, "mesh resolutions must be positive".into()));
        }
        d.spec.mesh = [n_eta, n_xi1, n_xi2];
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn crvol_domain_set_order(d: *mut CrvolDomain, order: usize) -> CrvolStatus {
    guard(|| {
        let d = d.as_mut().ok_or_else(|| null("domain"))?;
        d.spec.jet_order = order;
        Ok(())
    })
}

/// Parses an expression in `z`, `w`.
#[no_mangle]
pub unsafe extern "C" fn crvol_expr_parse(text: *const c_char, out: *mut *mut CrvolExpr) -> CrvolStatus {
    guard(|| {
        let text = read_str(text, "expression")?;
        let expr = parse_expression(text).map_err(lib)?;
        write_out(out, Box::into_raw(Box::new(CrvolExpr { expr })))
    })
}

#[no_mangle]
pub unsafe extern "C" fn crvol_expr_free(e: *mut CrvolExpr) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// Boundary point on the ray through the Hopf direction `(η, ξ₁, ξ₂)`.
#[no_mangle]
pub unsafe extern "C" fn crvol_boundary_point(
    d: *const CrvolDomain,
    eta: f64,
    xi1: f64,
    xi2: f64,
    out: *mut CrvolPoint,
) -> CrvolStatus {
    guard(|| {
        let d = domain_ref(d)?;
        let p = boundary_point_radial(&d.spec, hopf_direction(eta, xi1, xi2)).map_err(lib)?;
        write_out(out, CrvolPoint { z_re: p.0.re, z_im: p.0.im, w_re: p.1.re, w_im: p.1.im })
    })
}

/// Webster curvature and torsion at a boundary point.
#[no_mangle]
pub unsafe extern "C" fn crvol_webster_at(d: *const CrvolDomain, p: CrvolPoint, out: *mut CrvolPointInvariants) -> CrvolStatus {
    guard(|| {
        let d = domain_ref(d)?;
        let r = webster_at(&d.spec, (C64::new(p.z_re, p.z_im), C64::new(p.w_re, p.w_im))).map_err(lib)?;
        write_out(out, CrvolPointInvariants { scal: r.scal, a11_re: r.a11.re, a11_im: r.a11.im, residual: r.residual })
    })
}

/// `c₀, c₁` and the log coefficient from boundary integrals on the domain's mesh.
#[no_mangle]
pub unsafe extern "C" fn crvol_analyze(d: *const CrvolDomain, out: *mut CrvolIntegrals) -> CrvolStatus {
    guard(|| {
        let d = domain_ref(d)?;
        let mesh = build_mesh(&d.spec, d.spec.mesh).map_err(lib)?;
        let rec = evaluate_mesh(&d.spec, &mesh).map_err(lib)?;
        let v = v_integrals(&mesh, &rec);
        let (c0, c1) = predicted_c(&v);
        write_out(out, CrvolIntegrals { c0, c1, log_coefficient: v.l, log_scale: v.l_scale, contact_volume: mesh.measure() })
    })
}

/// Volume of `{φ < ε}`; needs a special defining function.
#[no_mangle]
pub unsafe extern "C" fn crvol_volume_of_sublevel(d: *const CrvolDomain, eps: f64, out: *mut f64) -> CrvolStatus {
    guard(|| {
        let d = domain_ref(d)?;
        write_out(out, volume_of_sublevel(&d.spec, eps).map_err(lib)?)
    })
}

/// Fits the volume expansion to `n` samples `(eps[k], vol[k])`.
#[no_mangle]
pub unsafe extern "C" fn crvol_fit_volume(
    eps: *const f64,
    vol: *const f64,
    n: usize,
    out: *mut CrvolVolumeExpansion,
) -> CrvolStatus {
    guard(|| {
        if eps.is_null() || vol.is_null() {
            return Err(null("sample array"));
        }
        let e = std::slice::from_raw_parts(eps, n);
        let v = std::slice::from_raw_parts(vol, n);
        let samples: Vec<(f64, f64)> = e.iter().copied().zip(v.iter().copied()).collect();
        let f = fit_volume_expansion(&samples).map_err(lib)?;
        write_out(
            out,
            CrvolVolumeExpansion {
                c0: f.c0,
                c1: f.c1,
                log_coefficient: f.l,
                renormalized_volume: f.v,
                fit_residual: f.fit_residual,
                condition: f.condition,
            },
        )
    })
}

/// Conformal anomaly of `e^{2Υ}θ` on the domain's mesh.
#[no_mangle]
pub unsafe extern "C" fn crvol_conformal_anomaly(
    d: *const CrvolDomain,
    upsilon: *const CrvolExpr,
    out: *mut CrvolAnomaly,
) -> CrvolStatus {
    guard(|| {
        let d = domain_ref(d)?;
        let u = upsilon.as_ref().ok_or_else(|| null("upsilon"))?;
        let mesh = build_mesh(&d.spec, d.spec.mesh).map_err(lib)?;
        let rec = evaluate_mesh(&d.spec, &mesh).map_err(lib)?;
        let r = conformal_anomaly(&mesh, &rec, &u.expr).map_err(lib)?;
        write_out(out, CrvolAnomaly { full: r.full, via_f_derivatives: r.via_f_derivatives, linearized: r.linearized, scale: r.scale })
    })
}

/// Exact unit-ball quantities; the argument is R for `Phi`, ε for `Volume`, and φ otherwise.
#[no_mangle]
pub unsafe extern "C" fn crvol_ball_closed_form(which: CrvolBallQuantity, x: f64, out: *mut f64) -> CrvolStatus {
    guard(|| {
        let v = match which {
            CrvolBallQuantity::Phi => ball::phi_of_radius(x),
            CrvolBallQuantity::HTilde => ball::h_tilde(x),
            CrvolBallQuantity::TransverseCurvature => ball::transverse_r(x),
            CrvolBallQuantity::SFactor => ball::s_factor(x),
            CrvolBallQuantity::DvProfile => ball::dv_profile(x),
            CrvolBallQuantity::Volume => ball::ball_volume(x),
        }
        .map_err(lib)?;
        write_out(out, v)
    })
}
