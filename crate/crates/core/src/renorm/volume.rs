//! Volumes of sublevel sets `{φ < ε}` for the Kähler metric `∂∂̄ log(−1/ρ)`,
//! by radial layers along Hopf directions.

use std::f64::consts::PI;

use crate::crgeom::hopf_direction;
use crate::dsl::{eval_expression_jet, eval_plain, DomainSpec, ExprNode};
use crate::error::{CrError, Result};
use crate::jets::{Multidegree, C64};
use crate::quad::{gauss_legendre_on, graded_toward_end};

/// Radial panels and nodes per panel.
const PANELS: usize = 36;
const PER_PANEL: usize = 16;
const GRADING: f64 = 0.7;

/// `g_{jk̄} = ∂_j∂_k̄ log(−1/ρ)` at an interior point, as `[[g_zz̄, g_zw̄], [g_wz̄, g_ww̄]]`.
pub fn kahler_metric(rho: &ExprNode, p: (C64, C64)) -> Result<[[C64; 2]; 2]> {
    let j = eval_expression_jet(rho, p, 2)?;
    let r = j.value().re;
    if !(r < 0.0) {
        return Err(CrError::Domain(format!("point ({}, {}) is not inside the domain (ρ = {r})", p.0, p.1)));
    }
    let g = [j.coeff(&Multidegree::new(1, 0, 0, 0)), j.coeff(&Multidegree::new(0, 0, 1, 0))];
    let gb = [j.coeff(&Multidegree::new(0, 1, 0, 0)), j.coeff(&Multidegree::new(0, 0, 0, 1))];
    let h = [
        [j.coeff(&Multidegree::new(1, 1, 0, 0)), j.coeff(&Multidegree::new(1, 0, 0, 1))],
        [j.coeff(&Multidegree::new(0, 1, 1, 0)), j.coeff(&Multidegree::new(0, 0, 1, 1))],
    ];
    let mut out = [[C64::new(0.0, 0.0); 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            out[a][b] = -h[a][b] / r + g[a] * gb[b] / (r * r);
        }
    }
    Ok(out)
}

/// `det g` against Euclidean volume.
pub fn volume_density(rho: &ExprNode, p: (C64, C64)) -> Result<f64> {
    let g = kahler_metric(rho, p)?;
    let d = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    if !(d.re > 0.0) {
        return Err(CrError::Degenerate(format!("metric determinant {} at ({}, {})", d.re, p.0, p.1)));
    }
    Ok(d.re)
}

fn phi_along(phi: &ExprNode, u: (C64, C64), t: f64) -> Result<f64> {
    Ok(eval_plain(phi, u.0 * t, u.1 * t)?.re)
}

/// Smallest `t` on the unit ray with `φ(t u) = ε`, or `None` when the ray starts above ε.
fn level_crossing(phi: &ExprNode, u: (C64, C64), eps: f64) -> Result<Option<f64>> {
    // start just off the origin, where closed forms like sqrt(|z|²+|w|²) are not smooth
    if phi_along(phi, u, 1e-9)? >= eps {
        return Ok(None);
    }
    let mut hi = 0.25;
    while phi_along(phi, u, hi).map(|v| v < eps).unwrap_or(false) {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(CrError::NotStarShaped(format!("level {eps} not reached along ({}, {})", u.0, u.1)));
        }
    }
    let mut lo = 0.0;
    // φ may be undefined outside the domain; treat evaluation failures as "above ε"
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if phi_along(phi, u, mid).map(|v| v < eps).unwrap_or(false) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

/// `∫₀^{t_ε} det g(t u) t³ dt` along one unit direction.
fn ray_integral(spec: &DomainSpec, phi: &ExprNode, u: (C64, C64), eps: f64) -> Result<f64> {
    let Some(te) = level_crossing(phi, u, eps)? else { return Ok(0.0) };
    let mut acc = 0.0;
    for (t, w) in graded_toward_end(0.0, te, PANELS, GRADING, PER_PANEL) {
        acc += w * t.powi(3) * volume_density(&spec.rho, (u.0 * t, u.1 * t))?;
    }
    Ok(acc)
}

/// Hopf-grid approximation of the area of the unit 3-sphere, `2π²`.
pub fn sphere_measure(res: [usize; 3]) -> f64 {
    let (h1, h2) = (2.0 * PI / res[1] as f64, 2.0 * PI / res[2] as f64);
    gauss_legendre_on(res[0], 0.0, PI / 2.0)
        .iter()
        .map(|&(eta, w)| w * eta.sin() * eta.cos() * h1 * h2 * (res[1] * res[2]) as f64)
        .sum()
}

/// `Vol({φ < ε})` in the metric `∂∂̄ log(−1/ρ)`.
///
/// Needs a global special defining function. For a round ball the integrand
/// is radially symmetric and a single ray suffices.
pub fn volume_of_sublevel(spec: &DomainSpec, eps: f64) -> Result<f64> {
    let phi = spec.special_phi.as_ref().ok_or_else(|| {
        CrError::Unsupported(format!(
            "domain {} has no global special defining function; supply special_phi in the config",
            spec.name
        ))
    })?;
    if !(eps < 0.0) {
        return Err(CrError::Domain(format!("sublevel volume needs ε < 0, got {eps}")));
    }
    if spec.ball_radius.is_some() {
        let u = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
        return Ok(sphere_measure(spec.mesh) * ray_integral(spec, phi, u, eps)?);
    }
    let res = spec.mesh;
    let (h1, h2) = (2.0 * PI / res[1] as f64, 2.0 * PI / res[2] as f64);
    let mut total = 0.0;
    for (eta, we) in gauss_legendre_on(res[0], 0.0, PI / 2.0) {
        for a in 0..res[1] {
            for b in 0..res[2] {
                let u = hopf_direction(eta, a as f64 * h1, b as f64 * h2);
                total += we * h1 * h2 * eta.sin() * eta.cos() * ray_integral(spec, phi, u, eps)?;
            }
        }
    }
    Ok(total)
}

/// `n` values of ε log-spaced in `|ε|` across the window `[a, b]`, both negative.
pub fn log_spaced_window(a: f64, b: f64, n: usize) -> Result<Vec<f64>> {
    let (lo, hi) = (a.min(b), a.max(b));
    if !(hi < 0.0) || n < 2 {
        return Err(CrError::Config {
            field: "eps-window".into(),
            message: format!("need two negative endpoints and at least two samples, got [{a}, {b}] with {n}"),
        });
    }
    let (la, lb) = ((-lo).ln(), (-hi).ln());
    Ok((0..n).map(|k| -(la + (lb - la) * k as f64 / (n - 1) as f64).exp()).collect())
}

/// `(ε, Vol)` pairs over a window.
pub fn sample_volumes(spec: &DomainSpec, window: (f64, f64), n: usize) -> Result<Vec<(f64, f64)>> {
    log_spaced_window(window.0, window.1, n)?
        .into_iter()
        .map(|e| Ok((e, volume_of_sublevel(spec, e)?)))
        .collect()
}
