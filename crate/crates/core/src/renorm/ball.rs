//! Closed forms for the unit ball with the Bergman metric, in terms of the
//! special defining function `φ = 4(R − 1)/(R + 1)`, `R = |(z, w)|`.

use std::f64::consts::PI;

use crate::error::{CrError, Result};

fn check_phi(phi: f64) -> Result<()> {
    if phi > -4.0 && phi <= 0.0 {
        Ok(())
    } else {
        Err(CrError::Domain(format!("ball closed forms need φ in (−4, 0], got {phi}")))
    }
}

pub fn phi_of_radius(r: f64) -> Result<f64> {
    if r > 0.0 && r <= 1.0 {
        Ok(4.0 * (r - 1.0) / (r + 1.0))
    } else {
        Err(CrError::Domain(format!("ball radius must lie in (0, 1], got {r}")))
    }
}

/// Inverse of [`phi_of_radius`].
pub fn radius_of_phi(phi: f64) -> Result<f64> {
    check_phi(phi)?;
    Ok((4.0 + phi) / (4.0 - phi))
}

/// `h̃ = (4 + φ)/(4 − φ)`.
pub fn h_tilde(phi: f64) -> Result<f64> {
    check_phi(phi)?;
    Ok((4.0 + phi) / (4.0 - phi))
}

/// Transverse curvature of φ, `2φ/(φ² − 16)`.
pub fn transverse_r(phi: f64) -> Result<f64> {
    check_phi(phi)?;
    Ok(2.0 * phi / (phi * phi - 16.0))
}

/// `s = (φ² − 16)²/256`.
pub fn s_factor(phi: f64) -> Result<f64> {
    check_phi(phi)?;
    let q = phi * phi - 16.0;
    Ok(q * q / 256.0)
}

/// Polynomial factor of the volume density: `dv₊ = 2π² φ⁻³ P(φ) dφ` after
/// integrating over the spheres, with `P(φ) = −½ − φ/4 + φ³/64 + φ⁴/512`.
pub fn dv_profile(phi: f64) -> Result<f64> {
    check_phi(phi)?;
    Ok(-0.5 - phi / 4.0 + phi.powi(3) / 64.0 + phi.powi(4) / 512.0)
}

/// Antiderivative of `φ⁻³ P(φ)`.
fn antiderivative(phi: f64) -> f64 {
    0.25 / (phi * phi) + 0.25 / phi + phi / 64.0 + phi * phi / 1024.0
}

/// Exact `Vol({φ < ε})`.
pub fn ball_volume(eps: f64) -> Result<f64> {
    if !(eps > -4.0 && eps < 0.0) {
        return Err(CrError::Domain(format!("ball volume needs ε in (−4, 0), got {eps}")));
    }
    Ok(2.0 * PI * PI * (antiderivative(eps) - antiderivative(-4.0)))
}

/// `(c₀, c₁, L, V)` of the exact series `2π²(¼ε⁻² + ¼ε⁻¹ + 3/32 + ε/64 + ε²/1024)`.
pub fn ball_expansion() -> [f64; 4] {
    let s = 2.0 * PI * PI;
    [s / 4.0, s / 4.0, 0.0, s * 3.0 / 32.0]
}
