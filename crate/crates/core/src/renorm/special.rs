//! Checks that a supplied global φ is the special defining function of the
//! boundary contact form: `∂φ = ∂ρ` on the boundary and `|∂ log(−φ)|² = 1`
//! in the metric `∂∂̄ log(−1/ρ)`.

use serde::Serialize;

use super::volume::kahler_metric;
use crate::dsl::{eval_expression_jet, DomainSpec};
use crate::error::{CrError, Result};
use crate::jets::{Multidegree, C64};

pub const SPECIAL_PHI_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpecialPhiCheck {
    /// Largest `|φ| + |∂φ − ∂ρ|` over the boundary sample.
    pub contact_mismatch: f64,
    /// Largest `||∂ log(−φ)|² − 1|` over the interior sample.
    pub gradient_norm_error: f64,
}

impl SpecialPhiCheck {
    pub fn passes(&self, tol: f64) -> bool {
        self.contact_mismatch <= tol && self.gradient_norm_error <= tol
    }
}

fn holomorphic_gradient(j: &crate::jets::Jet) -> [C64; 2] {
    [j.coeff(&Multidegree::new(1, 0, 0, 0)), j.coeff(&Multidegree::new(0, 0, 1, 0))]
}

/// `|∂ log(−φ)|²` at an interior point.
pub fn log_gradient_norm(spec: &DomainSpec, p: (C64, C64)) -> Result<f64> {
    let phi = spec.special_phi.as_ref().ok_or_else(|| CrError::Unsupported("no special_phi to check".into()))?;
    let j = eval_expression_jet(phi, p, 1)?;
    let v = j.value().re;
    let dpsi = holomorphic_gradient(&j).map(|c| c / v);
    let g = kahler_metric(&spec.rho, p)?;
    let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    let inv = [[g[1][1] / det, -g[0][1] / det], [-g[1][0] / det, g[0][0] / det]];
    let mut n = C64::new(0.0, 0.0);
    for a in 0..2 {
        for b in 0..2 {
            n += dpsi[b].conj() * inv[b][a] * dpsi[a];
        }
    }
    Ok(n.re)
}

pub fn check_special_phi(spec: &DomainSpec, boundary: &[(C64, C64)], interior: &[(C64, C64)]) -> Result<SpecialPhiCheck> {
    let phi = spec.special_phi.as_ref().ok_or_else(|| CrError::Unsupported("no special_phi to check".into()))?;
    let mut contact: f64 = 0.0;
    for &p in boundary {
        let jp = eval_expression_jet(phi, p, 1)?;
        let jr = eval_expression_jet(&spec.rho, p, 1)?;
        let (gp, gr) = (holomorphic_gradient(&jp), holomorphic_gradient(&jr));
        contact = contact.max(jp.value().norm() + (gp[0] - gr[0]).norm() + (gp[1] - gr[1]).norm());
    }
    let mut grad: f64 = 0.0;
    for &p in interior {
        grad = grad.max((log_gradient_norm(spec, p)? - 1.0).abs());
    }
    Ok(SpecialPhiCheck { contact_mismatch: contact, gradient_norm_error: grad })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{builtin_domain, parse_expression};

    #[test]
    fn ball_phi_is_special() {
        let b = builtin_domain("unit_ball", &[]).unwrap();
        let bd = [(C64::new(0.6, 0.0), C64::new(0.0, 0.8)), (C64::from_polar(0.28, 1.0), C64::from_polar(0.96, -2.0))];
        let int = [(C64::new(0.3, 0.1), C64::new(-0.2, 0.4)), (C64::new(0.0, 0.9), C64::new(0.05, 0.0))];
        let c = check_special_phi(&b, &bd, &int).unwrap();
        assert!(c.passes(1e-12), "{c:?}");
    }

    #[test]
    fn plain_rho_is_not_special() {
        let mut b = builtin_domain("unit_ball", &[]).unwrap();
        b.special_phi = Some(parse_expression("abs2(z) + abs2(w) - 1").unwrap());
        let n = log_gradient_norm(&b, (C64::new(0.5, 0.0), C64::new(0.0, 0.0))).unwrap();
        assert!((n - 0.25).abs() < 1e-14);
    }

    #[test]
    fn scaled_ball_phi_is_special() {
        let b = builtin_domain("ball", &[2.0]).unwrap();
        let bd = [(C64::new(1.2, 0.0), C64::new(0.0, 1.6))];
        let int = [(C64::new(0.7, -0.3), C64::new(0.2, 1.1))];
        assert!(check_special_phi(&b, &bd, &int).unwrap().passes(1e-12));
    }
}
