//! The n = 1 expansion of the approximately Einstein metric at the boundary:
//! `h̃′, h̃″, r′, η¹`, the volume coefficients `v⁽ʲ⁾`, and the boundary
//! integrals giving `c₀, c₁, L`.
//!
//! The general-n recursion determines the trace of the `h̃` Taylor
//! coefficients up to `φ^{n+1}` with an obstruction at order `n + 2 = 3`;
//! only the orders below that are needed here.

use serde::Serialize;

use crate::crgeom::{BoundaryMesh, DerivedTable, PointRecord, PseudohermitianPointData};
use crate::error::{CrError, Result};
use crate::jets::C64;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExpansionData {
    pub hprime: f64,
    pub hdprime: f64,
    pub rprime: f64,
    #[serde(skip)]
    pub eta1: C64,
    /// `(v⁰, v¹, v²)`
    pub v: [f64; 3],
    /// Coefficient of `φ²` in `s`.
    pub s2: f64,
}

/// Coefficients from the curvature, torsion and their derivatives at a point.
pub fn expansion_from(scal: f64, d: &DerivedTable) -> ExpansionData {
    let abs_a2 = d.abs_a2;
    let hprime = scal / 4.0;
    let hdprime = scal * scal / 16.0 - abs_a2;
    let im_a = d.a11_up11.im;
    let two_rp = -5.0 / 3.0 * hdprime + scal * scal / 24.0 - 2.0 / 3.0 * abs_a2 + d.lap_scal / 12.0 - 2.0 / 3.0 * im_a;
    let rprime = two_rp / 2.0;
    let i = C64::new(0.0, 1.0);
    let eta1 = (-d.scal_up1 / 4.0 - i * d.a_div) / 3.0;
    let v2 = -(d.lap_scal / 12.0 - 2.0 / 3.0 * im_a) / 8.0;
    ExpansionData { hprime, hdprime, rprime, eta1, v: [-0.25, -scal / 16.0, v2], s2: rprime }
}

pub fn expansion_at(d: &PseudohermitianPointData) -> Result<ExpansionData> {
    let table = d
        .derived
        .as_ref()
        .ok_or_else(|| CrError::Contract("expansion needs the derived table (jet order 6)".into()))?;
    Ok(expansion_from(d.scal, table))
}

/// `1 + h̃′φ + ½h̃″φ²`.
pub fn metric_profile(e: &ExpansionData, phi: f64) -> f64 {
    1.0 + e.hprime * phi + 0.5 * e.hdprime * phi * phi
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VIntegrals {
    pub int_v0: f64,
    pub int_v1: f64,
    pub int_v2: f64,
    pub l: f64,
    /// `∫ (|Δ_b Scal|/96 + |Im A₁₁,¹¹|/12) θ∧dθ`, the scale against which `L` is small.
    pub l_scale: f64,
}

/// Boundary integrals of the volume coefficients over an evaluated mesh.
pub fn v_integrals(mesh: &BoundaryMesh, records: &[PointRecord]) -> VIntegrals {
    let ex: Vec<ExpansionData> = records.iter().map(|r| expansion_from(r.scal, &r.derived)).collect();
    let col = |k: usize| -> Vec<f64> { ex.iter().map(|e| e.v[k]).collect() };
    let scale: Vec<f64> = records
        .iter()
        .map(|r| r.derived.lap_scal.abs() / 96.0 + r.derived.a11_up11.im.abs() / 12.0)
        .collect();
    let int_v2 = mesh.integrate(&col(2));
    VIntegrals {
        int_v0: mesh.integrate(&col(0)),
        int_v1: mesh.integrate(&col(1)),
        int_v2,
        l: int_v2,
        l_scale: mesh.integrate(&scale),
    }
}

/// `(c₀, c₁) = (−½∫v⁰, −∫v¹)`.
pub fn predicted_c(v: &VIntegrals) -> (f64, f64) {
    (-0.5 * v.int_v0, -v.int_v1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ball_table() -> DerivedTable {
        DerivedTable::default()
    }

    #[test]
    fn ball_coefficients() {
        let e = expansion_from(2.0, &ball_table());
        assert_eq!(e.hprime, 0.5);
        assert_eq!(e.hdprime, 0.25);
        assert!((e.rprime + 0.125).abs() < 1e-15);
        assert_eq!(e.v, [-0.25, -0.125, 0.0]);
    }

    #[test]
    fn v2_has_two_consistent_sources() {
        let d = DerivedTable {
            lap_scal: 0.37,
            a11_up11: C64::new(0.2, -0.41),
            abs_a2: 0.09,
            ..Default::default()
        };
        let e = expansion_from(1.3, &d);
        let alt = -(2.0 * e.rprime + e.hdprime) / 8.0;
        assert!((alt - e.v[2]).abs() < 1e-15);
    }

    #[test]
    fn profile_against_ball_closed_form() {
        let e = expansion_from(2.0, &ball_table());
        assert!((metric_profile(&e, -1.0) - 0.625).abs() < 1e-15);
        assert_eq!(metric_profile(&e, 0.0), 1.0);
        let exact = |p: f64| (4.0 + p) / (4.0 - p);
        let err = |p: f64| (metric_profile(&e, p) - exact(p)).abs();
        // cubic remainder: halving φ divides the error by about 8
        for p in [-0.4, -0.2, -0.1] {
            let ratio = err(p) / err(p / 2.0);
            assert!((ratio - 8.0).abs() < 0.6, "ratio {ratio}");
        }
    }
}
