//! Conformal anomaly `V_{e^{2Υ}θ} − V_θ` by three routes: the closed
//! integrand, the route through `f′|_M` and `f″|_M`, and the linear term.

use serde::Serialize;

use crate::crgeom::{build_mesh, evaluate_mesh, field_derivs, BoundaryMesh, PointRecord, ScalarDerivs};
use crate::dsl::{eval_plain, DomainSpec, ExprNode};
use crate::error::{CrError, Result};
use crate::expand::expansion_from;
use crate::jets::C64;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct FieldSummary {
    pub min: f64,
    pub max: f64,
    /// Average against `θ∧dθ`.
    pub mean: f64,
}

impl FieldSummary {
    pub fn of(mesh: &BoundaryMesh, values: &[f64]) -> Self {
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        FieldSummary { min, max, mean: mesh.integrate(values) / mesh.measure() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnomalyReport {
    pub full: f64,
    pub via_f_derivatives: f64,
    pub linearized: f64,
    /// `∫` of the absolute values of the terms of the full integrand.
    pub scale: f64,
    pub f_prime_boundary: FieldSummary,
    pub f_dprime_boundary: FieldSummary,
}

/// Pointwise integrands at one node.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnomalyIntegrands {
    pub full: f64,
    pub via_f_derivatives: f64,
    pub linear: f64,
    pub abs_terms: f64,
    pub f_prime: f64,
    pub f_dprime: f64,
}

pub fn anomaly_integrands(rec: &PointRecord, ups: f64, d: &ScalarDerivs) -> AnomalyIntegrands {
    let s = rec.scal;
    let ex = expansion_from(s, &rec.derived);
    let a_up = rec.a11.conj();
    let u1 = d.f1;
    let u_up = u1.conj();
    let n2 = u1.norm_sqr();
    let ut = d.ft.re;
    let cubic = (d.f11 * u_up * u_up).re;
    let im_torsion = (u1 * u1 * a_up).im;
    let lin_coef = rec.derived.lap_scal - 8.0 * rec.derived.a11_up11.im;

    let lin = lin_coef * ups / 96.0;
    let quad = s * n2 / 16.0;
    let bracket = [n2 * n2, im_torsion, 0.25 * ut * ut, -2.0 * cubic, n2 * d.lap];
    let full = lin + quad - 0.25 * bracket.iter().sum::<f64>();
    let abs_terms = lin.abs() + quad.abs() + 0.25 * bracket.iter().map(|x| x.abs()).sum::<f64>();

    let f_prime = n2;
    let f_dprime = (u1 * ex.eta1).re - n2 * n2 - 0.25 * ut * ut - 0.25 * s * n2 + 2.0 * cubic - n2 * d.lap - im_torsion;
    let via = 0.25 * f_dprime + s * f_prime / 8.0 + lin_coef * ups / 48.0;
    AnomalyIntegrands { full, via_f_derivatives: via, linear: lin, abs_terms, f_prime, f_dprime }
}

fn real_value(e: &ExprNode, p: (C64, C64)) -> Result<f64> {
    let v = eval_plain(e, p.0, p.1)?;
    if v.im.abs() > 1e-12 * v.re.abs().max(1.0) {
        return Err(CrError::Domain(format!("Υ must be real; got {v} at ({}, {})", p.0, p.1)));
    }
    Ok(v.re)
}

/// All three routes over an evaluated mesh.
pub fn conformal_anomaly(mesh: &BoundaryMesh, records: &[PointRecord], upsilon: &ExprNode) -> Result<AnomalyReport> {
    let mut cols: [Vec<f64>; 6] = Default::default();
    for (node, rec) in mesh.nodes.iter().zip(records) {
        let u = real_value(upsilon, node.p)?;
        let d = field_derivs(&rec.geometry, upsilon, node.p)?;
        let it = anomaly_integrands(rec, u, &d);
        for (c, v) in cols.iter_mut().zip([it.full, it.via_f_derivatives, it.linear, it.abs_terms, it.f_prime, it.f_dprime]) {
            c.push(v);
        }
    }
    Ok(AnomalyReport {
        full: mesh.integrate(&cols[0]),
        via_f_derivatives: mesh.integrate(&cols[1]),
        linearized: mesh.integrate(&cols[2]),
        scale: mesh.integrate(&cols[3]),
        f_prime_boundary: FieldSummary::of(mesh, &cols[4]),
        f_dprime_boundary: FieldSummary::of(mesh, &cols[5]),
    })
}

/// Builds the mesh at `spec.mesh`, evaluates the invariants and runs [`conformal_anomaly`].
pub fn conformal_anomaly_for(spec: &DomainSpec, upsilon: &ExprNode) -> Result<AnomalyReport> {
    let mesh = build_mesh(spec, spec.mesh)?;
    let records = evaluate_mesh(spec, &mesh)?;
    conformal_anomaly(&mesh, &records, upsilon)
}

/// `t·Υ` as an expression.
pub fn scaled_field(upsilon: &ExprNode, t: f64) -> ExprNode {
    ExprNode::Mul(Box::new(ExprNode::real(t)), Box::new(upsilon.clone()))
}
