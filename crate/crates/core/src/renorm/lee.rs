use crate::crgeom::ScalarDerivs;
use crate::dsl::{DomainSpec, ExprNode};
use crate::jets::C64;

/// Scalar curvature and torsion of `θ̂ = e^{2Υ}θ` from those of `θ` and the
/// covariant derivatives of `Υ`.
pub fn lee_transform(scal: f64, a11: C64, upsilon: f64, d: &ScalarDerivs) -> (f64, C64) {
    let i = C64::new(0.0, 1.0);
    let k = (-2.0 * upsilon).exp();
    let a = (a11 + 2.0 * i * d.f11 - 4.0 * i * d.f1 * d.f1) * k;
    let s = (scal + 4.0 * d.lap - 8.0 * d.f1.norm_sqr()) * k;
    (s, a)
}

/// `e^{2Υ} ρ` as an expression.
pub fn rescaled_defining_function(rho: &ExprNode, upsilon: &ExprNode) -> ExprNode {
    let two_u = ExprNode::Mul(Box::new(ExprNode::real(2.0)), Box::new(upsilon.clone()));
    ExprNode::Mul(Box::new(ExprNode::Exp(Box::new(two_u))), Box::new(rho.clone()))
}

/// The same boundary with defining function `e^{2Υ}ρ`, hence contact form `e^{2Υ}θ`.
pub fn rescaled_domain(spec: &DomainSpec, upsilon: &ExprNode) -> DomainSpec {
    DomainSpec {
        name: format!("{} rescaled by exp(2*({upsilon}))", spec.name),
        rho: rescaled_defining_function(&spec.rho, upsilon),
        special_phi: None,
        params: spec.params.clone(),
        mesh: spec.mesh,
        jet_order: spec.jet_order,
        ball_radius: None,
    }
}
