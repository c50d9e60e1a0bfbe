use super::forms::{conj_vector, Form1, Vector};
use crate::dsl::{eval_expression_jet, DomainSpec, ExprNode};
use crate::error::{CrError, Result};
use crate::jets::{Jet, C64, W, WB, Z, ZB};

/// Frame data at a point, with every quantity carried as a jet so that it can
/// be differentiated further.
#[derive(Clone, Debug)]
pub struct BoundaryFrame {
    pub p: (C64, C64),
    /// Jet of the defining function used for the frame (order `K`).
    pub phi: Jet,
    /// `∂φ` (order `K−1`).
    pub dphi: Form1,
    /// `ϑ = (i/2)(∂̄φ − ∂φ)`.
    pub theta: Form1,
    /// `ϑ¹`, dual to `{W₁, ξ}` (order `K−2`).
    pub theta1: Form1,
    /// Unit vector field spanning the CR directions, `h₁₁̄ = 1` (order `K−2`).
    pub w1: Vector,
    /// Transverse field: `∂φ(ξ) = 1`, `ξ ⌟ ∂∂̄φ = r ∂̄φ` (order `K−2`).
    pub xi: Vector,
    /// Transverse curvature as a jet (order `K−2`).
    pub r: Jet,
    /// `T = i(ξ − ξ̄)`.
    pub t: Vector,
    /// Complex Hessian `∂_j∂_k̄ φ` as `[zz̄, zw̄, wz̄, ww̄]`.
    pub levi: [Jet; 4],
}

fn defining_expr(spec: &DomainSpec, use_special_phi: bool) -> Result<&ExprNode> {
    if use_special_phi {
        spec.special_phi
            .as_ref()
            .ok_or_else(|| CrError::Unsupported(format!("domain `{}` has no special defining function", spec.name)))
    } else {
        Ok(&spec.rho)
    }
}

/// `H(X, Ȳ) = X^j H_{jk̄} Ȳ^k` for (1,0) component pairs.
pub fn levi_pair(h: &[Jet; 4], x: (&Jet, &Jet), ybar: (&Jet, &Jet)) -> Jet {
    let t1 = &(x.0 * &h[0]) * ybar.0;
    let t2 = &(x.0 * &h[1]) * ybar.1;
    let t3 = &(x.1 * &h[2]) * ybar.0;
    let t4 = &(x.1 * &h[3]) * ybar.1;
    &(&t1 + &t2) + &(&t3 + &t4)
}

/// Builds the frame at `p` from ρ or, if requested, from the special defining function.
pub fn frame_at(spec: &DomainSpec, p: (C64, C64), use_special_phi: bool) -> Result<BoundaryFrame> {
    frame_at_order(spec, p, use_special_phi, spec.jet_order)
}

pub fn frame_at_order(spec: &DomainSpec, p: (C64, C64), use_special_phi: bool, order: usize) -> Result<BoundaryFrame> {
    let e = defining_expr(spec, use_special_phi)?;
    let phi = eval_expression_jet(e, p, order)?;
    frame_from_jet(phi, p)
}

/// Frame from an already computed jet of the defining function.
pub fn frame_from_jet(phi: Jet, p: (C64, C64)) -> Result<BoundaryFrame> {
    if phi.order() < 3 {
        return Err(CrError::Truncation("the frame needs a defining-function jet of order at least 3".into()));
    }
    let d: Vec<Jet> = (0..4).map(|v| phi.partial(v)).collect::<Result<_>>()?;
    let (pz, pzb, pw, pwb) = (&d[Z], &d[ZB], &d[W], &d[WB]);
    let levi = [pz.partial(ZB)?, pz.partial(WB)?, pw.partial(ZB)?, pw.partial(WB)?];
    let zero1 = Jet::zero(4, pz.order(), pz.base());

    // Unnormalized CR vector (φ_w, −φ_z) and its Levi length.
    let wz = pw.clone();
    let ww = -pz;
    let (wzb, wwb) = (wz.conjugate_swap(), ww.conjugate_swap());
    let len2 = levi_pair(&levi, (&wz, &ww), (&wzb, &wwb));
    let l0 = len2.value();
    if !(l0.re > 0.0) {
        return Err(CrError::Degenerate(format!(
            "Levi form H(W, W̄) = {l0} is not positive at z = {}, w = {}",
            p.0, p.1
        )));
    }
    let inv_len = len2.re_part().powf(-0.5)?;
    let w1z = &wz * &inv_len;
    let w1w = &ww * &inv_len;

    let det = &(&levi[0] * &levi[3]) - &(&levi[1] * &levi[2]);
    if det.value().norm() < 1e-300 {
        return Err(CrError::Degenerate(format!("singular complex Hessian at z = {}, w = {}", p.0, p.1)));
    }
    // ξ^j ∝ Σ_k φ_k̄ (H⁻¹)_{kj}; the factor r fixes ∂φ(ξ) = 1.
    let nz = &(pzb * &levi[3]) - &(pwb * &levi[2]);
    let nw = &(pwb * &levi[0]) - &(pzb * &levi[1]);
    let pairing = &(pz * &nz) + &(pw * &nw);
    if pairing.value().norm() < 1e-300 {
        return Err(CrError::Degenerate("|∂φ|² vanishes".into()));
    }
    let xiz = nz.div(&pairing)?;
    let xiw = nw.div(&pairing)?;
    let r = det.div(&pairing)?.re_part();

    let w1 = [w1z.clone(), zero1.truncate(w1z.order()), w1w.clone(), zero1.truncate(w1z.order())];
    let xi = [xiz.clone(), zero1.truncate(xiz.order()), xiw.clone(), zero1.truncate(xiz.order())];

    let dphi = Form1([pz.clone(), zero1.clone(), pw.clone(), zero1.clone()]);
    let dbarphi = Form1([zero1.clone(), pzb.clone(), zero1.clone(), pwb.clone()]);
    let theta = dbarphi.sub(&dphi).scale(&Jet::constant(4, zero1.order(), zero1.base(), C64::new(0.0, 0.5)));

    let den = &(&w1z * &xiw) - &(&w1w * &xiz);
    let a = xiw.div(&den)?;
    let b = -&xiz.div(&den)?;
    let z2 = Jet::zero(4, a.order(), a.base());
    let theta1 = Form1([a, z2.clone(), b, z2]);

    let xib = conj_vector(&xi);
    let i = C64::new(0.0, 1.0);
    let t = [0, 1, 2, 3].map(|k| (&xi[k] - &xib[k]).scale(i));
    Ok(BoundaryFrame { p, phi, dphi, theta, theta1, w1, xi, r, t, levi })
}

impl BoundaryFrame {
    pub fn w1bar(&self) -> Vector {
        conj_vector(&self.w1)
    }

    pub fn xibar(&self) -> Vector {
        conj_vector(&self.xi)
    }

    /// `h₁₁̄ = ∂∂̄φ(W₁, W̄₁)`.
    pub fn h11(&self) -> Jet {
        let wb = self.w1bar();
        levi_pair(&self.levi, (&self.w1[Z], &self.w1[W]), (&wb[ZB], &wb[WB]))
    }

    /// `∂∂̄φ(ξ, W̄₁)`, zero by construction.
    pub fn xi_w1bar(&self) -> Jet {
        let wb = self.w1bar();
        levi_pair(&self.levi, (&self.xi[Z], &self.xi[W]), (&wb[ZB], &wb[WB]))
    }

    /// `∂φ(ξ)`, one by construction.
    pub fn dphi_xi(&self) -> Jet {
        self.dphi.eval(&self.xi)
    }
}
