//! Hopf-coordinate mesh on a star-shaped boundary and integration against `θ∧dθ`.

use std::f64::consts::PI;

use crate::dsl::{eval_expression_jet, eval_plain, DomainSpec, ExprNode};
use crate::error::{CrError, Result};
use crate::jets::{Multidegree, C64};
use crate::quad::gauss_legendre_on;

#[derive(Clone, Copy, Debug)]
pub struct MeshNode {
    pub eta: f64,
    pub xi1: f64,
    pub xi2: f64,
    /// Unit direction `(cos η e^{iξ₁}, sin η e^{iξ₂})`.
    pub dir: (C64, C64),
    pub radius: f64,
    pub p: (C64, C64),
    /// Quadrature weight times the pulled-back density of `θ∧dθ`.
    pub weight: f64,
}

#[derive(Clone, Debug)]
pub struct BoundaryMesh {
    pub res: [usize; 3],
    pub nodes: Vec<MeshNode>,
}

pub fn hopf_direction(eta: f64, xi1: f64, xi2: f64) -> (C64, C64) {
    (C64::from_polar(eta.cos(), xi1), C64::from_polar(eta.sin(), xi2))
}

fn rho_along(rho: &ExprNode, u: (C64, C64), t: f64) -> Result<f64> {
    Ok(eval_plain(rho, u.0 * t, u.1 * t)?.re)
}

/// `t` with `ρ(t u) = 0`, by bracketing, bisection and a Newton polish.
pub fn radial_root(rho: &ExprNode, u: (C64, C64)) -> Result<f64> {
    let not_star = || CrError::NotStarShaped(format!("({}, {})", u.0, u.1));
    if rho_along(rho, u, 0.0)? >= 0.0 {
        return Err(not_star());
    }
    let mut hi = 0.5;
    while rho_along(rho, u, hi)? <= 0.0 {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(not_star());
        }
    }
    let mut lo = 0.0;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if rho_along(rho, u, mid)? <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut t = 0.5 * (lo + hi);
    for _ in 0..8 {
        let j = eval_expression_jet(rho, (u.0 * t, u.1 * t), 1)?;
        let rz = j.coeff(&Multidegree::new(1, 0, 0, 0));
        let rw = j.coeff(&Multidegree::new(0, 0, 1, 0));
        let slope = 2.0 * (rz * u.0 + rw * u.1).re;
        let v = j.value().re;
        if v.abs() <= 1e-15 || slope == 0.0 {
            break;
        }
        let nt = t - v / slope;
        if !(nt > lo - 1e-9 && nt < hi + 1e-9) {
            break;
        }
        t = nt;
    }
    Ok(t)
}

pub fn boundary_point_radial(spec: &DomainSpec, u: (C64, C64)) -> Result<(C64, C64)> {
    let n = (u.0.norm_sqr() + u.1.norm_sqr()).sqrt();
    let u = (u.0 / n, u.1 / n);
    let t = radial_root(&spec.rho, u)?;
    Ok((u.0 * t, u.1 * t))
}

/// `|θ∧dθ|` on the coordinate tangent vectors `∂_η p, ∂_{ξ₁} p, ∂_{ξ₂} p`.
fn contact_density(rho: &ExprNode, node: &MeshNode) -> Result<f64> {
    let (eta, xi1, xi2, t) = (node.eta, node.xi1, node.xi2, node.radius);
    let j = eval_expression_jet(rho, node.p, 2)?;
    let g = [j.coeff(&Multidegree::new(1, 0, 0, 0)), j.coeff(&Multidegree::new(0, 0, 1, 0))];
    let h = [
        [j.coeff(&Multidegree::new(1, 1, 0, 0)), j.coeff(&Multidegree::new(1, 0, 0, 1))],
        [j.coeff(&Multidegree::new(0, 1, 1, 0)), j.coeff(&Multidegree::new(0, 0, 1, 1))],
    ];
    let i = C64::new(0.0, 1.0);
    let du = [
        (C64::from_polar(-eta.sin(), xi1), C64::from_polar(eta.cos(), xi2)),
        (i * C64::from_polar(eta.cos(), xi1), C64::new(0.0, 0.0)),
        (C64::new(0.0, 0.0), i * C64::from_polar(eta.sin(), xi2)),
    ];
    let u = node.dir;
    let pair = |v: (C64, C64)| g[0] * v.0 + g[1] * v.1;
    let drho_u = 2.0 * pair(u).re;
    let tangents: Vec<(C64, C64)> = du
        .iter()
        .map(|&d| {
            let ts = -t * 2.0 * pair(d).re / drho_u;
            (d.0 * t + u.0 * ts, d.1 * t + u.1 * ts)
        })
        .collect();
    let th = |v: (C64, C64)| pair(v).im;
    let dth = |y: (C64, C64), z: (C64, C64)| {
        let yz = [y.0, y.1];
        let zz = [z.0.conj(), z.1.conj()];
        let mut s = C64::new(0.0, 0.0);
        for a in 0..2 {
            for b in 0..2 {
                s += yz[a] * h[a][b] * zz[b];
            }
        }
        -2.0 * s.im
    };
    let (x, y, z) = (tangents[0], tangents[1], tangents[2]);
    let v = th(x) * dth(y, z) - th(y) * dth(x, z) + th(z) * dth(x, y);
    Ok(v.abs())
}

/// Gauss–Legendre in η on `[0, π/2]`, periodic trapezoid in `ξ₁, ξ₂`.
pub fn build_mesh(spec: &DomainSpec, res: [usize; 3]) -> Result<BoundaryMesh> {
    if res.iter().any(|&n| n < 1) {
        return Err(CrError::Config { field: "mesh".into(), message: "mesh resolutions must be positive".into() });
    }
    let eta_rule = gauss_legendre_on(res[0], 0.0, PI / 2.0);
    let (h1, h2) = (2.0 * PI / res[1] as f64, 2.0 * PI / res[2] as f64);
    let mut nodes = Vec::with_capacity(res.iter().product());
    for &(eta, we) in &eta_rule {
        for a in 0..res[1] {
            for b in 0..res[2] {
                let (xi1, xi2) = (a as f64 * h1, b as f64 * h2);
                let dir = hopf_direction(eta, xi1, xi2);
                let t = radial_root(&spec.rho, dir)?;
                let mut node = MeshNode { eta, xi1, xi2, dir, radius: t, p: (dir.0 * t, dir.1 * t), weight: 0.0 };
                node.weight = we * h1 * h2 * contact_density(&spec.rho, &node)?;
                nodes.push(node);
            }
        }
    }
    Ok(BoundaryMesh { res, nodes })
}

impl BoundaryMesh {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `∫_M f θ∧dθ` for values given node by node.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        assert_eq!(values.len(), self.nodes.len(), "one value per mesh node");
        self.nodes.iter().zip(values).map(|(n, v)| n.weight * v).sum()
    }

    pub fn measure(&self) -> f64 {
        self.nodes.iter().map(|n| n.weight).sum()
    }
}

pub fn integrate_boundary(mesh: &BoundaryMesh, values: &[f64]) -> f64 {
    mesh.integrate(values)
}

/// Levi-form positivity of ρ at every node of a coarse mesh.
pub fn check_pseudoconvex(spec: &DomainSpec, res: [usize; 3]) -> Result<()> {
    let mesh = build_mesh(spec, res)?;
    for n in &mesh.nodes {
        let j = eval_expression_jet(&spec.rho, n.p, 2)?;
        let rz = j.coeff(&Multidegree::new(1, 0, 0, 0));
        let rw = j.coeff(&Multidegree::new(0, 0, 1, 0));
        let hzz = j.coeff(&Multidegree::new(1, 1, 0, 0));
        let hzw = j.coeff(&Multidegree::new(1, 0, 0, 1));
        let hwz = j.coeff(&Multidegree::new(0, 1, 1, 0));
        let hww = j.coeff(&Multidegree::new(0, 0, 1, 1));
        // W = (ρ_w, −ρ_z)
        let (wz, ww) = (rw, -rz);
        let l = wz * hzz * wz.conj() + wz * hzw * ww.conj() + ww * hwz * wz.conj() + ww * hww * ww.conj();
        if !(l.re > 0.0) {
            return Err(CrError::NotPseudoconvex(format!(
                "Levi form {} at z = {}, w = {}",
                l.re, n.p.0, n.p.1
            )));
        }
    }
    Ok(())
}
