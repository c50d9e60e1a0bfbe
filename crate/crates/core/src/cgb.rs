//! Interior curvature of the Kähler metric `g = ∂∂̄ log(−1/ρ)`: Ricci form,
//! Einstein residual, Chern forms, and the renormalized Chern–Gauss–Bonnet
//! ledger of a domain.

use std::f64::consts::PI;

use serde::Serialize;

use crate::crgeom::{hopf_direction, radial_root, BoundaryMesh, PointRecord};
use crate::dsl::{eval_expression_jet, DomainSpec};
use crate::error::{CrError, Result};
use crate::jets::{Jet, C64};
use crate::quad::{gauss_legendre_on, graded_toward_end};

/// Coefficient of `Scal²` in the boundary term.
pub const A_CONST: f64 = -1.0 / (128.0 * PI * PI);
/// Coefficient of `|A|²` in the boundary term.
pub const B_CONST: f64 = 1.0 / (8.0 * PI * PI);

/// Jet order of ρ used for curvature.
const CURVATURE_ORDER: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurvatureReport {
    #[serde(skip)]
    pub point: (C64, C64),
    pub det_g: f64,
    /// `max |Ric_{jk̄} + 3 g_{jk̄}|`.
    pub einstein_residual: f64,
    /// The same divided by `max |g_{jk̄}|`.
    pub einstein_relative: f64,
    pub c1sq_density: f64,
    pub c2_density: f64,
    pub renorm_density: f64,
}

type Mat2 = [[Jet; 2]; 2];

fn holo(l: usize) -> usize {
    2 * l
}

fn antiholo(m: usize) -> usize {
    2 * m + 1
}

/// `g_{lm̄}` as jets of order `order − 2`.
pub fn metric_jets(spec: &DomainSpec, p: (C64, C64), order: usize) -> Result<Mat2> {
    let r = eval_expression_jet(&spec.rho, p, order)?;
    if !(r.value().re < 0.0) {
        return Err(CrError::Domain(format!("point ({}, {}) is not inside the domain", p.0, p.1)));
    }
    let u = -&(-&r).ln()?;
    let entry = |l: usize, m: usize| -> Result<Jet> { u.partial(holo(l))?.partial(antiholo(m)) };
    Ok([[entry(0, 0)?, entry(0, 1)?], [entry(1, 0)?, entry(1, 1)?]])
}

fn det(h: &Mat2) -> Jet {
    &(&h[0][0] * &h[1][1]) - &(&h[0][1] * &h[1][0])
}

/// `Ric_{lm̄} = −∂_l∂_m̄ log det g`, order `order − 4`.
pub fn ricci_jets(h: &Mat2) -> Result<Mat2> {
    let ld = det(h).ln()?;
    let entry = |l: usize, m: usize| -> Result<Jet> { Ok(-&ld.partial(holo(l))?.partial(antiholo(m))?) };
    Ok([[entry(0, 0)?, entry(0, 1)?], [entry(1, 0)?, entry(1, 1)?]])
}

type CMat = [[C64; 2]; 2];

fn mmul(a: &CMat, b: &CMat) -> CMat {
    let mut c = [[C64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

fn inv(a: &CMat) -> CMat {
    let d = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    [[a[1][1] / d, -a[0][1] / d], [-a[1][0] / d, a[0][0] / d]]
}

/// Coefficient of `dz¹∧dz̄¹∧dz²∧dz̄²` in the wedge of two (1,1)-forms with
/// components `a_{lm̄}`, `b_{lm̄}`.
fn wedge11(a: &CMat, b: &CMat) -> C64 {
    a[0][0] * b[1][1] + a[1][1] * b[0][0] - a[0][1] * b[1][0] - a[1][0] * b[0][1]
}

/// `dz¹∧dz̄¹∧dz²∧dz̄² = −4 dV_Eu`.
const TOP_FORM: f64 = -4.0;

/// Full curvature report at an interior point.
pub fn metric_and_ricci(spec: &DomainSpec, p: (C64, C64)) -> Result<CurvatureReport> {
    let h = metric_jets(spec, p, CURVATURE_ORDER)?;
    let g: CMat = [[h[0][0].value(), h[0][1].value()], [h[1][0].value(), h[1][1].value()]];
    let det_g = (g[0][0] * g[1][1] - g[0][1] * g[1][0]).re;
    if !(det_g > 0.0 && g[0][0].re > 0.0) {
        return Err(CrError::Degenerate(format!("metric is not positive definite at ({}, {}): det {det_g}", p.0, p.1)));
    }
    let ric = ricci_jets(&h)?;
    let mut res: f64 = 0.0;
    let mut gmax: f64 = 0.0;
    for l in 0..2 {
        for m in 0..2 {
            res = res.max((ric[l][m].value() + 3.0 * g[l][m]).norm());
            gmax = gmax.max(g[l][m].norm());
        }
    }

    // Θ_{lm̄} = H⁻¹ ∂_m̄H H⁻¹ ∂_lH − H⁻¹ ∂_l∂_m̄H with H_{ba} = g_{ab̄}, the
    // curvature of T^{1,0} in the coordinate frame
    let hi = inv(&[[g[0][0], g[1][0]], [g[0][1], g[1][1]]]);
    let part = |v: usize| -> Result<CMat> {
        let mut out = [[C64::new(0.0, 0.0); 2]; 2];
        for a in 0..2 {
            for b in 0..2 {
                out[a][b] = h[b][a].partial(v)?.value();
            }
        }
        Ok(out)
    };
    let mixed = |l: usize, m: usize| -> Result<CMat> {
        let mut out = [[C64::new(0.0, 0.0); 2]; 2];
        for a in 0..2 {
            for b in 0..2 {
                out[a][b] = h[b][a].partial(holo(l))?.partial(antiholo(m))?.value();
            }
        }
        Ok(out)
    };
    // theta[l][m] is the matrix Θ_{lm̄}
    let mut theta = [[[[C64::new(0.0, 0.0); 2]; 2]; 2]; 2];
    for l in 0..2 {
        for m in 0..2 {
            let first = mmul(&mmul(&hi, &part(antiholo(m))?), &mmul(&hi, &part(holo(l))?));
            let second = mmul(&hi, &mixed(l, m)?);
            for a in 0..2 {
                for b in 0..2 {
                    theta[l][m][a][b] = first[a][b] - second[a][b];
                }
            }
        }
    }
    let comp = |a: usize, b: usize| -> CMat { [[theta[0][0][a][b], theta[0][1][a][b]], [theta[1][0][a][b], theta[1][1][a][b]]] };
    let tr: CMat = {
        let (x, y) = (comp(0, 0), comp(1, 1));
        [[x[0][0] + y[0][0], x[0][1] + y[0][1]], [x[1][0] + y[1][0], x[1][1] + y[1][1]]]
    };
    let tr_tr = wedge11(&tr, &tr);
    let mut tr_sq = C64::new(0.0, 0.0);
    for a in 0..2 {
        for b in 0..2 {
            tr_sq += wedge11(&comp(a, b), &comp(b, a));
        }
    }
    // total Chern form det(I + iΘ/2π): c₁∧c₁ = −(1/4π²) trΘ∧trΘ and
    // c₂ = −(1/8π²)(trΘ∧trΘ − tr Θ∧Θ)
    let c1sq = -tr_tr / (4.0 * PI * PI) * TOP_FORM;
    let c2 = -(tr_tr - tr_sq) / (8.0 * PI * PI) * TOP_FORM;
    Ok(CurvatureReport {
        point: p,
        det_g,
        einstein_residual: res,
        einstein_relative: res / gmax,
        c1sq_density: c1sq.re,
        c2_density: c2.re,
        renorm_density: (c2 - c1sq / 3.0).re,
    })
}

pub fn einstein_residual(spec: &DomainSpec, p: (C64, C64)) -> Result<f64> {
    Ok(metric_and_ricci(spec, p)?.einstein_residual)
}

pub fn chern_densities(spec: &DomainSpec, p: (C64, C64)) -> Result<CurvatureReport> {
    metric_and_ricci(spec, p)
}

/// Non-divergence part of the boundary integrand, `a·Scal² + b·|A|²`.
pub fn s_theta(scal: f64, a11: C64) -> f64 {
    A_CONST * scal * scal + B_CONST * a11.norm_sqr()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChernGaussBonnetLedger {
    /// `∫ (c₂ − ⅓c₁²)` over the domain.
    pub interior_integral: f64,
    /// Change of the interior integral between the last two radial cutoffs.
    pub interior_tail: f64,
    #[serde(rename = "V_used")]
    pub v_used: f64,
    /// `∫ (Scal² − 16|A|²) θ∧dθ`.
    pub boundary_curvature_integral: f64,
    pub script_v: f64,
    pub chi_estimate: f64,
    pub a_const: f64,
    pub b_const: f64,
}

/// Radial cutoffs `1 − 10⁻ᵏ` of the boundary radius.
const CUTOFFS: [f64; 3] = [1e-2, 1e-3, 1e-4];
const TAIL_TOL: f64 = 1e-6;

/// `∫ (c₂ − ⅓c₁²)` over `{t < s·t_∂(u)}` for each cutoff, by Hopf directions
/// times graded radial Gauss–Legendre.
pub fn interior_integrals(spec: &DomainSpec, res: [usize; 3]) -> Result<Vec<f64>> {
    let (h1, h2) = (2.0 * PI / res[1] as f64, 2.0 * PI / res[2] as f64);
    let mut out = vec![0.0; CUTOFFS.len()];
    for (eta, we) in gauss_legendre_on(res[0], 0.0, PI / 2.0) {
        for a in 0..res[1] {
            for b in 0..res[2] {
                let u = hopf_direction(eta, a as f64 * h1, b as f64 * h2);
                let tb = radial_root(&spec.rho, u)?;
                let wdir = we * h1 * h2 * eta.sin() * eta.cos();
                // shells between successive cutoffs, accumulated
                let mut left = 0.0;
                let mut acc = 0.0;
                for (k, &gap) in CUTOFFS.iter().enumerate() {
                    let right = tb * (1.0 - gap);
                    for (t, w) in graded_toward_end(left, right, 12, 0.6, 10) {
                        acc += w * t.powi(3) * metric_and_ricci(spec, (u.0 * t, u.1 * t))?.renorm_density;
                    }
                    out[k] += wdir * acc;
                    left = right;
                }
            }
        }
    }
    Ok(out)
}

/// `𝒱 = (1/π²)(6V − (1/128)∫(Scal² − 16|A|²)θ∧dθ)` and `χ ≈ ∫(c₂ − ⅓c₁²) + 𝒱`.
pub fn renormalized_cgb(
    spec: &DomainSpec,
    v: f64,
    mesh: &BoundaryMesh,
    records: &[PointRecord],
    interior_res: [usize; 3],
) -> Result<ChernGaussBonnetLedger> {
    let layers = interior_integrals(spec, interior_res)?;
    let interior = layers[layers.len() - 1];
    let tail = (interior - layers[layers.len() - 2]).abs();
    if !(tail <= TAIL_TOL.max(1e-3 * interior.abs())) {
        return Err(CrError::Tolerance(format!(
            "interior Chern integral does not settle near the boundary: last cutoff changed it by {tail:.3e}"
        )));
    }
    let vals: Vec<f64> = records.iter().map(|r| r.scal * r.scal - 16.0 * r.a11.norm_sqr()).collect();
    let bci = mesh.integrate(&vals);
    let script_v = (6.0 * v - bci / 128.0) / (PI * PI);
    Ok(ChernGaussBonnetLedger {
        interior_integral: interior,
        interior_tail: tail,
        v_used: v,
        boundary_curvature_integral: bci,
        script_v,
        chi_estimate: interior + script_v,
        a_const: A_CONST,
        b_const: B_CONST,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::builtin_domain;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn ball_origin() {
        let b = builtin_domain("unit_ball", &[]).unwrap();
        let r = metric_and_ricci(&b, (c(0.0, 0.0), c(0.0, 0.0))).unwrap();
        assert_relative_eq!(r.det_g, 1.0, epsilon = 1e-14);
        assert!(r.einstein_residual < 1e-12);
        assert_relative_eq!(r.c1sq_density, 18.0 / (PI * PI), max_relative = 1e-13);
        assert!(r.renorm_density.abs() < 1e-12);
    }

    #[test]
    fn ball_off_center() {
        let b = builtin_domain("unit_ball", &[]).unwrap();
        let r = metric_and_ricci(&b, (c(0.36, 0.0), c(0.0, 0.48))).unwrap();
        assert_relative_eq!(r.det_g, 0.64f64.powi(-3), max_relative = 1e-12);
        assert!(r.einstein_residual < 1e-10);
        assert!(r.renorm_density.abs() < 1e-8 * r.c2_density.abs(), "{r:?}");
    }

    #[test]
    fn ricci_is_closed() {
        let d = builtin_domain("bumped_ball", &[0.05, 2.0]).unwrap();
        let h = metric_jets(&d, (c(0.3, -0.2), c(0.1, 0.4)), 6).unwrap();
        let ric = ricci_jets(&h).unwrap();
        // ∂_l Ric_{jm̄} = ∂_j Ric_{lm̄} and the conjugate identity
        for m in 0..2 {
            let x = ric[0][m].partial(holo(1)).unwrap().value() - ric[1][m].partial(holo(0)).unwrap().value();
            assert!(x.norm() < 1e-9, "{x}");
        }
        for l in 0..2 {
            let x = ric[l][0].partial(antiholo(1)).unwrap().value() - ric[l][1].partial(antiholo(0)).unwrap().value();
            assert!(x.norm() < 1e-9, "{x}");
        }
    }

    #[test]
    fn s_theta_values() {
        assert_relative_eq!(s_theta(2.0, c(0.0, 0.0)), -1.0 / (32.0 * PI * PI), epsilon = 1e-16);
        assert_eq!(s_theta(0.0, c(0.0, 0.0)), 0.0);
        let k = (-4.0f64 * 0.3).exp();
        let (s, a) = (1.7, c(0.2, -0.1));
        let e = (-2.0f64 * 0.3).exp();
        assert_relative_eq!(s_theta(s * e, a * e), k * s_theta(s, a), max_relative = 1e-14);
    }

    #[test]
    fn outside_point_rejected() {
        let b = builtin_domain("unit_ball", &[]).unwrap();
        assert!(metric_and_ricci(&b, (c(1.0, 0.5), c(0.0, 0.0))).is_err());
    }
}
