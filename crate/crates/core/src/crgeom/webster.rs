use std::sync::LazyLock;

use nalgebra::{Complex, DMatrix};

use super::covariant::{Geometry, TensorDerivs};
use super::forms::{conj_vector, truncate_vector, Form1};
use super::frame::{frame_at, frame_from_jet, BoundaryFrame};
use crate::dsl::DomainSpec;
use crate::error::{CrError, Result};
use crate::jets::{Jet, C64};

/// Residual ceiling of the structure-equation solve.
pub const STRUCTURE_TOL: f64 = 1e-9;

/// Covariant derivatives of the curvature and torsion at a point.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DerivedTable {
    /// `Scal₁ = W₁ Scal`.
    pub scal_1: C64,
    /// `Scal¹ = Scal_{1̄}`.
    pub scal_up1: C64,
    pub scal_t: f64,
    pub lap_scal: f64,
    /// `A₁₁,¹¹`.
    pub a11_up11: C64,
    pub abs_a2: f64,
    /// `A¹_{1̄,}^{1̄}`.
    pub a_div: C64,
}

#[derive(Clone, Debug)]
pub struct PseudohermitianPointData {
    pub p: (C64, C64),
    pub scal: f64,
    pub a11: C64,
    /// `φ₁¹` in the ambient coframe.
    pub conn: Form1,
    pub residual: f64,
    pub derived: Option<DerivedTable>,
    pub geometry: Geometry,
}

/// Constant least-squares operator for the unknowns `(b, c, A¹_{1̄})`.
///
/// The six evaluations `D1..D6` of `dϑ¹` on frame pairs
/// `(W₁,W̄₁), (W₁,ξ), (W₁,ξ̄), (W̄₁,ξ), (W̄₁,ξ̄), (ξ,ξ̄)` satisfy
/// `D1 = b`, `D2 = c − r/2`, `D3 = −c̄ − r/2`, `D4 = iA¹_{1̄}`, `D5 = 0`,
/// `D6 = −W̄₁r` once compatibility `a = −b̄`, `e = −c̄` is imposed.
/// Conjugating the third row makes every row complex-linear.
static SOLVE: LazyLock<(DMatrix<Complex<f64>>, DMatrix<Complex<f64>>)> = LazyLock::new(|| {
    let o = Complex::new(1.0, 0.0);
    let z = Complex::new(0.0, 0.0);
    let i = Complex::new(0.0, 1.0);
    #[rustfmt::skip]
    let m = DMatrix::from_row_slice(6, 3, &[
        o, z, z,
        z, o, z,
        z, -o, z,
        z, z, i,
        z, z, z,
        z, z, z,
    ]);
    let pinv = m.clone().pseudo_inverse(1e-12).expect("constant matrix has a pseudo-inverse");
    (m, pinv)
});

fn combine(coeffs: &[Complex<f64>], jets: &[Jet]) -> Jet {
    let mut acc = jets[0].scale(coeffs[0]);
    for (c, j) in coeffs.iter().zip(jets).skip(1) {
        if c.norm() != 0.0 {
            acc += &j.scale(*c);
        }
    }
    acc
}

/// Webster curvature, torsion and connection at `p`, computed from ρ.
pub fn webster_at(spec: &DomainSpec, p: (C64, C64)) -> Result<PseudohermitianPointData> {
    webster_from_frame(frame_at(spec, p, false)?)
}

/// Same, for an explicit jet of a defining function.
pub fn webster_from_jet(phi: Jet, p: (C64, C64)) -> Result<PseudohermitianPointData> {
    webster_from_frame(frame_from_jet(phi, p)?)
}

pub fn webster_from_frame(f: BoundaryFrame) -> Result<PseudohermitianPointData> {
    let k = f.phi.order();
    if k < 4 {
        return Err(CrError::Truncation(format!("curvature needs jet order at least 4, got {k}")));
    }
    let dtheta1 = f.theta1.d()?;
    let ko = k - 3;
    let w1 = truncate_vector(&f.w1, ko);
    let xi = truncate_vector(&f.xi, ko);
    let w1b = conj_vector(&w1);
    let xib = conj_vector(&xi);
    let r = f.r.truncate(ko);
    // r¹ = W̄₁ r needs r one order higher.
    let r_up = f.r.directional(&truncate_vector(&conj_vector(&f.w1), ko))?;

    let d1 = dtheta1.eval(&w1, &w1b);
    let d2 = dtheta1.eval(&w1, &xi);
    let d3 = dtheta1.eval(&w1, &xib);
    let d4 = dtheta1.eval(&w1b, &xi);
    let d5 = dtheta1.eval(&w1b, &xib);
    let d6 = dtheta1.eval(&xi, &xib);

    let half_r = r.scale_re(0.5);
    let rhs = [d1, &d2 + &half_r, &d3.conjugate_swap() + &half_r, d4, d5, &d6 + &r_up];
    let (m, pinv) = &*SOLVE;
    let row = |mat: &DMatrix<Complex<f64>>, i: usize| -> Vec<Complex<f64>> { (0..mat.ncols()).map(|j| mat[(i, j)]).collect() };
    let unknowns: Vec<Jet> = (0..3).map(|i| combine(&row(pinv, i), &rhs)).collect();
    let mut residual: f64 = 0.0;
    for (i, rh) in rhs.iter().enumerate() {
        let fit = combine(&row(m, i), &unknowns);
        residual = residual.max((rh - &fit).value().norm());
    }
    if !(residual <= STRUCTURE_TOL) {
        return Err(CrError::StructureResidual { residual, tolerance: STRUCTURE_TOL });
    }
    let b = unknowns[0].clone();
    let c = unknowns[1].clone();
    let a_up = unknowns[2].clone();
    let a = -&b.conjugate_swap();
    let e = -&c.conjugate_swap();

    let t1 = f.theta1.map(|j| j.truncate(ko));
    let t1b = t1.conj();
    let dphi = f.dphi.map(|j| j.truncate(ko));
    let dbarphi = dphi.conj();
    let conn = t1.scale(&a).add(&t1b.scale(&b)).add(&dphi.scale(&c)).add(&dbarphi.scale(&e));
    let dconn = conn.d()?;
    let ks = ko - 1;
    let scal_raw = dconn.eval(&truncate_vector(&w1, ks), &truncate_vector(&w1b, ks));
    let scal_imag = scal_raw.value().im.abs();
    let scal_jet = scal_raw.re_part();
    let a11_jet = a_up.conjugate_swap();

    let geometry = Geometry {
        w1: f.w1.clone(),
        t: f.t.clone(),
        a: a.clone(),
        b: b.clone(),
        scal: scal_jet,
        a11: a11_jet,
    };
    let derived = if geometry.scal.order() >= 2 { Some(derived_table(&geometry)?) } else { None };
    Ok(PseudohermitianPointData {
        p: f.p,
        scal: geometry.scal.value().re,
        a11: geometry.a11.value(),
        conn,
        residual: residual.max(scal_imag),
        derived,
        geometry,
    })
}

fn derived_table(g: &Geometry) -> Result<DerivedTable> {
    let s = g.scalar_derivs(&g.scal)?;
    let t: TensorDerivs = g.torsion_derivs()?;
    Ok(DerivedTable {
        scal_1: s.f1,
        scal_up1: s.f1bar,
        scal_t: s.ft.re,
        lap_scal: s.lap,
        a11_up11: t.a11_up11,
        abs_a2: g.a11.value().norm_sqr(),
        a_div: t.a_div,
    })
}

