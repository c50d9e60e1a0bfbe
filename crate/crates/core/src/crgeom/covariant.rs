//! Covariant derivatives of boundary fields in the normalized frame (`h₁₁̄ = 1`).

use super::forms::{conj_vector, truncate_vector, Vector};
use crate::error::{CrError, Result};
use crate::jets::{Jet, C64};

/// Frame and connection data needed to differentiate fields at one point.
#[derive(Clone, Debug)]
pub struct Geometry {
    pub w1: Vector,
    pub t: Vector,
    /// `φ₁¹(W₁)`.
    pub a: Jet,
    /// `φ₁¹(W̄₁)`.
    pub b: Jet,
    pub scal: Jet,
    pub a11: Jet,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ScalarDerivs {
    pub f1: C64,
    pub f1bar: C64,
    pub ft: C64,
    pub f11: C64,
    pub f11bar: C64,
    pub f1bar1: C64,
    pub lap: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TensorDerivs {
    /// `A₁₁,₁̄`.
    pub a11_1bar: C64,
    /// `A₁₁,¹¹ = A₁₁,₁̄₁̄`.
    pub a11_up11: C64,
    /// `A¹_{1̄,}^{1̄} = A_{1̄1̄,1}`.
    pub a_div: C64,
}

impl Geometry {
    pub fn w1bar(&self) -> Vector {
        conj_vector(&self.w1)
    }

    /// Keeps only what is needed for two derivatives of an external field.
    pub fn light(&self) -> Geometry {
        Geometry {
            w1: truncate_vector(&self.w1, 2),
            t: truncate_vector(&self.t, 1),
            a: self.a.truncate(1),
            b: self.b.truncate(1),
            scal: self.scal.truncate(0),
            a11: self.a11.truncate(0),
        }
    }

    /// Frame derivatives of `f` corrected by the connection; `f` needs order ≥ 2
    /// and the frame order ≥ 1.
    pub fn scalar_derivs(&self, f: &Jet) -> Result<ScalarDerivs> {
        if f.order() < 2 || self.w1[0].order() < 1 || self.b.order() < 1 {
            return Err(CrError::Truncation("two covariant derivatives need field order 2 and frame order 1".into()));
        }
        let w1 = &self.w1;
        let w1b = self.w1bar();
        let f1 = f.directional(w1)?;
        let f1b = f.directional(&w1b)?;
        let ft = f.directional(&self.t)?;
        let bs = self.b.conjugate_swap();
        let f11 = &f1.directional(w1)? - &(&self.a * &f1);
        let f11b = &f1.directional(&w1b)? - &(&self.b * &f1);
        let f1b1 = &f1b.directional(w1)? - &(&bs * &f1b);
        let (v11b, v1b1) = (f11b.value(), f1b1.value());
        Ok(ScalarDerivs {
            f1: f1.value(),
            f1bar: f1b.value(),
            ft: ft.value(),
            f11: f11.value(),
            f11bar: v11b,
            f1bar1: v1b1,
            lap: -(v11b + v1b1).re,
        })
    }

    pub fn torsion_derivs(&self) -> Result<TensorDerivs> {
        let a = &self.a11;
        if a.order() < 2 {
            return Err(CrError::Truncation("torsion derivatives need the torsion jet at order 2".into()));
        }
        let w1 = &self.w1;
        let w1b = self.w1bar();
        let two_b = self.b.scale_re(2.0);
        let a1b = &a.directional(&w1b)? - &(&two_b * a);
        let as_ = self.a.conjugate_swap();
        let a1b1b = &(&a1b.directional(&w1b)? - &(&two_b * &a1b)) - &(&as_ * &a1b);
        let abar = a.conjugate_swap();
        let bs2 = self.b.conjugate_swap().scale_re(2.0);
        let adiv = &abar.directional(w1)? - &(&bs2 * &abar);
        Ok(TensorDerivs { a11_1bar: a1b.value(), a11_up11: a1b1b.value(), a_div: adiv.value() })
    }
}
