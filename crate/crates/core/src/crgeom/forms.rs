//! Jet-valued vectors and differential forms in the ambient coframe
//! `{dz, dz̄, dw, dw̄}`.

use crate::error::Result;
use crate::jets::{Jet, C64};

/// Components on `(∂_z, ∂_z̄, ∂_w, ∂_w̄)`.
pub type Vector = [Jet; 4];

/// Index pairs of the stored 2-form components, `i < j`.
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Slot permutation taking a formal variable to its conjugate.
const CONJ: [usize; 4] = [1, 0, 3, 2];

#[derive(Clone, Debug)]
pub struct Form1(pub [Jet; 4]);

#[derive(Clone, Debug)]
pub struct Form2(pub [Jet; 6]);

/// Complex conjugate of a vector field.
pub fn conj_vector(v: &Vector) -> Vector {
    CONJ.map(|i| v[i].conjugate_swap())
}

pub fn truncate_vector(v: &Vector, order: usize) -> Vector {
    [0, 1, 2, 3].map(|i| v[i].truncate(order))
}

impl Form1 {
    pub fn conj(&self) -> Form1 {
        Form1(CONJ.map(|i| self.0[i].conjugate_swap()))
    }

    pub fn eval(&self, v: &Vector) -> Jet {
        let mut acc = &self.0[0] * &v[0];
        for i in 1..4 {
            acc += &(&self.0[i] * &v[i]);
        }
        acc
    }

    pub fn scale(&self, s: &Jet) -> Form1 {
        Form1([0, 1, 2, 3].map(|i| &self.0[i] * s))
    }

    pub fn add(&self, o: &Form1) -> Form1 {
        Form1([0, 1, 2, 3].map(|i| &self.0[i] + &o.0[i]))
    }

    pub fn sub(&self, o: &Form1) -> Form1 {
        Form1([0, 1, 2, 3].map(|i| &self.0[i] - &o.0[i]))
    }

    pub fn map(&self, f: impl Fn(&Jet) -> Jet) -> Form1 {
        Form1([0, 1, 2, 3].map(|i| f(&self.0[i])))
    }

    /// `dα = Σ_{i<j} (∂_i α_j − ∂_j α_i) dx^i ∧ dx^j`; the order drops by one.
    pub fn d(&self) -> Result<Form2> {
        let mut out = Vec::with_capacity(6);
        for &(i, j) in &PAIRS {
            out.push(&self.0[j].partial(i)? - &self.0[i].partial(j)?);
        }
        Ok(Form2(out.try_into().expect("six components")))
    }

    pub fn wedge(&self, o: &Form1) -> Form2 {
        Form2(PAIRS.map(|(i, j)| &(&self.0[i] * &o.0[j]) - &(&self.0[j] * &o.0[i])))
    }

    /// Constant-term values.
    pub fn values(&self) -> [C64; 4] {
        [0, 1, 2, 3].map(|i| self.0[i].value())
    }
}

impl Form2 {
    /// `Ω(X, Y) = Σ_{i<j} Ω_ij (X^i Y^j − X^j Y^i)`.
    pub fn eval(&self, x: &Vector, y: &Vector) -> Jet {
        let mut acc: Option<Jet> = None;
        for (k, &(i, j)) in PAIRS.iter().enumerate() {
            let t = &self.0[k] * &(&(&x[i] * &y[j]) - &(&x[j] * &y[i]));
            acc = Some(match acc {
                None => t,
                Some(a) => &a + &t,
            });
        }
        acc.expect("nonempty")
    }

    /// Exterior derivative, as the four independent 3-form components
    /// on `(012, 013, 023, 123)`.
    pub fn d(&self) -> Result<[Jet; 4]> {
        let c = |i: usize, j: usize| -> &Jet {
            let k = PAIRS.iter().position(|&p| p == (i, j)).expect("pair");
            &self.0[k]
        };
        let triple = |a: usize, b: usize, e: usize| -> Result<Jet> {
            Ok(&(&c(b, e).partial(a)? - &c(a, e).partial(b)?) + &c(a, b).partial(e)?)
        };
        Ok([triple(0, 1, 2)?, triple(0, 1, 3)?, triple(0, 2, 3)?, triple(1, 2, 3)?])
    }
}
