//! Truncated multivariate Taylor jets with complex coefficients.
//!
//! A jet of order `K` in `n` formal variables stores every Taylor coefficient
//! of total degree at most `K`, in graded-lexicographic order. Because the
//! ordering is graded, truncating to a lower order is a prefix slice.
//!
//! The geometric code uses four variables `(z, z̄, w, w̄)` treated as
//! independent, so conjugation is a formal swap of the paired slots.

use std::collections::HashMap;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::{Arc, LazyLock, Mutex};

use num_complex::Complex64;

use crate::error::{CrError, Result};

pub type C64 = Complex64;

pub const Z: usize = 0;
pub const ZB: usize = 1;
pub const W: usize = 2;
pub const WB: usize = 3;

/// Exponents of `(z, z̄, w, w̄)`; unused trailing slots stay zero for jets in
/// fewer variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Multidegree(pub [u8; 4]);

impl Multidegree {
    pub fn new(a: u8, abar: u8, b: u8, bbar: u8) -> Self {
        Multidegree([a, abar, b, bbar])
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    /// `a! ā! b! b̄!`
    pub fn factorial(&self) -> f64 {
        self.0.iter().map(|&e| (1..=e as u32).product::<u32>() as f64).product()
    }
}

/// Monomial table shared by every jet with the same `(nvars, order)`.
#[derive(Debug)]
pub struct Layout {
    pub nvars: usize,
    pub order: usize,
    monos: Vec<Multidegree>,
    /// `offsets[d]` is the index of the first monomial of degree `d`;
    /// `offsets[order + 1]` is the total length.
    offsets: Vec<usize>,
    index: HashMap<Multidegree, usize>,
    /// `hom[p][q]` lists `(i, j, k)` with `deg i = p`, `deg j = q`, `mono_i + mono_j = mono_k`.
    hom: Vec<Vec<Vec<(u16, u16, u16)>>>,
    /// For each variable: pairs `(target in order-1 layout, source here, factor)`.
    partials: Vec<Vec<(u16, u16, f64)>>,
}

static LAYOUTS: LazyLock<Mutex<HashMap<(usize, usize), Arc<Layout>>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

impl Layout {
    pub fn get(nvars: usize, order: usize) -> Arc<Layout> {
        assert!((1..=4).contains(&nvars), "jets support 1 to 4 variables");
        let mut cache = LAYOUTS.lock().unwrap_or_else(|e| e.into_inner());
        cache
            .entry((nvars, order))
            .or_insert_with(|| Arc::new(Layout::build(nvars, order)))
            .clone()
    }

    fn build(nvars: usize, order: usize) -> Layout {
        let mut monos = Vec::new();
        let mut offsets = Vec::with_capacity(order + 2);
        for d in 0..=order {
            offsets.push(monos.len());
            let mut cur = [0u8; 4];
            push_degree(nvars, 0, d, &mut cur, &mut monos);
        }
        offsets.push(monos.len());
        let index: HashMap<Multidegree, usize> =
            monos.iter().enumerate().map(|(i, m)| (*m, i)).collect();

        let mut hom = vec![vec![Vec::new(); order + 1]; order + 1];
        for p in 0..=order {
            for q in 0..=(order - p) {
                let list = &mut hom[p][q];
                for i in offsets[p]..offsets[p + 1] {
                    for j in offsets[q]..offsets[q + 1] {
                        let mut s = [0u8; 4];
                        for v in 0..4 {
                            s[v] = monos[i].0[v] + monos[j].0[v];
                        }
                        let k = index[&Multidegree(s)];
                        list.push((i as u16, j as u16, k as u16));
                    }
                }
            }
        }

        let mut partials = vec![Vec::new(); nvars];
        if order > 0 {
            for (v, table) in partials.iter_mut().enumerate() {
                // target monomials are those of degree <= order - 1, i.e. a prefix
                for t in 0..offsets[order] {
                    let mut m = monos[t];
                    m.0[v] += 1;
                    table.push((t as u16, index[&m] as u16, m.0[v] as f64));
                }
            }
        }

        Layout { nvars, order, monos, offsets, index, hom, partials }
    }

    pub fn len(&self) -> usize {
        self.monos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monos.is_empty()
    }

    pub fn len_to(&self, order: usize) -> usize {
        self.offsets[order + 1]
    }

    pub fn monomial(&self, i: usize) -> Multidegree {
        self.monos[i]
    }

    pub fn index_of(&self, m: &Multidegree) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn degree_range(&self, d: usize) -> std::ops::Range<usize> {
        self.offsets[d]..self.offsets[d + 1]
    }
}

fn push_degree(nvars: usize, v: usize, rem: usize, cur: &mut [u8; 4], out: &mut Vec<Multidegree>) {
    if v == nvars - 1 {
        cur[v] = rem as u8;
        out.push(Multidegree(*cur));
        cur[v] = 0;
        return;
    }
    for e in (0..=rem).rev() {
        cur[v] = e as u8;
        push_degree(nvars, v + 1, rem - e, cur, out);
    }
    cur[v] = 0;
}

#[derive(Clone, Debug)]
pub struct Jet {
    layout: Arc<Layout>,
    base: [C64; 4],
    coeffs: Vec<C64>,
}

impl PartialEq for Jet {
    fn eq(&self, other: &Self) -> bool {
        self.layout.nvars == other.layout.nvars
            && self.layout.order == other.layout.order
            && self.coeffs == other.coeffs
    }
}

impl Jet {
    pub fn zero(nvars: usize, order: usize, base: [C64; 4]) -> Jet {
        let layout = Layout::get(nvars, order);
        let n = layout.len();
        Jet { layout, base, coeffs: vec![C64::new(0.0, 0.0); n] }
    }

    pub fn constant(nvars: usize, order: usize, base: [C64; 4], c: C64) -> Jet {
        let mut j = Jet::zero(nvars, order, base);
        j.coeffs[0] = c;
        j
    }

    /// The jet of the coordinate function `x_v` expanded at `base`.
    pub fn variable(nvars: usize, order: usize, base: [C64; 4], v: usize) -> Jet {
        let mut j = Jet::constant(nvars, order, base, base[v]);
        if order > 0 {
            let mut m = Multidegree::default();
            m.0[v] = 1;
            let k = j.layout.index_of(&m).expect("variable monomial");
            j.coeffs[k] = C64::new(1.0, 0.0);
        }
        j
    }

    /// The four coordinate jets `(z, z̄, w, w̄)` at the real point `(z, w)`.
    pub fn coordinates(z: C64, w: C64, order: usize) -> [Jet; 4] {
        let base = [z, z.conj(), w, w.conj()];
        [0, 1, 2, 3].map(|v| Jet::variable(4, order, base, v))
    }

    pub fn from_coeffs(nvars: usize, order: usize, base: [C64; 4], coeffs: Vec<C64>) -> Jet {
        let layout = Layout::get(nvars, order);
        assert_eq!(coeffs.len(), layout.len(), "coefficient count");
        Jet { layout, base, coeffs }
    }

    pub fn order(&self) -> usize {
        self.layout.order
    }

    pub fn nvars(&self) -> usize {
        self.layout.nvars
    }

    pub fn base(&self) -> [C64; 4] {
        self.base
    }

    pub fn layout(&self) -> &Arc<Layout> {
        &self.layout
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn value(&self) -> C64 {
        self.coeffs[0]
    }

    pub fn coeff(&self, m: &Multidegree) -> C64 {
        self.layout.index_of(m).map_or(C64::new(0.0, 0.0), |i| self.coeffs[i])
    }

    pub fn truncate(&self, order: usize) -> Jet {
        if order >= self.order() {
            return self.clone();
        }
        let layout = Layout::get(self.nvars(), order);
        let n = layout.len();
        Jet { layout, base: self.base, coeffs: self.coeffs[..n].to_vec() }
    }

    fn same_order(a: &Jet, b: &Jet) -> (Jet, Jet) {
        let k = a.order().min(b.order());
        (a.truncate(k), b.truncate(k))
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn map_coeffs(&self, f: impl Fn(C64) -> C64) -> Jet {
        Jet { layout: self.layout.clone(), base: self.base, coeffs: self.coeffs.iter().map(|&c| f(c)).collect() }
    }

    pub fn scale(&self, s: C64) -> Jet {
        self.map_coeffs(|c| c * s)
    }

    pub fn scale_re(&self, s: f64) -> Jet {
        self.map_coeffs(|c| c * s)
    }

    pub fn add_const(&self, s: C64) -> Jet {
        let mut r = self.clone();
        r.coeffs[0] += s;
        r
    }

    /// Accumulates `scale * (a_p * b_q)` into `out` using the homogeneous triple table.
    fn acc_hom(layout: &Layout, out: &mut [C64], a: &[C64], b: &[C64], p: usize, q: usize, scale: f64) {
        for &(i, j, k) in &layout.hom[p][q] {
            out[k as usize] += a[i as usize] * b[j as usize] * scale;
        }
    }

    pub fn mul_jet(&self, other: &Jet) -> Jet {
        if self.order() != other.order() {
            let (a, b) = Jet::same_order(self, other);
            return a.mul_jet(&b);
        }
        let layout = &self.layout;
        let mut out = vec![C64::new(0.0, 0.0); layout.len()];
        let k = layout.order;
        for p in 0..=k {
            for q in 0..=(k - p) {
                Jet::acc_hom(layout, &mut out, &self.coeffs, &other.coeffs, p, q, 1.0);
            }
        }
        Jet { layout: layout.clone(), base: self.base, coeffs: out }
    }

    pub fn recip(&self) -> Result<Jet> {
        let one = Jet::constant(self.nvars(), self.order(), self.base, C64::new(1.0, 0.0));
        one.div(self)
    }

    pub fn div(&self, other: &Jet) -> Result<Jet> {
        if self.order() != other.order() {
            let (a, b) = Jet::same_order(self, other);
            return a.div(&b);
        }
        let b0 = other.coeffs[0];
        if b0.norm() == 0.0 || !b0.norm().is_finite() {
            return Err(CrError::SingularJet(format!("division by a jet with constant term {b0}")));
        }
        let layout = &self.layout;
        let k = layout.order;
        let mut q = vec![C64::new(0.0, 0.0); layout.len()];
        let inv = b0.inv();
        for d in 0..=k {
            let mut acc = vec![C64::new(0.0, 0.0); layout.len()];
            for j in 1..=d {
                Jet::acc_hom(layout, &mut acc, &other.coeffs, &q, j, d - j, 1.0);
            }
            for i in layout.degree_range(d) {
                q[i] = (self.coeffs[i] - acc[i]) * inv;
            }
        }
        Ok(Jet { layout: layout.clone(), base: self.base, coeffs: q })
    }

    pub fn exp(&self) -> Jet {
        let layout = &self.layout;
        let k = layout.order;
        let mut f = vec![C64::new(0.0, 0.0); layout.len()];
        f[0] = self.coeffs[0].exp();
        for d in 1..=k {
            let mut acc = vec![C64::new(0.0, 0.0); layout.len()];
            for j in 1..=d {
                Jet::acc_hom(layout, &mut acc, &self.coeffs, &f, j, d - j, j as f64);
            }
            for i in layout.degree_range(d) {
                f[i] = acc[i] / d as f64;
            }
        }
        Jet { layout: layout.clone(), base: self.base, coeffs: f }
    }

    fn check_positive(&self, what: &str) -> Result<()> {
        let c = self.coeffs[0];
        if !(c.re > 0.0) || c.im.abs() > 1e-10 * c.re.max(1.0) {
            return Err(CrError::Domain(format!("{what} needs a positive real constant term, got {c}")));
        }
        Ok(())
    }

    pub fn ln(&self) -> Result<Jet> {
        self.check_positive("log")?;
        let layout = &self.layout;
        let k = layout.order;
        let f0 = self.coeffs[0];
        let mut g = vec![C64::new(0.0, 0.0); layout.len()];
        g[0] = f0.ln();
        for d in 1..=k {
            let mut acc = vec![C64::new(0.0, 0.0); layout.len()];
            for j in 1..d {
                Jet::acc_hom(layout, &mut acc, &g, &self.coeffs, j, d - j, j as f64);
            }
            for i in layout.degree_range(d) {
                g[i] = (self.coeffs[i] * d as f64 - acc[i]) / (f0 * d as f64);
            }
        }
        Ok(Jet { layout: layout.clone(), base: self.base, coeffs: g })
    }

    /// `f^p` for real `p` by the Euler-operator recurrence; needs a positive base value.
    pub fn powf(&self, p: f64) -> Result<Jet> {
        self.check_positive("fractional power")?;
        let layout = &self.layout;
        let k = layout.order;
        let f0 = self.coeffs[0];
        let mut g = vec![C64::new(0.0, 0.0); layout.len()];
        g[0] = f0.powf(p);
        for d in 1..=k {
            let mut acc = vec![C64::new(0.0, 0.0); layout.len()];
            for j in 1..=d {
                let kk = d - j;
                Jet::acc_hom(layout, &mut acc, &self.coeffs, &g, j, kk, p * j as f64 - kk as f64);
            }
            for i in layout.degree_range(d) {
                g[i] = acc[i] / (f0 * d as f64);
            }
        }
        Ok(Jet { layout: layout.clone(), base: self.base, coeffs: g })
    }

    pub fn sqrt(&self) -> Result<Jet> {
        self.powf(0.5)
    }

    pub fn powi(&self, n: u32) -> Jet {
        let mut result = Jet::constant(self.nvars(), self.order(), self.base, C64::new(1.0, 0.0));
        let mut sq = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_jet(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul_jet(&sq);
            }
        }
        result
    }

    /// Swaps `z ↔ z̄`, `w ↔ w̄` and conjugates every coefficient.
    pub fn conjugate_swap(&self) -> Jet {
        let layout = &self.layout;
        let mut out = vec![C64::new(0.0, 0.0); layout.len()];
        for (i, c) in self.coeffs.iter().enumerate() {
            let m = layout.monos[i].0;
            let s = Multidegree([m[1], m[0], m[3], m[2]]);
            let j = layout.index[&s];
            out[j] = c.conj();
        }
        let b = self.base;
        Jet { layout: layout.clone(), base: [b[1].conj(), b[0].conj(), b[3].conj(), b[2].conj()], coeffs: out }
    }

    /// Real part in the formal sense: `(f + swap f) / 2`.
    pub fn re_part(&self) -> Jet {
        (self + &self.conjugate_swap()).scale_re(0.5)
    }

    pub fn im_part(&self) -> Jet {
        (self - &self.conjugate_swap()).scale(C64::new(0.0, -0.5))
    }

    pub fn wirtinger_partial(&self, d: &Multidegree) -> Result<C64> {
        if d.degree() > self.order() {
            return Err(CrError::Truncation(format!(
                "partial of degree {} requested from a jet of order {}",
                d.degree(),
                self.order()
            )));
        }
        Ok(self.coeff(d) * d.factorial())
    }

    /// `∂f/∂x_v`, one order lower.
    pub fn partial(&self, v: usize) -> Result<Jet> {
        if self.order() == 0 {
            return Err(CrError::Truncation("cannot differentiate an order-0 jet".into()));
        }
        let layout = Layout::get(self.nvars(), self.order() - 1);
        let mut out = vec![C64::new(0.0, 0.0); layout.len()];
        for &(t, s, f) in &self.layout.partials[v] {
            out[t as usize] = self.coeffs[s as usize] * f;
        }
        Ok(Jet { layout, base: self.base, coeffs: out })
    }

    /// `Σ V^i ∂_i f` for a jet-valued vector field `V`.
    pub fn directional(&self, field: &[Jet]) -> Result<Jet> {
        assert_eq!(field.len(), self.nvars(), "vector field dimension");
        let mut acc: Option<Jet> = None;
        for (v, comp) in field.iter().enumerate() {
            let term = self.partial(v)?.mul_jet(comp);
            acc = Some(match acc {
                None => term,
                Some(a) => &a + &term,
            });
        }
        Ok(acc.expect("at least one variable"))
    }

    /// Substitutes jets in chart parameters for each of this jet's variables.
    ///
    /// The constant terms of `chart` must be the expansion point of `self`.
    /// The result has the chart's order, which may not exceed ours.
    pub fn nest_through_chart(&self, chart: &[Jet]) -> Result<Jet> {
        assert_eq!(chart.len(), self.nvars(), "one chart jet per variable");
        let kc = chart[0].order();
        let pc = chart[0].nvars();
        if chart.iter().any(|c| c.order() != kc || c.nvars() != pc) {
            return Err(CrError::Truncation("chart jets must share order and variable count".into()));
        }
        if kc > self.order() {
            return Err(CrError::Truncation(format!(
                "chart order {kc} exceeds the order {} of the composed jet",
                self.order()
            )));
        }
        let cbase = chart[0].base;
        let deltas: Vec<Jet> = chart
            .iter()
            .map(|c| {
                let mut d = c.clone();
                d.coeffs[0] = C64::new(0.0, 0.0);
                d
            })
            .collect();
        let layout = &self.layout;
        let n = layout.len_to(kc);
        let mut powers: Vec<Jet> = Vec::with_capacity(n);
        let mut out = Jet::zero(pc, kc, cbase);
        for i in 0..n {
            let m = layout.monos[i];
            let p = if i == 0 {
                Jet::constant(pc, kc, cbase, C64::new(1.0, 0.0))
            } else {
                let v = (0..4).find(|&v| m.0[v] > 0).expect("nonzero monomial");
                let mut prev = m;
                prev.0[v] -= 1;
                let pi = layout.index[&prev];
                powers[pi].mul_jet(&deltas[v])
            };
            let c = self.coeffs[i];
            if c != C64::new(0.0, 0.0) {
                for (o, x) in out.coeffs.iter_mut().zip(&p.coeffs) {
                    *o += c * x;
                }
            }
            powers.push(p);
        }
        Ok(out)
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        if self.order() != rhs.order() {
            let (a, b) = Jet::same_order(self, rhs);
            return &a + &b;
        }
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect();
        Jet { layout: self.layout.clone(), base: self.base, coeffs }
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        if self.order() != rhs.order() {
            let (a, b) = Jet::same_order(self, rhs);
            return &a - &b;
        }
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect();
        Jet { layout: self.layout.clone(), base: self.base, coeffs }
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        self.mul_jet(rhs)
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.map_coeffs(|c| -c)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        &self + &rhs
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        &self - &rhs
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        self.mul_jet(&rhs)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        -&self
    }
}

impl AddAssign<&Jet> for Jet {
    fn add_assign(&mut self, rhs: &Jet) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Jet> for Jet {
    fn sub_assign(&mut self, rhs: &Jet) {
        *self = &*self - rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn layout_sizes() {
        assert_eq!(Layout::get(4, 6).len(), 210);
        assert_eq!(Layout::get(4, 4).len(), 70);
        assert_eq!(Layout::get(1, 5).len(), 6);
        let l = Layout::get(4, 3);
        assert_eq!(l.len_to(1), 5);
    }

    #[test]
    fn bilinear_and_monomial_partials() {
        let [z, zb, _, _] = Jet::coordinates(c(0.5), c(0.0), 3);
        let f = &z * &zb;
        assert_relative_eq!(f.wirtinger_partial(&Multidegree::new(1, 1, 0, 0)).unwrap().re, 1.0);
        let g = &(&z * &z) * &zb;
        assert_relative_eq!(g.wirtinger_partial(&Multidegree::new(2, 1, 0, 0)).unwrap().re, 2.0);
    }

    #[test]
    fn geometric_series() {
        let [z, ..] = Jet::coordinates(c(0.0), c(0.0), 3);
        let one = Jet::constant(4, 3, z.base(), c(1.0));
        let g = one.div(&(&one - &z)).unwrap();
        for k in 0..=3 {
            assert_relative_eq!(g.coeff(&Multidegree::new(k, 0, 0, 0)).re, 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn singular_division() {
        let [z, ..] = Jet::coordinates(c(0.0), c(0.0), 2);
        assert!(matches!(z.recip(), Err(CrError::SingularJet(_))));
    }

    #[test]
    fn log_and_sqrt_series() {
        let [z, ..] = Jet::coordinates(c(0.0), c(0.0), 4);
        let f = z.add_const(c(1.0));
        let l = f.ln().unwrap();
        assert_relative_eq!(l.wirtinger_partial(&Multidegree::new(1, 0, 0, 0)).unwrap().re, 1.0);
        assert_relative_eq!(l.wirtinger_partial(&Multidegree::new(2, 0, 0, 0)).unwrap().re, -1.0);
        let s = f.sqrt().unwrap();
        assert_relative_eq!(s.wirtinger_partial(&Multidegree::new(1, 0, 0, 0)).unwrap().re, 0.5);
        assert!(matches!((-&f).ln(), Err(CrError::Domain(_))));
    }

    #[test]
    fn exp_log_round_trip() {
        let [z, _, w, wb] = Jet::coordinates(c(0.0), c(0.0), 4);
        let f = (&z + &(&w * &wb)).add_const(c(2.0));
        let back = f.ln().unwrap().exp();
        assert!((&back - &f).max_abs() <= 1e-12);
    }

    #[test]
    fn powi_matches_repeated_product() {
        let [z, zb, w, _] = Jet::coordinates(C64::new(0.3, 0.2), C64::new(-0.1, 0.4), 5);
        let f = &(&z * &zb) + &w;
        let p = f.powi(4);
        let q = &(&f * &f) * &(&f * &f);
        assert!((&p - &q).max_abs() <= 1e-14);
        assert!((f.powi(0).value() - c(1.0)).norm() == 0.0);
    }

    #[test]
    fn powf_matches_exp_log() {
        let [z, zb, w, wb] = Jet::coordinates(C64::new(0.3, 0.2), C64::new(-0.1, 0.4), 5);
        let f = (&(&z * &zb) + &(&w * &wb)).add_const(c(0.7));
        let a = f.powf(-1.5).unwrap();
        let b = f.ln().unwrap().scale_re(-1.5).exp();
        assert!((&a - &b).max_abs() <= 1e-12);
    }

    #[test]
    fn swap_is_involution_and_fixes_real_jets() {
        let [z, zb, w, wb] = Jet::coordinates(C64::new(0.6, 0.1), C64::new(0.2, -0.7), 4);
        let rho = &(&(&z * &zb) + &(&w * &wb)) - &Jet::constant(4, 4, z.base(), c(1.0));
        assert!((&rho.conjugate_swap() - &rho).max_abs() <= 1e-15);
        assert!((&z.conjugate_swap() - &zb).max_abs() == 0.0);
        let f = &(&z * &z) * &w;
        assert!((&f.conjugate_swap().conjugate_swap() - &f).max_abs() == 0.0);
    }

    #[test]
    fn nested_chart_circle() {
        // z = cos t, w = sin t, and f = z z̄ gives cos² t; second derivative at 0 is -2.
        let t = Jet::variable(1, 4, [c(0.0); 4], 0);
        let cos_t = t.scale(C64::new(0.0, 1.0)).exp().re_part_1d();
        let sin_t = t.scale(C64::new(0.0, 1.0)).exp().im_part_1d();
        let [z, zb, w, wb] = Jet::coordinates(c(1.0), c(0.0), 4);
        let f = &z * &zb;
        let _ = (w, wb);
        let g = f.nest_through_chart(&[cos_t.clone(), cos_t, sin_t.clone(), sin_t]).unwrap();
        let d2 = g.wirtinger_partial(&Multidegree::new(2, 0, 0, 0)).unwrap();
        assert_relative_eq!(d2.re, -2.0, epsilon = 1e-14);
    }

    #[test]
    fn constant_chart_gives_constant() {
        let [z, zb, w, wb] = Jet::coordinates(C64::new(0.2, 0.3), C64::new(0.1, 0.0), 3);
        let f = &(&z * &w) + &(&zb * &wb);
        let chart: Vec<Jet> = f.base().iter().map(|&b| Jet::constant(2, 3, [c(0.0); 4], b)).collect();
        let g = f.nest_through_chart(&chart).unwrap();
        assert!(g.coeffs()[1..].iter().all(|c| c.norm() == 0.0));
        assert_relative_eq!((g.value() - f.value()).norm(), 0.0);
    }

    #[test]
    fn chart_order_mismatch() {
        let [z, ..] = Jet::coordinates(c(0.0), c(0.0), 2);
        let chart: Vec<Jet> = (0..4).map(|_| Jet::variable(1, 3, [c(0.0); 4], 0)).collect();
        assert!(matches!(z.nest_through_chart(&chart), Err(CrError::Truncation(_))));
    }

    #[test]
    fn partial_degree_check() {
        let [z, ..] = Jet::coordinates(c(0.0), c(0.0), 2);
        assert!(z.wirtinger_partial(&Multidegree::new(3, 0, 0, 0)).is_err());
    }

    impl Jet {
        // Real and imaginary parts of a one-variable jet with real parameter.
        fn re_part_1d(&self) -> Jet {
            self.map_coeffs(|c| C64::new(c.re, 0.0))
        }
        fn im_part_1d(&self) -> Jet {
            self.map_coeffs(|c| C64::new(c.im, 0.0))
        }
    }
}
