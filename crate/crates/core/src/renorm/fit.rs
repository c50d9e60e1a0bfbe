//! Least-squares fit of `Vol(ε) ≈ c₀ε⁻² + c₁ε⁻¹ + L log(−ε) + V + d₁ε + d₂ε²`.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{CrError, Result};

pub const MIN_SAMPLES: usize = 8;
/// Columns of the model.
const NBASIS: usize = 6;
/// Above this the scaled design matrix is treated as rank deficient.
const MAX_CONDITION: f64 = 1e13;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VolumeExpansion {
    pub c0: f64,
    pub c1: f64,
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(rename = "V")]
    pub v: f64,
    /// Largest absolute reconstruction error over the samples.
    pub fit_residual: f64,
    pub epsilon_range: (f64, f64),
    /// `|L_a − L_b|` from fits on the two halves of the window, when each half is large enough.
    pub l_uncertainty: Option<f64>,
    pub condition: f64,
    pub samples: usize,
}

fn basis(eps: f64) -> [f64; NBASIS] {
    [1.0 / (eps * eps), 1.0 / eps, (-eps).ln(), 1.0, eps, eps * eps]
}

/// Coefficients, max residual and condition number of the column-scaled system.
fn solve(samples: &[(f64, f64)]) -> Result<([f64; NBASIS], f64, f64)> {
    let n = samples.len();
    let mut a = DMatrix::<f64>::zeros(n, NBASIS);
    for (i, &(e, _)) in samples.iter().enumerate() {
        for (j, v) in basis(e).into_iter().enumerate() {
            a[(i, j)] = v;
        }
    }
    let scale: Vec<f64> = (0..NBASIS).map(|j| a.column(j).norm()).collect();
    for j in 0..NBASIS {
        a.column_mut(j).scale_mut(1.0 / scale[j]);
    }
    let sv = a.clone().svd(false, false).singular_values;
    let condition = sv.max() / sv.min();
    if !(condition < MAX_CONDITION) {
        return Err(CrError::Fit(format!("design matrix is ill-conditioned (condition estimate {condition:.3e})")));
    }
    let b = DVector::from_iterator(n, samples.iter().map(|s| s.1));
    let qr = a.qr();
    let qtb = qr.q().transpose() * &b;
    let x = qr
        .r()
        .solve_upper_triangular(&qtb)
        .ok_or_else(|| CrError::Fit(format!("triangular factor is singular (condition estimate {condition:.3e})")))?;
    let mut coef = [0.0; NBASIS];
    for j in 0..NBASIS {
        coef[j] = x[j] / scale[j];
    }
    let residual = samples
        .iter()
        .map(|&(e, vol)| {
            let model: f64 = basis(e).iter().zip(&coef).map(|(p, c)| p * c).sum();
            (model - vol).abs()
        })
        .fold(0.0, f64::max);
    Ok((coef, residual, condition))
}

fn check_samples(samples: &[(f64, f64)]) -> Result<()> {
    for &(e, v) in samples {
        if !(e < 0.0) || !v.is_finite() {
            return Err(CrError::Fit(format!("sample (ε = {e}, Vol = {v}) is not usable; ε must be negative")));
        }
    }
    Ok(())
}

pub fn fit_volume_expansion(samples: &[(f64, f64)]) -> Result<VolumeExpansion> {
    if samples.len() < MIN_SAMPLES {
        return Err(CrError::Fit(format!("need at least {MIN_SAMPLES} samples, got {}", samples.len())));
    }
    check_samples(samples)?;
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (coef, fit_residual, condition) = solve(&sorted)?;
    let half = sorted.len() / 2;
    let l_uncertainty = if half >= NBASIS + 1 {
        let la = solve(&sorted[..half]).map(|r| r.0[2]);
        let lb = solve(&sorted[sorted.len() - half..]).map(|r| r.0[2]);
        match (la, lb) {
            (Ok(a), Ok(b)) => Some((a - b).abs()),
            _ => None,
        }
    } else {
        None
    };
    Ok(VolumeExpansion {
        c0: coef[0],
        c1: coef[1],
        l: coef[2],
        v: coef[3],
        fit_residual,
        epsilon_range: (sorted[0].0, sorted[sorted.len() - 1].0),
        l_uncertainty,
        condition,
        samples: sorted.len(),
    })
}

/// Reads whitespace- or comma-separated `(ε, Vol)` rows; `#` starts a comment.
pub fn parse_samples(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).collect();
        let bad = || CrError::Config { field: format!("samples line {}", k + 1), message: format!("expected two numbers, got {line:?}") };
        if cols.len() != 2 {
            return Err(bad());
        }
        let e: f64 = cols[0].parse().map_err(|_| bad())?;
        let v: f64 = cols[1].parse().map_err(|_| bad())?;
        out.push((e, v));
    }
    Ok(out)
}
