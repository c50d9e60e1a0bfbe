use std::collections::BTreeMap;

use serde::Deserialize;

use super::{eval_plain, parse_expression_with, ExprNode};
use crate::error::{CrError, Result};
use crate::jets::C64;

pub const DEFAULT_MESH: [usize; 3] = [64, 64, 64];
pub const DEFAULT_ORDER: usize = 6;

/// A parsed domain: its defining function and optional special defining function.
#[derive(Clone, Debug, PartialEq)]
pub struct DomainSpec {
    pub name: String,
    pub rho: ExprNode,
    pub special_phi: Option<ExprNode>,
    pub params: BTreeMap<String, f64>,
    /// Hopf grid resolution `(n_η, n_ξ1, n_ξ2)`.
    pub mesh: [usize; 3],
    pub jet_order: usize,
    /// Set when the domain is the round ball `|z|² + |w|² < R²` with the standard ρ.
    pub ball_radius: Option<f64>,
}

impl DomainSpec {
    pub fn with_mesh(mut self, mesh: [usize; 3]) -> Self {
        self.mesh = mesh;
        self
    }

    pub fn with_order(mut self, order: usize) -> Self {
        self.jet_order = order;
        self
    }

    /// Real-valuedness of ρ on a deterministic sample of points in the bidisc of radius 1.5.
    pub fn check_rho_real(&self) -> Result<()> {
        for k in 0..64 {
            let t = k as f64;
            let z = C64::from_polar(1.5 * ((0.37 * t).sin()).abs(), 2.1 * t);
            let w = C64::from_polar(1.5 * ((0.53 * t + 0.4).cos()).abs(), 1.3 * t + 0.2);
            let v = match eval_plain(&self.rho, z, w) {
                Ok(v) => v,
                Err(_) => continue,
            };
            if v.im.abs() > 1e-12 * v.re.abs().max(1.0) {
                return Err(CrError::Config {
                    field: "rho".into(),
                    message: format!("defining function is not real: value {v} at z = {z}, w = {w}"),
                });
            }
        }
        Ok(())
    }
}

fn spec(name: String, rho: &str, phi: Option<&str>, params: BTreeMap<String, f64>, ball: Option<f64>) -> Result<DomainSpec> {
    Ok(DomainSpec {
        name,
        rho: parse_expression_with(rho, &params)?,
        special_phi: phi.map(|p| parse_expression_with(p, &params)).transpose()?,
        params,
        mesh: DEFAULT_MESH,
        jet_order: DEFAULT_ORDER,
        ball_radius: ball,
    })
}

fn want(name: &str, params: &[f64], n: usize) -> Result<()> {
    if params.len() != n {
        return Err(CrError::UnknownDomain(format!("{name} takes {n} parameter(s), got {}", params.len())));
    }
    Ok(())
}

/// Built-in domains: `unit_ball`, `ball(R)`, `ellipsoid(a,b)`, `bumped_ball(δ,k)`.
pub fn builtin_domain(name: &str, params: &[f64]) -> Result<DomainSpec> {
    let mut p = BTreeMap::new();
    let d = match name {
        "unit_ball" => {
            want(name, params, 0)?;
            spec(
                "unit_ball".into(),
                "abs2(z) + abs2(w) - 1",
                Some("4*(sqrt(abs2(z) + abs2(w)) - 1)/(sqrt(abs2(z) + abs2(w)) + 1)"),
                p,
                Some(1.0),
            )?
        }
        "ball" => {
            want(name, params, 1)?;
            let r = params[0];
            if !(r > 0.0) {
                return Err(CrError::Domain(format!("ball radius must be positive, got {r}")));
            }
            p.insert("R0".into(), r);
            spec(
                format!("ball({r})"),
                "abs2(z) + abs2(w) - R0^2",
                Some("R0^2*4*(sqrt(abs2(z) + abs2(w)) - R0)/(sqrt(abs2(z) + abs2(w)) + R0)"),
                p,
                Some(r),
            )?
        }
        "ellipsoid" => {
            want(name, params, 2)?;
            if !(params[0] > 0.0 && params[1] > 0.0) {
                return Err(CrError::Domain("ellipsoid semi-axes must be positive".into()));
            }
            p.insert("a".into(), params[0]);
            p.insert("b".into(), params[1]);
            spec(format!("ellipsoid({},{})", params[0], params[1]), "abs2(z)/a^2 + abs2(w)/b^2 - 1", None, p, None)?
        }
        "bumped_ball" => {
            want(name, params, 2)?;
            let k = params[1];
            if k < 1.0 || k.fract() != 0.0 {
                return Err(CrError::Domain(format!("bump degree must be a positive integer, got {k}")));
            }
            p.insert("delta".into(), params[0]);
            let rho = format!("abs2(z) + abs2(w) - 1 + delta*re(z^{k} * conj(w)^{k})", k = k as u32);
            let d = spec(format!("bumped_ball({},{})", params[0], k as u32), &rho, None, p, None)?;
            crate::crgeom::check_pseudoconvex(&d, [8, 8, 8])?;
            d
        }
        _ => return Err(CrError::UnknownDomain(name.to_string())),
    };
    Ok(d)
}

/// Parses names like `ball(2)` or `bumped_ball(0.05, 2)`.
pub fn builtin_from_str(text: &str) -> Result<DomainSpec> {
    let text = text.trim();
    let (name, args) = match text.find('(') {
        Some(i) => {
            let inner = text[i + 1..]
                .strip_suffix(')')
                .ok_or_else(|| CrError::UnknownDomain(text.to_string()))?;
            let args = inner
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| s.trim().parse::<f64>().map_err(|_| CrError::UnknownDomain(text.to_string())))
                .collect::<Result<Vec<_>>>()?;
            (&text[..i], args)
        }
        None => (text, Vec::new()),
    };
    builtin_domain(name.trim(), &args)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    name: Option<String>,
    rho: Option<String>,
    builtin: Option<String>,
    special_phi: Option<String>,
    #[serde(default)]
    params: BTreeMap<String, f64>,
    mesh: Option<[usize; 3]>,
    jet_order: Option<usize>,
}

/// Loads a TOML domain document. Either `rho` or `builtin` must be present.
pub fn load_domain_spec(document: &str) -> Result<DomainSpec> {
    let raw: RawSpec = toml::from_str(document).map_err(|e| {
        let msg = e.message().to_string();
        let field = msg
            .split('`')
            .nth(1)
            .map(str::to_string)
            .unwrap_or_else(|| "<document>".to_string());
        CrError::Config { field, message: msg }
    })?;
    let forward = |field: &str, e: CrError| CrError::Config { field: field.into(), message: e.to_string() };
    let mut d = match (&raw.rho, &raw.builtin) {
        (Some(rho), _) => {
            let rho_e = parse_expression_with(rho, &raw.params).map_err(|e| forward("rho", e))?;
            let phi = raw
                .special_phi
                .as_deref()
                .map(|t| parse_expression_with(t, &raw.params))
                .transpose()
                .map_err(|e| forward("special_phi", e))?;
            DomainSpec {
                name: raw.name.clone().unwrap_or_else(|| "custom".into()),
                rho: rho_e,
                special_phi: phi,
                params: raw.params.clone(),
                mesh: DEFAULT_MESH,
                jet_order: DEFAULT_ORDER,
                ball_radius: None,
            }
        }
        (None, Some(b)) => {
            let mut d = builtin_from_str(b).map_err(|e| forward("builtin", e))?;
            if let Some(n) = &raw.name {
                d.name = n.clone();
            }
            if let Some(t) = &raw.special_phi {
                d.special_phi = Some(parse_expression_with(t, &d.params).map_err(|e| forward("special_phi", e))?);
            }
            d
        }
        (None, None) => {
            return Err(CrError::Config { field: "rho".into(), message: "missing required field `rho`".into() })
        }
    };
    if let Some(m) = raw.mesh {
        if m.iter().any(|&n| n < 2) {
            return Err(CrError::Config { field: "mesh".into(), message: "each mesh resolution must be at least 2".into() });
        }
        d.mesh = m;
    }
    if let Some(k) = raw.jet_order {
        if !(4..=10).contains(&k) {
            return Err(CrError::Config { field: "jet_order".into(), message: format!("order {k} outside 4..=10") });
        }
        d.jet_order = k;
    }
    d.check_rho_real()?;
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::eval_expression_jet;

    #[test]
    fn minimal_document_gets_defaults() {
        let d = load_domain_spec("rho = \"abs2(z) + abs2(w) - 1\"\n").unwrap();
        assert_eq!(d.mesh, DEFAULT_MESH);
        assert_eq!(d.jet_order, DEFAULT_ORDER);
        assert!(d.special_phi.is_none());
    }

    #[test]
    fn special_phi_carried_through() {
        let doc = "name = \"b\"\nrho = \"abs2(z) + abs2(w) - 1\"\nspecial_phi = \"abs2(z) + abs2(w) - 1\"\nmesh = [8, 8, 8]\n";
        let d = load_domain_spec(doc).unwrap();
        assert!(d.special_phi.is_some());
        assert_eq!(d.mesh, [8, 8, 8]);
    }

    #[test]
    fn missing_rho_named() {
        match load_domain_spec("name = \"x\"\n") {
            Err(CrError::Config { field, .. }) => assert_eq!(field, "rho"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn params_substituted() {
        let doc = "rho = \"abs2(z) + abs2(w) - 1 + d*re(z*conj(w))\"\n[params]\nd = 0.1\n";
        let d = load_domain_spec(doc).unwrap();
        assert_eq!(d.params["d"], 0.1);
    }

    #[test]
    fn complex_rho_rejected() {
        assert!(load_domain_spec("rho = \"z + abs2(w) - 1\"\n").is_err());
    }

    #[test]
    fn builtins() {
        let b = builtin_from_str("ball(2)").unwrap();
        assert_eq!(eval_plain(&b.rho, C64::new(0.0, 0.0), C64::new(0.0, 0.0)).unwrap(), C64::new(-4.0, 0.0));
        assert!(builtin_from_str("torus").is_err());
        let e = builtin_domain("ellipsoid", &[1.0, 1.0]).unwrap();
        let u = builtin_domain("unit_ball", &[]).unwrap();
        let p = (C64::new(0.3, -0.2), C64::new(0.1, 0.5));
        let (je, ju) = (eval_expression_jet(&e.rho, p, 4).unwrap(), eval_expression_jet(&u.rho, p, 4).unwrap());
        assert!((&je - &ju).max_abs() < 1e-15);
    }
}
