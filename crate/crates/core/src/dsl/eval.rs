use super::ExprNode;
use crate::error::{CrError, Result};
use crate::jets::{Jet, C64};

type Trail = (Vec<&'static str>, CrError);

fn label(e: &ExprNode) -> &'static str {
    use ExprNode::*;
    match e {
        Literal(_) => "literal",
        ExprNode::Var(_) => "var",
        Conj(_) => "conj",
        Re(_) => "re",
        Im(_) => "im",
        Abs2(_) => "abs2",
        Neg(_) => "neg",
        Add(..) => "add",
        Sub(..) => "sub",
        Mul(..) => "mul",
        Div(..) => "div",
        Powi(..) => "powi",
        Log(_) => "log",
        Exp(_) => "exp",
        Sqrt(_) => "sqrt",
    }
}

fn finish<T>(r: std::result::Result<T, Trail>) -> Result<T> {
    r.map_err(|(mut path, err)| {
        path.reverse();
        CrError::Eval { path: path.join("/"), message: err.to_string() }
    })
}

/// Jet of the expression at `(z, w)`; `conj` becomes the formal swap.
pub fn eval_expression_jet(e: &ExprNode, point: (C64, C64), order: usize) -> Result<Jet> {
    let coords = Jet::coordinates(point.0, point.1, order);
    finish(jet_rec(e, &coords))
}

fn jet_rec(e: &ExprNode, x: &[Jet; 4]) -> std::result::Result<Jet, Trail> {
    use ExprNode::*;
    let tag = |r: std::result::Result<Jet, Trail>| {
        r.map_err(|(mut p, err)| {
            p.push(label(e));
            (p, err)
        })
    };
    let here = |err: CrError| (vec![label(e)], err);
    let base = x[0].base();
    let (n, k) = (x[0].nvars(), x[0].order());
    match e {
        Literal(c) => Ok(Jet::constant(n, k, base, *c)),
        ExprNode::Var(super::Var::Z) => Ok(x[0].clone()),
        ExprNode::Var(super::Var::W) => Ok(x[2].clone()),
        Conj(a) => tag(jet_rec(a, x)).map(|j| j.conjugate_swap()),
        Re(a) => tag(jet_rec(a, x)).map(|j| j.re_part()),
        Im(a) => tag(jet_rec(a, x)).map(|j| j.im_part()),
        Abs2(a) => tag(jet_rec(a, x)).map(|j| &j * &j.conjugate_swap()),
        Neg(a) => tag(jet_rec(a, x)).map(|j| -&j),
        Add(a, b) => Ok(&tag(jet_rec(a, x))? + &tag(jet_rec(b, x))?),
        Sub(a, b) => Ok(&tag(jet_rec(a, x))? - &tag(jet_rec(b, x))?),
        Mul(a, b) => Ok(&tag(jet_rec(a, x))? * &tag(jet_rec(b, x))?),
        Div(a, b) => {
            let (p, q) = (tag(jet_rec(a, x))?, tag(jet_rec(b, x))?);
            p.div(&q).map_err(here)
        }
        Powi(a, m) => tag(jet_rec(a, x)).map(|j| j.powi(*m)),
        Log(a) => tag(jet_rec(a, x))?.ln().map_err(here),
        Exp(a) => tag(jet_rec(a, x)).map(|j| j.exp()),
        Sqrt(a) => tag(jet_rec(a, x))?.sqrt().map_err(here),
    }
}

/// Direct complex evaluation; an independent path used as an oracle for the jets.
pub fn eval_plain(e: &ExprNode, z: C64, w: C64) -> Result<C64> {
    finish(plain_rec(e, z, w))
}

fn positive(v: C64, what: &str) -> std::result::Result<f64, CrError> {
    if v.re > 0.0 && v.im.abs() <= 1e-10 * v.re.max(1.0) {
        Ok(v.re)
    } else {
        Err(CrError::Domain(format!("{what} needs a positive real argument, got {v}")))
    }
}

fn plain_rec(e: &ExprNode, z: C64, w: C64) -> std::result::Result<C64, Trail> {
    use ExprNode::*;
    let tag = |r: std::result::Result<C64, Trail>| {
        r.map_err(|(mut p, err)| {
            p.push(label(e));
            (p, err)
        })
    };
    let here = |err: CrError| (vec![label(e)], err);
    let sub = |a: &ExprNode| tag(plain_rec(a, z, w));
    Ok(match e {
        Literal(c) => *c,
        ExprNode::Var(super::Var::Z) => z,
        ExprNode::Var(super::Var::W) => w,
        Conj(a) => sub(a)?.conj(),
        Re(a) => C64::new(sub(a)?.re, 0.0),
        Im(a) => C64::new(sub(a)?.im, 0.0),
        Abs2(a) => C64::new(sub(a)?.norm_sqr(), 0.0),
        Neg(a) => -sub(a)?,
        Add(a, b) => sub(a)? + sub(b)?,
        Sub(a, b) => sub(a)? - sub(b)?,
        Mul(a, b) => sub(a)? * sub(b)?,
        Div(a, b) => {
            let (p, q) = (sub(a)?, sub(b)?);
            if q.norm() == 0.0 {
                return Err(here(CrError::SingularJet("division by zero".into())));
            }
            p / q
        }
        Powi(a, m) => sub(a)?.powu(*m),
        Log(a) => C64::new(positive(sub(a)?, "log").map_err(here)?.ln(), 0.0),
        Exp(a) => sub(a)?.exp(),
        Sqrt(a) => C64::new(positive(sub(a)?, "sqrt").map_err(here)?.sqrt(), 0.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_expression;
    use crate::jets::Multidegree;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn sphere_point_and_precedence() {
        let e = parse_expression("z*conj(z) + w*conj(w) - 1").unwrap();
        assert_eq!(eval_plain(&e, c(1.0), c(0.0)).unwrap(), c(0.0));
        let p = parse_expression("2 + 3*z^2").unwrap();
        assert_eq!(eval_plain(&p, c(1.0), c(0.0)).unwrap(), c(5.0));
    }

    #[test]
    fn ball_value_at_rotated_point() {
        let e = parse_expression("abs2(z) + abs2(w) - 1").unwrap();
        let z = C64::from_polar(0.6, std::f64::consts::PI / 7.0);
        let j = eval_expression_jet(&e, (z, c(0.8)), 3).unwrap();
        assert!(j.value().norm() < 1e-15);
        assert!((j.wirtinger_partial(&Multidegree::new(1, 0, 0, 0)).unwrap() - z.conj()).norm() < 1e-15);
    }

    #[test]
    fn log_shifted_series() {
        let e = parse_expression("log(2+z)").unwrap();
        let j = eval_expression_jet(&e, (c(0.0), c(0.0)), 4).unwrap();
        for k in 1..=4u8 {
            let expect = (-1f64).powi(k as i32 + 1) / (k as f64 * 2f64.powi(k as i32));
            assert!((j.coeff(&Multidegree::new(k, 0, 0, 0)) - c(expect)).norm() < 1e-15);
        }
    }

    #[test]
    fn error_path_names_failing_node() {
        let e = parse_expression("1 + log(z - 5)").unwrap();
        match eval_expression_jet(&e, (c(0.0), c(0.0)), 2) {
            Err(CrError::Eval { path, .. }) => assert_eq!(path, "add/log"),
            other => panic!("unexpected {other:?}"),
        }
        match eval_plain(&e, c(0.0), c(0.0)) {
            Err(CrError::Eval { path, .. }) => assert_eq!(path, "add/log"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
