use std::collections::BTreeMap;

use super::{ExprNode, Var};
use crate::error::{CrError, Result};
use crate::jets::C64;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64, bool), // value, written as a bare integer
    Ident(String),
    Op(char),
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
}

fn lex(text: &str) -> Result<Lexer> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        let pos = i + 1;
        if ch.is_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() || (ch == '.' && chars.get(i + 1).is_some_and(|c| c.is_ascii_digit())) {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let s: String = chars[start..i].iter().collect();
            let v: f64 = s
                .parse()
                .map_err(|_| CrError::Syntax { position: pos, expected: vec!["number".into()] })?;
            let int = s.chars().all(|c| c.is_ascii_digit());
            toks.push((Tok::Num(v, int), pos));
        } else if ch.is_alphabetic() || ch == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            toks.push((Tok::Ident(chars[start..i].iter().collect()), pos));
        } else if "+-*/^(),".contains(ch) {
            toks.push((Tok::Op(ch), pos));
            i += 1;
        } else {
            return Err(CrError::Syntax { position: pos, expected: operand_expected() });
        }
    }
    toks.push((Tok::End, chars.len() + 1));
    Ok(Lexer { toks })
}

fn operand_expected() -> Vec<String> {
    ["number", "identifier", "'('", "'-'"].iter().map(|s| s.to_string()).collect()
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    params: &'a BTreeMap<String, f64>,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn err<T>(&self, expected: &[&str]) -> Result<T> {
        Err(CrError::Syntax { position: self.pos(), expected: expected.iter().map(|s| s.to_string()).collect() })
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Op(c) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(&[&format!("'{c}'")])
        }
    }

    fn expr(&mut self) -> Result<ExprNode> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = ExprNode::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = ExprNode::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<ExprNode> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = ExprNode::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = ExprNode::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<ExprNode> {
        if self.eat('-') {
            return Ok(ExprNode::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<ExprNode> {
        let base = self.atom()?;
        if self.eat('^') {
            match *self.peek() {
                Tok::Num(v, true) if v <= u32::MAX as f64 => {
                    self.at += 1;
                    return Ok(ExprNode::Powi(Box::new(base), v as u32));
                }
                _ => return self.err(&["non-negative integer exponent"]),
            }
        }
        Ok(base)
    }

    fn signed_number(&mut self) -> Result<f64> {
        let neg = self.eat('-');
        match *self.peek() {
            Tok::Num(v, _) => {
                self.at += 1;
                Ok(if neg { -v } else { v })
            }
            _ => self.err(&["number"]),
        }
    }

    fn atom(&mut self) -> Result<ExprNode> {
        match self.peek().clone() {
            Tok::Num(v, _) => {
                self.at += 1;
                Ok(ExprNode::real(v))
            }
            Tok::Op('(') => {
                self.at += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.at += 1;
                if *self.peek() == Tok::Op('(') {
                    return self.call(&name);
                }
                match name.as_str() {
                    "z" => Ok(ExprNode::Var(Var::Z)),
                    "w" => Ok(ExprNode::Var(Var::W)),
                    "i" => Ok(ExprNode::Literal(C64::new(0.0, 1.0))),
                    "pi" => Ok(ExprNode::real(std::f64::consts::PI)),
                    _ => match self.params.get(&name) {
                        Some(&v) => Ok(ExprNode::real(v)),
                        None => {
                            self.at -= 1;
                            self.err(&["z", "w", "i", "pi", "a declared parameter"])
                        }
                    },
                }
            }
            _ => self.err(&["number", "identifier", "'('", "'-'"]),
        }
    }

    fn call(&mut self, name: &str) -> Result<ExprNode> {
        let name_pos = self.toks[self.at - 1].1;
        self.expect('(')?;
        if name == "complex" {
            let re = self.signed_number()?;
            self.expect(',')?;
            let im = self.signed_number()?;
            self.expect(')')?;
            return Ok(ExprNode::Literal(C64::new(re, im)));
        }
        let arg = Box::new(self.expr()?);
        self.expect(')')?;
        Ok(match name {
            "conj" => ExprNode::Conj(arg),
            "re" => ExprNode::Re(arg),
            "im" => ExprNode::Im(arg),
            "abs2" => ExprNode::Abs2(arg),
            "log" => ExprNode::Log(arg),
            "exp" => ExprNode::Exp(arg),
            "sqrt" => ExprNode::Sqrt(arg),
            _ => {
                return Err(CrError::Syntax {
                    position: name_pos,
                    expected: ["conj", "re", "im", "abs2", "log", "exp", "sqrt", "complex"]
                        .iter()
                        .map(|s| s.to_string())
                        .collect(),
                })
            }
        })
    }
}

pub fn parse_expression(text: &str) -> Result<ExprNode> {
    parse_expression_with(text, &BTreeMap::new())
}

/// Parses with named real constants substituted as literals.
pub fn parse_expression_with(text: &str, params: &BTreeMap<String, f64>) -> Result<ExprNode> {
    let lexer = lex(text)?;
    let mut p = Parser { toks: lexer.toks, at: 0, params };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.err(&["operator", "end of input"]);
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn syntax_error_position() {
        match parse_expression("z + * w") {
            Err(CrError::Syntax { position, expected }) => {
                assert_eq!(position, 5);
                assert!(expected.iter().any(|e| e == "number"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn precedence() {
        let e = parse_expression("2 + 3*z^2").unwrap();
        assert_eq!(e.to_string(), "(2.0 + (3.0 * (z ^ 2)))");
        let n = parse_expression("-z^2").unwrap();
        assert_eq!(n, ExprNode::Neg(Box::new(ExprNode::Powi(Box::new(ExprNode::Var(Var::Z)), 2))));
        let l = parse_expression("z - w - 1").unwrap();
        assert_eq!(l.to_string(), "((z - w) - 1.0)");
    }

    #[test]
    fn params_and_errors() {
        let mut p = BTreeMap::new();
        p.insert("delta".to_string(), 0.05);
        let e = parse_expression_with("delta*z", &p).unwrap();
        assert_eq!(e.to_string(), "(0.05 * z)");
        assert!(parse_expression("delta*z").is_err());
        assert!(parse_expression("foo(z)").is_err());
        assert!(parse_expression("z^1.5").is_err());
        assert!(parse_expression("(z").is_err());
        assert!(parse_expression("z w").is_err());
    }

    #[test]
    fn complex_literal_round_trip() {
        let e = parse_expression("complex(-1.5, 2e-3) * z").unwrap();
        assert_eq!(parse_expression(&e.to_string()).unwrap(), e);
        let i = parse_expression("i").unwrap();
        assert_eq!(parse_expression(&i.to_string()).unwrap(), i);
    }
}
