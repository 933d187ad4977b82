//! Expression grammar for elements of `H_b`:
//!
//! ```text
//! expr   := ["-"] term (("+" | "-") term)*
//! term   := factor ("*" factor)*
//! factor := atom ("^" nat)?
//! atom   := rational | "e[" nat "," nat "]" | "x[" nat "]" | "y[" nat "]" | "(" expr ")"
//! ```
//!
//! Whitespace is ignored and juxtaposition is not multiplication. Every expression is
//! normal-formed as it is read; a syntactic degree guard runs before each product.

use ich_core::cherednik::{HbContext, HbElem, HbGen};
use ich_core::polyseries::Scalar;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("index {index} at {pos} outside 1..={n}")]
    Index { pos: usize, index: usize, n: usize },
    #[error("bad rational literal at {pos}: {msg}")]
    Rational { pos: usize, msg: String },
    #[error("expression degree {degree} exceeds the guard {max}")]
    DegreeGuard { degree: u32, max: u32 },
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ctx: &'a HbContext,
    max_degree: u32,
}

/// A parsed value and an upper bound on its PBW degree.
type Value = (HbElem, u32);

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn nat(&mut self) -> Result<usize, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a natural number");
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| ParseError::Syntax {
                pos: start,
                msg: "number too large".into(),
            })
    }

    fn guard(&self, degree: u32) -> Result<u32, ParseError> {
        if degree > self.max_degree {
            Err(ParseError::DegreeGuard {
                degree,
                max: self.max_degree,
            })
        } else {
            Ok(degree)
        }
    }

    fn expr(&mut self) -> Result<Value, ParseError> {
        let negate = self.peek() == Some(b'-');
        if negate {
            self.pos += 1;
        }
        let (mut acc, mut deg) = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let (t, d) = self.term()?;
                    acc = acc.add(&t);
                    deg = deg.max(d);
                }
                Some(b'-') => {
                    self.pos += 1;
                    let (t, d) = self.term()?;
                    acc = acc.sub(&t);
                    deg = deg.max(d);
                }
                _ => return Ok((acc, deg)),
            }
        }
    }

    fn term(&mut self) -> Result<Value, ParseError> {
        let (mut acc, mut deg) = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let (f, d) = self.factor()?;
            deg = self.guard(deg + d)?;
            acc = self.ctx.mul(&acc, &f);
        }
        Ok((acc, deg))
    }

    fn factor(&mut self) -> Result<Value, ParseError> {
        let (base, deg) = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok((base, deg));
        }
        self.pos += 1;
        let e = self.nat()?;
        let e = u32::try_from(e).map_err(|_| ParseError::DegreeGuard {
            degree: u32::MAX,
            max: self.max_degree,
        })?;
        let total = self.guard(deg.saturating_mul(e))?;
        Ok((self.ctx.pow(&base, e), total))
    }

    fn index(&mut self) -> Result<usize, ParseError> {
        self.skip_ws();
        let pos = self.pos;
        let k = self.nat()?;
        if k == 0 || k > self.ctx.n() {
            return Err(ParseError::Index {
                pos,
                index: k,
                n: self.ctx.n(),
            });
        }
        Ok(k)
    }

    fn atom(&mut self) -> Result<Value, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(b')')?;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => self.rational(),
            Some(c @ (b'e' | b'x' | b'y')) => {
                self.pos += 1;
                self.expect(b'[')?;
                let i = self.index()?;
                let g = if c == b'e' {
                    self.expect(b',')?;
                    HbGen::E(i, self.index()?)
                } else if c == b'x' {
                    HbGen::X(i)
                } else {
                    HbGen::Y(i)
                };
                self.expect(b']')?;
                Ok((self.ctx.gen(g), 1))
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }

    fn rational(&mut self) -> Result<Value, ParseError> {
        let start = self.pos;
        let num = self.nat_text();
        let mut text = num.to_string();
        if self.peek() == Some(b'/') {
            self.pos += 1;
            self.skip_ws();
            let den = self.nat_text();
            if den.is_empty() {
                return self.err("expected a denominator");
            }
            text = format!("{num}/{den}");
        }
        let c = self
            .ctx
            .field()
            .parse(&text)
            .map_err(|e| ParseError::Rational {
                pos: start,
                msg: e.to_string(),
            })?;
        Ok((self.ctx.constant(c), 0))
    }

    fn nat_text(&mut self) -> &'a str {
        let src = self.src;
        let start = self.pos;
        while self.pos < src.len() && src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&src[start..self.pos]).expect("ascii digits")
    }
}

/// Parses and normal-forms `src`.
pub fn parse_expr(src: &str, ctx: &HbContext, max_degree: u32) -> Result<HbElem, ParseError> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
        ctx,
        max_degree,
    };
    let (v, _) = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(v)
}

fn magnitude(c: &Scalar) -> (bool, String) {
    match c {
        Scalar::Rat(q) => {
            let neg = c.is_negative();
            let (n, d) = (q.numer().magnitude().to_string(), q.denom().to_string());
            (neg, if d == "1" { n } else { format!("{n}/{d}") })
        }
        Scalar::Mod { value, .. } => (false, value.to_string()),
    }
}

/// Prints a normal form in the grammar above; factors appear in triangular order, so
/// the printed product is the normal monomial itself.
pub fn print_elem(ctx: &HbContext, a: &HbElem) -> String {
    if a.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (m, c)) in a.as_pbw().terms().enumerate() {
        let (neg, mag) = magnitude(c);
        match (k, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let factors: Vec<String> = m
            .exps()
            .iter()
            .zip(ctx.gens())
            .filter(|(&e, _)| e > 0)
            .map(|(&e, &g)| {
                let base = match g {
                    HbGen::X(i) => format!("x[{i}]"),
                    HbGen::Y(i) => format!("y[{i}]"),
                    HbGen::E(i, j) => format!("e[{i},{j}]"),
                };
                if e == 1 {
                    base
                } else {
                    format!("{base}^{e}")
                }
            })
            .collect();
        if factors.is_empty() {
            out.push_str(&mag);
        } else {
            if mag != "1" {
                out.push_str(&mag);
                out.push('*');
            }
            out.push_str(&factors.join("*"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_examples() {
        let h = HbContext::with_ints(1, 1, &[2, 1], 0).unwrap();
        let a = parse_expr("y[1]*x[1]", &h, 6).unwrap();
        let expected = parse_expr("x[1]*y[1] + 2 + 2*e[1,1]", &h, 6).unwrap();
        assert_eq!(a, expected);
        let h2 = HbContext::with_ints(2, 1, &[0, 1], 0).unwrap();
        let b = parse_expr("e[1,2]^2 + 3/2", &h2, 6).unwrap();
        assert_eq!(print_elem(&h2, &b), "3/2 + e[1,2]^2");
        assert!(matches!(
            parse_expr("x[3]", &h2, 6),
            Err(ParseError::Index { index: 3, .. })
        ));
    }

    #[test]
    fn errors_carry_positions() {
        let h = HbContext::with_ints(1, 1, &[0, 1], 0).unwrap();
        assert!(matches!(parse_expr("x[1] y[1]", &h, 6), Err(ParseError::Syntax { pos: 5, .. })));
        assert!(matches!(parse_expr("1/0", &h, 6), Err(ParseError::Rational { .. })));
        assert!(matches!(parse_expr("(x[1]", &h, 6), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_expr("x[1]^7", &h, 6), Err(ParseError::DegreeGuard { .. })));
        assert!(parse_expr("", &h, 6).is_err());
    }

    #[test]
    fn negative_leading_term_round_trips() {
        let h = HbContext::with_ints(1, 1, &[0, 1], 0).unwrap();
        let a = parse_expr("-(1/3)*x[1] - y[1]^2", &h, 6).unwrap();
        let s = print_elem(&h, &a);
        assert!(s.starts_with('-'), "{s}");
        assert_eq!(parse_expr(&s, &h, 6).unwrap(), a);
    }

    #[test]
    fn modular_printing() {
        let h = HbContext::with_ints(1, 1, &[0, 1], 5).unwrap();
        let a = parse_expr("y[1]*x[1] - 1", &h, 6).unwrap();
        let s = print_elem(&h, &a);
        assert!(!s.contains('-'), "{s}");
        assert_eq!(parse_expr(&s, &h, 6).unwrap(), a);
    }
}
