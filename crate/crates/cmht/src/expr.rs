//! Parsing of field elements and small matrices from text.
//!
//! Elements are written as arithmetic expressions in the generator, e.g.
//! `-i/2`, `(1+x)^2/3`, `2x - 1`, or as JSON coordinate arrays in the power
//! basis (`[0, "1/2"]`).

use crate::field::{parse_q, CMField, Elem};
use crate::linalg::{zq, Q, Z};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Z),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let mut out = vec![];
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let t: String = cs[st..i].iter().collect();
            out.push(Tok::Num(t.parse().map_err(|_| Error::malformed("bad number"))?));
        } else if c.is_ascii_alphabetic() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::malformed(format!("unexpected character '{}' in element", c)));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    k: &'a CMField,
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }
    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }
    fn expr(&mut self) -> Result<Elem> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                let t = self.term()?;
                acc = self.k.add(&acc, &t);
            } else if self.eat('-') {
                let t = self.term()?;
                acc = self.k.sub(&acc, &t);
            } else {
                return Ok(acc);
            }
        }
    }
    fn term(&mut self) -> Result<Elem> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                let t = self.unary()?;
                acc = self.k.mul(&acc, &t);
            } else if self.eat('/') {
                let t = self.unary()?;
                acc = self.k.div(&acc, &t).map_err(|_| Error::malformed("division by zero"))?;
            } else if matches!(self.peek(), Some(Tok::Ident(_)) | Some(Tok::Op('('))) {
                // implicit multiplication: 2x, 3(1+x)
                let t = self.power()?;
                acc = self.k.mul(&acc, &t);
            } else {
                return Ok(acc);
            }
        }
    }
    fn unary(&mut self) -> Result<Elem> {
        if self.eat('-') {
            let t = self.unary()?;
            return Ok(self.k.neg(&t));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }
    fn power(&mut self) -> Result<Elem> {
        let base = self.atom()?;
        if self.eat('^') {
            let neg = self.eat('-');
            let e = match self.peek() {
                Some(Tok::Num(n)) => n.clone(),
                _ => return Err(Error::malformed("exponent must be an integer")),
            };
            self.pos += 1;
            let e: i64 = i64::try_from(e).map_err(|_| Error::malformed("exponent too large"))?;
            if e > 4096 {
                return Err(Error::malformed("exponent too large"));
            }
            let e = if neg { -e } else { e };
            return self.k.pow(&base, e).map_err(|_| Error::malformed("zero to a negative power"));
        }
        Ok(base)
    }
    fn atom(&mut self) -> Result<Elem> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(self.k.from_q(&zq(&n)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if name == self.k.var || name == "x" {
                    Ok(self.k.gen())
                } else {
                    Err(Error::malformed(format!("unknown symbol '{}'", name)))
                }
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::malformed("missing ')'"));
                }
                Ok(e)
            }
            _ => Err(Error::malformed("unexpected end of element expression")),
        }
    }
}

/// Parse an element from an expression or a JSON coordinate array.
pub fn parse_elem(k: &CMField, s: &str) -> Result<Elem> {
    let t = s.trim();
    if t.starts_with('[') {
        let v: serde_json::Value = serde_json::from_str(t).map_err(|e| Error::malformed(e.to_string()))?;
        return elem_from_json(k, &v);
    }
    let toks = lex(t)?;
    if toks.is_empty() {
        return Err(Error::malformed("empty element"));
    }
    let mut p = Parser { k, toks, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::malformed(format!("trailing input in element '{}'", s)));
    }
    Ok(e)
}

/// An element from JSON: either a coordinate array or an expression string.
pub fn elem_from_json(k: &CMField, v: &serde_json::Value) -> Result<Elem> {
    match v {
        serde_json::Value::Array(xs) => {
            let cs: Vec<Q> = xs
                .iter()
                .map(|x| match x {
                    serde_json::Value::Number(n) => parse_q(&n.to_string()),
                    serde_json::Value::String(s) => parse_q(s),
                    _ => Err(Error::malformed("coordinates must be rationals")),
                })
                .collect::<Result<_>>()?;
            k.elem(&cs)
        }
        serde_json::Value::String(s) => parse_elem(k, s),
        serde_json::Value::Number(n) => parse_elem(k, &n.to_string()),
        _ => Err(Error::malformed("element must be an array or a string")),
    }
}

/// JSON rendering of an element as a coordinate array of rational strings.
pub fn elem_to_json(e: &Elem) -> serde_json::Value {
    serde_json::Value::Array(e.0.iter().map(|c| serde_json::Value::String(c.to_string())).collect())
}

/// Parse an n x n matrix of elements from JSON (nested arrays).
pub fn matrix_from_json(k: &CMField, v: &serde_json::Value) -> Result<Vec<Vec<Elem>>> {
    let rows = v.as_array().ok_or_else(|| Error::malformed("matrix must be an array of rows"))?;
    let m: Vec<Vec<Elem>> = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| Error::malformed("matrix rows must be arrays"))?
                .iter()
                .map(|x| elem_from_json(k, x))
                .collect()
        })
        .collect::<Result<_>>()?;
    let n = m.len();
    if n == 0 || m.iter().any(|r| r.len() != n) {
        return Err(Error::malformed("matrix must be square and nonempty"));
    }
    Ok(m)
}

pub fn matrix_to_json(m: &[Vec<Elem>]) -> serde_json::Value {
    serde_json::Value::Array(
        m.iter().map(|r| serde_json::Value::Array(r.iter().map(elem_to_json).collect())).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{q, qf};

    #[test]
    fn parses_expressions() {
        let k = CMField::parse("gen = i\nminpoly = [1,0,1]\nbasis = [[1,0],[0,1]]").unwrap();
        assert_eq!(parse_elem(&k, "-i/2").unwrap(), Elem(vec![q(0), qf(-1, 2)]));
        assert_eq!(parse_elem(&k, "(1+i)^2").unwrap(), Elem(vec![q(0), q(2)]));
        assert_eq!(parse_elem(&k, "2i - 1").unwrap(), Elem(vec![q(-1), q(2)]));
        assert_eq!(parse_elem(&k, "1/(1+i)").unwrap(), Elem(vec![qf(1, 2), qf(-1, 2)]));
        assert_eq!(parse_elem(&k, "[\"1/3\", 0]").unwrap(), Elem(vec![qf(1, 3), q(0)]));
        assert!(parse_elem(&k, "1 +").is_err());
        assert!(parse_elem(&k, "y").is_err());
    }
}
