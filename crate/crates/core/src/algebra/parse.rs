//! Recursive-descent reader for polynomial text: `+ - * / ^`, parentheses,
//! integer literals and the variables a, b, c, d.

use num_bigint::BigInt;
use num_traits::Zero;

use super::poly::{var_index, MultiPoly};
use super::{AlgebraError, Rational};

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> AlgebraError {
        AlgebraError::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<MultiPoly, AlgebraError> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                b'-' => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MultiPoly, AlgebraError> {
        let mut acc = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                b'*' => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                b'/' => {
                    self.pos += 1;
                    let d = self.unary()?;
                    match d.as_constant() {
                        Some(c) if !c.is_zero() => acc = acc.scale(&c.recip()),
                        _ => return Err(self.err("division by a non-constant or zero")),
                    }
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<MultiPoly, AlgebraError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MultiPoly, AlgebraError> {
        let base = self.primary()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let txt = std::str::from_utf8(&self.s[start..self.pos]).unwrap_or("");
            let e: u32 = txt.parse().map_err(|_| self.err("expected exponent"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<MultiPoly, AlgebraError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let txt = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                let n: BigInt = txt.parse().map_err(|_| self.err("bad integer"))?;
                Ok(MultiPoly::constant(Rational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let name = (c as char).to_string();
                self.pos += 1;
                if self.s.get(self.pos).map_or(false, |x| x.is_ascii_alphanumeric()) {
                    return Err(self.err("unknown identifier"));
                }
                match var_index(&name) {
                    Some(v) => Ok(MultiPoly::var(v)),
                    None => Err(self.err("unknown variable")),
                }
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

pub fn parse_poly(s: &str) -> Result<MultiPoly, AlgebraError> {
    let mut p = Parser { s: s.as_bytes(), pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let s = "a^2*b^2 - 2*a^2*b + a^2 - a*b - b^2 + b";
        assert_eq!(parse_poly(s).unwrap().to_string(), s);
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_poly("").is_err());
        assert!(parse_poly("a +").is_err());
        assert!(parse_poly("x").is_err());
        assert!(parse_poly("a / b").is_err());
    }
}
