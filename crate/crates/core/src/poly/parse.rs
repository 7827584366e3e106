use num_bigint::BigInt;
use num_traits::Zero;

use super::{DegreeCap, SparsePoly};
use crate::error::{Error, Result};
use crate::rational::{q_int, Q};

/// Parses a polynomial in `x`: sums, differences, products, integer powers,
/// parentheses, and integer or `a/b` literals, e.g. `3*x^5 - 2*x + 7`.
pub fn parse_poly(src: &str, cap: DegreeCap) -> Result<SparsePoly> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
        cap,
    };
    p.skip_ws();
    if p.pos == p.src.len() {
        return Err(Error::parse(0, "empty input"));
    }
    let f = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(Error::parse(
            p.pos,
            format!("unexpected {:?}", p.src[p.pos] as char),
        ));
    }
    Ok(f)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    cap: DegreeCap,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<SparsePoly> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == b'+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<SparsePoly> {
        let mut acc = self.unary()?;
        while let Some(b'*') = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = acc.checked_mul(&rhs, self.cap)?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<SparsePoly> {
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

    fn power(&mut self) -> Result<SparsePoly> {
        let base = self.atom()?;
        if let Some(b'^') = self.peek() {
            self.pos += 1;
            self.skip_ws();
            let at = self.pos;
            let k = self.integer()?;
            let k: u64 = k
                .try_into()
                .map_err(|_| Error::parse(at, "exponent must be a non-negative machine integer"))?;
            return base.checked_pow(k, self.cap);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<SparsePoly> {
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                Ok(SparsePoly::x())
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(Error::parse(self.pos, "expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    let at = self.pos;
                    let d = self.integer()?;
                    if d.is_zero() {
                        return Err(Error::parse(at, "zero denominator"));
                    }
                    return Ok(SparsePoly::constant(Q::new(n, d)));
                }
                Ok(SparsePoly::constant(q_int(n)))
            }
            Some(c) => Err(Error::parse(self.pos, format!("unexpected {:?}", c as char))),
            None => Err(Error::parse(self.pos, "unexpected end of input")),
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(start, "expected an integer"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("digits parse"))
    }
}
