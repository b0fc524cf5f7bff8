//! Parser for the textual Scalar grammar produced by `Display`.
//!
//! Accepts arithmetic expressions over rationals, `q` (with integer or
//! half-integer exponents such as `q^(3/2)`) and `T`, e.g.
//! `(1 - 2*q^(1/2)*T)*(1-T*q^2)/((1-q)*(1-q^3)^2)`.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{CoeffError, Scalar};

pub fn parse_scalar(src: &str) -> Result<Scalar, CoeffError> {
    let mut p = Parser { src: src.as_bytes(), pos: 0 };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> CoeffError {
        CoeffError::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), CoeffError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{}`", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Scalar, CoeffError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Scalar, CoeffError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = &acc * &self.unary()?;
            } else if self.eat(b'/') {
                let d = self.unary()?;
                acc = acc.checked_div(&d)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Scalar, CoeffError> {
        if self.eat(b'-') {
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Scalar, CoeffError> {
        let (base, is_q) = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let (num, den) = self.exponent()?;
        if is_q {
            if den != 1 && den != 2 {
                return Err(self.err("q exponent must be an integer or half-integer"));
            }
            return Ok(Scalar::q_half_pow(num * (2 / den)));
        }
        if den != 1 {
            return Err(self.err("only q admits fractional exponents"));
        }
        let p = base.pow(num.unsigned_abs() as u32);
        if num < 0 {
            p.inverse()
        } else {
            Ok(p)
        }
    }

    /// `^2`, `^-2`, `^(3/2)`, `^(-1/2)`; returns the reduced fraction.
    fn exponent(&mut self) -> Result<(i64, i64), CoeffError> {
        let paren = self.eat(b'(');
        let neg = self.eat(b'-');
        let mut num = self.integer()?;
        let mut den = 1;
        if paren {
            if self.eat(b'/') {
                den = self.integer()?;
            }
            self.expect(b')')?;
        }
        if neg {
            num = -num;
        }
        if den == 0 {
            return Err(self.err("zero denominator in exponent"));
        }
        let g = num_integer::gcd(num, den);
        Ok((num / g, den / g))
    }

    fn integer(&mut self) -> Result<i64, CoeffError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("integer out of range"))
    }

    fn atom(&mut self) -> Result<(Scalar, bool), CoeffError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(b')')?;
                Ok((v, false))
            }
            Some(b'q') => {
                self.pos += 1;
                Ok((Scalar::q_pow(1), true))
            }
            Some(b'T') => {
                self.pos += 1;
                Ok((Scalar::t(), false))
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let n: BigInt = digits.parse().map_err(|_| self.err("bad integer"))?;
                Ok((Scalar::from_rational(BigRational::from_integer(n)), false))
            }
            _ => Err(self.err("expected a number, `q`, `T` or `(`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::QFactorialStyle;

    #[test]
    fn renders_spec_grammar() {
        assert_eq!(Scalar::q_half_pow(3).to_string(), "q^(3/2)");
        assert_eq!(Scalar::one_minus_q(2).to_string(), "(1-q^2)");
        assert_eq!(Scalar::t().to_string(), "T");
    }

    #[test]
    fn parses_what_it_renders() {
        let samples = [
            Scalar::q_half_pow(-1),
            Scalar::from_ratio(-3, 7).mul_ref(&Scalar::t()),
            crate::coeff::qfactorial(3, &QFactorialStyle::OneMinusQ).inverse().unwrap(),
            crate::coeff::qfactorial(4, &QFactorialStyle::APochhammer(Scalar::t())),
            (Scalar::one() + Scalar::q_half_pow(5)) * Scalar::one_minus_tq(-2) * Scalar::one_minus_q(3).inverse().unwrap(),
        ];
        for s in samples {
            let text = s.to_string();
            let back = parse_scalar(&text).unwrap_or_else(|e| panic!("{text}: {e}"));
            assert_eq!(back, s, "{text}");
        }
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_scalar("q^(1/3)").is_err());
        assert!(parse_scalar("1 +").is_err());
        assert!(parse_scalar("x").is_err());
        assert!(matches!(parse_scalar("1/(1+q+5)"), Err(CoeffError::NotInvertible(_))));
    }
}
