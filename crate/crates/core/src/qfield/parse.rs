//! Text literals: `"p/q"`, `"a/b + c/d*sqrt(D)"`, `"sqrt(2)/4"`, up to two
//! distinct radicands after reduction. Whitespace is ignored.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{QfError, QuadExpr, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at offset {offset}: {reason}")]
pub struct ParseError {
    pub offset: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Sqrt,
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
    Slash,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Int(src[start..i].parse().expect("digits"))));
                continue;
            }
            b's' if src[i..].starts_with("sqrt") => {
                i += 4;
                out.push((start, Tok::Sqrt));
                continue;
            }
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            _ => {
                let ch = src[i..].chars().next().unwrap_or('?');
                return Err(ParseError { offset: i, reason: format!("unexpected character {ch:?}") });
            }
        };
        i += 1;
        out.push((start, tok));
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    pos: usize,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn err<T>(&self, reason: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { offset: self.offset(), reason: reason.into() })
    }

    fn int(&mut self) -> Result<BigInt, ParseError> {
        match self.peek() {
            Some(Tok::Int(v)) => {
                let v = v.clone();
                self.pos += 1;
                Ok(v)
            }
            _ => self.err("expected an integer"),
        }
    }

    /// factor := INT | sqrt '(' INT ')'
    fn factor(&mut self) -> Result<QuadExpr, ParseError> {
        match self.peek() {
            Some(Tok::Int(_)) => Ok(QuadExpr::rational(Rational::from_integer(self.int()?))),
            Some(Tok::Sqrt) => {
                self.pos += 1;
                if self.peek() != Some(&Tok::LParen) {
                    return self.err("expected '(' after sqrt");
                }
                self.pos += 1;
                let at = self.offset();
                let d = self.int()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                let d: u64 =
                    d.try_into().map_err(|_| ParseError { offset: at, reason: "radicand out of range".into() })?;
                if d == 0 {
                    return Ok(QuadExpr::zero());
                }
                QuadExpr::sqrt(d).map_err(|e| ParseError { offset: at, reason: e.to_string() })
            }
            _ => self.err("expected a number or sqrt(...)"),
        }
    }

    /// term := factor (('*' factor) | ('/' INT))*
    fn term(&mut self) -> Result<QuadExpr, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let at = self.offset();
                    let f = self.factor()?;
                    acc = acc.checked_mul(&f).map_err(|e| overflow(at, e))?;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let at = self.offset();
                    let d = self.int()?;
                    if d.is_zero() {
                        return Err(ParseError { offset: at, reason: "division by zero".into() });
                    }
                    acc = acc.scale(&Rational::new(BigInt::one(), d));
                }
                _ => return Ok(acc),
            }
        }
    }

    /// expr := ['+'|'-'] term (('+'|'-') term)*
    fn expr(&mut self) -> Result<QuadExpr, ParseError> {
        let mut negate = false;
        match self.peek() {
            Some(Tok::Minus) => {
                negate = true;
                self.pos += 1;
            }
            Some(Tok::Plus) => self.pos += 1,
            _ => {}
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            let neg = match self.peek() {
                Some(Tok::Plus) => false,
                Some(Tok::Minus) => true,
                None => return Ok(acc),
                _ => return self.err("expected '+', '-' or end of input"),
            };
            self.pos += 1;
            let at = self.offset();
            let t = self.term()?;
            let t = if neg { t.neg() } else { t };
            acc = acc.checked_add(&t).map_err(|e| overflow(at, e))?;
        }
    }
}

fn overflow(offset: usize, e: QfError) -> ParseError {
    ParseError { offset, reason: e.to_string() }
}

impl FromStr for QuadExpr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let toks = lex(s)?;
        if toks.is_empty() {
            return Err(ParseError { offset: 0, reason: "empty expression".into() });
        }
        let mut p = Parser { toks: &toks, pos: 0, end: s.len() };
        p.expr()
    }
}

fn fmt_abs_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().abs().to_string()
    } else {
        format!("{}/{}", r.numer().abs(), r.denom())
    }
}

impl fmt::Display for QuadExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let p = self.rational_part();
        if !p.is_zero() || self.terms().is_empty() {
            if p.is_negative() {
                write!(f, "-")?;
            }
            write!(f, "{}", fmt_abs_rational(p))?;
            first = false;
        }
        for (q, d) in self.terms() {
            let neg = q.is_negative();
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            if q.abs().is_one() {
                write!(f, "sqrt({d})")?;
            } else {
                write!(f, "{}*sqrt({d})", fmt_abs_rational(q))?;
            }
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::ratio;

    #[test]
    fn parses_documented_forms() {
        let x: QuadExpr = "1/4*sqrt(2)".parse().unwrap();
        assert_eq!(x, QuadExpr::term(ratio(1, 4), 2).unwrap());
        let y: QuadExpr = " 1 / 2 + 3/4 * sqrt( 2 ) - 1/8*sqrt(3)".parse().unwrap();
        assert_eq!(y.to_string(), "1/2 + 3/4*sqrt(2) - 1/8*sqrt(3)");
        let z: QuadExpr = "sqrt(2)/4".parse().unwrap();
        assert_eq!(z, x);
        let w: QuadExpr = "-3/6".parse().unwrap();
        assert_eq!(w, QuadExpr::rational(ratio(-1, 2)));
        let v: QuadExpr = "sqrt(8)".parse().unwrap();
        assert_eq!(v.to_string(), "2*sqrt(2)");
    }

    #[test]
    fn reports_offsets() {
        let e = "1/4 * sqr(2)".parse::<QuadExpr>().unwrap_err();
        assert_eq!(e.offset, 6);
        let e = "1/0".parse::<QuadExpr>().unwrap_err();
        assert_eq!(e.offset, 2);
        assert!(e.reason.contains("division by zero"));
        let e = "sqrt(2) + sqrt(3) + sqrt(5)".parse::<QuadExpr>().unwrap_err();
        assert_eq!(e.offset, 20);
        assert!(e.reason.contains("radicands"));
        let e = "1 +".parse::<QuadExpr>().unwrap_err();
        assert_eq!(e.offset, 3);
        let e = "  ".parse::<QuadExpr>().unwrap_err();
        assert_eq!(e.offset, 0);
    }

    #[test]
    fn display_edge_cases() {
        assert_eq!(QuadExpr::zero().to_string(), "0");
        assert_eq!(QuadExpr::sqrt(3).unwrap().neg().to_string(), "-sqrt(3)");
        let x = QuadExpr::new(ratio(-1, 3), vec![(ratio(-2, 1), 5)]).unwrap();
        assert_eq!(x.to_string(), "-1/3 - 2*sqrt(5)");
    }
}
