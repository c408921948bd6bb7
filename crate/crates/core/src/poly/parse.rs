//! Canonical text grammar.
//!
//! ```text
//! poly   := ws [sign] term (sign term)* ws
//! term   := factor ('*' factor)*
//! factor := integer ['/' integer] | 'x' index ['^' integer]
//! ```
//!
//! Variables are one-based (`x1 … xd`). Whitespace is allowed between
//! tokens.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::monomial::Monomial;
use super::polynomial::Polynomial;
use super::Rational;
use crate::error::{Error, Result};

/// Parses `text`. When `dim` is `None` the dimension is the highest
/// variable index mentioned (at least 1); when given, any index above it
/// is an error.
pub fn parse_polynomial(text: &str, dim: Option<usize>) -> Result<Polynomial> {
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let terms = parser.polynomial()?;
    let highest = terms
        .iter()
        .flat_map(|(vars, _)| vars.iter().map(|(v, _)| *v))
        .max()
        .unwrap_or(1);
    let dim = match dim {
        Some(d) => {
            if highest > d {
                return Err(Error::Parse {
                    offset: 0,
                    message: format!("variable x{highest} exceeds dimension {d}"),
                });
            }
            d
        }
        None => highest,
    };
    if dim == 0 {
        return Err(Error::Parse {
            offset: 0,
            message: "dimension must be positive".into(),
        });
    }
    let mut out = Polynomial::zero(dim);
    for (vars, coeff) in terms {
        let mut exps = vec![0u32; dim];
        for (v, e) in vars {
            exps[v - 1] += e;
        }
        out.add_term(Monomial::new(exps), coeff);
    }
    Ok(out)
}

/// Parses `p/q`, `-p/q` or an integer.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    parser.skip_ws();
    let negative = parser.eat(b'-');
    if !negative {
        parser.eat(b'+');
    }
    parser.skip_ws();
    let value = parser.number()?;
    parser.skip_ws();
    if parser.pos != parser.src.len() {
        return Err(parser.error("trailing input after rational"));
    }
    Ok(if negative { -value } else { value })
}

type RawTerm = (Vec<(usize, u32)>, Rational);

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Parse {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
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

    fn digits(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digit string"))
    }

    fn small(&mut self, what: &str) -> Result<u32> {
        let n = self.digits()?;
        u32::try_from(n).map_err(|_| self.error(&format!("{what} too large")))
    }

    fn number(&mut self) -> Result<Rational> {
        let num = self.digits()?;
        self.skip_ws();
        if self.eat(b'/') {
            self.skip_ws();
            let den = self.digits()?;
            if den.is_zero() {
                return Err(self.error("zero denominator"));
            }
            Ok(Rational::new(num, den))
        } else {
            Ok(Rational::from_integer(num))
        }
    }

    fn factor(&mut self, vars: &mut Vec<(usize, u32)>, coeff: &mut Rational) -> Result<()> {
        self.skip_ws();
        match self.peek() {
            Some(b'0'..=b'9') => {
                *coeff *= self.number()?;
                Ok(())
            }
            Some(b'x') => {
                self.pos += 1;
                let idx = self.small("variable index")? as usize;
                if idx == 0 {
                    return Err(self.error("variables are numbered from x1"));
                }
                self.skip_ws();
                let exp = if self.eat(b'^') {
                    self.skip_ws();
                    self.small("exponent")?
                } else {
                    1
                };
                vars.push((idx, exp));
                Ok(())
            }
            _ => Err(self.error("expected a number or a variable x<i>")),
        }
    }

    fn term(&mut self) -> Result<RawTerm> {
        let mut vars = Vec::new();
        let mut coeff = Rational::one();
        self.factor(&mut vars, &mut coeff)?;
        loop {
            self.skip_ws();
            if !self.eat(b'*') {
                break;
            }
            self.factor(&mut vars, &mut coeff)?;
        }
        Ok((vars, coeff))
    }

    fn polynomial(&mut self) -> Result<Vec<RawTerm>> {
        let mut terms = Vec::new();
        self.skip_ws();
        if self.pos == self.src.len() {
            return Err(self.error("empty polynomial"));
        }
        let mut negative = false;
        if self.eat(b'-') {
            negative = true;
        } else {
            self.eat(b'+');
        }
        loop {
            let (vars, coeff) = self.term()?;
            terms.push((vars, if negative { -coeff } else { coeff }));
            self.skip_ws();
            if self.eat(b'+') {
                negative = self.unary_minus();
            } else if self.eat(b'-') {
                negative = !self.unary_minus();
            } else if self.pos == self.src.len() {
                break;
            } else {
                return Err(self.error("expected '+', '-' or end of input"));
            }
        }
        Ok(terms)
    }

    /// One optional `-` after a binary operator, so `a + -b` parses.
    fn unary_minus(&mut self) -> bool {
        self.skip_ws();
        self.eat(b'-')
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    #[test]
    fn parses_canonical_example() {
        let p = parse_polynomial("3/2*x1^2*x3 - x2 + 1", None).unwrap();
        assert_eq!(p.dimension(), 3);
        assert_eq!(p.coefficient(&Monomial::new(vec![2, 0, 1])), rat(3, 2));
        assert_eq!(p.coefficient(&Monomial::new(vec![0, 1, 0])), rat(-1, 1));
        assert_eq!(p.coefficient(&Monomial::one(3)), rat(1, 1));
    }

    #[test]
    fn unary_signs() {
        let p = parse_polynomial("x1 + -2*x2 - -3", None).unwrap();
        assert_eq!(p, parse_polynomial("x1 - 2*x2 + 3", None).unwrap());
        assert!(parse_polynomial("x1 +", None).is_err());
    }

    #[test]
    fn explicit_dimension() {
        let p = parse_polynomial("x1^2+x2^2-1", Some(4)).unwrap();
        assert_eq!(p.dimension(), 4);
        assert!(parse_polynomial("x5", Some(4)).is_err());
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["", "x", "x0", "1/0", "x1^", "x1 + + x2", "y1", "x1 x2", "2 /"] {
            assert!(parse_polynomial(bad, None).is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn collects_repeated_terms() {
        let p = parse_polynomial("x1*x1 + x1^2 - 2*x1^2", None).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("-3/6").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational(" 5 ").unwrap(), rat(5, 1));
        assert!(parse_rational("1/2x").is_err());
    }
}
