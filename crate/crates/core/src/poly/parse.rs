//! Text syntax: `coef*x^a*y^b` terms joined by `+`/`-`, rationals as `p/q`,
//! exponents possibly negative (`x^-2` or `x^(-2)`).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::monomial::Exponent;
use super::polynomial::Polynomial;
use crate::error::{Error, Result};
use crate::field::Field;

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str, line: usize) -> Self {
        Cursor {
            chars: src.chars().collect(),
            pos: 0,
            line,
            src,
        }
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column: self.pos + 1,
            message: format!("{} in `{}`", message.into(), self.src),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn integer(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().ok()
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len()
            && (self.chars[self.pos].is_alphanumeric() || self.chars[self.pos] == '_')
        {
            if self.pos == start && self.chars[self.pos].is_ascii_digit() {
                break;
            }
            self.pos += 1;
        }
        (start != self.pos).then(|| self.chars[start..self.pos].iter().collect())
    }

    fn signed_exponent(&mut self) -> Result<i32> {
        let paren = self.peek() == Some('(');
        if paren {
            self.bump();
        }
        let mut sign = 1i32;
        if self.peek() == Some('-') {
            self.bump();
            sign = -1;
        }
        let n = self
            .integer()
            .ok_or_else(|| self.err("expected exponent"))?;
        let n: i32 = n
            .try_into()
            .map_err(|_| self.err("exponent out of range"))?;
        if paren && self.bump() != Some(')') {
            return Err(self.err("expected `)`"));
        }
        Ok(sign * n)
    }
}

/// Parses a polynomial over the declared variable names.
pub fn parse_polynomial<F: Field>(field: &F, names: &[String], src: &str) -> Result<Polynomial<F>> {
    parse_polynomial_at(field, names, src, 1)
}

/// As [`parse_polynomial`], reporting errors at the given line.
pub fn parse_polynomial_at<F: Field>(
    field: &F,
    names: &[String],
    src: &str,
    line: usize,
) -> Result<Polynomial<F>> {
    let nvars = names.len();
    let mut cur = Cursor::new(src, line);
    let mut out = Polynomial::zero(field, nvars);
    if cur.peek().is_none() {
        return Err(cur.err("empty polynomial"));
    }
    let mut first = true;
    loop {
        let mut sign = BigInt::one();
        match cur.peek() {
            None => break,
            Some('+') if !first => {
                cur.bump();
            }
            Some('-') => {
                cur.bump();
                sign = -sign;
            }
            Some(_) if first => {}
            Some(c) => return Err(cur.err(format!("unexpected `{c}`"))),
        }
        first = false;
        let (coef, exp) = parse_term(&mut cur, names)?;
        let coef = coef * BigRational::from_integer(sign);
        out.add_term(exp, &field.from_rational(&coef)?);
    }
    Ok(out)
}

fn parse_term(cur: &mut Cursor<'_>, names: &[String]) -> Result<(BigRational, Exponent)> {
    let mut coef = BigRational::one();
    let mut exp = Exponent::zero(names.len());
    loop {
        match cur.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num = cur.integer().expect("digit present");
                let mut q = BigRational::from_integer(num);
                if cur.peek() == Some('/') {
                    cur.bump();
                    let den = cur
                        .integer()
                        .ok_or_else(|| cur.err("expected denominator"))?;
                    if den.is_zero() {
                        return Err(cur.err("zero denominator"));
                    }
                    q /= BigRational::from_integer(den);
                }
                coef *= q;
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let start = cur.pos;
                let name = cur.ident().expect("identifier present");
                let idx = names.iter().position(|n| *n == name).ok_or_else(|| {
                    cur.pos = start;
                    cur.err(format!("unknown variable `{name}`"))
                })?;
                let mut a = 1;
                if cur.peek() == Some('^') {
                    cur.bump();
                    a = cur.signed_exponent()?;
                }
                exp.0[idx] += a;
            }
            Some(c) => return Err(cur.err(format!("unexpected `{c}`"))),
            None => return Err(cur.err("unexpected end of input")),
        }
        match cur.peek() {
            Some('*') => {
                cur.bump();
            }
            _ => break,
        }
    }
    Ok((coef, exp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::poly::default_names;

    fn names() -> Vec<String> {
        default_names(4)
    }

    #[test]
    fn parses_and_renders() {
        let p = parse_polynomial(&Rationals, &names(), "z^3 - 2*y*z*w + x*w^2").unwrap();
        assert_eq!(p.num_terms(), 3);
        assert_eq!(p.homogeneous_degree(), Some(3));
        let again = parse_polynomial(&Rationals, &names(), &p.to_string()).unwrap();
        assert_eq!(p, again);
    }

    #[test]
    fn rationals_and_laurent_exponents() {
        let p = parse_polynomial(&Rationals, &names(), "3/4*x^-1*y^(-2) - 1/2").unwrap();
        assert_eq!(p.to_string(), "-1/2 + 3/4*x^-1*y^-2");
    }

    #[test]
    fn cancellation_drops_terms() {
        let p = parse_polynomial(&Rationals, &names(), "x*w - y*z + y*z - x*w").unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn reports_column_of_unknown_variable() {
        let err = parse_polynomial(&Rationals, &names(), "x + q").unwrap_err();
        match err {
            Error::Parse { column, .. } => assert_eq!(column, 5),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_inputs() {
        for bad in ["", "x +", "x ^", "2/0*x", "x y", "*x"] {
            assert!(parse_polynomial(&Rationals, &names(), bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn mod_p_coefficients() {
        let f = PrimeField::new(7).unwrap();
        let p = parse_polynomial(&f, &names(), "1/2*x + 7*y").unwrap();
        assert_eq!(p.to_string(), "4*x");
    }
}
