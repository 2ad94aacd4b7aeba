//! Parser for rational-function text such as `1-(1-t)^2` or `(t - t^2)/(1 + t - t^2)`.
//!
//! Grammar (integer literals, the variable `t`, `+ - * / ^` and parentheses):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | '+' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | 't' | '(' expr ')'
//! ```

use num_bigint::BigInt;

use super::{Polynomial, RationalFunction};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("at column {column}: {message}")]
pub struct ExprError {
    /// 1-based character column in the input.
    pub column: usize,
    pub message: String,
}

/// Largest accepted exponent; keeps a typo from allocating a huge polynomial.
const MAX_EXPONENT: u32 = 4096;

pub fn parse_rational_function(input: &str) -> Result<RationalFunction, ExprError> {
    let mut p = Parser {
        chars: input.chars().collect(),
        pos: 0,
    };
    let value = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error(format!("unexpected '{}'", p.chars[p.pos])));
    }
    Ok(value)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn error(&self, message: impl Into<String>) -> ExprError {
        ExprError {
            column: self.pos + 1,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<RationalFunction, ExprError> {
        let mut acc = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RationalFunction, ExprError> {
        let mut acc = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek() {
            self.pos += 1;
            let at = self.pos;
            let rhs = self.unary()?;
            acc = if op == '*' {
                &acc * &rhs
            } else {
                acc.checked_div(&rhs).ok_or_else(|| ExprError {
                    column: at + 1,
                    message: "division by the zero function".into(),
                })?
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RationalFunction, ExprError> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RationalFunction, ExprError> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let digits = self.integer()?;
            let exp: u32 = digits
                .parse()
                .ok()
                .filter(|&e| e <= MAX_EXPONENT)
                .ok_or_else(|| ExprError {
                    column: start + 1,
                    message: format!("exponent must be an integer in 0..={MAX_EXPONENT}"),
                })?;
            return Ok(base.pow(exp));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<String, ExprError> {
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(char::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn atom(&mut self) -> Result<RationalFunction, ExprError> {
        match self.peek() {
            Some('t') => {
                self.pos += 1;
                Ok(RationalFunction::t())
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.integer()?;
                let n: BigInt = digits.parse().expect("digits");
                Ok(RationalFunction::from_poly(Polynomial::constant(
                    Rational::from_integer(n),
                )))
            }
            Some(c) => Err(self.error(format!("unexpected '{c}'"))),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

/// Parses a constant-only expression, e.g. a discount written as `"9/10"`.
pub fn parse_constant(input: &str) -> Result<Rational, ExprError> {
    let f = parse_rational_function(input)?;
    f.as_constant().ok_or_else(|| ExprError {
        column: 1,
        message: "expression depends on t, expected a constant".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(n: &[i64], d: &[i64]) -> RationalFunction {
        RationalFunction::new(Polynomial::from_ints(n), Polynomial::from_ints(d)).unwrap()
    }

    #[test]
    fn parses_canonical_discount() {
        let f = parse_rational_function("1-(1-t)^2").unwrap();
        assert_eq!(f, rf(&[0, 2, -1], &[1]));
    }

    #[test]
    fn precedence_and_unary_minus() {
        assert_eq!(
            parse_rational_function("-t^2").unwrap(),
            rf(&[0, 0, -1], &[1])
        );
        assert_eq!(parse_rational_function("2*t+3").unwrap(), rf(&[3, 2], &[1]));
        assert_eq!(
            parse_rational_function("(2*t-1)/t").unwrap(),
            rf(&[-1, 2], &[0, 1])
        );
        assert_eq!(parse_rational_function("1/2/2").unwrap(), rf(&[1], &[4]));
    }

    #[test]
    fn printed_form_round_trips() {
        let f = rf(&[0, 1, -1], &[1, 1, -1]);
        assert_eq!(parse_rational_function(&f.to_string()).unwrap(), f);
        let g = rf(&[3, 0, 7], &[-5, 0, 0, 2]);
        assert_eq!(parse_rational_function(&g.to_string()).unwrap(), g);
    }

    #[test]
    fn errors_carry_column() {
        let e = parse_rational_function("1 + x").unwrap_err();
        assert_eq!(e.column, 5);
        assert!(parse_rational_function("(t").is_err());
        assert!(parse_rational_function("t/(t-t)").is_err());
        assert!(parse_rational_function("t^-1").is_err());
        assert!(parse_rational_function("").is_err());
    }

    #[test]
    fn constants() {
        assert_eq!(
            parse_constant("9/10").unwrap(),
            Rational::new(9.into(), 10.into())
        );
        assert!(parse_constant("t").is_err());
    }
}
