use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Rational;

/// Univariate polynomial in `t` over the rationals.
///
/// `coeffs[i]` is the coefficient of `t^i`. Trailing zeros are always
/// stripped, so the zero polynomial has no coefficients at all.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `t`.
    pub fn t() -> Self {
        Self::new(vec![Rational::zero(), Rational::one()])
    }

    /// The polynomial `1 - t`.
    pub fn one_minus_t() -> Self {
        Self::new(vec![Rational::one(), -Rational::one()])
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| Rational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::default(),
            Some(lc) => self.scale(&lc.recip()),
        }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::constant(Rational::one());
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Euclidean division. Panics when `divisor` is zero.
    pub fn div_rem(&self, divisor: &Polynomial) -> (Polynomial, Polynomial) {
        let dd = divisor.degree().expect("polynomial division by zero");
        let lc = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return (Self::default(), Self::default());
        };
        if nd < dd {
            return (Self::default(), self.clone());
        }
        let mut quot = vec![Rational::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let q = &rem[k + dd] / &lc;
            if q.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &q * dc;
            }
            quot[k] = q;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Exact division; panics if `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &Polynomial) -> Polynomial {
        let (q, r) = self.div_rem(divisor);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    ///
    /// Runs the primitive remainder sequence over the integers so that
    /// intermediate coefficients stay small, then maps back to a monic
    /// polynomial over the rationals.
    pub fn gcd(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        let mut a = IntPoly::primitive_of(self);
        let mut b = IntPoly::primitive_of(other);
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive();
            a = b;
            b = r;
        }
        a.to_rational().monic()
    }

    /// Squarefree part `p / gcd(p, p')`, monic.
    pub fn squarefree(&self) -> Polynomial {
        if self.is_constant() {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.exact_div(&g).monic()
    }

    /// Removes every factor `(1 - t)`: returns `(m, q)` with
    /// `self = (1 - t)^m * q` and `q(1) != 0`. Panics on zero.
    pub(crate) fn deflate_at_one(&self) -> (u32, Polynomial) {
        assert!(!self.is_zero(), "deflating the zero polynomial");
        let mut q = self.coeffs.clone();
        let mut m = 0u32;
        loop {
            // Horner at 1 doubles as synthetic division by (t - 1).
            let n = q.len();
            let mut quot = vec![Rational::zero(); n.saturating_sub(1)];
            let mut acc = Rational::zero();
            for i in (0..n).rev() {
                acc += &q[i];
                if i > 0 {
                    quot[i - 1] = acc.clone();
                }
            }
            if !acc.is_zero() {
                return (m, Self::new(q));
            }
            // (t - 1) = -(1 - t)
            q = quot.into_iter().map(|c| -c).collect();
            m += 1;
        }
    }

    /// Clears denominators and content: the primitive integer polynomial
    /// proportional to `self` with positive leading coefficient.
    pub fn to_primitive_integer(&self) -> Vec<BigInt> {
        IntPoly::primitive_of(self).coeffs
    }
}

/// Multiplicity of the root `t = 1` and the value of the deflated quotient
/// there: `p = (1 - t)^m * q` with `q(1) != 0`, returns `(m, q(1))`.
pub fn zero_order_at_one(p: &Polynomial) -> Result<(u32, Rational), ZeroPolynomial> {
    if p.is_zero() {
        return Err(ZeroPolynomial);
    }
    let (m, q) = p.deflate_at_one();
    Ok((m, q.eval(&Rational::one())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("the zero polynomial has no finite order at t = 1")]
pub struct ZeroPolynomial;

impl Zero for Polynomial {
    fn zero() -> Self {
        Self::default()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for Polynomial {
    fn one() -> Self {
        Self::constant(Rational::one())
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = Rational::zero();
        Polynomial::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + rhs.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = Rational::zero();
        Polynomial::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) - rhs.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::default();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

/// Ascending powers, e.g. `1/2 - t + 3*t^2`.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.coeffs.iter().cloned())
    }
}

/// Shared term printer; coefficients may be rationals or integers lifted
/// into rationals.
pub(crate) fn write_terms(
    f: &mut impl fmt::Write,
    coeffs: impl Iterator<Item = Rational>,
) -> fmt::Result {
    let mut first = true;
    for (i, c) in coeffs.enumerate() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = c.abs();
        if first {
            if neg {
                f.write_str("-")?;
            }
        } else {
            f.write_str(if neg { " - " } else { " + " })?;
        }
        first = false;
        let unit = mag.is_one();
        match i {
            0 => write!(f, "{mag}")?,
            _ => {
                if !unit {
                    write!(f, "{mag}*")?;
                }
                f.write_str("t")?;
                if i > 1 {
                    write!(f, "^{i}")?;
                }
            }
        }
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

/// Integer-coefficient helper used by the primitive remainder sequence.
#[derive(Clone, Debug)]
struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    fn primitive_of(p: &Polynomial) -> IntPoly {
        let lcm = p
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let coeffs = p
            .coeffs
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect();
        IntPoly { coeffs }.primitive()
    }

    fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn trim(mut self) -> Self {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        self
    }

    fn primitive(self) -> IntPoly {
        let mut p = self.trim();
        if p.is_zero() {
            return p;
        }
        let content = p.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        let sign = if p.coeffs.last().unwrap().is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        let div = content * sign;
        for c in &mut p.coeffs {
            *c = &*c / &div;
        }
        p
    }

    /// `lc(b)^(deg a - deg b + 1) * a mod b`, computed without fractions.
    fn pseudo_rem(&self, b: &IntPoly) -> IntPoly {
        let db = b.degree();
        let lb = b.coeffs.last().unwrap();
        let mut r = self.coeffs.clone();
        while r.len() > db && !r.is_empty() {
            let dr = r.len() - 1;
            let lr = r[dr].clone();
            for c in r.iter_mut() {
                *c *= lb;
            }
            let shift = dr - db;
            for (j, bc) in b.coeffs.iter().enumerate() {
                r[shift + j] -= &lr * bc;
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        IntPoly { coeffs: r }.trim()
    }

    fn to_rational(&self) -> Polynomial {
        Polynomial::new(
            self.coeffs
                .iter()
                .map(|c| Rational::from_integer(c.clone()))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn canonical_form_strips_zeros() {
        let p = Polynomial::from_ints(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert!(Polynomial::from_ints(&[0, 0]).is_zero());
        assert_eq!(Polynomial::zero().degree(), None);
    }

    #[test]
    fn degree_is_additive() {
        let a = Polynomial::from_ints(&[1, 0, 3]);
        let b = Polynomial::from_ints(&[-2, 5]);
        assert_eq!((&a * &b).degree(), Some(3));
    }

    #[test]
    fn div_rem_reconstructs() {
        let a = Polynomial::from_ints(&[5, -3, 0, 2, 7]);
        let b = Polynomial::from_ints(&[1, 0, 3]);
        let (qt, r) = a.div_rem(&b);
        assert_eq!(&(&qt * &b) + &r, a);
        assert!(r.degree() < b.degree());
    }

    #[test]
    fn gcd_finds_common_factor() {
        // (t - 1)(t + 2) and (t - 1)(2t + 3)
        let f = Polynomial::from_ints(&[-1, 1]);
        let a = &f * &Polynomial::from_ints(&[2, 1]);
        let b = &f * &Polynomial::from_ints(&[3, 2]);
        assert_eq!(a.gcd(&b), f);
        let coprime = Polynomial::from_ints(&[1, 1]).gcd(&Polynomial::from_ints(&[2, 1]));
        assert_eq!(coprime, Polynomial::one());
    }

    #[test]
    fn zero_order_examples() {
        assert_eq!(
            zero_order_at_one(&Polynomial::one_minus_t()).unwrap(),
            (1, q(1, 1))
        );
        // (1 - t)^2 / 2 = 1/2 - t + t^2/2
        let p = Polynomial::new(vec![q(1, 2), q(-1, 1), q(1, 2)]);
        assert_eq!(zero_order_at_one(&p).unwrap(), (2, q(1, 2)));
        assert_eq!(
            zero_order_at_one(&Polynomial::from_ints(&[3])).unwrap(),
            (0, q(3, 1))
        );
        assert_eq!(zero_order_at_one(&Polynomial::zero()), Err(ZeroPolynomial));
    }

    #[test]
    fn deflation_sign_uses_one_minus_t() {
        // t - 1 = (1 - t) * (-1)
        let (m, rest) = Polynomial::from_ints(&[-1, 1]).deflate_at_one();
        assert_eq!(m, 1);
        assert_eq!(rest, Polynomial::from_ints(&[-1]));
    }

    #[test]
    fn display_ascending() {
        let p = Polynomial::new(vec![q(1, 2), q(-1, 1), q(3, 1)]);
        assert_eq!(p.to_string(), "1/2 - t + 3*t^2");
        assert_eq!(Polynomial::zero().to_string(), "0");
        assert_eq!(Polynomial::from_ints(&[0, -1]).to_string(), "-t");
    }
}
