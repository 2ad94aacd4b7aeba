use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::poly::{write_terms, Polynomial};
use crate::scalar::Field;
use crate::Rational;

/// Quotient of two polynomials in `t`, kept reduced with a monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

/// Sign of a rational function on a left neighbourhood of `t = 1`.
///
/// `f(t) = (1 - t)^vanishing_order * h(t)` with `h(1)` finite and nonzero,
/// and `sign = sign(h(1))`. `vanishing_order` is negative for a pole and is
/// zero when `sign == 0` (the zero function).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignAtOneMinus {
    pub sign: i8,
    pub vanishing_order: i64,
}

impl SignAtOneMinus {
    pub fn ordering(self) -> Ordering {
        self.sign.cmp(&0)
    }

    /// True when `f(t) -> 0` as `t -> 1-`.
    pub fn tends_to_zero(self) -> bool {
        self.sign == 0 || self.vanishing_order >= 1
    }
}

impl RationalFunction {
    /// Builds `num / den` and reduces it. Returns `None` if `den` is zero.
    pub fn new(num: Polynomial, den: Polynomial) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        Some(Self::reduce(num, den))
    }

    fn reduce(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_constant() {
            (num, den)
        } else {
            (num.exact_div(&g), den.exact_div(&g))
        };
        let lc = den.leading().unwrap().clone();
        if !lc.is_one() {
            let inv = lc.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RationalFunction { num, den }
    }

    pub fn from_poly(p: Polynomial) -> Self {
        RationalFunction {
            num: p,
            den: Polynomial::one(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(Polynomial::constant(c))
    }

    pub fn t() -> Self {
        Self::from_poly(Polynomial::t())
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    /// The value as a constant, if the function does not depend on `t`.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.num.is_constant() && self.den.is_constant() {
            Some(
                self.num
                    .coeffs()
                    .first()
                    .cloned()
                    .unwrap_or_else(Rational::zero),
            )
        } else {
            None
        }
    }

    /// `None` at a pole.
    pub fn eval(&self, t: &Rational) -> Option<Rational> {
        let d = self.den.eval(t);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(t) / d)
        }
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        self.num.eval_f64(t) / self.den.eval_f64(t)
    }

    pub fn pow(&self, exp: u32) -> Self {
        // Powers of a reduced fraction stay reduced.
        RationalFunction {
            num: self.num.pow(exp),
            den: self.den.pow(exp),
        }
    }

    pub fn checked_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        Some(Self::reduce(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    pub fn total_degree(&self) -> usize {
        self.num.degree().unwrap_or(0) + self.den.degree().unwrap_or(0)
    }

    /// Writes `(1 - t)^k * h(t)` and reports the sign of `h(1)` and `k`.
    pub fn sign_near_one(&self) -> SignAtOneMinus {
        if self.is_zero() {
            return SignAtOneMinus {
                sign: 0,
                vanishing_order: 0,
            };
        }
        let (mn, qn) = self.num.deflate_at_one();
        let (md, qd) = self.den.deflate_at_one();
        let one = Rational::one();
        let h = qn.eval(&one) / qd.eval(&one);
        SignAtOneMinus {
            sign: if h.is_positive() { 1 } else { -1 },
            vanishing_order: i64::from(mn) - i64::from(md),
        }
    }

    /// Order of `self` versus `other` valid on some `(1 - eps, 1)`.
    pub fn compare_near_one(&self, other: &Self) -> Ordering {
        (self - other).sign_near_one().ordering()
    }

    /// Integer-coefficient form `(P, Q)` of `self`, scaled so that the
    /// lowest-degree nonzero coefficient of `Q` is positive and the
    /// coefficients of `P` and `Q` share no common factor.
    pub fn integer_form(&self) -> (Vec<BigInt>, Vec<BigInt>) {
        use num_integer::Integer;
        let lcm = self
            .num
            .coeffs()
            .iter()
            .chain(self.den.coeffs())
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let lift = |p: &Polynomial| -> Vec<BigInt> {
            p.coeffs()
                .iter()
                .map(|c| c.numer() * (&lcm / c.denom()))
                .collect()
        };
        let mut n = lift(&self.num);
        let mut d = lift(&self.den);
        let mut content = n.iter().chain(&d).fold(BigInt::zero(), |g, c| g.gcd(c));
        if d.iter()
            .find(|c| !c.is_zero())
            .is_some_and(|c| c.is_negative())
        {
            content = -content;
        }
        for c in n.iter_mut().chain(d.iter_mut()) {
            *c = &*c / &content;
        }
        (n, d)
    }
}

/// Prints `P(t)` or `(P(t))/(Q(t))` with integer coefficients in ascending
/// powers; the output parses back to the same function.
impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = self.integer_form();
        let lift = |v: Vec<BigInt>| v.into_iter().map(Rational::from_integer);
        if d.len() == 1 && d[0].is_one() {
            return write_terms(f, lift(n));
        }
        if d.len() == 1 && n.len() <= 1 {
            let top = n.first().cloned().unwrap_or_default();
            return write!(f, "{}/{}", top, d[0]);
        }
        f.write_str("(")?;
        write_terms(f, lift(n))?;
        f.write_str(")/(")?;
        write_terms(f, lift(d))?;
        f.write_str(")")
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({self})")
    }
}

impl Zero for RationalFunction {
    fn zero() -> Self {
        RationalFunction {
            num: Polynomial::zero(),
            den: Polynomial::one(),
        }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RationalFunction {
    fn one() -> Self {
        Self::from_poly(Polynomial::one())
    }
}

impl<'a> Add<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction::reduce(&self.num + &rhs.num, self.den.clone());
        }
        RationalFunction::reduce(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl<'a> Sub<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction::reduce(&self.num - &rhs.num, self.den.clone());
        }
        RationalFunction::reduce(
            &(&self.num * &rhs.den) - &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl<'a> Mul<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::reduce(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl<'a> Div<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        self.checked_div(rhs)
            .expect("rational function division by zero")
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Field for RationalFunction {
    /// Total degree first, then coefficient size.
    type PivotKey = (usize, u64);

    fn from_rational(r: &Rational) -> Self {
        Self::constant(r.clone())
    }

    fn pivot_key(&self) -> Option<(usize, u64)> {
        if self.is_zero() {
            return None;
        }
        let bits = self
            .num
            .coeffs()
            .iter()
            .chain(self.den.coeffs())
            .map(|c| c.numer().bits() + c.denom().bits())
            .sum();
        Some((self.total_degree(), bits))
    }

    fn is_exact() -> bool {
        true
    }
}

/// Sign and order at `1-` of a reduced rational function.
pub fn sign_near_one(f: &RationalFunction) -> SignAtOneMinus {
    f.sign_near_one()
}

pub fn compare_near_one(f: &RationalFunction, g: &RationalFunction) -> Ordering {
    f.compare_near_one(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> Polynomial {
        Polynomial::from_ints(c)
    }

    fn rf(n: &[i64], d: &[i64]) -> RationalFunction {
        RationalFunction::new(poly(n), poly(d)).unwrap()
    }

    #[test]
    fn reduction_cancels_and_makes_monic() {
        // (t^2 - 1) / (2t - 2) = (t + 1) / 2
        let f = rf(&[-1, 0, 1], &[-2, 2]);
        assert_eq!(f.den(), &Polynomial::one());
        assert_eq!(
            f.num(),
            &Polynomial::new(vec![Rational::new(1.into(), 2.into()); 2])
        );
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(RationalFunction::new(poly(&[1]), Polynomial::zero()).is_none());
    }

    #[test]
    fn sign_examples() {
        // t(1 - t) / (1 + t - t^2)
        let f = rf(&[0, 1, -1], &[1, 1, -1]);
        assert_eq!(
            f.sign_near_one(),
            SignAtOneMinus {
                sign: 1,
                vanishing_order: 1
            }
        );
        assert_eq!(RationalFunction::zero().sign_near_one().sign, 0);
        // (t - 1)^3
        let g = RationalFunction::from_poly(poly(&[-1, 1]).pow(3));
        assert_eq!(
            g.sign_near_one(),
            SignAtOneMinus {
                sign: -1,
                vanishing_order: 3
            }
        );
        // 1 / (1 - t) is a pole of order 1
        let p = rf(&[1], &[1, -1]);
        assert_eq!(
            p.sign_near_one(),
            SignAtOneMinus {
                sign: 1,
                vanishing_order: -1
            }
        );
    }

    #[test]
    fn compare_examples() {
        let f = rf(&[0, 1, -1], &[1, 1, -1]);
        assert_eq!(
            f.compare_near_one(&RationalFunction::zero()),
            Ordering::Greater
        );
        assert_eq!(f.compare_near_one(&f), Ordering::Equal);
        let a = rf(&[1, -1], &[1]);
        let b = RationalFunction::from_poly(poly(&[1, -1]).pow(2));
        assert_eq!(a.compare_near_one(&b), Ordering::Greater);
    }

    #[test]
    fn display_integer_form() {
        let f = rf(&[0, 1, -1], &[1, 1, -1]);
        assert_eq!(f.to_string(), "(t - t^2)/(1 + t - t^2)");
        let half = RationalFunction::constant(Rational::new(1.into(), 2.into()));
        assert_eq!(half.to_string(), "1/2");
        assert_eq!(RationalFunction::t().to_string(), "t");
    }
}
