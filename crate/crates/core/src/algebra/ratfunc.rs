//! Rational functions in `x` over ℚ, kept in lowest terms with a monic
//! denominator so that structural equality is mathematical equality.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::UniPoly;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: UniPoly,
    den: UniPoly,
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc {
            num: UniPoly::zero(),
            den: UniPoly::one(),
        }
    }

    pub fn one() -> Self {
        RatFunc::from_poly(UniPoly::one())
    }

    pub fn x() -> Self {
        RatFunc::from_poly(UniPoly::x())
    }

    pub fn from_poly(num: UniPoly) -> Self {
        RatFunc {
            num,
            den: UniPoly::one(),
        }
    }

    pub fn constant(c: BigRational) -> Self {
        RatFunc::from_poly(UniPoly::constant(c))
    }

    pub fn from_int(c: i64) -> Self {
        RatFunc::constant(BigRational::from_integer(c.into()))
    }

    /// Builds `num / den` in canonical form.
    pub fn new(num: UniPoly, den: UniPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZeroRatFunc);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: UniPoly, den: UniPoly) -> Self {
        if num.is_zero() {
            return RatFunc::zero();
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g), den.exact_div(&g))
        };
        Self::normalize_lc(num, den)
    }

    fn normalize_lc(num: UniPoly, den: UniPoly) -> Self {
        let lc = den.leading_coeff().expect("nonzero denominator");
        if lc.is_one() {
            RatFunc { num, den }
        } else {
            let inv = lc.recip();
            RatFunc {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn numer(&self) -> &UniPoly {
        &self.num
    }

    pub fn denom(&self) -> &UniPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn checked_div(&self, rhs: &RatFunc) -> Result<RatFunc> {
        let inv = rhs.inv()?;
        Ok(self * &inv)
    }

    pub fn inv(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::DivisionByZeroRatFunc);
        }
        Ok(Self::normalize_lc(self.den.clone(), self.num.clone()))
    }

    /// `d/dx (n/d) = (n′d − n d′) / d²`.
    pub fn derivative(&self) -> RatFunc {
        if self.den.degree() == Some(0) {
            return RatFunc::from_poly(self.num.derivative());
        }
        // With g = gcd(d, d′) the result is (n′·(d/g) − n·(d′/g)) / (d·d/g).
        let dd = self.den.derivative();
        let g = self.den.gcd(&dd);
        let d_over_g = self.den.exact_div(&g);
        let dd_over_g = dd.exact_div(&g);
        let num = &(&self.num.derivative() * &d_over_g) - &(&self.num * &dd_over_g);
        let den = &self.den * &d_over_g;
        Self::canonical(num, den)
    }

    /// Substitutes a rational value; `None` at a pole.
    pub fn eval(&self, x: &BigRational) -> Option<BigRational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatFunc::canonical(&self.num + &rhs.num, self.den.clone());
        }
        let g = self.den.gcd(&rhs.den);
        if g.is_one() {
            let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
            // already in lowest terms
            return RatFunc::normalize_lc(num, &self.den * &rhs.den);
        }
        let a = self.den.exact_div(&g);
        let b = rhs.den.exact_div(&g);
        let num = &(&self.num * &b) + &(&rhs.num * &a);
        RatFunc::canonical(num, &(&a * &b) * &g)
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc::from_poly(&self.num * &rhs.num);
        }
        // Cross-cancel: both inputs are already in lowest terms.
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let (n1, d2) = if g1.is_one() {
            (self.num.clone(), rhs.den.clone())
        } else {
            (self.num.exact_div(&g1), rhs.den.exact_div(&g1))
        };
        let (n2, d1) = if g2.is_one() {
            (rhs.num.clone(), self.den.clone())
        } else {
            (rhs.num.exact_div(&g2), self.den.exact_div(&g2))
        };
        RatFunc::normalize_lc(&n1 * &n2, &d1 * &d2)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "( {} / {} )", self.num, self.den)
    }
}

impl From<UniPoly> for RatFunc {
    fn from(p: UniPoly) -> Self {
        RatFunc::from_poly(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::from_ints(c)
    }

    fn rf(n: &[i64], d: &[i64]) -> RatFunc {
        RatFunc::new(p(n), p(d)).unwrap()
    }

    #[test]
    fn sum_over_common_denominator() {
        // x/(1−x) + 1/(1−x) = (x+1)/(1−x) = (−x−1)/(x−1) with monic denominator.
        let s = &rf(&[0, 1], &[1, -1]) + &rf(&[1], &[1, -1]);
        assert_eq!(s.numer(), &p(&[-1, -1]));
        assert_eq!(s.denom(), &p(&[-1, 1]));
    }

    #[test]
    fn reduces_common_factors() {
        let r = rf(&[-1, 0, 1], &[-1, 1]);
        assert_eq!(r.numer(), &p(&[1, 1]));
        assert!(r.denom().is_one());
        assert_eq!(rf(&[0], &[3, 4]), RatFunc::zero());
    }

    #[test]
    fn division_by_zero() {
        let a = rf(&[1], &[0, 1]);
        assert_eq!(a.checked_div(&RatFunc::zero()), Err(Error::DivisionByZeroRatFunc));
        assert_eq!(RatFunc::new(p(&[1]), UniPoly::zero()), Err(Error::DivisionByZeroRatFunc));
    }

    #[test]
    fn product_and_quotient() {
        let a = rf(&[0, 1], &[1, -1]);
        let b = rf(&[1, -1], &[0, 0, 1]);
        assert_eq!(&a * &b, rf(&[1], &[0, 1]));
        assert_eq!(a.checked_div(&a).unwrap(), RatFunc::one());
        assert_eq!(&a - &a, RatFunc::zero());
    }

    #[test]
    fn derivative_quotient_rule() {
        // d/dx x/(1−x) = 1/(1−x)²
        let d = rf(&[0, 1], &[1, -1]).derivative();
        assert_eq!(d, rf(&[1], &[1, -2, 1]));
        // d/dx 1/x³ = −3/x⁴
        assert_eq!(rf(&[1], &[0, 0, 0, 1]).derivative(), rf(&[-3], &[0, 0, 0, 0, 1]));
    }
}
