//! Dense univariate polynomials over ℚ.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A dense polynomial with exact rational coefficients; `coeffs[i]` is the
/// coefficient of `x^i`. The highest stored coefficient is never zero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<BigRational>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    /// The indeterminate.
    pub fn x() -> Self {
        Self::monomial(BigRational::one(), 1)
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn monomial(c: BigRational, exp: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigRational::zero(); exp + 1];
        coeffs[exp] = c;
        UniPoly { coeffs }
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn from_bigints(coeffs: Vec<BigInt>) -> Self {
        Self::from_coeffs(coeffs.into_iter().map(BigRational::from_integer).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    /// Largest `v` with `x^v` dividing the polynomial; `None` for zero.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Divides by `x^v`; the caller guarantees divisibility.
    pub fn shift_down(&self, v: usize) -> Self {
        debug_assert!(self.coeffs.iter().take(v).all(Zero::is_zero));
        UniPoly::from_coeffs(self.coeffs.iter().skip(v).cloned().collect())
    }

    pub fn shift_up(&self, v: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigRational::zero(); v];
        coeffs.extend(self.coeffs.iter().cloned());
        UniPoly { coeffs }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        UniPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            None => Self::zero(),
            Some(lc) if lc.is_one() => self.clone(),
            Some(lc) => self.scale(&lc.recip()),
        }
    }

    pub fn derivative(&self) -> Self {
        UniPoly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(i.into()))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = divisor.degree().expect("polynomial division by zero");
        let lc_inv = divisor.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UniPoly::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let q = &rem[i] * &lc_inv;
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                if !dc.is_zero() {
                    rem[i - dd + j] -= &q * dc;
                }
            }
            quot[i - dd] = q;
        }
        rem.truncate(dd);
        (UniPoly::from_coeffs(quot), UniPoly::from_coeffs(rem))
    }

    /// Exact division; debug-asserts a zero remainder.
    pub fn exact_div(&self, divisor: &UniPoly) -> UniPoly {
        let (q, r) = self.div_rem(divisor);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Integer coefficients and the positive common denominator `D` with
    /// `self = coeffs / D`.
    pub fn to_integer_coeffs(&self) -> (Vec<BigInt>, BigInt) {
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let nums = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        (nums, den)
    }

    /// Monic greatest common divisor. `gcd(0, 0) = 0`.
    ///
    /// Runs a primitive pseudo-remainder sequence over ℤ, which keeps
    /// intermediate coefficients far smaller than Euclid over ℚ.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        if self.degree() == Some(0) || other.degree() == Some(0) {
            return UniPoly::one();
        }
        let mut u = primitive_part(self.to_integer_coeffs().0);
        let mut v = primitive_part(other.to_integer_coeffs().0);
        if u.len() < v.len() {
            std::mem::swap(&mut u, &mut v);
        }
        while !v.is_empty() {
            if v.len() == 1 {
                return UniPoly::one();
            }
            let r = pseudo_rem(u, &v);
            u = v;
            v = primitive_part(r);
        }
        UniPoly::from_bigints(u).monic()
    }
}

fn trim_ints(v: &mut Vec<BigInt>) {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

fn primitive_part(mut v: Vec<BigInt>) -> Vec<BigInt> {
    trim_ints(&mut v);
    let Some(lc) = v.last() else { return v };
    let mut g = v.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if lc.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for c in v.iter_mut() {
            *c = &*c / &g;
        }
    }
    v
}

/// Remainder of `lc(v)^k · u` on division by `v`, reduced by content as it goes.
fn pseudo_rem(mut u: Vec<BigInt>, v: &[BigInt]) -> Vec<BigInt> {
    let dv = v.len() - 1;
    let lv = &v[dv];
    trim_ints(&mut u);
    while u.len() > dv {
        let du = u.len() - 1;
        let lu = u[du].clone();
        let g = lu.gcd(lv);
        let mu = lv / &g;
        let mv = &lu / &g;
        for c in u.iter_mut() {
            *c *= &mu;
        }
        for (j, c) in v.iter().enumerate() {
            if !c.is_zero() {
                u[du - dv + j] -= &mv * c;
            }
        }
        debug_assert!(u[du].is_zero());
        trim_ints(&mut u);
    }
    u
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c += s;
        }
        UniPoly::from_coeffs(coeffs)
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect();
        UniPoly::from_coeffs(coeffs)
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        UniPoly::from_coeffs(coeffs)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Renders in decreasing powers, e.g. `2*x^3 - x + 1/2`.
impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (i, abs.is_one()) {
                (0, _) => write!(f, "{abs}")?,
                (_, true) => {}
                (_, false) => write!(f, "{abs}*")?,
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::from_ints(c)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn trims_and_degree() {
        assert_eq!(p(&[1, 2, 0, 0]).degree(), Some(1));
        assert_eq!(p(&[0, 0]).degree(), None);
        assert!(p(&[0]).is_zero());
        assert_eq!(p(&[0, 0, 3]).valuation(), Some(2));
    }

    #[test]
    fn arithmetic() {
        let a = p(&[1, 1]);
        let b = p(&[1, -1]);
        assert_eq!(&a * &b, p(&[1, 0, -1]));
        assert_eq!(&a + &b, p(&[2]));
        assert_eq!(&a - &a, UniPoly::zero());
        assert_eq!(p(&[1, 2, 3]).derivative(), p(&[2, 6]));
        assert_eq!(p(&[1, 2, 3]).eval(&q(1, 2)), q(11, 4));
    }

    #[test]
    fn division() {
        let (quo, rem) = p(&[-1, 0, 1]).div_rem(&p(&[-1, 1]));
        assert_eq!(quo, p(&[1, 1]));
        assert!(rem.is_zero());
        let (quo, rem) = p(&[1, 0, 1]).div_rem(&p(&[0, 2]));
        assert_eq!(quo, UniPoly::from_coeffs(vec![q(0, 1), q(1, 2)]));
        assert_eq!(rem, p(&[1]));
    }

    #[test]
    fn gcd_is_monic() {
        let a = &p(&[-1, 1]) * &p(&[2, 3]);
        let b = &p(&[-1, 1]) * &p(&[5, 0, 7]);
        assert_eq!(a.gcd(&b), p(&[-1, 1]));
        assert_eq!(p(&[0, 4]).gcd(&p(&[0, 0, 6])), p(&[0, 1]));
        assert!(p(&[1, 1]).gcd(&p(&[1, 2])).is_one());
        assert_eq!(UniPoly::zero().gcd(&p(&[2, 4])), UniPoly::from_coeffs(vec![q(1, 2), q(1, 1)]));
    }

    #[test]
    fn gcd_with_rational_inputs() {
        let f = UniPoly::from_coeffs(vec![q(1, 3), q(-2, 5), q(1, 1)]);
        let a = &f * &p(&[3, -1, 4]);
        let b = &f * &UniPoly::from_coeffs(vec![q(7, 2), q(1, 9)]);
        assert_eq!(a.gcd(&b), f.monic());
    }

    #[test]
    fn display() {
        assert_eq!(p(&[1, -1, 0, 2]).to_string(), "2*x^3 - x + 1");
        assert_eq!(UniPoly::from_coeffs(vec![q(-1, 2)]).to_string(), "-1/2");
        assert_eq!(UniPoly::zero().to_string(), "0");
    }
}
