//! Fixed-point decimals backed by big integers.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// `mantissa · 10^{−scale}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Decimal {
    mantissa: BigInt,
    scale: u32,
}

fn pow10(e: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), e as usize)
}

/// Rounds `num/den` to the nearest integer, ties away from zero.
fn round_div(num: &BigInt, den: &BigInt) -> BigInt {
    let (q, r) = num.div_mod_floor(den);
    let twice = &r * BigInt::from(2);
    match twice.cmp(den) {
        Ordering::Less => q,
        Ordering::Greater => q + 1,
        Ordering::Equal => {
            if num.is_negative() {
                q
            } else {
                q + 1
            }
        }
    }
}

impl Decimal {
    pub fn zero(scale: u32) -> Self {
        Decimal {
            mantissa: BigInt::zero(),
            scale,
        }
    }

    /// Nearest decimal with `digits` fractional digits.
    pub fn from_rational(r: &BigRational, digits: u32) -> Self {
        let num = r.numer() * pow10(digits);
        Decimal {
            mantissa: round_div(&num, r.denom()),
            scale: digits,
        }
    }

    /// `sqrt(r)` to `digits` fractional digits, `r ≥ 0`, correctly rounded.
    pub fn sqrt_rational(r: &BigRational, digits: u32) -> Self {
        assert!(!r.is_negative(), "square root of a negative number");
        if let Some(exact) = exact_sqrt(r) {
            return Self::from_rational(&exact, digits);
        }
        // floor(sqrt(r·10^{2(digits+1)})) then round the extra digit
        let extra = digits + 1;
        let scaled = r.numer() * pow10(2 * extra) / r.denom();
        let root = scaled.sqrt();
        Decimal {
            mantissa: round_div(&root, &BigInt::from(10)),
            scale: digits,
        }
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.mantissa.clone(), pow10(self.scale))
    }

    pub fn to_f64(&self) -> f64 {
        self.to_rational().to_f64().unwrap_or(f64::NAN)
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn signum(&self) -> i32 {
        match self.mantissa.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Decimal {
            mantissa: self.mantissa.abs(),
            scale: self.scale,
        }
    }
}

/// `Some(q)` with `q² = r` when `r` is the square of a rational.
pub fn exact_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| BigRational::new(n, d))
}

impl PartialOrd for Decimal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Decimal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.to_rational().cmp(&other.to_rational())
    }
}

impl fmt::Display for Decimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = self.mantissa.abs().to_string();
        let scale = self.scale as usize;
        let sign = if self.mantissa.is_negative() { "-" } else { "" };
        if scale == 0 {
            return write!(f, "{sign}{digits}");
        }
        let padded = if digits.len() <= scale {
            format!("{}{}", "0".repeat(scale + 1 - digits.len()), digits)
        } else {
            digits
        };
        let (int, frac) = padded.split_at(padded.len() - scale);
        write!(f, "{sign}{int}.{frac}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseDecimalError(pub String);

impl fmt::Display for ParseDecimalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid decimal {:?}", self.0)
    }
}

impl std::error::Error for ParseDecimalError {}

impl FromStr for Decimal {
    type Err = ParseDecimalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseDecimalError(s.to_string());
        let t = s.trim();
        let (neg, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t.strip_prefix('+').unwrap_or(t)),
        };
        let (int, frac) = body.split_once('.').unwrap_or((body, ""));
        if int.is_empty() && frac.is_empty() {
            return Err(err());
        }
        if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        let digits = format!("{int}{frac}");
        let mut mantissa: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().map_err(|_| err())?
        };
        if neg {
            mantissa = -mantissa;
        }
        Ok(Decimal {
            mantissa,
            scale: frac.len() as u32,
        })
    }
}

impl From<&Decimal> for BigRational {
    fn from(d: &Decimal) -> Self {
        d.to_rational()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rounding_and_rendering() {
        assert_eq!(Decimal::from_rational(&q(1, 3), 5).to_string(), "0.33333");
        assert_eq!(Decimal::from_rational(&q(2, 3), 3).to_string(), "0.667");
        assert_eq!(Decimal::from_rational(&q(-3, 2), 2).to_string(), "-1.50");
        assert_eq!(Decimal::from_rational(&q(-1, 200), 2).to_string(), "-0.01");
        assert_eq!(Decimal::from_rational(&q(7, 1), 0).to_string(), "7");
    }

    #[test]
    fn square_roots() {
        assert_eq!(Decimal::sqrt_rational(&q(2, 1), 20).to_string(), "1.41421356237309504880");
        assert_eq!(Decimal::sqrt_rational(&q(16, 25), 3).to_string(), "0.800");
        assert_eq!(exact_sqrt(&q(9, 4)), Some(q(3, 2)));
        assert_eq!(exact_sqrt(&q(2, 1)), None);
    }

    #[test]
    fn parse_round_trip() {
        for s in ["0.7005665293596503", "-1.5", "1460.7011342971821", "12", "0.000"] {
            let d: Decimal = s.parse().unwrap();
            assert_eq!(d.to_string(), s);
        }
        assert!("1.2.3".parse::<Decimal>().is_err());
        assert!("abc".parse::<Decimal>().is_err());
        assert_eq!(".5".parse::<Decimal>().unwrap().to_rational(), q(1, 2));
    }
}
