//! Degree sets and the polynomials attached to them.
//!
//! A family of ordered rooted trees is fixed by the set `S` of allowed
//! child counts. Its counting series `f(x)` is the power-series root with
//! `f(0) = 0` of `Q(x, F) = x·P(F) − F`, where `P(X) = 1 + Σ_{i∈S} X^i`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::algebra::UniPoly;
use crate::error::{Error, Result};

/// A validated degree set, stored sorted ascending.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FamilySpec {
    degrees: Arc<[u32]>,
}

impl FamilySpec {
    pub fn new<I>(degrees: I) -> Result<Self>
    where
        I: IntoIterator<Item = i64>,
    {
        validate_family(degrees)
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    /// `d = max(S)`, the F-degree of the defining polynomial.
    pub fn max_degree(&self) -> usize {
        *self.degrees.last().expect("nonempty by construction") as usize
    }

    pub fn contains(&self, i: usize) -> bool {
        self.degrees.iter().any(|&d| d as usize == i)
    }
}

impl fmt::Debug for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S{:?}", &*self.degrees)
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.degrees.iter().map(|d| d.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    /// Parses a comma-separated list such as `1,2`.
    fn from_str(s: &str) -> Result<Self> {
        let mut out = Vec::new();
        for part in s.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let v: i64 = part
                .parse()
                .map_err(|_| Error::InvalidDegreeList(s.to_string()))?;
            out.push(v);
        }
        validate_family(out)
    }
}

/// Checks a raw degree list and builds the canonical [`FamilySpec`].
/// Duplicates collapse.
pub fn validate_family<I>(degrees: I) -> Result<FamilySpec>
where
    I: IntoIterator<Item = i64>,
{
    let mut out = Vec::new();
    for d in degrees {
        if d <= 0 || d > u32::MAX as i64 {
            return Err(Error::NonPositiveDegree(d));
        }
        out.push(d as u32);
    }
    if out.is_empty() {
        return Err(Error::EmptyDegreeSet);
    }
    out.sort_unstable();
    out.dedup();
    Ok(FamilySpec {
        degrees: out.into(),
    })
}

/// `P(X) = 1 + Σ_{i∈S} X^i`.
pub fn char_poly(spec: &FamilySpec) -> UniPoly {
    let mut coeffs = vec![0i64; spec.max_degree() + 1];
    coeffs[0] = 1;
    for &i in spec.degrees() {
        coeffs[i as usize] = 1;
    }
    UniPoly::from_ints(&coeffs)
}

/// A polynomial in `F` whose coefficients are polynomials in `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivariatePoly {
    /// `coeffs[j]` is the coefficient of `F^j`.
    pub coeffs: Vec<UniPoly>,
}

impl BivariatePoly {
    pub fn degree_in_f(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Substitutes a value for `x`, giving a polynomial in `F`.
    pub fn eval_x(&self, x: &num_rational::BigRational) -> UniPoly {
        UniPoly::from_coeffs(self.coeffs.iter().map(|c| c.eval(x)).collect())
    }
}

/// `Q = x·P(F) − F` together with its partial derivatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefiningPoly {
    pub q: BivariatePoly,
    /// `Q_x = P(F)`.
    pub q_x: BivariatePoly,
    /// `Q_F = x·P′(F) − 1`.
    pub q_f: BivariatePoly,
}

pub fn defining_poly(spec: &FamilySpec) -> DefiningPoly {
    let p = char_poly(spec);
    let x = UniPoly::x();
    let one = UniPoly::one();

    let mut q: Vec<UniPoly> = p.coeffs().iter().map(|c| x.scale(c)).collect();
    q[1] = &q[1] - &one;

    let q_x: Vec<UniPoly> = p.coeffs().iter().map(|c| UniPoly::constant(c.clone())).collect();

    let dp = p.derivative();
    let mut q_f: Vec<UniPoly> = dp.coeffs().iter().map(|c| x.scale(c)).collect();
    if q_f.is_empty() {
        q_f.push(UniPoly::zero());
    }
    q_f[0] = &q_f[0] - &one;

    DefiningPoly {
        q: BivariatePoly { coeffs: q },
        q_x: BivariatePoly { coeffs: q_x },
        q_f: BivariatePoly { coeffs: q_f },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(s: &[i64]) -> FamilySpec {
        FamilySpec::new(s.iter().copied()).unwrap()
    }

    #[test]
    fn validation() {
        let s = spec(&[2]);
        assert_eq!(s.degrees(), &[2]);
        assert_eq!(s.max_degree(), 2);
        let s = spec(&[2, 1, 2]);
        assert_eq!(s.degrees(), &[1, 2]);
        assert_eq!(s.max_degree(), 2);
        assert_eq!(FamilySpec::new([]), Err(Error::EmptyDegreeSet));
        assert_eq!(FamilySpec::new([0]), Err(Error::NonPositiveDegree(0)));
        assert_eq!(FamilySpec::new([2, -3]), Err(Error::NonPositiveDegree(-3)));
    }

    #[test]
    fn parse_degree_list() {
        assert_eq!("1,2".parse::<FamilySpec>().unwrap(), spec(&[1, 2]));
        assert_eq!(" 3 ".parse::<FamilySpec>().unwrap(), spec(&[3]));
        assert_eq!("".parse::<FamilySpec>(), Err(Error::EmptyDegreeSet));
        assert_eq!("0".parse::<FamilySpec>(), Err(Error::NonPositiveDegree(0)));
        assert!(matches!("a,2".parse::<FamilySpec>(), Err(Error::InvalidDegreeList(_))));
        assert_eq!(spec(&[2, 1]).to_string(), "{1,2}");
    }

    #[test]
    fn characteristic_polynomials() {
        assert_eq!(char_poly(&spec(&[2])), UniPoly::from_ints(&[1, 0, 1]));
        assert_eq!(char_poly(&spec(&[1, 2])), UniPoly::from_ints(&[1, 1, 1]));
        assert_eq!(char_poly(&spec(&[3])), UniPoly::from_ints(&[1, 0, 0, 1]));
        for s in [vec![1], vec![2, 5], vec![1, 3, 4]] {
            let p = char_poly(&spec(&s));
            let nonzero = p.coeffs().iter().filter(|c| !num_traits::Zero::is_zero(*c)).count();
            assert_eq!(nonzero, s.len() + 1);
            assert!(p.coeffs().iter().all(|c| num_traits::Zero::is_zero(c) || num_traits::One::is_one(c)));
        }
    }

    #[test]
    fn binary_defining_polynomial() {
        let dp = defining_poly(&spec(&[2]));
        let x = UniPoly::x();
        // Q = x F² − F + x
        assert_eq!(dp.q.coeffs, vec![x.clone(), UniPoly::from_ints(&[-1]), x.clone()]);
        // Q_x = F² + 1
        assert_eq!(
            dp.q_x.coeffs,
            vec![UniPoly::one(), UniPoly::zero(), UniPoly::one()]
        );
        // Q_F = 2xF − 1
        assert_eq!(
            dp.q_f.coeffs,
            vec![UniPoly::from_ints(&[-1]), UniPoly::from_ints(&[0, 2])]
        );
    }

    #[test]
    fn q_vanishes_at_origin() {
        use num_rational::BigRational;
        use num_traits::Zero;
        for s in [vec![1], vec![2], vec![1, 2], vec![3], vec![2, 4, 7]] {
            let dp = defining_poly(&spec(&s));
            let at_zero = dp.q.eval_x(&BigRational::zero());
            assert!(at_zero.eval(&BigRational::zero()).is_zero());
        }
    }

    #[test]
    fn path_family_root() {
        // S = {1}: Q = x + (x − 1) F, root F = x / (1 − x).
        let dp = defining_poly(&spec(&[1]));
        assert_eq!(dp.q.coeffs, vec![UniPoly::x(), UniPoly::from_ints(&[-1, 1])]);
    }
}
