use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::decimal::{exact_sqrt, Decimal};
use crate::error::{Error, Result};
use crate::family::FamilySpec;

/// Stirling number of the second kind, `S2(i, r)`.
pub fn stirling2(i: usize, r: usize) -> Result<BigInt> {
    if r > i {
        return Err(Error::IndexOutOfRange { i, r });
    }
    Ok(stirling2_row(i).swap_remove(r))
}

/// `S2(i, 0..=i)` via `S2(i,r) = r·S2(i−1,r) + S2(i−1,r−1)`.
fn stirling2_row(i: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for m in 1..=i {
        let mut next = vec![BigInt::zero(); m + 1];
        for r in 1..=m {
            let keep = if r < m { &row[r] * BigInt::from(r) } else { BigInt::zero() };
            next[r] = keep + &row[r - 1];
        }
        row = next;
    }
    row
}

/// `N_i = Σ_r S2(i, r)·F_r` for every `i` covered by `factorial`.
pub fn factorial_to_raw(factorial: &[BigInt]) -> Vec<BigInt> {
    (0..factorial.len())
        .map(|i| {
            stirling2_row(i)
                .iter()
                .zip(factorial)
                .map(|(s, f)| s * f)
                .sum()
        })
        .collect()
}

fn binomial(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, t| acc * BigInt::from(n - t) / BigInt::from(t + 1))
}

/// Mean and central moments `m_2..m_k` from raw numerators `N_0..N_k`:
/// `m_i = Σ_r (−1)^r C(i,r) μ^r N_{i−r}/N_0`.
pub fn central_moments(raw: &[BigInt], k: usize) -> Result<(BigRational, Vec<BigRational>)> {
    let n0 = raw.first().filter(|n| !n.is_zero()).ok_or(Error::EmptySampleSpace)?;
    let n0 = BigRational::from_integer(n0.clone());
    let mu = if raw.len() > 1 {
        BigRational::from_integer(raw[1].clone()) / &n0
    } else {
        BigRational::zero()
    };
    let mut mu_pow = vec![BigRational::one()];
    for r in 1..=k {
        let next = &mu_pow[r - 1] * &mu;
        mu_pow.push(next);
    }
    let m = (2..=k)
        .map(|i| {
            let mut acc = BigRational::zero();
            for r in 0..=i {
                let term = BigRational::from_integer(binomial(i, r) * &raw[i - r]) * &mu_pow[r] / &n0;
                if r % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        })
        .collect();
    Ok((mu, m))
}

/// `α_i = m_i / m_2^{i/2}` for `i = 3..=k`, given `central = [m_2, .., m_k]`.
pub fn alpha_coefficients(central: &[BigRational], digits: u32) -> Result<Vec<Decimal>> {
    let Some(m2) = central.first() else {
        return Ok(Vec::new());
    };
    if m2.is_zero() {
        return Err(Error::DegenerateDistribution);
    }
    let root = exact_sqrt(m2);
    let mut out = Vec::with_capacity(central.len().saturating_sub(1));
    for (offset, mi) in central.iter().enumerate().skip(1) {
        let i = offset + 2;
        let half = (i / 2) as i32;
        let even_part = num_traits::pow(m2.clone(), half as usize);
        let alpha = if i % 2 == 0 {
            Decimal::from_rational(&(mi / even_part), digits)
        } else if let Some(root) = &root {
            Decimal::from_rational(&(mi / (even_part * root)), digits)
        } else {
            // |α|² = m_i² / m_2^i, sign taken from m_i
            let sq = mi * mi / (&even_part * &even_part * m2);
            let mag = Decimal::sqrt_rational(&sq, digits);
            if mi.is_negative() {
                Decimal::from_rational(&-mag.to_rational(), digits)
            } else {
                mag
            }
        };
        out.push(alpha);
    }
    Ok(out)
}

/// Exact statistics of the total height over the trees of one size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentTable {
    pub family: FamilySpec,
    pub n: usize,
    /// `f_n = N_0 = F_0`.
    pub f_n: BigInt,
    pub factorial: Vec<BigInt>,
    pub raw: Vec<BigInt>,
    pub mu: BigRational,
    /// `m_2..m_k`.
    pub central: Vec<BigRational>,
    /// `α_3..α_k`; empty when the distribution is degenerate.
    pub alpha: Vec<Decimal>,
    pub degenerate: bool,
}

impl MomentTable {
    /// Builds the table from `F_0(n)..F_k(n)`.
    pub fn from_factorial_moments(
        family: &FamilySpec,
        n: usize,
        factorial: Vec<BigInt>,
        digits: u32,
    ) -> Result<Self> {
        let k = factorial.len().saturating_sub(1);
        let raw = factorial_to_raw(&factorial);
        let (mu, central) = central_moments(&raw, k)?;
        let (alpha, degenerate) = match alpha_coefficients(&central, digits) {
            Ok(a) => (a, false),
            Err(Error::DegenerateDistribution) => (Vec::new(), true),
            Err(e) => return Err(e),
        };
        Ok(MomentTable {
            family: family.clone(),
            n,
            f_n: raw[0].clone(),
            factorial,
            raw,
            mu,
            central,
            alpha,
            degenerate,
        })
    }

    /// `α_i`, if computed.
    pub fn alpha(&self, i: usize) -> Option<&Decimal> {
        i.checked_sub(3).and_then(|j| self.alpha.get(j))
    }

    pub fn to_record(&self) -> TableRecord {
        TableRecord {
            family: self.family.degrees().to_vec(),
            n: self.n,
            f_n: self.f_n.to_string(),
            mu: self.mu.to_string(),
            m: self.central.iter().map(|m| m.to_string()).collect(),
            alpha: self.alpha.iter().map(|a| a.to_string()).collect(),
            notice: self
                .degenerate
                .then(|| Error::DegenerateDistribution.to_string()),
        }
    }
}

/// Serialized form of a [`MomentTable`]; every numeral is a string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRecord {
    pub family: Vec<u32>,
    pub n: usize,
    pub f_n: String,
    pub mu: String,
    pub m: Vec<String>,
    pub alpha: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notice: Option<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| x.into()).collect()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn stirling_small_cases() {
        assert_eq!(stirling2(2, 1).unwrap(), 1.into());
        assert_eq!(stirling2(2, 2).unwrap(), 1.into());
        assert_eq!(stirling2(3, 2).unwrap(), 3.into());
        assert_eq!(stirling2(0, 0).unwrap(), 1.into());
        assert_eq!(stirling2(4, 0).unwrap(), 0.into());
        for i in 0..=12 {
            assert_eq!(stirling2(i, i).unwrap(), 1.into());
        }
        assert_eq!(stirling2(2, 3), Err(Error::IndexOutOfRange { i: 2, r: 3 }));
    }

    #[test]
    fn stirling_counts_set_partitions() {
        // brute force: restricted growth strings of length i with exactly r blocks
        fn count(i: usize, r: usize) -> u64 {
            fn go(pos: usize, i: usize, max: usize, r: usize) -> u64 {
                if pos == i {
                    return (max == r) as u64;
                }
                (0..=max).map(|b| go(pos + 1, i, max.max(b + 1), r)).sum()
            }
            if i == 0 {
                return (r == 0) as u64;
            }
            go(1, i, 1, r)
        }
        for i in 0..=8 {
            for r in 0..=i {
                assert_eq!(stirling2(i, r).unwrap(), count(i, r).into(), "S2({i},{r})");
            }
        }
    }

    #[test]
    fn raw_from_factorial() {
        let raw = factorial_to_raw(&ints(&[5, 58, 618]));
        assert_eq!(raw, ints(&[5, 58, 676]));
        assert_eq!(factorial_to_raw(&ints(&[0, 0, 0, 0])), ints(&[0, 0, 0, 0]));
    }

    #[test]
    fn seven_vertex_binary_trees() {
        // heights {12, 12, 12, 12, 10}
        let heights = [12i64, 12, 12, 12, 10];
        let raw: Vec<BigInt> = (0..=4u32).map(|i| heights.iter().map(|h| BigInt::from(*h).pow(i)).sum()).collect();
        let (mu, m) = central_moments(&raw, 4).unwrap();
        assert_eq!(mu, q(58, 5));
        assert_eq!(m[0], q(16, 25));
        assert_eq!(m[1], q(-96, 125));
        let alpha = alpha_coefficients(&m, 30).unwrap();
        assert_eq!(alpha[0].to_rational(), q(-3, 2));
    }

    #[test]
    fn degenerate_and_empty() {
        let (mu, m) = central_moments(&ints(&[1, 10, 100, 1000]), 3).unwrap();
        assert_eq!(mu, q(10, 1));
        assert!(m.iter().all(Zero::is_zero));
        assert_eq!(alpha_coefficients(&m, 30), Err(Error::DegenerateDistribution));
        assert_eq!(central_moments(&ints(&[0, 0]), 1), Err(Error::EmptySampleSpace));
    }

    #[test]
    fn symmetric_toy_moments() {
        let m = vec![q(1, 1), q(0, 1), q(1, 1)];
        let a = alpha_coefficients(&m, 10).unwrap();
        assert_eq!(a[0].to_rational(), q(0, 1));
        assert_eq!(a[1].to_rational(), q(1, 1));
    }

    #[test]
    fn irrational_scaling() {
        // m_2 = 2, m_3 = 1 → α_3 = 1/(2√2)
        let a = alpha_coefficients(&[q(2, 1), q(1, 1)], 25).unwrap();
        assert_eq!(a[0].to_string(), "0.3535533905932737622004222");
        let a = alpha_coefficients(&[q(2, 1), q(-1, 1)], 25).unwrap();
        assert_eq!(a[0].to_string(), "-0.3535533905932737622004222");
    }
}
