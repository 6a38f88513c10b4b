//! Limiting scaled moments and their estimation from finite-`n` samples.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::decimal::Decimal;
use crate::error::{Error, Result};

/// Limits of `α_3..α_9` for the area under a Brownian excursion. With
/// `w = 10 − 3π`:
///
/// ```text
/// α_3 = (6π − 75/4)·√3·√(π/w) / w
/// α_4 = (−189π² + 315π + 884) / (7w²)
/// α_5 = (36π² + 75π/2 − 105845/224)·√3·√(π/w) / w²
/// α_6 = (15/16016)·(−144144π³ − 720720π² + 3013725π + 2120320) / w³
/// α_7 = (162π³ + 6615π²/4 − 103965π/32 − 101897475/9152)·√3·√(π/w) / w³
/// α_8 = (3/2586584)·(−488864376π⁴ − 8147739600π³ − 455885430π²
///        + 86568885375π + 32820007040) / w⁴
/// α_9 = (648π⁴ + 15795π³ + 591867π²/16 − 461286225π/2288
///        − 188411947088175/662165504)·√3·√(π/w) / w⁴
/// ```
///
/// The decimal strings are the reference values used for comparison.
pub const LIMIT_TARGETS: [(usize, &str); 7] = [
    (3, "0.7005665293596503"),
    (4, "3.560394897132889"),
    (5, "7.2563753582799571"),
    (6, "27.685525695770609"),
    (7, "90.0171829093603301"),
    (8, "358.80904151261251"),
    (9, "1460.7011342971821"),
];

pub fn limit_target(i: usize) -> Option<Decimal> {
    LIMIT_TARGETS
        .iter()
        .find(|(j, _)| *j == i)
        .map(|(_, s)| s.parse().expect("valid literal"))
}

/// Correction terms fitted alongside the limit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitModel {
    /// `α(n) ≈ α(∞) + a·n^{−1/2}`
    OneTerm,
    /// `α(n) ≈ α(∞) + a·n^{−1/2} + b·n^{−1}`
    #[default]
    TwoTerm,
}

impl FitModel {
    pub fn parameters(self) -> usize {
        match self {
            FitModel::OneTerm => 2,
            FitModel::TwoTerm => 3,
        }
    }
}

impl fmt::Display for FitModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FitModel::OneTerm => "one-term",
            FitModel::TwoTerm => "two-term",
        })
    }
}

impl FromStr for FitModel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "one-term" => Ok(FitModel::OneTerm),
            "two-term" => Ok(FitModel::TwoTerm),
            other => Err(Error::InvalidConfig(format!("unknown fit model {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitConfig {
    pub model: FitModel,
    /// Fraction of the samples, taken from the largest `n`, used by the fit.
    pub window: f64,
    /// Fractional decimal digits carried through the fit.
    pub digits: u32,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            model: FitModel::TwoTerm,
            window: 0.5,
            digits: 30,
        }
    }
}

pub const MIN_SAMPLES: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitEstimate {
    pub i: usize,
    pub samples: Vec<(usize, Decimal)>,
    pub extrapolated: Decimal,
    pub target: Option<Decimal>,
    /// Root-mean-square residual of the fit over its window.
    pub residual: Decimal,
    /// Number of samples the fit used.
    pub window: usize,
    pub method: String,
}

impl LimitEstimate {
    pub fn abs_error(&self) -> Option<Decimal> {
        let t = self.target.as_ref()?;
        let diff = (self.extrapolated.to_rational() - t.to_rational()).abs();
        Some(Decimal::from_rational(&diff, self.extrapolated.scale()))
    }

    pub fn to_record(&self) -> LimitRecord {
        LimitRecord {
            i: self.i,
            samples: self
                .samples
                .iter()
                .map(|(n, a)| (*n, a.to_string()))
                .collect(),
            extrapolated: self.extrapolated.to_string(),
            target: self.target.as_ref().map(ToString::to_string),
            abs_error: self.abs_error().map(|d| d.to_string()),
            residual: self.residual.to_string(),
            method: self.method.clone(),
        }
    }
}

/// Serialized form of a [`LimitEstimate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimitRecord {
    pub i: usize,
    pub samples: Vec<(usize, String)>,
    pub extrapolated: String,
    pub target: Option<String>,
    pub abs_error: Option<String>,
    pub residual: String,
    pub method: String,
}

/// Fits `α_i(n)` against the configured correction model over the
/// largest-`n` part of the samples and reports the fitted constant term.
///
/// The window holds `ceil(window·len)` samples but never fewer than the
/// model has parameters.
pub fn limit_estimate(
    i: usize,
    samples: &[(usize, Decimal)],
    target: Option<Decimal>,
    config: &FitConfig,
) -> Result<LimitEstimate> {
    if samples.len() < MIN_SAMPLES {
        return Err(Error::InsufficientSamples {
            needed: MIN_SAMPLES,
            got: samples.len(),
        });
    }
    if samples.windows(2).any(|w| w[0].0 >= w[1].0) {
        return Err(Error::InvalidSamples("sample sizes must be strictly increasing".into()));
    }
    if samples[0].0 == 0 {
        return Err(Error::InvalidSamples("sample size 0".into()));
    }
    if !(config.window > 0.0 && config.window <= 1.0) {
        return Err(Error::InvalidConfig(format!("fit window {} not in (0, 1]", config.window)));
    }
    let p = config.model.parameters();
    let wanted = (config.window * samples.len() as f64).ceil() as usize;
    let count = wanted.max(p).min(samples.len());
    let used = &samples[samples.len() - count..];

    let basis_digits = config.digits + 10;
    let rows: Vec<Vec<BigRational>> = used
        .iter()
        .map(|(n, _)| {
            let inv_n = BigRational::new(1.into(), (*n).into());
            let mut row = vec![BigRational::one(), Decimal::sqrt_rational(&inv_n, basis_digits).to_rational()];
            if p == 3 {
                row.push(inv_n);
            }
            row
        })
        .collect();
    let ys: Vec<BigRational> = used.iter().map(|(_, a)| a.to_rational()).collect();
    let beta = least_squares(&rows, &ys)?;

    let sq_sum = rows
        .iter()
        .zip(&ys)
        .map(|(row, y)| {
            let fit: BigRational = row.iter().zip(&beta).map(|(a, b)| a * b).sum();
            let r = y - fit;
            &r * &r
        })
        .fold(BigRational::zero(), |a, b| a + b);
    let mean_sq = sq_sum / BigRational::from_integer(count.into());

    Ok(LimitEstimate {
        i,
        samples: samples.to_vec(),
        extrapolated: Decimal::from_rational(&beta[0], config.digits),
        target,
        residual: Decimal::sqrt_rational(&mean_sq, config.digits),
        window: count,
        method: format!("least-squares {} over largest {count} of {} samples", config.model, samples.len()),
    })
}

/// Solves the normal equations exactly.
fn least_squares(rows: &[Vec<BigRational>], ys: &[BigRational]) -> Result<Vec<BigRational>> {
    let p = rows[0].len();
    let mut a = vec![vec![BigRational::zero(); p + 1]; p];
    for (row, y) in rows.iter().zip(ys) {
        for r in 0..p {
            for c in 0..p {
                a[r][c] += &row[r] * &row[c];
            }
            a[r][p] += &row[r] * y;
        }
    }
    for col in 0..p {
        let pivot = (col..p)
            .find(|&r| !a[r][col].is_zero())
            .ok_or_else(|| Error::InvalidSamples("singular least-squares system".into()))?;
        a.swap(col, pivot);
        let inv = a[col][col].recip();
        for v in &mut a[col][col..] {
            *v = &*v * &inv;
        }
        let pivot_row = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let factor = row[col].clone();
                for (v, pv) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *v -= &factor * pv;
                }
            }
        }
    }
    Ok(a.into_iter().map(|row| row[p].clone()).collect())
}

/// About `count` sizes spaced geometrically between `min_n` and `max_n`,
/// each moved down to the nearest supported size. Duplicates collapse.
pub fn geometric_grid(min_n: usize, max_n: usize, count: usize, supported: impl Fn(usize) -> bool) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    if count == 0 || min_n == 0 || min_n > max_n {
        return out;
    }
    let ratio = if count > 1 {
        (max_n as f64 / min_n as f64).powf(1.0 / (count - 1) as f64)
    } else {
        1.0
    };
    for j in 0..count {
        let ideal = if j + 1 == count {
            max_n
        } else {
            ((min_n as f64) * ratio.powi(j as i32)).round() as usize
        };
        let mut n = ideal.clamp(min_n, max_n);
        while n >= min_n && !supported(n) {
            n -= 1;
        }
        if n >= min_n && supported(n) && out.last() != Some(&n) && out.last().is_none_or(|&l| l < n) {
            out.push(n);
        }
    }
    out
}
