//! Factorial-moment series from either backend, and what is built on them:
//! per-size moment tables and limit estimates.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::family::FamilySpec;
use crate::momentgf::derive_all;
use crate::series::{solve_numeric_fe, TruncatedSeries};
use crate::stats::{geometric_grid, limit_estimate, limit_target, FitConfig, LimitEstimate, MomentTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Backend {
    /// Closed forms in `x` and `f`, then series expansion.
    Symbolic,
    /// Direct solution of the bivariate functional equation.
    Numeric,
    /// Symbolic, falling back to numeric if the field computation fails.
    #[default]
    Auto,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Symbolic => "symbolic",
            Backend::Numeric => "numeric",
            Backend::Auto => "auto",
        })
    }
}

impl FromStr for Backend {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "symbolic" => Ok(Backend::Symbolic),
            "numeric" => Ok(Backend::Numeric),
            "auto" => Ok(Backend::Auto),
            other => Err(Error::InvalidConfig(format!("unknown backend {other:?}"))),
        }
    }
}

/// Generating functions of `F_0(n)..F_k(n)` for one family.
#[derive(Clone, Debug)]
pub struct MomentSeries {
    pub family: FamilySpec,
    /// The backend that produced the series (never `Auto`).
    pub backend: Backend,
    /// Why `Auto` fell back to the numeric backend.
    pub fallback: Option<Error>,
    /// `series[r]` generates `F_r(n)`.
    pub series: Vec<TruncatedSeries>,
}

impl MomentSeries {
    pub fn order(&self) -> usize {
        self.series[0].order()
    }

    pub fn k(&self) -> usize {
        self.series.len() - 1
    }

    /// `f_n`, the number of trees with `n` vertices.
    pub fn count(&self, n: usize) -> BigInt {
        integral(&self.series[0].coeff(n))
    }

    pub fn supported(&self, n: usize) -> bool {
        n <= self.order() && !self.series[0].coeff(n).is_zero()
    }

    pub fn factorial_at(&self, n: usize) -> Vec<BigInt> {
        self.series.iter().map(|s| integral(&s.coeff(n))).collect()
    }

    /// `None` when no tree has `n` vertices.
    pub fn table(&self, n: usize, digits: u32) -> Result<Option<MomentTable>> {
        if !self.supported(n) {
            return Ok(None);
        }
        MomentTable::from_factorial_moments(&self.family, n, self.factorial_at(n), digits).map(Some)
    }
}

fn integral(q: &BigRational) -> BigInt {
    debug_assert!(q.is_integer(), "moment numerators are integers");
    q.to_integer()
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Numeric backend: `F_r = r!·[z^r] G`.
pub fn numeric_moment_series(spec: &FamilySpec, k: usize, order: usize) -> Vec<TruncatedSeries> {
    solve_numeric_fe(spec, order, k)
        .into_iter()
        .enumerate()
        .map(|(r, c)| c.scale(&BigRational::from_integer(factorial(r))))
        .collect()
}

pub fn symbolic_moment_series(spec: &FamilySpec, k: usize, order: usize) -> Result<Vec<TruncatedSeries>> {
    derive_all(spec, k)?.series(order)
}

pub fn factorial_moment_series(
    spec: &FamilySpec,
    k: usize,
    order: usize,
    backend: Backend,
) -> Result<MomentSeries> {
    let (used, fallback, series) = match backend {
        Backend::Numeric => (Backend::Numeric, None, numeric_moment_series(spec, k, order)),
        Backend::Symbolic => (Backend::Symbolic, None, symbolic_moment_series(spec, k, order)?),
        Backend::Auto => match symbolic_moment_series(spec, k, order) {
            Ok(s) => (Backend::Symbolic, None, s),
            Err(e @ Error::ReducibleModulus { .. }) => {
                (Backend::Numeric, Some(e), numeric_moment_series(spec, k, order))
            }
            Err(e) => return Err(e),
        },
    };
    Ok(MomentSeries {
        family: spec.clone(),
        backend: used,
        fallback,
        series,
    })
}

/// Which sizes to sample for the limit fit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridConfig {
    /// Smallest size considered; `None` means `order / 16`.
    pub min_n: Option<usize>,
    pub samples: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            min_n: None,
            samples: 16,
        }
    }
}

impl GridConfig {
    pub fn sizes(&self, series: &MomentSeries) -> Vec<usize> {
        let max_n = series.order();
        let min_n = self.min_n.unwrap_or(max_n / 16).max(1);
        geometric_grid(min_n, max_n, self.samples, |n| series.supported(n))
    }
}

/// Samples `α_i(n)` for every `i` in `moments` on the grid and extrapolates.
pub fn estimate_limits(
    series: &MomentSeries,
    moments: &[usize],
    grid: &GridConfig,
    fit: &FitConfig,
) -> Result<Vec<LimitEstimate>> {
    if let Some(&i) = moments.iter().find(|&&i| i < 3 || i > series.k()) {
        return Err(Error::InvalidConfig(format!(
            "scaled moment {i} outside 3..={}",
            series.k()
        )));
    }
    let sizes = grid.sizes(series);
    let mut tables = Vec::with_capacity(sizes.len());
    for &n in &sizes {
        let table = series.table(n, fit.digits)?.expect("grid only holds supported sizes");
        if table.degenerate {
            return Err(Error::DegenerateDistribution);
        }
        tables.push(table);
    }
    moments
        .iter()
        .map(|&i| {
            let samples: Vec<_> = tables
                .iter()
                .map(|t| (t.n, t.alpha(i).expect("alpha computed up to k").clone()))
                .collect();
            limit_estimate(i, &samples, limit_target(i), fit)
        })
        .collect()
}
