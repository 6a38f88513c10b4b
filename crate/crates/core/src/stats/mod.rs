//! From factorial-moment numerators to means, central moments and scaled
//! moments, plus estimation of their `n → ∞` limits.
//!
//! Everything up to the central moments is exact. Scaled moments and the
//! extrapolation use fixed-point decimals with a configurable number of
//! fractional digits.

mod decimal;
mod limits;
mod moments;

pub use decimal::{exact_sqrt, Decimal, ParseDecimalError};
pub use limits::{
    geometric_grid, limit_estimate, limit_target, FitConfig, FitModel, LimitEstimate, LimitRecord,
    LIMIT_TARGETS, MIN_SAMPLES,
};
pub use moments::{
    alpha_coefficients, central_moments, factorial_to_raw, stirling2, MomentTable, TableRecord,
};
