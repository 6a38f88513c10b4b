//! Exact arithmetic in ℚ[x], ℚ(x) and the quotient ring ℚ(x)[F]/(Q).

mod field;
mod poly;
mod ratfunc;

pub use field::{FieldElement, FunctionField};
pub use poly::UniPoly;
pub use ratfunc::RatFunc;
