//! Exact moments of the total height of degree-restricted ordered rooted trees.

pub mod algebra;
pub mod cli;
pub mod error;
pub mod family;
pub mod momentgf;
pub mod oracle;
pub mod pipeline;
pub mod series;
pub mod stats;

pub use error::{Error, Result};
pub use family::FamilySpec;
