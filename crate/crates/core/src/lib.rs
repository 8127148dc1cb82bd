//! Numerical margins for the coefficient inequality
//! `|A_{2n−1}(α, β, x)| ≤ A_{2n−1}(α, β, 1)` on the unit circle.

pub mod cli;
pub mod error;
pub mod inequalities;
pub mod integral_rep;
pub mod quadrature;
pub mod scanner;
pub mod series;
pub mod sum;

pub use error::{Error, Result};
