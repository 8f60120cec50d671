//! Finite populations with strong and weak indistinguishability, their laws,
//! and stochastic representations as point processes on individual laws.

pub mod checks;
pub mod cli;
pub mod combinatorics;
pub mod error;
pub mod laws;
pub mod parametric;
pub mod population;
pub mod representation;

pub use error::{Error, Result};
