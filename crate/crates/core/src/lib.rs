//! Exact stabilizer Rényi and Shannon-Rényi entropies of free-fermion Gaussian
//! states, computed from sums of powers of minors and Pfaffians.

pub mod cli;
pub mod entropy;
pub mod error;
pub mod identities;
pub mod matrix;
pub mod minors;
pub mod models;
pub mod scaling;

pub use error::{Error, Result};
