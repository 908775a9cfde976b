//! Reductions from branching-program satisfiability to LCS-type sequence
//! problems, together with the solvers and brute-force oracles needed to
//! check them.

pub mod barrington;
pub mod bp;
pub mod direct;
pub mod framework;
pub mod measures;
mod error;

pub use error::{Error, Result};
