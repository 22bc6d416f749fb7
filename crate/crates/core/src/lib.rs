//! Numerical laboratory for Lieb–Thirring type eigenvalue inequalities for
//! Schrödinger operators with complex potentials.

pub mod constants;
pub mod discretize;
pub mod eigensolve;
pub mod error;
pub mod oracles;

pub use error::{Error, Result};
pub mod cli;
pub mod corpus;
pub mod inequalities;
pub mod io;
pub mod optimizer;
pub mod pipeline;
