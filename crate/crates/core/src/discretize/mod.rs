//! Lattice discretization of `-Δ + V` and `|p| + V`.

mod grid;
mod operator;
mod potential;

pub use grid::{Boundary, GridSpec, DEFAULT_MAX_DIMENSION};
pub use operator::{build_operator, hermitian_combination, Kinetic, KineticKind, OperatorMatrix, SymmetricMatrix};
pub use potential::{
    potential_integral, sample_potential, IntegralPart, PotentialSpec, PotentialTerm, SampledPotential,
};
