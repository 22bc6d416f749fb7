//! Searches narrow wells of fixed strength for the largest Davies ratio,
//! which approaches 1 as the well shrinks to a point interaction.

use ltlab::discretize::{GridSpec, KineticKind};
use ltlab::eigensolve::FilterPolicy;
use ltlab::inequalities::{InequalityRequest, Which};
use ltlab::optimizer::{maximize_ratio, FamilySpec, OptimizerConfig};
use ltlab::pipeline::Pipeline;
use num_complex::Complex64;

fn main() -> ltlab::Result<()> {
    let pipeline = Pipeline::new(
        GridSpec::dirichlet(1, 8.0, 399)?,
        KineticKind::Laplacian,
        FilterPolicy::with_stability(),
    );
    let config = OptimizerConfig {
        restarts: 3,
        max_evals: 60,
        ..OptimizerConfig::new(pipeline, 42)
    };
    let family = FamilySpec::delta_like(Complex64::new(4.0, 0.0));
    let result = maximize_ratio(&family, &InequalityRequest::new(Which::Davies2, 1.0), &config)?;
    println!(
        "best ratio {:.5} at half width {:.4} after {} evaluations",
        result.best_ratio, result.best_params[0], result.eval_count
    );
    Ok(())
}
