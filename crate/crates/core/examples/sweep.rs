//! Largest Thm1_i ratio over single Gaussian wells for several gamma,
//! including one value below the range the theorem covers.

use ltlab::constants::ConstantMode;
use ltlab::discretize::{GridSpec, KineticKind};
use ltlab::eigensolve::FilterPolicy;
use ltlab::inequalities::{InequalityRequest, Which};
use ltlab::optimizer::{gamma_sweep, FamilyKind, FamilySpec, OptimizerConfig};
use ltlab::pipeline::Pipeline;

fn main() -> ltlab::Result<()> {
    let pipeline = Pipeline::new(
        GridSpec::dirichlet(1, 8.0, 399)?,
        KineticKind::Laplacian,
        FilterPolicy::with_stability(),
    );
    let config = OptimizerConfig {
        restarts: 2,
        max_evals: 40,
        ..OptimizerConfig::new(pipeline, 7)
    };
    let family = FamilySpec::new(FamilyKind::GaussianSum { terms: 1 }, 1);
    let template = InequalityRequest::new(Which::Thm1I, 1.0).mode(ConstantMode::scaled_default());
    for row in gamma_sweep(&family, &[0.6, 1.0, 1.5, 2.0], &template, &config) {
        println!(
            "gamma {:<4} ratio {:?} within bound {:?}{}",
            row.gamma,
            row.best_ratio,
            row.within_bound,
            if row.conjectural {
                " (outside the proven range)"
            } else {
                ""
            }
        );
    }
    Ok(())
}
