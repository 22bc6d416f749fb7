//! Evaluates several inequalities for one potential and prints the reports.

use ltlab::constants::{ConstantMode, ConstantTable};
use ltlab::discretize::{GridSpec, KineticKind, PotentialSpec, PotentialTerm};
use ltlab::eigensolve::FilterPolicy;
use ltlab::inequalities::{InequalityRequest, Which};
use ltlab::pipeline::Pipeline;
use num_complex::Complex64;

fn main() -> ltlab::Result<()> {
    let grid = GridSpec::dirichlet(1, 16.0, 600)?;
    let spec = PotentialSpec::new(
        1,
        vec![
            PotentialTerm::gaussian(Complex64::new(-4.0, 3.0), &[-1.0], &[0.7]),
            PotentialTerm::gaussian(Complex64::new(-2.0, -1.0), &[1.5], &[1.2]),
        ],
    );
    let out = Pipeline::new(grid, KineticKind::Laplacian, FilterPolicy::with_stability()).run(&spec)?;
    let table = ConstantTable::default();
    let requests = [
        InequalityRequest::new(Which::Thm1I, 1.5),
        InequalityRequest::new(Which::Thm1Ii, 1.0)
            .kappa(1.0)
            .mode(ConstantMode::scaled_default()),
        InequalityRequest::new(Which::CorI, 2.0).refined(true),
        InequalityRequest::new(Which::Lemma, 1.0).alpha(-1.0),
        InequalityRequest::new(Which::Davies2, 1.0),
    ];
    for req in &requests {
        let r = out.check(req, &table)?;
        println!(
            "{:<8} gamma {:<4} lhs {:>10.5} rhs {:>10.5} ratio {:.4} {}",
            req.which.as_str(),
            req.gamma,
            r.lhs,
            r.rhs,
            r.ratio,
            if r.satisfied { "ok" } else { "VIOLATED" }
        );
    }
    Ok(())
}
