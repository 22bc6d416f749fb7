//! Exact square-well eigenvalues next to a grid solve of the same well.

use ltlab::discretize::{GridSpec, KineticKind, PotentialSpec, PotentialTerm};
use ltlab::eigensolve::FilterPolicy;
use ltlab::oracles::{delta_eigenvalue, square_well_eigenvalues, WellSpec};
use ltlab::pipeline::Pipeline;
use num_complex::Complex64;

fn main() -> ltlab::Result<()> {
    let depth = Complex64::new(3.0, 2.0);
    let roots = square_well_eigenvalues(&WellSpec::new(depth, 1.0)?, 8)?;
    let spec = PotentialSpec::new(
        1,
        vec![PotentialTerm::boxed(-depth, &[0.0], &[1.0]).with_cell_average()],
    );
    let out = Pipeline::new(
        GridSpec::dirichlet(1, 20.0, 2000)?,
        KineticKind::Laplacian,
        FilterPolicy::with_stability(),
    )
    .run(&spec)?;
    for r in &roots {
        let nearest = out
            .filtered
            .kept
            .iter()
            .copied()
            .min_by(|a, b| (a - r.lambda).norm().total_cmp(&(b - r.lambda).norm()));
        println!("{:<4} exact {:.6}  grid {:?}", r.branch.as_str(), r.lambda, nearest);
    }
    println!(
        "point interaction c = 2+2i: {}",
        delta_eigenvalue(Complex64::new(2.0, 2.0))?
    );
    Ok(())
}
