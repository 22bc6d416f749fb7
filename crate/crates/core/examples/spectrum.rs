//! Spectrum of a complex Gaussian well, split into genuine eigenvalues and
//! discretized continuum.

use ltlab::discretize::{GridSpec, KineticKind, PotentialSpec, PotentialTerm};
use ltlab::eigensolve::FilterPolicy;
use ltlab::pipeline::Pipeline;
use num_complex::Complex64;

fn main() -> ltlab::Result<()> {
    let grid = GridSpec::dirichlet(1, 16.0, 600)?;
    let well = PotentialTerm::gaussian(Complex64::new(-5.0, 2.0), &[0.0], &[1.0]);
    let spec = PotentialSpec::new(1, vec![well]);
    let out = Pipeline::new(grid, KineticKind::Laplacian, FilterPolicy::with_stability()).run(&spec)?;
    println!(
        "{} eigenvalues, {} kept:",
        out.spectrum.values.len(),
        out.filtered.kept.len()
    );
    for z in &out.filtered.kept {
        println!("  {:.6} {:+.6}i", z.re, z.im);
    }
    Ok(())
}
