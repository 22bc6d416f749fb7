//! Writes the eigenvalue exclusion region of a complex well as a PGM image and
//! reports where the actual eigenvalues fall.

use ltlab::constants::{ConstantMode, ConstantTable};
use ltlab::discretize::{GridSpec, KineticKind, PotentialSpec, PotentialTerm};
use ltlab::eigensolve::FilterPolicy;
use ltlab::inequalities::{exclusion_region, Window};
use ltlab::pipeline::Pipeline;
use num_complex::Complex64;

fn main() -> ltlab::Result<()> {
    let grid = GridSpec::dirichlet(1, 16.0, 600)?;
    let spec = PotentialSpec::new(
        1,
        vec![PotentialTerm::gaussian(Complex64::new(-6.0, 4.0), &[0.0], &[0.8])],
    );
    let out = Pipeline::new(grid, KineticKind::Laplacian, FilterPolicy::with_stability()).run(&spec)?;
    let window = Window::new(-12.0, 4.0, -8.0, 8.0)?;
    let raster = exclusion_region(
        &out.potential,
        1.0,
        ConstantMode::scaled_default(),
        window,
        (320, 320),
        true,
        &ConstantTable::default(),
    )?;
    let path = std::env::temp_dir().join("ltlab_region.pgm");
    std::fs::write(&path, raster.to_pgm())?;
    println!(
        "excluded fraction {:.3}, image at {}",
        raster.excluded_fraction(),
        path.display()
    );
    for z in &out.filtered.kept {
        println!("eigenvalue {z:.4}: excluded pixel = {:?}", raster.excluded_at(*z));
    }
    Ok(())
}
