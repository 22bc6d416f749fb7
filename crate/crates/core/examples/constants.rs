//! Prints the constants used by the inequalities for a few gamma.

use ltlab::constants::{classical_constant, riesz_lift_constant, ConstantMode, ConstantTable};

fn main() -> ltlab::Result<()> {
    let table = ConstantTable::default();
    println!("gamma  classical  lifting  cone(k=1)  corollary C");
    for gamma in [1.0, 1.5, 2.0, 3.0] {
        let mode = if gamma >= 1.5 {
            ConstantMode::SharpKnown
        } else {
            ConstantMode::scaled_default()
        };
        let lift = if gamma > 1.0 {
            riesz_lift_constant(gamma)?
        } else {
            f64::NAN
        };
        let cone = table.cone_constant(gamma, 1, 1.0, mode)?;
        let (cor, _) = table.corollary_constants(gamma, 1, 1.0, mode)?;
        println!(
            "{gamma:<6} {:<10.6} {:<8.5} {:<10.5} {:.5}",
            classical_constant(gamma, 1)?,
            lift,
            cone.value,
            cor.value
        );
    }
    let davies = table.one_bound_constant(0.5, 1, ConstantMode::SharpKnown)?;
    println!("one-bound-state constant at gamma 1/2, d = 1: {}", davies.value);
    Ok(())
}
