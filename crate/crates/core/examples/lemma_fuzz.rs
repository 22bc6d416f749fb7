//! The matrix-level eigenvalue comparison on random operators, for both
//! kinetic terms.

use ltlab::corpus::{lemma_fuzz, LemmaFuzzConfig};

fn main() -> ltlab::Result<()> {
    for config in [LemmaFuzzConfig::standard(1), LemmaFuzzConfig::relativistic(1, 50)] {
        let s = lemma_fuzz(&config)?;
        println!(
            "{:?}: {} cases, worst ratio {:.12}, {} violations",
            config.kinetic,
            s.cases,
            s.worst_ratio(),
            s.violations.len()
        );
    }
    Ok(())
}
