//! Seeded random potentials used by the corpus-wide checks.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::discretize::{
    build_operator, sample_potential, Boundary, GridSpec, KineticKind, PotentialSpec, PotentialTerm,
};
use crate::eigensolve::solve_operator;
use crate::error::Result;
use crate::inequalities::{lemma_check_values, LEMMA_SLACK};

/// Ranges for random Gaussian-sum potentials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorpusConfig {
    pub dim: usize,
    pub max_terms: usize,
    /// Range of `Re amp`; mostly attractive.
    pub re_amp: (f64, f64),
    /// Range of `Im amp`.
    pub im_amp: (f64, f64),
    /// Centres are drawn from `[-center_radius, center_radius]^d`.
    pub center_radius: f64,
    pub width: (f64, f64),
}

impl CorpusConfig {
    /// Potentials comfortably inside a box of half-length `half_length`.
    pub fn for_box(dim: usize, half_length: f64) -> Self {
        CorpusConfig {
            dim,
            max_terms: 3,
            re_amp: (-6.0, 1.0),
            im_amp: (-4.0, 4.0),
            center_radius: half_length / 8.0,
            width: (0.4, 1.5),
        }
    }
}

/// The `index`-th corpus potential for `seed`. Every index has its own
/// generator stream, so items do not depend on how many were drawn before.
pub fn random_potential(config: &CorpusConfig, seed: u64, index: u64) -> PotentialSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let terms = rng.random_range(1..=config.max_terms.max(1));
    let d = config.dim;
    let terms = (0..terms)
        .map(|_| {
            let amp = Complex64::new(
                rng.random_range(config.re_amp.0..=config.re_amp.1),
                rng.random_range(config.im_amp.0..=config.im_amp.1),
            );
            let center: Vec<f64> = (0..d)
                .map(|_| rng.random_range(-config.center_radius..=config.center_radius))
                .collect();
            let width: Vec<f64> = (0..d)
                .map(|_| rng.random_range(config.width.0..=config.width.1))
                .collect();
            PotentialTerm::gaussian(amp, &center, &width)
        })
        .collect();
    PotentialSpec::new(d, terms)
}

/// `count` corpus potentials.
pub fn corpus(config: &CorpusConfig, seed: u64, count: usize) -> Vec<PotentialSpec> {
    (0..count as u64).map(|i| random_potential(config, seed, i)).collect()
}

/// Settings of the randomized matrix-level Lemma check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaFuzzConfig {
    pub count: usize,
    pub points: usize,
    pub half_length: f64,
    pub kinetic: KineticKind,
    pub alphas: Vec<f64>,
    pub gammas: Vec<f64>,
    pub seed: u64,
}

impl LemmaFuzzConfig {
    /// 200 one-dimensional Dirichlet operators with 60 nodes on `[-6, 6]`.
    pub fn standard(seed: u64) -> Self {
        LemmaFuzzConfig {
            count: 200,
            points: 60,
            half_length: 6.0,
            kinetic: KineticKind::Laplacian,
            alphas: vec![0.0, 1.0, -1.0, 3.0, -3.0],
            gammas: vec![1.0, 1.5, 2.0],
            seed,
        }
    }

    /// Same sweep for the periodic `|p|` operator.
    pub fn relativistic(seed: u64, count: usize) -> Self {
        LemmaFuzzConfig {
            count,
            kinetic: KineticKind::Relativistic,
            ..Self::standard(seed)
        }
    }

    fn grid(&self) -> Result<GridSpec> {
        let boundary = match self.kinetic {
            KineticKind::Laplacian => Boundary::Dirichlet,
            KineticKind::Relativistic => Boundary::Periodic,
        };
        GridSpec::new(1, self.half_length, self.points, boundary)
    }
}

/// One `(matrix, α, γ)` evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LemmaCase {
    pub index: usize,
    pub alpha: f64,
    pub gamma: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaFuzzSummary {
    pub config: LemmaFuzzConfig,
    pub cases: usize,
    pub worst: Option<LemmaCase>,
    pub violations: Vec<LemmaCase>,
}

impl LemmaFuzzSummary {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn worst_ratio(&self) -> f64 {
        self.worst.map_or(0.0, |c| c.ratio)
    }
}

/// Runs the Lemma over seeded random potentials and every `(α, γ)` pair.
/// Each matrix is diagonalized once; matrices are processed in parallel and
/// the results gathered in index order.
pub fn lemma_fuzz(config: &LemmaFuzzConfig) -> Result<LemmaFuzzSummary> {
    let grid = config.grid()?;
    let shape = CorpusConfig::for_box(1, config.half_length);
    let per_matrix: Vec<Vec<LemmaCase>> = (0..config.count)
        .into_par_iter()
        .map(|index| -> Result<Vec<LemmaCase>> {
            let spec = random_potential(&shape, config.seed, index as u64);
            let v = sample_potential(&spec, &grid)?;
            let m = build_operator(&grid, &v, config.kinetic)?;
            let eigs = solve_operator(&m, false)?.spectrum.values;
            let mut out = Vec::with_capacity(config.alphas.len() * config.gammas.len());
            for &alpha in &config.alphas {
                for &gamma in &config.gammas {
                    let r = lemma_check_values(&m, &eigs, alpha, gamma)?;
                    out.push(LemmaCase {
                        index,
                        alpha,
                        gamma,
                        lhs: r.lhs,
                        rhs: r.rhs,
                        ratio: r.ratio,
                    });
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let cases: Vec<LemmaCase> = per_matrix.into_iter().flatten().collect();
    let worst = cases
        .iter()
        .copied()
        .reduce(|a, b| if b.ratio > a.ratio { b } else { a });
    let violations = cases
        .iter()
        .copied()
        .filter(|c| c.lhs > c.rhs * (1.0 + LEMMA_SLACK))
        .collect();
    Ok(LemmaFuzzSummary {
        config: config.clone(),
        cases: cases.len(),
        worst,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_fuzz_runs_clean() {
        let cfg = LemmaFuzzConfig {
            count: 6,
            ..LemmaFuzzConfig::standard(3)
        };
        let s = lemma_fuzz(&cfg).unwrap();
        assert_eq!(s.cases, 6 * 5 * 3);
        assert!(s.passed(), "{:?}", s.violations);
        assert!(s.worst_ratio() > 0.0 && s.worst_ratio() <= 1.0 + LEMMA_SLACK);
        assert_eq!(lemma_fuzz(&cfg).unwrap(), s);
    }

    #[test]
    fn deterministic_and_independent_of_count() {
        let cfg = CorpusConfig::for_box(1, 24.0);
        let a = corpus(&cfg, 7, 5);
        let b = corpus(&cfg, 7, 10);
        assert_eq!(a[..], b[..5]);
        assert_ne!(corpus(&cfg, 8, 1), corpus(&cfg, 7, 1));
        for spec in &b {
            assert!(!spec.terms.is_empty() && spec.terms.len() <= 3);
        }
    }
}
