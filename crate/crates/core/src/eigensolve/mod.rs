//! Eigenvalues of the discretized operators and separation of genuine
//! eigenvalues from discretized continuum.

mod dense;
mod filter;
mod symmetric;
mod tridiagonal;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

pub use dense::{eigen_dense, eigenvalues_dense};
pub use filter::{filter_spectrum, FilterPolicy, FilteredSpectrum, RejectReason, Rejected};
pub use symmetric::{hermitian_eigenvalues, hermitian_eigenvalues_dense};

use crate::discretize::OperatorMatrix;
use crate::error::Result;

/// All eigenvalues of a matrix, repeated according to multiplicity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComplexSpectrum {
    pub values: Vec<Complex64>,
    /// Backward-error estimate of the solve.
    pub residual_bound: f64,
}

impl ComplexSpectrum {
    pub fn conj(&self) -> Self {
        ComplexSpectrum {
            values: self.values.iter().map(|z| z.conj()).collect(),
            residual_bound: self.residual_bound,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Source of right eigenvectors, indexed like the spectrum they belong to.
pub trait EigenvectorSource {
    fn eigenvector(&self, index: usize) -> Vec<Complex64>;
}

impl EigenvectorSource for DMatrix<Complex64> {
    fn eigenvector(&self, index: usize) -> Vec<Complex64> {
        self.column(index).iter().copied().collect()
    }
}

/// Spectrum of an [`OperatorMatrix`], with eigenvectors available on demand.
#[derive(Debug, Clone)]
pub struct OperatorEigen {
    pub spectrum: ComplexSpectrum,
    vectors: Vectors,
}

#[derive(Debug, Clone)]
enum Vectors {
    None,
    Dense(DMatrix<Complex64>),
    Tridiagonal { diag: Vec<Complex64>, off: Vec<Complex64> },
}

impl OperatorEigen {
    pub fn has_vectors(&self) -> bool {
        !matches!(self.vectors, Vectors::None)
    }
}

impl EigenvectorSource for OperatorEigen {
    fn eigenvector(&self, index: usize) -> Vec<Complex64> {
        match &self.vectors {
            Vectors::None => panic!("eigenvectors were not requested"),
            Vectors::Dense(v) => v.eigenvector(index),
            Vectors::Tridiagonal { diag, off } => {
                tridiagonal::tridiagonal_eigenvector(diag, off, self.spectrum.values[index])
            }
        }
    }
}

/// Solves an operator, using the tridiagonal QL path for 1-d Laplacians.
///
/// Eigenvectors of tridiagonal operators come from inverse iteration when
/// asked for; dense operators get them from the Schur basis.
pub fn solve_operator(m: &OperatorMatrix, want_vectors: bool) -> Result<OperatorEigen> {
    if let Some((diag, off)) = m.tridiagonal() {
        let mut values = diag.clone();
        tridiagonal::tridiagonal_ql(&mut values, &off)?;
        let n = values.len();
        let spectrum = ComplexSpectrum {
            values,
            residual_bound: n as f64 * f64::EPSILON * m.frobenius_norm(),
        };
        let vectors = if want_vectors {
            Vectors::Tridiagonal { diag, off }
        } else {
            Vectors::None
        };
        return Ok(OperatorEigen { spectrum, vectors });
    }
    let (spectrum, vecs) = eigen_dense(&m.to_dense(), want_vectors)?;
    Ok(OperatorEigen {
        spectrum,
        vectors: vecs.map_or(Vectors::None, Vectors::Dense),
    })
}

/// `Σ (v)_-^γ`; for γ = 0 this counts the strictly negative values.
pub fn riesz_mean_neg(values: &[f64], gamma: f64) -> f64 {
    values
        .iter()
        .filter(|&&v| v < 0.0)
        .map(|&v| if gamma == 0.0 { 1.0 } else { (-v).powf(gamma) })
        .sum()
}

/// Greedy nearest-neighbour pairing of two multisets; returns the largest
/// paired distance. Each `a[i]` in index order takes the closest unused
/// `b[j]`, ties going to the lowest `j`.
pub fn max_pairing_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    for x in a {
        let mut best = None;
        for (j, y) in b.iter().enumerate() {
            if used[j] {
                continue;
            }
            let d = (x - y).norm();
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((j, d));
            }
        }
        let (j, d) = best.expect("equal lengths");
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discretize::{build_operator, GridSpec, KineticKind, SampledPotential};
    use crate::oracles::dirichlet_laplacian_spectrum;

    #[test]
    fn riesz_mean_examples() {
        assert_eq!(riesz_mean_neg(&[-4.0, 1.0], 0.5), 2.0);
        assert_eq!(riesz_mean_neg(&[-1.0, -2.0, 3.0], 0.0), 2.0);
        assert_eq!(riesz_mean_neg(&[-2.0], 2.0), 4.0);
        assert_eq!(riesz_mean_neg(&[0.0, 1.0], 0.0), 0.0);
    }

    #[test]
    fn free_laplacian_matches_closed_form() {
        let g = GridSpec::dirichlet(1, 3.0, 50).unwrap();
        let m = build_operator(&g, &SampledPotential::zeros(g), KineticKind::Laplacian).unwrap();
        let exact = dirichlet_laplacian_spectrum(&g).unwrap();
        for solver in ["tridiagonal", "dense"] {
            let mut vals: Vec<f64> = match solver {
                "tridiagonal" => solve_operator(&m, false).unwrap().spectrum.values,
                _ => eigenvalues_dense(&m.to_dense()).unwrap().values,
            }
            .iter()
            .map(|z| z.re)
            .collect();
            vals.sort_by(f64::total_cmp);
            for (v, e) in vals.iter().zip(&exact) {
                assert!(((v - e) / e).abs() < 1e-10, "{solver}: {v} vs {e}");
            }
        }
    }

    #[test]
    fn pairing_distance() {
        let a = [Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0)];
        let b = [Complex64::new(0.0, -1.0), Complex64::new(1e-3, 1.0)];
        assert!((max_pairing_distance(&a, &b) - 1e-3).abs() < 1e-15);
        assert_eq!(max_pairing_distance(&a, &b[..1]), f64::INFINITY);
    }
}
