//! Potential → operator → filtered spectrum, the path shared by the checks,
//! the CLI and the optimizer.

use serde::{Deserialize, Serialize};

use crate::constants::ConstantTable;
use crate::discretize::{
    build_operator, sample_potential, GridSpec, KineticKind, OperatorMatrix, PotentialSpec, SampledPotential,
};
use crate::eigensolve::{
    filter_spectrum, solve_operator, ComplexSpectrum, EigenvectorSource, FilterPolicy, FilteredSpectrum,
};
use crate::error::Result;
use crate::inequalities::{check_sum, lemma_check_values, worst_single, InequalityReport, InequalityRequest, Which};

/// Discretization and filtering settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pipeline {
    pub grid: GridSpec,
    pub kinetic: KineticKind,
    #[serde(default)]
    pub policy: FilterPolicy,
}

/// Everything computed for one potential.
#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub potential: SampledPotential,
    pub operator: OperatorMatrix,
    pub spectrum: ComplexSpectrum,
    pub filtered: FilteredSpectrum,
}

impl Pipeline {
    pub fn new(grid: GridSpec, kinetic: KineticKind, policy: FilterPolicy) -> Self {
        Pipeline { grid, kinetic, policy }
    }

    pub fn laplacian(grid: GridSpec) -> Self {
        Self::new(grid, KineticKind::Laplacian, FilterPolicy::default())
    }

    pub fn operator(&self, spec: &PotentialSpec, grid: &GridSpec) -> Result<(SampledPotential, OperatorMatrix)> {
        let v = sample_potential(spec, grid)?;
        let m = build_operator(grid, &v, self.kinetic)?;
        Ok((v, m))
    }

    pub fn run(&self, spec: &PotentialSpec) -> Result<PipelineOutput> {
        self.policy.validate()?;
        let (potential, operator) = self.operator(spec, &self.grid)?;
        let eig = solve_operator(&operator, self.policy.needs_vectors())?;
        let rebuild = |g: &GridSpec| -> Result<ComplexSpectrum> {
            let (_, m) = self.operator(spec, g)?;
            Ok(solve_operator(&m, false)?.spectrum)
        };
        let vecs: Option<&dyn EigenvectorSource> = if eig.has_vectors() { Some(&eig) } else { None };
        let filtered = filter_spectrum(
            &eig.spectrum,
            vecs,
            &operator,
            &self.policy,
            self.policy
                .stability_check
                .then_some(&rebuild as &dyn Fn(&GridSpec) -> Result<ComplexSpectrum>),
        )?;
        Ok(PipelineOutput {
            potential,
            operator,
            spectrum: eig.spectrum,
            filtered,
        })
    }
}

impl PipelineOutput {
    /// Evaluates one inequality: the Lemma on the whole matrix, sums over the
    /// kept eigenvalues, single-eigenvalue bounds at the worst kept eigenvalue.
    pub fn check(&self, request: &InequalityRequest, table: &ConstantTable) -> Result<InequalityReport> {
        match request.which {
            Which::Lemma => lemma_check_values(
                &self.operator,
                &self.spectrum.values,
                request.alpha.unwrap_or(0.0),
                request.gamma,
            ),
            w if w.is_sum() => check_sum(request, &self.filtered, &self.potential, table),
            _ => worst_single(request, &self.filtered, &self.potential, table),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discretize::PotentialTerm;
    use num_complex::Complex64;

    #[test]
    fn narrow_well_keeps_one_eigenvalue() {
        // depth 40 on [-0.05, 0.05]: a strength-4 well, compared with the exact square-well root
        let grid = GridSpec::dirichlet(1, 20.0, 1999).unwrap();
        let term = PotentialTerm::delta_like(Complex64::new(4.0, 0.0), 0.0, 0.05).with_cell_average();
        let spec = PotentialSpec::new(1, vec![term]);
        let out = Pipeline::new(grid, KineticKind::Laplacian, FilterPolicy::with_stability())
            .run(&spec)
            .unwrap();
        assert_eq!(out.filtered.kept.len(), 1, "{:?}", out.filtered.kept);
        let well = crate::oracles::WellSpec::new(Complex64::new(40.0, 0.0), 0.05).unwrap();
        let exact = crate::oracles::square_well_eigenvalues(&well, 8).unwrap();
        assert_eq!(exact.len(), 1);
        let got = out.filtered.kept[0];
        assert!(
            (got - exact[0].lambda).norm() < 1e-2 * exact[0].lambda.norm(),
            "{got} vs {}",
            exact[0].lambda
        );
        assert_eq!(out.spectrum.values.len(), 1999);
    }

    #[test]
    fn zero_potential_keeps_nothing() {
        let grid = GridSpec::dirichlet(1, 5.0, 50).unwrap();
        let out = Pipeline::laplacian(grid).run(&PotentialSpec::zero(1)).unwrap();
        assert!(out.filtered.kept.is_empty());
    }
}
