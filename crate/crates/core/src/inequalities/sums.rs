use num_complex::Complex64;

use super::{InequalityReport, InequalityRequest, Which};
use crate::constants::ConstantTable;
use crate::discretize::{potential_integral, IntegralPart, OperatorMatrix, SampledPotential};
use crate::eigensolve::{hermitian_eigenvalues, riesz_mean_neg, solve_operator, FilteredSpectrum};
use crate::error::{Error, Result};

/// Tolerance of the matrix-level comparison, which holds exactly up to rounding.
pub const LEMMA_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConeSide {
    /// `|Im λ| ≥ κ Re λ`
    OutsideCone,
    /// `|Im λ| ≤ -κ Re λ`
    InsideCone,
}

pub fn cone_select(eigs: &[Complex64], kappa: f64, side: ConeSide) -> Vec<Complex64> {
    eigs.iter()
        .copied()
        .filter(|z| match side {
            ConeSide::OutsideCone => z.im.abs() >= kappa * z.re,
            ConeSide::InsideCone => z.im.abs() <= -kappa * z.re,
        })
        .collect()
}

fn neg_part_pow(x: f64, gamma: f64) -> f64 {
    if x < 0.0 {
        (-x).powf(gamma)
    } else {
        0.0
    }
}

/// Compares `Σ (Re λ + α Im λ)_-^γ` over all eigenvalues of `m` with the
/// Riesz mean of its tilted Hermitian part `K + diag(Re V + α Im V)`.
pub fn lemma_check(m: &OperatorMatrix, alpha: f64, gamma: f64) -> Result<InequalityReport> {
    let eig = solve_operator(m, false)?;
    lemma_check_values(m, &eig.spectrum.values, alpha, gamma)
}

/// [`lemma_check`] with the eigenvalues of `m` already computed.
pub fn lemma_check_values(m: &OperatorMatrix, eigs: &[Complex64], alpha: f64, gamma: f64) -> Result<InequalityReport> {
    let request = InequalityRequest::new(Which::Lemma, gamma)
        .alpha(alpha)
        .kinetic(m.kinetic_kind);
    request.validate(m.grid.dim)?;
    if eigs.len() != m.dimension() {
        return Err(Error::Contract(format!(
            "lemma needs all {} eigenvalues, got {}",
            m.dimension(),
            eigs.len()
        )));
    }
    let lhs: f64 = eigs.iter().map(|z| neg_part_pow(z.re + alpha * z.im, gamma)).sum();
    let h = hermitian_eigenvalues(&m.hermitian_combination(alpha))?;
    let rhs = riesz_mean_neg(&h, gamma);
    let used = eigs.iter().copied().filter(|z| z.re + alpha * z.im < 0.0).collect();
    let constant = request.constant(m.grid.dim, &ConstantTable::default())?;
    Ok(InequalityReport::new(request, constant, lhs, rhs, used))
}

/// Eigenvalue-sum inequalities over the kept part of a filtered spectrum.
pub fn check_sum(
    request: &InequalityRequest,
    spectrum: &FilteredSpectrum,
    v: &SampledPotential,
    table: &ConstantTable,
) -> Result<InequalityReport> {
    let dim = v.grid.dim;
    if !request.which.is_sum() {
        return Err(Error::Request(format!(
            "{} is not an eigenvalue-sum inequality",
            request.which
        )));
    }
    request.validate(dim)?;
    let gamma = request.gamma;
    let p = request.exponent(dim);
    let kept = &spectrum.kept;
    let kappa = request.kappa.unwrap_or(f64::NAN);
    let full = if request.refined {
        IntegralPart::Refined
    } else {
        IntegralPart::Abs
    };
    let (used, lhs, part) = match request.which {
        Which::Thm1I => {
            let used: Vec<_> = kept.iter().copied().filter(|z| z.re < 0.0).collect();
            let lhs = used.iter().map(|z| (-z.re).powf(gamma)).sum();
            (used, lhs, IntegralPart::ReNeg)
        }
        Which::Thm1Ii => {
            let used = cone_select(kept, kappa, ConeSide::OutsideCone);
            let lhs = used.iter().map(|z| z.norm().powf(gamma)).sum();
            (used, lhs, full)
        }
        Which::CorI => {
            let used: Vec<_> = kept.iter().copied().filter(|z| z.re < 0.0).collect();
            let lhs = used.iter().map(|z| z.norm().powf(gamma)).sum();
            (used, lhs, full)
        }
        _ => {
            let used = cone_select(kept, kappa, ConeSide::InsideCone);
            let lhs = used.iter().map(|z| z.norm().powf(gamma)).sum();
            (used, lhs, IntegralPart::ReNeg)
        }
    };
    let constant = request.constant(dim, table)?;
    let rhs = constant.value * potential_integral(v, p, part);
    Ok(InequalityReport::new(*request, constant, lhs, rhs, used))
}
