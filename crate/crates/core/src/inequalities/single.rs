use num_complex::Complex64;

use super::{InequalityReport, InequalityRequest, Which};
use crate::constants::ConstantTable;
use crate::discretize::{potential_integral, IntegralPart, SampledPotential};
use crate::eigensolve::FilteredSpectrum;
use crate::error::{Error, Result};

/// Whether `mu` lies in the part of the plane the bound speaks about.
pub(crate) fn applies(which: Which, mu: Complex64) -> bool {
    match which {
        Which::Single9 | Which::Single10 => mu.re <= 0.0,
        Which::Single11 => mu.re >= 0.0 && mu.im != 0.0,
        Which::Davies2 => !(mu.im == 0.0 && mu.re >= 0.0),
        _ => false,
    }
}

/// Evaluates one single-eigenvalue bound at a candidate eigenvalue `mu`.
pub fn check_single(
    mu: Complex64,
    request: &InequalityRequest,
    v: &SampledPotential,
    table: &ConstantTable,
) -> Result<InequalityReport> {
    let dim = v.grid.dim;
    let which = request.which;
    if !which.is_single() {
        return Err(Error::Request(format!("{which} is not a single-eigenvalue bound")));
    }
    request.validate(dim)?;
    if !applies(which, mu) {
        let condition = match which {
            Which::Single9 | Which::Single10 => "Re mu <= 0",
            Which::Single11 => "Re mu >= 0 and Im mu != 0",
            _ => "mu off [0, inf)",
        };
        return Err(Error::Domain(format!("{which} requires {condition}, got mu = {mu}")));
    }
    let gamma = request.gamma;
    let p = request.exponent(dim);
    let constant = request.constant(dim, table)?;
    let (lhs, rhs) = match which {
        Which::Single9 => (
            (-mu.re).powf(gamma),
            constant.value * potential_integral(v, p, IntegralPart::ReNeg),
        ),
        Which::Single10 => (
            mu.norm().powf(gamma),
            constant.value * potential_integral(v, p, IntegralPart::Abs),
        ),
        Which::Single11 => {
            let cone = (1.0 + 2.0 * mu.re / mu.im.abs()).powf(p);
            (
                mu.norm().powf(gamma),
                constant.value * cone * potential_integral(v, p, IntegralPart::Abs),
            )
        }
        _ => {
            let l1 = potential_integral(v, 1.0, IntegralPart::Abs);
            (mu.norm(), constant.value * l1 * l1)
        }
    };
    Ok(InequalityReport::new(*request, constant, lhs, rhs, vec![mu]))
}

/// [`check_single`] at every kept eigenvalue the bound applies to.
pub fn check_single_all(
    request: &InequalityRequest,
    spectrum: &FilteredSpectrum,
    v: &SampledPotential,
    table: &ConstantTable,
) -> Result<Vec<InequalityReport>> {
    spectrum
        .kept
        .iter()
        .filter(|&&mu| applies(request.which, mu))
        .map(|&mu| check_single(mu, request, v, table))
        .collect()
}

/// The largest-ratio report over the kept eigenvalues (first one on ties).
/// With no applicable eigenvalue the report has `lhs = 0` and no eigenvalues.
pub fn worst_single(
    request: &InequalityRequest,
    spectrum: &FilteredSpectrum,
    v: &SampledPotential,
    table: &ConstantTable,
) -> Result<InequalityReport> {
    let all = check_single_all(request, spectrum, v, table)?;
    let mut worst: Option<InequalityReport> = None;
    for r in all {
        if worst.as_ref().is_none_or(|w| r.ratio > w.ratio) {
            worst = Some(r);
        }
    }
    match worst {
        Some(w) => Ok(w),
        None => {
            request.validate(v.grid.dim)?;
            let dim = v.grid.dim;
            let constant = request.constant(dim, table)?;
            let p = request.exponent(dim);
            let rhs = match request.which {
                Which::Single9 => constant.value * potential_integral(v, p, IntegralPart::ReNeg),
                Which::Davies2 => constant.value * potential_integral(v, 1.0, IntegralPart::Abs).powi(2),
                _ => constant.value * potential_integral(v, p, IntegralPart::Abs),
            };
            Ok(InequalityReport::new(*request, constant, 0.0, rhs, Vec::new()))
        }
    }
}
