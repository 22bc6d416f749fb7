use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{ComplexSpectrum, EigenvectorSource};
use crate::discretize::{GridSpec, OperatorMatrix};
use crate::error::{Error, Result};

/// Box enlargement used by the stability test.
pub const STABILITY_ENLARGEMENT: f64 = 1.25;
/// Outer fraction of the box whose eigenvector mass marks a state as delocalized.
pub const BOUNDARY_SHELL: f64 = 0.1;

/// Thresholds for separating eigenvalues from discretized continuum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterPolicy {
    /// Distance to `[0, ∞)` below which a value is rejected. `None` picks
    /// `max(10 · residual_bound, 1e-3 · max_j dist(λ_j, [0, ∞)))`.
    pub tau: Option<f64>,
    /// Largest eigenvector mass allowed in the outer shell; `None` skips the test.
    pub boundary_fraction_max: Option<f64>,
    pub stability_check: bool,
    pub stability_rel_tol: f64,
    /// Largest `|λ|` kept, as a fraction of the norm of the kinetic matrix.
    /// Above it the lattice dispersion no longer follows the continuum one;
    /// `None` skips the test.
    #[serde(default = "default_resolution")]
    pub resolution_fraction_max: Option<f64>,
}

fn default_resolution() -> Option<f64> {
    Some(0.25)
}

impl Default for FilterPolicy {
    fn default() -> Self {
        FilterPolicy {
            tau: None,
            boundary_fraction_max: Some(0.01),
            stability_check: false,
            stability_rel_tol: 1e-3,
            resolution_fraction_max: default_resolution(),
        }
    }
}

impl FilterPolicy {
    /// Default policy with the box-enlargement test switched on.
    pub fn with_stability() -> Self {
        FilterPolicy {
            stability_check: true,
            ..Self::default()
        }
    }

    pub fn needs_vectors(&self) -> bool {
        self.boundary_fraction_max.is_some()
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(t) = self.tau {
            if !(t > 0.0) {
                return Err(Error::Domain(format!("tau must be positive, got {t}")));
            }
        }
        if let Some(b) = self.boundary_fraction_max {
            if !(b > 0.0 && b < 1.0) {
                return Err(Error::Domain(format!(
                    "boundary_fraction_max must lie in (0, 1), got {b}"
                )));
            }
        }
        if let Some(r) = self.resolution_fraction_max {
            if !(r > 0.0) {
                return Err(Error::Domain(format!(
                    "resolution_fraction_max must be positive, got {r}"
                )));
            }
        }
        if !(self.stability_rel_tol > 0.0) {
            return Err(Error::Domain("stability_rel_tol must be positive".into()));
        }
        Ok(())
    }

    pub fn effective_tau(&self, spectrum: &ComplexSpectrum) -> f64 {
        self.tau.unwrap_or_else(|| {
            let scale = spectrum
                .values
                .iter()
                .map(|&z| half_line_distance(z))
                .fold(0.0, f64::max);
            (10.0 * spectrum.residual_bound)
                .max(1e-3 * scale)
                .max(f64::MIN_POSITIVE)
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RejectReason {
    NearHalfLine,
    /// Beyond the part of the lattice band that resolves the continuum.
    Unresolved,
    Delocalized,
    Unstable,
}

impl RejectReason {
    pub fn as_str(self) -> &'static str {
        match self {
            RejectReason::NearHalfLine => "near_half_line",
            RejectReason::Unresolved => "unresolved",
            RejectReason::Delocalized => "delocalized",
            RejectReason::Unstable => "unstable",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rejected {
    pub value: Complex64,
    pub reason: RejectReason,
}

/// Spectrum split into kept eigenvalues and rejected artifacts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FilteredSpectrum {
    pub kept: Vec<Complex64>,
    pub rejected: Vec<Rejected>,
    pub policy: FilterPolicy,
    /// The distance threshold actually applied.
    pub tau: f64,
}

impl FilteredSpectrum {
    pub fn empty(policy: FilterPolicy) -> Self {
        FilteredSpectrum {
            kept: Vec::new(),
            rejected: Vec::new(),
            policy,
            tau: policy.tau.unwrap_or(0.0),
        }
    }

    /// Every eigenvalue with its kept flag and reason, sorted by real then imaginary part.
    pub fn rows(&self) -> Vec<(Complex64, Option<RejectReason>)> {
        let mut rows: Vec<_> = self
            .kept
            .iter()
            .map(|&z| (z, None))
            .chain(self.rejected.iter().map(|r| (r.value, Some(r.reason))))
            .collect();
        rows.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
        rows
    }

    /// CSV with rows `re,im,kept(0|1),reason`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("re,im,kept,reason\n");
        for (z, reason) in self.rows() {
            let (flag, why) = match reason {
                None => (1, ""),
                Some(r) => (0, r.as_str()),
            };
            out.push_str(&format!("{},{},{flag},{why}\n", z.re, z.im));
        }
        out
    }
}

/// Distance from `z` to the half-line `[0, ∞)`.
pub fn half_line_distance(z: Complex64) -> f64 {
    if z.re >= 0.0 {
        z.im.abs()
    } else {
        z.norm()
    }
}

/// Rebuilds the spectrum on a different grid (same potential, same kinetic term).
pub type Rebuild<'a> = &'a dyn Fn(&GridSpec) -> Result<ComplexSpectrum>;

/// Keeps eigenvalues of `operator` that are far from `[0, ∞)`, resolved by
/// the mesh, localized away from the box walls and (optionally) stable under
/// box enlargement.
pub fn filter_spectrum(
    spectrum: &ComplexSpectrum,
    vecs: Option<&dyn EigenvectorSource>,
    operator: &OperatorMatrix,
    policy: &FilterPolicy,
    rebuild: Option<Rebuild<'_>>,
) -> Result<FilteredSpectrum> {
    policy.validate()?;
    let grid = &operator.grid;
    let max_abs = policy
        .resolution_fraction_max
        .map_or(f64::INFINITY, |r| r * operator.kinetic_bound());
    if policy.needs_vectors() && vecs.is_none() {
        return Err(Error::Contract("boundary-mass filtering needs eigenvectors".into()));
    }
    if policy.stability_check && rebuild.is_none() {
        return Err(Error::Contract("stability filtering needs an operator rebuild".into()));
    }
    let tau = policy.effective_tau(spectrum);
    let shell: Vec<bool> = (0..grid.size())
        .map(|k| {
            grid.point(k)
                .iter()
                .any(|x| x.abs() > (1.0 - BOUNDARY_SHELL) * grid.half_length)
        })
        .collect();

    let mut rejected = Vec::new();
    let mut candidates = Vec::new();
    for (j, &z) in spectrum.values.iter().enumerate() {
        if half_line_distance(z) <= tau {
            rejected.push(Rejected {
                value: z,
                reason: RejectReason::NearHalfLine,
            });
            continue;
        }
        if z.norm() > max_abs {
            rejected.push(Rejected {
                value: z,
                reason: RejectReason::Unresolved,
            });
            continue;
        }
        if let (Some(max_frac), Some(src)) = (policy.boundary_fraction_max, vecs) {
            let v = src.eigenvector(j);
            if v.len() != shell.len() {
                return Err(Error::Contract("eigenvector length does not match the grid".into()));
            }
            let total: f64 = v.iter().map(|c| c.norm_sqr()).sum();
            let outer: f64 = v
                .iter()
                .zip(&shell)
                .filter(|(_, &s)| s)
                .map(|(c, _)| c.norm_sqr())
                .sum();
            if !(total > 0.0) || outer > max_frac * total {
                rejected.push(Rejected {
                    value: z,
                    reason: RejectReason::Delocalized,
                });
                continue;
            }
        }
        candidates.push(z);
    }

    let mut kept = Vec::new();
    if policy.stability_check && !candidates.is_empty() {
        let rebuild = rebuild.expect("checked above");
        let bigger = rebuild(&grid.enlarged(STABILITY_ENLARGEMENT)?)?;
        for z in candidates {
            let moved = bigger
                .values
                .iter()
                .map(|w| (w - z).norm())
                .fold(f64::INFINITY, f64::min);
            if moved > policy.stability_rel_tol * z.norm() {
                rejected.push(Rejected {
                    value: z,
                    reason: RejectReason::Unstable,
                });
            } else {
                kept.push(z);
            }
        }
    } else {
        kept = candidates;
    }
    kept.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(FilteredSpectrum {
        kept,
        rejected,
        policy: *policy,
        tau,
    })
}
