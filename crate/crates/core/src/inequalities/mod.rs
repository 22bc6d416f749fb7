//! Both sides of every eigenvalue inequality, evaluated on computed spectra.

mod region;
mod single;
mod sums;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

pub use region::{exclusion_region, ExclusionRaster, RasterNorms, Window, MAX_RESOLUTION};
pub use single::{check_single, check_single_all, worst_single};
pub use sums::{check_sum, cone_select, lemma_check, lemma_check_values, ConeSide, LEMMA_SLACK};

use crate::constants::{
    check_admissible, classical_constant, cone_factor, corollary_factor, relativistic_classical_constant,
    single_factor, ConstantMode, ConstantTable, ConstantValue,
};
use crate::discretize::KineticKind;
use crate::error::{Error, Result};

/// Relative slack for checks on discretized continuum spectra.
pub const DEFAULT_SLACK: f64 = 0.05;

/// The inequality being tested.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Which {
    /// Sum over eigenvalues with non-positive real part of `(-Re λ)^γ`.
    Thm1I,
    /// Sum of `|λ|^γ` outside the cone `|Im λ| < κ Re λ`.
    Thm1Ii,
    /// Sum of `|λ|^γ` over `Re λ < 0`.
    CorI,
    /// Sum of `|λ|^γ` inside the backward cone `|Im λ| ≤ -κ Re λ`.
    CorIi,
    /// Matrix-level comparison with the tilted Hermitian part.
    Lemma,
    Single9,
    Single10,
    Single11,
    /// `|λ| ≤ ¼ (∫|V|)²` in one dimension.
    Davies2,
}

impl Which {
    pub const ALL: [Which; 9] = [
        Which::Thm1I,
        Which::Thm1Ii,
        Which::CorI,
        Which::CorIi,
        Which::Lemma,
        Which::Single9,
        Which::Single10,
        Which::Single11,
        Which::Davies2,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Which::Thm1I => "thm1_i",
            Which::Thm1Ii => "thm1_ii",
            Which::CorI => "cor_i",
            Which::CorIi => "cor_ii",
            Which::Lemma => "lemma",
            Which::Single9 => "single_9",
            Which::Single10 => "single_10",
            Which::Single11 => "single_11",
            Which::Davies2 => "davies2",
        }
    }

    pub fn is_sum(self) -> bool {
        matches!(self, Which::Thm1I | Which::Thm1Ii | Which::CorI | Which::CorIi)
    }

    pub fn is_single(self) -> bool {
        matches!(
            self,
            Which::Single9 | Which::Single10 | Which::Single11 | Which::Davies2
        )
    }

    pub fn needs_kappa(self) -> bool {
        matches!(self, Which::Thm1Ii | Which::CorIi)
    }

    pub fn allows_refined(self) -> bool {
        matches!(self, Which::Thm1Ii | Which::CorI)
    }
}

impl fmt::Display for Which {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Which {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace('-', "_");
        Which::ALL
            .into_iter()
            .find(|w| w.as_str() == key || w.as_str().replace('_', "") == key)
            .ok_or_else(|| Error::Request(format!("unknown inequality `{s}`")))
    }
}

impl Serialize for Which {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// An inequality together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InequalityRequest {
    pub which: Which,
    pub gamma: f64,
    pub kappa: Option<f64>,
    pub alpha: Option<f64>,
    pub refined: bool,
    pub constant_mode: ConstantMode,
    pub kinetic: KineticKind,
    pub slack: f64,
    /// Evaluates an eigenvalue-sum bound below γ = 1, outside the range the
    /// theorems cover. Such reports carry no verdict.
    pub conjectural: bool,
}

impl InequalityRequest {
    pub fn new(which: Which, gamma: f64) -> Self {
        InequalityRequest {
            which,
            gamma,
            kappa: None,
            alpha: None,
            refined: false,
            constant_mode: ConstantMode::SharpKnown,
            kinetic: KineticKind::Laplacian,
            slack: if which == Which::Lemma {
                LEMMA_SLACK
            } else {
                DEFAULT_SLACK
            },
            conjectural: false,
        }
    }

    pub fn kappa(mut self, kappa: f64) -> Self {
        self.kappa = Some(kappa);
        self
    }

    pub fn alpha(mut self, alpha: f64) -> Self {
        self.alpha = Some(alpha);
        self
    }

    pub fn refined(mut self, refined: bool) -> Self {
        self.refined = refined;
        self
    }

    pub fn mode(mut self, mode: ConstantMode) -> Self {
        self.constant_mode = mode;
        self
    }

    pub fn kinetic(mut self, kinetic: KineticKind) -> Self {
        self.kinetic = kinetic;
        self
    }

    pub fn conjectural(mut self, conjectural: bool) -> Self {
        self.conjectural = conjectural;
        self
    }

    pub fn slack(mut self, slack: f64) -> Self {
        self.slack = slack;
        self
    }

    /// Exponent of the potential integral: `γ + d/2` for `-Δ`, `γ + d` for `|p|`.
    pub fn exponent(&self, dim: usize) -> f64 {
        match self.kinetic {
            KineticKind::Laplacian => self.gamma + dim as f64 / 2.0,
            KineticKind::Relativistic => self.gamma + dim as f64,
        }
    }

    /// Checks the parameter combination against the hypotheses of the inequality.
    pub fn validate(&self, dim: usize) -> Result<()> {
        let w = self.which;
        if !self.gamma.is_finite() {
            return Err(Error::Request(format!("gamma must be finite, got {}", self.gamma)));
        }
        match (w.needs_kappa(), self.kappa) {
            (true, None) => return Err(Error::Request(format!("{w} needs kappa"))),
            (true, Some(k)) if !(k > 0.0 && k.is_finite()) => {
                return Err(Error::Request(format!("kappa must be positive, got {k}")))
            }
            (false, Some(_)) => return Err(Error::Request(format!("{w} takes no kappa"))),
            _ => {}
        }
        match (w == Which::Lemma, self.alpha) {
            (true, None) => return Err(Error::Request("lemma needs alpha".into())),
            (true, Some(a)) if !a.is_finite() => return Err(Error::Request("alpha must be finite".into())),
            (false, Some(_)) => return Err(Error::Request(format!("{w} takes no alpha"))),
            _ => {}
        }
        if self.refined && !w.allows_refined() {
            return Err(Error::Request(format!(
                "the refined integrand applies to thm1_ii and cor_i only, not {w}"
            )));
        }
        if !(self.slack >= 0.0) {
            return Err(Error::Request(format!("slack must be nonnegative, got {}", self.slack)));
        }
        self.constant_mode.validate()?;
        if self.conjectural && !w.is_sum() {
            return Err(Error::Request(format!(
                "only eigenvalue sums have a conjectural range, not {w}"
            )));
        }
        if (w.is_sum() || w == Which::Lemma) && self.gamma < 1.0 {
            if !self.conjectural {
                return Err(Error::Domain(format!("{w} needs gamma >= 1 (got {})", self.gamma)));
            }
            check_admissible(self.gamma, dim)?;
        }
        if w.is_single() && w != Which::Davies2 {
            check_admissible(self.gamma, dim)?;
        }
        if w == Which::Davies2 && dim != 1 {
            return Err(Error::Domain(format!(
                "davies2 is a one-dimensional bound (got d = {dim})"
            )));
        }
        if self.kinetic == KineticKind::Relativistic && w == Which::Davies2 {
            return Err(Error::Domain("davies2 applies to -d²/dx² only".into()));
        }
        Ok(())
    }

    /// The constant multiplying the potential integral. For `single_11` the
    /// eigenvalue-dependent cone factor is not included.
    pub fn constant(&self, dim: usize, table: &ConstantTable) -> Result<ConstantValue> {
        let p = self.exponent(dim);
        let (gamma, mode) = (self.gamma, self.constant_mode);
        let scale = |c: ConstantValue, f: f64| ConstantValue {
            value: c.value * f,
            ..c
        };
        let exact = |value| ConstantValue {
            value,
            gamma,
            dim,
            mode,
            guaranteed: true,
        };
        let w = self.which;
        let c = match w {
            Which::Lemma => exact(1.0),
            Which::Davies2 => exact(0.25),
            Which::Thm1I | Which::Thm1Ii | Which::CorI | Which::CorIi => {
                let base = self.base_constant(dim, table, false)?;
                match w {
                    Which::Thm1I => base,
                    Which::Thm1Ii => scale(base, cone_factor(p, self.kappa.unwrap_or(f64::NAN))?),
                    Which::CorI => scale(base, corollary_factor(p)),
                    _ => scale(base, 1.0 + self.kappa.unwrap_or(f64::NAN)),
                }
            }
            Which::Single9 => self.base_constant(dim, table, true)?,
            Which::Single10 | Which::Single11 => scale(self.base_constant(dim, table, true)?, single_factor(p)),
        };
        Ok(c)
    }

    /// `L_{γ,d}` (or `L¹_{γ,d}` when `one_bound`) for the kinetic term of the request.
    fn base_constant(&self, dim: usize, table: &ConstantTable, one_bound: bool) -> Result<ConstantValue> {
        let mode = self.constant_mode;
        match self.kinetic {
            KineticKind::Laplacian if one_bound => table.one_bound_constant(self.gamma, dim, mode),
            KineticKind::Laplacian => table.lt_constant(self.gamma, dim, mode),
            KineticKind::Relativistic => {
                // no sharp or proven constants are built in for |p|
                let classical = relativistic_classical_constant(self.gamma, dim)?;
                let value = match mode {
                    ConstantMode::Classical => classical,
                    ConstantMode::Scaled(f) => f * classical,
                    ConstantMode::Unit => 1.0,
                    ConstantMode::SharpKnown => return Err(Error::SharpConstantUnknown { gamma: self.gamma, dim }),
                };
                Ok(ConstantValue {
                    value,
                    gamma: self.gamma,
                    dim,
                    mode,
                    guaranteed: false,
                })
            }
        }
    }
}

/// Both sides of one inequality.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityReport {
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs / rhs`; 0 when both vanish, `+∞` when only `rhs` does.
    pub ratio: f64,
    pub eigenvalues_used: Vec<Complex64>,
    pub constant: ConstantValue,
    pub request: InequalityRequest,
    pub satisfied: bool,
    pub slack: f64,
}

impl InequalityReport {
    pub fn new(
        request: InequalityRequest,
        constant: ConstantValue,
        lhs: f64,
        rhs: f64,
        eigenvalues_used: Vec<Complex64>,
    ) -> Self {
        let ratio = if rhs > 0.0 {
            lhs / rhs
        } else if lhs > 0.0 {
            f64::INFINITY
        } else {
            0.0
        };
        InequalityReport {
            lhs,
            rhs,
            ratio,
            eigenvalues_used,
            constant,
            request,
            satisfied: lhs <= rhs * (1.0 + request.slack),
            slack: request.slack,
        }
    }

    /// The right side vanishes while the left does not: only possible for `V ≡ 0`,
    /// where there are no eigenvalues and the check has no content.
    pub fn is_vacuous(&self) -> bool {
        self.rhs == 0.0 && self.lhs > 0.0
    }

    pub fn to_json(&self) -> serde_json::Value {
        let finite = |x: f64| {
            if x.is_finite() {
                serde_json::json!(x)
            } else {
                serde_json::Value::Null
            }
        };
        serde_json::json!({
            "which": self.request.which.as_str(),
            "gamma": self.request.gamma,
            "kappa": self.request.kappa,
            "alpha": self.request.alpha,
            "refined": self.request.refined,
            "constant_mode": self.request.constant_mode.to_string(),
            "constant": self.constant.value,
            "constant_guaranteed": self.constant.guaranteed,
            "kinetic": self.request.kinetic,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "ratio": finite(self.ratio),
            "vacuous": self.is_vacuous(),
            "satisfied": if self.request.conjectural { serde_json::Value::Null } else { self.satisfied.into() },
            "conjectural": self.request.conjectural,
            "slack": self.slack,
            "eigenvalues_used": self.eigenvalues_used.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
        })
    }
}

/// Classical constant for the request's kinetic term; exposed for reporting.
pub fn classical_for(kinetic: KineticKind, gamma: f64, dim: usize) -> Result<f64> {
    match kinetic {
        KineticKind::Laplacian => classical_constant(gamma, dim),
        KineticKind::Relativistic => relativistic_classical_constant(gamma, dim),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn which_parses_loosely() {
        assert_eq!("thm1_ii".parse::<Which>().unwrap(), Which::Thm1Ii);
        assert_eq!("Thm1_ii".parse::<Which>().unwrap(), Which::Thm1Ii);
        assert_eq!("single-9".parse::<Which>().unwrap(), Which::Single9);
        assert_eq!("davies2".parse::<Which>().unwrap(), Which::Davies2);
        assert!("thm3".parse::<Which>().is_err());
        for w in Which::ALL {
            assert_eq!(w.as_str().parse::<Which>().unwrap(), w);
        }
    }

    #[test]
    fn request_invariants() {
        let r = InequalityRequest::new(Which::Thm1Ii, 1.0);
        assert!(r.validate(1).is_err());
        assert!(r.kappa(1.0).validate(1).is_ok());
        assert!(r.kappa(0.0).validate(1).is_err());
        assert!(InequalityRequest::new(Which::Thm1I, 1.0)
            .kappa(1.0)
            .validate(1)
            .is_err());
        assert!(InequalityRequest::new(Which::Lemma, 1.0).validate(1).is_err());
        assert!(InequalityRequest::new(Which::Lemma, 1.0).alpha(2.0).validate(1).is_ok());
        assert!(InequalityRequest::new(Which::CorI, 1.0)
            .refined(true)
            .validate(1)
            .is_ok());
        assert!(InequalityRequest::new(Which::Thm1I, 1.0)
            .refined(true)
            .validate(1)
            .is_err());
        assert!(InequalityRequest::new(Which::CorI, 0.9).validate(1).is_err());
        assert!(InequalityRequest::new(Which::Single9, 0.5).validate(1).is_ok());
        assert!(InequalityRequest::new(Which::Single9, 0.4).validate(1).is_err());
        assert!(InequalityRequest::new(Which::Davies2, 1.0).validate(2).is_err());
        let explore = InequalityRequest::new(Which::Thm1I, 0.6).conjectural(true);
        assert!(explore.validate(1).is_ok());
        assert!(InequalityRequest::new(Which::Thm1I, 0.4)
            .conjectural(true)
            .validate(1)
            .is_err());
        assert!(InequalityRequest::new(Which::Lemma, 0.6)
            .alpha(0.0)
            .conjectural(true)
            .validate(1)
            .is_err());
    }

    #[test]
    fn report_ratio_conventions() {
        let r = InequalityRequest::new(Which::Davies2, 1.0);
        let c = r.constant(1, &ConstantTable::default()).unwrap();
        let both_zero = InequalityReport::new(r, c, 0.0, 0.0, vec![]);
        assert_eq!(both_zero.ratio, 0.0);
        assert!(both_zero.satisfied && !both_zero.is_vacuous());
        let vacuous = InequalityReport::new(r, c, 1.0, 0.0, vec![]);
        assert!(vacuous.ratio.is_infinite() && !vacuous.satisfied && vacuous.is_vacuous());
        assert!(vacuous.to_json()["ratio"].is_null());
        let edge = InequalityReport::new(r, c, 1.05, 1.0, vec![Complex64::new(-1.0, 0.5)]);
        assert!(edge.satisfied);
        let json = edge.to_json();
        assert_eq!(json["which"], "davies2");
        assert_eq!(json["eigenvalues_used"][0][1], 0.5);
    }

    #[test]
    fn constants_per_inequality() {
        let t = ConstantTable::default();
        let r = InequalityRequest::new(Which::Thm1Ii, 1.0)
            .kappa(2.0)
            .mode(ConstantMode::Unit);
        assert!((r.constant(1, &t).unwrap().value - 2f64.powf(3.25)).abs() < 1e-12);
        let r = InequalityRequest::new(Which::Single10, 0.5);
        assert!((r.constant(1, &t).unwrap().value - 0.5 * 2f64.sqrt()).abs() < 1e-15);
        let r = InequalityRequest::new(Which::CorIi, 1.0)
            .kappa(1.0)
            .mode(ConstantMode::Unit);
        assert_eq!(r.constant(1, &t).unwrap().value, 2.0);
        // |p| uses the exponent γ + d
        let r = InequalityRequest::new(Which::CorI, 1.0)
            .mode(ConstantMode::Unit)
            .kinetic(KineticKind::Relativistic);
        assert_eq!(r.exponent(1), 2.0);
        assert!((r.constant(1, &t).unwrap().value - 4.0).abs() < 1e-15);
        assert!(!r.constant(1, &t).unwrap().guaranteed);
        assert!(r.mode(ConstantMode::SharpKnown).constant(1, &t).is_err());
    }
}
