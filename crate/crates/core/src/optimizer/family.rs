use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::discretize::{PotentialSpec, PotentialTerm};
use crate::error::{Error, Result};

/// Shape of a parametrized potential family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilyKind {
    /// Per term: `re amp, im amp, centre (d), width (d)`.
    GaussianSum { terms: usize },
    /// Per term: `re amp, im amp, centre (d), half width (d)`.
    BoxSum { terms: usize },
    /// A box of fixed total weight `-strength` at the origin; the only
    /// parameter is its half width. One-dimensional.
    DeltaLike { strength: Complex64 },
}

/// A family of potentials with box constraints on its parameters.
///
/// Bounds are given in natural units. Width parameters are searched on a
/// logarithmic scale, so their bounds must be positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    #[serde(flatten)]
    pub kind: FamilyKind,
    #[serde(default = "one")]
    pub dim: usize,
    /// `[lo, hi]` per parameter; defaults depend on the kind.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Vec<[f64; 2]>>,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    ReAmp,
    ImAmp,
    Center,
    Width,
}

impl FamilySpec {
    pub fn new(kind: FamilyKind, dim: usize) -> Self {
        FamilySpec {
            kind,
            dim,
            bounds: None,
        }
    }

    pub fn delta_like(strength: Complex64) -> Self {
        Self::new(FamilyKind::DeltaLike { strength }, 1)
    }

    pub fn with_bounds(mut self, bounds: Vec<[f64; 2]>) -> Self {
        self.bounds = Some(bounds);
        self
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let f: FamilySpec = serde_json::from_str(text)?;
        f.validate()?;
        Ok(f)
    }

    fn slots(&self) -> Vec<Slot> {
        match self.kind {
            FamilyKind::GaussianSum { terms } | FamilyKind::BoxSum { terms } => (0..terms)
                .flat_map(|_| {
                    [Slot::ReAmp, Slot::ImAmp]
                        .into_iter()
                        .chain(std::iter::repeat_n(Slot::Center, self.dim))
                        .chain(std::iter::repeat_n(Slot::Width, self.dim))
                })
                .collect(),
            FamilyKind::DeltaLike { .. } => vec![Slot::Width],
        }
    }

    pub fn arity(&self) -> usize {
        self.slots().len()
    }

    /// Whether parameter `i` is searched on a log scale.
    pub fn is_log(&self, i: usize) -> bool {
        self.slots()[i] == Slot::Width
    }

    pub fn bounds(&self) -> Vec<[f64; 2]> {
        self.bounds.clone().unwrap_or_else(|| {
            self.slots()
                .into_iter()
                .map(|s| match (s, &self.kind) {
                    (Slot::ReAmp, _) => [-10.0, 2.0],
                    (Slot::ImAmp, _) => [-10.0, 10.0],
                    (Slot::Center, _) => [-2.0, 2.0],
                    (Slot::Width, FamilyKind::DeltaLike { .. }) => [0.01, 1.0],
                    (Slot::Width, _) => [0.1, 2.0],
                })
                .collect()
        })
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=3).contains(&self.dim) {
            return Err(Error::Request(format!(
                "family dimension must be 1, 2 or 3, got {}",
                self.dim
            )));
        }
        match self.kind {
            FamilyKind::GaussianSum { terms } | FamilyKind::BoxSum { terms } if terms == 0 => {
                return Err(Error::Request("a sum family needs at least one term".into()))
            }
            FamilyKind::DeltaLike { strength } if self.dim != 1 || !(strength.re > 0.0) => {
                return Err(Error::Request(
                    "delta-like families are one-dimensional with Re strength > 0".into(),
                ))
            }
            _ => {}
        }
        let bounds = self.bounds();
        if bounds.len() != self.arity() {
            return Err(Error::Request(format!(
                "family has {} parameters but {} bounds",
                self.arity(),
                bounds.len()
            )));
        }
        for (i, [lo, hi]) in bounds.iter().enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(Error::Request(format!(
                    "bounds of parameter {i} must be finite with lo <= hi"
                )));
            }
            if self.is_log(i) && !(*lo > 0.0) {
                return Err(Error::Request(format!(
                    "width bounds of parameter {i} must be positive"
                )));
            }
        }
        Ok(())
    }

    /// Bounds in search coordinates (log for widths).
    pub fn search_bounds(&self) -> Vec<[f64; 2]> {
        self.bounds()
            .into_iter()
            .enumerate()
            .map(|(i, [lo, hi])| if self.is_log(i) { [lo.ln(), hi.ln()] } else { [lo, hi] })
            .collect()
    }

    pub fn to_natural(&self, u: &[f64]) -> Vec<f64> {
        u.iter()
            .enumerate()
            .map(|(i, &x)| if self.is_log(i) { x.exp() } else { x })
            .collect()
    }

    /// The potential for natural parameters `theta`.
    pub fn potential(&self, theta: &[f64]) -> Result<PotentialSpec> {
        if theta.len() != self.arity() {
            return Err(Error::Request(format!(
                "expected {} parameters, got {}",
                self.arity(),
                theta.len()
            )));
        }
        let d = self.dim;
        let terms = match self.kind {
            FamilyKind::DeltaLike { strength } => {
                vec![PotentialTerm::delta_like(strength, 0.0, theta[0]).with_cell_average()]
            }
            FamilyKind::GaussianSum { .. } | FamilyKind::BoxSum { .. } => theta
                .chunks(2 + 2 * d)
                .map(|p| {
                    let amp = Complex64::new(p[0], p[1]);
                    let (center, width) = p[2..].split_at(d);
                    match self.kind {
                        FamilyKind::GaussianSum { .. } => PotentialTerm::gaussian(amp, center, width),
                        _ => PotentialTerm::boxed(amp, center, width).with_cell_average(),
                    }
                })
                .collect(),
        };
        Ok(PotentialSpec::new(d, terms))
    }
}
