//! Numeric constants of the Lieb-Thirring family.
//!
//! The base constants are the semiclassical value `L^cl`, the sharp
//! Lieb-Thirring constant `L` (where it is known) and the one-bound-state
//! constant `L¹`. Every other constant is a closed-form multiple of one of
//! these, parametrized by the exponent `p` of the potential integral
//! (`p = γ + d/2` for `-Δ`, `p = γ + d` for `|p|`).

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Scale factor used by [`ConstantMode::scaled_default`].
pub const DEFAULT_SCALE_FACTOR: f64 = 2.0;

/// How the base constant `L_{γ,d}` (or `L¹_{γ,d}`) is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstantMode {
    Classical,
    SharpKnown,
    Scaled(f64),
    /// Base constant is exactly 1, to test derived formulas in isolation.
    Unit,
}

impl ConstantMode {
    pub fn scaled_default() -> Self {
        ConstantMode::Scaled(DEFAULT_SCALE_FACTOR)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ConstantMode::Scaled(f) if !(f > 0.0 && f.is_finite()) => Err(Error::Domain(format!(
                "scale factor must be positive and finite, got {f}"
            ))),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for ConstantMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstantMode::Classical => write!(f, "classical"),
            ConstantMode::SharpKnown => write!(f, "sharp_known"),
            ConstantMode::Scaled(s) => write!(f, "scaled:{s}"),
            ConstantMode::Unit => write!(f, "unit"),
        }
    }
}

impl std::str::FromStr for ConstantMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mode = match s {
            "classical" => ConstantMode::Classical,
            "sharp" | "sharp_known" => ConstantMode::SharpKnown,
            "unit" => ConstantMode::Unit,
            "scaled" => ConstantMode::scaled_default(),
            other => match other.strip_prefix("scaled:") {
                Some(f) => ConstantMode::Scaled(
                    f.parse()
                        .map_err(|_| Error::Domain(format!("bad scale factor `{f}`")))?,
                ),
                None => return Err(Error::Domain(format!("unknown constant mode `{other}`"))),
            },
        };
        mode.validate()?;
        Ok(mode)
    }
}

/// A constant together with where it came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstantValue {
    pub value: f64,
    pub gamma: f64,
    pub dim: usize,
    pub mode: ConstantMode,
    /// True iff `value` is a proven upper bound for the true constant.
    pub guaranteed: bool,
}

impl ConstantValue {
    fn scaled(self, factor: f64) -> Self {
        ConstantValue {
            value: self.value * factor,
            ..self
        }
    }
}

/// Lanczos approximation of Γ(x) (g = 7, nine terms), with reflection for x < 1/2.
pub fn gamma_fn(x: f64) -> f64 {
    const G: f64 = 7.0;
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_59,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma_fn(1.0 - x));
    }
    let x = x - 1.0;
    let mut acc = COEF[0];
    for (i, c) in COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + G + 0.5;
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
}

/// Checks the (γ, d) range on which the real-potential Lieb-Thirring bound holds:
/// γ ≥ 1/2 for d = 1, γ > 0 for d = 2, γ ≥ 0 for d ≥ 3.
pub fn check_admissible(gamma: f64, dim: usize) -> Result<()> {
    if !gamma.is_finite() {
        return Err(Error::Domain(format!("gamma must be finite, got {gamma}")));
    }
    match dim {
        0 => Err(Error::Domain("dimension must be at least 1".into())),
        1 if gamma < 0.5 => Err(Error::Domain(format!(
            "requires gamma >= 1/2 if d = 1 (got gamma = {gamma})"
        ))),
        2 if gamma <= 0.0 => Err(Error::Domain(format!(
            "requires gamma > 0 if d = 2 (got gamma = {gamma})"
        ))),
        _ if gamma < 0.0 => Err(Error::Domain(format!(
            "requires gamma >= 0 if d >= 3 (got gamma = {gamma})"
        ))),
        _ => Ok(()),
    }
}

/// Semiclassical constant Γ(γ+1) / ((4π)^{d/2} Γ(γ+d/2+1)).
pub fn classical_constant(gamma: f64, dim: usize) -> Result<f64> {
    check_admissible(gamma, dim)?;
    let d = dim as f64;
    if let (Some((ra, pa)), Some((rb, pb))) = (
        half_integer_gamma(gamma + 1.0),
        half_integer_gamma(gamma + d / 2.0 + 1.0),
    ) {
        // the powers of √π cancel exactly in the common cases (e.g. γ = 3/2, d = 1)
        let e = pa - pb - dim as i32;
        let pi_part = if e % 2 == 0 { PI.powi(e / 2) } else { PI.sqrt().powi(e) };
        return Ok(ra / rb / 2f64.powi(dim as i32) * pi_part);
    }
    Ok(gamma_fn(gamma + 1.0) / (4.0 * PI).powf(d / 2.0) / gamma_fn(gamma + d / 2.0 + 1.0))
}

/// Γ(x) = r · (√π)^p for positive integers and half-integers up to 60.
fn half_integer_gamma(x: f64) -> Option<(f64, i32)> {
    if !(x > 0.0 && x <= 60.0 && (2.0 * x).fract() == 0.0) {
        return None;
    }
    let (mut t, p) = if x.fract() == 0.0 { (1.0, 0) } else { (0.5, 1) };
    let mut r = 1.0;
    while t < x {
        r *= t;
        t += 1.0;
    }
    Some((r, p))
}

/// Semiclassical constant for the kinetic energy `|p|`:
/// |S^{d-1}| Γ(γ+1) Γ(d) / ((2π)^d Γ(γ+d+1)).
pub fn relativistic_classical_constant(gamma: f64, dim: usize) -> Result<f64> {
    if !(gamma >= 0.0) || dim == 0 {
        return Err(Error::Domain(format!(
            "relativistic constant needs gamma >= 0 and d >= 1 (got {gamma}, {dim})"
        )));
    }
    let d = dim as f64;
    let sphere = 2.0 * PI.powf(d / 2.0) / gamma_fn(d / 2.0);
    Ok(sphere * gamma_fn(gamma + 1.0) * gamma_fn(d) / ((2.0 * PI).powf(d) * gamma_fn(gamma + d + 1.0)))
}

/// `C_γ = 1/(γ(γ-1))`, the constant in `C_γ s_-^γ = ∫_0^∞ t^{γ-2} (s+t)_- dt`.
pub fn riesz_lift_constant(gamma: f64) -> Result<f64> {
    if !(gamma > 1.0) || !gamma.is_finite() {
        return Err(Error::Domain(format!(
            "lifting integral diverges unless gamma > 1 (got {gamma})"
        )));
    }
    Ok(1.0 / (gamma * (gamma - 1.0)))
}

/// `2^{1+p/2} (1+2/κ)^p`: prefactor of the outside-cone sum bound.
pub fn cone_factor(exponent: f64, kappa: f64) -> Result<f64> {
    check_kappa(kappa)?;
    Ok(corollary_factor(exponent) * (1.0 + 2.0 / kappa).powf(exponent))
}

/// `2^{1+p/2}`: the κ → ∞ limit of [`cone_factor`].
pub fn corollary_factor(exponent: f64) -> f64 {
    2f64.powf(1.0 + exponent / 2.0)
}

/// `2^{p/2}`: prefactor of the single-eigenvalue modulus bound.
pub fn single_factor(exponent: f64) -> f64 {
    2f64.powf(exponent / 2.0)
}

fn check_kappa(kappa: f64) -> Result<()> {
    if kappa > 0.0 && kappa.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("kappa must be positive, got {kappa}")))
    }
}

fn check_sum_gamma(gamma: f64) -> Result<()> {
    if gamma >= 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "eigenvalue-sum bounds need gamma >= 1 (got {gamma})"
        )))
    }
}

/// Table data for constants that are known but not reconstructible here.
///
/// Loaded from a JSON file of the form
/// `{"clr_d3_gamma0": 0.1156, "scaled_factor_provenance": "...", "one_bound_d1": [[1.0, 0.3849]]}`.
/// Every key is optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ConstantTable {
    /// Sharp one-bound-state constant for γ = 0, d = 3.
    #[serde(default)]
    pub clr_d3_gamma0: Option<f64>,
    /// Documentation for a non-default scale factor; makes `Scaled` values guaranteed.
    #[serde(default)]
    pub scaled_factor_provenance: Option<String>,
    /// Sharp one-bound-state constants L¹_{γ,1} as (γ, value) pairs.
    #[serde(default, with = "pairs")]
    pub one_bound_d1: BTreeMap<OrderedGamma, f64>,
}

/// γ as a map key; compared by bit pattern after normalising -0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct OrderedGamma(u64);

impl OrderedGamma {
    pub fn new(gamma: f64) -> Self {
        OrderedGamma((gamma + 0.0).to_bits())
    }

    pub fn get(self) -> f64 {
        f64::from_bits(self.0)
    }
}

mod pairs {
    use super::OrderedGamma;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use std::collections::BTreeMap;

    pub fn serialize<S: Serializer>(map: &BTreeMap<OrderedGamma, f64>, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<(f64, f64)> = map.iter().map(|(k, v)| (k.get(), *v)).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<OrderedGamma, f64>, D::Error> {
        let v: Vec<(f64, f64)> = Vec::deserialize(d)?;
        Ok(v.into_iter().map(|(g, c)| (OrderedGamma::new(g), c)).collect())
    }
}

impl ConstantTable {
    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let table: ConstantTable = serde_json::from_str(&text)?;
        table.validate()?;
        Ok(table)
    }

    fn validate(&self) -> Result<()> {
        let bad = |v: f64| !(v > 0.0 && v.is_finite());
        if self.clr_d3_gamma0.is_some_and(bad) || self.one_bound_d1.values().any(|&v| bad(v)) {
            return Err(Error::Format("constants must be positive and finite".into()));
        }
        Ok(())
    }

    fn scaled_guaranteed(&self, factor: f64, dim: usize) -> bool {
        factor >= 1.0 && ((dim == 1 && factor >= DEFAULT_SCALE_FACTOR) || self.scaled_factor_provenance.is_some())
    }

    /// The Lieb-Thirring constant `L_{γ,d}` under `mode`.
    pub fn lt_constant(&self, gamma: f64, dim: usize, mode: ConstantMode) -> Result<ConstantValue> {
        mode.validate()?;
        let classical = classical_constant(gamma, dim)?;
        let (value, guaranteed) = match mode {
            ConstantMode::Classical => (classical, gamma >= 1.5),
            ConstantMode::SharpKnown => {
                if gamma >= 1.5 {
                    (classical, true)
                } else if dim == 1 && gamma == 0.5 {
                    (0.5, true)
                } else {
                    return Err(Error::SharpConstantUnknown { gamma, dim });
                }
            }
            ConstantMode::Scaled(f) => (f * classical, self.scaled_guaranteed(f, dim)),
            ConstantMode::Unit => (1.0, false),
        };
        Ok(ConstantValue {
            value,
            gamma,
            dim,
            mode,
            guaranteed,
        })
    }

    /// The one-bound-state constant `L¹_{γ,d}` under `mode`.
    pub fn one_bound_constant(&self, gamma: f64, dim: usize, mode: ConstantMode) -> Result<ConstantValue> {
        mode.validate()?;
        let classical = classical_constant(gamma, dim)?;
        let (value, guaranteed) = match mode {
            // L¹ ≤ L and L^cl ≤ L, so the classical value bounds L¹ from neither side.
            ConstantMode::Classical => (classical, false),
            ConstantMode::SharpKnown => {
                let configured = match dim {
                    1 if gamma == 0.5 => Some(0.5),
                    1 => self.one_bound_d1.get(&OrderedGamma::new(gamma)).copied(),
                    3 if gamma == 0.0 => self.clr_d3_gamma0,
                    _ => None,
                };
                (configured.ok_or(Error::SharpConstantUnknown { gamma, dim })?, true)
            }
            ConstantMode::Scaled(f) => (f * classical, self.scaled_guaranteed(f, dim)),
            ConstantMode::Unit => (1.0, false),
        };
        Ok(ConstantValue {
            value,
            gamma,
            dim,
            mode,
            guaranteed,
        })
    }

    /// `C_{γ,d}(κ) = 2^{1+γ/2+d/4} (1+2/κ)^{γ+d/2} L_{γ,d}`.
    pub fn cone_constant(&self, gamma: f64, dim: usize, kappa: f64, mode: ConstantMode) -> Result<ConstantValue> {
        check_sum_gamma(gamma)?;
        let factor = cone_factor(gamma + dim as f64 / 2.0, kappa)?;
        Ok(self.lt_constant(gamma, dim, mode)?.scaled(factor))
    }

    /// `(C_{γ,d}, L_{γ,d}(κ))` with `C = 2^{1+γ/2+d/4} L` and `L(κ) = (1+κ) L`.
    pub fn corollary_constants(
        &self,
        gamma: f64,
        dim: usize,
        kappa: f64,
        mode: ConstantMode,
    ) -> Result<(ConstantValue, ConstantValue)> {
        check_sum_gamma(gamma)?;
        check_kappa(kappa)?;
        let base = self.lt_constant(gamma, dim, mode)?;
        Ok((
            base.scaled(corollary_factor(gamma + dim as f64 / 2.0)),
            base.scaled(1.0 + kappa),
        ))
    }

    /// `C¹_{γ,d} = 2^{γ/2+d/4} L¹_{γ,d}`.
    pub fn single_ev_constant(&self, gamma: f64, dim: usize, mode: ConstantMode) -> Result<ConstantValue> {
        let base = self.one_bound_constant(gamma, dim, mode)?;
        Ok(base.scaled(single_factor(gamma + dim as f64 / 2.0)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gamma_matches_closed_forms() {
        let mut fact = 1.0;
        for k in 1..=19 {
            assert_relative_eq!(gamma_fn(k as f64), fact, max_relative = 1e-13);
            fact *= k as f64;
        }
        // Γ(k + 1/2) = (2k)! √π / (4^k k!)
        let mut half = PI.sqrt();
        for k in 0..19 {
            assert_relative_eq!(gamma_fn(k as f64 + 0.5), half, max_relative = 1e-13);
            half *= k as f64 + 0.5;
        }
    }

    #[test]
    fn classical_examples() {
        assert_eq!(classical_constant(1.5, 1).unwrap(), 0.1875);
        assert_relative_eq!(
            classical_constant(0.0, 3).unwrap(),
            1.0 / (6.0 * PI * PI),
            max_relative = 1e-13
        );
        assert_relative_eq!(
            classical_constant(1.0, 1).unwrap(),
            2.0 / (3.0 * PI),
            max_relative = 1e-13
        );
    }

    #[test]
    fn admissibility_errors_name_condition() {
        let err = classical_constant(0.25, 1).unwrap_err().to_string();
        assert!(err.contains("gamma >= 1/2 if d = 1"), "{err}");
        assert!(classical_constant(0.0, 2).is_err());
        assert!(classical_constant(0.0, 3).is_ok());
        assert!(classical_constant(-0.1, 4).is_err());
    }

    #[test]
    fn lt_modes() {
        let t = ConstantTable::default();
        let v = t.lt_constant(1.5, 1, ConstantMode::SharpKnown).unwrap();
        assert_eq!(v.value, 0.1875);
        assert!(v.guaranteed);
        assert_eq!(t.lt_constant(0.5, 1, ConstantMode::SharpKnown).unwrap().value, 0.5);
        assert_eq!(t.lt_constant(1.0, 1, ConstantMode::Unit).unwrap().value, 1.0);
        assert!(matches!(
            t.lt_constant(1.0, 1, ConstantMode::SharpKnown),
            Err(Error::SharpConstantUnknown { .. })
        ));
        assert!(!t.lt_constant(1.0, 1, ConstantMode::Classical).unwrap().guaranteed);
        assert!(t.lt_constant(2.0, 3, ConstantMode::Classical).unwrap().guaranteed);
        let s = t.lt_constant(1.0, 1, ConstantMode::Scaled(2.0)).unwrap();
        assert!(s.guaranteed);
        assert!(!t.lt_constant(1.0, 2, ConstantMode::Scaled(2.0)).unwrap().guaranteed);
        assert!(!t.lt_constant(1.0, 1, ConstantMode::Scaled(1.5)).unwrap().guaranteed);
        let documented = ConstantTable {
            scaled_factor_provenance: Some("bound from the literature".into()),
            ..Default::default()
        };
        assert!(
            documented
                .lt_constant(1.0, 2, ConstantMode::Scaled(1.5))
                .unwrap()
                .guaranteed
        );
        assert!(t.lt_constant(1.0, 1, ConstantMode::Scaled(0.0)).is_err());
    }

    #[test]
    fn one_bound_examples() {
        let t = ConstantTable::default();
        assert_eq!(
            t.one_bound_constant(0.5, 1, ConstantMode::SharpKnown).unwrap().value,
            0.5
        );
        assert_relative_eq!(
            t.one_bound_constant(1.0, 1, ConstantMode::Scaled(2.0)).unwrap().value,
            4.0 / (3.0 * PI),
            max_relative = 1e-13
        );
        for mode in [ConstantMode::Classical, ConstantMode::Unit, ConstantMode::SharpKnown] {
            assert!(t.one_bound_constant(0.0, 2, mode).is_err());
        }
        assert!(
            !t.one_bound_constant(1.5, 1, ConstantMode::Classical)
                .unwrap()
                .guaranteed
        );
        assert!(t.one_bound_constant(0.0, 3, ConstantMode::SharpKnown).is_err());
    }

    #[test]
    fn configured_table() {
        let json = r#"{"clr_d3_gamma0": 0.1156, "scaled_factor_provenance": "note",
                       "one_bound_d1": [[1.0, 0.3849]]}"#;
        let t: ConstantTable = serde_json::from_str(json).unwrap();
        assert_eq!(
            t.one_bound_constant(0.0, 3, ConstantMode::SharpKnown).unwrap().value,
            0.1156
        );
        assert_eq!(
            t.one_bound_constant(1.0, 1, ConstantMode::SharpKnown).unwrap().value,
            0.3849
        );
        assert!(t.one_bound_constant(2.0, 1, ConstantMode::SharpKnown).is_err());
        let bad: ConstantTable = serde_json::from_str(r#"{"clr_d3_gamma0": -1.0}"#).unwrap();
        assert!(bad.validate().is_err());
    }

    #[test]
    fn derived_examples() {
        let t = ConstantTable::default();
        let c = t.cone_constant(1.0, 1, 2.0, ConstantMode::Unit).unwrap();
        assert_relative_eq!(c.value, 2f64.powf(3.25), max_relative = 1e-14);
        assert_relative_eq!(c.value, 9.513657, max_relative = 1e-6);
        let c = t.cone_constant(1.0, 1, 2.0, ConstantMode::Classical).unwrap();
        assert_relative_eq!(c.value, 9.513657 * 2.0 / (3.0 * PI), max_relative = 1e-6);
        assert_relative_eq!(c.value, 2.0188607, max_relative = 1e-7);
        assert!(t.cone_constant(1.0, 1, 0.0, ConstantMode::Unit).is_err());
        assert!(t.cone_constant(0.9, 1, 1.0, ConstantMode::Unit).is_err());

        let (c, lk) = t.corollary_constants(1.0, 1, 1.0, ConstantMode::Unit).unwrap();
        assert_relative_eq!(c.value, 3.363586, max_relative = 1e-6);
        assert_eq!(lk.value, 2.0);
        let (_, lk) = t.corollary_constants(2.0, 3, 3.0, ConstantMode::Unit).unwrap();
        assert_eq!(lk.value, 4.0);
        let (c, _) = t.corollary_constants(1.0, 1, 1.0, ConstantMode::Classical).unwrap();
        assert_relative_eq!(c.value, 3.363586 * 2.0 / (3.0 * PI), max_relative = 1e-6);

        let s = t.single_ev_constant(0.5, 1, ConstantMode::SharpKnown).unwrap();
        assert_relative_eq!(s.value, 0.5 * 2f64.sqrt(), max_relative = 1e-14);
        let s = t.single_ev_constant(0.0, 3, ConstantMode::Unit).unwrap();
        assert_relative_eq!(s.value, 1.681793, max_relative = 1e-6);
        let s = t.single_ev_constant(1.0, 1, ConstantMode::Unit).unwrap();
        assert_relative_eq!(s.value, 2f64.powf(0.75), max_relative = 1e-14);
    }

    #[test]
    fn riesz_lift_examples() {
        assert_eq!(riesz_lift_constant(2.0).unwrap(), 0.5);
        assert_relative_eq!(riesz_lift_constant(3.0).unwrap(), 1.0 / 6.0, max_relative = 1e-15);
        assert_relative_eq!(riesz_lift_constant(1.5).unwrap(), 4.0 / 3.0, max_relative = 1e-15);
        assert!(riesz_lift_constant(1.0).is_err());
    }

    #[test]
    fn relativistic_constant_d1() {
        // ∫ (|p| - v)_-^γ dp / 2π = v^{γ+1} / (π (γ+1))
        for g in [0.0, 0.5, 1.0, 2.5] {
            assert_relative_eq!(
                relativistic_classical_constant(g, 1).unwrap(),
                1.0 / (PI * (g + 1.0)),
                max_relative = 1e-13
            );
        }
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("scaled:3".parse::<ConstantMode>().unwrap(), ConstantMode::Scaled(3.0));
        assert_eq!("scaled".parse::<ConstantMode>().unwrap(), ConstantMode::Scaled(2.0));
        assert_eq!("sharp".parse::<ConstantMode>().unwrap(), ConstantMode::SharpKnown);
        assert!("scaled:-1".parse::<ConstantMode>().is_err());
        assert!("nope".parse::<ConstantMode>().is_err());
        assert_eq!(ConstantMode::Scaled(2.0).to_string(), "scaled:2");
    }
}
