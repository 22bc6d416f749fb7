use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::GridSpec;
use crate::error::{Error, Result};

fn unit_amp() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// One additive piece of a potential. Amplitudes serialize as `[re, im]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PotentialTerm {
    /// `amp · exp(-Σ (x_i - c_i)² / (2 w_i²))`
    Gaussian {
        amp: Complex64,
        center: Vec<f64>,
        width: Vec<f64>,
    },
    /// `amp · 1{|x_i - c_i| ≤ a_i for all i}`. With `cell_average` each node
    /// gets the fraction of its mesh cell covered by the box instead of the
    /// indicator value, which places the edges to within O(h²).
    Box {
        amp: Complex64,
        center: Vec<f64>,
        half_width: Vec<f64>,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        cell_average: bool,
    },
    /// Values read from a CSV file of `index,re,im` rows, in lattice order.
    Sampled {
        #[serde(default = "unit_amp")]
        amp: Complex64,
        path: String,
        #[serde(skip)]
        values: Option<Vec<Complex64>>,
    },
}

impl PotentialTerm {
    pub fn gaussian(amp: Complex64, center: &[f64], width: &[f64]) -> Self {
        PotentialTerm::Gaussian {
            amp,
            center: center.to_vec(),
            width: width.to_vec(),
        }
    }

    pub fn boxed(amp: Complex64, center: &[f64], half_width: &[f64]) -> Self {
        PotentialTerm::Box {
            amp,
            center: center.to_vec(),
            half_width: half_width.to_vec(),
            cell_average: false,
        }
    }

    /// Switches a box term to cell-averaged sampling; other terms are unchanged.
    pub fn with_cell_average(mut self) -> Self {
        if let PotentialTerm::Box { cell_average, .. } = &mut self {
            *cell_average = true;
        }
        self
    }

    /// Narrow box of total weight `-c`: the lattice stand-in for `-c δ(x)` in d = 1.
    pub fn delta_like(strength: Complex64, center: f64, half_width: f64) -> Self {
        Self::boxed(-strength / (2.0 * half_width), &[center], &[half_width])
    }

    fn check(&self, dim: usize) -> Result<()> {
        let shape_ok =
            |c: &[f64], w: &[f64]| c.len() == dim && w.len() == dim && w.iter().all(|&x| x > 0.0 && x.is_finite());
        match self {
            PotentialTerm::Gaussian { center, width, .. } if !shape_ok(center, width) => Err(Error::Format(format!(
                "gaussian term needs {dim} centers and {dim} positive widths"
            ))),
            PotentialTerm::Box { center, half_width, .. } if !shape_ok(center, half_width) => Err(Error::Format(
                format!("box term needs {dim} centers and {dim} positive half widths"),
            )),
            _ => Ok(()),
        }
    }

    fn value_at(&self, x: &[f64], h: f64) -> Complex64 {
        match self {
            PotentialTerm::Gaussian { amp, center, width } => {
                let e: f64 = x
                    .iter()
                    .zip(center)
                    .zip(width)
                    .map(|((x, c), w)| (x - c).powi(2) / (2.0 * w * w))
                    .sum();
                amp * (-e).exp()
            }
            PotentialTerm::Box {
                amp,
                center,
                half_width,
                cell_average: true,
            } => {
                let covered: f64 = x
                    .iter()
                    .zip(center)
                    .zip(half_width)
                    .map(|((x, c), a)| {
                        let lo = (x - h / 2.0).max(c - a);
                        let hi = (x + h / 2.0).min(c + a);
                        (hi - lo).max(0.0) / h
                    })
                    .product();
                amp * covered
            }
            PotentialTerm::Box {
                amp,
                center,
                half_width,
                ..
            } => {
                let inside = x
                    .iter()
                    .zip(center)
                    .zip(half_width)
                    .all(|((x, c), a)| (x - c).abs() <= *a);
                if inside {
                    *amp
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            PotentialTerm::Sampled { .. } => unreachable!("sampled terms are not pointwise"),
        }
    }
}

/// An analytic (or tabulated) potential on `R^dim`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialSpec {
    pub dim: usize,
    #[serde(default)]
    pub terms: Vec<PotentialTerm>,
}

impl PotentialSpec {
    pub fn new(dim: usize, terms: Vec<PotentialTerm>) -> Self {
        PotentialSpec { dim, terms }
    }

    pub fn zero(dim: usize) -> Self {
        PotentialSpec { dim, terms: Vec::new() }
    }

    /// Parses JSON and loads `sampled` files relative to `base_dir`.
    pub fn from_json_str(text: &str, base_dir: &Path) -> Result<Self> {
        let mut spec: PotentialSpec = serde_json::from_str(text)?;
        for term in &mut spec.terms {
            term.check(spec.dim)?;
            if let PotentialTerm::Sampled { path, values, .. } = term {
                let full = base_dir.join(&*path);
                let text = std::fs::read_to_string(&full)
                    .map_err(|e| Error::Format(format!("cannot read {}: {e}", full.display())))?;
                *values = Some(parse_sampled_csv(&text)?);
            }
        }
        Ok(spec)
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text, path.parent().unwrap_or(Path::new(".")))
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| match t.clone() {
                PotentialTerm::Gaussian { amp, center, width } => PotentialTerm::Gaussian {
                    amp: amp.conj(),
                    center,
                    width,
                },
                PotentialTerm::Box {
                    amp,
                    center,
                    half_width,
                    cell_average,
                } => PotentialTerm::Box {
                    amp: amp.conj(),
                    center,
                    half_width,
                    cell_average,
                },
                PotentialTerm::Sampled { amp, path, values } => PotentialTerm::Sampled {
                    amp: amp.conj(),
                    path,
                    values: values.map(|v| v.iter().map(|z| z.conj()).collect()),
                },
            })
            .collect();
        PotentialSpec { dim: self.dim, terms }
    }

    /// Multiplies every amplitude by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for t in &mut out.terms {
            match t {
                PotentialTerm::Gaussian { amp, .. }
                | PotentialTerm::Box { amp, .. }
                | PotentialTerm::Sampled { amp, .. } => *amp *= factor,
            }
        }
        out
    }
}

/// Parses `index,re,im` rows; an optional header line is skipped.
pub fn parse_sampled_csv(text: &str) -> Result<Vec<Complex64>> {
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (lineno == 0 && line.starts_with("index")) {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let bad = || Error::Format(format!("line {}: expected `index,re,im`, got `{line}`", lineno + 1));
        if fields.len() != 3 {
            return Err(bad());
        }
        let index: usize = fields[0].parse().map_err(|_| bad())?;
        if index != values.len() {
            return Err(Error::Format(format!(
                "line {}: index {index} out of order (expected {})",
                lineno + 1,
                values.len()
            )));
        }
        let re: f64 = fields[1].parse().map_err(|_| bad())?;
        let im: f64 = fields[2].parse().map_err(|_| bad())?;
        values.push(Complex64::new(re, im));
    }
    Ok(values)
}

/// A potential evaluated on the lattice nodes of `grid`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledPotential {
    pub grid: GridSpec,
    pub values: Vec<Complex64>,
}

impl SampledPotential {
    pub fn new(grid: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.size() {
            return Err(Error::Format(format!(
                "sampled potential has {} values, grid has {} nodes",
                values.len(),
                grid.size()
            )));
        }
        Ok(SampledPotential { grid, values })
    }

    pub fn zeros(grid: GridSpec) -> Self {
        SampledPotential {
            values: vec![Complex64::new(0.0, 0.0); grid.size()],
            grid,
        }
    }

    pub fn integral(&self, exponent: f64, part: IntegralPart) -> f64 {
        potential_integral(self, exponent, part)
    }

    pub fn conj(&self) -> Self {
        SampledPotential {
            grid: self.grid,
            values: self.values.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|z| z.im == 0.0)
    }

    /// `index,re,im` rows, one per lattice node.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,re,im\n");
        for (i, z) in self.values.iter().enumerate() {
            out.push_str(&format!("{i},{},{}\n", z.re, z.im));
        }
        out
    }
}

/// Evaluates `spec` at every lattice node of `grid`.
pub fn sample_potential(spec: &PotentialSpec, grid: &GridSpec) -> Result<SampledPotential> {
    grid.validate()?;
    if spec.dim != grid.dim {
        return Err(Error::Format(format!(
            "potential is {}-dimensional, grid is {}-dimensional",
            spec.dim, grid.dim
        )));
    }
    let n = grid.size();
    let mut values = vec![Complex64::new(0.0, 0.0); n];
    for term in &spec.terms {
        term.check(spec.dim)?;
        match term {
            PotentialTerm::Sampled {
                amp,
                path,
                values: data,
            } => {
                let data = data
                    .as_ref()
                    .ok_or_else(|| Error::Format(format!("sampled term `{path}` was never loaded")))?;
                if data.len() != n {
                    return Err(Error::Format(format!(
                        "sampled term `{path}` has {} values, grid has {n} nodes",
                        data.len()
                    )));
                }
                for (v, d) in values.iter_mut().zip(data) {
                    *v += amp * d;
                }
            }
            _ => {
                let h = grid.mesh();
                for (k, v) in values.iter_mut().enumerate() {
                    *v += term.value_at(&grid.point(k), h);
                }
            }
        }
    }
    Ok(SampledPotential { grid: *grid, values })
}

/// Which nonnegative function of `V` is integrated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntegralPart {
    /// `|V|`
    Abs,
    /// `(Re V)_-`
    ReNeg,
    /// `((Re V)_- + |Im V|) / √2`
    Refined,
}

impl IntegralPart {
    pub fn integrand(self, z: Complex64) -> f64 {
        match self {
            IntegralPart::Abs => z.norm(),
            IntegralPart::ReNeg => (-z.re).max(0.0),
            IntegralPart::Refined => ((-z.re).max(0.0) + z.im.abs()) * std::f64::consts::FRAC_1_SQRT_2,
        }
    }
}

/// Lattice quadrature `h^d Σ_k f(V_k)^p`.
pub fn potential_integral(v: &SampledPotential, exponent: f64, part: IntegralPart) -> f64 {
    debug_assert!(exponent > 0.0);
    let sum: f64 = v
        .values
        .iter()
        .map(|&z| {
            let f = part.integrand(z);
            if f == 0.0 {
                0.0
            } else {
                f.powf(exponent)
            }
        })
        .sum();
    sum * v.grid.cell_volume()
}
