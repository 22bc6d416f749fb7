use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::{Boundary, GridSpec};
use super::potential::SampledPotential;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KineticKind {
    /// Second-order finite-difference `-Δ` with Dirichlet walls.
    Laplacian,
    /// Spectral `|p|` on a periodic 1-d grid.
    Relativistic,
}

/// Real symmetric kinetic part, stored as compactly as its structure allows.
#[derive(Debug, Clone, PartialEq)]
pub enum Kinetic {
    /// `diag[i]` on the diagonal, `off[i]` coupling `i` and `i + 1`.
    Tridiagonal {
        diag: Vec<f64>,
        off: Vec<f64>,
    },
    Dense(DMatrix<f64>),
}

impl Kinetic {
    fn to_dense(&self) -> DMatrix<f64> {
        match self {
            Kinetic::Dense(k) => k.clone(),
            Kinetic::Tridiagonal { diag, off } => {
                let n = diag.len();
                let mut k = DMatrix::zeros(n, n);
                for i in 0..n {
                    k[(i, i)] = diag[i];
                }
                for (i, &e) in off.iter().enumerate() {
                    k[(i, i + 1)] = e;
                    k[(i + 1, i)] = e;
                }
                k
            }
        }
    }
}

/// A real symmetric matrix, tridiagonal when possible.
#[derive(Debug, Clone, PartialEq)]
pub enum SymmetricMatrix {
    Tridiagonal { diag: Vec<f64>, off: Vec<f64> },
    Dense(DMatrix<f64>),
}

impl SymmetricMatrix {
    pub fn to_dense(&self) -> DMatrix<f64> {
        match self {
            SymmetricMatrix::Dense(m) => m.clone(),
            SymmetricMatrix::Tridiagonal { diag, off } => Kinetic::Tridiagonal {
                diag: diag.clone(),
                off: off.clone(),
            }
            .to_dense(),
        }
    }
}

/// `K + diag(V)` with `K` real symmetric.
///
/// Keeping the two parts apart makes the Hermitian part `K + diag(Re V)` and
/// the conjugate operator exact, and lets 1-d Laplacians stay tridiagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub grid: GridSpec,
    pub kinetic_kind: KineticKind,
    pub kinetic: Kinetic,
    pub potential: Vec<Complex64>,
}

impl OperatorMatrix {
    pub fn dimension(&self) -> usize {
        self.potential.len()
    }

    pub fn is_tridiagonal(&self) -> bool {
        matches!(self.kinetic, Kinetic::Tridiagonal { .. })
    }

    /// Diagonal and off-diagonal of a tridiagonal operator.
    pub fn tridiagonal(&self) -> Option<(Vec<Complex64>, Vec<Complex64>)> {
        match &self.kinetic {
            Kinetic::Tridiagonal { diag, off } => Some((
                diag.iter().zip(&self.potential).map(|(k, v)| k + v).collect(),
                off.iter().map(|&e| Complex64::new(e, 0.0)).collect(),
            )),
            Kinetic::Dense(_) => None,
        }
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = self.kinetic.to_dense().map(|x| Complex64::new(x, 0.0));
        for (i, v) in self.potential.iter().enumerate() {
            m[(i, i)] += v;
        }
        m
    }

    pub fn kinetic_dense(&self) -> DMatrix<f64> {
        self.kinetic.to_dense()
    }

    pub fn trace(&self) -> Complex64 {
        let k: f64 = match &self.kinetic {
            Kinetic::Tridiagonal { diag, .. } => diag.iter().sum(),
            Kinetic::Dense(k) => k.diagonal().sum(),
        };
        self.potential.iter().sum::<Complex64>() + k
    }

    /// Entrywise complex conjugate: `K + diag(conj V)`.
    pub fn conj(&self) -> Self {
        OperatorMatrix {
            potential: self.potential.iter().map(|z| z.conj()).collect(),
            ..self.clone()
        }
    }

    /// `M + t I`.
    pub fn shifted(&self, t: Complex64) -> Self {
        OperatorMatrix {
            potential: self.potential.iter().map(|z| z + t).collect(),
            ..self.clone()
        }
    }

    /// Largest absolute row sum of the kinetic part, an upper bound for its norm.
    pub fn kinetic_bound(&self) -> f64 {
        match &self.kinetic {
            Kinetic::Tridiagonal { diag, off } => (0..diag.len())
                .map(|i| {
                    let left = if i > 0 { off[i - 1].abs() } else { 0.0 };
                    let right = off.get(i).map_or(0.0, |e| e.abs());
                    diag[i].abs() + left + right
                })
                .fold(0.0, f64::max),
            Kinetic::Dense(k) => k
                .row_iter()
                .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
                .fold(0.0, f64::max),
        }
    }

    /// Frobenius norm, used as the scale for tolerances.
    pub fn frobenius_norm(&self) -> f64 {
        let sq: f64 = match &self.kinetic {
            Kinetic::Tridiagonal { diag, off } => {
                let d: f64 = diag.iter().zip(&self.potential).map(|(k, v)| (k + v).norm_sqr()).sum();
                d + 2.0 * off.iter().map(|e| e * e).sum::<f64>()
            }
            Kinetic::Dense(k) => {
                let off: f64 = k.iter().map(|x| x * x).sum::<f64>() - k.diagonal().iter().map(|x| x * x).sum::<f64>();
                let d: f64 = (0..k.nrows()).map(|i| (k[(i, i)] + self.potential[i]).norm_sqr()).sum();
                off + d
            }
        };
        sq.sqrt()
    }

    pub fn hermitian_combination(&self, alpha: f64) -> SymmetricMatrix {
        hermitian_combination(self, alpha)
    }
}

/// `K + diag(Re V + α Im V)`, which equals `(M + M*)/2 + α (M - M*)/(2i)` exactly.
pub fn hermitian_combination(m: &OperatorMatrix, alpha: f64) -> SymmetricMatrix {
    let w: Vec<f64> = m.potential.iter().map(|z| z.re + alpha * z.im).collect();
    match &m.kinetic {
        Kinetic::Tridiagonal { diag, off } => SymmetricMatrix::Tridiagonal {
            diag: diag.iter().zip(&w).map(|(k, w)| k + w).collect(),
            off: off.clone(),
        },
        Kinetic::Dense(k) => {
            let mut h = k.clone();
            for (i, w) in w.iter().enumerate() {
                h[(i, i)] += w;
            }
            SymmetricMatrix::Dense(h)
        }
    }
}

/// Assembles `-Δ_h + diag(V)` (Dirichlet) or `|p|_h + diag(V)` (periodic, d = 1).
pub fn build_operator(grid: &GridSpec, v: &SampledPotential, kinetic: KineticKind) -> Result<OperatorMatrix> {
    grid.validate()?;
    if v.grid != *grid {
        return Err(Error::Format("potential was sampled on a different grid".into()));
    }
    let kin = match kinetic {
        KineticKind::Laplacian => {
            if grid.boundary != Boundary::Dirichlet {
                return Err(Error::Domain(
                    "the finite-difference Laplacian needs a Dirichlet grid".into(),
                ));
            }
            laplacian(grid)?
        }
        KineticKind::Relativistic => {
            if grid.dim != 1 || grid.boundary != Boundary::Periodic {
                return Err(Error::Domain(
                    "the relativistic kinetic term needs a periodic 1-d grid".into(),
                ));
            }
            check_dense_cap(grid)?;
            Kinetic::Dense(relativistic(grid))
        }
    };
    Ok(OperatorMatrix {
        grid: *grid,
        kinetic_kind: kinetic,
        kinetic: kin,
        potential: v.values.clone(),
    })
}

fn check_dense_cap(grid: &GridSpec) -> Result<()> {
    if grid.size() > grid.max_dimension {
        return Err(Error::Domain(format!(
            "dense operator of dimension {} exceeds the cap {}",
            grid.size(),
            grid.max_dimension
        )));
    }
    Ok(())
}

fn laplacian(grid: &GridSpec) -> Result<Kinetic> {
    let h2 = grid.mesh().powi(2);
    let n = grid.points_per_dim;
    if grid.dim == 1 {
        return Ok(Kinetic::Tridiagonal {
            diag: vec![2.0 / h2; n],
            off: vec![-1.0 / h2; n.saturating_sub(1)],
        });
    }
    check_dense_cap(grid)?;
    let size = grid.size();
    let mut k = DMatrix::zeros(size, size);
    let strides: Vec<usize> = (0..grid.dim).map(|a| n.pow((grid.dim - 1 - a) as u32)).collect();
    for i in 0..size {
        k[(i, i)] = 2.0 * grid.dim as f64 / h2;
        for (axis, &idx) in grid.multi_index(i).iter().enumerate() {
            if idx + 1 < n {
                let j = i + strides[axis];
                k[(i, j)] = -1.0 / h2;
                k[(j, i)] = -1.0 / h2;
            }
        }
    }
    Ok(Kinetic::Dense(k))
}

/// `F* diag(|κ_m|) F` with `κ_m = π m / L`, `m = -n/2, …, n/2 - 1`, written out entrywise:
/// `K_jk = (1/n) Σ_m |κ_m| cos(κ_m (x_j - x_k))`. The sine parts cancel in ±m pairs.
fn relativistic(grid: &GridSpec) -> DMatrix<f64> {
    let n = grid.points_per_dim;
    let h = grid.mesh();
    let lo = -((n / 2) as i64);
    let wavenumbers: Vec<f64> = (lo..lo + n as i64).map(|m| PI * m as f64 / grid.half_length).collect();
    // entries depend only on j - k
    let row: Vec<f64> = (0..n)
        .map(|diff| {
            let dx = diff as f64 * h;
            wavenumbers.iter().map(|&q| q.abs() * (q * dx).cos()).sum::<f64>() / n as f64
        })
        .collect();
    DMatrix::from_fn(n, n, |j, k| row[j.abs_diff(k)])
}
