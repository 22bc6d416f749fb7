use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest operator dimension accepted for dense storage unless the grid says otherwise.
pub const DEFAULT_MAX_DIMENSION: usize = 5000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    Dirichlet,
    Periodic,
}

fn default_cap() -> usize {
    DEFAULT_MAX_DIMENSION
}

/// The box `[-L, L]^d` with `n` nodes per axis.
///
/// Dirichlet grids carry the `n` interior nodes `-L + (k+1) h`, `h = 2L/(n+1)`;
/// periodic grids carry `-L + k h`, `h = 2L/n`. Lattice points are numbered
/// row-major: the last axis varies fastest.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub dim: usize,
    pub half_length: f64,
    pub points_per_dim: usize,
    pub boundary: Boundary,
    /// Cap on `n^dim` for densely stored operators.
    #[serde(default = "default_cap")]
    pub max_dimension: usize,
}

impl GridSpec {
    pub fn new(dim: usize, half_length: f64, points_per_dim: usize, boundary: Boundary) -> Result<Self> {
        let grid = GridSpec {
            dim,
            half_length,
            points_per_dim,
            boundary,
            max_dimension: DEFAULT_MAX_DIMENSION,
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn dirichlet(dim: usize, half_length: f64, points_per_dim: usize) -> Result<Self> {
        Self::new(dim, half_length, points_per_dim, Boundary::Dirichlet)
    }

    pub fn periodic(dim: usize, half_length: f64, points_per_dim: usize) -> Result<Self> {
        Self::new(dim, half_length, points_per_dim, Boundary::Periodic)
    }

    pub fn with_max_dimension(mut self, cap: usize) -> Self {
        self.max_dimension = cap;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=3).contains(&self.dim) {
            return Err(Error::Domain(format!(
                "grid dimension must be 1, 2 or 3, got {}",
                self.dim
            )));
        }
        if !(self.half_length > 0.0 && self.half_length.is_finite()) {
            return Err(Error::Domain(format!(
                "half_length must be positive, got {}",
                self.half_length
            )));
        }
        if self.points_per_dim < 1 {
            return Err(Error::Domain("points_per_dim must be at least 1".into()));
        }
        if self.boundary == Boundary::Periodic && self.points_per_dim < 2 {
            return Err(Error::Domain("periodic grids need at least 2 points".into()));
        }
        self.points_per_dim
            .checked_pow(self.dim as u32)
            .ok_or_else(|| Error::Domain("grid size overflows".into()))?;
        Ok(())
    }

    pub fn mesh(&self) -> f64 {
        let n = self.points_per_dim as f64;
        match self.boundary {
            Boundary::Dirichlet => 2.0 * self.half_length / (n + 1.0),
            Boundary::Periodic => 2.0 * self.half_length / n,
        }
    }

    /// Total number of lattice points `n^dim`.
    pub fn size(&self) -> usize {
        self.points_per_dim.pow(self.dim as u32)
    }

    /// Volume element `h^d` of the lattice quadrature.
    pub fn cell_volume(&self) -> f64 {
        self.mesh().powi(self.dim as i32)
    }

    /// Coordinate of node `k` along one axis.
    pub fn node(&self, k: usize) -> f64 {
        let offset = match self.boundary {
            Boundary::Dirichlet => 1.0,
            Boundary::Periodic => 0.0,
        };
        -self.half_length + (k as f64 + offset) * self.mesh()
    }

    /// Per-axis node indices of a lattice index.
    pub fn multi_index(&self, mut index: usize) -> Vec<usize> {
        let n = self.points_per_dim;
        let mut idx = vec![0; self.dim];
        for slot in idx.iter_mut().rev() {
            *slot = index % n;
            index /= n;
        }
        idx
    }

    pub fn point(&self, index: usize) -> Vec<f64> {
        self.multi_index(index).into_iter().map(|k| self.node(k)).collect()
    }

    /// Same mesh, box enlarged by roughly `factor`; used by the stability filter.
    pub fn enlarged(&self, factor: f64) -> Result<GridSpec> {
        let h = self.mesh();
        // keep the parity of n so the new nodes sit on the old lattice
        let n0 = self.points_per_dim;
        let extra = 2 * ((n0 as f64 * (factor - 1.0)) / 2.0).round().max(0.0) as usize;
        let n = n0 + extra;
        let half_length = match self.boundary {
            Boundary::Dirichlet => h * (n + 1) as f64 / 2.0,
            Boundary::Periodic => h * n as f64 / 2.0,
        };
        let grid = GridSpec {
            points_per_dim: n,
            half_length,
            ..*self
        };
        grid.validate()?;
        Ok(grid)
    }
}
