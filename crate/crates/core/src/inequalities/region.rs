use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{InequalityRequest, Which};
use crate::constants::{ConstantMode, ConstantTable};
use crate::discretize::{potential_integral, IntegralPart, SampledPotential};
use crate::error::{Error, Result};

/// Largest raster size per axis.
pub const MAX_RESOLUTION: usize = 4096;

/// Rectangle `[re_min, re_max] × [im_min, im_max]` in the spectral plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Window {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        let w = Window {
            re_min,
            re_max,
            im_min,
            im_max,
        };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = [self.re_min, self.re_max, self.im_min, self.im_max]
            .iter()
            .all(|x| x.is_finite())
            && self.re_min < self.re_max
            && self.im_min < self.im_max;
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!("invalid window {self:?}")))
        }
    }

    /// Bounding box of `points`, each side pushed out by `inflate` times its
    /// extent. Flat directions get a tenth of the larger extent.
    pub fn bounding(points: &[Complex64], inflate: f64) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Domain("bounding window of an empty set".into()));
        }
        let fold =
            |f: fn(&Complex64) -> f64, init: f64, pick: fn(f64, f64) -> f64| points.iter().map(f).fold(init, pick);
        let (re_lo, re_hi) = (
            fold(|z| z.re, f64::INFINITY, f64::min),
            fold(|z| z.re, f64::NEG_INFINITY, f64::max),
        );
        let (im_lo, im_hi) = (
            fold(|z| z.im, f64::INFINITY, f64::min),
            fold(|z| z.im, f64::NEG_INFINITY, f64::max),
        );
        let scale = points.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-12);
        let span = (re_hi - re_lo).max(im_hi - im_lo).max(1e-3 * scale);
        let pad_re = inflate * (re_hi - re_lo).max(0.1 * span);
        let pad_im = inflate * (im_hi - im_lo).max(0.1 * span);
        Window::new(re_lo - pad_re, re_hi + pad_re, im_lo - pad_im, im_hi + pad_im)
    }

    fn is_symmetric(&self) -> bool {
        self.im_min == -self.im_max
    }
}

/// Potential norms entering the single-eigenvalue bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RasterNorms {
    /// `∫ (Re V)_-^{γ+d/2}`
    pub re_neg: f64,
    /// `∫ |V|^{γ+d/2}`
    pub abs: f64,
    /// `∫ |V|`
    pub l1: f64,
    pub exponent: f64,
}

/// Pixels of the plane where no eigenvalue can lie. Row 0 is the top
/// (largest imaginary part); `mask[row * nx + col]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExclusionRaster {
    pub window: Window,
    pub nx: usize,
    pub ny: usize,
    #[serde(skip)]
    pub mask: Vec<bool>,
    pub gamma: f64,
    pub constant_mode: ConstantMode,
    pub one_bound_constant: f64,
    pub single_constant: f64,
    pub include_davies: bool,
    pub norms: RasterNorms,
}

impl ExclusionRaster {
    fn dx(&self) -> f64 {
        (self.window.re_max - self.window.re_min) / self.nx as f64
    }

    fn dy(&self) -> f64 {
        (self.window.im_max - self.window.im_min) / self.ny as f64
    }

    /// Centre of pixel `(col, row)`.
    pub fn pixel_center(&self, col: usize, row: usize) -> Complex64 {
        pixel_center(&self.window, self.nx, self.ny, col, row)
    }

    /// Pixel containing `z`, if it lies in the window.
    pub fn pixel_of(&self, z: Complex64) -> Option<(usize, usize)> {
        let w = &self.window;
        if !(z.re >= w.re_min && z.re <= w.re_max && z.im >= w.im_min && z.im <= w.im_max) {
            return None;
        }
        let col = (((z.re - w.re_min) / self.dx()) as usize).min(self.nx - 1);
        let row = (((w.im_max - z.im) / self.dy()) as usize).min(self.ny - 1);
        Some((col, row))
    }

    pub fn excluded(&self, col: usize, row: usize) -> bool {
        self.mask[row * self.nx + col]
    }

    /// Whether the pixel under `z` is excluded; `None` outside the window.
    pub fn excluded_at(&self, z: Complex64) -> Option<bool> {
        self.pixel_of(z).map(|(c, r)| self.excluded(c, r))
    }

    pub fn excluded_fraction(&self) -> f64 {
        self.mask.iter().filter(|&&m| m).count() as f64 / self.mask.len() as f64
    }

    /// Binary PGM (P5); 255 marks excluded pixels.
    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.nx, self.ny).into_bytes();
        out.extend(self.mask.iter().map(|&m| if m { 255u8 } else { 0 }));
        out
    }

    /// JSON sidecar describing the window, resolution and norms of the raster.
    pub fn sidecar_json(&self) -> serde_json::Value {
        serde_json::json!({
            "window": [self.window.re_min, self.window.re_max, self.window.im_min, self.window.im_max],
            "resolution": [self.nx, self.ny],
            "gamma": self.gamma,
            "constant_mode": self.constant_mode.to_string(),
            "one_bound_constant": self.one_bound_constant,
            "single_constant": self.single_constant,
            "include_davies": self.include_davies,
            "norms": self.norms,
            "row_order": "top row has the largest imaginary part",
            "excluded_value": 255,
        })
    }
}

fn pixel_center(w: &Window, nx: usize, ny: usize, col: usize, row: usize) -> Complex64 {
    let dx = (w.re_max - w.re_min) / nx as f64;
    let dy = (w.im_max - w.im_min) / ny as f64;
    // measured from the window centre so mirrored rows get exactly opposite values
    let im_mid = 0.5 * (w.im_max + w.im_min);
    let offset = (row as f64 + 0.5 - ny as f64 / 2.0) * dy;
    Complex64::new(w.re_min + (col as f64 + 0.5) * dx, im_mid - offset)
}

/// Rasterizes the region where the single-eigenvalue bounds (and, in one
/// dimension, optionally the Davies bound) rule out eigenvalues of `-Δ + V`.
pub fn exclusion_region(
    v: &SampledPotential,
    gamma: f64,
    mode: ConstantMode,
    window: Window,
    resolution: (usize, usize),
    include_davies: bool,
    table: &ConstantTable,
) -> Result<ExclusionRaster> {
    window.validate()?;
    let (nx, ny) = resolution;
    if nx == 0 || ny == 0 || nx > MAX_RESOLUTION || ny > MAX_RESOLUTION {
        return Err(Error::Domain(format!(
            "resolution must lie in 1..={MAX_RESOLUTION} per axis, got {nx}x{ny}"
        )));
    }
    let dim = v.grid.dim;
    let davies = include_davies && dim == 1;
    let r9 = InequalityRequest::new(Which::Single9, gamma).mode(mode);
    r9.validate(dim)?;
    let l1 = r9.constant(dim, table)?.value;
    let c1 = InequalityRequest::new(Which::Single10, gamma)
        .mode(mode)
        .constant(dim, table)?
        .value;
    let p = r9.exponent(dim);
    let norms = RasterNorms {
        re_neg: potential_integral(v, p, IntegralPart::ReNeg),
        abs: potential_integral(v, p, IntegralPart::Abs),
        l1: potential_integral(v, 1.0, IntegralPart::Abs),
        exponent: p,
    };
    let excluded = |mu: Complex64| -> bool {
        if mu.im == 0.0 && mu.re >= 0.0 {
            return false;
        }
        let abs_g = mu.norm().powf(gamma);
        (mu.re < 0.0 && (-mu.re).powf(gamma) > l1 * norms.re_neg)
            || (mu.re <= 0.0 && abs_g > c1 * norms.abs)
            || (mu.re >= 0.0 && abs_g > c1 * (1.0 + 2.0 * mu.re / mu.im.abs()).powf(p) * norms.abs)
            || (davies && mu.norm() > 0.25 * norms.l1 * norms.l1)
    };
    let mut mask = vec![false; nx * ny];
    let half = if window.is_symmetric() { ny.div_ceil(2) } else { ny };
    mask[..half * nx].par_chunks_mut(nx).enumerate().for_each(|(row, out)| {
        for (col, m) in out.iter_mut().enumerate() {
            *m = excluded(pixel_center(&window, nx, ny, col, row));
        }
    });
    if half < ny {
        // the bounds depend on |Im μ| only
        for row in half..ny {
            let (src, dst) = mask.split_at_mut(row * nx);
            let mirror = ny - 1 - row;
            dst[..nx].copy_from_slice(&src[mirror * nx..(mirror + 1) * nx]);
        }
    }
    Ok(ExclusionRaster {
        window,
        nx,
        ny,
        mask,
        gamma,
        constant_mode: mode,
        one_bound_constant: l1,
        single_constant: c1,
        include_davies: davies,
        norms,
    })
}
