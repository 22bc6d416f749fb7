//! Exactly solvable reference problems.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::discretize::{Boundary, GridSpec};
use crate::error::{Error, Result};

/// Eigenvalue `-c²/4` of `-d²/dx² - c δ(x)`.
pub fn delta_eigenvalue(c: Complex64) -> Result<Complex64> {
    if !(c.re > 0.0) {
        return Err(Error::Domain(format!(
            "delta well needs Re c > 0 for a decaying eigenfunction, got c = {c}"
        )));
    }
    Ok(-c * c / 4.0)
}

/// Closed-form spectrum of the free Dirichlet lattice Laplacian, ascending.
pub fn dirichlet_laplacian_spectrum(grid: &GridSpec) -> Result<Vec<f64>> {
    if grid.boundary != Boundary::Dirichlet {
        return Err(Error::Domain("closed-form spectrum is for Dirichlet grids".into()));
    }
    let n = grid.points_per_dim;
    let h = grid.mesh();
    // (2/h²)(1 - cos θ) written as (4/h²) sin²(θ/2) to keep small values accurate
    let axis: Vec<f64> = (1..=n)
        .map(|k| 4.0 / (h * h) * (k as f64 * PI / (2.0 * (n + 1) as f64)).sin().powi(2))
        .collect();
    let mut values = vec![0.0];
    for _ in 0..grid.dim {
        values = values.iter().flat_map(|v| axis.iter().map(move |a| v + a)).collect();
    }
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// The well `-V0` on `[-a, a]`, zero outside.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WellSpec {
    pub depth: Complex64,
    pub half_width: f64,
}

impl WellSpec {
    pub fn new(depth: Complex64, half_width: f64) -> Result<Self> {
        if !(depth.re > 0.0) {
            return Err(Error::Domain(format!("well depth needs Re V0 > 0, got {depth}")));
        }
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::Domain(format!("half width must be positive, got {half_width}")));
        }
        Ok(WellSpec { depth, half_width })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

/// A bound state `λ = -κ²` with `Re κ > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WellRoot {
    pub branch: Parity,
    pub kappa: Complex64,
    pub lambda: Complex64,
}

impl WellRoot {
    fn new(branch: Parity, kappa: Complex64) -> Self {
        WellRoot {
            branch,
            kappa,
            lambda: -kappa * kappa,
        }
    }
}

/// Result of a continuation: physical roots and roots that left the physical sheet.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SquareWellSolution {
    pub roots: Vec<WellRoot>,
    pub dropped: Vec<WellRoot>,
}

pub const DEFAULT_MAX_COUNT: usize = 8;
const NEWTON_TOL: f64 = 1e-12;
const COLLISION_TOL: f64 = 1e-8;

/// Matching condition on the even (`k sin ka - κ cos ka`) or odd
/// (`cos ka + κ sin(ka)/k`) branch, with `k² = V0 - κ²`. Both are even
/// functions of `k`, so the branch of the square root does not matter.
fn matching(branch: Parity, kappa: Complex64, depth: Complex64, a: f64) -> Complex64 {
    let k = (depth - kappa * kappa).sqrt();
    let ka = k * a;
    let sinc = if ka.norm() < 1e-4 {
        // sin(ka)/k
        a * (1.0 - ka * ka / 6.0 + ka * ka * ka * ka / 120.0)
    } else {
        ka.sin() / k
    };
    match branch {
        Parity::Even => k * k * sinc - kappa * ka.cos(),
        Parity::Odd => ka.cos() + kappa * sinc,
    }
}

fn newton(branch: Parity, start: Complex64, depth: Complex64, a: f64) -> Option<Complex64> {
    let mut kappa = start;
    for _ in 0..60 {
        let f = matching(branch, kappa, depth, a);
        if f.norm() <= NEWTON_TOL * (1.0 + kappa.norm()) {
            return Some(kappa);
        }
        let dk = 1e-6 * (1.0 + kappa.norm());
        let df = (matching(branch, kappa + dk, depth, a) - matching(branch, kappa - dk, depth, a)) / (2.0 * dk);
        if df.norm() == 0.0 || !df.re.is_finite() {
            return None;
        }
        let step = f / df;
        kappa -= step;
        if !kappa.re.is_finite() || !kappa.im.is_finite() {
            return None;
        }
    }
    let f = matching(branch, kappa, depth, a);
    (f.norm() <= NEWTON_TOL * (1.0 + kappa.norm())).then_some(kappa)
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// All bound states of the real well of depth `v0 > 0`, deepest first.
pub fn real_well_roots(v0: f64, a: f64) -> Vec<WellRoot> {
    let z0 = a * v0.sqrt();
    let tail = |z: f64| (z0 * z0 - z * z).max(0.0).sqrt();
    let mut roots = Vec::new();
    let mut j = 0usize;
    loop {
        let start = j as f64 * PI;
        if start >= z0 {
            break;
        }
        // even: z sin z - √(z0² - z²) cos z on (jπ, jπ + π/2)
        let even = bisect(|z| z * z.sin() - tail(z) * z.cos(), start, (start + PI / 2.0).min(z0));
        roots.push((Parity::Even, even));
        let mid = start + PI / 2.0;
        if mid < z0 {
            // odd: z cos z + √(z0² - z²) sin z on (jπ + π/2, (j+1)π)
            let odd = bisect(|z| z * z.cos() + tail(z) * z.sin(), mid, (start + PI).min(z0));
            roots.push((Parity::Odd, odd));
        }
        j += 1;
    }
    let depth = Complex64::new(v0, 0.0);
    let mut out: Vec<WellRoot> = roots
        .into_iter()
        .filter_map(|(branch, z)| {
            let kappa = Complex64::new(tail(z) / a, 0.0);
            if kappa.re <= 0.0 {
                return None;
            }
            let polished = newton(branch, kappa, depth, a).unwrap_or(kappa);
            Some(WellRoot::new(branch, polished))
        })
        .collect();
    out.sort_by(|x, y| y.lambda.norm().total_cmp(&x.lambda.norm()));
    out
}

/// Tracks roots along the straight path of depths from `from` to `to`.
///
/// The step starts at `|to|/20`, halves whenever Newton fails or jumps, and
/// gives up below `|to| · 1e-6`.
pub fn continue_roots(roots: &[WellRoot], a: f64, from: Complex64, to: Complex64) -> Result<Vec<WellRoot>> {
    let total = (to - from).norm();
    if total == 0.0 {
        return Ok(roots.to_vec());
    }
    let scale = to.norm().max(from.norm());
    let initial = scale / 20.0;
    let floor = scale * 1e-6;
    let mut out = Vec::with_capacity(roots.len());
    for root in roots {
        let mut s = 0.0; // path length covered
        let mut kappa = root.kappa;
        let mut prev: Option<(f64, Complex64)> = None;
        let mut step = initial;
        while s < total {
            let ds = step.min(total - s);
            let target_s = s + ds;
            let depth = from + (to - from) * (target_s / total);
            let predictor = match prev {
                Some((ps, pk)) if s > ps => kappa + (kappa - pk) * (ds / (s - ps)),
                _ => kappa,
            };
            let accepted = newton(root.branch, predictor, depth, a)
                .filter(|k| (k - predictor).norm() <= 0.1 * (1.0 + predictor.norm()));
            match accepted {
                Some(k) => {
                    prev = Some((s, kappa));
                    kappa = k;
                    s = target_s;
                    step = (step * 2.0).min(initial);
                }
                None => {
                    step /= 2.0;
                    if step < floor {
                        let last = from + (to - from) * (s / total);
                        return Err(Error::Continuation {
                            last_good_im: last.im,
                            reason: format!("Newton failed on the {} branch", root.branch.as_str()),
                        });
                    }
                }
            }
        }
        out.push(WellRoot::new(root.branch, kappa));
    }
    for (i, x) in out.iter().enumerate() {
        for y in &out[i + 1..] {
            if (x.kappa - y.kappa).norm() < COLLISION_TOL {
                return Err(Error::Continuation {
                    last_good_im: to.im,
                    reason: format!("roots collided near kappa = {}", x.kappa),
                });
            }
        }
    }
    Ok(out)
}

/// Bound states of a (possibly complex) square well, continued from the real
/// well `Re V0` by stepping `Im V0`. Roots ending with `Re κ ≤ 0` are dropped.
pub fn solve_square_well(w: &WellSpec, max_count: usize) -> Result<SquareWellSolution> {
    let start = Complex64::new(w.depth.re, 0.0);
    let mut roots = real_well_roots(w.depth.re, w.half_width);
    roots.truncate(max_count);
    let continued = continue_roots(&roots, w.half_width, start, w.depth)?;
    let (roots, dropped): (Vec<_>, Vec<_>) = continued.into_iter().partition(|r| r.kappa.re > 0.0);
    for r in &dropped {
        log::warn!(
            "dropping {} root lambda = {}: left the physical sheet (Re kappa <= 0)",
            r.branch.as_str(),
            r.lambda
        );
    }
    Ok(SquareWellSolution { roots, dropped })
}

/// Bound-state eigenvalues (as roots with their branch) of a square well.
pub fn square_well_eigenvalues(w: &WellSpec, max_count: usize) -> Result<Vec<WellRoot>> {
    Ok(solve_square_well(w, max_count)?.roots)
}

/// CSV with rows `branch,re_lambda,im_lambda`.
pub fn roots_to_csv(roots: &[WellRoot]) -> String {
    let mut out = String::from("branch,re_lambda,im_lambda\n");
    for r in roots {
        out.push_str(&format!("{},{},{}\n", r.branch.as_str(), r.lambda.re, r.lambda.im));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta_eigenvalue(c(4.0, 0.0)).unwrap(), c(-4.0, 0.0));
        assert_eq!(delta_eigenvalue(c(2.0, 0.0)).unwrap(), c(-1.0, 0.0));
        let l = delta_eigenvalue(c(2.0, 2.0)).unwrap();
        assert!((l - c(0.0, -2.0)).norm() < 1e-15);
        // |λ| = ¼ |c|²: equality in the Davies bound
        assert!((l.norm() - 0.25 * c(2.0, 2.0).norm_sqr()).abs() < 1e-14);
        assert!(delta_eigenvalue(c(0.0, 1.0)).is_err());
    }

    #[test]
    fn dirichlet_closed_form() {
        let g = GridSpec::dirichlet(1, 1.0, 1).unwrap();
        let s = dirichlet_laplacian_spectrum(&g).unwrap();
        assert!(s.len() == 1 && (s[0] - 2.0 / g.mesh().powi(2)).abs() < 1e-15);
        let g = GridSpec::dirichlet(1, 1.5, 2).unwrap();
        let h2 = g.mesh().powi(2);
        let s = dirichlet_laplacian_spectrum(&g).unwrap();
        assert!((s[0] - 1.0 / h2).abs() < 1e-14 && (s[1] - 3.0 / h2).abs() < 1e-14);
        let g2 = GridSpec::dirichlet(2, 1.5, 2).unwrap();
        let s2 = dirichlet_laplacian_spectrum(&g2).unwrap();
        let expect = [2.0 / h2, 4.0 / h2, 4.0 / h2, 6.0 / h2];
        for (a, b) in s2.iter().zip(expect) {
            assert!((a - b).abs() < 1e-13);
        }
        assert!(dirichlet_laplacian_spectrum(&GridSpec::periodic(1, 1.0, 4).unwrap()).is_err());
    }

    #[test]
    fn shallow_well() {
        let w = WellSpec::new(c(0.1, 0.0), 1.0).unwrap();
        let roots = square_well_eigenvalues(&w, 8).unwrap();
        assert_eq!(roots.len(), 1);
        // κ ≈ V0 a for shallow wells
        let approx = -(0.1f64 * 1.0).powi(2);
        assert!(
            ((roots[0].lambda.re - approx) / approx).abs() < 0.2,
            "{}",
            roots[0].lambda
        );
    }

    #[test]
    fn real_depth_gives_real_negative_roots() {
        let w = WellSpec::new(c(30.0, 0.0), 1.0).unwrap();
        let roots = square_well_eigenvalues(&w, 8).unwrap();
        assert!(roots.len() >= 3);
        for r in &roots {
            assert_eq!(r.lambda.im, 0.0);
            assert!(r.lambda.re < 0.0);
            assert!(matching(r.branch, r.kappa, w.depth, 1.0).norm() < 1e-10);
        }
        // interleaved by depth: even, odd, even, ...
        assert_eq!(roots[0].branch, Parity::Even);
        assert_eq!(roots[1].branch, Parity::Odd);
        assert_eq!(roots[2].branch, Parity::Even);
    }

    #[test]
    fn continuation_round_trip() {
        let a = 1.0;
        let real = c(3.0, 0.0);
        let cplx = c(3.0, 2.0);
        let start = real_well_roots(3.0, a);
        let there = continue_roots(&start, a, real, cplx).unwrap();
        let back = continue_roots(&there, a, cplx, real).unwrap();
        for (x, y) in start.iter().zip(&back) {
            assert!((x.kappa - y.kappa).norm() < 1e-10, "{} vs {}", x.kappa, y.kappa);
        }
    }

    #[test]
    fn conjugate_depth_conjugates_roots() {
        let w = WellSpec::new(c(3.0, 2.0), 1.0).unwrap();
        let wc = WellSpec::new(c(3.0, -2.0), 1.0).unwrap();
        let r = square_well_eigenvalues(&w, 8).unwrap();
        let rc = square_well_eigenvalues(&wc, 8).unwrap();
        assert_eq!(r.len(), rc.len());
        for (x, y) in r.iter().zip(&rc) {
            assert_eq!(x.branch, y.branch);
            assert!((x.lambda.conj() - y.lambda).norm() < 1e-10);
        }
    }

    #[test]
    fn well_spec_validation() {
        assert!(WellSpec::new(c(-1.0, 1.0), 1.0).is_err());
        assert!(WellSpec::new(c(1.0, 1.0), 0.0).is_err());
    }

    #[test]
    fn csv_format() {
        let roots = [WellRoot::new(Parity::Odd, c(0.5, 0.0))];
        assert_eq!(roots_to_csv(&roots), "branch,re_lambda,im_lambda\nodd,-0.25,-0\n");
    }
}
