//! Implicit QL for symmetric tridiagonal matrices, real or complex symmetric
//! (`T = Tᵀ`, not Hermitian). The complex case uses complex orthogonal
//! rotations (`c² + s² = 1`), which preserve complex symmetry.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub(crate) trait QlScalar:
    Copy
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_f64(x: f64) -> Self;
    fn modulus(self) -> f64;
    fn root(self) -> Self;
}

impl QlScalar for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn root(self) -> Self {
        self.sqrt()
    }
}

impl QlScalar for Complex64 {
    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn root(self) -> Self {
        self.sqrt()
    }
}

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `d` and
/// off-diagonal `e` (`e[i]` couples `i` and `i+1`). Values are returned in
/// place of `d`, unsorted.
pub(crate) fn tridiagonal_ql<T: QlScalar>(d: &mut [T], off: &[T]) -> Result<()> {
    let n = d.len();
    if n <= 1 {
        return Ok(());
    }
    let zero = T::from_f64(0.0);
    let one = T::from_f64(1.0);
    let two = T::from_f64(2.0);
    let mut e: Vec<T> = off.to_vec();
    e.resize(n, zero);
    let max_sweeps = 30 * n;
    let mut sweeps = 0;

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].modulus() + d[m + 1].modulus();
                if e[m].modulus() <= f64::EPSILON * dd || e[m] == zero {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            if sweeps >= max_sweeps {
                return Err(Error::NoConvergence {
                    iterations: sweeps,
                    deflated: l,
                    size: n,
                });
            }
            sweeps += 1;
            iter += 1;

            let mut g = if iter % 10 == 0 {
                // exceptional shift
                d[m] - (d[l] + T::from_f64(0.75 * e[l].modulus()))
            } else {
                let g0 = (d[l + 1] - d[l]) / (two * e[l]);
                let r = (g0 * g0 + one).root();
                let plus = g0 + r;
                let minus = g0 - r;
                let denom = if plus.modulus() >= minus.modulus() { plus } else { minus };
                d[m] - d[l] + e[l] / denom
            };
            let mut s = one;
            let mut c = one;
            let mut p = zero;
            let mut early_exit = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                let r = (f * f + g * g).root();
                e[i + 1] = r;
                if r.modulus() <= f64::MIN_POSITIVE {
                    if f.modulus() + g.modulus() > f64::MIN_POSITIVE {
                        return Err(Error::NoConvergence {
                            iterations: sweeps,
                            deflated: l,
                            size: n,
                        });
                    }
                    d[i + 1] = d[i + 1] - p;
                    e[m] = zero;
                    early_exit = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                let r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if early_exit {
                continue;
            }
            d[l] = d[l] - p;
            e[l] = g;
            e[m] = zero;
        }
    }
    Ok(())
}

/// Inverse iteration for an eigenvector of the complex symmetric tridiagonal
/// matrix `(d, e)` at the computed eigenvalue `lambda`. Returns a unit vector.
pub(crate) fn tridiagonal_eigenvector(d: &[Complex64], e: &[Complex64], lambda: Complex64) -> Vec<Complex64> {
    let n = d.len();
    if n == 1 {
        return vec![Complex64::new(1.0, 0.0)];
    }
    let scale = d
        .iter()
        .chain(e)
        .map(|z| z.norm())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let lu = TridiagonalLu::factor(
        e,
        &d.iter().map(|x| x - lambda).collect::<Vec<_>>(),
        e,
        f64::EPSILON * scale,
    );
    let mut x = vec![Complex64::new(1.0 / (n as f64).sqrt(), 0.0); n];
    for _ in 0..3 {
        lu.solve(&mut x);
        let nrm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(nrm > 0.0 && nrm.is_finite()) {
            break;
        }
        for z in &mut x {
            *z /= nrm;
        }
    }
    x
}

/// LU factorization with partial pivoting of a general tridiagonal matrix.
struct TridiagonalLu {
    l: Vec<Complex64>,
    diag: Vec<Complex64>,
    up1: Vec<Complex64>,
    up2: Vec<Complex64>,
    swapped: Vec<bool>,
}

impl TridiagonalLu {
    fn factor(sub: &[Complex64], diag: &[Complex64], sup: &[Complex64], tiny: f64) -> Self {
        let n = diag.len();
        let zero = Complex64::new(0.0, 0.0);
        let mut d = diag.to_vec();
        let mut du = sup.to_vec();
        let mut dl = sub.to_vec();
        let mut du2 = vec![zero; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n - 1 {
            if d[i].norm() >= dl[i].norm() {
                if d[i].norm() < tiny {
                    d[i] = Complex64::new(tiny, 0.0);
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du[i + 1];
                }
                swapped[i] = true;
            }
        }
        if d[n - 1].norm() < tiny {
            d[n - 1] = Complex64::new(tiny, 0.0);
        }
        TridiagonalLu {
            l: dl,
            diag: d,
            up1: du,
            up2: du2,
            swapped,
        }
    }

    fn solve(&self, b: &mut [Complex64]) {
        let n = b.len();
        for i in 0..n - 1 {
            if self.swapped[i] {
                b.swap(i, i + 1);
            }
            let t = b[i];
            b[i + 1] -= self.l[i] * t;
        }
        b[n - 1] /= self.diag[n - 1];
        if n > 1 {
            let t = b[n - 1];
            b[n - 2] = (b[n - 2] - self.up1[n - 2] * t) / self.diag[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.up1[i] * b[i + 1] - self.up2[i] * b[i + 2]) / self.diag[i];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigensolve::dense::eigenvalues_dense;
    use nalgebra::DMatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn dense(d: &[Complex64], e: &[Complex64]) -> DMatrix<Complex64> {
        let n = d.len();
        DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                d[i]
            } else if i + 1 == j {
                e[i]
            } else if j + 1 == i {
                e[j]
            } else {
                c(0.0, 0.0)
            }
        })
    }

    #[test]
    fn real_ql_known_spectrum() {
        // [[2,-1],[-1,2]] has eigenvalues 1, 3
        let mut d = vec![2.0, 2.0];
        tridiagonal_ql(&mut d, &[-1.0]).unwrap();
        d.sort_by(f64::total_cmp);
        assert!((d[0] - 1.0).abs() < 1e-15 && (d[1] - 3.0).abs() < 1e-15);
    }

    #[test]
    fn complex_ql_matches_dense_qr() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [2, 3, 10, 40, 120] {
            let d: Vec<Complex64> = (0..n)
                .map(|_| c(rng.random_range(-5.0..5.0), rng.random_range(-2.0..2.0)))
                .collect();
            let e: Vec<Complex64> = (0..n - 1).map(|_| c(rng.random_range(-3.0..3.0), 0.0)).collect();
            let mut vals = d.clone();
            tridiagonal_ql(&mut vals, &e).unwrap();
            let reference = eigenvalues_dense(&dense(&d, &e)).unwrap().values;
            let scale = reference.iter().map(|z| z.norm()).fold(1.0, f64::max);
            let mut used = vec![false; n];
            for v in &vals {
                let (j, dist) = reference
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| !used[*j])
                    .map(|(j, r)| (j, (r - v).norm()))
                    .min_by(|a, b| a.1.total_cmp(&b.1))
                    .unwrap();
                used[j] = true;
                assert!(dist < 1e-10 * scale, "n={n}: {v} off by {dist}");
            }
        }
    }

    #[test]
    fn inverse_iteration_residual() {
        let n = 50;
        let d: Vec<Complex64> = (0..n)
            .map(|i| c(2.0 + (i as f64 * 0.3).sin(), (i as f64 * 0.7).cos()))
            .collect();
        let e = vec![c(-1.0, 0.0); n - 1];
        let mut vals = d.clone();
        tridiagonal_ql(&mut vals, &e).unwrap();
        let m = dense(&d, &e);
        for &lam in vals.iter().step_by(7) {
            let x = tridiagonal_eigenvector(&d, &e, lam);
            let xv = nalgebra::DVector::from_vec(x);
            let r = &m * &xv - &xv * lam;
            assert!(r.norm() < 1e-9, "residual {}", r.norm());
        }
    }

    #[test]
    fn lu_solves_general_tridiagonal() {
        let sub = vec![c(1.0, 1.0), c(5.0, 0.0), c(-2.0, 0.5)];
        let diag = vec![c(0.1, 0.0), c(2.0, -1.0), c(0.0, 0.0), c(3.0, 0.0)];
        let sup = vec![c(2.0, 0.0), c(1.0, 1.0), c(-1.0, 0.0)];
        let m = DMatrix::from_fn(4, 4, |i, j| {
            if i == j {
                diag[i]
            } else if i + 1 == j {
                sup[i]
            } else if j + 1 == i {
                sub[j]
            } else {
                c(0.0, 0.0)
            }
        });
        let x_true = vec![c(1.0, 0.0), c(-1.0, 2.0), c(0.5, 0.5), c(0.0, -3.0)];
        let b = &m * nalgebra::DVector::from_vec(x_true.clone());
        let mut x: Vec<Complex64> = b.iter().copied().collect();
        TridiagonalLu::factor(&sub, &diag, &sup, 1e-300).solve(&mut x);
        for (a, b) in x.iter().zip(&x_true) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}
