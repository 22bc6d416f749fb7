//! Dense complex eigensolver: balancing, Householder reduction to Hessenberg
//! form and single-shift implicit QR with deflation.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::ComplexSpectrum;
use crate::error::{Error, Result};

const EPS: f64 = f64::EPSILON;

#[inline]
fn cabs1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// All eigenvalues of a square complex matrix.
pub fn eigenvalues_dense(m: &DMatrix<Complex64>) -> Result<ComplexSpectrum> {
    Ok(eigen_dense(m, false)?.0)
}

/// Eigenvalues and, if requested, unit-norm right eigenvectors (as columns, in the same order).
pub fn eigen_dense(
    m: &DMatrix<Complex64>,
    want_vectors: bool,
) -> Result<(ComplexSpectrum, Option<DMatrix<Complex64>>)> {
    let n = m.nrows();
    if n == 0 || m.ncols() != n {
        return Err(Error::Contract(format!(
            "expected a non-empty square matrix, got {}x{}",
            n,
            m.ncols()
        )));
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Contract("matrix has non-finite entries".into()));
    }
    let norm = m.norm();
    let mut a = m.clone();
    let scale = balance(&mut a);
    let mut z = hessenberg(&mut a, want_vectors);
    let neglected = schur(&mut a, z.as_mut(), want_vectors)?;
    let values: Vec<Complex64> = (0..n).map(|i| a[(i, i)]).collect();
    let spectrum = ComplexSpectrum {
        values,
        residual_bound: n as f64 * EPS * norm + neglected,
    };
    let vectors = z.map(|z| {
        let mut v = triangular_eigenvectors(&a, &z);
        for j in 0..n {
            let mut col = v.column_mut(j);
            for (i, s) in scale.iter().enumerate() {
                col[i] *= *s;
            }
            let nrm = col.norm();
            if nrm > 0.0 {
                col /= Complex64::new(nrm, 0.0);
            }
        }
        v
    });
    Ok((spectrum, vectors))
}

/// Diagonal similarity `D⁻¹ A D` by powers of two that equalizes row and
/// column norms. Returns `D`.
fn balance(a: &mut DMatrix<Complex64>) -> Vec<f64> {
    let n = a.nrows();
    let mut d = vec![1.0; n];
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += cabs1(a[(j, i)]);
                    r += cabs1(a[(i, j)]);
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / 2.0;
            while c < g {
                f *= 2.0;
                c *= 4.0;
            }
            g = r * 2.0;
            while c >= g {
                f /= 2.0;
                c /= 4.0;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                d[i] *= f;
                for j in 0..n {
                    a[(i, j)] /= f;
                    a[(j, i)] *= f;
                }
            }
        }
    }
    d
}

/// Householder reduction to upper Hessenberg form; returns the accumulated
/// unitary factor when `accumulate` is set.
fn hessenberg(a: &mut DMatrix<Complex64>, accumulate: bool) -> Option<DMatrix<Complex64>> {
    let n = a.nrows();
    let mut q = accumulate.then(|| DMatrix::identity(n, n));
    let zero = Complex64::new(0.0, 0.0);
    for k in 0..n.saturating_sub(2) {
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| a[(i, k)]).collect();
        let tail: f64 = v[1..].iter().map(|z| z.norm_sqr()).sum();
        if tail == 0.0 {
            continue;
        }
        let alpha = (tail + v[0].norm_sqr()).sqrt();
        let phase = if v[0] == zero {
            Complex64::new(1.0, 0.0)
        } else {
            v[0] / v[0].norm()
        };
        v[0] += phase * alpha;
        let vv: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        let tau = 2.0 / vv;

        // left: rows k+1.., columns k..
        for j in k..n {
            let dot: Complex64 = v.iter().enumerate().map(|(t, vi)| vi.conj() * a[(k + 1 + t, j)]).sum();
            let f = dot * tau;
            for (t, vi) in v.iter().enumerate() {
                a[(k + 1 + t, j)] -= vi * f;
            }
        }
        // right: all rows, columns k+1..
        for i in 0..n {
            let dot: Complex64 = v.iter().enumerate().map(|(t, vi)| a[(i, k + 1 + t)] * vi).sum();
            let f = dot * tau;
            for (t, vi) in v.iter().enumerate() {
                a[(i, k + 1 + t)] -= f * vi.conj();
            }
        }
        a[(k + 1, k)] = -phase * alpha;
        for i in k + 2..n {
            a[(i, k)] = zero;
        }
        if let Some(q) = q.as_mut() {
            for i in 0..n {
                let dot: Complex64 = v.iter().enumerate().map(|(t, vi)| q[(i, k + 1 + t)] * vi).sum();
                let f = dot * tau;
                for (t, vi) in v.iter().enumerate() {
                    q[(i, k + 1 + t)] -= f * vi.conj();
                }
            }
        }
    }
    q
}

/// Plane rotation `G = [[c, s], [-conj(s), c]]` with `G [x; y] = [r; 0]`.
#[inline]
fn givens(x: Complex64, y: Complex64) -> (f64, Complex64) {
    if y == Complex64::new(0.0, 0.0) {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    let ax = x.norm();
    let ay = y.norm();
    let nrm = ax.hypot(ay);
    if ax == 0.0 {
        return (0.0, y.conj() / ay);
    }
    (ax / nrm, (x / ax) * y.conj() / nrm)
}

/// Reduces Hessenberg `h` to upper triangular Schur form in place (the full
/// form when `full` is set, otherwise only the diagonal is meaningful).
/// Returns the sum of neglected subdiagonal moduli.
fn schur(h: &mut DMatrix<Complex64>, mut z: Option<&mut DMatrix<Complex64>>, full: bool) -> Result<f64> {
    let n = h.nrows();
    let zero = Complex64::new(0.0, 0.0);
    let max_sweeps = 30 * n.max(1);
    let mut sweeps = 0;
    let mut neglected = 0.0;
    let mut hnorm = 0.0f64;
    for j in 0..n {
        for i in 0..=(j + 1).min(n - 1) {
            hnorm = hnorm.max(cabs1(h[(i, j)]));
        }
    }
    let small = f64::MIN_POSITIVE * n as f64 / EPS;

    let mut ihi = n as isize - 1;
    while ihi >= 0 {
        let hi = ihi as usize;
        let mut its = 0;
        loop {
            // locate a negligible subdiagonal entry
            let mut l = hi;
            while l > 0 {
                let sub = cabs1(h[(l, l - 1)]);
                if sub <= small {
                    break;
                }
                let mut tst = cabs1(h[(l - 1, l - 1)]) + cabs1(h[(l, l)]);
                if tst == 0.0 {
                    tst = hnorm;
                }
                if sub <= EPS * tst {
                    break;
                }
                l -= 1;
            }
            if l > 0 {
                neglected += h[(l, l - 1)].norm();
                h[(l, l - 1)] = zero;
            }
            if l == hi {
                break;
            }
            if sweeps >= max_sweeps {
                return Err(Error::NoConvergence {
                    iterations: sweeps,
                    deflated: n - 1 - hi,
                    size: n,
                });
            }
            sweeps += 1;
            its += 1;

            let shift = if its % 10 == 0 {
                // exceptional shift
                let anchor = if its % 20 == 0 { hi } else { l + 1 };
                h[(hi, hi)] + 0.75 * h[(anchor, anchor - 1)].re.abs()
            } else {
                wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
            };

            let (row_lo, col_hi) = if full { (0, n - 1) } else { (l, hi) };
            for k in l..hi {
                let (x, y) = if k == l {
                    (h[(l, l)] - shift, h[(l + 1, l)])
                } else {
                    (h[(k, k - 1)], h[(k + 1, k - 1)])
                };
                let (c, s) = givens(x, y);
                let start = if k == l { l } else { k - 1 };
                for j in start..=col_hi {
                    let a = h[(k, j)];
                    let b = h[(k + 1, j)];
                    h[(k, j)] = a * c + s * b;
                    h[(k + 1, j)] = -s.conj() * a + b * c;
                }
                if k > l {
                    h[(k + 1, k - 1)] = zero;
                }
                let row_end = (k + 2).min(hi);
                for i in row_lo..=row_end {
                    let a = h[(i, k)];
                    let b = h[(i, k + 1)];
                    h[(i, k)] = a * c + b * s.conj();
                    h[(i, k + 1)] = -a * s + b * c;
                }
                if let Some(z) = z.as_deref_mut() {
                    for i in 0..n {
                        let a = z[(i, k)];
                        let b = z[(i, k + 1)];
                        z[(i, k)] = a * c + b * s.conj();
                        z[(i, k + 1)] = -a * s + b * c;
                    }
                }
            }
        }
        ihi -= 1;
    }
    Ok(neglected)
}

/// Eigenvalue of `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let p = (a - d) * 0.5;
    let bc = b * c;
    let disc = (p * p + bc).sqrt();
    let plus = p + disc;
    let minus = p - disc;
    let big = if plus.norm() >= minus.norm() { plus } else { minus };
    if big == Complex64::new(0.0, 0.0) {
        d
    } else {
        d - bc / big
    }
}

/// Eigenvectors of the upper triangular `t`, mapped back by the Schur basis `z`.
fn triangular_eigenvectors(t: &DMatrix<Complex64>, z: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = t.nrows();
    let tnorm = t.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let smin = (EPS * tnorm).max(f64::MIN_POSITIVE);
    let mut x = DMatrix::zeros(n, n);
    for k in 0..n {
        let lambda = t[(k, k)];
        x[(k, k)] = Complex64::new(1.0, 0.0);
        for j in (0..k).rev() {
            let mut acc = Complex64::new(0.0, 0.0);
            for m in j + 1..=k {
                acc += t[(j, m)] * x[(m, k)];
            }
            let mut denom = t[(j, j)] - lambda;
            if denom.norm() < smin {
                denom = Complex64::new(smin, 0.0);
            }
            x[(j, k)] = -acc / denom;
            // rescale to avoid overflow in badly conditioned columns
            let mag = x[(j, k)].norm();
            if mag > 1e100 {
                for m in j..=k {
                    x[(m, k)] /= mag;
                }
            }
        }
    }
    z * x
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn jordan_block() {
        let m = DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let s = eigenvalues_dense(&m).unwrap();
        assert_eq!(s.values, vec![c(0.0, 0.0); 2]);
    }

    #[test]
    fn diagonal() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0, 2.0), c(-3.0, 0.0)]));
        let s = eigenvalues_dense(&m).unwrap();
        assert_eq!(sorted(s.values), vec![c(-3.0, 0.0), c(1.0, 2.0)]);
    }

    #[test]
    fn companion_matrix_roots() {
        // roots 1, 2i, -3: x³ + (2 - 2i) x² + (-3 - 4i) x + 6i ... build via companion of (x-1)(x-2i)(x+3)
        let roots = [c(1.0, 0.0), c(0.0, 2.0), c(-3.0, 0.0)];
        let (r1, r2, r3) = (roots[0], roots[1], roots[2]);
        let a2 = -(r1 + r2 + r3);
        let a1 = r1 * r2 + r1 * r3 + r2 * r3;
        let a0 = -(r1 * r2 * r3);
        let one = c(1.0, 0.0);
        let z = c(0.0, 0.0);
        let m = DMatrix::from_row_slice(3, 3, &[-a2, -a1, -a0, one, z, z, z, one, z]);
        let s = eigenvalues_dense(&m).unwrap();
        for r in roots {
            let d = s.values.iter().map(|v| (v - r).norm()).fold(f64::INFINITY, f64::min);
            assert!(d < 1e-12, "{r} missing: {:?}", s.values);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(eigenvalues_dense(&DMatrix::<Complex64>::zeros(0, 0)).is_err());
        assert!(eigenvalues_dense(&DMatrix::<Complex64>::zeros(2, 3)).is_err());
        let mut m = DMatrix::<Complex64>::zeros(2, 2);
        m[(0, 1)] = c(f64::NAN, 0.0);
        assert!(eigenvalues_dense(&m).is_err());
    }

    #[test]
    fn eigenvectors_have_small_residual() {
        let n = 12;
        let m = DMatrix::from_fn(n, n, |i, j| {
            c(((i * 7 + j * 3) % 11) as f64 - 5.0, ((i * 5 + j * 2) % 7) as f64 - 3.0)
        });
        let (s, v) = eigen_dense(&m, true).unwrap();
        let v = v.unwrap();
        for k in 0..n {
            let x = v.column(k);
            let r = &m * x - x * s.values[k];
            assert!(r.norm() < 1e-10 * m.norm(), "residual {}", r.norm());
        }
    }

    #[test]
    fn vectors_do_not_change_values() {
        let n = 9;
        let m = DMatrix::from_fn(n, n, |i, j| c((i as f64 - j as f64).sin(), (i * j) as f64 / 10.0));
        let a = eigenvalues_dense(&m).unwrap();
        let (b, _) = eigen_dense(&m, true).unwrap();
        for (x, y) in sorted(a.values).iter().zip(sorted(b.values)) {
            assert!((x - y).norm() < 1e-11);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn trace_and_determinant_preserved(entries in prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 16)) {
            let m = DMatrix::from_iterator(4, 4, entries.iter().map(|&(a, b)| c(a, b)));
            let s = eigenvalues_dense(&m).unwrap();
            let tr: Complex64 = s.values.iter().sum();
            prop_assert!((tr - m.trace()).norm() <= 1e-10 * (1.0 + m.norm()));
            let det: Complex64 = s.values.iter().product();
            let lu = m.clone().lu().determinant();
            prop_assert!((det - lu).norm() <= 1e-8 * (1.0 + m.norm()).powi(4));
        }
    }
}
