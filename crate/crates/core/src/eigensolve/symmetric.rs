use nalgebra::DMatrix;

use super::tridiagonal::tridiagonal_ql;
use crate::discretize::SymmetricMatrix;
use crate::error::{Error, Result};

/// Ascending eigenvalues of a real symmetric matrix.
pub fn hermitian_eigenvalues(h: &SymmetricMatrix) -> Result<Vec<f64>> {
    match h {
        SymmetricMatrix::Tridiagonal { diag, off } => {
            if off.len() + 1 != diag.len() && !(diag.is_empty() && off.is_empty()) {
                return Err(Error::Contract("off-diagonal length must be n - 1".into()));
            }
            let mut d = diag.clone();
            tridiagonal_ql(&mut d, off)?;
            d.sort_by(f64::total_cmp);
            Ok(d)
        }
        SymmetricMatrix::Dense(m) => hermitian_eigenvalues_dense(m),
    }
}

/// Householder tridiagonalization followed by implicit QL.
pub fn hermitian_eigenvalues_dense(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::Contract("matrix is not square".into()));
    }
    let scale = m.iter().map(|x| x.abs()).fold(0.0, f64::max);
    for j in 0..n {
        for i in 0..j {
            if (m[(i, j)] - m[(j, i)]).abs() > 1e-12 * scale {
                return Err(Error::Contract(format!(
                    "matrix is not symmetric: |H[{i},{j}] - H[{j},{i}]| = {:e}",
                    (m[(i, j)] - m[(j, i)]).abs()
                )));
            }
        }
    }
    let (mut d, e) = tridiagonalize(m.clone());
    tridiagonal_ql(&mut d, &e)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

fn tridiagonalize(mut a: DMatrix<f64>) -> (Vec<f64>, Vec<f64>) {
    let n = a.nrows();
    let mut off = Vec::with_capacity(n.saturating_sub(1));
    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let mut v: Vec<f64> = (k + 1..n).map(|i| a[(i, k)]).collect();
        let tail: f64 = v[1..].iter().map(|x| x * x).sum();
        if tail == 0.0 {
            off.push(v[0]);
            continue;
        }
        let alpha = -(tail + v[0] * v[0]).sqrt().copysign(v[0]);
        v[0] -= alpha;
        let tau = 2.0 / v.iter().map(|x| x * x).sum::<f64>();
        // p = tau A v on the trailing block, w = p - (tau/2)(vᵀp) v
        let mut p = vec![0.0; m];
        for (i, pi) in p.iter_mut().enumerate() {
            let mut s = 0.0;
            for (j, vj) in v.iter().enumerate() {
                s += a[(k + 1 + i, k + 1 + j)] * vj;
            }
            *pi = tau * s;
        }
        let vp: f64 = v.iter().zip(&p).map(|(x, y)| x * y).sum();
        let w: Vec<f64> = p.iter().zip(&v).map(|(pi, vi)| pi - 0.5 * tau * vp * vi).collect();
        for j in 0..m {
            for i in 0..m {
                a[(k + 1 + i, k + 1 + j)] -= v[i] * w[j] + w[i] * v[j];
            }
        }
        off.push(alpha);
    }
    if n >= 2 {
        off.push(a[(n - 1, n - 2)]);
    }
    let diag = (0..n).map(|i| a[(i, i)]).collect();
    (diag, off)
}
