//! Symmetric tridiagonal eigensolver.
//!
//! Implicit QL with Wilkinson-type shifts (the EISPACK `tql2` iteration),
//! deflating on `|e_i| <= eps * ‖T‖`. Eigenvectors are accumulated only on
//! request; the Monte Carlo loops ask for values only.

use crate::orthopoly::TridiagonalSym;
use crate::{Error, Result};

/// Per-eigenvalue sweep cap; exceeding it means a defect, not bad luck.
const MAX_SWEEPS: usize = 60;

/// Eigen-decomposition of a symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenResult {
    /// Eigenvalues, largest first.
    pub values: Vec<f64>,
    /// `vectors[i]` is the unit eigenvector for `values[i]`, sign-normalized
    /// so its first non-negligible entry is positive.
    pub vectors: Option<Vec<Vec<f64>>>,
}

pub fn eigh_tridiagonal(t: &TridiagonalSym, want_vectors: bool) -> Result<EigenResult> {
    let n = t.len();
    let mut d = t.diag().to_vec();
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(t.offdiag());

    // Row-major n×n accumulator, z[row * n + col].
    let mut z = if want_vectors {
        let mut id = vec![0.0; n * n];
        for i in 0..n {
            id[i * n + i] = 1.0;
        }
        Some(id)
    } else {
        None
    };

    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        // e[n-1] == 0, so m < n always holds here.

        if m > l {
            let mut sweeps = 0;
            loop {
                sweeps += 1;
                if sweeps > MAX_SWEEPS {
                    return Err(Error::NoConvergence { index: l, size: n });
                }

                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    let h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);

                    if let Some(z) = z.as_mut() {
                        for row in 0..n {
                            let base = row * n;
                            let h = z[base + i + 1];
                            z[base + i + 1] = s * z[base + i] + c * h;
                            z[base + i] = c * z[base + i] - s * h;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;

                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[b].total_cmp(&d[a]).then(a.cmp(&b)));

    let values = order.iter().map(|&i| d[i]).collect();
    let vectors = z.map(|z| {
        order
            .iter()
            .map(|&col| {
                let mut v: Vec<f64> = (0..n).map(|row| z[row * n + col]).collect();
                fix_sign(&mut v);
                v
            })
            .collect()
    });

    Ok(EigenResult { values, vectors })
}

/// `‖T·v − value·v‖₂ / ‖v‖₂`.
pub fn eig_residual(t: &TridiagonalSym, value: f64, vector: &[f64]) -> Result<f64> {
    if vector.len() != t.len() {
        return Err(Error::DimensionMismatch {
            expected: t.len(),
            found: vector.len(),
        });
    }
    let norm = l2(vector);
    if norm == 0.0 {
        return Err(Error::ZeroVector);
    }
    let tv = t.matvec(vector);
    let res: f64 = tv
        .iter()
        .zip(vector)
        .map(|(a, b)| (a - value * b).powi(2))
        .sum::<f64>()
        .sqrt();
    Ok(res / norm)
}

pub(crate) fn l2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Flip `v` so its first entry above 1e-12 of the max magnitude is positive.
pub(crate) fn fix_sign(v: &mut [f64]) {
    let scale = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-12 * scale) {
        if *first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}
