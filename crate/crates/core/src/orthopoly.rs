//! Orthonormal Hermite and Laguerre polynomials and their Jacobi ("freeze")
//! matrices.
//!
//! Hermite polynomials are orthonormal for `e^{-x²}` on ℝ; Laguerre
//! polynomials of parameter γ are orthonormal for `x^γ e^{-x}` on `[0, ∞)`
//! and carry a positive leading coefficient. With that normalization the
//! reversed value vectors `(p_{k-1}(r), …, p_0(r))` at each root `r` are
//! exact eigenvectors of the freeze matrices built here.

use statrs::function::gamma::ln_gamma;

use crate::trieig::{eigh_tridiagonal, fix_sign, l2};
use crate::{Error, Result};

/// Symmetric tridiagonal matrix stored as its diagonal and first off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalSym {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl TridiagonalSym {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::EmptySize);
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(Error::DimensionMismatch {
                expected: diag.len() - 1,
                found: offdiag.len(),
            });
        }
        if diag.iter().chain(&offdiag).any(|x| !x.is_finite()) {
            return Err(Error::Malformed("non-finite entry"));
        }
        Ok(TridiagonalSym { diag, offdiag })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut acc = self.diag[i] * v[i];
                if i > 0 {
                    acc += self.offdiag[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    acc += self.offdiag[i] * v[i + 1];
                }
                acc
            })
            .collect()
    }

    /// Max absolute row sum; bounds the spectral radius.
    pub fn norm(&self) -> f64 {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i].abs();
                if i > 0 {
                    s += self.offdiag[i - 1].abs();
                }
                if i + 1 < n {
                    s += self.offdiag[i].abs();
                }
                s
            })
            .fold(0.0, f64::max)
    }

    pub fn trace(&self) -> f64 {
        self.diag.iter().sum()
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.diag.iter().map(|x| x * x).sum::<f64>()
            + 2.0 * self.offdiag.iter().map(|x| x * x).sum::<f64>()
    }

    pub fn scaled(&self, factor: f64) -> TridiagonalSym {
        TridiagonalSym {
            diag: self.diag.iter().map(|x| x * factor).collect(),
            offdiag: self.offdiag.iter().map(|x| x * factor).collect(),
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.len();
        let mut m = vec![vec![0.0; n]; n];
        for i in 0..n {
            m[i][i] = self.diag[i];
            if i + 1 < n {
                m[i][i + 1] = self.offdiag[i];
                m[i + 1][i] = self.offdiag[i];
            }
        }
        m
    }
}

/// Lower bidiagonal matrix: `diag[j]` at (j, j), `subdiag[j]` at (j+1, j).
#[derive(Debug, Clone, PartialEq)]
pub struct Bidiagonal {
    diag: Vec<f64>,
    subdiag: Vec<f64>,
}

impl Bidiagonal {
    pub fn new(diag: Vec<f64>, subdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::EmptySize);
        }
        if subdiag.len() + 1 != diag.len() {
            return Err(Error::DimensionMismatch {
                expected: diag.len() - 1,
                found: subdiag.len(),
            });
        }
        if diag.iter().chain(&subdiag).any(|x| !x.is_finite()) {
            return Err(Error::Malformed("non-finite entry"));
        }
        Ok(Bidiagonal { diag, subdiag })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn subdiag(&self) -> &[f64] {
        &self.subdiag
    }

    /// `B·Bᵀ`, which is symmetric tridiagonal for lower bidiagonal `B`.
    pub fn gram(&self) -> TridiagonalSym {
        let n = self.len();
        let diag = (0..n)
            .map(|j| {
                let s = if j > 0 { self.subdiag[j - 1] } else { 0.0 };
                self.diag[j] * self.diag[j] + s * s
            })
            .collect();
        let offdiag = (0..n - 1).map(|j| self.diag[j] * self.subdiag[j]).collect();
        TridiagonalSym { diag, offdiag }
    }
}

/// Roots of a Hermite/Laguerre polynomial with the matching freeze-matrix
/// eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct FrozenSpectrum {
    /// Strictly decreasing.
    pub roots: Vec<f64>,
    /// `eigvectors[i]` is the unit eigenvector for `roots[i]`, proportional to
    /// `(p_{k-1}(roots[i]), …, p_0(roots[i]))`, first entry positive.
    pub eigvectors: Vec<Vec<f64>>,
}

impl FrozenSpectrum {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }
}

fn check_x(x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::param("x", x, "must be finite"))
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma.is_finite() {
        Ok(())
    } else {
        Err(Error::param("gamma", gamma, "must be positive"))
    }
}

/// `H̃_0(x), …, H̃_n(x)`, orthonormal for `e^{-x²}`.
pub fn hermite_orthonormal_eval(n: usize, x: f64) -> Result<Vec<f64>> {
    check_x(x)?;
    let mut out = Vec::with_capacity(n + 1);
    out.push(std::f64::consts::PI.powf(-0.25));
    if n >= 1 {
        out.push(x * out[0] * 2.0_f64.sqrt());
    }
    for m in 1..n {
        let m_f = m as f64;
        let next = (x * out[m] - (m_f / 2.0).sqrt() * out[m - 1]) / ((m_f + 1.0) / 2.0).sqrt();
        out.push(next);
    }
    Ok(out)
}

/// `L̃^γ_0(x), …, L̃^γ_n(x)`, orthonormal for `x^γ e^{-x}` with positive
/// leading coefficients.
pub fn laguerre_orthonormal_eval(n: usize, gamma: f64, x: f64) -> Result<Vec<f64>> {
    check_gamma(gamma)?;
    check_x(x)?;
    let mut out = Vec::with_capacity(n + 1);
    out.push((-0.5 * ln_gamma(gamma + 1.0)).exp());
    for m in 0..n {
        let m_f = m as f64;
        let prev = if m > 0 {
            (m_f * (m_f + gamma)).sqrt() * out[m - 1]
        } else {
            0.0
        };
        let next = ((x - (2.0 * m_f + gamma + 1.0)) * out[m] - prev)
            / ((m_f + 1.0) * (m_f + gamma + 1.0)).sqrt();
        out.push(next);
    }
    Ok(out)
}

/// Jacobi matrix of the Hermite recurrence: zero diagonal,
/// `offdiag[j] = √(k-1-j)/√2` (0-based j).
pub fn hermite_freeze_matrix(k: usize) -> Result<TridiagonalSym> {
    if k == 0 {
        return Err(Error::EmptySize);
    }
    let offdiag = (1..k).rev().map(|j| (j as f64 / 2.0).sqrt()).collect();
    TridiagonalSym::new(vec![0.0; k], offdiag)
}

/// Laguerre freeze matrix `L_γ` and its bidiagonal factor `B_γ`
/// (`L_γ = B_γ B_γᵀ`). Eigenvalues of `L_γ` are the zeros of `L_k^{γ-1}`.
pub fn laguerre_freeze_matrix(k: usize, gamma: f64) -> Result<(TridiagonalSym, Bidiagonal)> {
    if k == 0 {
        return Err(Error::EmptySize);
    }
    check_gamma(gamma)?;
    let kf = k as f64;
    // 0-based row j: top-left γ+k-1, then 2(k-j-1)+γ+1.
    let diag = (0..k)
        .map(|j| {
            if j == 0 {
                gamma + kf - 1.0
            } else {
                2.0 * (kf - j as f64 - 1.0) + gamma + 1.0
            }
        })
        .collect();
    let offdiag = (0..k - 1)
        .map(|j| {
            let r = kf - 1.0 - j as f64;
            (gamma + r).sqrt() * r.sqrt()
        })
        .collect();
    let b_diag = (0..k)
        .map(|j| (gamma + kf - 1.0 - j as f64).sqrt())
        .collect();
    let b_sub = (0..k - 1).map(|j| (kf - 1.0 - j as f64).sqrt()).collect();
    Ok((
        TridiagonalSym::new(diag, offdiag)?,
        Bidiagonal::new(b_diag, b_sub)?,
    ))
}

/// Runs a three-term recurrence for `p_0..p_{k-1}`, rescaling on the fly so
/// large degrees never overflow, and returns the reversed unit vector.
fn recurrence_eigvec(k: usize, mut step: impl FnMut(usize, f64, f64) -> f64, p0: f64) -> Vec<f64> {
    let mut p = Vec::with_capacity(k);
    p.push(p0);
    for m in 0..k.saturating_sub(1) {
        let prev = if m > 0 { p[m - 1] } else { 0.0 };
        let next = step(m, p[m], prev);
        p.push(next);
        if next.abs() > 1e150 {
            p.iter_mut().for_each(|x| *x *= 1e-150);
        }
    }
    p.reverse();
    let norm = l2(&p);
    p.iter_mut().for_each(|x| *x /= norm);
    fix_sign(&mut p);
    p
}

/// Unit eigenvector of the k×k Hermite freeze matrix for root `x`,
/// proportional to `(H̃_{k-1}(x), …, H̃_0(x))`.
pub fn hermite_root_eigvec(k: usize, x: f64) -> Vec<f64> {
    recurrence_eigvec(
        k,
        |m, pm, pm1| {
            let m = m as f64;
            (x * pm - (m / 2.0).sqrt() * pm1) / ((m + 1.0) / 2.0).sqrt()
        },
        1.0,
    )
}

/// Unit eigenvector of `L_γ` for root `x`, proportional to
/// `(L̃^γ_{k-1}(x), …, L̃^γ_0(x))`.
pub fn laguerre_root_eigvec(k: usize, gamma: f64, x: f64) -> Vec<f64> {
    recurrence_eigvec(
        k,
        |m, pm, pm1| {
            let m = m as f64;
            ((x - (2.0 * m + gamma + 1.0)) * pm - (m * (m + gamma)).sqrt() * pm1)
                / ((m + 1.0) * (m + gamma + 1.0)).sqrt()
        },
        1.0,
    )
}

/// Zeros of the k-th Hermite polynomial, descending, exactly symmetric.
pub fn hermite_root_values(k: usize) -> Result<Vec<f64>> {
    let h = hermite_freeze_matrix(k)?;
    let mut roots = eigh_tridiagonal(&h, false)?.values;
    // the zero set is symmetric; average the two halves
    for i in 0..k / 2 {
        let r = 0.5 * (roots[i] - roots[k - 1 - i]);
        roots[i] = r;
        roots[k - 1 - i] = -r;
    }
    if k % 2 == 1 {
        roots[k / 2] = 0.0;
    }
    Ok(roots)
}

/// Zeros of the k-th Hermite polynomial (descending) with freeze-matrix
/// eigenvectors built from the polynomial values.
pub fn hermite_roots(k: usize) -> Result<FrozenSpectrum> {
    let roots = hermite_root_values(k)?;
    let eigvectors = roots.iter().map(|&x| hermite_root_eigvec(k, x)).collect();
    Ok(FrozenSpectrum { roots, eigvectors })
}

/// Eigenvalues of `L_γ` (zeros of `L_k^{γ-1}`), descending, with eigenvectors
/// built from `L̃^γ` values.
pub fn laguerre_roots(k: usize, gamma: f64) -> Result<FrozenSpectrum> {
    let (l, _) = laguerre_freeze_matrix(k, gamma)?;
    let roots = eigh_tridiagonal(&l, false)?.values;
    let eigvectors = roots
        .iter()
        .map(|&x| laguerre_root_eigvec(k, gamma, x))
        .collect();
    Ok(FrozenSpectrum { roots, eigvectors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trieig::eig_residual;

    const PI_M14: f64 = 0.751_125_544_464_942_5; // π^{-1/4}

    #[test]
    fn hermite_eval_examples() {
        assert_eq!(hermite_orthonormal_eval(0, 1.7).unwrap(), vec![PI_M14]);
        let v = hermite_orthonormal_eval(1, 0.0).unwrap();
        assert_eq!(v, vec![PI_M14, 0.0]);
        let v = hermite_orthonormal_eval(2, 0.5_f64.sqrt()).unwrap();
        assert!(v[2].abs() < 1e-15);
        assert!(hermite_orthonormal_eval(3, f64::NAN).is_err());
    }

    #[test]
    fn laguerre_eval_examples() {
        let v = laguerre_orthonormal_eval(0, 1.0, 5.0).unwrap();
        assert!((v[0] - 1.0).abs() < 1e-14);
        let x = 2.0 + 2.0_f64.sqrt();
        let v = laguerre_orthonormal_eval(1, 1.0, x).unwrap();
        assert!((v[1] - 1.0).abs() < 1e-14);
        let v = laguerre_orthonormal_eval(1, 1.0, 2.0).unwrap();
        assert_eq!(v[1], 0.0);
        assert!(laguerre_orthonormal_eval(1, 0.0, 1.0).is_err());
        assert!(laguerre_orthonormal_eval(1, -1.0, 1.0).is_err());
    }

    #[test]
    fn hermite_freeze_examples() {
        let h = hermite_freeze_matrix(1).unwrap();
        assert_eq!(h.diag(), &[0.0]);
        assert!(h.offdiag().is_empty());
        let h = hermite_freeze_matrix(2).unwrap();
        assert!((h.offdiag()[0] - 0.5_f64.sqrt()).abs() < 1e-16);
        let h = hermite_freeze_matrix(3).unwrap();
        assert!((h.offdiag()[0] - 1.0).abs() < 1e-15);
        assert!((h.offdiag()[1] - 0.5_f64.sqrt()).abs() < 1e-15);
        assert!(matches!(hermite_freeze_matrix(0), Err(Error::EmptySize)));
    }

    #[test]
    fn laguerre_freeze_examples() {
        let (l, b) = laguerre_freeze_matrix(1, 2.0).unwrap();
        assert_eq!(l.diag(), &[2.0]);
        assert!((b.diag()[0] - 2.0_f64.sqrt()).abs() < 1e-15);

        let (l, _) = laguerre_freeze_matrix(2, 1.0).unwrap();
        assert_eq!(l.diag(), &[2.0, 2.0]);
        assert!((l.offdiag()[0] - 2.0_f64.sqrt()).abs() < 1e-15);

        assert!(laguerre_freeze_matrix(3, 0.0).is_err());
    }

    #[test]
    fn bidiagonal_factor_reproduces_freeze_matrix() {
        for k in 1..30 {
            for &g in &[0.3, 1.0, 2.5, 7.0] {
                let (l, b) = laguerre_freeze_matrix(k, g).unwrap();
                let p = b.gram();
                for (x, y) in p.diag().iter().zip(l.diag()) {
                    assert!((x - y).abs() <= 1e-12 * y.abs().max(1.0));
                }
                for (x, y) in p.offdiag().iter().zip(l.offdiag()) {
                    assert!((x - y).abs() <= 1e-12 * y.abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn hermite_root_examples() {
        assert_eq!(hermite_roots(1).unwrap().roots, vec![0.0]);
        let r = hermite_roots(2).unwrap().roots;
        assert!((r[0] - 0.5_f64.sqrt()).abs() < 1e-15 && (r[1] + 0.5_f64.sqrt()).abs() < 1e-15);
        let r = hermite_roots(3).unwrap().roots;
        let s = 1.5_f64.sqrt();
        assert!((r[0] - s).abs() < 1e-14 && r[1] == 0.0 && (r[2] + s).abs() < 1e-14);
    }

    #[test]
    fn laguerre_root_examples() {
        let r = laguerre_roots(1, 2.0).unwrap().roots;
        assert_eq!(r, vec![2.0]);
        let r = laguerre_roots(2, 1.0).unwrap().roots;
        assert!((r[0] - (2.0 + 2.0_f64.sqrt())).abs() < 1e-14);
        assert!((r[1] - (2.0 - 2.0_f64.sqrt())).abs() < 1e-14);
    }

    #[test]
    fn classical_sign_convention_would_fail_k2() {
        // Classical L_n^γ alternates leading sign. With (-1)^n flipped values
        // the reversed vector is NOT an eigenvector of L_γ at k = 2.
        let (l, _) = laguerre_freeze_matrix(2, 1.0).unwrap();
        let x = 2.0 + 2.0_f64.sqrt();
        let p = laguerre_orthonormal_eval(1, 1.0, x).unwrap();
        let ours = [p[1], p[0]];
        let classical = [-p[1], p[0]];
        assert!(eig_residual(&l, x, &ours).unwrap() < 1e-14);
        assert!(eig_residual(&l, x, &classical).unwrap() > 1.0);
    }

    #[test]
    fn residuals_and_trace_identities() {
        for k in 1..=50 {
            let h = hermite_freeze_matrix(k).unwrap();
            let fs = hermite_roots(k).unwrap();
            let kf = k as f64;
            let sum: f64 = fs.roots.iter().sum();
            let sq: f64 = fs.roots.iter().map(|x| x * x).sum();
            assert!(sum.abs() < 1e-10, "k={k}");
            assert!((sq - kf * (kf - 1.0) / 2.0).abs() < 1e-10, "k={k}");
            for w in fs.roots.windows(2) {
                assert!(w[0] > w[1]);
            }
            for (r, v) in fs.roots.iter().zip(&fs.eigvectors) {
                assert!(eig_residual(&h, *r, v).unwrap() <= 1e-10 * h.norm());
                assert!(v[0] > 0.0);
            }

            for &g in &[0.5, 1.0, 5.0] {
                let (l, _) = laguerre_freeze_matrix(k, g).unwrap();
                let fs = laguerre_roots(k, g).unwrap();
                let sum: f64 = fs.roots.iter().sum();
                let target = kf * (kf + g - 1.0);
                assert!((sum - target).abs() <= 1e-9 * target, "k={k} g={g}");
                assert!(*fs.roots.last().unwrap() > 0.0);
                for (r, v) in fs.roots.iter().zip(&fs.eigvectors) {
                    assert!(
                        eig_residual(&l, *r, v).unwrap() <= 1e-10 * l.norm(),
                        "k={k} g={g}"
                    );
                }
            }
        }
    }

    #[test]
    fn polynomial_vectors_match_solver_vectors() {
        let h = hermite_freeze_matrix(12).unwrap();
        let solved = eigh_tridiagonal(&h, true).unwrap().vectors.unwrap();
        let fs = hermite_roots(12).unwrap();
        for (a, b) in solved.iter().zip(&fs.eigvectors) {
            for (x, y) in a.iter().zip(b) {
                assert!((x - y).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn large_k_vectors_do_not_overflow() {
        let fs = hermite_roots(1500).unwrap();
        assert!(fs.eigvectors[0].iter().all(|x| x.is_finite()));
        let h = hermite_freeze_matrix(1500).unwrap();
        assert!(eig_residual(&h, fs.roots[0], &fs.eigvectors[0]).unwrap() < 1e-10 * h.norm());
    }
}
