//! First-order fluctuation laws of the scaled spectra as β → ∞.
//!
//! For both ensembles `√β·(λ_i − μ_i)` tends to `scale·G_i` where `G` is a
//! centered Gaussian vector. The models here hold `μ` and `Cov(G)` with the
//! scale. The first-order perturbation predictor and the largest-root edge
//! diagnostic live here too.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Deserialize;

use crate::ensembles::EnsembleKind;
use crate::format;
use crate::orthopoly::{hermite_root_eigvec, hermite_root_values, hermite_roots, laguerre_roots};
use crate::{Error, Result};

/// Frozen means and Gaussian fluctuation covariance of a scaled ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct FluctuationModel {
    pub kind: EnsembleKind,
    pub k: usize,
    /// Laguerre only.
    pub gamma: Option<f64>,
    /// `h_i/√(2k)` or `l_i/k`, descending.
    pub means: Vec<f64>,
    /// `Cov(G_i, G_j)`, symmetric.
    pub covariance: Vec<Vec<f64>>,
    /// `1/√(2k)` (Hermite) or `1/k` (Laguerre).
    pub scale: f64,
}

impl FluctuationModel {
    pub fn variance(&self, i: usize) -> f64 {
        self.covariance[i][i]
    }

    /// `Σ_ij Cov(G_i, G_j)`, i.e. `Var(Σ_i G_i)`.
    pub fn total_covariance(&self) -> f64 {
        self.covariance.iter().flatten().sum()
    }

    /// Value of `Var(Σ_i G_i)` implied by the trace of the sampled matrix:
    /// `k` for Hermite, `2k(k+γ-1)` for Laguerre.
    pub fn trace_identity_target(&self) -> f64 {
        let k = self.k as f64;
        match self.kind {
            EnsembleKind::Hermite => k,
            EnsembleKind::Laguerre => 2.0 * k * (k + self.gamma.unwrap_or(0.0) - 1.0),
        }
    }

    /// Smallest eigenvalue of the covariance matrix.
    pub fn min_covariance_eigenvalue(&self) -> f64 {
        let n = self.k;
        let m = DMatrix::from_fn(n, n, |i, j| self.covariance[i][j]);
        SymmetricEigen::new(m)
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// JSON export: `{kind, k, gamma?, means, covariance, scale}` with 17
    /// significant digits, plus an optional `meta` string.
    pub fn to_json(&self, meta: Option<&str>) -> String {
        let mut out = String::from("{");
        out.push_str(&format!(
            "\"kind\":{},",
            format::json_str(&self.kind.to_string())
        ));
        out.push_str(&format!("\"k\":{},", self.k));
        if let Some(g) = self.gamma {
            out.push_str(&format!("\"gamma\":{},", format::real(g)));
        }
        out.push_str(&format!("\"means\":{},", format::json_array(&self.means)));
        let rows: Vec<String> = self
            .covariance
            .iter()
            .map(|r| format::json_array(r))
            .collect();
        out.push_str(&format!("\"covariance\":[{}],", rows.join(",")));
        out.push_str(&format!("\"scale\":{}", format::real(self.scale)));
        if let Some(m) = meta {
            out.push_str(&format!(",\"meta\":{}", format::json_str(m)));
        }
        out.push('}');
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Raw {
            kind: String,
            k: usize,
            gamma: Option<f64>,
            means: Vec<f64>,
            covariance: Vec<Vec<f64>>,
            scale: f64,
        }
        let raw: Raw = serde_json::from_str(text)
            .map_err(|e| Error::Io(std::io::Error::new(std::io::ErrorKind::InvalidData, e)))?;
        let kind = match raw.kind.as_str() {
            "hermite" => EnsembleKind::Hermite,
            "laguerre" => EnsembleKind::Laguerre,
            _ => return Err(Error::Malformed("unknown ensemble kind")),
        };
        if raw.means.len() != raw.k || raw.covariance.len() != raw.k {
            return Err(Error::DimensionMismatch {
                expected: raw.k,
                found: raw.means.len(),
            });
        }
        Ok(FluctuationModel {
            kind,
            k: raw.k,
            gamma: raw.gamma,
            means: raw.means,
            covariance: raw.covariance,
            scale: raw.scale,
        })
    }
}

/// Polynomial values indexed by degree, recovered from a reversed eigenvector.
fn by_degree(eigvec: &[f64]) -> Vec<f64> {
    eigvec.iter().rev().copied().collect()
}

fn sum_sq(p: &[f64]) -> f64 {
    p.iter().map(|x| x * x).sum()
}

/// Hermite covariance entry from degree-indexed values `p`, `q` at two roots.
fn hermite_cov_entry(p: &[f64], q: &[f64]) -> f64 {
    let k = p.len();
    let diag: f64 = (0..k).map(|l| p[l] * p[l] * q[l] * q[l]).sum();
    let off: f64 = (0..k.saturating_sub(1))
        .map(|l| p[l + 1] * p[l] * q[l + 1] * q[l])
        .sum();
    (diag + off) / (sum_sq(p) * sum_sq(q))
}

/// Laguerre covariance entry, term by term as `2·[(γ+k-1)·… + A + B + C + D]`
/// over the squared norms.
fn laguerre_cov_entry(p: &[f64], q: &[f64], gamma: f64) -> f64 {
    let k = p.len();
    let kf = k as f64;
    let lead = (gamma + kf - 1.0) * p[k - 1].powi(2) * q[k - 1].powi(2);
    let (mut a, mut b, mut c, mut d) = (0.0, 0.0, 0.0, 0.0);
    for l in 1..k {
        let lf = l as f64;
        let lo = k - l - 1;
        let hi = k - l;
        a += (gamma + 2.0 * (kf - lf) - 1.0) * p[lo].powi(2) * q[lo].powi(2);
        b += (gamma + 2.0 * (kf - lf)) * p[lo] * q[lo] * p[hi] * q[hi];
        let w = (gamma + kf - lf).sqrt() * (kf - lf).sqrt();
        c += w * (p[lo].powi(2) * q[lo] * q[hi] + q[lo].powi(2) * p[lo] * p[hi]);
        d += w * (p[hi].powi(2) * q[lo] * q[hi] + q[hi].powi(2) * p[lo] * p[hi]);
    }
    2.0 * (lead + a + b + c + d) / (sum_sq(p) * sum_sq(q))
}

fn fill_symmetric(k: usize, entry: impl Fn(usize, usize) -> f64) -> Vec<Vec<f64>> {
    let mut cov = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in i..k {
            let c = entry(i, j);
            cov[i][j] = c;
            cov[j][i] = c;
        }
    }
    cov
}

pub fn hermite_fluctuation_model(k: usize) -> Result<FluctuationModel> {
    let fs = hermite_roots(k)?;
    let polys: Vec<Vec<f64>> = fs.eigvectors.iter().map(|v| by_degree(v)).collect();
    let scale = 1.0 / (2.0 * k as f64).sqrt();
    Ok(FluctuationModel {
        kind: EnsembleKind::Hermite,
        k,
        gamma: None,
        means: fs.roots.iter().map(|h| h * scale).collect(),
        covariance: fill_symmetric(k, |i, j| hermite_cov_entry(&polys[i], &polys[j])),
        scale,
    })
}

pub fn laguerre_fluctuation_model(k: usize, gamma: f64) -> Result<FluctuationModel> {
    let fs = laguerre_roots(k, gamma)?;
    let polys: Vec<Vec<f64>> = fs.eigvectors.iter().map(|v| by_degree(v)).collect();
    let scale = 1.0 / k as f64;
    Ok(FluctuationModel {
        kind: EnsembleKind::Laguerre,
        k,
        gamma: Some(gamma),
        means: fs.roots.iter().map(|l| l * scale).collect(),
        covariance: fill_symmetric(k, |i, j| laguerre_cov_entry(&polys[i], &polys[j], gamma)),
        scale,
    })
}

/// Eigenvalues of a symmetric matrix, descending, with matching unit
/// eigenvector columns.
pub fn sym_eigen_desc(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(m.clone());
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// `λ_i(A) + ε·q_iᵀ B q_i` for each eigenpair of `A`, descending in `λ_i(A)`.
///
/// Requires a simple spectrum: every gap above `1e-10·‖A‖₂`.
pub fn first_order_eig(a: &DMatrix<f64>, b: &DMatrix<f64>, eps: f64) -> Result<Vec<f64>> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::Malformed("A must be square"));
    }
    if b.nrows() != n || b.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: b.nrows(),
        });
    }
    let asym = (a - a.transpose()).amax();
    let bsym = (b - b.transpose()).amax();
    if asym > 1e-12 * a.amax().max(1.0) || bsym > 1e-12 * b.amax().max(1.0) {
        return Err(Error::Malformed("A and B must be symmetric"));
    }
    let (values, q) = sym_eigen_desc(a);
    let norm = values.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let threshold = 1e-10 * norm;
    let gap = values
        .windows(2)
        .map(|w| w[0] - w[1])
        .fold(f64::INFINITY, f64::min);
    if gap <= threshold {
        return Err(Error::DegenerateSpectrum { gap, threshold });
    }
    Ok(values
        .iter()
        .enumerate()
        .map(|(i, lam)| {
            let qi = q.column(i);
            lam + eps * (qi.transpose() * b * qi)[(0, 0)]
        })
        .collect())
}

/// One row of the largest-root edge diagnostic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeRow {
    pub k: usize,
    /// `k^{2/3}·(h_1/√(2k) − 1)`; tends to `a_1/2`.
    pub m_k: f64,
    /// `k^{1/3}·Var(G_1)/2`.
    pub t_k: f64,
}

pub fn airy_edge_diagnostic(k_values: &[usize]) -> Result<Vec<EdgeRow>> {
    k_values
        .iter()
        .map(|&k| {
            if k < 2 {
                return Err(Error::param("k", k as f64, "edge diagnostic needs k >= 2"));
            }
            let kf = k as f64;
            let h1 = hermite_root_values(k)?[0];
            let p = by_degree(&hermite_root_eigvec(k, h1));
            let var = hermite_cov_entry(&p, &p);
            Ok(EdgeRow {
                k,
                m_k: kf.powf(2.0 / 3.0) * (h1 / (2.0 * kf).sqrt() - 1.0),
                t_k: kf.cbrt() * var / 2.0,
            })
        })
        .collect()
}
