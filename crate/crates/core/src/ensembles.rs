//! Seeded samplers for the tridiagonal β-Hermite and bidiagonal β-Laguerre
//! models, along with the χ utilities they are built on.
//!
//! [`residual_matrix`] splits a raw sample into its frozen part and the
//! random remainder.
//!
//! Scaled conventions: Hermite samples are divided by `√(2kβ)`, Laguerre
//! samples (`B·Bᵀ`) by `kβ`. The `*_raw` samplers return the matrices before
//! that scaling.
//!
//! Parallel Monte Carlo draws batch `b` from ChaCha8 stream `b` of the run
//! seed, so results never depend on the worker count.

use std::fmt;
use std::io::Write;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use rayon::prelude::*;
use statrs::function::gamma::ln_gamma;

use crate::format;
use crate::orthopoly::{hermite_freeze_matrix, laguerre_freeze_matrix, Bidiagonal, TridiagonalSym};
use crate::trieig::eigh_tridiagonal;
use crate::{Error, Result};

/// Samples per RNG stream in the parallel drivers.
pub const BATCH_SIZE: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnsembleKind {
    Hermite,
    Laguerre,
}

impl fmt::Display for EnsembleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EnsembleKind::Hermite => "hermite",
            EnsembleKind::Laguerre => "laguerre",
        })
    }
}

/// How a Laguerre run is parameterized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LaguerreParam {
    /// The ensemble parameter `a` directly.
    A(f64),
    /// Fixed limiting polynomial parameter γ: `a = (β/2)(k+γ-1)`.
    Gamma(f64),
    /// Fixed weight power p in `λ^p e^{-λ/2}`: `a = p + 1 + (β/2)(k-1)`,
    /// `γ = 2(p+1)/β`.
    P(f64),
}

/// Resolves one Laguerre parameterization into `(a, γ)`, enforcing
/// `a > (k-1)β/2`.
pub fn resolve_laguerre_params(k: usize, beta: f64, param: LaguerreParam) -> Result<(f64, f64)> {
    check_k_beta(k, beta)?;
    let half_beta = beta / 2.0;
    let km1 = (k - 1) as f64;
    let (a, gamma) = match param {
        LaguerreParam::A(a) => (a, a / half_beta - km1),
        LaguerreParam::Gamma(g) => (half_beta * (k as f64 + g - 1.0), g),
        LaguerreParam::P(p) => (p + 1.0 + half_beta * km1, (p + 1.0) / half_beta),
    };
    let bound = km1 * half_beta;
    if !a.is_finite() || a <= bound || gamma <= 0.0 {
        return Err(Error::LaguerreConstraint { a, bound });
    }
    Ok((a, gamma))
}

fn check_k_beta(k: usize, beta: f64) -> Result<()> {
    if k == 0 {
        return Err(Error::EmptySize);
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::param("beta", beta, "must be positive and finite"));
    }
    Ok(())
}

/// A validated ensemble description.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleSpec {
    kind: EnsembleKind,
    k: usize,
    beta: f64,
    laguerre: Option<LaguerreResolved>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct LaguerreResolved {
    a: f64,
    gamma: f64,
    source: LaguerreParam,
}

impl EnsembleSpec {
    pub fn hermite(k: usize, beta: f64) -> Result<Self> {
        check_k_beta(k, beta)?;
        Ok(EnsembleSpec {
            kind: EnsembleKind::Hermite,
            k,
            beta,
            laguerre: None,
        })
    }

    pub fn laguerre(k: usize, beta: f64, param: LaguerreParam) -> Result<Self> {
        let (a, gamma) = resolve_laguerre_params(k, beta, param)?;
        Ok(EnsembleSpec {
            kind: EnsembleKind::Laguerre,
            k,
            beta,
            laguerre: Some(LaguerreResolved {
                a,
                gamma,
                source: param,
            }),
        })
    }

    pub fn kind(&self) -> EnsembleKind {
        self.kind
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Laguerre ensemble parameter `a`.
    pub fn a(&self) -> Option<f64> {
        self.laguerre.map(|l| l.a)
    }

    /// Limiting Laguerre polynomial parameter γ, at this run's β.
    pub fn gamma(&self) -> Option<f64> {
        self.laguerre.map(|l| l.gamma)
    }

    /// Weight power `p = a - 1 - (β/2)(k-1)`.
    pub fn p(&self) -> Option<f64> {
        self.laguerre
            .map(|l| l.a - 1.0 - self.beta / 2.0 * (self.k - 1) as f64)
    }

    pub fn laguerre_param(&self) -> Option<LaguerreParam> {
        self.laguerre.map(|l| l.source)
    }

    /// Factor mapping the raw model to the scaled one.
    pub fn scale_factor(&self) -> f64 {
        let kb = self.k as f64 * self.beta;
        match self.kind {
            EnsembleKind::Hermite => 1.0 / (2.0 * kb).sqrt(),
            EnsembleKind::Laguerre => 1.0 / kb,
        }
    }

    /// One-line `key=value` description used in output headers.
    pub fn describe(&self) -> String {
        let mut s = format!("ensemble={} k={} beta={}", self.kind, self.k, self.beta);
        if let (Some(a), Some(g), Some(p)) = (self.a(), self.gamma(), self.p()) {
            s.push_str(&format!(" a={a} gamma={g} p={p}"));
        }
        s
    }
}

/// Eigenvalues of one scaled sample, largest first.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSample {
    pub eigenvalues: Vec<f64>,
}

/// Either of the two band shapes produced by the samplers.
#[derive(Debug, Clone, PartialEq)]
pub enum EnsembleMatrix {
    Tridiagonal(TridiagonalSym),
    Bidiagonal(Bidiagonal),
}

impl EnsembleMatrix {
    pub fn len(&self) -> usize {
        match self {
            EnsembleMatrix::Tridiagonal(t) => t.len(),
            EnsembleMatrix::Bidiagonal(b) => b.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Deterministic RNG for `(seed, stream)`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// One draw from χ_r.
pub fn sample_chi<R: Rng + ?Sized>(r: f64, rng: &mut R) -> Result<f64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::param(
            "r",
            r,
            "chi degrees of freedom must be positive",
        ));
    }
    let g = Gamma::new(r / 2.0, 2.0).map_err(|_| Error::param("r", r, "invalid gamma shape"))?;
    Ok(g.sample(rng).sqrt())
}

/// `E[χ_r] = √2·Γ((r+1)/2)/Γ(r/2)`.
pub fn chi_mean(r: f64) -> Result<f64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::param(
            "r",
            r,
            "chi degrees of freedom must be positive",
        ));
    }
    Ok((0.5 * 2.0_f64.ln() + ln_gamma((r + 1.0) / 2.0) - ln_gamma(r / 2.0)).exp())
}

fn std_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

/// Unscaled Hermite model: diagonal `N(0,2)/√2`, off-diagonal `χ_{(k-j)β}/√2`.
pub fn sample_hermite_raw<R: Rng + ?Sized>(
    spec: &EnsembleSpec,
    rng: &mut R,
) -> Result<TridiagonalSym> {
    if spec.kind != EnsembleKind::Hermite {
        return Err(Error::Malformed("hermite sampler needs a hermite spec"));
    }
    let k = spec.k;
    let diag: Vec<f64> = (0..k).map(|_| std_normal(rng)).collect();
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let offdiag = (1..k)
        .rev()
        .map(|j| sample_chi(j as f64 * spec.beta, rng).map(|x| x * inv_sqrt2))
        .collect::<Result<Vec<_>>>()?;
    TridiagonalSym::new(diag, offdiag)
}

/// Scaled Hermite sample (raw model times `1/√(2kβ)`).
pub fn sample_hermite<R: Rng + ?Sized>(spec: &EnsembleSpec, rng: &mut R) -> Result<TridiagonalSym> {
    Ok(sample_hermite_raw(spec, rng)?.scaled(spec.scale_factor()))
}

/// Unscaled Laguerre bidiagonal factor: diagonal `χ_{2a-β(j-1)}`,
/// subdiagonal `χ_{β(k-j)}` (1-based j).
pub fn sample_laguerre_raw<R: Rng + ?Sized>(
    spec: &EnsembleSpec,
    rng: &mut R,
) -> Result<Bidiagonal> {
    let a = spec
        .a()
        .ok_or(Error::Malformed("laguerre sampler needs a laguerre spec"))?;
    let k = spec.k;
    let beta = spec.beta;
    let diag = (0..k)
        .map(|j| sample_chi(2.0 * a - beta * j as f64, rng))
        .collect::<Result<Vec<_>>>()?;
    let subdiag = (1..k)
        .rev()
        .map(|j| sample_chi(beta * j as f64, rng))
        .collect::<Result<Vec<_>>>()?;
    Bidiagonal::new(diag, subdiag)
}

/// Scaled Laguerre sample `B·Bᵀ/(kβ)`, kept tridiagonal.
pub fn sample_laguerre<R: Rng + ?Sized>(
    spec: &EnsembleSpec,
    rng: &mut R,
) -> Result<TridiagonalSym> {
    Ok(sample_laguerre_raw(spec, rng)?
        .gram()
        .scaled(spec.scale_factor()))
}

pub fn sample_raw<R: Rng + ?Sized>(spec: &EnsembleSpec, rng: &mut R) -> Result<EnsembleMatrix> {
    Ok(match spec.kind {
        EnsembleKind::Hermite => EnsembleMatrix::Tridiagonal(sample_hermite_raw(spec, rng)?),
        EnsembleKind::Laguerre => EnsembleMatrix::Bidiagonal(sample_laguerre_raw(spec, rng)?),
    })
}

pub fn sample_scaled<R: Rng + ?Sized>(spec: &EnsembleSpec, rng: &mut R) -> Result<TridiagonalSym> {
    match spec.kind {
        EnsembleKind::Hermite => sample_hermite(spec, rng),
        EnsembleKind::Laguerre => sample_laguerre(spec, rng),
    }
}

pub fn sample_spectrum<R: Rng + ?Sized>(
    spec: &EnsembleSpec,
    rng: &mut R,
) -> Result<SpectrumSample> {
    let t = sample_scaled(spec, rng)?;
    Ok(SpectrumSample {
        eigenvalues: eigh_tridiagonal(&t, false)?.values,
    })
}

/// Residual of a raw sample against the scaled-up freeze matrix:
/// Hermite `Z = raw − √β·H`, Laguerre `Z = raw_B − √β·B_γ`.
///
/// In law, Hermite diagonal entries tend to N(0,1) and off-diagonals to
/// N(0,1/4); every Laguerre bidiagonal entry tends to N(0,1/2).
pub fn residual_matrix(raw: &EnsembleMatrix, spec: &EnsembleSpec) -> Result<EnsembleMatrix> {
    if raw.len() != spec.k {
        return Err(Error::DimensionMismatch {
            expected: spec.k,
            found: raw.len(),
        });
    }
    let sb = spec.beta.sqrt();
    match (raw, spec.kind) {
        (EnsembleMatrix::Tridiagonal(t), EnsembleKind::Hermite) => {
            let h = hermite_freeze_matrix(spec.k)?;
            let diag = t
                .diag()
                .iter()
                .zip(h.diag())
                .map(|(x, f)| x - sb * f)
                .collect();
            let off = t
                .offdiag()
                .iter()
                .zip(h.offdiag())
                .map(|(x, f)| x - sb * f)
                .collect();
            Ok(EnsembleMatrix::Tridiagonal(TridiagonalSym::new(diag, off)?))
        }
        (EnsembleMatrix::Bidiagonal(b), EnsembleKind::Laguerre) => {
            let gamma = spec.gamma().expect("laguerre spec carries gamma");
            let (_, bg) = laguerre_freeze_matrix(spec.k, gamma)?;
            let diag = b
                .diag()
                .iter()
                .zip(bg.diag())
                .map(|(x, f)| x - sb * f)
                .collect();
            let sub = b
                .subdiag()
                .iter()
                .zip(bg.subdiag())
                .map(|(x, f)| x - sb * f)
                .collect();
            Ok(EnsembleMatrix::Bidiagonal(Bidiagonal::new(diag, sub)?))
        }
        _ => Err(Error::Malformed(
            "sample shape does not match ensemble kind",
        )),
    }
}

/// Runs `f` once per sample index `0..n`, batch `b` drawing from
/// `stream_rng(seed, b)`. Output order is the sample order.
pub fn par_draws<T, F>(n: usize, seed: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng) -> Result<T> + Sync,
{
    let batches = n.div_ceil(BATCH_SIZE);
    let chunks: Vec<Vec<T>> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = stream_rng(seed, b as u64);
            let len = BATCH_SIZE.min(n - b * BATCH_SIZE);
            (0..len).map(|_| f(&mut rng)).collect::<Result<Vec<T>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(chunks.into_iter().flatten().collect())
}

/// `n` scaled spectra from the parallel driver.
pub fn sample_spectra(spec: &EnsembleSpec, n: usize, seed: u64) -> Result<Vec<SpectrumSample>> {
    par_draws(n, seed, |rng| sample_spectrum(spec, rng))
}

/// Writes `sample_index,eig_index,value` rows (eig_index 1 = largest),
/// preceded by `# ` metadata lines.
pub fn write_samples_csv<W: Write>(
    w: &mut W,
    meta: &[String],
    samples: &[SpectrumSample],
) -> Result<()> {
    for m in meta {
        writeln!(w, "# {m}")?;
    }
    writeln!(w, "sample_index,eig_index,value")?;
    for (s, sample) in samples.iter().enumerate() {
        for (i, v) in sample.eigenvalues.iter().enumerate() {
            writeln!(w, "{},{},{}", s, i + 1, format::real(*v))?;
        }
    }
    Ok(())
}
