//! Level-density curves and histograms.
//!
//! The sum-of-Gaussians approximation works for both ensembles. For β = 2
//! Hermite the exact density is also available.

use std::io::Write;

use statrs::function::erf::erfc;

use crate::ensembles::{EnsembleKind, EnsembleSpec};
use crate::fluctuations::{
    hermite_fluctuation_model, laguerre_fluctuation_model, FluctuationModel,
};
use crate::format;
use crate::{Error, Result};

const SQRT_2PI: f64 = 2.506_628_274_631_000_7;

/// Default number of plotting grid points.
pub const DEFAULT_GRID_POINTS: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Component {
    pub weight: f64,
    pub mu: f64,
    pub sigma: f64,
}

/// Equal-weight normal mixture, one component per eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianMixture {
    pub components: Vec<Component>,
}

impl GaussianMixture {
    pub fn pdf(&self, x: f64) -> f64 {
        self.components
            .iter()
            .map(|c| {
                let z = (x - c.mu) / c.sigma;
                c.weight * (-0.5 * z * z).exp() / (SQRT_2PI * c.sigma)
            })
            .sum()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let v: f64 = self
            .components
            .iter()
            .map(|c| c.weight * 0.5 * erfc(-(x - c.mu) / (c.sigma * std::f64::consts::SQRT_2)))
            .sum();
        v.clamp(0.0, 1.0)
    }
}

/// Sum-of-Gaussians level density: component i is
/// `N(μ_i, (scale·√Var(G_i)/√β)²)` with weight `1/k`.
pub fn gaussian_mixture(model: &FluctuationModel, beta: f64) -> Result<GaussianMixture> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::param("beta", beta, "must be positive and finite"));
    }
    let w = 1.0 / model.k as f64;
    let components = (0..model.k)
        .map(|i| Component {
            weight: w,
            mu: model.means[i],
            sigma: model.scale * model.variance(i).sqrt() / beta.sqrt(),
        })
        .collect();
    Ok(GaussianMixture { components })
}

pub fn mixture_pdf(m: &GaussianMixture, x: f64) -> f64 {
    m.pdf(x)
}

pub fn mixture_cdf(m: &GaussianMixture, x: f64) -> f64 {
    m.cdf(x)
}

/// Mixture built from the fluctuation model of `spec`.
pub fn mixture_for_spec(spec: &EnsembleSpec) -> Result<GaussianMixture> {
    let model = match spec.kind() {
        EnsembleKind::Hermite => hermite_fluctuation_model(spec.k())?,
        EnsembleKind::Laguerre => {
            laguerre_fluctuation_model(spec.k(), spec.gamma().unwrap_or(0.0))?
        }
    };
    gaussian_mixture(&model, spec.beta())
}

/// Exact level density of the k×k β = 2 Hermite ensemble in the scaled
/// variable `x = λ/(2√k)`: `s/k·Σ_{j<k} φ_j(s·x)²`, `s = 2√k`, with `φ_j` the
/// orthonormal functions for `e^{-y²/2}`.
pub fn exact_level_density_beta2(k: usize, x_scaled: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::EmptySize);
    }
    let s = 2.0 * (k as f64).sqrt();
    let y = s * x_scaled;
    let mut prev = 0.0;
    let mut cur = (-y * y / 4.0).exp() / SQRT_2PI.sqrt();
    let mut acc = cur * cur;
    for j in 0..k - 1 {
        let jf = j as f64;
        let next = (y * cur - jf.sqrt() * prev) / (jf + 1.0).sqrt();
        prev = cur;
        cur = next;
        acc += cur * cur;
    }
    Ok(s * acc / k as f64)
}

/// `(2/π)√(1−x²)` on `[-1, 1]`.
pub fn semicircle_pdf(x: f64) -> f64 {
    if x.abs() <= 1.0 {
        2.0 / std::f64::consts::PI * (1.0 - x * x).sqrt()
    } else {
        0.0
    }
}

/// Composite Simpson rule with `panels` (rounded up to even) subintervals.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let n = panels.max(2).next_multiple_of(2);
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

/// Density-normalized histogram over a fixed range. Bins are left-closed,
/// right-open; the last bin is closed.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub edges: Vec<f64>,
    /// Normalized over the in-range samples: `Σ density_b·width_b = 1`.
    pub density: Vec<f64>,
    pub counts: Vec<usize>,
    pub below: usize,
    pub above: usize,
}

impl Histogram {
    pub fn total(&self) -> usize {
        self.in_range() + self.below + self.above
    }

    pub fn in_range(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn in_range_fraction(&self) -> f64 {
        self.in_range() as f64 / self.total() as f64
    }

    pub fn width(&self, b: usize) -> f64 {
        self.edges[b + 1] - self.edges[b]
    }

    pub fn centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    /// Fraction of all samples (including out-of-range ones) in each bin.
    pub fn probabilities(&self) -> Vec<f64> {
        let n = self.total() as f64;
        self.counts.iter().map(|&c| c as f64 / n).collect()
    }
}

pub fn build_histogram(samples: &[f64], nbins: usize, range: (f64, f64)) -> Result<Histogram> {
    let (lo, hi) = range;
    if nbins == 0 {
        return Err(Error::param("nbins", 0.0, "need at least one bin"));
    }
    if !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return Err(Error::param("range", hi - lo, "need lo < hi"));
    }
    let width = (hi - lo) / nbins as f64;
    let edges: Vec<f64> = (0..=nbins)
        .map(|i| {
            if i == nbins {
                hi
            } else {
                lo + i as f64 * width
            }
        })
        .collect();
    let mut counts = vec![0usize; nbins];
    let (mut below, mut above) = (0, 0);
    for &x in samples {
        if x < lo || x.is_nan() {
            below += 1;
            continue;
        }
        if x > hi {
            above += 1;
            continue;
        }
        let mut b = (((x - lo) / width) as usize).min(nbins - 1);
        while b > 0 && x < edges[b] {
            b -= 1;
        }
        while b + 1 < nbins && x >= edges[b + 1] {
            b += 1;
        }
        counts[b] += 1;
    }
    let n_in: usize = counts.iter().sum();
    if n_in == 0 {
        return Err(Error::EmptySample(" inside the histogram range"));
    }
    let density = counts
        .iter()
        .enumerate()
        .map(|(b, &c)| c as f64 / (n_in as f64 * (edges[b + 1] - edges[b])))
        .collect();
    Ok(Histogram {
        edges,
        density,
        counts,
        below,
        above,
    })
}

/// Default scaled-variable range for plots and histograms of `spec`.
pub fn default_range(spec: &EnsembleSpec, mixture: &GaussianMixture) -> (f64, f64) {
    match spec.kind() {
        EnsembleKind::Hermite => (-1.25, 1.25),
        EnsembleKind::Laguerre => {
            let top = mixture.components.iter().map(|c| c.mu).fold(0.0, f64::max);
            (-0.1, top * 1.5)
        }
    }
}

/// Curves sampled on a uniform grid; absent curves are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid {
    pub x: Vec<f64>,
    pub mixture: Vec<f64>,
    pub exact_beta2: Option<Vec<f64>>,
    pub semicircle: Option<Vec<f64>>,
}

/// Mixture on `points` grid points over the default range; the exact curve
/// is included for β = 2 Hermite, the semicircle for every Hermite run.
pub fn density_grid(spec: &EnsembleSpec, points: usize) -> Result<DensityGrid> {
    if points < 2 {
        return Err(Error::param(
            "grid",
            points as f64,
            "need at least two grid points",
        ));
    }
    let mixture = mixture_for_spec(spec)?;
    let (lo, hi) = default_range(spec, &mixture);
    let step = (hi - lo) / (points - 1) as f64;
    let x: Vec<f64> = (0..points).map(|i| lo + i as f64 * step).collect();
    let hermite = spec.kind() == EnsembleKind::Hermite;
    let exact_beta2 = if hermite && spec.beta() == 2.0 {
        Some(
            x.iter()
                .map(|&v| exact_level_density_beta2(spec.k(), v))
                .collect::<Result<Vec<_>>>()?,
        )
    } else {
        None
    };
    Ok(DensityGrid {
        mixture: x.iter().map(|&v| mixture.pdf(v)).collect(),
        semicircle: hermite.then(|| x.iter().map(|&v| semicircle_pdf(v)).collect()),
        exact_beta2,
        x,
    })
}

/// `x,mixture,exact_beta2,semicircle` rows, absent curves as empty fields.
pub fn write_density_grid_csv<W: Write>(
    w: &mut W,
    meta: &[String],
    grid: &DensityGrid,
) -> Result<()> {
    for m in meta {
        writeln!(w, "# {m}")?;
    }
    writeln!(w, "x,mixture,exact_beta2,semicircle")?;
    for (i, &x) in grid.x.iter().enumerate() {
        writeln!(
            w,
            "{},{},{},{}",
            format::real(x),
            format::real(grid.mixture[i]),
            format::csv_real(grid.exact_beta2.as_ref().map(|v| v[i])),
            format::csv_real(grid.semicircle.as_ref().map(|v| v[i])),
        )?;
    }
    Ok(())
}
