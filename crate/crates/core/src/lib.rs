//! Frozen spectra and first-order eigenvalue fluctuations of the β-Hermite
//! and β-Laguerre ensembles.
//!
//! Both ensembles are sampled through their O(k) tridiagonal and bidiagonal
//! models. As β → ∞ the scaled spectrum freezes at the roots of Hermite or
//! Laguerre polynomials, and the `1/√β` fluctuations around those roots are
//! jointly Gaussian. The level density then becomes a sum of Gaussians.
//! A verification harness compares the limits against Monte Carlo.
//!
//! Module map:
//!
//! - [`orthopoly`]: orthonormal Hermite/Laguerre polynomials, freeze matrices, roots.
//! - [`trieig`]: symmetric tridiagonal eigensolver (implicit QL, Wilkinson shift).
//! - [`ensembles`]: seeded samplers, χ utilities, residual matrices.
//! - [`fluctuations`]: fluctuation covariance models, first-order perturbation, edge diagnostic.
//! - [`density`]: Gaussian mixtures, exact β = 2 level density, semicircle, histograms.
//! - [`verify`]: statistical and analytic checks producing [`verify::VerificationReport`]s.
//! - [`cli`]: the `betafreeze` command-line front end.

#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod density;
pub mod ensembles;
mod error;
pub mod fluctuations;
mod format;
pub mod orthopoly;
pub mod trieig;
pub mod verify;

pub use error::{Error, Result};

pub use density::{GaussianMixture, Histogram};
pub use ensembles::{EnsembleKind, EnsembleSpec, LaguerreParam, SpectrumSample};
pub use fluctuations::FluctuationModel;
pub use orthopoly::{Bidiagonal, FrozenSpectrum, TridiagonalSym};
pub use trieig::EigenResult;
pub use verify::{Check, VerificationReport};

/// Crate version, embedded in every output file header.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
