//! Level density of the GUE with k = 4: sampled histogram, exact density
//! and the sum-of-Gaussians approximation, plus the same comparison at β = 10.

use betafreeze::density::{
    build_histogram, density_grid, exact_level_density_beta2, mixture_for_spec,
};
use betafreeze::ensembles::sample_spectra;
use betafreeze::EnsembleSpec;

fn main() -> betafreeze::Result<()> {
    let spec = EnsembleSpec::hermite(4, 2.0)?;
    let pooled: Vec<f64> = sample_spectra(&spec, 40_000, 1)?
        .into_iter()
        .flat_map(|s| s.eigenvalues)
        .collect();
    let hist = build_histogram(&pooled, 25, (-1.25, 1.25))?;
    let mixture = mixture_for_spec(&spec)?;
    println!("{:>8} {:>9} {:>9} {:>9}", "x", "hist", "exact", "mixture");
    for (x, h) in hist.centers().iter().zip(&hist.density) {
        println!(
            "{x:>8.3} {h:>9.4} {:>9.4} {:>9.4}",
            exact_level_density_beta2(4, *x)?,
            mixture.pdf(*x)
        );
    }

    let grid = density_grid(&EnsembleSpec::hermite(4, 10.0)?, 11)?;
    println!("\nbeta = 10 mixture vs semicircle");
    for (i, x) in grid.x.iter().enumerate() {
        println!(
            "{x:>8.3} {:>9.4} {:>9.4}",
            grid.mixture[i],
            grid.semicircle.as_ref().unwrap()[i]
        );
    }
    Ok(())
}
