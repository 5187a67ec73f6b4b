//! Seeded samples of both ensembles and how they approach the frozen spectrum
//! as β grows. Laguerre runs use both parameterizations: γ fixed and p fixed.

use betafreeze::ensembles::{sample_spectra, write_samples_csv};
use betafreeze::fluctuations::{hermite_fluctuation_model, laguerre_fluctuation_model};
use betafreeze::{EnsembleKind, EnsembleSpec, LaguerreParam};

fn mean_spectrum(spec: &EnsembleSpec, n: usize) -> betafreeze::Result<Vec<f64>> {
    let samples = sample_spectra(spec, n, 2024)?;
    let mut mean = vec![0.0; spec.k()];
    for s in &samples {
        for (m, x) in mean.iter_mut().zip(&s.eigenvalues) {
            *m += x / n as f64;
        }
    }
    Ok(mean)
}

fn main() -> betafreeze::Result<()> {
    let k = 4;
    let specs = [
        EnsembleSpec::hermite(k, 2.0)?,
        EnsembleSpec::hermite(k, 100.0)?,
        EnsembleSpec::laguerre(k, 4.0, LaguerreParam::Gamma(1.0))?,
        EnsembleSpec::laguerre(k, 10.0, LaguerreParam::P(1.0))?,
        EnsembleSpec::laguerre(k, 100.0, LaguerreParam::P(1.0))?,
    ];
    for spec in &specs {
        let frozen = match spec.kind() {
            EnsembleKind::Hermite => hermite_fluctuation_model(k)?.means,
            EnsembleKind::Laguerre => laguerre_fluctuation_model(k, spec.gamma().unwrap())?.means,
        };
        println!("{}", spec.describe());
        println!(
            "  mean spectrum {:?}",
            mean_spectrum(spec, 20_000)?
                .iter()
                .map(|x| (x * 1e4).round() / 1e4)
                .collect::<Vec<_>>()
        );
        println!(
            "  frozen        {:?}",
            frozen
                .iter()
                .map(|x| (x * 1e4).round() / 1e4)
                .collect::<Vec<_>>()
        );
    }

    println!("\nCSV for two GUE samples:");
    let spec = EnsembleSpec::hermite(k, 2.0)?;
    let mut out = std::io::stdout().lock();
    write_samples_csv(
        &mut out,
        &[spec.describe(), "seed=7".into()],
        &sample_spectra(&spec, 2, 7)?,
    )?;
    Ok(())
}
