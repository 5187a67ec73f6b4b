//! Gaussian fluctuation laws: covariance of √β(λ − μ)/scale for both ensembles.

use betafreeze::fluctuations::{hermite_fluctuation_model, laguerre_fluctuation_model};
use betafreeze::FluctuationModel;

fn show(m: &FluctuationModel) {
    println!(
        "{} k={} gamma={:?} scale={:.6}",
        m.kind, m.k, m.gamma, m.scale
    );
    for row in &m.covariance {
        let cells: Vec<String> = row.iter().map(|c| format!("{c:>9.5}")).collect();
        println!("  {}", cells.join(" "));
    }
    println!(
        "  sum of entries {:.10}, identity target {}, min eigenvalue {:.3e}",
        m.total_covariance(),
        m.trace_identity_target(),
        m.min_covariance_eigenvalue()
    );
}

fn main() -> betafreeze::Result<()> {
    show(&hermite_fluctuation_model(2)?);
    show(&hermite_fluctuation_model(5)?);
    show(&laguerre_fluctuation_model(3, 1.0)?);

    let m = laguerre_fluctuation_model(2, 0.5)?;
    let json = m.to_json(Some("example"));
    println!("\n{json}");
    assert_eq!(FluctuationModel::from_json(&json)?, m);
    Ok(())
}
