//! Runs the verification harness and prints each check.

use betafreeze::verify::{
    chi_normal_limit_check, density_agreement_check, fluctuation_mc_check, invariant_suite,
    Thresholds, VerificationReport,
};
use betafreeze::{EnsembleSpec, LaguerreParam};

fn print(r: &VerificationReport) {
    for c in &r.checks {
        println!(
            "{} {:<40} observed {:>12.5e} expected {:>12.5e} tol {:>10.3e}",
            if c.passed { "ok  " } else { "FAIL" },
            c.name,
            c.observed,
            c.expected,
            c.tolerance
        );
    }
}

fn main() -> betafreeze::Result<()> {
    let th = Thresholds::default();
    let inv = invariant_suite(8, &[0.5, 1.0, 5.0], &th)?;
    println!(
        "invariants: {} checks, overall {}",
        inv.checks.len(),
        inv.overall
    );

    print(&chi_normal_limit_check(1e4, 100_000, 1, &th)?);
    print(&fluctuation_mc_check(
        &EnsembleSpec::hermite(3, 1e4)?,
        100_000,
        2,
        &th,
    )?);
    print(&fluctuation_mc_check(
        &EnsembleSpec::laguerre(2, 1e4, LaguerreParam::Gamma(2.0))?,
        100_000,
        3,
        &th,
    )?);
    print(&density_agreement_check(
        &EnsembleSpec::hermite(4, 2.0)?,
        40_000,
        50,
        4,
        &th,
    )?);

    // far from the normal limit: this one is expected to fail
    print(&chi_normal_limit_check(1.0, 100_000, 5, &th)?);
    Ok(())
}
