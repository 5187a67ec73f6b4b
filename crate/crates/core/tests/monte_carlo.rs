use betafreeze::verify::{fluctuation_mc_check, Thresholds, VerificationReport};
use betafreeze::{EnsembleSpec, LaguerreParam};

fn mean_error(r: &VerificationReport) -> f64 {
    r.checks
        .iter()
        .filter(|c| c.tolerance.is_finite())
        .map(|c| (c.observed - c.expected).abs())
        .sum()
}

#[test]
fn larger_beta_is_closer_to_the_limit() {
    let th = Thresholds::default();
    for spec in [
        |b| EnsembleSpec::hermite(3, b),
        |b| EnsembleSpec::laguerre(3, b, LaguerreParam::Gamma(1.0)),
    ] {
        let lo = fluctuation_mc_check(&spec(1e2).unwrap(), 20_000, 5, &th).unwrap();
        let hi = fluctuation_mc_check(&spec(1e6).unwrap(), 20_000, 5, &th).unwrap();
        assert!(
            mean_error(&hi) < mean_error(&lo),
            "{} vs {}",
            mean_error(&hi),
            mean_error(&lo)
        );
        assert!(hi.overall);
    }
}

#[test]
fn reports_are_reproducible() {
    let th = Thresholds::default();
    let spec = EnsembleSpec::laguerre(2, 1e4, LaguerreParam::P(3.0)).unwrap();
    let a = fluctuation_mc_check(&spec, 10_000, 12, &th).unwrap();
    let b = fluctuation_mc_check(&spec, 10_000, 12, &th).unwrap();
    assert_eq!(a.to_json(None), b.to_json(None));
}

#[test]
fn laguerre_k1_variance() {
    let spec = EnsembleSpec::laguerre(1, 1e4, LaguerreParam::Gamma(2.0)).unwrap();
    let r = fluctuation_mc_check(&spec, 100_000, 1, &Thresholds::default()).unwrap();
    let v = r.get("laguerre_k1_cov_1_1").unwrap();
    assert!((v.observed - 4.0).abs() < 0.2);
    assert!(r.overall);
}
