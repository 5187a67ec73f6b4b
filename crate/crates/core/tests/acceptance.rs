//! Acceptance criteria, one PASS/FAIL line each. Tolerances are pinned here.

use std::time::{Duration, Instant};

use betafreeze::ensembles::{par_draws, residual_matrix, sample_raw, EnsembleMatrix};
use betafreeze::fluctuations::{
    airy_edge_diagnostic, hermite_fluctuation_model, laguerre_fluctuation_model,
};
use betafreeze::orthopoly::{hermite_roots, laguerre_roots};
use betafreeze::verify::{
    chi_normal_limit_check, density_agreement_check, empirical_moments, fluctuation_mc_check,
    fluctuation_samples, perturbation_order_check, Thresholds, VerificationReport,
};
use betafreeze::{EnsembleSpec, LaguerreParam};

struct Outcome {
    passed: bool,
    detail: String,
}

fn ok(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn summarize(r: &VerificationReport) -> String {
    match r.failures().next() {
        None => format!("{} checks passed", r.checks.len()),
        Some(c) => format!(
            "{} failed: observed={:.6e} expected={:.6e} tol={:.3e}",
            c.name, c.observed, c.expected, c.tolerance
        ),
    }
}

fn frozen_spectrum() -> Outcome {
    let h = hermite_roots(3).unwrap().roots;
    let want = [1.5f64.sqrt(), 0.0, -(1.5f64.sqrt())];
    let eh = h
        .iter()
        .zip(&want)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let l = laguerre_roots(2, 1.0).unwrap().roots;
    let want = [2.0 + 2f64.sqrt(), 2.0 - 2f64.sqrt()];
    let el = l
        .iter()
        .zip(&want)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    ok(
        eh < 1e-10 && el < 1e-10,
        format!("hermite err={eh:.2e} laguerre err={el:.2e} tol=1e-10"),
    )
}

fn hand_values() -> Outcome {
    let m = hermite_fluctuation_model(2).unwrap();
    let e = [
        (m.covariance[0][0] - 0.75).abs(),
        (m.covariance[1][1] - 0.75).abs(),
        (m.covariance[0][1] - 0.25).abs(),
        (m.covariance[1][0] - 0.25).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    ok(e < 1e-12, format!("max err={e:.2e} tol=1e-12"))
}

fn hermite_mc() -> Outcome {
    let spec = EnsembleSpec::hermite(2, 1e4).unwrap();
    let th = Thresholds {
        cov_abs: 0.0,
        ..Thresholds::default()
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let r = pool
        .install(|| fluctuation_mc_check(&spec, 200_000, 3, &th))
        .unwrap();
    let c = |n: &str| r.get(n).unwrap().observed;
    ok(
        r.overall,
        format!(
            "var1={:.4} var2={:.4} cov={:.4} rel tol 5%; {}",
            c("hermite_k2_cov_1_1"),
            c("hermite_k2_cov_2_2"),
            c("hermite_k2_cov_1_2"),
            summarize(&r)
        ),
    )
}

fn laguerre_mc() -> Outcome {
    let spec = EnsembleSpec::laguerre(1, 1e4, LaguerreParam::Gamma(2.0)).unwrap();
    let model = laguerre_fluctuation_model(1, 2.0).unwrap();
    let xs = fluctuation_samples(&spec, &model, 100_000, 4).unwrap();
    let (_, cov) = empirical_moments(&xs);
    let var = cov[0][0];
    let k1 = (var - 4.0).abs() <= 0.05 * 4.0;

    let spec = EnsembleSpec::laguerre(3, 1e4, LaguerreParam::Gamma(1.0)).unwrap();
    let th = Thresholds {
        cov_rel: 0.07,
        cov_abs: 0.0,
        cov_sigmas: 3.0,
        ..Thresholds::default()
    };
    let r = fluctuation_mc_check(&spec, 100_000, 5, &th).unwrap();
    ok(
        k1 && r.overall,
        format!("k=1 var={var:.4} (4 +- 5%); k=3 {}", summarize(&r)),
    )
}

fn trace_identities() -> Outcome {
    let mut worst: f64 = 0.0;
    for k in 1..=20 {
        let m = hermite_fluctuation_model(k).unwrap();
        worst = worst.max((m.total_covariance() - k as f64).abs() / k as f64);
        for g in [0.5, 1.0, 5.0] {
            let m = laguerre_fluctuation_model(k, g).unwrap();
            let t = 2.0 * k as f64 * (k as f64 + g - 1.0);
            worst = worst.max((m.total_covariance() - t).abs() / t);
        }
    }
    ok(worst < 1e-9, format!("max rel err={worst:.2e} tol=1e-9"))
}

fn chi_limit() -> Outcome {
    let th = Thresholds::default();
    let a = chi_normal_limit_check(1e4, 100_000, 6, &th).unwrap();
    let b = chi_normal_limit_check(1e6, 100_000, 6, &th).unwrap();
    let da = a.get("chi_ks_r=10000").unwrap().observed;
    let db = b.get("chi_ks_r=1000000").unwrap().observed;
    ok(
        da < 0.01 && db < da,
        format!("D(1e4)={da:.5} < 0.01, D(1e6)={db:.5} < D(1e4)"),
    )
}

fn perturbation_order() -> Outcome {
    let th = Thresholds::default();
    let eps = [1e-2, 5e-3, 2.5e-3, 1.25e-3];
    let mut ratios = Vec::new();
    let mut all = true;
    for seed in 0..10 {
        let r = perturbation_order_check(6, &eps, seed, &th).unwrap();
        all &= r.overall;
        ratios.extend(
            r.checks
                .iter()
                .filter(|c| c.name.starts_with("error_ratio"))
                .map(|c| c.observed),
        );
    }
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().copied().fold(0.0, f64::max);
    ok(
        all,
        format!(
            "{} ratios in [{lo:.4}, {hi:.4}], band [3.5, 4.5]",
            ratios.len()
        ),
    )
}

fn exact_density() -> Outcome {
    let spec = EnsembleSpec::hermite(4, 2.0).unwrap();
    let r = density_agreement_check(&spec, 40_000, 50, 7, &Thresholds::default()).unwrap();
    let tv = r.get("hermite_k4_beta2_tv_exact").unwrap().observed;
    ok(tv < 0.03, format!("TV={tv:.5} tol=0.03"))
}

fn mixture_overlap() -> Outcome {
    let spec = EnsembleSpec::hermite(4, 10.0).unwrap();
    let r = density_agreement_check(&spec, 100_000, 50, 8, &Thresholds::default()).unwrap();
    let tv = r.get("hermite_k4_beta10_tv_mixture").unwrap().observed;
    ok(tv < 0.05, format!("TV={tv:.5} tol=0.05"))
}

fn airy_edge() -> Outcome {
    const HALF_A1: f64 = -2.338_107_410_459_767 / 2.0;
    const T_LIMIT: f64 = 0.41050;
    let row = airy_edge_diagnostic(&[400]).unwrap()[0];
    let em = (row.m_k - HALF_A1).abs() / HALF_A1.abs();
    let et = (row.t_k - T_LIMIT).abs() / T_LIMIT;
    ok(
        em < 0.05 && et < 0.15,
        format!(
            "m_k={:.5} ({:.2}% off, tol 5%) t_k={:.5} ({:.2}% off, tol 15%)",
            row.m_k,
            100.0 * em,
            row.t_k,
            100.0 * et
        ),
    )
}

fn entry_variances(spec: &EnsembleSpec, n: usize, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let rows = par_draws(n, seed, |rng| {
        let z = residual_matrix(&sample_raw(spec, rng)?, spec)?;
        Ok(match z {
            EnsembleMatrix::Tridiagonal(t) => [t.diag(), t.offdiag()].concat(),
            EnsembleMatrix::Bidiagonal(b) => [b.diag(), b.subdiag()].concat(),
        })
    })
    .unwrap();
    let (_, cov) = empirical_moments(&rows);
    let k = spec.k();
    let v: Vec<f64> = (0..cov.len()).map(|i| cov[i][i]).collect();
    (v[..k].to_vec(), v[k..].to_vec())
}

fn residual_variances() -> Outcome {
    let beta = 1e6;
    let n = 10_000;
    let mut worst: f64 = 0.0;
    let h = EnsembleSpec::hermite(4, beta).unwrap();
    let (d, o) = entry_variances(&h, n, 9);
    d.iter().for_each(|v| worst = worst.max((v - 1.0).abs()));
    o.iter()
        .for_each(|v| worst = worst.max((v - 0.25).abs() / 0.25));
    let l = EnsembleSpec::laguerre(4, beta, LaguerreParam::Gamma(1.0)).unwrap();
    let (d, o) = entry_variances(&l, n, 10);
    d.iter()
        .chain(&o)
        .for_each(|v| worst = worst.max((v - 0.5).abs() / 0.5));
    ok(
        worst < 0.05,
        format!("max rel deviation={:.4} tol=0.05", worst),
    )
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome, u64);
    let criteria: [Criterion; 11] = [
        ("frozen spectrum exactness", frozen_spectrum, 1),
        ("hermite covariance hand values", hand_values, 1),
        ("hermite fluctuation monte carlo", hermite_mc, 30_000),
        ("laguerre fluctuation monte carlo", laguerre_mc, 60_000),
        ("covariance trace identities", trace_identities, 1_000),
        ("chi normal limit", chi_limit, 5_000),
        (
            "first-order perturbation error is quadratic",
            perturbation_order,
            1_000,
        ),
        (
            "beta=2 histogram vs exact level density",
            exact_density,
            10_000,
        ),
        (
            "beta=10 histogram vs gaussian mixture",
            mixture_overlap,
            20_000,
        ),
        ("largest-root edge diagnostic", airy_edge, 30_000),
        (
            "residual matrix entry variances",
            residual_variances,
            30_000,
        ),
    ];
    let mut failed = 0;
    for (i, (name, run, budget_ms)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = run();
        let dt = t.elapsed();
        let in_time = dt <= Duration::from_millis(*budget_ms);
        let passed = out.passed && in_time;
        failed += usize::from(!passed);
        println!(
            "{} {:>2} {}: {} [{:.3} s, budget {} s{}]",
            if passed { "PASS" } else { "FAIL" },
            i + 1,
            name,
            out.detail,
            dt.as_secs_f64(),
            *budget_ms as f64 / 1000.0,
            if in_time { "" } else { ", over budget" },
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
