//! First-order eigenvalue perturbation λ_i(A + εB) ≈ λ_i(A) + ε q_iᵀ B q_i
//! and its quadratic error.

use betafreeze::fluctuations::{first_order_eig, sym_eigen_desc};
use betafreeze::verify::{perturbation_order_check, Thresholds};
use nalgebra::DMatrix;

fn main() -> betafreeze::Result<()> {
    let a = DMatrix::from_row_slice(3, 3, &[2.0, 0.5, 0.0, 0.5, 0.0, 0.3, 0.0, 0.3, -1.5]);
    let b = DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 0.2, 1.0, 1.0, 0.0, 0.2, 0.0, -1.0]);
    for eps in [1e-1, 5e-2, 2.5e-2, 1.25e-2] {
        let pred = first_order_eig(&a, &b, eps)?;
        let (truth, _) = sym_eigen_desc(&(&a + &b * eps));
        let err = pred
            .iter()
            .zip(&truth)
            .map(|(p, t)| (p - t).abs())
            .fold(0.0, f64::max);
        println!("eps {eps:<8} max error {err:.3e}");
    }

    let r = perturbation_order_check(6, &[1e-2, 5e-3, 2.5e-3], 11, &Thresholds::default())?;
    for c in &r.checks {
        println!("{:<32} {:.5e}", c.name, c.observed);
    }
    Ok(())
}
