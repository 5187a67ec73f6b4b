//! Frozen spectra: Hermite and Laguerre polynomial roots as eigenvalues of
//! the freeze matrices, with eigenvectors built from the polynomial values.

use betafreeze::orthopoly::{
    hermite_freeze_matrix, hermite_roots, laguerre_freeze_matrix, laguerre_roots,
};
use betafreeze::trieig::eig_residual;

fn main() -> betafreeze::Result<()> {
    let k = 6;
    let h = hermite_freeze_matrix(k)?;
    let fs = hermite_roots(k)?;
    println!("Hermite roots, k = {k}");
    for (x, v) in fs.roots.iter().zip(&fs.eigvectors) {
        println!("  {x:>12.8}  residual {:.1e}", eig_residual(&h, *x, v)?);
    }
    let sumsq: f64 = fs.roots.iter().map(|x| x * x).sum();
    println!(
        "  sum of squares {sumsq:.12} (k(k-1)/2 = {})",
        k * (k - 1) / 2
    );

    let gamma = 1.5;
    let (l, b) = laguerre_freeze_matrix(k, gamma)?;
    let fs = laguerre_roots(k, gamma)?;
    println!(
        "\nLaguerre roots, k = {k}, gamma = {gamma} (L = B B^T, B diag {:?})",
        &b.diag()[..2]
    );
    for (x, v) in fs.roots.iter().zip(&fs.eigvectors) {
        println!("  {x:>12.8}  residual {:.1e}", eig_residual(&l, *x, v)?);
    }
    let sum: f64 = fs.roots.iter().sum();
    println!(
        "  sum {sum:.12} (k(k+gamma-1) = {})",
        k as f64 * (k as f64 + gamma - 1.0)
    );
    Ok(())
}
