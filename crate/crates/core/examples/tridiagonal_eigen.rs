//! The symmetric tridiagonal eigensolver on its own.

use betafreeze::trieig::{eig_residual, eigh_tridiagonal};
use betafreeze::TridiagonalSym;

fn main() -> betafreeze::Result<()> {
    // discrete Laplacian: eigenvalues 2 - 2cos(jπ/(n+1))
    let n = 8;
    let t = TridiagonalSym::new(vec![2.0; n], vec![-1.0; n - 1])?;
    let eig = eigh_tridiagonal(&t, true)?;
    let vectors = eig.vectors.as_ref().unwrap();
    for (j, (l, v)) in eig.values.iter().zip(vectors).enumerate() {
        let exact = 2.0 - 2.0 * ((n - j) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
        println!(
            "{l:>10.6}  exact {exact:>10.6}  residual {:.1e}",
            eig_residual(&t, *l, v)?
        );
    }
    println!(
        "trace {} = sum {}",
        t.trace(),
        eig.values.iter().sum::<f64>()
    );
    Ok(())
}
