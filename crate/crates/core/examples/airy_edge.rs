//! Largest Hermite root and its variance at the spectral edge, scaled by k^{2/3}.

use betafreeze::fluctuations::airy_edge_diagnostic;

fn main() -> betafreeze::Result<()> {
    const A1: f64 = -2.338_107_410_459_767;
    println!("{:>5} {:>10} {:>10}", "k", "m_k", "t_k");
    for row in airy_edge_diagnostic(&[2, 10, 50, 100, 200, 400, 800])? {
        println!("{:>5} {:>10.5} {:>10.5}", row.k, row.m_k, row.t_k);
    }
    println!("limits: a_1/2 = {:.5}, 0.41050", A1 / 2.0);
    Ok(())
}
