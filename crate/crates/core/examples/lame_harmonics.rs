//! Lamé harmonics of degree 4 as polynomials, with their residuals.

use asymtop::harmonics::degree_harmonics;
use asymtop::TopParameters;

fn main() -> asymtop::Result<()> {
    let p = TopParameters::new(1.0, 2.0, 3.0)?;
    for h in degree_harmonics(4, &p)? {
        println!(
            "λ = {:.6}  γ = {}  θ = {:?}",
            h.lambda, h.harmonic.gamma, h.harmonic.theta_roots
        );
        println!(
            "  residuals: Laplacian {:.1e}, operator {:.1e}, Niven {:.1e}",
            h.laplacian_residual, h.operator_residual, h.niven_residual
        );
        for (e, c) in h.harmonic.coeffs.terms() {
            println!("  {c:+.6} x^{} y^{} z^{}", e[0], e[1], e[2]);
        }
    }
    Ok(())
}
