//! Normalized traces (1/m) Tr(Aⁿ) of the recurrence matrix approaching their limits.

use asymtop::dos::{trace_moment_empirical, trace_moment_limit, trace_moment_quadrature};
use asymtop::{build_recurrence, SpeciesExponents, TopParameters};

fn main() -> asymtop::Result<()> {
    let p = TopParameters::new(0.5, 2.0, 7.0)?;
    let beta_sq = p.beta_sq();
    let gamma = SpeciesExponents::new(0, 0, 0)?;
    println!("β² = {beta_sq}");
    for n in 1..=6 {
        let limit = trace_moment_limit(n, beta_sq);
        let quad = trace_moment_quadrature(n, beta_sq, 64);
        print!("n = {n}: limit {limit:+.10} (quadrature {quad:+.10})  errors:");
        for m in [100, 200, 400, 800] {
            let rec = build_recurrence(2 * m, gamma, &p)?;
            print!(" {:.2e}", (trace_moment_empirical(&rec, n)? - limit).abs());
        }
        println!();
    }
    Ok(())
}
