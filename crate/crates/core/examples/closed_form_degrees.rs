//! Low-degree spectra of the top with α² = (1, 2, 3), grouped by species.

use asymtop::{degree_spectrum, TopParameters};

fn main() -> asymtop::Result<()> {
    let p = TopParameters::new(1.0, 2.0, 3.0)?;
    for k in 0..=4 {
        let s = degree_spectrum(k, &p)?;
        println!("k = {k}");
        for line in &s.lines {
            println!(
                "  λ = {:>10.6}  species {}  γ = {}  ν̃/μ = {:+.6}",
                line.lambda,
                line.species(),
                line.gamma,
                line.nu_tilde_over_mu
            );
        }
    }
    Ok(())
}
