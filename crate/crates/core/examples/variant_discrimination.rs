//! Which limit measure the spectra follow, near the spherical top.

use asymtop::dos::{discriminate_variants, TestFunction};
use asymtop::TopParameters;

fn main() -> asymtop::Result<()> {
    let p = TopParameters::new(1.0, 1.0201, 1.0404)?;
    let fs: Vec<TestFunction> = [0.5, 1.0, 1.5]
        .iter()
        .map(|&c| TestFunction::bump(c, 0.1))
        .collect::<asymtop::Result<_>>()?;
    let report = discriminate_variants(&p, &[50, 100, 200], &fs, 64)?;
    for (i, k) in report.ks.iter().enumerate() {
        println!(
            "k = {k:>3}: resolved error {:.3e}, printed error {:.3e}",
            report.resolved_errors[i], report.printed_errors[i]
        );
    }
    println!("winner: {} (rate consistent: {})", report.winner, report.rate_ok);
    Ok(())
}
