//! Recurrence spectrum against the dense angular-momentum matrix.

use asymtop::oracle::compare_spectra;
use asymtop::spectrum::{degree_spectrum, trace_check};
use asymtop::TopParameters;

fn main() -> asymtop::Result<()> {
    let p = TopParameters::new(1.0, 1.01, 1.02)?;
    println!("{:>4} {:>14} {:>14}", "k", "oracle dev", "trace err");
    for k in [1, 5, 10, 20, 40, 60] {
        let cmp = compare_spectra(k, &p, 1e-8)?;
        let (sum, expected) = trace_check(&degree_spectrum(k, &p)?);
        println!(
            "{k:>4} {:>14.3e} {:>14.3e}",
            cmp.max_rel_deviation,
            ((sum - expected) / expected).abs()
        );
    }
    Ok(())
}
