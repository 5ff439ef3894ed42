//! Empirical density of √λ/k against its limit for growing k.

use asymtop::dos::{limit_dos, sample_range, EmpiricalDos, LimitVariant, TestFunction};
use asymtop::{degree_spectrum, TopParameters};

fn main() -> asymtop::Result<()> {
    let p = TopParameters::new(1.0, 2.0, 3.0)?;
    let bumps = [(1.05, 0.1), (1.2, 0.15), (1.4, 0.15), (1.55, 0.15), (1.68, 0.1)];
    let fs: Vec<TestFunction> = bumps
        .iter()
        .map(|&(c, w)| TestFunction::bump(c, w))
        .collect::<asymtop::Result<_>>()?;
    let limits: Vec<f64> = fs
        .iter()
        .map(|f| limit_dos(f, &p, LimitVariant::Resolved, 64))
        .collect::<asymtop::Result<_>>()?;

    for k in [25, 50, 100, 200, 400] {
        let dos = EmpiricalDos::from_spectrum(&degree_spectrum(k, &p)?)?;
        let worst = fs
            .iter()
            .zip(&limits)
            .map(|(f, l)| (dos.integrate(f) - l).abs())
            .fold(0.0, f64::max);
        println!("k = {k:>3}: max |empirical − limit| = {worst:.3e}");
    }

    let k = 200;
    let dos = EmpiricalDos::from_spectrum(&degree_spectrum(k, &p)?)?;
    let (lo, hi) = sample_range(k, &p);
    let (edges, counts) = dos.histogram(lo, hi, 12);
    println!("histogram of √λ/k at k = {k}:");
    for (i, c) in counts.iter().enumerate() {
        println!("  [{:.3}, {:.3}) {}", edges[i], edges[i + 1], "#".repeat(*c / 4));
    }
    Ok(())
}
