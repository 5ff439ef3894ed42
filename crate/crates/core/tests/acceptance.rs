//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::Instant;

use asymtop::dos::{
    limit_dos, trace_moment_empirical, trace_moment_limit, trace_moment_quadrature, EmpiricalDos,
    LimitVariant, TestFunction,
};
use asymtop::harmonics::{cartesian_from_spheroconal, degree_harmonics, spheroconal_from_cartesian};
use asymtop::oracle::{max_relative_deviation, oracle_spectrum};
use asymtop::spectrum::{operator_sandwich, trace_check, van_vleck_window};
use asymtop::{build_recurrence, degree_spectrum, SpeciesExponents, TopParameters};
use rand::{rngs::StdRng, Rng, SeedableRng};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn alpha(a: f64, b: f64, c: f64) -> TopParameters {
    TopParameters::new(a, b, c).expect("valid parameters")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn closed_form_degrees() -> Outcome {
    let p = alpha(1.0, 2.0, 3.0);
    let r3 = 3f64.sqrt();
    let cases: [(usize, Vec<f64>); 2] = [
        (1, vec![3.0, 4.0, 5.0]),
        (2, vec![12.0 - 2.0 * r3, 9.0, 12.0, 15.0, 12.0 + 2.0 * r3]),
    ];
    let mut worst = 0.0f64;
    for (k, expected) in cases {
        let got = degree_spectrum(k, &p).map_err(|e| e.to_string())?.eigenvalues();
        ensure(got.len() == expected.len(), || format!("k={k}: {} eigenvalues", got.len()))?;
        for (g, e) in got.iter().zip(&expected) {
            worst = worst.max((g - e).abs());
        }
    }
    ensure(worst <= 1e-12, || format!("max abs error {worst:e}"))?;
    Ok(format!("max abs error {worst:.1e}"))
}

fn oracle_equivalence() -> Outcome {
    let grid = [
        alpha(1.0, 2.0, 3.0),
        alpha(1.0, 1.01, 1.02),
        alpha(0.5, 2.0, 7.0),
        alpha(1.0, 1.5, 10.0),
        alpha(2.0, 5.0, 5.5),
    ];
    let mut worst = 0.0f64;
    for p in &grid {
        for k in 0..=60 {
            let rec = degree_spectrum(k, p).map_err(|e| e.to_string())?.eigenvalues();
            let ora = oracle_spectrum(k, p).map_err(|e| e.to_string())?;
            let dev = max_relative_deviation(&rec, &ora);
            ensure(dev <= 1e-8, || format!("α={p}, k={k}: deviation {dev:e}"))?;
            worst = worst.max(dev);
        }
    }
    Ok(format!("5 parameter sets, k ≤ 60, max relative deviation {worst:.1e}"))
}

fn counts_and_bounds() -> Outcome {
    let p = alpha(1.0, 2.0, 3.0);
    for k in 0..=500usize {
        let s = degree_spectrum(k, &p).map_err(|e| e.to_string())?;
        ensure(s.len() == 2 * k + 1, || format!("k={k}: {} eigenvalues", s.len()))?;
        let (lo, hi) = van_vleck_window(k, &p);
        let (slo, shi) = operator_sandwich(k, &p);
        for l in &s.lines {
            ensure(l.lambda > lo && l.lambda < hi, || {
                format!("k={k}: λ={} outside ({lo}, {hi})", l.lambda)
            })?;
            ensure(
                l.lambda >= slo * (1.0 - 1e-14) && l.lambda <= shi * (1.0 + 1e-14),
                || format!("k={k}: λ={} outside [{slo}, {shi}]", l.lambda),
            )?;
        }
    }
    Ok("k ≤ 500: 2k+1 eigenvalues inside both windows".to_string())
}

fn trace_identity() -> Outcome {
    let p = alpha(1.0, 2.0, 3.0);
    let mut worst = 0.0f64;
    for k in 1..=200usize {
        let (c, e) = trace_check(&degree_spectrum(k, &p).map_err(|e| e.to_string())?);
        let rel = ((c - e) / e).abs();
        ensure(rel <= 1e-10, || format!("k={k}: relative error {rel:e}"))?;
        worst = worst.max(rel);
    }
    Ok(format!("k ≤ 200, max relative error {worst:.1e}"))
}

fn moment_convergence() -> Outcome {
    let p = alpha(1.0, 2.0, 3.0);
    let zero = SpeciesExponents::new(0, 0, 0).unwrap();
    let ms = [100usize, 200, 400, 800];
    let recs: Vec<_> = ms
        .iter()
        .map(|&m| build_recurrence(2 * m, zero, &p).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    let mut ratios = Vec::new();
    for n in 1..=8usize {
        let limit = trace_moment_limit(n, p.beta_sq());
        let quad = trace_moment_quadrature(n, p.beta_sq(), 64);
        ensure((limit - quad).abs() <= 1e-12, || {
            format!("n={n}: Beta sum {limit} vs quadrature {quad}")
        })?;
        let errs: Vec<f64> = recs
            .iter()
            .map(|r| trace_moment_empirical(r, n).map(|e| (e - limit).abs()))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        if errs.iter().all(|&e| e <= 1e-12) {
            // Odd moments vanish identically when β² = 1.
            continue;
        }
        for w in errs.windows(2) {
            let ratio = w[0] / w[1];
            ensure((1.5..=3.0).contains(&ratio), || {
                format!("n={n}: error ratio {ratio} from {errs:?}")
            })?;
            ratios.push(ratio);
        }
    }
    let (lo, hi) = ratios
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(a, b), &r| (a.min(r), b.max(r)));
    Ok(format!("n ≤ 8, error ratios in [{lo:.3}, {hi:.3}], Beta sum = quadrature"))
}

fn dos_convergence() -> Outcome {
    let p = alpha(1.0, 2.0, 3.0);
    let bumps = [(1.05, 0.1), (1.2, 0.15), (1.4, 0.15), (1.55, 0.15), (1.68, 0.1)];
    let dos = |k| {
        EmpiricalDos::from_spectrum(&degree_spectrum(k, &p).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())
    };
    let (d100, d400) = (dos(100)?, dos(400)?);
    let mut worst = 0.0f64;
    for (c, w) in bumps {
        let f = TestFunction::bump(c, w).unwrap();
        let lim = limit_dos(&f, &p, LimitVariant::Resolved, 64).map_err(|e| e.to_string())?;
        let (e100, e400) = ((d100.integrate(&f) - lim).abs(), (d400.integrate(&f) - lim).abs());
        ensure(e400 < 0.05 && e400 < e100, || {
            format!("bump ({c}, {w}): error {e400:e} at k=400, {e100:e} at k=100")
        })?;
        worst = worst.max(e400);
    }
    Ok(format!("5 bumps, max error at k=400 {worst:.2e}, all below k=100"))
}

/// Composite Simpson rule on `[a, b]` with `n` (even) intervals.
fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n)
        .map(|i| f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 })
        .sum();
    (f(a) + f(b) + inner) * h / 3.0
}

fn variant_discrimination() -> Outcome {
    let p = alpha(1.0, 1.0201, 1.0404);
    let dos = EmpiricalDos::from_eigenvalues(200, &oracle_spectrum(200, &p).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let f = TestFunction::bump(1.0, 0.1).unwrap();
    let emp = dos.integrate(&f);
    let err = |v| -> Result<f64, String> {
        Ok((emp - limit_dos(&f, &p, v, 64).map_err(|e| e.to_string())?).abs())
    };
    let (resolved, printed) = (err(LimitVariant::Resolved)?, err(LimitVariant::PrintedTheorem)?);
    ensure(resolved < 0.05 && printed > 0.2, || {
        format!("resolved error {resolved:e}, printed error {printed:e}")
    })?;

    let sym = alpha(1.0, 2.0, 2.0 + 1e-10);
    let dos = EmpiricalDos::from_spectrum(&degree_spectrum(400, &sym).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for (c, w) in [(1.05, 0.1), (1.2, 0.15), (1.35, 0.1)] {
        let g = TestFunction::bump(c, w).unwrap();
        let closed = simpson(|t| g.eval((2.0 - t * t).sqrt()), 0.0, 1.0, 20_000);
        let e = (dos.integrate(&g) - closed).abs();
        ensure(e <= 0.02, || format!("symmetric top bump ({c}, {w}): error {e:e}"))?;
        worst = worst.max(e);
    }
    Ok(format!(
        "resolved {resolved:.2e} vs printed {printed:.2e}; symmetric top max error {worst:.2e}"
    ))
}

fn harmonics() -> Outcome {
    let p = alpha(1.0, 2.0, 3.0);
    let (mut lap, mut op, mut niv) = (0.0f64, 0.0f64, 0.0f64);
    for k in 0..=12usize {
        let hs = degree_harmonics(k, &p).map_err(|e| e.to_string())?;
        ensure(hs.len() == 2 * k + 1, || format!("k={k}: {} harmonics", hs.len()))?;
        for h in &hs {
            ensure(
                h.laplacian_residual <= 1e-10
                    && h.operator_residual <= 1e-9 * h.lambda
                    && h.niven_residual <= 1e-8,
                || {
                    format!(
                        "k={k}, γ={}: residuals {:e} {:e} {:e}",
                        h.harmonic.gamma, h.laplacian_residual, h.operator_residual, h.niven_residual
                    )
                },
            )?;
            lap = lap.max(h.laplacian_residual);
            op = op.max(h.operator_residual);
            niv = niv.max(h.niven_residual);
        }
    }
    let mut rng = StdRng::seed_from_u64(2024);
    let mut round = 0.0f64;
    let mut accepted = 0;
    while accepted < 100 {
        let v: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let n = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if !(0.1..=1.0).contains(&n) {
            continue;
        }
        let q = v.map(|c| c / n);
        let sc = spheroconal_from_cartesian(q[0], q[1], q[2], &p).map_err(|e| e.to_string())?;
        let back = cartesian_from_spheroconal(sc, &p).map_err(|e| e.to_string())?;
        for i in 0..3 {
            round = round.max((back[i] - q[i] * q[i]).abs());
        }
        accepted += 1;
    }
    ensure(round <= 1e-12, || format!("roundtrip error {round:e}"))?;
    Ok(format!(
        "k ≤ 12: Laplacian {lap:.1e}, operator {op:.1e}, Niven {niv:.1e}; roundtrip {round:.1e}"
    ))
}

fn run_cli(args: &[&str], jobs: &str) -> Result<std::process::Output, String> {
    Command::new(env!("CARGO_BIN_EXE_asymtop"))
        .args(args)
        .args(["--jobs", jobs])
        .output()
        .map_err(|e| e.to_string())
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    let mut outputs: Vec<Vec<Vec<u8>>> = Vec::new();
    for jobs in ["1", "4"] {
        let verify = path(&format!("verify_{jobs}.json"));
        let out = run_cli(&["verify", "--alpha", "1,2,3", "--kmax", "40", "--output", &verify], jobs)?;
        ensure(out.status.success(), || format!("verify exited with {:?}", out.status.code()))?;
        let dos_dir = path(&format!("dos_{jobs}"));
        let out = run_cli(
            &[
                "dos", "--alpha", "1,2,3", "--k", "50,100", "--bumps", "1.1:0.1,1.4:0.15",
                "--bins", "12", "--out-dir", &dos_dir,
            ],
            jobs,
        )?;
        ensure(out.status.success(), || format!("dos exited with {:?}", out.status.code()))?;
        let read = |p: String| std::fs::read(p).map_err(|e| e.to_string());
        outputs.push(vec![
            read(verify)?,
            read(format!("{dos_dir}/histogram.csv"))?,
            read(format!("{dos_dir}/test_functions.csv"))?,
            read(format!("{dos_dir}/discrimination.json"))?,
        ]);
    }
    ensure(outputs[0] == outputs[1], || "outputs differ between --jobs 1 and --jobs 4".to_string())?;
    Ok("verify and dos outputs byte-identical for --jobs 1 and 4".to_string())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("closed-form degrees", closed_form_degrees),
        ("oracle equivalence", oracle_equivalence),
        ("counts and bounds", counts_and_bounds),
        ("trace identity", trace_identity),
        ("moment convergence", moment_convergence),
        ("DOS weak convergence", dos_convergence),
        ("variant discrimination", variant_discrimination),
        ("harmonics", harmonics),
        ("determinism", determinism),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {}. {name}: {detail} ({secs:.2} s)", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL {}. {name}: {detail} ({secs:.2} s)", i + 1);
            }
        }
    }
    println!("{} of {} acceptance criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
