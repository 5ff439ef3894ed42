//! Command-line front end. `run` parses arguments, executes one subcommand
//! and returns the process exit code.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::dos::{
    discriminate_variants, limit_dos, sample_range, trace_moment_empirical, trace_moment_limit,
    EmpiricalDos, LimitVariant, TestFunction,
};
use crate::error::{Error, Result};
use crate::params::{validate_parameters, SpeciesExponents, TopParameters};
use crate::recurrence::{build_recurrence, CoefficientFault};
use crate::spectrum::{degree_spectrum, degree_spectrum_with_fault, trace_check, van_vleck_window};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARAMETER: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_VERIFICATION: i32 = 4;
pub const EXIT_QUADRATURE: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "asymtop", version, about = "Spectrum of the quantum asymmetric top")]
struct Cli {
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, env = "ASYMTOP_JOBS", default_value_t = 0)]
    jobs: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Eigenvalues of L_α on the degree-k harmonics.
    Spectrum(SpectrumArgs),
    /// Check the recurrence spectrum against the dense oracle, counts, bounds and trace.
    Verify(VerifyArgs),
    /// Empirical density of states against the limit measures.
    Dos(DosArgs),
    /// Trace moments of the recurrence matrix against their limits.
    Moments(MomentsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantChoice {
    Resolved,
    Printed,
    Both,
}

impl VariantChoice {
    fn variants(self) -> Vec<LimitVariant> {
        match self {
            Self::Resolved => vec![LimitVariant::Resolved],
            Self::Printed => vec![LimitVariant::PrintedTheorem],
            Self::Both => LimitVariant::BOTH.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Fault {
    FlipCCorrection,
}

#[derive(Debug, Args)]
struct AlphaArg {
    /// Squared semi-axes α₀², α₁², α₂², strictly increasing and positive.
    #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    alpha: Vec<f64>,
}

impl AlphaArg {
    fn params(&self) -> Result<TopParameters> {
        if self.alpha.len() != 3 {
            return Err(Error::InvalidArgument(format!(
                "--alpha needs three comma-separated values, got {}",
                self.alpha.len()
            )));
        }
        validate_parameters(self.alpha[0], self.alpha[1], self.alpha[2])
    }
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    #[command(flatten)]
    alpha: AlphaArg,
    #[arg(long)]
    k: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file; standard output when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    alpha: AlphaArg,
    #[arg(long)]
    kmax: usize,
    #[arg(long, default_value_t = 1e-8)]
    oracle_tol: f64,
    #[arg(long, default_value_t = 1e-10)]
    trace_tol: f64,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, hide = true)]
    inject_fault: Option<Fault>,
}

#[derive(Debug, Args)]
struct DosArgs {
    #[command(flatten)]
    alpha: AlphaArg,
    /// One or more degrees; several trigger the variant discrimination report.
    #[arg(long, value_delimiter = ',', required = true)]
    k: Vec<usize>,
    #[arg(long, value_enum, default_value_t = VariantChoice::Both)]
    variant: VariantChoice,
    /// Bump test functions as center:halfwidth pairs.
    #[arg(long, value_delimiter = ',')]
    bumps: Vec<String>,
    /// Plateau test functions as lo:hi:ramp triples.
    #[arg(long, value_delimiter = ',')]
    plateau: Vec<String>,
    /// Histogram bins over the range of √λ/k.
    #[arg(long)]
    bins: Option<usize>,
    #[arg(long, default_value_t = 64)]
    quad_order: usize,
    /// Directory for histogram.csv, test_functions.csv and discrimination.json.
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Debug, Args)]
struct MomentsArgs {
    #[command(flatten)]
    alpha: AlphaArg,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    nmax: usize,
    #[arg(long, value_delimiter = ',', default_values_t = [0u8, 0, 0])]
    gamma: Vec<u8>,
    #[arg(long)]
    output: Option<PathBuf>,
}

/// Failure with its exit code and a message for standard error.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e.root_cause() {
        Error::WeylViolation(..) | Error::InvalidArgument(_) | Error::ParityMismatch { .. } => {
            EXIT_PARAMETER
        }
        Error::QuadratureNotConverged { .. } => EXIT_QUADRATURE,
        Error::Inconclusive { .. } => EXIT_VERIFICATION,
        _ => EXIT_SOLVER,
    }
}

fn fmt_f(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_out(path: Option<&Path>, content: &str) -> std::result::Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, content).map_err(|e| Failure {
            code: EXIT_PARAMETER,
            message: format!("cannot write {}: {e}", p.display()),
        }),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

/// Runs the command line `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_PARAMETER } else { EXIT_OK };
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build() {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: cannot start worker pool: {e}");
            return EXIT_PARAMETER;
        }
    };
    let outcome = pool.install(|| match &cli.command {
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Dos(a) => cmd_dos(a),
        Command::Moments(a) => cmd_moments(a),
    });
    match outcome {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

#[derive(Serialize)]
struct SpectrumReport<'a> {
    alpha: [f64; 3],
    k: usize,
    lines: &'a [crate::spectrum::SpectralLine],
}

fn cmd_spectrum(a: &SpectrumArgs) -> std::result::Result<(), Failure> {
    let p = a.alpha.params()?;
    let s = degree_spectrum(a.k, &p)?;
    let near = s.lines.iter().filter(|l| l.near_duplicate).count();
    if near > 0 {
        eprintln!("warning: {near} eigenvalues have a near-duplicate in another species");
    }
    let content = match a.format {
        Format::Json => to_json(&SpectrumReport {
            alpha: p.as_array(),
            k: a.k,
            lines: &s.lines,
        }),
        Format::Csv => {
            let mut out = String::from("k,species,g0,g1,g2,index,lambda,nu_tilde_over_mu\n");
            for l in &s.lines {
                let [g0, g1, g2] = l.gamma.as_array();
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    l.k,
                    l.species(),
                    g0,
                    g1,
                    g2,
                    l.index_within_species,
                    fmt_f(l.lambda),
                    fmt_f(l.nu_tilde_over_mu)
                )
                .unwrap();
            }
            out
        }
    };
    write_out(a.output.as_deref(), &content)
}

#[derive(Debug, Serialize)]
struct DegreeCheck {
    k: usize,
    count_ok: bool,
    vanvleck_ok: bool,
    trace_rel_err: f64,
    oracle_max_rel_dev: f64,
    pass: bool,
}

#[derive(Serialize)]
struct VerifyReport {
    alpha: [f64; 3],
    kmax: usize,
    oracle_tol: f64,
    trace_tol: f64,
    pass: bool,
    first_failing_k: Option<usize>,
    degrees: Vec<DegreeCheck>,
}

fn check_degree(
    k: usize,
    p: &TopParameters,
    fault: CoefficientFault,
    oracle_tol: f64,
    trace_tol: f64,
) -> Result<DegreeCheck> {
    let s = degree_spectrum_with_fault(k, p, fault)?;
    let count_ok = s.len() == 2 * k + 1;
    let (lo, hi) = van_vleck_window(k, p);
    let vanvleck_ok = s.lines.iter().all(|l| l.lambda > lo && l.lambda < hi);
    let (computed, expected) = trace_check(&s);
    let trace_rel_err = if computed == expected {
        0.0
    } else {
        (computed - expected).abs() / expected.abs()
    };
    let oracle = crate::oracle::oracle_spectrum(k, p)?;
    let oracle_max_rel_dev = crate::oracle::max_relative_deviation(&s.eigenvalues(), &oracle);
    let pass = count_ok
        && vanvleck_ok
        && trace_rel_err <= trace_tol
        && oracle_max_rel_dev <= oracle_tol;
    Ok(DegreeCheck {
        k,
        count_ok,
        vanvleck_ok,
        trace_rel_err,
        oracle_max_rel_dev,
        pass,
    })
}

fn cmd_verify(a: &VerifyArgs) -> std::result::Result<(), Failure> {
    let p = a.alpha.params()?;
    if a.kmax < 1 {
        return Err(Error::InvalidArgument("--kmax must be at least 1".to_string()).into());
    }
    let fault = match a.inject_fault {
        Some(Fault::FlipCCorrection) => CoefficientFault::FlipCCorrection,
        None => CoefficientFault::None,
    };
    let degrees: Vec<DegreeCheck> = (0..=a.kmax)
        .into_par_iter()
        .map(|k| check_degree(k, &p, fault, a.oracle_tol, a.trace_tol))
        .collect::<Result<_>>()?;
    let first_failing_k = degrees.iter().find(|d| !d.pass).map(|d| d.k);
    let report = VerifyReport {
        alpha: p.as_array(),
        kmax: a.kmax,
        oracle_tol: a.oracle_tol,
        trace_tol: a.trace_tol,
        pass: first_failing_k.is_none(),
        first_failing_k,
        degrees,
    };
    write_out(a.output.as_deref(), &to_json(&report))?;
    match first_failing_k {
        None => Ok(()),
        Some(k) => Err(Failure {
            code: EXIT_VERIFICATION,
            message: format!("verification failed at k = {k}"),
        }),
    }
}

fn parse_floats(text: &str, n: usize, what: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let values: Vec<f64> = parts
        .iter()
        .map(|s| s.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::InvalidArgument(format!("cannot parse {what} {text:?}")))?;
    if values.len() != n {
        return Err(Error::InvalidArgument(format!(
            "{what} {text:?} needs {n} ':'-separated numbers"
        )));
    }
    Ok(values)
}

fn test_functions(a: &DosArgs) -> Result<Vec<TestFunction>> {
    let mut fs = Vec::new();
    for b in &a.bumps {
        let v = parse_floats(b, 2, "bump")?;
        fs.push(TestFunction::bump(v[0], v[1])?);
    }
    for b in &a.plateau {
        let v = parse_floats(b, 3, "plateau")?;
        fs.push(TestFunction::plateau(v[0], v[1], v[2])?);
    }
    Ok(fs)
}

fn cmd_dos(a: &DosArgs) -> std::result::Result<(), Failure> {
    let p = a.alpha.params()?;
    let fs = test_functions(a)?;
    if a.k.contains(&0) {
        return Err(Error::InvalidArgument("density of states needs k ≥ 1".to_string()).into());
    }
    if fs.is_empty() && a.bins.is_none() {
        return Err(Error::InvalidArgument(
            "give at least one of --bumps, --plateau or --bins".to_string(),
        )
        .into());
    }
    if a.bins == Some(0) {
        return Err(Error::InvalidArgument("--bins must be positive".to_string()).into());
    }
    if a.quad_order < 8 {
        return Err(Error::InvalidArgument("--quad-order must be at least 8".to_string()).into());
    }
    fs::create_dir_all(&a.out_dir).map_err(|e| Failure {
        code: EXIT_PARAMETER,
        message: format!("cannot create {}: {e}", a.out_dir.display()),
    })?;
    let variants = a.variant.variants();

    let limits: Vec<Vec<f64>> = fs
        .iter()
        .map(|f| variants.iter().map(|&v| limit_dos(f, &p, v, a.quad_order)).collect())
        .collect::<Result<_>>()?;
    let dos: Vec<EmpiricalDos> = a
        .k
        .par_iter()
        .map(|&k| EmpiricalDos::from_spectrum(&degree_spectrum(k, &p)?))
        .collect::<Result<_>>()?;

    if let Some(bins) = a.bins {
        let mut out = String::from("k,bin_lo,bin_hi,count\n");
        for d in &dos {
            let (lo, hi) = sample_range(d.k, &p);
            let (edges, counts) = d.histogram(lo, hi, bins);
            for (i, c) in counts.iter().enumerate() {
                writeln!(out, "{},{},{},{}", d.k, fmt_f(edges[i]), fmt_f(edges[i + 1]), c).unwrap();
            }
        }
        write_out(Some(&a.out_dir.join("histogram.csv")), &out)?;
    }

    if !fs.is_empty() {
        let mut out = String::from("k,kind,c,w,empirical");
        for v in &variants {
            write!(out, ",limit_{}", v.name()).unwrap();
        }
        for v in &variants {
            write!(out, ",abs_err_{}", v.name()).unwrap();
        }
        out.push('\n');
        for d in &dos {
            for (f, lim) in fs.iter().zip(&limits) {
                let e = d.integrate(f);
                let (c, w) = f.support();
                let kind = match f {
                    TestFunction::Bump { .. } => "bump",
                    TestFunction::Plateau { .. } => "plateau",
                };
                write!(out, "{},{},{},{},{}", d.k, kind, fmt_f(c), fmt_f(w), fmt_f(e)).unwrap();
                for l in lim {
                    write!(out, ",{}", fmt_f(*l)).unwrap();
                }
                for l in lim {
                    write!(out, ",{}", fmt_f((e - l).abs())).unwrap();
                }
                out.push('\n');
            }
        }
        write_out(Some(&a.out_dir.join("test_functions.csv")), &out)?;
    }

    if a.k.len() > 1 && !fs.is_empty() {
        let mut ks = a.k.clone();
        ks.sort_unstable();
        ks.dedup();
        let report = discriminate_variants(&p, &ks, &fs, a.quad_order)?;
        write_out(Some(&a.out_dir.join("discrimination.json")), &to_json(&report))?;
    }
    Ok(())
}

fn cmd_moments(a: &MomentsArgs) -> std::result::Result<(), Failure> {
    let p = a.alpha.params()?;
    if a.m < 1 || a.nmax < 1 {
        return Err(Error::InvalidArgument("--m and --nmax must be at least 1".to_string()).into());
    }
    let [g0, g1, g2] = a.gamma[..] else {
        return Err(Error::InvalidArgument("--gamma needs three comma-separated values".to_string()).into());
    };
    let gamma = SpeciesExponents::new(g0, g1, g2)?;
    let k = 2 * a.m + gamma.total() as usize;
    let rec = build_recurrence(k, gamma, &p)?;
    let beta_sq = p.beta_sq();
    let rows: Vec<(f64, f64)> = (1..=a.nmax)
        .into_par_iter()
        .map(|n| Ok((trace_moment_empirical(&rec, n)?, trace_moment_limit(n, beta_sq))))
        .collect::<Result<_>>()?;
    let mut out = String::from("n,empirical,limit,abs_err\n");
    for (i, (e, l)) in rows.iter().enumerate() {
        writeln!(out, "{},{},{},{}", i + 1, fmt_f(*e), fmt_f(*l), fmt_f((e - l).abs())).unwrap();
    }
    write_out(a.output.as_deref(), &out)
}
