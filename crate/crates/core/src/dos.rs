//! Density of states of `√λ/k` on degree-`k` harmonics, its large-`k`
//! limit measures, and trace moments of the recurrence matrix.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::oracle_spectrum;
use crate::params::TopParameters;
use crate::quadrature::GaussLegendre;
use crate::recurrence::LameRecurrence;
use crate::spectrum::{operator_sandwich, DegreeSpectrum};
use crate::sum::neumaier;

/// Agreement required between successive panel refinements of the limit
/// quadrature.
pub const LIMIT_QUAD_TOL: f64 = 1e-10;
const MAX_PANELS: usize = 64;

/// Error above which a limit variant is considered inconsistent with the data.
pub const DISCRIMINATION_THRESHOLD: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TestFunction {
    /// `exp(1 − 1/(1 − t²))` for `t = (x − center)/halfwidth`, `|t| < 1`.
    Bump { center: f64, halfwidth: f64 },
    /// Equal to 1 on `[lo, hi]`, smooth ramps of width `ramp` on each side.
    Plateau { lo: f64, hi: f64, ramp: f64 },
}

fn smooth_step_tail(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

/// `0` for `t ≤ 0`, `1` for `t ≥ 1`, C^∞ in between.
fn smooth_step(t: f64) -> f64 {
    let a = smooth_step_tail(t);
    let b = smooth_step_tail(1.0 - t);
    a / (a + b)
}

impl TestFunction {
    pub fn bump(center: f64, halfwidth: f64) -> Result<Self> {
        if !(halfwidth > 0.0 && center.is_finite() && halfwidth.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "bump half-width must be positive, got {halfwidth}"
            )));
        }
        if !(center - halfwidth > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "bump support ({}, {}) must lie in x > 0",
                center - halfwidth,
                center + halfwidth
            )));
        }
        Ok(Self::Bump { center, halfwidth })
    }

    pub fn plateau(lo: f64, hi: f64, ramp: f64) -> Result<Self> {
        if !(ramp > 0.0 && lo <= hi && lo - ramp > 0.0 && hi.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "plateau [{lo}, {hi}] with ramp {ramp} must satisfy 0 < lo − ramp, lo ≤ hi"
            )));
        }
        Ok(Self::Plateau { lo, hi, ramp })
    }

    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Self::Bump { center, halfwidth } => {
                let t = (x - center) / halfwidth;
                if t.abs() < 1.0 {
                    (1.0 - 1.0 / (1.0 - t * t)).exp()
                } else {
                    0.0
                }
            }
            Self::Plateau { lo, hi, ramp } => {
                if x < lo {
                    smooth_step(1.0 - (lo - x) / ramp)
                } else if x > hi {
                    smooth_step(1.0 - (x - hi) / ramp)
                } else {
                    1.0
                }
            }
        }
    }

    /// `(center, halfwidth)` of the support.
    pub fn support(&self) -> (f64, f64) {
        match *self {
            Self::Bump { center, halfwidth } => (center, halfwidth),
            Self::Plateau { lo, hi, ramp } => (0.5 * (lo + hi), 0.5 * (hi - lo) + ramp),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitVariant {
    /// Single pushforward of `√g`, `g = (α₁²−α₀²)(β cos ξ sin 2θ + (β²−1) sin²θ) + α₁²`.
    Resolved,
    /// Weights ¼ at `½√g₊` and ¾ at `(3/2)√g₊`,
    /// `g = (α₁²−α₀²)(β cos ξ + (β²−1) sin θ) sin θ + α₀²`, `β² = (α₁²−α₀²)/(α₂²−α₀²)`.
    PrintedTheorem,
}

impl LimitVariant {
    pub const BOTH: [LimitVariant; 2] = [LimitVariant::Resolved, LimitVariant::PrintedTheorem];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Resolved => "resolved",
            Self::PrintedTheorem => "printed",
        }
    }

    pub fn g(&self, p: &TopParameters, xi: f64, theta: f64) -> f64 {
        let scale = p.scale();
        let (s, c) = theta.sin_cos();
        match self {
            Self::Resolved => {
                let beta_sq = p.beta_sq();
                scale * (beta_sq.sqrt() * xi.cos() * 2.0 * s * c + (beta_sq - 1.0) * s * s)
                    + p.a1sq()
            }
            Self::PrintedTheorem => {
                let beta_sq = scale / (p.a2sq() - p.a0sq());
                scale * (beta_sq.sqrt() * xi.cos() + (beta_sq - 1.0) * s) * s + p.a0sq()
            }
        }
    }

    fn pushforward(&self, f: &TestFunction, g: f64) -> f64 {
        let r = g.max(0.0).sqrt();
        match self {
            Self::Resolved => f.eval(r),
            Self::PrintedTheorem => 0.25 * f.eval(0.5 * r) + 0.75 * f.eval(1.5 * r),
        }
    }
}

impl fmt::Display for LimitVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LimitVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "resolved" => Ok(Self::Resolved),
            "printed" | "printed_theorem" => Ok(Self::PrintedTheorem),
            other => Err(Error::InvalidArgument(format!("unknown variant {other:?}"))),
        }
    }
}

/// Normalized counting measure of `√λ/k` over one degree.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalDos {
    pub k: usize,
    /// Ascending.
    pub samples: Vec<f64>,
    pub weight: f64,
}

impl EmpiricalDos {
    pub fn from_eigenvalues(k: usize, eigenvalues: &[f64]) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("density of states needs k ≥ 1".to_string()));
        }
        let kf = k as f64;
        let mut samples: Vec<f64> = eigenvalues.iter().map(|l| l.max(0.0).sqrt() / kf).collect();
        samples.sort_by(f64::total_cmp);
        Ok(Self {
            k,
            weight: 1.0 / samples.len() as f64,
            samples,
        })
    }

    pub fn from_spectrum(s: &DegreeSpectrum) -> Result<Self> {
        Self::from_eigenvalues(s.k, &s.eigenvalues())
    }

    pub fn integrate(&self, f: &TestFunction) -> f64 {
        self.weight * neumaier(self.samples.iter().map(|&x| f.eval(x)))
    }

    /// Counts in `bins` equal bins on `[lo, hi]`; returns the `bins + 1` edges
    /// and the counts. The last bin is closed on the right.
    pub fn histogram(&self, lo: f64, hi: f64, bins: usize) -> (Vec<f64>, Vec<usize>) {
        let width = (hi - lo) / bins as f64;
        let edges = (0..=bins).map(|i| lo + width * i as f64).collect();
        let mut counts = vec![0usize; bins];
        for &x in &self.samples {
            if x < lo || x > hi {
                continue;
            }
            let b = (((x - lo) / width) as usize).min(bins - 1);
            counts[b] += 1;
        }
        (edges, counts)
    }
}

/// Range of `√λ/k` implied by `α₀² k(k+1) ≤ λ ≤ α₂² k(k+1)`.
pub fn sample_range(k: usize, p: &TopParameters) -> (f64, f64) {
    let (lo, hi) = operator_sandwich(k, p);
    let kf = k as f64;
    (lo.sqrt() / kf, hi.sqrt() / kf)
}

pub fn empirical_dos(s: &DegreeSpectrum, f: &TestFunction) -> Result<f64> {
    Ok(EmpiricalDos::from_spectrum(s)?.integrate(f))
}

/// `(1/π) ∫₀^π ∫₀^{π/2} F(g(ξ, θ)) cos θ dθ dξ` for the variant's pushforward
/// `F`, with composite Gauss–Legendre panels doubled until successive values
/// agree to `LIMIT_QUAD_TOL`.
pub fn limit_dos(
    f: &TestFunction,
    p: &TopParameters,
    v: LimitVariant,
    quad_order: usize,
) -> Result<f64> {
    if quad_order < 8 {
        return Err(Error::InvalidArgument(format!(
            "quadrature order {quad_order} is below the minimum of 8"
        )));
    }
    let rule = GaussLegendre::new(quad_order);
    let (a0, a2) = (p.a0sq(), p.a2sq());
    let integrand = |xi: f64, theta: f64| {
        let g = v.g(p, xi, theta);
        debug_assert!(
            v != LimitVariant::Resolved || (g >= a0 * (1.0 - 1e-12) && g <= a2 * (1.0 + 1e-12)),
            "resolved g = {g} outside [{a0}, {a2}]"
        );
        v.pushforward(f, g) * theta.cos()
    };
    let eval = |panels| rule.integrate_2d(integrand, (0.0, PI), (0.0, PI / 2.0), panels) / PI;
    let mut panels = 1;
    let mut prev = eval(panels);
    loop {
        let next = eval(2 * panels);
        let difference = (next - prev).abs();
        if difference <= LIMIT_QUAD_TOL {
            return Ok(next);
        }
        panels *= 2;
        if panels >= MAX_PANELS {
            return Err(Error::QuadratureNotConverged {
                order: quad_order * panels,
                difference,
            });
        }
        prev = next;
    }
}

/// `(1/m) Tr(Aⁿ)` for the recurrence matrix `A = (L + D + U)/μ`.
pub fn trace_moment_empirical(rec: &LameRecurrence, n: usize) -> Result<f64> {
    if n == 0 || rec.m == 0 {
        return Err(Error::InvalidArgument(format!(
            "trace moments need n ≥ 1 and m ≥ 1 (n = {n}, m = {})",
            rec.m
        )));
    }
    let size = rec.m + 1;
    let mut x = vec![0.0; size];
    let mut y = vec![0.0; size];
    let diagonal = (0..size).map(|i| {
        let lo = i.saturating_sub(n);
        let hi = (i + n + 1).min(size);
        x[lo..hi].iter_mut().for_each(|v| *v = 0.0);
        x[i] = 1.0;
        for _ in 0..n {
            rec.matvec_window(&x, &mut y, lo, hi);
            x[lo..hi].copy_from_slice(&y[lo..hi]);
        }
        x[i]
    });
    let trace = neumaier(diagonal.collect::<Vec<_>>());
    Ok(trace / rec.m as f64)
}

fn binomial_ln(n: usize, k: usize) -> f64 {
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

/// `B(j+1, q) = j! / Π_{i=0}^{j} (q + i)`.
fn beta_int_first(j: usize, q: f64) -> f64 {
    (0..=j).fold(1.0, |acc, i| {
        let num = if i == 0 { 1.0 } else { i as f64 };
        acc * num / (q + i as f64)
    })
}

/// `½ Σ_j n!/(j! j! (n−2j)!) B(j+1, n−j+½) (β²−1)^{n−2j} β^{2j}`.
pub fn trace_moment_limit(n: usize, beta_sq: f64) -> f64 {
    let terms = (0..=n / 2).map(|j| {
        let multinomial = (binomial_ln(n, 2 * j) + binomial_ln(2 * j, j)).exp().round();
        let q = n as f64 - j as f64 + 0.5;
        multinomial
            * beta_int_first(j, q)
            * (beta_sq - 1.0).powi((n - 2 * j) as i32)
            * beta_sq.powi(j as i32)
    });
    0.5 * neumaier(terms.collect::<Vec<_>>())
}

/// `h(ξ, θ) = β cos ξ sin 2θ + (β² − 1) sin²θ`.
pub fn moment_h(beta_sq: f64, xi: f64, theta: f64) -> f64 {
    let s = theta.sin();
    beta_sq.sqrt() * xi.cos() * (2.0 * theta).sin() + (beta_sq - 1.0) * s * s
}

/// `(1/π) ∫₀^π ∫₀^{π/2} hⁿ cos θ dθ dξ` by tensor Gauss–Legendre.
pub fn trace_moment_quadrature(n: usize, beta_sq: f64, quad_order: usize) -> f64 {
    let rule = GaussLegendre::new(quad_order);
    rule.integrate_2d(
        |xi, theta| moment_h(beta_sq, xi, theta).powi(n as i32) * theta.cos(),
        (0.0, PI),
        (0.0, PI / 2.0),
        2,
    ) / PI
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscriminationReport {
    pub ks: Vec<usize>,
    /// Max over test functions of `|empirical − limit|`, per `k`.
    pub resolved_errors: Vec<f64>,
    pub printed_errors: Vec<f64>,
    pub winner: LimitVariant,
    /// The winner's error decays at least as fast as `O(1/k)` up to a factor 2,
    /// or is already below `1e−3`.
    pub rate_ok: bool,
}

fn rate_compatible(ks: &[usize], errors: &[f64]) -> bool {
    let (Some(&k0), Some(&k1)) = (ks.first(), ks.last()) else {
        return true;
    };
    let (e0, e1) = (errors[0], errors[errors.len() - 1]);
    e1 < 1e-3 || e1 * k1 as f64 <= 2.0 * e0 * k0 as f64
}

/// Compares both limit variants with the oracle spectrum's empirical DOS.
pub fn discriminate_variants(
    p: &TopParameters,
    ks: &[usize],
    fs: &[TestFunction],
    quad_order: usize,
) -> Result<DiscriminationReport> {
    if ks.is_empty() || fs.is_empty() || ks.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(
            "discrimination needs a nonempty increasing list of degrees and at least one test function"
                .to_string(),
        ));
    }
    let limits: Vec<[f64; 2]> = fs
        .iter()
        .map(|f| {
            Ok([
                limit_dos(f, p, LimitVariant::Resolved, quad_order)?,
                limit_dos(f, p, LimitVariant::PrintedTheorem, quad_order)?,
            ])
        })
        .collect::<Result<_>>()?;
    let mut resolved_errors = Vec::with_capacity(ks.len());
    let mut printed_errors = Vec::with_capacity(ks.len());
    for &k in ks {
        let dos = EmpiricalDos::from_eigenvalues(k, &oracle_spectrum(k, p)?)?;
        let mut worst = [0.0f64; 2];
        for (f, lim) in fs.iter().zip(&limits) {
            let e = dos.integrate(f);
            for v in 0..2 {
                worst[v] = worst[v].max((e - lim[v]).abs());
            }
        }
        resolved_errors.push(worst[0]);
        printed_errors.push(worst[1]);
    }
    let (r, q) = (*resolved_errors.last().unwrap(), *printed_errors.last().unwrap());
    if r > DISCRIMINATION_THRESHOLD && q > DISCRIMINATION_THRESHOLD {
        return Err(Error::Inconclusive {
            resolved: r,
            printed: q,
        });
    }
    let (winner, errs) = if r <= q {
        (LimitVariant::Resolved, &resolved_errors)
    } else {
        (LimitVariant::PrintedTheorem, &printed_errors)
    };
    let rate_ok = rate_compatible(ks, errs);
    Ok(DiscriminationReport {
        ks: ks.to_vec(),
        winner,
        rate_ok,
        resolved_errors,
        printed_errors,
    })
}
