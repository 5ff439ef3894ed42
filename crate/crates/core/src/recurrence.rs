//! Three-term recurrence for the coefficients of Lamé polynomials in the
//! canonical normalization (singular points `−1, 0, β²`).
//!
//! Writing `Y(x) = Σ a_j x^j`, the canonical generalized Lamé equation
//!
//! ```text
//! x(x−β²)(x+1) Y'' + [ρ₀ x(x−β²) + ρ₁ (x+1)(x−β²) + ρ₂ x(x+1)] Y' = (μx − ν̃) Y
//! ```
//!
//! reduces to `A_j a_j + B_j a_{j+1} + C_j a_{j−1} = ν̃ a_j` with
//!
//! ```text
//! A_j = (β²−1) j (j−1+ρ₁) − ρ₂ j + β² ρ₀ j
//! B_j = (j+1)(j+ρ₁) β²
//! C_j = μ − (j−1)(j−2+|ρ|)
//! ```
//!
//! and `μ = m(m−1+|ρ|)`, the value that makes the `x^{m+1}` coefficient
//! vanish. The eigenvalues of the tridiagonal matrix `A/μ` are `ν̃/μ`.

use crate::error::{Error, Result};
use crate::params::{RhoWeights, SpeciesExponents, TopParameters};
use crate::tridiag::SymTridiagonal;

/// Deliberate coefficient corruption used to check that verification fails.
#[doc(hidden)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CoefficientFault {
    #[default]
    None,
    /// Builds `C_j = μ + (j−1)(j−2+|ρ|)`.
    FlipCCorrection,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LameRecurrence {
    pub k: usize,
    pub gamma: SpeciesExponents,
    /// Polynomial degree.
    pub m: usize,
    pub rho: RhoWeights,
    pub beta_sq: f64,
    pub mu: f64,
    /// `A_0 ..= A_m`.
    pub diag: Vec<f64>,
    /// `B_0 .. B_{m−1}`.
    pub sup: Vec<f64>,
    /// `C_1 ..= C_m`.
    pub sub: Vec<f64>,
}

pub fn build_recurrence(k: usize, g: SpeciesExponents, p: &TopParameters) -> Result<LameRecurrence> {
    build_recurrence_with_fault(k, g, p, CoefficientFault::None)
}

#[doc(hidden)]
pub fn build_recurrence_with_fault(
    k: usize,
    g: SpeciesExponents,
    p: &TopParameters,
    fault: CoefficientFault,
) -> Result<LameRecurrence> {
    let m = g.degree_for(k)?;
    let rho = g.rho();
    let rho_total = rho.total();
    let beta_sq = p.beta_sq();
    let mf = m as f64;
    let mu = mf * (mf - 1.0 + rho_total);

    let diag = (0..=m)
        .map(|j| {
            let j = j as f64;
            (beta_sq - 1.0) * j * (j - 1.0 + rho.r1) - rho.r2 * j + beta_sq * rho.r0 * j
        })
        .collect();
    let sup = (0..m)
        .map(|j| {
            let j = j as f64;
            (j + 1.0) * (j + rho.r1) * beta_sq
        })
        .collect();
    let sign = match fault {
        CoefficientFault::None => -1.0,
        CoefficientFault::FlipCCorrection => 1.0,
    };
    let sub = (1..=m)
        .map(|j| {
            let j = j as f64;
            mu + sign * (j - 1.0) * (j - 2.0 + rho_total)
        })
        .collect();

    Ok(LameRecurrence {
        k,
        gamma: g,
        m,
        rho,
        beta_sq,
        mu,
        diag,
        sup,
        sub,
    })
}

impl LameRecurrence {
    /// `C_{m+1}` evaluated from the coefficient formula; zero when `μ` is
    /// consistent with the polynomial degree.
    pub fn truncation_coefficient(&self) -> f64 {
        let j = self.m as f64 + 1.0;
        self.mu - (j - 1.0) * (j - 2.0 + self.rho.total())
    }

    /// Entry `(i, j)` of the unsymmetrized matrix `A = (L + D + U)/μ`.
    pub fn matrix_entry(&self, i: usize, j: usize) -> f64 {
        if self.m == 0 {
            return 0.0;
        }
        let v = if i == j {
            self.diag[i]
        } else if j == i + 1 {
            self.sup[i]
        } else if i == j + 1 {
            self.sub[j]
        } else {
            0.0
        };
        v / self.mu
    }

    /// `y = A x` for the unsymmetrized matrix, restricted to the index
    /// window `[lo, hi)`; entries of `x` outside the window are taken as
    /// zero and the result is written into `y[lo..hi]`.
    pub(crate) fn matvec_window(&self, x: &[f64], y: &mut [f64], lo: usize, hi: usize) {
        let inv_mu = 1.0 / self.mu;
        for i in lo..hi {
            let mut s = self.diag[i] * x[i];
            if i + 1 < hi {
                s += self.sup[i] * x[i + 1];
            }
            if i > lo {
                s += self.sub[i - 1] * x[i - 1];
            }
            y[i] = s * inv_mu;
        }
    }
}

/// Symmetric tridiagonal matrix similar to `A = (L + D + U)/μ`: diagonal
/// `A_j/μ`, off-diagonal `√(B_j C_{j+1})/μ`.
pub fn symmetrize(rec: &LameRecurrence) -> Result<SymTridiagonal> {
    if rec.m == 0 {
        return SymTridiagonal::new(vec![0.0], Vec::new());
    }
    let diag = rec.diag.iter().map(|a| a / rec.mu).collect();
    let offdiag = rec
        .sup
        .iter()
        .zip(&rec.sub)
        .enumerate()
        .map(|(j, (b, c))| {
            let product = b * c;
            if product > 0.0 && product.is_finite() {
                Ok(product.sqrt() / rec.mu)
            } else {
                Err(Error::NonSymmetrizable { j, product })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    SymTridiagonal::new(diag, offdiag)
}

/// The `m + 1` eigenvalues `ν̃/μ` in ascending order.
pub fn canonical_eigenvalues(rec: &LameRecurrence) -> Result<Vec<f64>> {
    if rec.m == 0 {
        return Ok(vec![0.0]);
    }
    symmetrize(rec)?.eigenvalues()
}

/// Log of the diagonal similarity `S` with `S A S⁻¹` symmetric, `s_0 = 1`.
fn log_similarity(rec: &LameRecurrence) -> Vec<f64> {
    let mut out = Vec::with_capacity(rec.m + 1);
    out.push(0.0);
    let mut acc = 0.0;
    for (b, c) in rec.sup.iter().zip(&rec.sub) {
        acc += 0.5 * (b.ln() - c.ln());
        out.push(acc);
    }
    out
}

/// Maps a symmetric eigenvector back to Lamé coefficients with `a_0 = 1`.
fn unscale(rec: &LameRecurrence, v: &[f64]) -> Result<Vec<f64>> {
    let logs = log_similarity(rec);
    let v0 = v[0];
    if v0 == 0.0 || !v0.is_finite() {
        return Err(Error::ConvergenceFailure(
            "eigenvector has vanishing leading component".to_string(),
        ));
    }
    let log_v0 = v0.abs().ln();
    Ok(v
        .iter()
        .zip(&logs)
        .map(|(&vj, &ls)| {
            if vj == 0.0 {
                0.0
            } else {
                let sign = (vj * v0).signum();
                sign * (vj.abs().ln() - log_v0 - ls).exp()
            }
        })
        .collect())
}

/// Largest recurrence residual `|A_j a_j + B_j a_{j+1} + C_j a_{j−1} − ν̃ a_j|`,
/// scaled by `μ · max|a_j|`.
pub fn recurrence_residual(rec: &LameRecurrence, nu_tilde: f64, a: &[f64]) -> f64 {
    let m = rec.m;
    let amax = a.iter().fold(0.0f64, |s, v| s.max(v.abs()));
    if amax == 0.0 {
        return f64::INFINITY;
    }
    let mut worst = 0.0f64;
    for j in 0..=m {
        let mut r = (rec.diag[j] - nu_tilde) * a[j];
        if j < m {
            r += rec.sup[j] * a[j + 1];
        }
        if j > 0 {
            r += rec.sub[j - 1] * a[j - 1];
        }
        worst = worst.max(r.abs());
    }
    worst / (rec.mu.max(1.0) * amax)
}

fn residual_tolerance(rec: &LameRecurrence) -> f64 {
    1e-9 * (1.0 + rec.beta_sq)
}

/// Lamé polynomial coefficients `a_0 = 1, a_1, …, a_m` for the accessory
/// parameter `ν̃` (not divided by `μ`).
pub fn eigenvector(rec: &LameRecurrence, nu_tilde: f64) -> Result<Vec<f64>> {
    if rec.m == 0 {
        if nu_tilde.abs() <= 1e-12 {
            return Ok(vec![1.0]);
        }
        return Err(Error::NotAnEigenvalue {
            nu_tilde,
            residual: nu_tilde.abs(),
        });
    }
    let t = symmetrize(rec)?;
    let v = t.inverse_iteration(nu_tilde / rec.mu, &[])?;
    let a = unscale(rec, &v)?;
    let residual = recurrence_residual(rec, nu_tilde, &a);
    if !(residual <= residual_tolerance(rec)) {
        return Err(Error::NotAnEigenvalue { nu_tilde, residual });
    }
    Ok(a)
}

/// All eigenpairs `(ν̃/μ, a)`, ascending. Eigenvalues closer than `1e−10`
/// relative are treated as a cluster and their vectors are orthogonalized
/// against each other in the symmetric frame.
pub fn eigenpairs(rec: &LameRecurrence) -> Result<Vec<(f64, Vec<f64>)>> {
    if rec.m == 0 {
        return Ok(vec![(0.0, vec![1.0])]);
    }
    let t = symmetrize(rec)?;
    let values = t.eigenvalues()?;
    let mut out = Vec::with_capacity(values.len());
    let mut cluster: Vec<Vec<f64>> = Vec::new();
    let mut prev = f64::NEG_INFINITY;
    for &e in &values {
        if (e - prev).abs() > 1e-10 * e.abs().max(1.0) {
            cluster.clear();
        }
        let v = t.inverse_iteration(e, &cluster)?;
        let a = unscale(rec, &v)?;
        let nu_tilde = e * rec.mu;
        let residual = recurrence_residual(rec, nu_tilde, &a);
        if !(residual <= residual_tolerance(rec)) {
            return Err(Error::NotAnEigenvalue { nu_tilde, residual });
        }
        cluster.push(v);
        out.push((e, a));
        prev = e;
    }
    Ok(out)
}
