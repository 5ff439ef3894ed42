//! Symmetric tridiagonal eigensolver: Sturm-sequence bisection for
//! eigenvalues, inverse iteration for eigenvectors.

use crate::error::{Error, Result};

/// Relative width at which a bisection bracket is accepted.
pub const BISECTION_REL_TOL: f64 = 4.0 * f64::EPSILON;

const MAX_BISECTION_STEPS: usize = 400;

/// Symmetric tridiagonal matrix stored as its diagonal and off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() && !offdiag.is_empty() || !diag.is_empty() && offdiag.len() + 1 != diag.len() {
            return Err(Error::InvalidArgument(format!(
                "tridiagonal shape mismatch: {} diagonal, {} off-diagonal entries",
                diag.len(),
                offdiag.len()
            )));
        }
        if diag.iter().chain(&offdiag).any(|v| !v.is_finite()) {
            return Err(Error::ConvergenceFailure(
                "non-finite matrix entry".to_string(),
            ));
        }
        Ok(SymTridiagonal { diag, offdiag })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Gershgorin enclosure of the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.offdiag[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.offdiag[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    fn norm_bound(&self) -> f64 {
        let (lo, hi) = self.gershgorin();
        lo.abs().max(hi.abs())
    }

    fn pivot_floor(&self) -> f64 {
        let emax = self.offdiag.iter().fold(0.0f64, |m, e| m.max(e * e));
        f64::MIN_POSITIVE * emax.max(1.0)
    }

    /// Number of eigenvalues strictly below `x` (negative pivots of the
    /// `LDLᵀ` factorization of `T − xI`).
    pub fn sturm_count(&self, x: f64) -> usize {
        sturm_count_with_floor(&self.diag, &self.offdiag, x, self.pivot_floor())
    }

    /// All eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let n = self.len();
        if n == 0 {
            return Ok(Vec::new());
        }
        if n == 1 {
            return Ok(vec![self.diag[0]]);
        }
        let (glo, ghi) = self.gershgorin();
        let pad = f64::EPSILON * self.norm_bound().max(f64::MIN_POSITIVE) * 4.0;
        let lo = glo - pad - f64::MIN_POSITIVE;
        let hi = ghi + pad + f64::MIN_POSITIVE;
        let abs_floor = 2.0 * f64::EPSILON * self.norm_bound();
        let pivmin = self.pivot_floor();

        let count = |x: f64| sturm_count_with_floor(&self.diag, &self.offdiag, x, pivmin);
        let (nlo, nhi) = (count(lo), count(hi));
        if nlo != 0 || nhi != n {
            return Err(Error::ConvergenceFailure(format!(
                "Sturm counts {nlo}..{nhi} on the Gershgorin bracket do not cover {n} eigenvalues"
            )));
        }

        let mut out = vec![f64::NAN; n];
        // Explicit stack keeps the bracket order deterministic.
        let mut stack = vec![(lo, hi, nlo, nhi, 0usize)];
        while let Some((a, b, na, nb, depth)) = stack.pop() {
            if na == nb {
                continue;
            }
            let width_ok = b - a <= (BISECTION_REL_TOL * a.abs().max(b.abs())).max(abs_floor);
            if width_ok || depth >= MAX_BISECTION_STEPS {
                if !width_ok {
                    return Err(Error::ConvergenceFailure(format!(
                        "bisection bracket [{a}, {b}] did not shrink after {depth} steps"
                    )));
                }
                let mid = 0.5 * (a + b);
                out[na..nb].iter_mut().for_each(|v| *v = mid);
                continue;
            }
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                out[na..nb].iter_mut().for_each(|v| *v = mid);
                continue;
            }
            let nm = count(mid).clamp(na, nb);
            stack.push((mid, b, nm, nb, depth + 1));
            stack.push((a, mid, na, nm, depth + 1));
        }
        if out.iter().any(|v| !v.is_finite()) {
            return Err(Error::ConvergenceFailure(
                "bisection left an eigenvalue unresolved".to_string(),
            ));
        }
        Ok(out)
    }

    /// `y = T x`.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * x[i];
                if i > 0 {
                    s += self.offdiag[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    s += self.offdiag[i] * x[i + 1];
                }
                s
            })
            .collect()
    }

    /// Unit eigenvector for the eigenvalue nearest `shift`, by inverse
    /// iteration. Vectors in `against` are projected out after each solve,
    /// which separates members of a tight cluster.
    pub fn inverse_iteration(&self, shift: f64, against: &[Vec<f64>]) -> Result<Vec<f64>> {
        let n = self.len();
        if n == 0 {
            return Ok(Vec::new());
        }
        if n == 1 {
            return Ok(vec![1.0]);
        }
        let scale = self.norm_bound().max(f64::MIN_POSITIVE);
        // Nudge the shift off the eigenvalue so the factorization stays finite.
        let sigma = shift + 4.0 * f64::EPSILON * scale;
        // Deterministic start vector with no special alignment.
        let mut v: Vec<f64> = (0..n)
            .map(|i| 1.0 + 0.5 * ((i as f64 + 1.0) * 0.618_033_988_749_895).fract())
            .collect();
        normalize(&mut v);
        for _ in 0..6 {
            let mut w = solve_shifted(self, sigma, &v)?;
            for u in against {
                let proj: f64 = w.iter().zip(u).map(|(a, b)| a * b).sum();
                w.iter_mut().zip(u).for_each(|(a, b)| *a -= proj * b);
            }
            if normalize(&mut w) == 0.0 {
                return Err(Error::ConvergenceFailure(
                    "inverse iteration collapsed to zero".to_string(),
                ));
            }
            v = w;
        }
        Ok(v)
    }
}

pub(crate) fn sturm_count_with_floor(diag: &[f64], offdiag: &[f64], x: f64, pivmin: f64) -> usize {
    let n = diag.len();
    if n == 0 {
        return 0;
    }
    let mut count = 0;
    let mut q = diag[0] - x;
    if q.abs() < pivmin {
        q = -pivmin;
    }
    if q < 0.0 {
        count += 1;
    }
    for i in 1..n {
        let e = offdiag[i - 1];
        q = (diag[i] - x) - e * e / q;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn normalize(v: &mut [f64]) -> f64 {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    norm
}

/// Solves `(T − σI) x = b` by Gaussian elimination with partial pivoting.
fn solve_shifted(t: &SymTridiagonal, sigma: f64, b: &[f64]) -> Result<Vec<f64>> {
    let n = t.len();
    let tiny = f64::EPSILON * t.norm_bound().max(f64::MIN_POSITIVE);
    // Row i holds up to three entries starting at column i after pivoting.
    let mut r0: Vec<f64> = t.diag.iter().map(|d| d - sigma).collect();
    let mut r1: Vec<f64> = (0..n)
        .map(|i| if i + 1 < n { t.offdiag[i] } else { 0.0 })
        .collect();
    let mut r2 = vec![0.0; n];
    let mut sub: Vec<f64> = t.offdiag.clone();
    let mut rhs = b.to_vec();

    for i in 0..n - 1 {
        if sub[i].abs() > r0[i].abs() {
            // Swap rows i and i+1.
            let (a0, a1, a2) = (r0[i], r1[i], r2[i]);
            r0[i] = sub[i];
            r1[i] = r0[i + 1];
            r2[i] = r1[i + 1];
            let f = a0 / r0[i];
            r0[i + 1] = a1 - f * r1[i];
            r1[i + 1] = a2 - f * r2[i];
            rhs.swap(i, i + 1);
            rhs[i + 1] -= f * rhs[i];
        } else {
            if r0[i] == 0.0 {
                r0[i] = tiny;
            }
            let f = sub[i] / r0[i];
            r0[i + 1] -= f * r1[i];
            r1[i + 1] -= f * r2[i];
            rhs[i + 1] -= f * rhs[i];
        }
        sub[i] = 0.0;
    }
    if r0[n - 1] == 0.0 {
        r0[n - 1] = tiny;
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = rhs[i];
        if i + 1 < n {
            s -= r1[i] * x[i + 1];
        }
        if i + 2 < n {
            s -= r2[i] * x[i + 2];
        }
        x[i] = s / r0[i];
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::ConvergenceFailure(
            "singular shifted system in inverse iteration".to_string(),
        ));
    }
    Ok(x)
}
