//! Reference spectrum of `L_α` from its matrix in the `|k, m⟩` basis.
//!
//! With `L_± = L_x ± iL_y`,
//!
//! ```text
//! α₀²L_x² + α₁²L_y² = (α₀²−α₁²)/4 · (L_+² + L_−²) + (α₀²+α₁²)/2 · (L² − L_z²)
//! ```
//!
//! so the matrix is real symmetric with nonzero entries only at `|m − m'| ∈ {0, 2}`.
//! Even and odd `m + k` decouple into two tridiagonal blocks.

use serde::Serialize;

use crate::error::Result;
use crate::params::TopParameters;
use crate::spectrum::degree_spectrum;
use crate::tridiag::SymTridiagonal;

/// Dense `(2k+1)×(2k+1)` matrix of `L_α`, rows and columns labelled by
/// `m = −k..=k`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseTopMatrix {
    pub k: usize,
    n: usize,
    entries: Vec<f64>,
}

impl DenseTopMatrix {
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Entry at row/column indices `0..2k+1` (index `i` is `m = i − k`).
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn trace(&self) -> f64 {
        crate::sum::neumaier((0..self.n).map(|i| self.get(i, i)))
    }

    /// Tridiagonal block on indices `parity, parity + 2, …`.
    pub fn block(&self, parity: usize) -> SymTridiagonal {
        let idx: Vec<usize> = (parity..self.n).step_by(2).collect();
        let diag = idx.iter().map(|&i| self.get(i, i)).collect();
        let off = idx.windows(2).map(|w| self.get(w[1], w[0])).collect();
        SymTridiagonal { diag, offdiag: off }
    }
}

fn raising(k: f64, m: f64) -> f64 {
    (k * (k + 1.0) - m * (m + 1.0)).max(0.0).sqrt()
}

pub fn build_dense_matrix(k: usize, p: &TopParameters) -> DenseTopMatrix {
    let n = 2 * k + 1;
    let kf = k as f64;
    let mut entries = vec![0.0; n * n];
    let half_sum = 0.5 * (p.a0sq() + p.a1sq());
    let quarter_diff = 0.25 * (p.a0sq() - p.a1sq());
    for i in 0..n {
        let m = i as f64 - kf;
        entries[i * n + i] = half_sum * (kf * (kf + 1.0) - m * m) + p.a2sq() * m * m;
        if i + 2 < n {
            let v = quarter_diff * (raising(kf, m) * raising(kf, m + 1.0));
            entries[(i + 2) * n + i] = v;
            entries[i * n + i + 2] = v;
        }
    }
    DenseTopMatrix { k, n, entries }
}

/// Sorted eigenvalues of the dense matrix.
pub fn oracle_spectrum(k: usize, p: &TopParameters) -> Result<Vec<f64>> {
    let mat = build_dense_matrix(k, p);
    let mut values = mat.block(0).eigenvalues()?;
    if mat.dim() > 1 {
        values.extend(mat.block(1).eigenvalues()?);
    }
    values.sort_by(f64::total_cmp);
    Ok(values)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumComparison {
    pub k: usize,
    pub max_rel_deviation: f64,
    pub pass: bool,
}

fn rel_dev(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    if d == 0.0 {
        0.0
    } else {
        d / a.abs().max(b.abs())
    }
}

/// Elementwise relative deviation between two sorted spectra of equal
/// length; infinite when the lengths differ.
pub fn max_relative_deviation(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| rel_dev(*x, *y)).fold(0.0, f64::max)
}

/// Recurrence spectrum against the dense oracle at degree `k`.
pub fn compare_spectra(k: usize, p: &TopParameters, tol: f64) -> Result<SpectrumComparison> {
    let recurrence = degree_spectrum(k, p)?.eigenvalues();
    let oracle = oracle_spectrum(k, p)?;
    let dev = max_relative_deviation(&recurrence, &oracle);
    Ok(SpectrumComparison {
        k,
        max_rel_deviation: dev,
        pass: dev <= tol,
    })
}
