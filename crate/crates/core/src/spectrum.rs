//! Full spectrum of `L_α` on the degree-`k` spherical harmonics, assembled
//! species by species from the Lamé recurrence.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{physical_from_canonical, species_for_degree, SpeciesExponents, TopParameters};
use crate::recurrence::{build_recurrence_with_fault, canonical_eigenvalues, CoefficientFault};

/// Relative separation below which lines of different species are flagged.
pub const NEAR_DUPLICATE_REL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralLine {
    pub lambda: f64,
    pub k: usize,
    pub gamma: SpeciesExponents,
    /// `ν̃/μ`, or 0 when `μ = 0`.
    pub nu_tilde_over_mu: f64,
    pub index_within_species: usize,
    /// Another species has a line within `NEAR_DUPLICATE_REL · λ`.
    pub near_duplicate: bool,
}

impl SpectralLine {
    pub fn species(&self) -> u8 {
        self.gamma.species()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeSpectrum {
    pub k: usize,
    pub alpha: TopParameters,
    /// Sorted by `λ`.
    pub lines: Vec<SpectralLine>,
}

impl DegreeSpectrum {
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.lines.iter().map(|l| l.lambda).collect()
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }
}

pub fn degree_spectrum(k: usize, p: &TopParameters) -> Result<DegreeSpectrum> {
    degree_spectrum_with_fault(k, p, CoefficientFault::None)
}

#[doc(hidden)]
pub fn degree_spectrum_with_fault(
    k: usize,
    p: &TopParameters,
    fault: CoefficientFault,
) -> Result<DegreeSpectrum> {
    let per_species: Vec<Vec<SpectralLine>> = species_for_degree(k)
        .par_iter()
        .map(|entry| {
            let gamma = entry.gamma;
            let wrap = |e: Error| Error::Solver {
                k,
                gamma,
                source: Box::new(e),
            };
            let rec = build_recurrence_with_fault(k, gamma, p, fault).map_err(wrap)?;
            let values = canonical_eigenvalues(&rec).map_err(wrap)?;
            Ok(values
                .into_iter()
                .enumerate()
                .map(|(index, ratio)| SpectralLine {
                    lambda: physical_from_canonical(ratio * rec.mu, rec.mu, gamma, p),
                    k,
                    gamma,
                    nu_tilde_over_mu: ratio,
                    index_within_species: index,
                    near_duplicate: false,
                })
                .collect())
        })
        .collect::<Result<_>>()?;

    let mut lines: Vec<SpectralLine> = per_species.into_iter().flatten().collect();
    lines.sort_by(|a, b| {
        a.lambda
            .total_cmp(&b.lambda)
            .then(a.gamma.cmp(&b.gamma))
            .then(a.index_within_species.cmp(&b.index_within_species))
    });
    for i in 1..lines.len() {
        let (a, b) = (&lines[i - 1], &lines[i]);
        if a.gamma != b.gamma && (b.lambda - a.lambda).abs() < NEAR_DUPLICATE_REL * b.lambda.abs() {
            lines[i - 1].near_duplicate = true;
            lines[i].near_duplicate = true;
        }
    }
    Ok(DegreeSpectrum {
        k,
        alpha: *p,
        lines,
    })
}

/// Interval `(α₀²(k−3)(k+1), α₂²k(k+4) + 4|α|)` enclosing the degree-`k`
/// eigenvalues.
pub fn van_vleck_window(k: usize, p: &TopParameters) -> (f64, f64) {
    let k = k as f64;
    (
        p.a0sq() * (k - 3.0) * (k + 1.0),
        p.a2sq() * k * (k + 4.0) + 4.0 * p.total(),
    )
}

/// `Σλ` against the trace `(α₀²+α₁²+α₂²)·k(k+1)(2k+1)/3` of `L_α` on the
/// degree-`k` harmonics.
pub fn trace_check(s: &DegreeSpectrum) -> (f64, f64) {
    let computed = crate::sum::neumaier(s.lines.iter().map(|l| l.lambda));
    let k = s.k as f64;
    let expected = s.alpha.total() * k * (k + 1.0) * (2.0 * k + 1.0) / 3.0;
    (computed, expected)
}

/// Operator bounds `α₀² k(k+1) ≤ λ ≤ α₂² k(k+1)`.
pub fn operator_sandwich(k: usize, p: &TopParameters) -> (f64, f64) {
    let casimir = (k * (k + 1)) as f64;
    (p.a0sq() * casimir, p.a2sq() * casimir)
}
