//! Top parameters, Lamé species bookkeeping and the scalar maps between the
//! canonical recurrence eigenvalue and the physical eigenvalue of `L_α`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Squared inertia-axis coefficients `α = (α₀², α₁², α₂²)` of
/// `L_α = α₀² L_x² + α₁² L_y² + α₂² L_z²`, validated to lie in the open Weyl
/// chamber `0 < α₀² < α₁² < α₂²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TopParameters {
    a0sq: f64,
    a1sq: f64,
    a2sq: f64,
    beta_sq: f64,
}

impl TopParameters {
    pub fn new(a0sq: f64, a1sq: f64, a2sq: f64) -> Result<Self> {
        validate_parameters(a0sq, a1sq, a2sq)
    }

    pub fn a0sq(&self) -> f64 {
        self.a0sq
    }

    pub fn a1sq(&self) -> f64 {
        self.a1sq
    }

    pub fn a2sq(&self) -> f64 {
        self.a2sq
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.a0sq, self.a1sq, self.a2sq]
    }

    /// `β² = (α₂² − α₁²)/(α₁² − α₀²)`, the right endpoint of the canonical
    /// interval `[−1, β²]`.
    pub fn beta_sq(&self) -> f64 {
        self.beta_sq
    }

    /// `|α| = α₀² + α₁² + α₂²`.
    pub fn total(&self) -> f64 {
        self.a0sq + self.a1sq + self.a2sq
    }

    /// Width `α₁² − α₀²` of the affine map from canonical to physical
    /// coordinates.
    pub fn scale(&self) -> f64 {
        self.a1sq - self.a0sq
    }

    /// Multiplies every coefficient by `t > 0`.
    pub fn scaled(&self, t: f64) -> Result<Self> {
        Self::new(t * self.a0sq, t * self.a1sq, t * self.a2sq)
    }
}

impl fmt::Display for TopParameters {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a0sq, self.a1sq, self.a2sq)
    }
}

pub fn validate_parameters(a0sq: f64, a1sq: f64, a2sq: f64) -> Result<TopParameters> {
    let ordered = a0sq.is_finite()
        && a1sq.is_finite()
        && a2sq.is_finite()
        && 0.0 < a0sq
        && a0sq < a1sq
        && a1sq < a2sq;
    if !ordered {
        return Err(Error::WeylViolation(a0sq, a1sq, a2sq));
    }
    let beta_sq = (a2sq - a1sq) / (a1sq - a0sq);
    if !(beta_sq.is_finite() && beta_sq > 0.0) {
        return Err(Error::WeylViolation(a0sq, a1sq, a2sq));
    }
    Ok(TopParameters {
        a0sq,
        a1sq,
        a2sq,
        beta_sq,
    })
}

/// Binary exponents of the monomial prefactor `x^g0 y^g1 z^g2` of a Lamé
/// harmonic. `g0` belongs to `x` (and `α₀²`), `g1` to `y`, `g2` to `z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpeciesExponents {
    pub g0: u8,
    pub g1: u8,
    pub g2: u8,
}

impl SpeciesExponents {
    /// All eight exponent patterns, ordered by species and then
    /// lexicographically descending so that `(1,0,0)` precedes `(0,1,0)`.
    pub const ALL: [SpeciesExponents; 8] = [
        SpeciesExponents::new_unchecked(0, 0, 0),
        SpeciesExponents::new_unchecked(1, 0, 0),
        SpeciesExponents::new_unchecked(0, 1, 0),
        SpeciesExponents::new_unchecked(0, 0, 1),
        SpeciesExponents::new_unchecked(0, 1, 1),
        SpeciesExponents::new_unchecked(1, 0, 1),
        SpeciesExponents::new_unchecked(1, 1, 0),
        SpeciesExponents::new_unchecked(1, 1, 1),
    ];

    const fn new_unchecked(g0: u8, g1: u8, g2: u8) -> Self {
        SpeciesExponents { g0, g1, g2 }
    }

    pub fn new(g0: u8, g1: u8, g2: u8) -> Result<Self> {
        if g0 > 1 || g1 > 1 || g2 > 1 {
            return Err(Error::InvalidArgument(format!(
                "species exponents must be 0 or 1, got ({g0}, {g1}, {g2})"
            )));
        }
        Ok(Self::new_unchecked(g0, g1, g2))
    }

    pub fn as_array(&self) -> [u8; 3] {
        [self.g0, self.g1, self.g2]
    }

    /// `|γ|`.
    pub fn total(&self) -> u32 {
        u32::from(self.g0) + u32::from(self.g1) + u32::from(self.g2)
    }

    /// Whittaker–Watson species number, `|γ| + 1`.
    pub fn species(&self) -> u8 {
        self.total() as u8 + 1
    }

    pub fn rho(&self) -> RhoWeights {
        RhoWeights {
            r0: f64::from(self.g0) + 0.5,
            r1: f64::from(self.g1) + 0.5,
            r2: f64::from(self.g2) + 0.5,
        }
    }

    /// Polynomial degree `m = (k − |γ|)/2`, if `k` is compatible.
    pub fn degree_for(&self, k: usize) -> Result<usize> {
        let total = self.total() as usize;
        if k < total || (k - total) % 2 != 0 {
            return Err(Error::ParityMismatch { k, gamma: *self });
        }
        Ok((k - total) / 2)
    }
}

impl fmt::Display for SpeciesExponents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.g0, self.g1, self.g2)
    }
}

/// Charges `ρ_j = γ_j + 1/2` of the generalized Lamé equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RhoWeights {
    pub r0: f64,
    pub r1: f64,
    pub r2: f64,
}

impl RhoWeights {
    pub fn total(&self) -> f64 {
        self.r0 + self.r1 + self.r2
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.r0, self.r1, self.r2]
    }
}

/// One exponent pattern contributing to degree `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpeciesEntry {
    pub gamma: SpeciesExponents,
    /// Degree of the Lamé polynomial.
    pub m: usize,
    /// Number of harmonics, `m + 1`.
    pub count: usize,
}

/// Exponent patterns present at degree `k`: `γ = 0` and the three `|γ| = 2`
/// patterns for even `k`, the three `|γ| = 1` patterns and `(1,1,1)` for odd
/// `k`. The counts always sum to `2k + 1`.
pub fn species_for_degree(k: usize) -> Vec<SpeciesEntry> {
    SpeciesExponents::ALL
        .iter()
        .filter_map(|&gamma| {
            gamma.degree_for(k).ok().map(|m| SpeciesEntry {
                gamma,
                m,
                count: m + 1,
            })
        })
        .collect()
}

/// Offset `D(α, γ)` between the physical eigenvalue and four times the
/// accessory parameter of the generalized Lamé equation.
pub fn d_offset(p: &TopParameters, g: SpeciesExponents) -> f64 {
    let [a0, a1, a2] = p.as_array();
    let [g0, g1, g2] = g.as_array().map(f64::from);
    (a0 + a1) * g2
        + (a0 + a2) * g1
        + (a1 + a2) * g0
        + 2.0 * g0 * g1 * a2
        + 2.0 * g1 * g2 * a0
        + 2.0 * g0 * g2 * a1
}

/// `λ = 4·(ν̃·(α₁² − α₀²) + α₁²·μ) + D(α, γ)`.
pub fn physical_from_canonical(
    nu_tilde: f64,
    mu: f64,
    g: SpeciesExponents,
    p: &TopParameters,
) -> f64 {
    4.0 * (nu_tilde * p.scale() + p.a1sq() * mu) + d_offset(p, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn alpha123() -> TopParameters {
        TopParameters::new(1.0, 2.0, 3.0).unwrap()
    }

    #[test]
    fn validation() {
        assert_eq!(alpha123().beta_sq(), 1.0);
        assert!(matches!(
            validate_parameters(2.0, 1.0, 3.0),
            Err(Error::WeylViolation(..))
        ));
        assert!(matches!(
            validate_parameters(1.0, 1.0, 3.0),
            Err(Error::WeylViolation(..))
        ));
        assert!(validate_parameters(0.0, 1.0, 3.0).is_err());
        assert!(validate_parameters(1.0, 2.0, f64::NAN).is_err());
        assert!(validate_parameters(1.0, 2.0, f64::INFINITY).is_err());
    }

    #[test]
    fn weyl_message_names_chamber() {
        let msg = validate_parameters(3.0, 2.0, 1.0).unwrap_err().to_string();
        assert!(msg.contains("Λ³"), "{msg}");
    }

    #[test]
    fn species_small_degrees() {
        let k1 = species_for_degree(1);
        assert_eq!(k1.len(), 3);
        assert!(k1.iter().all(|e| e.gamma.total() == 1 && e.m == 0 && e.count == 1));

        let k2 = species_for_degree(2);
        assert_eq!(k2[0].gamma, SpeciesExponents::new(0, 0, 0).unwrap());
        assert_eq!((k2[0].m, k2[0].count), (1, 2));
        assert!(k2[1..].iter().all(|e| e.gamma.total() == 2 && e.count == 1));
        assert_eq!(k2.iter().map(|e| e.count).sum::<usize>(), 5);

        let k4 = species_for_degree(4);
        let by_species = |s: u8| {
            k4.iter()
                .filter(|e| e.gamma.species() == s)
                .map(|e| e.count)
                .sum::<usize>()
        };
        assert_eq!(by_species(1), 3);
        assert_eq!(by_species(3), 6);
        assert_eq!(k4.iter().map(|e| e.count).sum::<usize>(), 9);
    }

    #[test]
    fn species_counts_match_closed_forms() {
        for k in 0..60usize {
            let entries = species_for_degree(k);
            let count = |s: u8| {
                entries
                    .iter()
                    .filter(|e| e.gamma.species() == s)
                    .map(|e| e.count)
                    .sum::<usize>()
            };
            if k % 2 == 0 {
                assert_eq!(count(1), k / 2 + 1);
                assert_eq!(count(3), 3 * k / 2);
                assert_eq!(count(2) + count(4), 0);
            } else {
                assert_eq!(count(2), 3 * (k + 1) / 2);
                assert_eq!(count(4), (k - 1) / 2);
                assert_eq!(count(1) + count(3), 0);
            }
            assert_eq!(entries.iter().map(|e| e.count).sum::<usize>(), 2 * k + 1);
        }
    }

    #[test]
    fn d_offset_matches_table_rows() {
        // Rows of the species table as λ − ν.
        let p = TopParameters::new(0.7, 1.9, 4.3).unwrap();
        let [a0, a1, a2] = p.as_array();
        let rows = [
            ((0, 0, 0), 0.0),
            ((1, 0, 0), a1 + a2),
            ((0, 1, 0), a0 + a2),
            ((0, 0, 1), a0 + a1),
            ((0, 1, 1), 4.0 * a0 + a1 + a2),
            ((1, 0, 1), a0 + 4.0 * a1 + a2),
            ((1, 1, 0), a0 + a1 + 4.0 * a2),
            ((1, 1, 1), 4.0 * (a0 + a1 + a2)),
        ];
        for ((g0, g1, g2), expected) in rows {
            let g = SpeciesExponents::new(g0, g1, g2).unwrap();
            assert_abs_diff_eq!(d_offset(&p, g), expected, epsilon = 1e-14);
        }
        let p = alpha123();
        assert_eq!(d_offset(&p, SpeciesExponents::new(1, 0, 0).unwrap()), 5.0);
        assert_eq!(d_offset(&p, SpeciesExponents::new(1, 1, 1).unwrap()), 24.0);
    }

    #[test]
    fn physical_from_canonical_examples() {
        let p = alpha123();
        let yz = SpeciesExponents::new(0, 1, 1).unwrap();
        assert_eq!(physical_from_canonical(0.0, 0.0, yz, &p), 9.0);
        let x = SpeciesExponents::new(1, 0, 0).unwrap();
        assert_eq!(physical_from_canonical(0.0, 0.0, x, &p), 5.0);
        let zero = SpeciesExponents::new(0, 0, 0).unwrap();
        let lam = physical_from_canonical(3f64.sqrt() / 2.0, 1.5, zero, &p);
        assert_abs_diff_eq!(lam, 12.0 + 2.0 * 3f64.sqrt(), epsilon = 1e-13);
    }

    #[test]
    fn parity_mismatch() {
        let g = SpeciesExponents::new(1, 0, 0).unwrap();
        assert!(matches!(g.degree_for(2), Err(Error::ParityMismatch { .. })));
        assert!(matches!(
            SpeciesExponents::new(1, 1, 1).unwrap().degree_for(1),
            Err(Error::ParityMismatch { .. })
        ));
        assert_eq!(g.degree_for(5).unwrap(), 2);
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        fn chamber() -> impl Strategy<Value = TopParameters> {
            (0.01f64..10.0, 0.01f64..10.0, 0.01f64..10.0)
                .prop_map(|(a, b, c)| TopParameters::new(a, a + b, a + b + c).unwrap())
        }

        proptest! {
            #[test]
            fn affine_increasing_in_nu(p in chamber(), mu in 0.0f64..1e4, x in -10.0f64..10.0, dx in 1e-6f64..5.0, gi in 0usize..8) {
                let g = SpeciesExponents::ALL[gi];
                prop_assert!(physical_from_canonical(x + dx, mu, g, &p) > physical_from_canonical(x, mu, g, &p));
            }

            #[test]
            fn m_zero_lines_equal_offset(p in chamber(), gi in 0usize..8) {
                let g = SpeciesExponents::ALL[gi];
                prop_assert_eq!(physical_from_canonical(0.0, 0.0, g, &p), d_offset(&p, g));
            }

            #[test]
            fn rho_weights(gi in 0usize..8) {
                let g = SpeciesExponents::ALL[gi];
                let rho = g.rho();
                prop_assert_eq!(rho.total(), f64::from(g.total()) + 1.5);
            }
        }
    }
}
