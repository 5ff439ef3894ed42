//! Spectrum of the quantum asymmetric top `L_α = α₀²L_x² + α₁²L_y² + α₂²L_z²`
//! on spherical harmonics of each degree `k`.
//!
//! The spectrum is assembled species by species from the three-term Lamé
//! recurrence ([`recurrence`], [`spectrum`]) and checked against the
//! `(2k+1)`-dimensional angular-momentum matrix ([`oracle`]). [`harmonics`]
//! builds the corresponding Lamé harmonics as explicit polynomials, and
//! [`dos`] compares the density of `√λ/k` with its large-`k` limit.

pub mod cli;
pub mod dos;
pub mod error;
pub mod harmonics;
pub mod oracle;
pub mod params;
pub mod poly;
pub mod quadrature;
pub mod recurrence;
pub mod spectrum;
pub mod sum;
pub mod tridiag;

pub use dos::{empirical_dos, limit_dos, EmpiricalDos, LimitVariant, TestFunction};
pub use error::{Error, Result};
pub use harmonics::{degree_harmonics, HarmonicPolynomial, SpheroConalPoint};
pub use oracle::{compare_spectra, oracle_spectrum};
pub use params::{SpeciesExponents, TopParameters};
pub use recurrence::{build_recurrence, LameRecurrence};
pub use spectrum::{degree_spectrum, DegreeSpectrum, SpectralLine};
