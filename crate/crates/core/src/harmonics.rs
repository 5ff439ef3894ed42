//! Lamé harmonics `x^{γ₀} y^{γ₁} z^{γ₂} Π_j (x²/(θ_j−α₀²) + y²/(θ_j−α₁²) + z²/(θ_j−α₂²))`
//! as explicit polynomials, and sphero-conal coordinates on the unit sphere.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{physical_from_canonical, species_for_degree, SpeciesExponents, TopParameters};
use crate::poly::Polynomial;
use crate::recurrence::{build_recurrence, eigenpairs};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HarmonicPolynomial {
    pub k: usize,
    pub gamma: SpeciesExponents,
    pub theta_roots: Vec<f64>,
    pub coeffs: Polynomial,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpheroConalPoint {
    pub u1: f64,
    pub u2: f64,
}

fn horner(coeffs: &[f64], t: f64) -> (f64, f64) {
    let mut p = 0.0;
    let mut dp = 0.0;
    for &c in coeffs.iter().rev() {
        dp = dp * t + p;
        p = p * t + c;
    }
    (p, dp)
}

/// Roots of `Σ a_j t^j`, mapped by `u = t·(α₁²−α₀²) + α₁²`, ascending.
pub fn theta_roots_from_eigenvector(a: &[f64], p: &TopParameters) -> Result<Vec<f64>> {
    let Some(&lead) = a.last() else {
        return Err(Error::InvalidArgument("empty coefficient vector".to_string()));
    };
    let m = a.len() - 1;
    if m == 0 {
        return Ok(Vec::new());
    }
    if lead == 0.0 || !lead.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "leading coefficient {lead} must be finite and nonzero"
        )));
    }
    let companion = DMatrix::from_fn(m, m, |i, j| {
        if j == m - 1 {
            -a[i] / lead
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    let eig = companion.complex_eigenvalues();
    let mut roots = Vec::with_capacity(m);
    for z in eig.iter() {
        if z.im.abs() > 1e-7 * (1.0 + z.re.abs()) {
            return Err(Error::ComplexRootDetected { re: z.re, im: z.im });
        }
        let mut t = z.re;
        for _ in 0..50 {
            let (v, dv) = horner(a, t);
            if dv == 0.0 || !dv.is_finite() {
                break;
            }
            let step = v / dv;
            t -= step;
            if step.abs() <= 4.0 * f64::EPSILON * t.abs().max(1e-300) {
                break;
            }
        }
        roots.push(t * p.scale() + p.a1sq());
    }
    roots.sort_by(f64::total_cmp);
    let [a0, _, a2] = p.as_array();
    if let Some(&bad) = roots.iter().find(|&&u| !(u > a0 && u < a2)) {
        return Err(Error::ConvergenceFailure(format!(
            "root {bad} lies outside ({a0}, {a2})"
        )));
    }
    if roots.windows(2).any(|w| w[1] - w[0] <= 1e-12 * w[1].abs()) {
        return Err(Error::ConvergenceFailure("repeated θ root".to_string()));
    }
    Ok(roots)
}

/// Largest `|Σ_j (γ_j + ½)/(θ_i − α_j²) + 2 Σ_{l≠i} 1/(θ_i − θ_l)|` over `i`.
pub fn niven_residual(theta: &[f64], g: SpeciesExponents, p: &TopParameters) -> f64 {
    let rho = g.rho().as_array();
    let alpha = p.as_array();
    theta
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let own: f64 = rho.iter().zip(&alpha).map(|(r, a)| r / (t - a)).sum();
            let pair: f64 = theta
                .iter()
                .enumerate()
                .filter(|&(l, _)| l != i)
                .map(|(_, &s)| 2.0 / (t - s))
                .sum();
            (own + pair).abs()
        })
        .fold(0.0, f64::max)
}

pub fn build_harmonic(
    k: usize,
    g: SpeciesExponents,
    theta_roots: &[f64],
    p: &TopParameters,
) -> Result<HarmonicPolynomial> {
    let expected = g.degree_for(k)?;
    if theta_roots.len() != expected {
        return Err(Error::DegreeMismatch {
            k,
            gamma_total: g.total(),
            expected,
            got: theta_roots.len(),
        });
    }
    let alpha = p.as_array();
    let mut psi = Polynomial::monomial(g.as_array().map(u32::from), 1.0);
    for &t in theta_roots {
        let mut quadric = Polynomial::zero();
        for (i, &a) in alpha.iter().enumerate() {
            let d = t - a;
            if d == 0.0 || !d.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "θ = {t} coincides with a squared semi-axis"
                )));
            }
            let mut e = [0; 3];
            e[i] = 2;
            quadric.add_term(e, 1.0 / d);
        }
        psi = &psi * &quadric;
    }
    if psi.homogeneous_degree() != Some(k as u32) {
        return Err(Error::DegreeMismatch {
            k,
            gamma_total: g.total(),
            expected,
            got: theta_roots.len(),
        });
    }
    Ok(HarmonicPolynomial {
        k,
        gamma: g,
        theta_roots: theta_roots.to_vec(),
        coeffs: psi,
    })
}

fn relative_to(psi: &Polynomial, residual: &Polynomial) -> f64 {
    let scale = psi.max_abs_coeff();
    if scale == 0.0 {
        return residual.max_abs_coeff();
    }
    residual.max_abs_coeff() / scale
}

/// `max|coeff Δψ| / max|coeff ψ|`.
pub fn laplacian_residual(h: &HarmonicPolynomial) -> f64 {
    relative_to(&h.coeffs, &h.coeffs.laplacian())
}

/// `L_α ψ = −(α₀² J_x² + α₁² J_y² + α₂² J_z²) ψ`.
pub fn apply_top_operator(psi: &Polynomial, p: &TopParameters) -> Polynomial {
    p.as_array()
        .iter()
        .enumerate()
        .fold(Polynomial::zero(), |acc, (i, &a)| {
            &acc - &psi.rotation(i).rotation(i).scale(a)
        })
}

/// `max|coeff (L_α ψ − λψ)| / max|coeff ψ|`.
pub fn operator_residual(h: &HarmonicPolynomial, lambda: f64, p: &TopParameters) -> f64 {
    let lhs = apply_top_operator(&h.coeffs, p);
    relative_to(&h.coeffs, &(&lhs - &h.coeffs.scale(lambda)))
}

/// Zeros of `R(u) = x²/(u−α₀²) + y²/(u−α₁²) + z²/(u−α₂²)` for a unit vector.
pub fn spheroconal_from_cartesian(
    x: f64,
    y: f64,
    z: f64,
    p: &TopParameters,
) -> Result<SpheroConalPoint> {
    let r2 = x * x + y * y + z * z;
    if !((r2 - 1.0).abs() <= 1e-12) {
        return Err(Error::InvalidArgument(format!(
            "point is not on the unit sphere (|r|² = {r2})"
        )));
    }
    let [a0, a1, a2] = p.as_array();
    let (x2, y2, z2) = (x * x, y * y, z * z);
    let b = x2 * (a1 + a2) + y2 * (a0 + a2) + z2 * (a0 + a1);
    let c = x2 * a1 * a2 + y2 * a0 * a2 + z2 * a0 * a1;
    let disc = (b * b - 4.0 * c).max(0.0);
    let u2 = 0.5 * (b + disc.sqrt());
    let u1 = c / u2;
    let interior = a0 < u1 && u1 < a1 && a1 < u2 && u2 < a2;
    if x == 0.0 || y == 0.0 || z == 0.0 || !interior {
        return Err(Error::OnAxisDegeneracy { u1, u2 });
    }
    Ok(SpheroConalPoint { u1, u2 })
}

/// `(x², y², z²)` of the sphere point with sphero-conal coordinates `sc`.
pub fn cartesian_from_spheroconal(sc: SpheroConalPoint, p: &TopParameters) -> Result<[f64; 3]> {
    let [a0, a1, a2] = p.as_array();
    let SpheroConalPoint { u1, u2 } = sc;
    if !(a0 < u1 && u1 < a1 && a1 < u2 && u2 < a2) {
        return Err(Error::InvalidArgument(format!(
            "({u1}, {u2}) does not interlace ({a0}, {a1}, {a2})"
        )));
    }
    Ok([
        (u1 - a0) * (u2 - a0) / ((a1 - a0) * (a2 - a0)),
        (u1 - a1) * (u2 - a1) / ((a0 - a1) * (a2 - a1)),
        (u1 - a2) * (u2 - a2) / ((a0 - a2) * (a1 - a2)),
    ])
}

/// Cosine of the angle between `∂r/∂u₁` and `∂r/∂u₂` in the positive octant,
/// by central differences with step `h`.
pub fn coordinate_orthogonality(sc: SpheroConalPoint, p: &TopParameters, h: f64) -> Result<f64> {
    let point = |u1: f64, u2: f64| -> Result<[f64; 3]> {
        Ok(cartesian_from_spheroconal(SpheroConalPoint { u1, u2 }, p)?.map(f64::sqrt))
    };
    let diff = |a: [f64; 3], b: [f64; 3]| [0, 1, 2].map(|i| (a[i] - b[i]) / (2.0 * h));
    let r1 = diff(point(sc.u1 + h, sc.u2)?, point(sc.u1 - h, sc.u2)?);
    let r2 = diff(point(sc.u1, sc.u2 + h)?, point(sc.u1, sc.u2 - h)?);
    let dot: f64 = r1.iter().zip(&r2).map(|(a, b)| a * b).sum();
    let n1 = r1.iter().map(|v| v * v).sum::<f64>().sqrt();
    let n2 = r2.iter().map(|v| v * v).sum::<f64>().sqrt();
    Ok(dot / (n1 * n2))
}

/// A constructed harmonic with its eigenvalue and consistency residuals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LameHarmonic {
    pub lambda: f64,
    pub harmonic: HarmonicPolynomial,
    pub niven_residual: f64,
    pub laplacian_residual: f64,
    pub operator_residual: f64,
}

/// All `2k+1` Lamé harmonics of degree `k`, ordered by `λ`.
pub fn degree_harmonics(k: usize, p: &TopParameters) -> Result<Vec<LameHarmonic>> {
    let per_species: Vec<Vec<LameHarmonic>> = species_for_degree(k)
        .par_iter()
        .map(|entry| {
            let gamma = entry.gamma;
            let wrap = |e: Error| Error::Solver {
                k,
                gamma,
                source: Box::new(e),
            };
            let rec = build_recurrence(k, gamma, p).map_err(wrap)?;
            eigenpairs(&rec)
                .map_err(wrap)?
                .into_iter()
                .map(|(ratio, a)| {
                    let lambda = physical_from_canonical(ratio * rec.mu, rec.mu, gamma, p);
                    let theta = theta_roots_from_eigenvector(&a, p).map_err(wrap)?;
                    let harmonic = build_harmonic(k, gamma, &theta, p).map_err(wrap)?;
                    Ok(LameHarmonic {
                        lambda,
                        niven_residual: niven_residual(&theta, gamma, p),
                        laplacian_residual: laplacian_residual(&harmonic),
                        operator_residual: operator_residual(&harmonic, lambda, p),
                        harmonic,
                    })
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let mut out: Vec<LameHarmonic> = per_species.into_iter().flatten().collect();
    out.sort_by(|a, b| a.lambda.total_cmp(&b.lambda).then(a.harmonic.gamma.cmp(&b.harmonic.gamma)));
    Ok(out)
}
