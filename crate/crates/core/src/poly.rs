//! Polynomials in `x, y, z` with binary64 coefficients.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

use serde::{Serialize, Serializer};

pub type Exponents = [u32; 3];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Polynomial {
    terms: BTreeMap<Exponents, f64>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        Self::monomial([0, 0, 0], c)
    }

    pub fn monomial(e: Exponents, c: f64) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c);
        p
    }

    /// The coordinate `x_i` (`i = 0, 1, 2`).
    pub fn var(i: usize) -> Self {
        let mut e = [0; 3];
        e[i] = 1;
        Self::monomial(e, 1.0)
    }

    pub fn add_term(&mut self, e: Exponents, c: f64) {
        if c == 0.0 {
            return;
        }
        let slot = self.terms.entry(e).or_insert(0.0);
        *slot += c;
        if *slot == 0.0 {
            self.terms.remove(&e);
        }
    }

    pub fn coeff(&self, e: Exponents) -> f64 {
        self.terms.get(&e).copied().unwrap_or(0.0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Exponents, f64)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, *c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(d)` when every monomial has total degree `d`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = Self::zero();
        for (e, c) in self.terms() {
            out.add_term(e, c * s);
        }
        out
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero();
        for (mut e, c) in self.terms() {
            if e[i] > 0 {
                let n = e[i] as f64;
                e[i] -= 1;
                out.add_term(e, c * n);
            }
        }
        out
    }

    /// Multiplication by `x_i`.
    pub fn times_var(&self, i: usize) -> Self {
        let mut out = Self::zero();
        for (mut e, c) in self.terms() {
            e[i] += 1;
            out.add_term(e, c);
        }
        out
    }

    pub fn laplacian(&self) -> Self {
        (0..3).fold(Self::zero(), |acc, i| &acc + &self.derivative(i).derivative(i))
    }

    /// Rotation generator `J_i = x_j ∂_k − x_k ∂_j` for cyclic `(i, j, k)`;
    /// the angular momentum is `L_i = −i J_i`.
    pub fn rotation(&self, i: usize) -> Self {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        &self.derivative(k).times_var(j) - &self.derivative(j).times_var(k)
    }

    pub fn eval(&self, x: [f64; 3]) -> f64 {
        self.terms()
            .map(|(e, c)| {
                c * x[0].powi(e[0] as i32) * x[1].powi(e[1] as i32) * x[2].powi(e[2] as i32)
            })
            .sum()
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c);
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, -c);
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (ea, ca) in self.terms() {
            for (eb, cb) in rhs.terms() {
                out.add_term([ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]], ca * cb);
            }
        }
        out
    }
}

#[derive(Serialize)]
struct Term {
    exponents: Exponents,
    coefficient: f64,
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.terms().map(|(exponents, coefficient)| Term {
            exponents,
            coefficient,
        }))
    }
}
