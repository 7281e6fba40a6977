//! Affine functions, sparse multivariate polynomials, and univariate polynomials.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rat::{self, Rat};

/// `x ↦ ⟨gradient, x⟩ + constant`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineFn {
    #[serde(with = "rat::serde_rat_vec")]
    pub gradient: Vec<Rat>,
    #[serde(with = "rat::serde_rat")]
    pub constant: Rat,
}

impl AffineFn {
    pub fn new(gradient: Vec<Rat>, constant: Rat) -> Self {
        Self { gradient, constant }
    }

    pub fn constant(dim: usize, value: Rat) -> Self {
        Self::new(vec![Rat::zero(); dim], value)
    }

    pub fn linear(gradient: Vec<Rat>) -> Self {
        Self::new(gradient, Rat::zero())
    }

    pub fn dim(&self) -> usize {
        self.gradient.len()
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        rat::dot(&self.gradient, x) + &self.constant
    }

    pub fn is_constant(&self) -> bool {
        self.gradient.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &AffineFn) -> AffineFn {
        AffineFn::new(
            self.gradient.iter().zip(&other.gradient).map(|(a, b)| a + b).collect(),
            &self.constant + &other.constant,
        )
    }

    pub fn sub(&self, other: &AffineFn) -> AffineFn {
        AffineFn::new(
            self.gradient.iter().zip(&other.gradient).map(|(a, b)| a - b).collect(),
            &self.constant - &other.constant,
        )
    }

    pub fn scale(&self, s: &Rat) -> AffineFn {
        AffineFn::new(self.gradient.iter().map(|a| a * s).collect(), &self.constant * s)
    }

    pub fn add_constant(&self, k: &Rat) -> AffineFn {
        AffineFn::new(self.gradient.clone(), &self.constant + k)
    }

    pub fn to_polynomial(&self) -> Polynomial {
        let n = self.dim();
        let mut p = Polynomial::constant(n, self.constant.clone());
        for (i, g) in self.gradient.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, g.clone());
        }
        p
    }

    pub fn check_dim(&self, n: usize) -> Result<()> {
        if self.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: self.dim() });
        }
        Ok(())
    }
}

/// Sparse polynomial in `dim` variables; keys are exponent vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    pub dim: usize,
    pub terms: BTreeMap<Vec<u32>, Rat>,
}

impl Polynomial {
    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: Rat) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(vec![0; dim], c);
        p
    }

    /// The monomial `x_i x_j` (or `x_i²` when `i == j`).
    pub fn quadratic_monomial(dim: usize, i: usize, j: usize, c: Rat) -> Self {
        let mut e = vec![0; dim];
        e[i] += 1;
        e[j] += 1;
        let mut p = Self::zero(dim);
        p.add_term(e, c);
        p
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Rat) -> Polynomial {
        let mut out = Polynomial::zero(self.dim);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.dim);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        self.terms.iter().fold(Rat::zero(), |acc, (e, c)| {
            let mono = e.iter().zip(x).fold(Rat::one(), |m, (&k, xi)| m * rat::pow(xi, k as usize));
            acc + c * mono
        })
    }
}

/// Univariate polynomial `Σ coeffs[i] λ^i`, trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    pub coeffs: Vec<Rat>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Rat) -> Self {
        Self::new(vec![c])
    }

    /// `(λ + shift)^k`, expanded.
    pub fn shifted_power(shift: &Rat, k: usize) -> Self {
        let mut p = UniPoly::constant(Rat::one());
        let lin = UniPoly::new(vec![shift.clone(), Rat::one()]);
        for _ in 0..k {
            p = p.mul(&lin);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.coeffs.iter().rev().fold(Rat::zero(), |acc, c| acc * x + c)
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let z = Rat::zero();
        UniPoly::new((0..len).map(|i| self.coeffs.get(i).unwrap_or(&z) + other.coeffs.get(i).unwrap_or(&z)).collect())
    }

    pub fn scale(&self, s: &Rat) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * rat::int(i as i64)).collect())
    }

    /// Antiderivative vanishing at 0.
    pub fn antiderivative(&self) -> UniPoly {
        let mut out = vec![Rat::zero()];
        out.extend(self.coeffs.iter().enumerate().map(|(i, c)| c / rat::int(i as i64 + 1)));
        UniPoly::new(out)
    }

    pub fn integrate(&self, a: &Rat, b: &Rat) -> Rat {
        let anti = self.antiderivative();
        anti.eval(b) - anti.eval(a)
    }

    /// Exact Lagrange interpolation through `(x_i, y_i)` with distinct nodes.
    pub fn interpolate(points: &[(Rat, Rat)]) -> UniPoly {
        let mut acc = UniPoly::zero();
        for (i, (xi, yi)) in points.iter().enumerate() {
            let mut basis = UniPoly::constant(Rat::one());
            let mut denom = Rat::one();
            for (j, (xj, _)) in points.iter().enumerate() {
                if i != j {
                    basis = basis.mul(&UniPoly::new(vec![-xj.clone(), Rat::one()]));
                    denom *= xi - xj;
                }
            }
            acc = acc.add(&basis.scale(&(yi / denom)));
        }
        acc
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("({c})λ"),
                _ => format!("({c})λ^{i}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
