//! Fano polytopes in canonical presentation, the Futaki pairing, and the
//! extremal affine function with its maximum ϑ.
//!
//! The extremal function is the zero-mean affine `θ(x) = ⟨c, x − b⟩` whose
//! coefficient solves `Cov · c = vol · b`, where `Cov` is the unnormalized
//! covariance of Lebesgue measure on the polytope and `b` its barycenter.
//! This is the unique affine function with `∫ x_i θ dx = vol · b_i`, which
//! makes the relative Ding invariant vanish on every torus product.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::measure::{self, DhMeasure};
use crate::poly::AffineFn;
use crate::polytope::{HPolytope, Point};
use crate::rat::{self, Rat};

/// Moment polytope of `(M, −K_M)`: every facet `⟨ℓ_i, x⟩ ≤ 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FanoPolytope {
    base: HPolytope,
    volume: Rat,
    barycenter: Point,
}

impl FanoPolytope {
    pub fn base(&self) -> &HPolytope {
        &self.base
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn volume(&self) -> &Rat {
        &self.volume
    }

    pub fn barycenter(&self) -> &Point {
        &self.barycenter
    }

    /// `Lⁿ = c₁(M)ⁿ = n! · vol(P)`.
    pub fn degree(&self) -> Rat {
        rat::factorial(self.dim()) * &self.volume
    }

    pub fn vertices(&self) -> &[Point] {
        self.base.vertices().expect("validated polytope has vertices")
    }

    pub fn check_vector(&self, v: &[Rat]) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: v.len() });
        }
        Ok(())
    }
}

pub fn validate_fano(p: &HPolytope) -> Result<FanoPolytope> {
    for (index, f) in p.facets().iter().enumerate() {
        if !f.rhs.is_one() {
            return Err(Error::NotCanonicalFano { index, rhs: rat::format_rat(&f.rhs) });
        }
    }
    let origin = vec![Rat::zero(); p.dim()];
    if !p.contains_interior(&origin) {
        return Err(Error::OriginNotInterior);
    }
    let volume = p.volume()?;
    let barycenter = p.barycenter()?;
    Ok(FanoPolytope { base: p.clone(), volume, barycenter })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremalData {
    pub barycenter: Point,
    pub cov: Matrix,
    pub theta: AffineFn,
    pub vartheta: Rat,
}

impl ExtremalData {
    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Repr<'a> {
            #[serde(with = "rat::serde_rat_vec")]
            barycenter: Vec<Rat>,
            theta: &'a AffineFn,
            #[serde(with = "rat::serde_rat")]
            vartheta: Rat,
            vartheta_float: f64,
        }
        serde_json::to_value(Repr {
            barycenter: self.barycenter.clone(),
            theta: &self.theta,
            vartheta: self.vartheta.clone(),
            vartheta_float: rat::to_f64(&self.vartheta),
        })
        .expect("serializable")
    }
}

/// `Cov_ij = ∫_P (x_i − b_i)(x_j − b_j) dx`.
pub fn covariance(p: &FanoPolytope) -> Result<Matrix> {
    let n = p.dim();
    let b = p.barycenter();
    let centered: Vec<AffineFn> = (0..n)
        .map(|i| {
            let mut g = vec![Rat::zero(); n];
            g[i] = Rat::one();
            AffineFn::new(g, -b[i].clone())
        })
        .collect();
    let mut cov = vec![vec![Rat::zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let v = p.base().integrate_affine_product(&centered[i], &centered[j])?;
            cov[i][j] = v.clone();
            cov[j][i] = v;
        }
    }
    Ok(cov)
}

pub fn extremal_affine(p: &FanoPolytope) -> Result<ExtremalData> {
    let cov = covariance(p)?;
    let b = p.barycenter().clone();
    let rhs: Vec<Rat> = b.iter().map(|bi| bi * p.volume()).collect();
    let c = linalg::solve(&cov, &rhs).ok_or(Error::SingularGram)?;
    let theta = AffineFn::new(c.clone(), -rat::dot(&c, &b));
    let vartheta = p.base().max_affine(&theta)?;
    Ok(ExtremalData { barycenter: b, cov, theta, vartheta })
}

/// `⟨a, b⟩`, which equals `−D^NA` of the product configuration `⟨a, x⟩`.
pub fn futaki_pairing(p: &FanoPolytope, a: &[Rat]) -> Result<Rat> {
    p.check_vector(a)?;
    Ok(rat::dot(a, p.barycenter()))
}

/// Pushforward of normalized Lebesgue measure under `x ↦ ⟨a, x − b⟩`.
pub fn dh_of_vector_field(p: &FanoPolytope, a: &[Rat]) -> Result<DhMeasure> {
    p.check_vector(a)?;
    let h = AffineFn::new(a.to_vec(), -rat::dot(a, p.barycenter()));
    measure::pushforward_region(p.base(), &h, p.volume())
}

/// Residual `Cov · c − vol · b`; zero for correct extremal data.
pub fn gram_residual(p: &FanoPolytope, data: &ExtremalData) -> Vec<Rat> {
    linalg::mat_vec(&data.cov, &data.theta.gradient)
        .into_iter()
        .zip(p.barycenter())
        .map(|(l, bi)| l - bi * p.volume())
        .collect()
}

/// `∫_P (x_i − b_i) θ dx` for each `i`, straight from the integrator.
pub fn moment_system(p: &FanoPolytope, theta: &AffineFn) -> Result<Vec<Rat>> {
    let n = p.dim();
    let b = p.barycenter();
    (0..n)
        .map(|i| {
            let mut g = vec![Rat::zero(); n];
            g[i] = Rat::one();
            let xi = AffineFn::new(g, -b[i].clone()).to_polynomial();
            p.base().integrate_quadratic(&xi.mul(&theta.to_polynomial()))
        })
        .collect()
}

pub fn is_positive_definite(m: &Matrix) -> bool {
    // leading principal minors
    (1..=m.len()).all(|k| {
        let sub: Matrix = m[..k].iter().map(|r| r[..k].to_vec()).collect();
        linalg::determinant(&sub).is_positive()
    })
}

pub fn quadratic_form(m: &Matrix, a: &[Rat]) -> Rat {
    rat::dot(a, &linalg::mat_vec(m, a))
}
