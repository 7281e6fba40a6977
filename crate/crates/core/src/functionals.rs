//! Toric test-configurations as concave piecewise-affine functions on the
//! moment polytope, and their non-Archimedean functionals.
//!
//! For `f = min_j a_j` on `P` with normalized Lebesgue measure `dx/vol(P)`:
//!
//! * `E^NA(f)` is the mean of `f`,
//! * `J^NA(f) = max_P f − E^NA(f)`,
//! * `D^NA(f) = f(0) − E^NA(f)` (the log-canonical term localizes at the origin),
//! * `⟨f, ρ⟩ = (1/vol) ∫ f ⟨ρ, x − b⟩ dx`,
//! * `D_Z^NA(f) = D^NA(f) + ⟨f, ∇θ⟩`.

use std::collections::BTreeSet;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extremal::{ExtremalData, FanoPolytope};
use crate::measure::{self, DhMeasure};
use crate::poly::AffineFn;
use crate::polytope::{region_subdivision, HPolytope, Point};
use crate::rat::{self, Rat};

#[derive(Debug, Clone)]
pub struct PlConcave {
    affines: Vec<AffineFn>,
    domain: FanoPolytope,
    regions: Vec<(HPolytope, AffineFn)>,
}

/// Test-configuration file: `{"affines": [{"gradient": [...], "constant": "p/q"}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestConfiguration {
    pub affines: Vec<AffineFn>,
}

impl PlConcave {
    /// Builds `min_j a_j` on `domain`, dropping affines that are nowhere
    /// active on a full-dimensional set.
    pub fn new(domain: &FanoPolytope, affines: Vec<AffineFn>) -> Result<Self> {
        if affines.is_empty() {
            return Err(Error::EmptyConfiguration);
        }
        for a in &affines {
            a.check_dim(domain.dim())?;
        }
        let regions = region_subdivision(domain.base(), &affines)?;
        let affines = regions.iter().map(|(_, a)| a.clone()).collect();
        Ok(Self { affines, domain: domain.clone(), regions })
    }

    pub fn affine(domain: &FanoPolytope, a: AffineFn) -> Result<Self> {
        Self::new(domain, vec![a])
    }

    pub fn constant(domain: &FanoPolytope, value: Rat) -> Self {
        Self::affine(domain, AffineFn::constant(domain.dim(), value))
            .expect("constant function on a validated polytope")
    }

    pub fn affines(&self) -> &[AffineFn] {
        &self.affines
    }

    pub fn domain(&self) -> &FanoPolytope {
        &self.domain
    }

    pub fn regions(&self) -> &[(HPolytope, AffineFn)] {
        &self.regions
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        self.affines.iter().map(|a| a.eval(x)).min().expect("nonempty")
    }

    /// Vertices of all linearity regions, deduplicated and sorted.
    pub fn candidates(&self) -> Vec<Point> {
        let set: BTreeSet<Point> = self
            .regions
            .iter()
            .flat_map(|(r, _)| r.vertices().expect("pruned regions are nonempty").to_vec())
            .collect();
        set.into_iter().collect()
    }

    pub fn max(&self) -> Rat {
        self.candidates().iter().map(|v| self.eval(v)).max().expect("nonempty")
    }

    pub fn min(&self) -> Rat {
        self.candidates().iter().map(|v| self.eval(v)).min().expect("nonempty")
    }

    pub fn is_affine(&self) -> bool {
        self.affines.len() == 1
    }

    pub fn add_constant(&self, k: &Rat) -> Self {
        let shift = |a: &AffineFn| a.add_constant(k);
        Self {
            affines: self.affines.iter().map(shift).collect(),
            domain: self.domain.clone(),
            regions: self.regions.iter().map(|(r, a)| (r.clone(), shift(a))).collect(),
        }
    }

    /// Adds the same affine function to every piece; regions are unchanged.
    pub fn add_affine(&self, t: &AffineFn) -> Self {
        let shift = |a: &AffineFn| a.add(t);
        Self {
            affines: self.affines.iter().map(shift).collect(),
            domain: self.domain.clone(),
            regions: self.regions.iter().map(|(r, a)| (r.clone(), shift(a))).collect(),
        }
    }

    /// `min P f < f(0) − 1`: outside the range where the origin localization
    /// of the log-canonical term has been checked against closed forms.
    pub fn outside_calibrated_regime(&self) -> bool {
        let origin = vec![Rat::zero(); self.dim()];
        self.min() < self.eval(&origin) - rat::one()
    }

    pub fn to_config(&self) -> TestConfiguration {
        TestConfiguration { affines: self.affines.clone() }
    }
}

pub fn dh_measure(f: &PlConcave) -> Result<DhMeasure> {
    measure::pushforward(f.regions(), f.domain().volume())
}

fn regionwise_integral(f: &PlConcave, weight: Option<&AffineFn>) -> Rat {
    let total = f.regions().iter().fold(Rat::zero(), |acc, (r, a)| {
        let v = match weight {
            None => r.integrate_affine(a),
            Some(w) => r.integrate_affine_product(a, w),
        };
        acc + v.expect("regions are full-dimensional")
    });
    total / f.domain().volume()
}

pub fn e_na(f: &PlConcave) -> Rat {
    regionwise_integral(f, None)
}

pub fn j_na(f: &PlConcave) -> Rat {
    f.max() - e_na(f)
}

pub fn d_na(f: &PlConcave) -> Rat {
    let origin = vec![Rat::zero(); f.dim()];
    f.eval(&origin) - e_na(f)
}

pub fn inner_product(f: &PlConcave, rho: &[Rat]) -> Result<Rat> {
    f.domain().check_vector(rho)?;
    let w = AffineFn::new(rho.to_vec(), -rat::dot(rho, f.domain().barycenter()));
    Ok(regionwise_integral(f, Some(&w)))
}

pub fn d_z_na(f: &PlConcave, extremal: &ExtremalData) -> Rat {
    d_na(f) + regionwise_integral(f, Some(&extremal.theta))
}

/// `⟨α, β_Z⟩`, the extremal part of `D_Z^NA`.
pub fn extremal_pairing(f: &PlConcave, extremal: &ExtremalData) -> Rat {
    regionwise_integral(f, Some(&extremal.theta))
}
