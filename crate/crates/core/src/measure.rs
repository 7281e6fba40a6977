//! Probability measures on the line made of atoms plus a piecewise-polynomial
//! density, and exact pushforwards of normalized Lebesgue measure under
//! piecewise-affine maps.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{AffineFn, UniPoly};
use crate::polytope::HPolytope;
use crate::rat::{self, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Atom {
    #[serde(with = "rat::serde_rat")]
    pub location: Rat,
    #[serde(with = "rat::serde_rat")]
    pub mass: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityPiece {
    pub lo: Rat,
    pub hi: Rat,
    pub density: UniPoly,
}

/// Atoms plus piecewise-polynomial density, kept in canonical form so that
/// two equal measures compare equal as data: atoms sorted with merged
/// locations, pieces sorted and disjoint with adjacent equal polynomials merged.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DhMeasure {
    pub atoms: Vec<Atom>,
    pub pieces: Vec<DensityPiece>,
}

impl DhMeasure {
    pub fn dirac(at: Rat) -> Self {
        Self::from_parts(vec![Atom { location: at, mass: rat::one() }], Vec::new())
    }

    pub fn from_parts(atoms: Vec<Atom>, pieces: Vec<DensityPiece>) -> Self {
        let mut merged: BTreeMap<Rat, Rat> = BTreeMap::new();
        for a in atoms {
            *merged.entry(a.location).or_insert_with(Rat::zero) += a.mass;
        }
        let atoms =
            merged.into_iter().filter(|(_, m)| !m.is_zero()).map(|(location, mass)| Atom { location, mass }).collect();
        Self { atoms, pieces: canonical_pieces(pieces) }
    }

    pub fn total_mass(&self) -> Rat {
        self.moment(0)
    }

    pub fn mean(&self) -> Rat {
        self.moment(1)
    }

    pub fn second_moment(&self) -> Rat {
        self.moment(2)
    }

    /// `∫ λ^k dμ`.
    pub fn moment(&self, k: usize) -> Rat {
        let weight = UniPoly::new({
            let mut c = vec![Rat::zero(); k + 1];
            c[k] = rat::one();
            c
        });
        let atoms = self.atoms.iter().fold(Rat::zero(), |acc, a| acc + &a.mass * rat::pow(&a.location, k));
        self.pieces.iter().fold(atoms, |acc, p| acc + p.density.mul(&weight).integrate(&p.lo, &p.hi))
    }

    /// `∫ g(λ) dμ` for polynomial `g`.
    pub fn integrate(&self, g: &UniPoly) -> Rat {
        let atoms = self.atoms.iter().fold(Rat::zero(), |acc, a| acc + &a.mass * g.eval(&a.location));
        self.pieces.iter().fold(atoms, |acc, p| acc + p.density.mul(g).integrate(&p.lo, &p.hi))
    }

    /// `μ([λ, ∞))`.
    pub fn tail_mass(&self, lambda: &Rat) -> Rat {
        let atoms = self.atoms.iter().filter(|a| a.location >= *lambda).fold(Rat::zero(), |acc, a| acc + &a.mass);
        self.pieces.iter().fold(atoms, |acc, p| {
            if p.hi <= *lambda {
                acc
            } else {
                let lo = if p.lo > *lambda { p.lo.clone() } else { lambda.clone() };
                acc + p.density.integrate(&lo, &p.hi)
            }
        })
    }

    pub fn support_max(&self) -> Option<Rat> {
        let a = self.atoms.iter().map(|a| &a.location).max();
        let p = self.pieces.iter().map(|p| &p.hi).max();
        a.into_iter().chain(p).max().cloned()
    }

    pub fn support_min(&self) -> Option<Rat> {
        let a = self.atoms.iter().map(|a| &a.location).min();
        let p = self.pieces.iter().map(|p| &p.lo).min();
        a.into_iter().chain(p).min().cloned()
    }

    pub fn density_at(&self, lambda: &Rat) -> Rat {
        self.pieces
            .iter()
            .filter(|p| p.lo <= *lambda && *lambda < p.hi)
            .fold(Rat::zero(), |acc, p| acc + p.density.eval(lambda))
    }

    /// Checks masses and density signs at piece endpoints, at the vertex of
    /// quadratic pieces, and on a 64-point rational grid for higher degree.
    pub fn is_nonnegative(&self) -> bool {
        if self.atoms.iter().any(|a| a.mass.is_negative()) {
            return false;
        }
        self.pieces.iter().all(|p| {
            let mut probes = vec![p.lo.clone(), p.hi.clone()];
            match p.density.degree() {
                Some(2) => {
                    let d = p.density.derivative();
                    let x = -d.coeff(0) / d.coeff(1);
                    if x > p.lo && x < p.hi {
                        probes.push(x);
                    }
                }
                Some(d) if d > 2 => {
                    let w = &p.hi - &p.lo;
                    probes.extend((1..64).map(|i| &p.lo + &w * rat::rat(i, 64)));
                }
                _ => {}
            }
            probes.iter().all(|x| !p.density.eval(x).is_negative())
        })
    }
}

fn canonical_pieces(pieces: Vec<DensityPiece>) -> Vec<DensityPiece> {
    let pieces: Vec<DensityPiece> = pieces.into_iter().filter(|p| p.lo < p.hi && !p.density.is_zero()).collect();
    let mut cuts: Vec<Rat> = pieces.iter().flat_map(|p| [p.lo.clone(), p.hi.clone()]).collect();
    cuts.sort();
    cuts.dedup();
    let mut out: Vec<DensityPiece> = Vec::new();
    for w in cuts.windows(2) {
        let (lo, hi) = (&w[0], &w[1]);
        let density =
            pieces.iter().filter(|p| p.lo <= *lo && *hi <= p.hi).fold(UniPoly::zero(), |acc, p| acc.add(&p.density));
        if density.is_zero() {
            continue;
        }
        match out.last_mut() {
            Some(prev) if prev.hi == *lo && prev.density == density => prev.hi = hi.clone(),
            _ => out.push(DensityPiece { lo: lo.clone(), hi: hi.clone(), density }),
        }
    }
    out
}

/// Pushforward of `Lebesgue / total_volume` restricted to `region` under `a`.
///
/// A constant `a` gives an atom. Otherwise `V(λ) = vol(region ∩ {a ≤ λ})` is
/// a polynomial of degree ≤ n between consecutive vertex values of `a`; it
/// is recovered exactly by interpolation at n+1 nodes and differentiated.
pub fn pushforward_region(region: &HPolytope, a: &AffineFn, total_volume: &Rat) -> Result<DhMeasure> {
    let vol = region.volume()?;
    if a.is_constant() {
        return Ok(DhMeasure::from_parts(
            vec![Atom { location: a.constant.clone(), mass: vol / total_volume }],
            Vec::new(),
        ));
    }
    let n = region.dim();
    let mut breaks: Vec<Rat> = region.vertices()?.iter().map(|v| a.eval(v)).collect();
    breaks.sort();
    breaks.dedup();
    let mut pieces = Vec::new();
    for w in breaks.windows(2) {
        let (lo, hi) = (&w[0], &w[1]);
        let width = hi - lo;
        let nodes: Vec<(Rat, Rat)> = (0..=n)
            .map(|j| {
                let lambda = lo + &width * rat::rat(j as i64, n as i64);
                let v = sublevel_volume(region, a, &lambda)?;
                Ok((lambda, v))
            })
            .collect::<Result<_>>()?;
        let cumulative = UniPoly::interpolate(&nodes);
        pieces.push(DensityPiece {
            lo: lo.clone(),
            hi: hi.clone(),
            density: cumulative.derivative().scale(&(rat::one() / total_volume)),
        });
    }
    Ok(DhMeasure::from_parts(Vec::new(), pieces))
}

/// `vol(region ∩ {a ≤ λ})`, zero when the slice is empty or flat.
pub fn sublevel_volume(region: &HPolytope, a: &AffineFn, lambda: &Rat) -> Result<Rat> {
    let cut = region.intersect(vec![(a.gradient.clone(), lambda - &a.constant)]);
    let cut = match cut {
        Ok(c) => c,
        Err(Error::EmptyPolytope) => return Ok(Rat::zero()),
        Err(e) => return Err(e),
    };
    match cut.volume() {
        Ok(v) => Ok(v),
        Err(Error::EmptyPolytope) | Err(Error::NotFullDimensional) => Ok(Rat::zero()),
        Err(e) => Err(e),
    }
}

/// Pushforward of normalized Lebesgue measure under a piecewise-affine map
/// given by its linearity regions.
pub fn pushforward(regions: &[(HPolytope, AffineFn)], total_volume: &Rat) -> Result<DhMeasure> {
    let mut atoms = Vec::new();
    let mut pieces = Vec::new();
    for (r, a) in regions {
        let m = pushforward_region(r, a, total_volume)?;
        atoms.extend(m.atoms);
        pieces.extend(m.pieces);
    }
    Ok(DhMeasure::from_parts(atoms, pieces))
}

#[derive(Serialize, Deserialize)]
struct PieceRepr {
    #[serde(with = "rat::serde_rat_vec")]
    interval: Vec<Rat>,
    #[serde(with = "rat::serde_rat_vec")]
    coeffs: Vec<Rat>,
}

#[derive(Serialize, Deserialize)]
struct MeasureRepr {
    atoms: Vec<Atom>,
    pieces: Vec<PieceRepr>,
}

impl Serialize for DhMeasure {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MeasureRepr {
            atoms: self.atoms.clone(),
            pieces: self
                .pieces
                .iter()
                .map(|p| PieceRepr { interval: vec![p.lo.clone(), p.hi.clone()], coeffs: p.density.coeffs.clone() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DhMeasure {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = MeasureRepr::deserialize(d)?;
        let mut pieces = Vec::with_capacity(repr.pieces.len());
        for p in repr.pieces {
            let [lo, hi]: [Rat; 2] =
                p.interval.try_into().map_err(|_| serde::de::Error::custom("interval must have two endpoints"))?;
            pieces.push(DensityPiece { lo, hi, density: UniPoly::new(p.coeffs) });
        }
        Ok(DhMeasure::from_parts(repr.atoms, pieces))
    }
}
