//! Finite-k lattice brute force: jumping numbers of the filtration induced by
//! a toric test-configuration, their normalized weight measures, and the
//! discrete pairing with a one-parameter subgroup.
//!
//! Sections of `kL` correspond to lattice points `u ∈ kP`; a section's
//! jumping number is `μ(u) = ⌊k f(u/k)⌋`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::extremal::FanoPolytope;
use crate::functionals::{dh_measure, e_na, inner_product, PlConcave};
use crate::rat::{self, Rat};

pub type LatticePoint = Vec<i64>;

/// All `u ∈ ℤⁿ` with `⟨ℓ_i, u⟩ ≤ k · rhs_i`, lexicographically ordered.
pub fn lattice_points(p: &FanoPolytope, k: u32) -> Result<Vec<LatticePoint>> {
    if k == 0 {
        return Err(Error::InvalidK);
    }
    let n = p.dim();
    let kq = rat::int(k as i64);
    let verts = p.vertices();
    let bounds: Vec<(i64, i64)> = (0..n)
        .map(|i| {
            let lo = verts.iter().map(|v| &v[i] * &kq).min().expect("vertices");
            let hi = verts.iter().map(|v| &v[i] * &kq).max().expect("vertices");
            (rat::ceil_to_bigint(&lo).to_i64().expect("small"), rat::floor_to_bigint(&hi).to_i64().expect("small"))
        })
        .collect();
    let facets: Vec<(Vec<i64>, Rat)> = p
        .base()
        .facets()
        .iter()
        .map(|f| (f.normal.iter().map(|a| a.to_i64().expect("small")).collect(), &f.rhs * &kq))
        .collect();
    let mut out = Vec::new();
    let mut u: Vec<i64> = bounds.iter().map(|b| b.0).collect();
    'walk: loop {
        if facets.iter().all(|(a, r)| {
            let d: i64 = a.iter().zip(&u).map(|(x, y)| x * y).sum();
            rat::int(d) <= *r
        }) {
            out.push(u.clone());
        }
        // odometer, last coordinate fastest
        let mut i = n;
        loop {
            if i == 0 {
                break 'walk;
            }
            i -= 1;
            if u[i] < bounds[i].1 {
                u[i] += 1;
                for j in i + 1..n {
                    u[j] = bounds[j].0;
                }
                break;
            }
        }
    }
    Ok(out)
}

/// `f` rescaled to integer data: `k f(u/k) = min_j (⟨G_j, u⟩ + k C_j) / D`.
struct IntegerPieces {
    grads: Vec<Vec<i128>>,
    consts: Vec<i128>,
    den: i128,
}

impl IntegerPieces {
    fn new(f: &PlConcave) -> Result<Self> {
        let all: Vec<Rat> =
            f.affines().iter().flat_map(|a| a.gradient.iter().chain(std::iter::once(&a.constant)).cloned()).collect();
        let den = rat::common_denominator(&all);
        let to_i = |q: &Rat| -> Result<i128> {
            (q * Rat::from_integer(den.clone()))
                .to_integer()
                .to_i128()
                .ok_or_else(|| Error::Internal("coefficient overflow in lattice oracle".into()))
        };
        let grads = f
            .affines()
            .iter()
            .map(|a| a.gradient.iter().map(to_i).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        let consts = f.affines().iter().map(|a| to_i(&a.constant)).collect::<Result<_>>()?;
        let den = den.to_i128().ok_or_else(|| Error::Internal("denominator overflow".into()))?;
        Ok(Self { grads, consts, den })
    }

    fn jump(&self, u: &[i64], k: i128) -> i64 {
        let num = self
            .grads
            .iter()
            .zip(&self.consts)
            .map(|(g, c)| g.iter().zip(u).map(|(a, &x)| a * x as i128).sum::<i128>() + k * c)
            .min()
            .expect("nonempty");
        Integer::div_floor(&num, &self.den) as i64
    }
}

/// `μ(u) = ⌊k f(u/k)⌋` for each lattice point of `kP`, in lattice order.
pub fn jump_weights(f: &PlConcave, k: u32) -> Result<Vec<(LatticePoint, i64)>> {
    let pts = lattice_points(f.domain(), k)?;
    let pieces = IntegerPieces::new(f)?;
    Ok(pts
        .into_par_iter()
        .map(|u| {
            let mu = pieces.jump(&u, k as i128);
            (u, mu)
        })
        .collect())
}

/// `(1/N_k) Σ_u δ_{μ(u)/k}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightMeasure {
    pub k: u32,
    /// Multiplicity of each jumping number `μ`; the atom sits at `μ/k`.
    pub entries: BTreeMap<i64, u64>,
    pub n_k: u64,
}

impl WeightMeasure {
    pub fn atoms(&self) -> Vec<(Rat, Rat)> {
        let n = rat::int(self.n_k as i64);
        self.entries.iter().map(|(&mu, &m)| (rat::rat(mu, self.k as i64), rat::int(m as i64) / &n)).collect()
    }

    pub fn total_mass(&self) -> Rat {
        rat::int(self.entries.values().sum::<u64>() as i64) / rat::int(self.n_k as i64)
    }

    pub fn moment(&self, p: u32) -> Rat {
        let sum =
            self.entries.iter().fold(BigInt::zero(), |acc, (&mu, &m)| acc + BigInt::from(mu).pow(p) * BigInt::from(m));
        Rat::new(sum, BigInt::from(self.n_k) * BigInt::from(self.k).pow(p))
    }

    pub fn mean(&self) -> Rat {
        self.moment(1)
    }

    pub fn second_moment(&self) -> Rat {
        self.moment(2)
    }

    pub fn support_max(&self) -> Rat {
        let mu = *self.entries.keys().next_back().expect("nonempty");
        rat::rat(mu, self.k as i64)
    }

    pub fn support_min(&self) -> Rat {
        let mu = *self.entries.keys().next().expect("nonempty");
        rat::rat(mu, self.k as i64)
    }
}

pub fn weight_measure(f: &PlConcave, k: u32) -> Result<WeightMeasure> {
    let weights = jump_weights(f, k)?;
    let mut entries = BTreeMap::new();
    for (_, mu) in &weights {
        *entries.entry(*mu).or_insert(0u64) += 1;
    }
    Ok(WeightMeasure { k, entries, n_k: weights.len() as u64 })
}

/// Discrete pairing with the subgroup `rho ∈ ℤⁿ`:
/// `(1/(k²N)) Σ μ⟨ρ,u⟩ − (1/(k²N²)) (Σ μ)(Σ ⟨ρ,u⟩)`.
pub fn gabor_inner(f: &PlConcave, rho: &[i64], k: u32) -> Result<Rat> {
    if rho.len() != f.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), found: rho.len() });
    }
    let weights = jump_weights(f, k)?;
    let n = BigInt::from(weights.len());
    let (mut s_mu_nu, mut s_mu, mut s_nu) = (BigInt::zero(), BigInt::zero(), BigInt::zero());
    for (u, mu) in &weights {
        let nu: i64 = u.iter().zip(rho).map(|(a, b)| a * b).sum();
        s_mu_nu += BigInt::from(*mu) * BigInt::from(nu);
        s_mu += BigInt::from(*mu);
        s_nu += BigInt::from(nu);
    }
    let k2 = BigInt::from(k) * BigInt::from(k);
    let first = Rat::new(s_mu_nu, &k2 * &n);
    let second = Rat::new(s_mu * s_nu, &k2 * &n * &n);
    Ok(first - second)
}

/// `(1/N_k) #{u : μ(u) ≥ ⌈kλ⌉}`.
pub fn vol_distribution(f: &PlConcave, k: u32, lambda: &Rat) -> Result<Rat> {
    let threshold = rat::ceil_to_bigint(&(lambda * rat::int(k as i64)));
    let weights = jump_weights(f, k)?;
    let count = weights.iter().filter(|(_, mu)| BigInt::from(*mu) >= threshold).count();
    Ok(rat::int(count as i64) / rat::int(weights.len() as i64))
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub k: u32,
    pub n_k: u64,
    #[serde(with = "rat::serde_rat")]
    pub mean: Rat,
    #[serde(with = "rat::serde_rat")]
    pub second_moment: Rat,
    #[serde(with = "rat::serde_rat")]
    pub gabor_inner: Rat,
    #[serde(with = "rat::serde_rat")]
    pub exact_mean: Rat,
    #[serde(with = "rat::serde_rat")]
    pub exact_second_moment: Rat,
    #[serde(with = "rat::serde_rat")]
    pub exact_inner: Rat,
    #[serde(with = "rat::serde_rat")]
    pub mean_error: Rat,
    #[serde(with = "rat::serde_rat")]
    pub second_moment_error: Rat,
    #[serde(with = "rat::serde_rat")]
    pub inner_error: Rat,
}

/// One row per `k` comparing lattice statistics with their exact limits.
pub fn convergence_table(f: &PlConcave, rho: &[i64], ladder: &[u32]) -> Result<Vec<ConvergenceRow>> {
    let dh = dh_measure(f)?;
    let exact_mean = e_na(f);
    let exact_second_moment = dh.second_moment();
    let rho_q: Vec<Rat> = rho.iter().map(|&r| rat::int(r)).collect();
    let exact_inner = inner_product(f, &rho_q)?;
    ladder
        .iter()
        .map(|&k| {
            let wm = weight_measure(f, k)?;
            let gi = gabor_inner(f, rho, k)?;
            let mean = wm.mean();
            let second_moment = wm.second_moment();
            Ok(ConvergenceRow {
                k,
                n_k: wm.n_k,
                mean_error: rat::abs(&(&mean - &exact_mean)),
                second_moment_error: rat::abs(&(&second_moment - &exact_second_moment)),
                inner_error: rat::abs(&(&gi - &exact_inner)),
                mean,
                second_moment,
                gabor_inner: gi,
                exact_mean: exact_mean.clone(),
                exact_second_moment: exact_second_moment.clone(),
                exact_inner: exact_inner.clone(),
            })
        })
        .collect()
}
