//! Twisting toric test-configurations by one-parameter directions and the
//! reduced J-functional `J_T^NA(f) = inf_ρ J^NA(f + ⟨ρ, ·⟩)`.
//!
//! Twisting only tilts every affine piece by `⟨ρ, x⟩`, so the linearity
//! regions of `f` are fixed and `max_P(f + ⟨ρ, ·⟩)` is attained at a region
//! vertex. The infimum over real `ρ` is an LP with rational data, solved
//! exactly.

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::functionals::{e_na, PlConcave};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::poly::AffineFn;
use crate::polytope::Point;
use crate::rat::{self, Rat};

#[derive(Debug, Clone)]
pub struct TwistProblem {
    pub f: PlConcave,
    pub candidates: Vec<Point>,
    /// `f` at each candidate.
    pub values: Vec<Rat>,
    pub mean_f: Rat,
    pub b: Point,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reduction {
    #[serde(with = "rat::serde_rat")]
    pub j_na: Rat,
    #[serde(rename = "j_t_na", with = "rat::serde_rat")]
    pub j_t: Rat,
    #[serde(with = "rat::serde_rat_vec")]
    pub rho_star: Vec<Rat>,
    pub candidates_used: usize,
}

impl TwistProblem {
    pub fn new(f: &PlConcave) -> Self {
        let candidates = f.candidates();
        let values = candidates.iter().map(|v| f.eval(v)).collect();
        Self { f: f.clone(), candidates, values, mean_f: e_na(f), b: f.domain().barycenter().clone() }
    }

    /// `J^NA` of the twist by `rho`.
    pub fn j_at(&self, rho: &[Rat]) -> Result<Rat> {
        self.f.domain().check_vector(rho)?;
        let top = self
            .candidates
            .iter()
            .zip(&self.values)
            .map(|(v, fv)| fv + rat::dot(rho, v))
            .max()
            .expect("candidates nonempty");
        Ok(top - &self.mean_f - rat::dot(rho, &self.b))
    }

    /// Float evaluation for iterative cross-checks.
    pub fn j_at_f64(&self, rho: &[f64]) -> (f64, Vec<f64>) {
        let mut best = f64::NEG_INFINITY;
        let mut arg = 0;
        for (i, (v, fv)) in self.candidates.iter().zip(&self.values).enumerate() {
            let val = rat::to_f64(fv) + v.iter().zip(rho).map(|(x, r)| rat::to_f64(x) * r).sum::<f64>();
            if val > best {
                best = val;
                arg = i;
            }
        }
        let b: Vec<f64> = self.b.iter().map(rat::to_f64).collect();
        let value = best - rat::to_f64(&self.mean_f) - b.iter().zip(rho).map(|(x, r)| x * r).sum::<f64>();
        let grad = self.candidates[arg].iter().zip(&b).map(|(v, bi)| rat::to_f64(v) - bi).collect();
        (value, grad)
    }

    fn base_lp(&self, objective: Vec<Rat>) -> LinearProgram {
        let n = self.b.len();
        let mut lp = LinearProgram::new(objective);
        for (v, fv) in self.candidates.iter().zip(&self.values) {
            // f(v) + ⟨ρ, v⟩ − t ≤ 0
            let mut row = Vec::with_capacity(n + 1);
            row.push(-rat::one());
            row.extend(v.iter().cloned());
            lp.constrain(row, Relation::Le, -fv.clone());
        }
        lp
    }

    /// Exact minimization over `ρ`, returning the lexicographically smallest
    /// minimizer.
    pub fn reduce(&self) -> Result<Reduction> {
        let n = self.b.len();
        // variables: (t, ρ_1, …, ρ_n); objective t − ⟨ρ, b⟩
        let mut objective = vec![rat::one()];
        objective.extend(self.b.iter().map(|bi| -bi.clone()));
        let optimum = match self.base_lp(objective.clone()).minimize() {
            LpOutcome::Optimal { value, .. } => value,
            LpOutcome::Unbounded => return Err(Error::LpUnbounded),
            LpOutcome::Infeasible => return Err(Error::LpInfeasible),
        };
        let mut fixed: Vec<Rat> = Vec::with_capacity(n);
        for i in 0..n {
            let mut obj = vec![Rat::zero(); n + 1];
            obj[i + 1] = rat::one();
            let mut lp = self.base_lp(obj);
            lp.constrain(objective.clone(), Relation::Le, optimum.clone());
            for (j, val) in fixed.iter().enumerate() {
                let mut row = vec![Rat::zero(); n + 1];
                row[j + 1] = rat::one();
                lp.constrain(row, Relation::Eq, val.clone());
            }
            match lp.minimize() {
                LpOutcome::Optimal { x, .. } => fixed.push(x[i + 1].clone()),
                LpOutcome::Unbounded => return Err(Error::LpUnbounded),
                LpOutcome::Infeasible => return Err(Error::Internal("optimal face became infeasible".into())),
            }
        }
        let j_t = self.j_at(&fixed)?;
        if j_t != &optimum - &self.mean_f {
            return Err(Error::Internal("lexicographic refinement changed the optimum".into()));
        }
        Ok(Reduction {
            j_na: self.j_at(&vec![Rat::zero(); n])?,
            j_t,
            rho_star: fixed,
            candidates_used: self.candidates.len(),
        })
    }
}

/// Adds `⟨rho, x⟩` to every affine piece.
pub fn twist(f: &PlConcave, rho: &[Rat]) -> Result<PlConcave> {
    f.domain().check_vector(rho)?;
    Ok(f.add_affine(&AffineFn::linear(rho.to_vec())))
}

pub fn jna_twisted(f: &PlConcave, rho: &[Rat]) -> Result<Rat> {
    TwistProblem::new(f).j_at(rho)
}

pub fn reduce_jna(f: &PlConcave) -> Result<Reduction> {
    TwistProblem::new(f).reduce()
}
