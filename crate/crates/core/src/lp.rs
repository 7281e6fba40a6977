//! Exact rational two-phase simplex with Bland's rule.
//!
//! All decision variables are free; internally each is split into a
//! difference of two nonnegative columns.

use num_traits::{Signed, Zero};

use crate::rat::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<Rat>,
    pub relation: Relation,
    pub rhs: Rat,
}

#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub num_vars: usize,
    /// Minimized.
    pub objective: Vec<Rat>,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rat>, value: Rat },
    Infeasible,
    Unbounded,
}

impl LinearProgram {
    pub fn new(objective: Vec<Rat>) -> Self {
        Self { num_vars: objective.len(), objective, constraints: Vec::new() }
    }

    pub fn constrain(&mut self, coeffs: Vec<Rat>, relation: Relation, rhs: Rat) -> &mut Self {
        debug_assert_eq!(coeffs.len(), self.num_vars);
        self.constraints.push(Constraint { coeffs, relation, rhs });
        self
    }

    pub fn minimize(&self) -> LpOutcome {
        Tableau::build(self).solve(self)
    }

    pub fn maximize(&self) -> LpOutcome {
        let neg = LinearProgram {
            num_vars: self.num_vars,
            objective: self.objective.iter().map(|c| -c).collect(),
            constraints: self.constraints.clone(),
        };
        match neg.minimize() {
            LpOutcome::Optimal { x, value } => LpOutcome::Optimal { x, value: -value },
            other => other,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum ColKind {
    Structural,
    Slack,
    Artificial,
}

struct Tableau {
    rows: Vec<Vec<Rat>>,
    rhs: Vec<Rat>,
    basis: Vec<usize>,
    kinds: Vec<ColKind>,
}

enum Step {
    Optimal,
    Unbounded,
    Pivoted,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let n = lp.num_vars;
        let m = lp.constraints.len();
        let mut kinds = vec![ColKind::Structural; 2 * n];
        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut basis = vec![usize::MAX; m];
        // Column layout is decided row by row; fill in a second pass.
        let mut extra: Vec<(usize, Rat)> = Vec::new(); // (row, coeff) per extra column
        let mut specs = Vec::with_capacity(m);
        for c in &lp.constraints {
            let flip = c.rhs.is_negative();
            let sign = if flip { -Rat::from_integer(1.into()) } else { Rat::from_integer(1.into()) };
            let rel = match (c.relation, flip) {
                (Relation::Le, true) => Relation::Ge,
                (Relation::Ge, true) => Relation::Le,
                (r, _) => r,
            };
            let coeffs: Vec<Rat> = c.coeffs.iter().map(|a| a * &sign).collect();
            specs.push((coeffs, rel, &c.rhs * &sign));
        }
        for (i, (_, rel, _)) in specs.iter().enumerate() {
            match rel {
                Relation::Le => {
                    basis[i] = 2 * n + extra.len();
                    extra.push((i, Rat::from_integer(1.into())));
                    kinds.push(ColKind::Slack);
                }
                Relation::Ge => {
                    extra.push((i, -Rat::from_integer(1.into())));
                    kinds.push(ColKind::Slack);
                }
                Relation::Eq => {}
            }
        }
        for (i, (_, rel, _)) in specs.iter().enumerate() {
            if *rel != Relation::Le {
                basis[i] = 2 * n + extra.len();
                extra.push((i, Rat::from_integer(1.into())));
                kinds.push(ColKind::Artificial);
            }
        }
        let width = kinds.len();
        for (i, (coeffs, _, b)) in specs.into_iter().enumerate() {
            let mut row = vec![Rat::zero(); width];
            for (j, a) in coeffs.iter().enumerate() {
                row[j] = a.clone();
                row[n + j] = -a.clone();
            }
            for (k, (r, v)) in extra.iter().enumerate() {
                if *r == i {
                    row[2 * n + k] = v.clone();
                }
            }
            rows.push(row);
            rhs.push(b);
        }
        Tableau { rows, rhs, basis, kinds }
    }

    fn width(&self) -> usize {
        self.kinds.len()
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = Rat::from_integer(1.into()) / &self.rows[r][c];
        for x in self.rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        self.rhs[r] = &self.rhs[r] * &inv;
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let factor = self.rows[i][c].clone();
            for j in 0..self.width() {
                if !self.rows[r][j].is_zero() {
                    let sub = &factor * &self.rows[r][j];
                    self.rows[i][j] -= sub;
                }
            }
            let sub = &factor * &self.rhs[r];
            self.rhs[i] -= sub;
        }
        self.basis[r] = c;
    }

    /// One Bland step for minimizing `cost` over columns allowed by `allowed`.
    fn step(&mut self, cost: &[Rat], allowed: &dyn Fn(usize) -> bool) -> Step {
        let width = self.width();
        let entering = (0..width).filter(|&j| allowed(j)).find(|&j| {
            if self.basis.contains(&j) {
                return false;
            }
            let mut d = cost[j].clone();
            for (i, &b) in self.basis.iter().enumerate() {
                if !cost[b].is_zero() && !self.rows[i][j].is_zero() {
                    d -= &cost[b] * &self.rows[i][j];
                }
            }
            d.is_negative()
        });
        let Some(j) = entering else {
            return Step::Optimal;
        };
        let mut best: Option<(usize, Rat)> = None;
        for i in 0..self.rows.len() {
            if self.rows[i][j].is_positive() {
                let ratio = &self.rhs[i] / &self.rows[i][j];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
        }
        match best {
            None => Step::Unbounded,
            Some((i, _)) => {
                self.pivot(i, j);
                Step::Pivoted
            }
        }
    }

    fn objective_value(&self, cost: &[Rat]) -> Rat {
        self.basis.iter().zip(&self.rhs).fold(Rat::zero(), |acc, (&b, v)| acc + &cost[b] * v)
    }

    fn solve(mut self, lp: &LinearProgram) -> LpOutcome {
        let n = lp.num_vars;
        let width = self.width();
        let has_artificial = self.kinds.contains(&ColKind::Artificial);
        if has_artificial {
            let cost: Vec<Rat> = self
                .kinds
                .iter()
                .map(|k| if *k == ColKind::Artificial { Rat::from_integer(1.into()) } else { Rat::zero() })
                .collect();
            loop {
                match self.step(&cost, &|_| true) {
                    Step::Optimal => break,
                    Step::Pivoted => continue,
                    Step::Unbounded => unreachable!("phase one is bounded below by zero"),
                }
            }
            if self.objective_value(&cost).is_positive() {
                return LpOutcome::Infeasible;
            }
            // Drive zero-valued artificials out of the basis; drop redundant rows.
            let mut i = 0;
            while i < self.rows.len() {
                if self.kinds[self.basis[i]] == ColKind::Artificial {
                    let col = (0..width).find(|&j| self.kinds[j] != ColKind::Artificial && !self.rows[i][j].is_zero());
                    match col {
                        Some(j) => self.pivot(i, j),
                        None => {
                            self.rows.remove(i);
                            self.rhs.remove(i);
                            self.basis.remove(i);
                            continue;
                        }
                    }
                }
                i += 1;
            }
        }
        let mut cost = vec![Rat::zero(); width];
        for (j, c) in lp.objective.iter().enumerate() {
            cost[j] = c.clone();
            cost[n + j] = -c.clone();
        }
        let kinds = self.kinds.clone();
        let allowed = move |j: usize| kinds[j] != ColKind::Artificial;
        loop {
            match self.step(&cost, &allowed) {
                Step::Optimal => break,
                Step::Pivoted => continue,
                Step::Unbounded => return LpOutcome::Unbounded,
            }
        }
        let mut x = vec![Rat::zero(); n];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < n {
                x[b] += &self.rhs[i];
            } else if b < 2 * n {
                x[b - n] -= &self.rhs[i];
            }
        }
        let value = crate::rat::dot(&lp.objective, &x);
        LpOutcome::Optimal { x, value }
    }
}
