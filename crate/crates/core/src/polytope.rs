//! Exact H-polytopes: vertex enumeration, fan triangulation, volumes,
//! barycenters, low-degree integration, and linearity-region subdivision.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::poly::{AffineFn, Polynomial};
use crate::rat::{self, Rat};

pub const MAX_DIM: usize = 5;

pub type Point = Vec<Rat>;

/// Half-space `⟨normal, x⟩ ≤ rhs` with a primitive integer normal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Facet {
    pub normal: Vec<BigInt>,
    pub rhs: Rat,
}

impl Facet {
    /// Rescales `⟨a, x⟩ ≤ r` so that `a` becomes a primitive integer vector.
    /// Returns `None` for a zero normal.
    pub fn normalized(normal: &[Rat], rhs: &Rat) -> Option<Facet> {
        if normal.iter().all(Zero::is_zero) {
            return None;
        }
        let den = rat::common_denominator(normal);
        let ints: Vec<BigInt> = normal.iter().map(|q| (q * Rat::from_integer(den.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
        let normal: Vec<BigInt> = ints.iter().map(|v| v / &g).collect();
        let scale = Rat::new(den, g);
        Some(Facet { normal, rhs: rhs * scale })
    }

    pub fn normal_rat(&self) -> Vec<Rat> {
        self.normal.iter().map(|v| Rat::from_integer(v.clone())).collect()
    }

    pub fn slack(&self, x: &[Rat]) -> Rat {
        &self.rhs - self.dot(x)
    }

    pub fn dot(&self, x: &[Rat]) -> Rat {
        self.normal.iter().zip(x).fold(Rat::zero(), |acc, (a, xi)| acc + Rat::from_integer(a.clone()) * xi)
    }
}

/// Fan triangulation: each simplex is `dim + 1` points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangulation {
    pub simplices: Vec<Vec<Point>>,
}

impl Triangulation {
    pub fn volumes(&self) -> Vec<Rat> {
        self.simplices.iter().map(|s| simplex_volume(s)).collect()
    }
}

#[derive(Debug, Clone)]
pub struct HPolytope {
    dim: usize,
    facets: Vec<Facet>,
    vertices: OnceLock<Result<Vec<Point>>>,
    triangulation: OnceLock<Result<Triangulation>>,
}

impl PartialEq for HPolytope {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.facets == other.facets
    }
}

impl Eq for HPolytope {}

impl HPolytope {
    /// Builds `{x : ⟨a_i, x⟩ ≤ r_i}`. Normals are normalized to primitive
    /// integer vectors; duplicate normals keep the tightest bound.
    pub fn new(dim: usize, constraints: Vec<(Vec<Rat>, Rat)>) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::DimensionTooLarge(dim, MAX_DIM));
        }
        let mut facets: Vec<Facet> = Vec::new();
        for (a, r) in constraints {
            if a.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: a.len() });
            }
            match Facet::normalized(&a, &r) {
                None if r.is_negative() => return Err(Error::EmptyPolytope),
                None => {}
                Some(f) => match facets.iter_mut().find(|g| g.normal == f.normal) {
                    Some(g) if f.rhs < g.rhs => g.rhs = f.rhs,
                    Some(_) => {}
                    None => facets.push(f),
                },
            }
        }
        Ok(Self::from_facets(dim, facets))
    }

    pub fn from_integer_facets(dim: usize, facets: &[(&[i64], Rat)]) -> Result<Self> {
        Self::new(dim, facets.iter().map(|(n, r)| (n.iter().map(|&v| rat::int(v)).collect(), r.clone())).collect())
    }

    fn from_facets(dim: usize, facets: Vec<Facet>) -> Self {
        Self { dim, facets, vertices: OnceLock::new(), triangulation: OnceLock::new() }
    }

    /// Convex hull of a finite point set, as an H-polytope.
    pub fn from_vertices(points: &[Point]) -> Result<Self> {
        let dim = points.first().map(Vec::len).ok_or(Error::EmptyPolytope)?;
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::DimensionTooLarge(dim, MAX_DIM));
        }
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: p.len() });
        }
        if affine_dimension(points) < dim {
            return Err(Error::NotFullDimensional);
        }
        let mut facets: BTreeSet<Facet> = BTreeSet::new();
        for subset in combinations(points.len(), dim) {
            let base = &points[subset[0]];
            let rows: Matrix =
                subset[1..].iter().map(|&i| points[i].iter().zip(base).map(|(a, b)| a - b).collect()).collect();
            if linalg::rank(&rows) < dim - 1 {
                continue;
            }
            let Some(normal) = linalg::kernel_vector(&rows, dim) else {
                continue;
            };
            let rhs = rat::dot(&normal, base);
            let values: Vec<Rat> = points.iter().map(|p| rat::dot(&normal, p)).collect();
            let (normal, rhs) = if values.iter().all(|v| *v <= rhs) {
                (normal, rhs)
            } else if values.iter().all(|v| *v >= rhs) {
                (normal.iter().map(|v| -v).collect(), -rhs)
            } else {
                continue;
            };
            if let Some(f) = Facet::normalized(&normal, &rhs) {
                facets.insert(f);
            }
        }
        Ok(Self::from_facets(dim, facets.into_iter().collect()))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.facets.iter().all(|f| !f.slack(x).is_negative())
    }

    pub fn contains_interior(&self, x: &[Rat]) -> bool {
        self.facets.iter().all(|f| f.slack(x).is_positive())
    }

    /// Adds constraints, returning a new polytope.
    pub fn intersect(&self, extra: Vec<(Vec<Rat>, Rat)>) -> Result<Self> {
        let mut all: Vec<(Vec<Rat>, Rat)> = self.facets.iter().map(|f| (f.normal_rat(), f.rhs.clone())).collect();
        all.extend(extra);
        Self::new(self.dim, all)
    }

    fn check_bounded(&self) -> Result<()> {
        for j in 0..self.dim {
            for sign in [1, -1] {
                let mut objective = vec![Rat::zero(); self.dim];
                objective[j] = rat::int(sign);
                let mut lp = LinearProgram::new(objective);
                for f in &self.facets {
                    lp.constrain(f.normal_rat(), Relation::Le, f.rhs.clone());
                }
                match lp.maximize() {
                    LpOutcome::Optimal { .. } => {}
                    LpOutcome::Infeasible => return Err(Error::EmptyPolytope),
                    LpOutcome::Unbounded => return Err(Error::UnboundedPolytope),
                }
            }
        }
        Ok(())
    }

    /// All vertices, lexicographically sorted.
    pub fn vertices(&self) -> Result<&[Point]> {
        self.vertices.get_or_init(|| self.compute_vertices()).as_ref().map(Vec::as_slice).map_err(Clone::clone)
    }

    fn compute_vertices(&self) -> Result<Vec<Point>> {
        self.check_bounded()?;
        let n = self.dim;
        let mut found: BTreeSet<Point> = BTreeSet::new();
        for subset in combinations(self.facets.len(), n) {
            let a: Matrix = subset.iter().map(|&i| self.facets[i].normal_rat()).collect();
            let b: Vec<Rat> = subset.iter().map(|&i| self.facets[i].rhs.clone()).collect();
            if let Some(x) = linalg::solve(&a, &b) {
                if self.contains(&x) {
                    found.insert(x);
                }
            }
        }
        if found.is_empty() {
            return Err(Error::EmptyPolytope);
        }
        Ok(found.into_iter().collect())
    }

    /// Indices of facets tight at `x`.
    pub fn tight_facets(&self, x: &[Rat]) -> Vec<usize> {
        (0..self.facets.len()).filter(|&i| self.facets[i].slack(x).is_zero()).collect()
    }

    /// Fan triangulation from the lexicographically first vertex, recursing
    /// over facets not containing it.
    pub fn triangulation(&self) -> Result<&Triangulation> {
        self.triangulation.get_or_init(|| self.compute_triangulation()).as_ref().map_err(Clone::clone)
    }

    fn compute_triangulation(&self) -> Result<Triangulation> {
        let verts = self.vertices()?;
        if affine_dimension(verts) < self.dim {
            return Err(Error::NotFullDimensional);
        }
        let tight: Vec<BTreeSet<usize>> =
            self.facets.iter().map(|f| (0..verts.len()).filter(|&v| f.slack(&verts[v]).is_zero()).collect()).collect();
        let all: Vec<usize> = (0..verts.len()).collect();
        let simplices = fan(verts, &tight, &all, self.dim)
            .into_iter()
            .map(|s| s.into_iter().map(|i| verts[i].clone()).collect())
            .collect();
        Ok(Triangulation { simplices })
    }

    pub fn volume(&self) -> Result<Rat> {
        Ok(self.triangulation()?.simplices.iter().fold(Rat::zero(), |acc, s| acc + simplex_volume(s)))
    }

    pub fn barycenter(&self) -> Result<Point> {
        let tri = self.triangulation()?;
        let mut acc = vec![Rat::zero(); self.dim];
        let mut total = Rat::zero();
        let denom = rat::int(self.dim as i64 + 1);
        for s in &tri.simplices {
            let v = simplex_volume(s);
            for (i, a) in acc.iter_mut().enumerate() {
                let centroid = s.iter().fold(Rat::zero(), |c, p| c + &p[i]) / &denom;
                *a += &v * centroid;
            }
            total += v;
        }
        Ok(acc.into_iter().map(|a| a / &total).collect())
    }

    /// Exact `∫_P q dx` for `deg q ≤ 2`.
    pub fn integrate_quadratic(&self, q: &Polynomial) -> Result<Rat> {
        if q.degree() > 2 {
            return Err(Error::DegreeTooHigh(q.degree()));
        }
        if q.dim != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: q.dim });
        }
        let tri = self.triangulation()?;
        Ok(tri.simplices.iter().fold(Rat::zero(), |acc, s| acc + integrate_on_simplex(s, q)))
    }

    /// `∫_P a·b dx` for affine `a`, `b`.
    pub fn integrate_affine_product(&self, a: &AffineFn, b: &AffineFn) -> Result<Rat> {
        self.integrate_quadratic(&a.to_polynomial().mul(&b.to_polynomial()))
    }

    pub fn integrate_affine(&self, a: &AffineFn) -> Result<Rat> {
        self.integrate_quadratic(&a.to_polynomial())
    }

    pub fn max_affine(&self, a: &AffineFn) -> Result<Rat> {
        Ok(self.vertices()?.iter().map(|v| a.eval(v)).max().expect("nonempty"))
    }

    pub fn min_affine(&self, a: &AffineFn) -> Result<Rat> {
        Ok(self.vertices()?.iter().map(|v| a.eval(v)).min().expect("nonempty"))
    }
}

/// Linearity regions of `min_j a_j` on `p`: `R_j = p ∩ {a_j ≤ a_i ∀ i}`,
/// with empty and lower-dimensional pieces dropped. Exact duplicates of an
/// earlier affine are skipped.
pub fn region_subdivision(p: &HPolytope, affines: &[AffineFn]) -> Result<Vec<(HPolytope, AffineFn)>> {
    for a in affines {
        a.check_dim(p.dim())?;
    }
    if affines.len() == 1 {
        return Ok(vec![(p.clone(), affines[0].clone())]);
    }
    let mut out = Vec::new();
    'outer: for (j, aj) in affines.iter().enumerate() {
        if affines[..j].contains(aj) {
            continue;
        }
        let mut extra = Vec::new();
        for (i, ai) in affines.iter().enumerate() {
            if i == j || ai == aj {
                continue;
            }
            // a_j(x) <= a_i(x)  <=>  ⟨g_j - g_i, x⟩ <= c_i - c_j
            let d = aj.sub(ai);
            if d.is_constant() {
                if d.constant.is_positive() {
                    continue 'outer;
                }
                continue;
            }
            extra.push((d.gradient, -d.constant));
        }
        let region = match p.intersect(extra) {
            Ok(r) => r,
            Err(Error::EmptyPolytope) => continue,
            Err(e) => return Err(e),
        };
        match region.volume() {
            Ok(v) if v.is_positive() => out.push((region, aj.clone())),
            Ok(_) | Err(Error::EmptyPolytope) | Err(Error::NotFullDimensional) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

pub fn simplex_volume(s: &[Point]) -> Rat {
    let n = s.len() - 1;
    let m: Matrix = s[1..].iter().map(|p| p.iter().zip(&s[0]).map(|(a, b)| a - b).collect()).collect();
    linalg::determinant(&m).abs() / rat::factorial(n)
}

/// Closed-form integral of a degree ≤ 2 polynomial over a simplex:
/// `∫ x_i x_j = V/((n+1)(n+2)) (Σ_k v_ki v_kj + S_i S_j)` with `S = Σ_k v_k`.
fn integrate_on_simplex(s: &[Point], q: &Polynomial) -> Rat {
    let n = s.len() - 1;
    let vol = simplex_volume(s);
    let sums: Vec<Rat> = (0..n).map(|i| s.iter().fold(Rat::zero(), |a, p| a + &p[i])).collect();
    let np1 = rat::int(n as i64 + 1);
    let quad_den = rat::int((n as i64 + 1) * (n as i64 + 2));
    let mut total = Rat::zero();
    for (exps, c) in &q.terms {
        let idx: Vec<usize> = exps.iter().enumerate().flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize)).collect();
        let mono = match idx.as_slice() {
            [] => vol.clone(),
            [i] => &vol * &sums[*i] / &np1,
            [i, j] => {
                let cross = s.iter().fold(Rat::zero(), |a, p| a + &p[*i] * &p[*j]);
                &vol * (cross + &sums[*i] * &sums[*j]) / &quad_den
            }
            _ => unreachable!("degree checked by caller"),
        };
        total += c * mono;
    }
    total
}

fn fan(verts: &[Point], tight: &[BTreeSet<usize>], face: &[usize], dim: usize) -> Vec<Vec<usize>> {
    if dim == 0 {
        return vec![vec![face[0]]];
    }
    let apex = face[0];
    let face_set: BTreeSet<usize> = face.iter().copied().collect();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut out = Vec::new();
    for t in tight {
        let sub: Vec<usize> = face_set.intersection(t).copied().collect();
        if sub.contains(&apex) || sub.len() < dim || !seen.insert(sub.clone()) {
            continue;
        }
        let pts: Vec<Point> = sub.iter().map(|&i| verts[i].clone()).collect();
        if affine_dimension(&pts) != dim - 1 {
            continue;
        }
        for mut s in fan(verts, tight, &sub, dim - 1) {
            s.insert(0, apex);
            out.push(s);
        }
    }
    out
}

pub fn affine_dimension(points: &[Point]) -> usize {
    let Some(base) = points.first() else {
        return 0;
    };
    let rows: Matrix = points[1..].iter().map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect()).collect();
    if rows.is_empty() {
        0
    } else {
        linalg::rank(&rows)
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            break;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
    out
}

pub fn point(coords: &[Rat]) -> Point {
    coords.to_vec()
}

pub fn int_point(coords: &[i64]) -> Point {
    coords.iter().map(|&c| rat::int(c)).collect()
}

pub fn is_integral(p: &[Rat]) -> bool {
    p.iter().all(|c| c.denom().is_one())
}
