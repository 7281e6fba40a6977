//! Deformation to the normal cone of a torus-fixed point, seen on the moment
//! polytope: the concave function `min{ord − c, 0}` where `ord` is the
//! order of vanishing at the chosen vertex, and the exact identities that
//! family satisfies.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::extremal::{extremal_affine, ExtremalData, FanoPolytope};
use crate::functionals::{d_na, d_z_na, dh_measure, e_na, extremal_pairing, j_na, PlConcave};
use crate::linalg::{self, Matrix};
use crate::measure::{Atom, DensityPiece, DhMeasure};
use crate::poly::{AffineFn, UniPoly};
use crate::polytope::Point;
use crate::rat::{self, Rat};
use crate::twist::reduce_jna;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexChart {
    pub vertex: Point,
    /// `y = U (x − vertex)` sends the primitive edge directions at the vertex
    /// to the standard basis.
    pub unimodular: Vec<Vec<BigInt>>,
    /// Sum of chart coordinates.
    pub ord: AffineFn,
}

impl VertexChart {
    pub fn chart_coordinates(&self, x: &[Rat]) -> Vec<Rat> {
        let d: Vec<Rat> = x.iter().zip(&self.vertex).map(|(a, b)| a - b).collect();
        self.unimodular
            .iter()
            .map(|row| row.iter().zip(&d).fold(Rat::zero(), |acc, (u, di)| acc + Rat::from_integer(u.clone()) * di))
            .collect()
    }

    /// Primitive edge directions at the vertex (columns of `U⁻¹`).
    pub fn edge_directions(&self) -> Vec<Vec<Rat>> {
        let n = self.vertex.len();
        let u: Matrix =
            self.unimodular.iter().map(|r| r.iter().map(|v| Rat::from_integer(v.clone())).collect()).collect();
        (0..n)
            .map(|j| {
                let mut e = vec![Rat::zero(); n];
                e[j] = rat::one();
                linalg::solve(&u, &e).expect("unimodular")
            })
            .collect()
    }
}

/// Lexicographically first vertex maximizing `θ`.
pub fn select_vertex(p: &FanoPolytope, extremal: &ExtremalData) -> Point {
    let verts = p.vertices();
    let best = verts.iter().map(|v| extremal.theta.eval(v)).max().expect("vertices");
    verts.iter().find(|v| extremal.theta.eval(v) == best).cloned().expect("maximizer exists")
}

pub fn vertex_chart(p: &FanoPolytope, v: &[Rat]) -> Result<VertexChart> {
    let n = p.dim();
    p.check_vector(v)?;
    let tight = p.base().tight_facets(v);
    let facets = p.base().facets();
    if tight.len() != n {
        let det = if tight.len() > n { "n/a (not simple)".to_string() } else { "0".to_string() };
        return Err(Error::NonSmoothVertex { determinant: det, tight: tight.len() });
    }
    let normals: Matrix = tight.iter().map(|&i| facets[i].normal_rat()).collect();
    let det = linalg::determinant(&normals);
    if rat::abs(&det) != rat::one() {
        return Err(Error::NonSmoothVertex { determinant: rat::format_rat(&det), tight: n });
    }
    // y_i = rhs_i − ⟨ℓ_i, x⟩ = ⟨−ℓ_i, x − v⟩
    let unimodular: Vec<Vec<BigInt>> =
        tight.iter().map(|&i| facets[i].normal.iter().map(|a| -a.clone()).collect()).collect();
    let mut grad = vec![Rat::zero(); n];
    for &i in &tight {
        for (g, a) in grad.iter_mut().zip(&facets[i].normal) {
            *g -= Rat::from_integer(a.clone());
        }
    }
    let constant = -rat::dot(&grad, v);
    Ok(VertexChart { vertex: v.to_vec(), unimodular, ord: AffineFn::new(grad, constant) })
}

#[derive(Debug, Clone)]
pub struct NormalConeFamily {
    pub polytope: FanoPolytope,
    pub extremal: ExtremalData,
    pub chart: VertexChart,
    /// Largest `c` for which `{ord ≤ c} ∩ P` is the full corner simplex:
    /// the minimum of `ord` over the other vertices.
    pub c_max: Rat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexChoice {
    Auto,
    Index(usize),
}

impl NormalConeFamily {
    pub fn new(p: &FanoPolytope, choice: VertexChoice) -> Result<Self> {
        let extremal = extremal_affine(p)?;
        let vertex = match choice {
            VertexChoice::Auto => select_vertex(p, &extremal),
            VertexChoice::Index(i) => {
                p.vertices().get(i).cloned().ok_or_else(|| Error::Parse(format!("vertex index {i} out of range")))?
            }
        };
        let chart = vertex_chart(p, &vertex)?;
        let c_max = p
            .vertices()
            .iter()
            .filter(|w| **w != vertex)
            .map(|w| chart.ord.eval(w))
            .min()
            .expect("a full-dimensional polytope has at least two vertices");
        Ok(Self { polytope: p.clone(), extremal, chart, c_max })
    }

    pub fn dim(&self) -> usize {
        self.polytope.dim()
    }

    /// `ord(0)`; the log-canonical term is `f(0) = 0` only for `c ≤ ord(0)`.
    pub fn origin_order(&self) -> Rat {
        self.chart.ord.eval(&vec![Rat::zero(); self.dim()])
    }

    /// `ord(b)`; past it the barycenter is cut off and twisting helps.
    pub fn barycenter_order(&self) -> Rat {
        self.chart.ord.eval(self.polytope.barycenter())
    }

    /// Upper end of the range where every closed form holds as a polynomial in `c`.
    pub fn c_limit(&self) -> Rat {
        std::cmp::min(self.c_max.clone(), self.origin_order())
    }

    /// Default grid cap: `min(c_max, 1) / 2`.
    pub fn default_cap(&self) -> Rat {
        std::cmp::min(self.c_max.clone(), rat::one()) / rat::int(2)
    }

    /// `min{ord − c, 0}`.
    pub fn g_c(&self, c: &Rat) -> Result<PlConcave> {
        if !c.is_positive() || *c >= self.c_max {
            return Err(Error::COutOfRange { c: rat::format_rat(c), limit: rat::format_rat(&self.c_max) });
        }
        PlConcave::new(
            &self.polytope,
            vec![self.chart.ord.add_constant(&-c.clone()), AffineFn::constant(self.dim(), Rat::zero())],
        )
    }
}

/// `(n/Lⁿ)(λ + c)^{n−1} 1_{[−c,0]} dλ + (1 − cⁿ/Lⁿ) δ₀`.
pub fn dh_closed_form(n: usize, degree: &Rat, c: &Rat) -> Result<DhMeasure> {
    let cn = rat::pow(c, n);
    if !c.is_positive() || cn >= *degree {
        return Err(Error::COutOfRange { c: rat::format_rat(c), limit: format!("({degree})^(1/{n})") });
    }
    let density = UniPoly::shifted_power(c, n - 1).scale(&(rat::int(n as i64) / degree));
    Ok(DhMeasure::from_parts(
        vec![Atom { location: Rat::zero(), mass: rat::one() - &cn / degree }],
        vec![DensityPiece { lo: -c.clone(), hi: Rat::zero(), density }],
    ))
}

/// `c^{n+1} / ((n+1) Lⁿ)`.
pub fn j_closed_form(n: usize, degree: &Rat, c: &Rat) -> Rat {
    rat::pow(c, n + 1) / (rat::int(n as i64 + 1) * degree)
}

#[derive(Debug, Clone, Serialize)]
pub struct GridRow {
    #[serde(with = "rat::serde_rat")]
    pub c: Rat,
    #[serde(with = "rat::serde_rat")]
    pub j_na: Rat,
    #[serde(with = "rat::serde_rat")]
    pub j_t_na: Rat,
    #[serde(with = "rat::serde_rat_vec")]
    pub rho_star: Vec<Rat>,
    #[serde(with = "rat::serde_rat")]
    pub d_na: Rat,
    #[serde(with = "rat::serde_rat")]
    pub e_na: Rat,
    #[serde(with = "rat::serde_rat")]
    pub extremal_pairing: Rat,
    #[serde(with = "rat::serde_rat")]
    pub d_z_na: Rat,
    #[serde(with = "rat::serde_rat")]
    pub closed_form_j: Rat,
    pub dh_matches_closed_form: bool,
    #[serde(skip)]
    pub dh: DhMeasure,
}

#[derive(Debug, Clone, Serialize)]
pub struct Mismatch {
    pub identity: String,
    #[serde(with = "rat::serde_rat")]
    pub c: Rat,
    pub computed: String,
    pub expected: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyReport {
    pub dim: usize,
    #[serde(with = "rat::serde_rat_vec")]
    pub vertex: Vec<Rat>,
    pub ord: AffineFn,
    #[serde(with = "rat::serde_rat")]
    pub degree: Rat,
    #[serde(with = "rat::serde_rat")]
    pub vartheta: Rat,
    #[serde(with = "rat::serde_rat")]
    pub c_max: Rat,
    #[serde(with = "rat::serde_rat")]
    pub c_limit: Rat,
    #[serde(with = "rat::serde_rat")]
    pub barycenter_order: Rat,
    pub rows: Vec<GridRow>,
    /// Coefficients of the interpolated polynomial `c ↦ D_Z^NA(g_c)`.
    #[serde(with = "rat::serde_rat_vec")]
    pub d_z_polynomial: Vec<Rat>,
    #[serde(with = "rat::serde_rat_vec")]
    pub interpolation_nodes: Vec<Rat>,
    #[serde(with = "rat::serde_rat")]
    pub leading_coefficient: Rat,
    #[serde(with = "rat::serde_rat")]
    pub expected_leading_coefficient: Rat,
    pub mismatches: Vec<Mismatch>,
}

impl FamilyReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Exact `D_Z^NA(g_c)` as a polynomial in `c`, from `n + 3` interpolation
/// nodes in `(0, c_limit)`, plus the nodes and a held-out check value.
pub fn d_z_polynomial(family: &NormalConeFamily) -> Result<(UniPoly, Vec<Rat>, (Rat, Rat))> {
    let n = family.dim();
    let limit = family.c_limit();
    let steps = rat::int(n as i64 + 4);
    let nodes: Vec<Rat> = (1..=n as i64 + 3).map(|j| &limit * rat::int(j) / &steps).collect();
    let values: Vec<(Rat, Rat)> =
        nodes.par_iter().map(|c| Ok((c.clone(), d_z_na(&family.g_c(c)?, &family.extremal)))).collect::<Result<_>>()?;
    let poly = UniPoly::interpolate(&values);
    let held_out = &limit * rat::rat(2 * n as i64 + 7, 2 * n as i64 + 8);
    let held_value = d_z_na(&family.g_c(&held_out)?, &family.extremal);
    Ok((poly, nodes, (held_out, held_value)))
}

pub fn evaluate_row(family: &NormalConeFamily, c: &Rat) -> Result<GridRow> {
    let n = family.dim();
    let degree = family.polytope.degree();
    let g = family.g_c(c)?;
    let dh = dh_measure(&g)?;
    let closed = dh_closed_form(n, &degree, c)?;
    let reduction = reduce_jna(&g)?;
    Ok(GridRow {
        c: c.clone(),
        j_na: j_na(&g),
        j_t_na: reduction.j_t,
        rho_star: reduction.rho_star,
        d_na: d_na(&g),
        e_na: e_na(&g),
        extremal_pairing: extremal_pairing(&g, &family.extremal),
        d_z_na: d_z_na(&g, &family.extremal),
        closed_form_j: j_closed_form(n, &degree, c),
        dh_matches_closed_form: dh == closed,
        dh,
    })
}

pub fn verify_family(family: &NormalConeFamily, grid: &[Rat]) -> Result<FamilyReport> {
    let n = family.dim();
    let degree = family.polytope.degree();
    let limit = family.c_limit();
    for c in grid {
        if !c.is_positive() || *c > limit || *c >= family.c_max {
            return Err(Error::COutOfRange { c: rat::format_rat(c), limit: rat::format_rat(&limit) });
        }
    }
    let rows: Vec<GridRow> = grid.par_iter().map(|c| evaluate_row(family, c)).collect::<Result<_>>()?;
    let mut mismatches = Vec::new();
    let mut push = |identity: &str, c: &Rat, computed: String, expected: String| {
        mismatches.push(Mismatch { identity: identity.into(), c: c.clone(), computed, expected });
    };
    for row in &rows {
        let c = &row.c;
        if !row.dh_matches_closed_form {
            let expected = dh_closed_form(n, &degree, c)?;
            push(
                "dh_measure",
                c,
                serde_json::to_string(&row.dh).expect("json"),
                serde_json::to_string(&expected).expect("json"),
            );
        }
        if row.j_na != row.closed_form_j {
            push("j_na", c, row.j_na.to_string(), row.closed_form_j.to_string());
        }
        if row.d_na != row.closed_form_j {
            push("d_na", c, row.d_na.to_string(), row.closed_form_j.to_string());
        }
        if row.rho_star.iter().any(|r| !r.is_zero()) || row.j_t_na != row.j_na {
            push(
                "reduced_j_at_zero",
                c,
                format!("rho*={:?} J_T={}", row.rho_star.iter().map(rat::format_rat).collect::<Vec<_>>(), row.j_t_na),
                format!("rho*=0 J_T={}", row.j_na),
            );
        }
    }
    let (poly, nodes, (held_c, held_value)) = d_z_polynomial(family)?;
    if poly.eval(&held_c) != held_value {
        push("d_z_polynomial_holdout", &held_c, poly.eval(&held_c).to_string(), held_value.to_string());
    }
    for row in &rows {
        if poly.eval(&row.c) != row.d_z_na {
            push("d_z_polynomial_grid", &row.c, poly.eval(&row.c).to_string(), row.d_z_na.to_string());
        }
    }
    let leading = poly.coeff(n + 1);
    let expected_leading = (rat::one() - &family.extremal.vartheta) / (rat::int(n as i64 + 1) * &degree);
    if leading != expected_leading {
        push("d_z_leading_coefficient", &Rat::zero(), leading.to_string(), expected_leading.to_string());
    }
    for i in 0..=n {
        if !poly.coeff(i).is_zero() {
            push(&format!("d_z_low_order_coefficient_{i}"), &Rat::zero(), poly.coeff(i).to_string(), "0".into());
        }
    }
    Ok(FamilyReport {
        dim: n,
        vertex: family.chart.vertex.clone(),
        ord: family.chart.ord.clone(),
        degree,
        vartheta: family.extremal.vartheta.clone(),
        c_max: family.c_max.clone(),
        c_limit: limit,
        barycenter_order: family.barycenter_order(),
        rows,
        d_z_polynomial: poly.coeffs.clone(),
        interpolation_nodes: nodes,
        leading_coefficient: leading,
        expected_leading_coefficient: expected_leading,
        mismatches,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    #[serde(with = "rat::serde_rat")]
    pub c: Rat,
    #[serde(with = "rat::serde_rat")]
    pub d_z_na: Rat,
    #[serde(with = "rat::serde_rat")]
    pub j_t_na: Rat,
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct StabilityReport {
    #[serde(with = "rat::serde_rat")]
    pub vartheta: Rat,
    pub vartheta_float: f64,
    pub below_one: bool,
    pub equals_one: bool,
    pub above_one: bool,
    pub verdict: String,
    pub statements: Vec<String>,
    /// Present when `ϑ ≥ 1` and the maximizing vertex is smooth.
    pub witness: Option<Witness>,
    pub chart_error: Option<String>,
}

/// Grid `cap / 2^i`, `i = 0..steps`, ascending.
pub fn halving_grid(cap: &Rat, steps: u32) -> Vec<Rat> {
    let mut g: Vec<Rat> = (0..steps).map(|i| cap / rat::int(1i64 << i)).collect();
    g.reverse();
    g
}

pub fn verdict(p: &FanoPolytope) -> Result<StabilityReport> {
    let extremal = extremal_affine(p)?;
    let vt = extremal.vartheta.clone();
    let one = rat::one();
    let (below, equal, above) = (vt < one, vt == one, vt > one);
    let verdict = if vt.is_zero() {
        "obstruction vanishes"
    } else if below {
        "necessary condition satisfied"
    } else if equal {
        "not uniformly relatively D-stable"
    } else {
        "destabilized"
    };
    let mut statements = Vec::new();
    if above {
        statements.push("vartheta > 1: not D-semistable relative to the torus".to_string());
    }
    if !below {
        statements.push("vartheta >= 1: not uniformly D-stable relative to the torus".to_string());
    }
    if below {
        statements.push("vartheta < 1: the normal-cone obstruction is absent".to_string());
    }
    let mut witness = None;
    let mut chart_error = None;
    if !below {
        match NormalConeFamily::new(p, VertexChoice::Auto) {
            Ok(family) => {
                let cap = std::cmp::min(family.default_cap(), family.c_limit());
                let grid = halving_grid(&cap, 12);
                let rows: Vec<(Rat, Rat, Rat)> = grid
                    .par_iter()
                    .map(|c| {
                        let g = family.g_c(c)?;
                        Ok((c.clone(), d_z_na(&g, &family.extremal), reduce_jna(&g)?.j_t))
                    })
                    .collect::<Result<_>>()?;
                let pick = if above { rows.iter().find(|(_, d, _)| d.is_negative()) } else { rows.first() };
                witness = pick.map(|(c, d, j)| Witness {
                    c: c.clone(),
                    d_z_na: d.clone(),
                    j_t_na: j.clone(),
                    ratio: if j.is_zero() { f64::NAN } else { rat::to_f64(&(d / j)) },
                });
            }
            Err(e) => chart_error = Some(e.to_string()),
        }
    }
    Ok(StabilityReport {
        vartheta_float: rat::to_f64(&vt),
        vartheta: vt,
        below_one: below,
        equals_one: equal,
        above_one: above,
        verdict: verdict.into(),
        statements,
        witness,
        chart_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::extremal::validate_fano;
    use crate::polytope::HPolytope;
    use crate::rat::{int, rat};

    fn fano(p: HPolytope) -> FanoPolytope {
        validate_fano(&p).unwrap()
    }

    #[test]
    fn vertex_selection() {
        let p2 = fano(corpus::p2());
        let e = extremal_affine(&p2).unwrap();
        assert_eq!(select_vertex(&p2, &e), vec![int(-1), int(-1)]);
        let p1 = fano(corpus::p1());
        let e = extremal_affine(&p1).unwrap();
        assert_eq!(select_vertex(&p1, &e), vec![int(-1)]);
        let bl = fano(corpus::bl1p2());
        let e = extremal_affine(&bl).unwrap();
        let v = select_vertex(&bl, &e);
        assert!(bl.vertices().iter().all(|w| e.theta.eval(w) <= e.theta.eval(&v)));
    }

    #[test]
    fn charts() {
        let p1 = fano(corpus::p1());
        let ch = vertex_chart(&p1, &[int(1)]).unwrap();
        assert_eq!(ch.ord, AffineFn::new(vec![int(-1)], int(1)));
        let p2 = fano(corpus::p2());
        let ch = vertex_chart(&p2, &[int(-1), int(-1)]).unwrap();
        assert_eq!(ch.ord, AffineFn::new(vec![int(1), int(1)], int(2)));
        let dirs = ch.edge_directions();
        for (j, d) in dirs.iter().enumerate() {
            let y = ch.chart_coordinates(&d.iter().zip(&ch.vertex).map(|(a, b)| a + b).collect::<Vec<_>>());
            for (i, yi) in y.iter().enumerate() {
                assert_eq!(*yi, if i == j { int(1) } else { int(0) });
            }
        }
    }

    #[test]
    fn non_smooth_vertex_reports_determinant() {
        let p =
            HPolytope::from_integer_facets(2, &[(&[1, 2], int(1)), (&[1, -2], int(1)), (&[-1, 0], int(1))]).unwrap();
        let p = fano(p);
        let err = vertex_chart(&p, &[int(1), int(0)]).unwrap_err();
        assert_eq!(err, Error::NonSmoothVertex { determinant: "-4".into(), tight: 2 });
    }

    #[test]
    fn ord_is_integral_and_nonnegative_on_lattice_points() {
        let bl = fano(corpus::bl1p2());
        let fam = NormalConeFamily::new(&bl, VertexChoice::Auto).unwrap();
        for u in crate::oracle::lattice_points(&bl, 1).unwrap() {
            let q: Vec<Rat> = u.iter().map(|&x| int(x)).collect();
            let o = fam.chart.ord.eval(&q);
            assert!(!o.is_negative() && o.is_integer());
        }
        assert_eq!(fam.chart.ord.eval(&fam.chart.vertex), int(0));
    }

    #[test]
    fn g_c_examples_and_range() {
        let p1 = fano(corpus::p1());
        let fam = NormalConeFamily::new(&p1, VertexChoice::Index(1)).unwrap();
        assert_eq!(fam.c_max, int(2));
        let g = fam.g_c(&rat(1, 2)).unwrap();
        assert_eq!(g.eval(&[int(1)]), rat(-1, 2));
        assert_eq!(g.eval(&[int(0)]), int(0));
        assert!(matches!(fam.g_c(&int(2)), Err(Error::COutOfRange { .. })));
        assert!(matches!(fam.g_c(&int(0)), Err(Error::COutOfRange { .. })));
        let p2 = fano(corpus::p2());
        let fam = NormalConeFamily::new(&p2, VertexChoice::Auto).unwrap();
        let g = fam.g_c(&rat(1, 2)).unwrap();
        assert_eq!(g.eval(&[int(-1), int(-1)]), rat(-1, 2));
        assert_eq!(g.eval(&[rat(-1, 2), int(-1)]), int(0));
    }

    #[test]
    fn closed_form_examples() {
        let m = dh_closed_form(1, &int(2), &rat(1, 2)).unwrap();
        assert_eq!(m.atoms, vec![Atom { location: int(0), mass: rat(3, 4) }]);
        assert_eq!(m.pieces[0].density, UniPoly::constant(rat(1, 2)));
        let m = dh_closed_form(2, &int(9), &int(1)).unwrap();
        assert_eq!(m.atoms[0].mass, rat(8, 9));
        assert_eq!(m.pieces[0].density, UniPoly::new(vec![rat(2, 9), rat(2, 9)]));
        assert_eq!(m.total_mass(), int(1));
        assert!(dh_closed_form(2, &int(9), &int(3)).is_err());
    }

    #[test]
    fn c_max_is_tight() {
        let bl = fano(corpus::bl1p2());
        let fam = NormalConeFamily::new(&bl, VertexChoice::Auto).unwrap();
        let n = fam.dim();
        let past = &fam.c_max + rat(1, 10);
        let region =
            bl.base().intersect(vec![(fam.chart.ord.gradient.clone(), &past - &fam.chart.ord.constant)]).unwrap();
        assert!(region.volume().unwrap() < rat::pow(&past, n) / rat::factorial(n));
        let inside = &fam.c_max - rat(1, 10);
        let region =
            bl.base().intersect(vec![(fam.chart.ord.gradient.clone(), &inside - &fam.chart.ord.constant)]).unwrap();
        assert_eq!(region.volume().unwrap(), rat::pow(&inside, n) / rat::factorial(n));
    }

    #[test]
    fn p1_family_verifies() {
        let p1 = fano(corpus::p1());
        let fam = NormalConeFamily::new(&p1, VertexChoice::Auto).unwrap();
        let r = verify_family(&fam, &[rat(1, 4), rat(1, 2)]).unwrap();
        assert!(r.passed(), "{:?}", r.mismatches);
        for row in &r.rows {
            assert_eq!(row.d_z_na, &row.c * &row.c / int(4));
        }
    }

    #[test]
    fn verdicts_for_corpus() {
        let r = verdict(&fano(corpus::p2())).unwrap();
        assert_eq!(r.verdict, "obstruction vanishes");
        let r = verdict(&fano(corpus::bl1p2())).unwrap();
        assert_eq!(r.verdict, "necessary condition satisfied");
        assert!(r.witness.is_none());
    }
}
