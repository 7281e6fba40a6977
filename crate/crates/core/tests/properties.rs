mod common;

use num_traits::{One, Zero};
use proptest::prelude::*;
use toric_ding::poly::Polynomial;
use toric_ding::rat::{self, int, rat, Rat};
use toric_ding::{
    d_na, d_z_na, dh_measure, e_na, extremal_affine, inner_product, j_na, jna_twisted, reduce_jna, twist,
    weight_measure, AffineFn, FanoPolytope, PlConcave, TwistProblem,
};

use common::small_corpus;

fn rat_s(bound: i64) -> impl Strategy<Value = Rat> {
    (-bound..=bound, 1i64..=6).prop_map(|(p, q)| rat(p, q))
}

fn vec_s(n: usize, bound: i64) -> impl Strategy<Value = Vec<Rat>> {
    proptest::collection::vec(rat_s(bound), n)
}

fn polytope_s() -> impl Strategy<Value = FanoPolytope> {
    (0..small_corpus().len()).prop_map(|i| small_corpus().swap_remove(i).1)
}

fn affine_s(n: usize) -> impl Strategy<Value = AffineFn> {
    (vec_s(n, 6), rat_s(4)).prop_map(|(g, c)| AffineFn::new(g, c))
}

/// A polytope with a random concave function and a random direction.
fn instance_s() -> impl Strategy<Value = (PlConcave, Vec<Rat>, Vec<Rat>)> {
    polytope_s().prop_flat_map(|p| {
        let n = p.dim();
        (proptest::collection::vec(affine_s(n), 1..=3), vec_s(n, 8), vec_s(n, 8))
            .prop_map(move |(a, r1, r2)| (PlConcave::new(&p, a).expect("valid configuration"), r1, r2))
    })
}

fn quadratic_s(n: usize) -> impl Strategy<Value = Polynomial> {
    proptest::collection::vec(rat_s(5), n * n + n + 1).prop_map(move |c| {
        let mut q = Polynomial::constant(n, c[0].clone());
        for i in 0..n {
            q = q.add(
                &AffineFn::new(
                    (0..n).map(|j| if i == j { c[1 + i].clone() } else { Rat::zero() }).collect(),
                    Rat::zero(),
                )
                .to_polynomial(),
            );
            for j in 0..n {
                q = q.add(&Polynomial::quadratic_monomial(n, i, j, c[1 + n + i * n + j].clone()));
            }
        }
        q
    })
}

/// Projected subgradient descent on `ρ ↦ J^NA(f + ⟨ρ, ·⟩)` over a box, with
/// geometrically decaying normalized steps; returns the best value seen.
fn subgradient_minimum(problem: &TwistProblem, n: usize) -> f64 {
    let bound = 64.0;
    let mut rho = vec![0.0; n];
    let (mut best, _) = problem.j_at_f64(&rho);
    let mut step = 1.0;
    for _ in 0..40_000 {
        let (value, grad) = problem.j_at_f64(&rho);
        best = best.min(value);
        let norm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        if norm == 0.0 {
            break;
        }
        for (r, g) in rho.iter_mut().zip(&grad) {
            *r = (*r - step * g / norm).clamp(-bound, bound);
        }
        step *= 0.9995;
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, ..ProptestConfig::default() })]

    #[test]
    fn quadratic_integration_is_linear(
        (p, q1, q2) in polytope_s().prop_flat_map(|p| { let n = p.dim(); (Just(p), quadratic_s(n), quadratic_s(n)) }),
        s in rat_s(7),
    ) {
        let base = p.base();
        let lhs = base.integrate_quadratic(&q1.scale(&s).add(&q2)).unwrap();
        let rhs = base.integrate_quadratic(&q1).unwrap() * &s + base.integrate_quadratic(&q2).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn inner_product_is_linear((f, r1, r2) in instance_s(), s in rat_s(5)) {
        let combo: Vec<Rat> = r1.iter().zip(&r2).map(|(a, b)| a * &s + b).collect();
        let lhs = inner_product(&f, &combo).unwrap();
        let rhs = inner_product(&f, &r1).unwrap() * &s + inner_product(&f, &r2).unwrap();
        prop_assert_eq!(lhs, rhs);
        // linear in f along affine shifts
        let shift = AffineFn::new(r2.clone(), s.clone());
        let g = f.add_affine(&shift);
        let affine = PlConcave::affine(f.domain(), shift).unwrap();
        prop_assert_eq!(
            inner_product(&g, &r1).unwrap(),
            inner_product(&f, &r1).unwrap() + inner_product(&affine, &r1).unwrap()
        );
    }

    #[test]
    fn translation_covariance((f, rho, _) in instance_s(), kappa in rat_s(9)) {
        let g = f.add_constant(&kappa);
        prop_assert_eq!(e_na(&g), e_na(&f) + &kappa);
        prop_assert_eq!(d_na(&g), d_na(&f));
        prop_assert_eq!(j_na(&g), j_na(&f));
        prop_assert_eq!(inner_product(&g, &rho).unwrap(), inner_product(&f, &rho).unwrap());
    }

    #[test]
    fn d_z_vanishes_on_affine(p in polytope_s(), seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let a = AffineFn::new(common::random_vec(&mut r, p.dim(), 20), common::random_rat(&mut r, 20));
        let ext = extremal_affine(&p).unwrap();
        prop_assert!(d_z_na(&PlConcave::affine(&p, a).unwrap(), &ext).is_zero());
    }

    #[test]
    fn dh_measure_conserves_mass_mean_and_support((f, _, _) in instance_s()) {
        let m = dh_measure(&f).unwrap();
        prop_assert!(m.total_mass().is_one());
        prop_assert_eq!(m.mean(), e_na(&f));
        prop_assert_eq!(m.support_max(), Some(f.max()));
        prop_assert!(m.is_nonnegative());
    }

    #[test]
    fn j_is_nonnegative_and_zero_only_for_constants((f, _, _) in instance_s()) {
        let j = j_na(&f);
        prop_assert!(j >= Rat::zero());
        let constant = f.is_affine() && f.affines()[0].is_constant();
        prop_assert_eq!(j.is_zero(), constant);
    }

    #[test]
    fn twisted_j_is_midpoint_convex((f, r1, r2) in instance_s()) {
        let mid: Vec<Rat> = r1.iter().zip(&r2).map(|(a, b)| (a + b) / int(2)).collect();
        let lhs = jna_twisted(&f, &mid).unwrap() * int(2);
        prop_assert!(lhs <= jna_twisted(&f, &r1).unwrap() + jna_twisted(&f, &r2).unwrap());
    }

    #[test]
    fn twisted_j_agrees_with_twisting((f, rho, _) in instance_s()) {
        prop_assert_eq!(jna_twisted(&f, &rho).unwrap(), j_na(&twist(&f, &rho).unwrap()));
        let m = dh_measure(&twist(&f, &rho).unwrap()).unwrap();
        prop_assert_eq!(m.mean(), e_na(&f) + rat::dot(&rho, f.domain().barycenter()));
    }

    #[test]
    fn reduction_is_twist_invariant((f, rho, _) in instance_s()) {
        let base = reduce_jna(&f).unwrap();
        let twisted = reduce_jna(&twist(&f, &rho).unwrap()).unwrap();
        prop_assert_eq!(&twisted.j_t, &base.j_t);
        prop_assert_eq!(base.j_t.is_zero(), f.is_affine());
        prop_assert!(base.j_t <= j_na(&f));
        prop_assert_eq!(jna_twisted(&f, &base.rho_star).unwrap(), base.j_t);
    }

    #[test]
    fn weight_measures_have_unit_mass((f, _, _) in instance_s(), k in 1u32..=6) {
        let m = weight_measure(&f, k).unwrap();
        prop_assert!(m.total_mass().is_one());
        prop_assert!(m.support_max() <= f.max());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn lp_matches_float_subgradient_descent((f, _, _) in instance_s()) {
        let problem = TwistProblem::new(&f);
        let exact = rat::to_f64(&problem.reduce().unwrap().j_t);
        let float = subgradient_minimum(&problem, f.dim());
        prop_assert!((float - exact).abs() <= 1e-6, "LP {} vs descent {}", exact, float);
    }
}
