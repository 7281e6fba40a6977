//! Helpers shared by the integration tests: random rational data and
//! oracles that avoid the library's own integration code paths.
#![allow(dead_code)]

use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use toric_ding::rat::{self, rat, Rat};
use toric_ding::{corpus, validate_fano, AffineFn, FanoPolytope, PlConcave};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small random rational `p/q` with `|p| ≤ num_bound`, `1 ≤ q ≤ 6`.
pub fn random_rat(r: &mut impl Rng, num_bound: i64) -> Rat {
    rat(r.gen_range(-num_bound..=num_bound), r.gen_range(1..=6))
}

pub fn random_vec(r: &mut impl Rng, n: usize, num_bound: i64) -> Vec<Rat> {
    (0..n).map(|_| random_rat(r, num_bound)).collect()
}

pub fn fano(name: &str) -> FanoPolytope {
    validate_fano(&corpus::by_name(name).expect("corpus name")).expect("corpus polytope is Fano")
}

/// Low-dimensional corpus members, cheap enough for randomized suites.
pub fn small_corpus() -> Vec<(&'static str, FanoPolytope)> {
    ["P1", "P2", "P1xP1", "Bl1P2", "P123"].into_iter().map(|n| (n, fano(n))).collect()
}

/// `min` of 2 to 4 random affines on a random low-dimensional corpus member.
pub fn random_pl(r: &mut impl Rng) -> PlConcave {
    let corpus = small_corpus();
    let (_, p) = &corpus[r.gen_range(0..corpus.len())];
    random_pl_on(r, p)
}

pub fn random_pl_on(r: &mut impl Rng, p: &FanoPolytope) -> PlConcave {
    let count = r.gen_range(2..=4);
    let affines = (0..count).map(|_| AffineFn::new(random_vec(r, p.dim(), 6), random_rat(r, 4))).collect();
    PlConcave::new(p, affines).expect("random configuration")
}

/// Area and first/second moments of a convex polygon by Green's theorem.
/// Returns `(A, [∫x, ∫y], [[∫x², ∫xy], [∫xy, ∫y²]])`.
pub fn polygon_moments(vertices: &[Vec<Rat>]) -> (Rat, [Rat; 2], [[Rat; 2]; 2]) {
    let ordered = ccw_order(vertices);
    let m = ordered.len();
    let (mut a, mut mx, mut my) = (Rat::zero(), Rat::zero(), Rat::zero());
    let (mut mxx, mut myy, mut mxy) = (Rat::zero(), Rat::zero(), Rat::zero());
    let two = rat::int(2);
    for i in 0..m {
        let (x0, y0) = (&ordered[i][0], &ordered[i][1]);
        let (x1, y1) = (&ordered[(i + 1) % m][0], &ordered[(i + 1) % m][1]);
        let cross = x0 * y1 - x1 * y0;
        a += &cross;
        mx += (x0 + x1) * &cross;
        my += (y0 + y1) * &cross;
        mxx += (x0 * x0 + x0 * x1 + x1 * x1) * &cross;
        myy += (y0 * y0 + y0 * y1 + y1 * y1) * &cross;
        mxy += (x0 * y1 + x0 * y0 * &two + x1 * y1 * &two + x1 * y0) * &cross;
    }
    let ixy = mxy / rat::int(24);
    (a / two, [mx / rat::int(6), my / rat::int(6)], [[mxx / rat::int(12), ixy.clone()], [ixy, myy / rat::int(12)]])
}

fn ccw_order(vertices: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let m = Rat::from_integer(vertices.len().into());
    let cx = vertices.iter().map(|v| v[0].clone()).fold(Rat::zero(), |a, b| a + b) / &m;
    let cy = vertices.iter().map(|v| v[1].clone()).fold(Rat::zero(), |a, b| a + b) / &m;
    let mut out = vertices.to_vec();
    out.sort_by(|p, q| {
        let ang = |v: &Vec<Rat>| (rat::to_f64(&(&v[1] - &cy))).atan2(rat::to_f64(&(&v[0] - &cx)));
        ang(p).partial_cmp(&ang(q)).expect("finite angles")
    });
    out
}

/// Coefficients of the polynomial through `points`, by Newton divided
/// differences expanded to the monomial basis.
pub fn interpolate(points: &[(Rat, Rat)]) -> Vec<Rat> {
    let m = points.len();
    let mut dd: Vec<Rat> = points.iter().map(|(_, y)| y.clone()).collect();
    for level in 1..m {
        for i in (level..m).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&points[i].0 - &points[i - level].0);
        }
    }
    // Horner in Newton form: p = dd[m-1]; p = p·(x − x_i) + dd[i]
    let mut coeffs = vec![dd[m - 1].clone()];
    for i in (0..m - 1).rev() {
        let mut next = vec![Rat::zero(); coeffs.len() + 1];
        for (j, c) in coeffs.iter().enumerate() {
            next[j + 1] += c;
            next[j] -= c * &points[i].0;
        }
        next[0] += &dd[i];
        coeffs = next;
    }
    coeffs
}

pub fn binomial(n: usize, k: usize) -> Rat {
    (0..k).fold(Rat::one(), |acc, i| acc * rat::int((n - i) as i64) / rat::int(i as i64 + 1))
}
