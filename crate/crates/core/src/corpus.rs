//! Standard toric Fano polytopes in canonical presentation `{⟨ℓ_i, x⟩ ≤ 1}`.

use crate::polytope::HPolytope;
use crate::rat;

fn canonical(dim: usize, normals: &[&[i64]]) -> HPolytope {
    let facets: Vec<(&[i64], rat::Rat)> = normals.iter().map(|n| (*n, rat::int(1))).collect();
    HPolytope::from_integer_facets(dim, &facets).expect("corpus polytope is well formed")
}

/// ℙ¹: `[−1, 1]`.
pub fn p1() -> HPolytope {
    canonical(1, &[&[1], &[-1]])
}

/// ℙ²: `{x_i ≥ −1, x₁ + x₂ ≤ 1}`.
pub fn p2() -> HPolytope {
    canonical(2, &[&[-1, 0], &[0, -1], &[1, 1]])
}

/// ℙ¹ × ℙ¹: `[−1, 1]²`.
pub fn p1xp1() -> HPolytope {
    canonical(2, &[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]])
}

/// Blow-up of ℙ² at a point.
pub fn bl1p2() -> HPolytope {
    canonical(2, &[&[1, 0], &[0, 1], &[-1, -1], &[1, 1]])
}

/// ℙ³.
pub fn p3() -> HPolytope {
    canonical(3, &[&[-1, 0, 0], &[0, -1, 0], &[0, 0, -1], &[1, 1, 1]])
}

/// Blow-up of ℙ³ at a point.
pub fn bl1p3() -> HPolytope {
    canonical(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[-1, -1, -1], &[1, 1, 1]])
}

/// Weighted projective plane ℙ(1,2,3); its barycenter sits far enough from
/// the origin that ϑ = 2.
pub fn p123() -> HPolytope {
    canonical(2, &[&[-2, -1], &[0, 1], &[1, -1]])
}

pub fn all() -> Vec<(&'static str, HPolytope)> {
    vec![
        ("P1", p1()),
        ("P2", p2()),
        ("P1xP1", p1xp1()),
        ("Bl1P2", bl1p2()),
        ("P3", p3()),
        ("Bl1P3", bl1p3()),
        ("P123", p123()),
    ]
}

pub fn by_name(name: &str) -> Option<HPolytope> {
    all().into_iter().find(|(n, _)| n.eq_ignore_ascii_case(name)).map(|(_, p)| p)
}
