//! Fixtures shared by the benchmarks.

use toric_ding::rat::{int, rat};
use toric_ding::{corpus, validate_fano, AffineFn, FanoPolytope, NormalConeFamily, PlConcave, VertexChoice};

pub fn fano(name: &str) -> FanoPolytope {
    validate_fano(&corpus::by_name(name).expect("corpus name")).expect("Fano")
}

/// `min{0, 1/2 − x₁, x₂ + 1/4}` on ℙ².
pub fn three_piece_p2() -> PlConcave {
    PlConcave::new(
        &fano("P2"),
        vec![
            AffineFn::constant(2, int(0)),
            AffineFn::new(vec![int(-1), int(0)], rat(1, 2)),
            AffineFn::new(vec![int(0), int(1)], rat(1, 4)),
        ],
    )
    .expect("valid configuration")
}

/// Four tilted pieces on the blow-up of ℙ³.
pub fn four_piece_bl1p3() -> PlConcave {
    PlConcave::new(
        &fano("Bl1P3"),
        vec![
            AffineFn::constant(3, int(0)),
            AffineFn::new(vec![int(-1), rat(1, 2), int(0)], rat(1, 3)),
            AffineFn::new(vec![int(0), int(1), rat(-1, 3)], rat(1, 2)),
            AffineFn::new(vec![rat(1, 4), int(0), int(1)], rat(2, 3)),
        ],
    )
    .expect("valid configuration")
}

pub fn family(name: &str) -> NormalConeFamily {
    NormalConeFamily::new(&fano(name), VertexChoice::Auto).expect("smooth vertex")
}
