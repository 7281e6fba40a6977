//! Exact toric computations for relative Ding stability of Fano manifolds.
//!
//! A toric Fano manifold is given by its canonical moment polytope
//! `{⟨ℓ_i, x⟩ ≤ 1}`. Test-configurations are concave piecewise-affine
//! functions on it. Everything here is computed in exact rational arithmetic:
//! Duistermaat–Heckman measures, the non-Archimedean functionals, the
//! extremal affine function and its maximum `ϑ`, the reduced `J_T^NA` via an
//! exact simplex, the deformation-to-the-normal-cone family, and a
//! lattice-point oracle for finite `k`.

pub mod corpus;
pub mod error;
pub mod extremal;
pub mod functionals;
pub mod io;
pub mod linalg;
pub mod lp;
pub mod measure;
pub mod normal_cone;
pub mod oracle;
pub mod poly;
pub mod polytope;
pub mod rat;
pub mod twist;

pub use error::{Error, Result};
pub use extremal::{extremal_affine, validate_fano, ExtremalData, FanoPolytope};
pub use functionals::{d_na, d_z_na, dh_measure, e_na, inner_product, j_na, PlConcave, TestConfiguration};
pub use measure::{Atom, DensityPiece, DhMeasure};
pub use normal_cone::{verdict, verify_family, FamilyReport, NormalConeFamily, StabilityReport, VertexChoice};
pub use oracle::{gabor_inner, lattice_points, vol_distribution, weight_measure, WeightMeasure};
pub use poly::{AffineFn, Polynomial, UniPoly};
pub use polytope::{HPolytope, Point};
pub use rat::Rat;
pub use twist::{jna_twisted, reduce_jna, twist, Reduction, TwistProblem};
