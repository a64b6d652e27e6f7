//! Exact and numeric models of the torus-equivariant cohomology of the
//! quaternionic flag manifold.
//!
//! The crate has two exact pillars and one numeric one:
//!
//! * [`gkmring`] realizes the cohomology as tuples of integer polynomials
//!   over the permutation vertices, constrained by divisibility along the
//!   moment-graph edges, on top of [`exactpoly`] arithmetic,
//!   [`flagcomb`] combinatorics, and [`intlinalg`] normal forms.
//! * [`borelring`] realizes the same ring as a polynomial quotient and
//!   verifies, degree by degree over the integers, that evaluation onto the
//!   vertex model is an isomorphism.
//! * [`quatlab`] checks the differential-geometric input (critical points,
//!   Morse indices, curvature spheres, gradient lines) on the concrete
//!   quaternion-matrix orbit in double precision.

pub mod borelring;
pub mod exactpoly;
pub mod flagcomb;
pub mod gkmring;
pub mod intlinalg;
pub mod quatlab;

pub use borelring::{
    artin_basis, evaluate_to_gkm, predicted_graded_rank, reduce_to_artin, relation_generator,
    verify_isomorphism_degree, ArtinMonomial, BorelElement, BorelError, DegreeReport,
};
pub use exactpoly::{monomials_of_degree, IntPolynomial, Monomial, PolyError};
pub use flagcomb::{
    all_permutations, descent_pairs, gkm_edges, height, morse_index, q_factorial, EdgeConvention,
    FlagError, GkmEdge, HeightParams, Permutation,
};
pub use gkmring::{DegreeScale, GkmClass, GkmContext, GkmError};
pub use intlinalg::IntMatrix;
pub use quatlab::{
    inner, meridian_tangency_check, numeric_gradient, numeric_hessian_index, orbit_point,
    sphere_point, standard_check_battery, t_fixed_point_check, CheckOutcome, OrbitPoint,
    QuatError, QuatMatrix, Quaternion,
};
