//! Bundled data: the published 11-matrix rank-1 ensemble, the 6-subspace
//! phase-retrieval family, and the golden elimination polynomials they
//! produce (degree 20 in (x43,x44); degree 10 in (x34,x44)).

pub const ENSEMBLE_11: &str = include_str!("../fixtures/eq_11matr.json");
pub const SUBSPACES_UV: &str = include_str!("../fixtures/eq_uv.json");
pub const GOLDEN_DEGREE20: &str = include_str!("../fixtures/golden_degree20.txt");
pub const GOLDEN_DEGREE10: &str = include_str!("../fixtures/golden_degree10.txt");
