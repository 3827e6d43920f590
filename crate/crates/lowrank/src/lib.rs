//! Exact-arithmetic certification of injectivity for low-rank matrix
//! measurement ensembles, via Groebner elimination and Sturm real-root
//! counting, together with the dimension/degree/parity bound calculators
//! and a phase-retrieval-by-projections front end.

pub mod certify;
pub mod exactnum;
pub mod fixtures;
pub mod groebner;
pub mod linalg;
pub mod realroots;
pub mod search;
pub mod variety;
pub mod poly;
pub mod projections;
