//! Builders for every supported ring construction.

mod basic;
pub mod bimodule;
mod derived;
mod groupring;
mod matrix;
mod morita;
mod poly;
mod product;

pub use basic::{gf, integers_oracle, is_irreducible, smallest_irreducible, zmod, GaloisField, IntegersOracle, Zmod};
pub use derived::{corner, ideal_closure, quotient, subring_closure, DerivedKind, DerivedRing, IdealSet};
pub use groupring::{groupring, GroupRing};
pub use matrix::{matrix, triangular, MatrixRing, TriangularRing};
pub use morita::{formal_triangular, ks, trivial_extension, FormalTriangular, KsRing, TrivialExtension};
pub use poly::{polyquot, PolyQuotient};
pub use product::{product, ProductRing};
