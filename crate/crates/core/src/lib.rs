//! Exact finite-ring engine: constructions, structural invariants, n-UU
//! predicates, theorem-verification suites and a small ring DSL.

pub mod bitset;
pub mod constructions;
pub mod dsl;
pub mod error;
pub mod group;
pub mod invariants;
pub mod numtheory;
pub mod predicates;
pub mod radix;
pub mod ring;
pub mod verdict;

pub use error::{Result, RingError};
pub use ring::{Code, Elem, FiniteRing, ResourceGuard, RingHandle, RingId, RingOps};
pub use verdict::{CheckMode, Verdict, Witness};
