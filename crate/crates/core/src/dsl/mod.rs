//! Ring-expression language: `M(2,Z(2))`, `GR(Z(2),Q8)`, `Corner(M(2,Z(2)),#1)`.

mod lexer;
mod parser;

use std::path::Path;
use std::sync::Arc;

pub use lexer::Span;
pub use parser::{
    parse_group_expr, parse_ring_expr, GroupExpr, GroupKind, ParseError, ParseErrorKind, RingExpr, RingKind,
    MAX_SOURCE_BYTES,
};

use crate::constructions::{
    corner, formal_triangular, gf, groupring, ideal_closure, ks, matrix, polyquot, product, quotient,
    trivial_extension, triangular, zmod,
};
use crate::error::{Result, RingError};
use crate::group::FiniteGroup;
use crate::ring::{Code, FiniteRing, ResourceGuard, RingHandle};

fn finite(expr: &RingExpr, guard: &ResourceGuard, op: &'static str) -> Result<Arc<FiniteRing>> {
    match elaborate(expr, guard)? {
        RingHandle::Finite(r) => Ok(r),
        RingHandle::Integers => Err(RingError::UnsupportedPredicate(op)),
    }
}

fn element(ring: &FiniteRing, code: u64) -> Result<Code> {
    Ok(ring.elem(code)?.code)
}

/// Bottom-up construction of the ring an expression denotes.
pub fn elaborate(expr: &RingExpr, guard: &ResourceGuard) -> Result<RingHandle> {
    let ring = match &expr.kind {
        RingKind::Integers => return Ok(RingHandle::Integers),
        RingKind::Zmod(n) => zmod(*n, guard)?,
        RingKind::Gf(q) => gf(*q, guard)?,
        RingKind::Matrix(k, base) => matrix(&finite(base, guard, "matrix")?, *k, guard)?,
        RingKind::Triangular(k, base) => triangular(&finite(base, guard, "triangular")?, *k, guard)?,
        RingKind::FormalTriangular(a, b) => formal_triangular(
            &finite(a, guard, "formal triangular")?,
            &finite(b, guard, "formal triangular")?,
            guard,
        )?,
        RingKind::Ks(base, s) => ks(&finite(base, guard, "Ks")?, *s, guard)?,
        RingKind::TrivExt(base) => trivial_extension(&finite(base, guard, "trivial extension")?, guard)?,
        RingKind::Poly(base, k) => polyquot(&finite(base, guard, "polynomial quotient")?, *k, guard)?,
        RingKind::Prod(parts) => {
            let parts = parts
                .iter()
                .map(|p| finite(p, guard, "product"))
                .collect::<Result<Vec<_>>>()?;
            product(&parts, guard)?
        }
        RingKind::GroupRing(base, group) => {
            let base = finite(base, guard, "group ring")?;
            groupring(&base, &elaborate_group(group)?, guard)?
        }
        RingKind::Corner(base, e) => {
            let base = finite(base, guard, "corner")?;
            let e = element(&base, *e)?;
            corner(&base, e, guard)?
        }
        RingKind::Quot(base, gens) => {
            let base = finite(base, guard, "quotient")?;
            let gens = gens
                .iter()
                .map(|&g| element(&base, g))
                .collect::<Result<Vec<_>>>()?;
            let ideal = ideal_closure(&base, &gens);
            quotient(&base, &ideal, guard)?
        }
    };
    Ok(RingHandle::Finite(ring))
}

pub fn elaborate_group(expr: &GroupExpr) -> Result<FiniteGroup> {
    match &expr.kind {
        GroupKind::Cyclic(n) => FiniteGroup::cyclic(*n),
        GroupKind::Dihedral(n) => FiniteGroup::dihedral(*n),
        GroupKind::Quaternion => FiniteGroup::quaternion(),
        GroupKind::Symmetric(n) => FiniteGroup::symmetric(*n),
        GroupKind::Product(a, b) => FiniteGroup::direct_product(&elaborate_group(a)?, &elaborate_group(b)?),
        GroupKind::File(p) => FiniteGroup::from_json_file(Path::new(p)),
    }
}

#[derive(Debug, thiserror::Error)]
pub enum DslError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Parse and elaborate in one step.
pub fn build(text: &str, guard: &ResourceGuard) -> std::result::Result<RingHandle, DslError> {
    Ok(elaborate(&parse_ring_expr(text)?, guard)?)
}
