use std::sync::Arc;

use rayon::prelude::*;

use crate::dsl::{elaborate, parse_ring_expr, ParseError, RingExpr};
use crate::error::RingError;
use crate::ring::{FiniteRing, ResourceGuard, RingHandle};

/// Ring expressions used by `verify` when no corpus file is given.
pub const BUILTIN_CORPUS: &[&str] = &[
    "Z(2)",
    "Z(3)",
    "Z(4)",
    "Z(5)",
    "Z(6)",
    "Z(7)",
    "Z(8)",
    "Z(9)",
    "Z(10)",
    "Z(11)",
    "Z(12)",
    "Z(13)",
    "Z(16)",
    "Z(27)",
    "GF(4)",
    "GF(8)",
    "GF(9)",
    "M(2,Z(2))",
    "M(2,Z(3))",
    "M(2,GF(4))",
    "M(3,Z(2))",
    "T(2,Z(2))",
    "T(3,Z(2))",
    "T(2,Z(4))",
    "Ks(Z(4),2)",
    "Ks(Z(2),0)",
    "TrivExt(Z(2))",
    "TrivExt(Z(4))",
    "Poly(Z(2),3)",
    "Poly(Z(4),2)",
    "Prod(Z(2),Z(3))",
    "Prod(Z(4),Z(9))",
    "GR(Z(2),C(2))",
    "GR(Z(2),C(4))",
    "GR(Z(4),C(2))",
    "GR(Z(2),Q8)",
    "GR(Z(3),C(2))",
    "GR(Z(2),C(3))",
    "FT(Z(2),Z(2))",
    "Corner(M(2,Z(2)),#1)",
];

/// One corpus entry. A ring over the size limit is kept with its error so
/// suites can report it as skipped.
#[derive(Debug, Clone)]
pub struct CorpusRing {
    pub text: String,
    pub ring: std::result::Result<RingHandle, RingError>,
}

impl CorpusRing {
    pub fn finite(&self) -> Option<&Arc<FiniteRing>> {
        match &self.ring {
            Ok(RingHandle::Finite(r)) => Some(r),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Corpus {
    pub rings: Vec<CorpusRing>,
}

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("corpus line {line}: {source}")]
    Parse { line: usize, source: ParseError },
    #[error("corpus line {line}: {source}")]
    Ring { line: usize, source: RingError },
    #[error("corpus is empty")]
    Empty,
}

impl Corpus {
    /// Elaborates every expression. Size-limit failures are kept as
    /// entries; any other failure rejects the corpus.
    pub fn from_exprs(exprs: &[(usize, RingExpr)], guard: &ResourceGuard) -> Result<Corpus, CorpusError> {
        if exprs.is_empty() {
            return Err(CorpusError::Empty);
        }
        let rings: Vec<_> = exprs
            .par_iter()
            .map(|(line, e)| (*line, e.to_string(), elaborate(e, guard)))
            .collect();
        let mut out = Vec::with_capacity(rings.len());
        for (line, text, ring) in rings {
            match ring {
                Err(RingError::SizeExceeded { .. }) | Ok(_) => out.push(CorpusRing { text, ring }),
                Err(source) => return Err(CorpusError::Ring { line, source }),
            }
        }
        Ok(Corpus { rings: out })
    }

    /// One expression per line; `#` starts a comment unless it is an
    /// element reference inside the expression.
    pub fn from_text(text: &str, guard: &ResourceGuard) -> Result<Corpus, CorpusError> {
        let mut exprs = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = strip_comment(raw).trim();
            if line.is_empty() {
                continue;
            }
            let e = parse_ring_expr(line).map_err(|source| CorpusError::Parse { line: i + 1, source })?;
            exprs.push((i + 1, e));
        }
        Corpus::from_exprs(&exprs, guard)
    }

    pub fn builtin(guard: &ResourceGuard) -> Corpus {
        Corpus::from_text(&BUILTIN_CORPUS.join("\n"), guard).expect("built-in corpus elaborates")
    }

    pub fn len(&self) -> usize {
        self.rings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rings.is_empty()
    }
}

/// A `#` that is the first non-blank character, or follows whitespace and is
/// not followed by a digit, starts a comment.
fn strip_comment(line: &str) -> &str {
    let bytes = line.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        if b != b'#' {
            continue;
        }
        let next_digit = bytes.get(i + 1).is_some_and(|c| c.is_ascii_digit());
        let before = line[..i].trim_end();
        if before.is_empty() || !(next_digit || before.ends_with(',')) {
            return &line[..i];
        }
    }
    line
}
