//! Group-ring data generation: uu-exponents of RG against R and G. Nothing
//! here is asserted; the records are a dataset.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::constructions::groupring;
use crate::dsl::{elaborate, elaborate_group, parse_group_expr, parse_ring_expr, GroupExpr, RingExpr};
use crate::error::{Result, RingError};
use crate::invariants::{is_nilpotent, uu_exponent};
use crate::numtheory::factorize;
use crate::predicates::is_n_uu;
use crate::ring::{ResourceGuard, RingHandle};

pub const DEFAULT_BASES: [&str; 8] = ["Z(2)", "Z(3)", "Z(4)", "Z(5)", "Z(6)", "Z(8)", "Z(9)", "GF(4)"];
pub const DEFAULT_GROUPS: [&str; 9] = ["C(2)", "C(3)", "C(4)", "C(5)", "C(6)", "GxG(C(2),C(2))", "D(3)", "D(4)", "Q8"];
/// Default cap on |R|^|G| for exploration.
pub const DEFAULT_EXPLORE_LIMIT: usize = 1024;

#[derive(Debug, Clone)]
pub struct ExploreRequest {
    pub bases: Vec<RingExpr>,
    pub groups: Vec<GroupExpr>,
    pub ns: Vec<u64>,
    pub max_ring_size: usize,
    pub p_groups_only: bool,
}

impl Default for ExploreRequest {
    fn default() -> Self {
        ExploreRequest {
            bases: DEFAULT_BASES.iter().map(|s| parse_ring_expr(s).unwrap()).collect(),
            groups: DEFAULT_GROUPS.iter().map(|s| parse_group_expr(s).unwrap()).collect(),
            ns: (1..=24).collect(),
            max_ring_size: DEFAULT_EXPLORE_LIMIT,
            p_groups_only: false,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExploreRecord {
    pub ring: String,
    pub base: String,
    pub group: String,
    pub group_order: usize,
    pub group_order_factorization: Vec<(u64, u32)>,
    pub group_prime: Option<u64>,
    pub characteristic: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub uu_exponent_ring: Option<u64>,
    pub uu_exponent_base: u64,
    pub ns: Vec<u64>,
    pub n_uu: Vec<bool>,
    /// Least unit u with u - 1 not nilpotent, when RG is not UU.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub uu_witness: Option<i64>,
    /// G is a p-group with p nilpotent in R, so RG and R should share their
    /// n-UU set.
    pub suf_applies: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suf_consistent: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
    pub elapsed_ms: u64,
}

pub fn explore_group_rings(req: &ExploreRequest, guard: &ResourceGuard) -> Result<Vec<ExploreRecord>> {
    if req.bases.is_empty() || req.groups.is_empty() {
        return Err(RingError::InvalidParameter("empty base or group selection".into()));
    }
    let mut bases = Vec::new();
    for b in &req.bases {
        match elaborate(b, guard)? {
            RingHandle::Finite(r) => bases.push(r),
            RingHandle::Integers => return Err(RingError::UnsupportedPredicate("explore")),
        }
    }
    let mut groups = Vec::new();
    for g in &req.groups {
        let group = elaborate_group(g)?;
        if req.p_groups_only && group.p_group_prime().is_none() {
            continue;
        }
        groups.push((g.to_string(), group));
    }
    if groups.is_empty() {
        return Err(RingError::InvalidParameter("no group left after filtering".into()));
    }
    let limit = ResourceGuard {
        max_ring_size: req.max_ring_size.min(guard.max_ring_size),
        ..guard.clone()
    };
    let pairs: Vec<_> = bases.iter().flat_map(|b| groups.iter().map(move |g| (b, g))).collect();
    let records = pairs
        .par_iter()
        .map(|(base, (gtext, group))| {
            let start = Instant::now();
            let p = group.p_group_prime();
            let suf_applies = p.is_some_and(|p| is_nilpotent(base, base.from_int(p as i64)));
            let mut rec = ExploreRecord {
                ring: format!("GR({},{})", base.label(), gtext),
                base: base.label().to_string(),
                group: gtext.clone(),
                group_order: group.order(),
                group_order_factorization: factorize(group.order() as u64),
                group_prime: p,
                characteristic: base.characteristic(),
                uu_exponent_ring: None,
                uu_exponent_base: uu_exponent(base),
                ns: req.ns.clone(),
                n_uu: Vec::new(),
                uu_witness: None,
                suf_applies,
                suf_consistent: None,
                skipped: None,
                elapsed_ms: 0,
            };
            match groupring(base, group, &limit) {
                Ok(rg) => {
                    let d = uu_exponent(&rg);
                    rec.uu_exponent_ring = Some(d);
                    rec.n_uu = req.ns.iter().map(|&n| n % d == 0).collect();
                    rec.uu_witness = is_n_uu(&rg, 1).witness_value("u");
                    if suf_applies {
                        rec.suf_consistent = Some(d == rec.uu_exponent_base);
                    }
                }
                Err(e @ RingError::SizeExceeded { .. }) => rec.skipped = Some(e.to_string()),
                Err(e) => return Err(e),
            }
            rec.elapsed_ms = start.elapsed().as_millis() as u64;
            Ok(rec)
        })
        .collect::<Vec<Result<ExploreRecord>>>();
    records.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_give_enough_records() {
        let recs = explore_group_rings(&ExploreRequest::default(), &ResourceGuard::default()).unwrap();
        let built: Vec<_> = recs.iter().filter(|r| r.skipped.is_none()).collect();
        assert!(built.len() >= 20, "{}", built.len());
        let z2c2 = recs.iter().find(|r| r.ring == "GR(Z(2),C(2))").unwrap();
        assert_eq!(z2c2.uu_exponent_ring, Some(1));
        let z3c2 = recs.iter().find(|r| r.ring == "GR(Z(3),C(2))").unwrap();
        assert!(!z3c2.n_uu[0]);
        assert!(z3c2.uu_witness.is_some());
        let z2c3 = recs.iter().find(|r| r.ring == "GR(Z(2),C(3))").unwrap();
        assert!(z2c3.uu_exponent_ring.is_some());
    }

    #[test]
    fn p_groups_agree_with_sufficiency() {
        let req = ExploreRequest {
            p_groups_only: true,
            ..Default::default()
        };
        let recs = explore_group_rings(&req, &ResourceGuard::default()).unwrap();
        assert!(recs.iter().all(|r| r.group_prime.is_some()));
        for r in recs.iter().filter(|r| r.suf_applies && r.skipped.is_none()) {
            assert_eq!(r.suf_consistent, Some(true), "{}", r.ring);
        }
    }

    #[test]
    fn empty_selection_is_an_error() {
        let req = ExploreRequest {
            groups: Vec::new(),
            ..Default::default()
        };
        assert!(explore_group_rings(&req, &ResourceGuard::default()).is_err());
        let req = ExploreRequest {
            groups: vec![parse_group_expr("C(6)").unwrap()],
            p_groups_only: true,
            ..Default::default()
        };
        assert!(explore_group_rings(&req, &ResourceGuard::default()).is_err());
    }
}
