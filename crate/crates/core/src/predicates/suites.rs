//! Theorem-verification suites. Each suite evaluates its conditions on a set
//! of rings and checks the claimed implication or equivalence, one record
//! per ring.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use num_integer::gcd;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::constructions::{
    corner, product, quotient, FormalTriangular, GroupRing, KsRing, MatrixRing, PolyQuotient, ProductRing,
    TriangularRing, TrivialExtension,
};
use crate::dsl::{elaborate, parse_ring_expr};
use crate::error::{Result, RingError};
use crate::invariants::{center, idempotents, is_nilpotent, jacobson_radical, nilpotents, units};
use crate::numtheory::{is_pi_number, prime_divisors};
use crate::predicates::corpus::Corpus;
use crate::predicates::{
    augmentation_ideal, is_n_uu, is_nil_clean, is_nil_ideal, is_periodic_element, is_strongly_m_nil_clean_element,
    is_strongly_n_nil_clean, lcm_criterion, thm1_condition, unipotent_order_check, Thm1Condition,
};
use crate::ring::{Code, FiniteRing, ResourceGuard, RingHandle};
use crate::verdict::Witness;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SuiteId {
    Thm1Equiv,
    MatrixLcm,
    FieldUu,
    PropUu,
    Odd2Nil,
    DivUu,
    OddSplit,
    GcdUu,
    SncNc,
    ClosureProd,
    ClosureCorner,
    NilQuot,
    NegMatrix,
    Morita,
    Thm2Constructive,
    GroupRingNec,
    GroupRingSuf,
    Unipo,
}

impl SuiteId {
    pub const ALL: [SuiteId; 18] = [
        SuiteId::Thm1Equiv,
        SuiteId::MatrixLcm,
        SuiteId::FieldUu,
        SuiteId::PropUu,
        SuiteId::Odd2Nil,
        SuiteId::DivUu,
        SuiteId::OddSplit,
        SuiteId::GcdUu,
        SuiteId::SncNc,
        SuiteId::ClosureProd,
        SuiteId::ClosureCorner,
        SuiteId::NilQuot,
        SuiteId::NegMatrix,
        SuiteId::Morita,
        SuiteId::Thm2Constructive,
        SuiteId::GroupRingNec,
        SuiteId::GroupRingSuf,
        SuiteId::Unipo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuiteId::Thm1Equiv => "THM1-EQUIV",
            SuiteId::MatrixLcm => "MATRIX-LCM",
            SuiteId::FieldUu => "FIELD-UU",
            SuiteId::PropUu => "PROP-UU",
            SuiteId::Odd2Nil => "ODD-2NIL",
            SuiteId::DivUu => "DIV-UU",
            SuiteId::OddSplit => "ODD-SPLIT",
            SuiteId::GcdUu => "GCD-UU",
            SuiteId::SncNc => "SNC-NC",
            SuiteId::ClosureProd => "CLOSURE-PROD",
            SuiteId::ClosureCorner => "CLOSURE-CORNER",
            SuiteId::NilQuot => "NILQUOT",
            SuiteId::NegMatrix => "NEG-MATRIX",
            SuiteId::Morita => "MORITA",
            SuiteId::Thm2Constructive => "THM2-CONSTRUCTIVE",
            SuiteId::GroupRingNec => "GROUPRING-NEC",
            SuiteId::GroupRingSuf => "GROUPRING-SUF",
            SuiteId::Unipo => "UNIPO",
        }
    }
}

impl fmt::Display for SuiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SuiteId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let up = s.to_ascii_uppercase();
        SuiteId::ALL
            .into_iter()
            .find(|id| id.name() == up)
            .ok_or_else(|| format!("unknown suite '{s}'"))
    }
}

/// One ring's outcome within a suite.
///
/// `conditions` maps a condition name to a boolean, a count, or a list of
/// booleans aligned with `ns`. A skipped record (ring over the size limit)
/// has `holds = false` and is not counted as a failure.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteRecord {
    pub suite: &'static str,
    pub ring: String,
    pub ns: Vec<u64>,
    pub conditions: BTreeMap<String, Value>,
    pub holds: bool,
    pub witness: Vec<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub elapsed_ms: u64,
}

impl SuiteRecord {
    pub fn is_failure(&self) -> bool {
        !self.holds && self.skipped.is_none()
    }
}

#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub suite: SuiteId,
    pub records: Vec<SuiteRecord>,
    /// "ring: detail" for every failing record, in record order.
    pub failures: Vec<String>,
}

impl SuiteResult {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn skipped(&self) -> usize {
        self.records.iter().filter(|r| r.skipped.is_some()).count()
    }
}

#[derive(Debug, Default)]
struct Outcome {
    ns: Vec<u64>,
    conditions: BTreeMap<String, Value>,
    witness: Option<Vec<Witness>>,
}

impl Outcome {
    fn new(ns: Vec<u64>) -> Self {
        Outcome {
            ns,
            ..Default::default()
        }
    }

    fn set(&mut self, name: &str, v: impl Into<Value>) {
        self.conditions.insert(name.to_string(), v.into());
    }

    /// Keeps the first failure only.
    fn fail(&mut self, w: &[(&str, i64)]) {
        if self.witness.is_none() {
            self.witness = Some(w.iter().map(|&(role, v)| Witness::new(role, v)).collect());
        }
    }
}

struct Target {
    label: String,
    ring: std::result::Result<Arc<FiniteRing>, RingError>,
}

impl Target {
    fn fixed(text: &str, guard: &ResourceGuard) -> Target {
        let expr = parse_ring_expr(text).expect("fixed suite instance parses");
        let ring = elaborate(&expr, guard).and_then(|h| match h {
            RingHandle::Finite(r) => Ok(r),
            RingHandle::Integers => Err(RingError::UnsupportedPredicate("suite")),
        });
        Target {
            label: expr.to_string(),
            ring,
        }
    }
}

fn corpus_targets(corpus: &Corpus) -> Vec<Target> {
    corpus
        .rings
        .iter()
        .filter_map(|c| match &c.ring {
            Ok(RingHandle::Finite(r)) => Some(Target {
                label: c.text.clone(),
                ring: Ok(r.clone()),
            }),
            Ok(RingHandle::Integers) => None,
            Err(e) => Some(Target {
                label: c.text.clone(),
                ring: Err(e.clone()),
            }),
        })
        .collect()
}

fn evaluate<F>(suite: SuiteId, targets: &[Target], f: F) -> Vec<SuiteRecord>
where
    F: Fn(&Arc<FiniteRing>) -> Result<Option<Outcome>> + Sync,
{
    let record = |t: &Target| -> Option<SuiteRecord> {
        let start = Instant::now();
        let base = SuiteRecord {
            suite: suite.name(),
            ring: t.label.clone(),
            ns: Vec::new(),
            conditions: BTreeMap::new(),
            holds: false,
            witness: Vec::new(),
            skipped: None,
            error: None,
            elapsed_ms: 0,
        };
        let rec = match &t.ring {
            Err(e @ RingError::SizeExceeded { .. }) => SuiteRecord {
                skipped: Some(e.to_string()),
                ..base
            },
            Err(e) => SuiteRecord {
                error: Some(e.to_string()),
                ..base
            },
            Ok(r) => match f(r) {
                Ok(None) => return None,
                Ok(Some(o)) => SuiteRecord {
                    ns: o.ns,
                    conditions: o.conditions,
                    holds: o.witness.is_none(),
                    witness: o.witness.unwrap_or_default(),
                    ..base
                },
                Err(e @ RingError::SizeExceeded { .. }) => SuiteRecord {
                    skipped: Some(e.to_string()),
                    ..base
                },
                Err(e) => SuiteRecord {
                    error: Some(e.to_string()),
                    ..base
                },
            },
        };
        Some(SuiteRecord {
            elapsed_ms: start.elapsed().as_millis() as u64,
            ..rec
        })
    };
    let out: Vec<Option<SuiteRecord>> = targets.par_iter().map(record).collect();
    out.into_iter().flatten().collect()
}

fn nuu(r: &FiniteRing, n: u64) -> bool {
    is_n_uu(r, n).holds
}

fn nuu_all(r: &FiniteRing, ns: &[u64]) -> Vec<bool> {
    ns.iter().map(|&n| nuu(r, n)).collect()
}

/// Matrix instances for the lcm criterion: (q, m).
pub const MATRIX_INSTANCES: [(u64, usize); 9] = [(2, 1), (3, 1), (4, 1), (5, 1), (7, 1), (2, 2), (3, 2), (4, 2), (2, 3)];

/// Matrix instances that are never n-UU for the listed n.
pub const NEG_MATRIX_INSTANCES: [(&str, [u64; 2]); 5] = [
    ("M(2,Z(2))", [4, 5]),
    ("M(2,Z(3))", [4, 5]),
    ("M(2,Z(4))", [4, 5]),
    ("M(3,Z(2))", [3, 6]),
    ("M(3,Z(3))", [3, 6]),
];

/// Group rings always included in GROUPRING-SUF.
pub const GROUPRING_SUF_PAIRS: [&str; 4] = ["GR(Z(2),C(2))", "GR(Z(2),C(4))", "GR(Z(4),C(2))", "GR(Z(2),Q8)"];

/// Pairwise products added to CLOSURE-PROD when their size is at most this.
pub const PAIR_PRODUCT_LIMIT: usize = 32;

fn matrix_targets(guard: &ResourceGuard) -> Vec<Target> {
    MATRIX_INSTANCES
        .iter()
        .map(|&(q, m)| Target::fixed(&format!("M({m},GF({q}))"), guard))
        .collect()
}

/// n for which the Morita-context comparison is claimed.
pub fn morita_n(n: u64) -> bool {
    n % 2 == 1 || n.is_power_of_two() || n == 6 || n == 10
}

/// n for which the converse of the constructive chain is claimed.
pub fn thm2_converse_n(n: u64) -> bool {
    n % 2 == 0 || (n > 1 && (n - 1).is_power_of_two()) || n == 7 || n == 11
}

fn matrix_params(r: &FiniteRing) -> Option<(u64, usize)> {
    r.construction::<MatrixRing>().map(|m| (m.base.size() as u64, m.k))
}

pub fn run_suite(id: SuiteId, corpus: &Corpus, ns: &[u64], guard: &ResourceGuard) -> SuiteResult {
    let mut ns: Vec<u64> = ns.iter().copied().filter(|&n| n >= 1).collect();
    ns.sort_unstable();
    ns.dedup();
    let ns = ns.as_slice();
    let records = match id {
        SuiteId::Thm1Equiv => evaluate(id, &corpus_targets(corpus), |r| thm1_equiv(r, ns)),
        SuiteId::MatrixLcm => evaluate(id, &matrix_targets(guard), |r| {
            let (q, m) = matrix_params(r).expect("matrix instance");
            let d = crate::invariants::uu_exponent(r);
            let l = lcm_criterion(q, m as u32)?;
            let mut o = Outcome::new(Vec::new());
            o.set("uu_exponent", d);
            o.set("lcm", l);
            if d != l {
                o.fail(&[("uu_exponent", d as i64), ("lcm", l as i64)]);
            }
            Ok(Some(o))
        }),
        SuiteId::FieldUu => evaluate(id, &corpus_targets(corpus), |r| field_uu(r, ns)),
        SuiteId::PropUu => evaluate(id, &corpus_targets(corpus), |r| prop_uu(r, ns)),
        SuiteId::Odd2Nil => evaluate(id, &corpus_targets(corpus), |r| odd_2nil(r, ns)),
        SuiteId::DivUu => evaluate(id, &corpus_targets(corpus), |r| div_uu(r, ns)),
        SuiteId::OddSplit => evaluate(id, &corpus_targets(corpus), |r| odd_split(r, ns)),
        SuiteId::GcdUu => evaluate(id, &corpus_targets(corpus), |r| gcd_uu(r, ns)),
        SuiteId::SncNc => evaluate(id, &corpus_targets(corpus), snc_nc),
        SuiteId::ClosureProd => evaluate(id, &product_targets(corpus, guard), |r| closure_prod(r, ns)),
        SuiteId::ClosureCorner => evaluate(id, &corpus_targets(corpus), |r| closure_corner(r, ns, guard)),
        SuiteId::NilQuot => evaluate(id, &corpus_targets(corpus), |r| nil_quot(r, ns, guard)),
        SuiteId::NegMatrix => {
            let targets: Vec<Target> = NEG_MATRIX_INSTANCES.iter().map(|(s, _)| Target::fixed(s, guard)).collect();
            evaluate(id, &targets, neg_matrix)
        }
        SuiteId::Morita => evaluate(id, &corpus_targets(corpus), |r| morita(r, ns)),
        SuiteId::Thm2Constructive => evaluate(id, &matrix_targets(guard), |r| thm2(r, ns)),
        SuiteId::GroupRingNec => evaluate(id, &corpus_targets(corpus), |r| groupring_nec(r, ns)),
        SuiteId::GroupRingSuf => evaluate(id, &groupring_suf_targets(corpus, guard), |r| groupring_suf(r, ns)),
        SuiteId::Unipo => evaluate(id, &corpus_targets(corpus), unipo),
    };
    let failures = records
        .iter()
        .filter(|r| r.is_failure())
        .map(|r| {
            let detail = match &r.error {
                Some(e) => e.clone(),
                None => r
                    .witness
                    .iter()
                    .map(|w| format!("{}={}", w.role, w.value))
                    .collect::<Vec<_>>()
                    .join(" "),
            };
            format!("{}: {}", r.ring, detail)
        })
        .collect();
    SuiteResult {
        suite: id,
        records,
        failures,
    }
}

fn thm1_equiv(r: &FiniteRing, ns: &[u64]) -> Result<Option<Outcome>> {
    let ns: Vec<u64> = ns.iter().copied().filter(|&n| n >= 2).collect();
    if ns.is_empty() {
        return Ok(None);
    }
    let mut o = Outcome::new(ns.clone());
    let mut cols = vec![Vec::with_capacity(ns.len()); 6];
    for &n in &ns {
        let row = Thm1Condition::ALL
            .iter()
            .map(|&c| thm1_condition(r, n, c).map(|v| v.holds))
            .collect::<Result<Vec<bool>>>()?;
        if let Some(i) = row.iter().position(|&b| b != row[0]) {
            o.fail(&[("n", n as i64), ("condition", i as i64 + 1)]);
        }
        for (col, b) in cols.iter_mut().zip(row) {
            col.push(b);
        }
    }
    for (i, col) in cols.into_iter().enumerate() {
        o.set(&format!("c{}", i + 1), col);
    }
    Ok(Some(o))
}

fn field_uu(r: &FiniteRing, ns: &[u64]) -> Result<Option<Outcome>> {
    let q = r.size() as u64;
    if units(r).len() as u64 != q - 1 {
        return Ok(None);
    }
    let mut o = Outcome::new(ns.to_vec());
    let lhs = nuu_all(r, ns);
    let rhs: Vec<bool> = ns.iter().map(|&n| n % (q - 1) == 0).collect();
    for ((&n, &a), &b) in ns.iter().zip(&lhs).zip(&rhs) {
        if a != b {
            o.fail(&[("n", n as i64)]);
        }
    }
    o.set("n_uu", lhs);
    o.set("q_minus_1_divides", rhs);
    Ok(Some(o))
}

fn prop_uu(r: &FiniteRing, ns: &[u64]) -> Result<Option<Outcome>> {
    let p = r.characteristic();
    if !crate::numtheory::is_prime(p) {
        return Ok(None);
    }
    let sel: Vec<u64> = ns.iter().copied().filter(|&n| (p - 1) % n == 0).collect();
    let mut o = Outcome::new(sel.clone());
    let us = units(r).list();
    let lhs = nuu_all(r, &sel);
    let mut rhs = Vec::with_capacity(sel.len());
    for (&n, &a) in sel.iter().zip(&lhs) {
        let m = n + 1;
        let bad = us
            .par_iter()
            .find_first(|&&u| !is_strongly_m_nil_clean_element(r, u, m).holds)
            .copied();
        let b = bad.is_none();
        if a != b {
            let mut w = vec![("n", n as i64)];
            if let Some(u) = bad {
                w.push(("u", u as i64));
            }
            o.fail(&w);
        }
        rhs.push(b);
    }
    o.set("n_uu", lhs);
    o.set("units_strongly_m_nil_clean", rhs);
    // π-UU against periodicity of every unit.
    let pi_uu = crate::predicates::is_pi_uu(r).holds;
    let periodic = us.iter().all(|&u| is_periodic_element(r, u).holds);
    if pi_uu != periodic {
        o.fail(&[("pi_uu", pi_uu as i64)]);
    }
    o.set("pi_uu", pi_uu);
    o.set("units_periodic", periodic);
    Ok(Some(o))
}

fn odd_2nil(r: &FiniteRing, ns: &[u64]) -> Result<Option<Outcome>> {
    let odd: Vec<u64> = ns.iter().copied().filter(|n| n % 2 == 1).collect();
    let mut o = Outcome::new(odd.clone());
    let (central, nil) = crate::predicates::two_is_central_nilpotent(r);
    let lhs = nuu_all(r, &odd);
    for (&n, &a) in odd.iter().zip(&lhs) {
        if a && !(central && nil) {
            o.fail(&[("n", n as i64)]);
        }
    }
    o.set("n_uu", lhs);
    o.set("two_central", central);
    o.set("two_nilpotent", nil);
    Ok(Some(o))
}

fn div_uu(r: &FiniteRing, ns: &[u64]) -> Result<Option<Outcome>> {
    let mut o = Outcome::new(ns.to_vec());
    let v = nuu_all(r, ns);
    for (i, &n) in ns.iter().enumerate() {
        for (j, &k) in ns.iter().enumerate() {
            if k % n == 0 && v[i] && !v[j] {
                o.fail(&[("n", n as i64), ("k", k as i64)]);
            }
        }
    }
    o.set("n_uu", v);
    Ok(Some(o))
}

fn odd_split(r: &FiniteRing, ns: &[u64]) -> Result<Option<Outcome>> {
    let odd: Vec<u64> = ns.iter().copied().filter(|n| n % 2 == 1).collect();
    let mut o = Outcome::new(odd.clone());
    let two_nil = is_nilpotent(r, r.from_int(2));
    let lhs = nuu_all(r, &odd);
    let rhs: Vec<bool> = odd
        .iter()
        .map(|&n| two_nil && (1..=4).all(|k| nuu(r, n << k)))
        .collect();
    for ((&n, &a), &b) in odd.iter().zip(&lhs).zip(&rhs) {
        if a != b {
            o.fail(&[("n", n as i64)]);
        }
    }
    o.set("n_uu", lhs);
    o.set("two_nilpotent_and_2k_n_uu", rhs);
    Ok(Some(o))
}

fn gcd_uu(r: &FiniteRing, ns: &[u64]) -> Result<Option<Outcome>> {
    let mut o = Outcome::new(ns.to_vec());
    let v = nuu_all(r, ns);
    for (i, &m) in ns.iter().enumerate() {
        for (j, &n) in ns.iter().enumerate().skip(i + 1) {
            if v[i] && v[j] {
                let d = gcd(m, n);
                if !nuu(r, d) {
                    o.fail(&[("m", m as i64), ("n", n as i64)]);
                }
            }
        }
    }
    o.set("n_uu", v);
    Ok(Some(o))
}

fn snc_nc(r: &Arc<FiniteRing>) -> Result<Option<Outcome>> {
    let mut o = Outcome::new(Vec::new());
    let snc = is_strongly_n_nil_clean(r, 2).holds;
    let nc = is_nil_clean(r).holds;
    let two_k = (1..=4).all(|k| nuu(r, 1 << k));
    if snc != (nc && two_k) {
        o.fail(&[("strongly_nil_clean", snc as i64)]);
    }
    o.set("strongly_nil_clean", snc);
    o.set("nil_clean", nc);
    o.set("two_k_uu", two_k);
    Ok(Some(o))
}

fn product_targets(corpus: &Corpus, guard: &ResourceGuard) -> Vec<Target> {
    let mut out: Vec<Target> = corpus_targets(corpus)
        .into_iter()
        .filter(|t| match &t.ring {
            Ok(r) => r.construction::<ProductRing>().is_some(),
            Err(_) => t.label.starts_with("Prod("),
        })
        .collect();
    let small: Vec<&Arc<FiniteRing>> = corpus
        .rings
        .iter()
        .filter_map(|c| c.finite())
        .filter(|r| r.size() <= PAIR_PRODUCT_LIMIT / 2)
        .collect();
    for (i, a) in small.iter().enumerate() {
        for b in &small[i + 1..] {
            if a.size() * b.size() > PAIR_PRODUCT_LIMIT {
                continue;
            }
            let label = format!("Prod({},{})", a.label(), b.label());
            if out.iter().any(|t| t.label == label) {
                continue;
            }
            out.push(Target {
                label,
                ring: product(&[(*a).clone(), (*b).clone()], guard),
            });
        }
    }
    out
}

fn closure_prod(r: &FiniteRing, ns: &[u64]) -> Result<Option<Outcome>> {
    let parts = &r.construction::<ProductRing>().expect("product target").components;
    let mut o = Outcome::new(ns.to_vec());
    let lhs = nuu_all(r, ns);
    let rhs: Vec<bool> = ns.iter().map(|&n| parts.iter().all(|p| nuu(p, n))).collect();
    for ((&n, &a), &b) in ns.iter().zip(&lhs).zip(&rhs) {
        if a != b {
            o.fail(&[("n", n as i64)]);
        }
    }
    o.set("product_n_uu", lhs);
    o.set("components_n_uu", rhs);
    Ok(Some(o))
}

fn closure_corner(r: &Arc<FiniteRing>, ns: &[u64], guard: &ResourceGuard) -> Result<Option<Outcome>> {
    let mut o = Outcome::new(ns.to_vec());
    let ring_v = nuu_all(r, ns);
    let cen = center(r);
    let ids: Vec<Code> = idempotents(r)
        .iter()
        .copied()
        .filter(|&e| e != r.zero() && e != r.one())
        .collect();
    let mut central = 0u64;
    for &e in &ids {
        let c = corner(r, e, guard)?;
        let cv = nuu_all(&c, ns);
        for ((&n, &a), &b) in ns.iter().zip(&ring_v).zip(&cv) {
            if a && !b {
                o.fail(&[("e", e as i64), ("n", n as i64)]);
            }
        }
        if cen.contains(e) {
            central += 1;
            let f = r.sub(r.one(), e);
            let c2 = corner(r, f, guard)?;
            for ((&n, &a), &b) in ns.iter().zip(&ring_v).zip(&cv) {
                if a != (b && nuu(&c2, n)) {
                    o.fail(&[("e", e as i64), ("n", n as i64)]);
                }
            }
        }
    }
    o.set("n_uu", ring_v);
    o.set("idempotents_checked", ids.len() as u64);
    o.set("central_idempotents", central);
    Ok(Some(o))
}

fn nil_quot(r: &Arc<FiniteRing>, ns: &[u64], guard: &ResourceGuard) -> Result<Option<Outcome>> {
    let mut o = Outcome::new(ns.to_vec());
    let ring_v = nuu_all(r, ns);
    let j = jacobson_radical(r);
    let j_nil = is_nil_ideal(r, j);
    if !j_nil {
        o.fail(&[("radical_nil", 0)]);
    }
    let q = quotient(r, j, guard)?;
    let qv = nuu_all(&q, ns);
    for ((&n, &a), &b) in ns.iter().zip(&ring_v).zip(&qv) {
        if a != b {
            o.fail(&[("n", n as i64)]);
        }
    }
    o.set("radical_nil", j_nil);
    o.set("n_uu", ring_v.clone());
    o.set("quotient_radical_n_uu", qv);
    if r.construction::<GroupRing>().is_some() {
        let delta = augmentation_ideal(r)?;
        let nil = is_nil_ideal(r, &delta);
        o.set("augmentation_nil", nil);
        if nil {
            let q = quotient(r, &delta, guard)?;
            let qv = nuu_all(&q, ns);
            for ((&n, &a), &b) in ns.iter().zip(&ring_v).zip(&qv) {
                if a != b {
                    o.fail(&[("n", n as i64), ("augmentation", 1)]);
                }
            }
            o.set("quotient_augmentation_n_uu", qv);
        }
    }
    Ok(Some(o))
}

fn neg_matrix(r: &Arc<FiniteRing>) -> Result<Option<Outcome>> {
    let k = r.construction::<MatrixRing>().expect("matrix instance").k;
    let ns: Vec<u64> = if k == 2 { vec![4, 5] } else { vec![3, 6] };
    let mut o = Outcome::new(ns.clone());
    let mut v = Vec::new();
    for &n in &ns {
        let verdict = is_n_uu(r, n);
        if verdict.holds {
            o.fail(&[("n", n as i64)]);
        }
        v.push(verdict.holds);
    }
    o.set("n_uu", v);
    Ok(Some(o))
}

/// The base rings a Morita-type construction is compared with, plus the n
/// for which the comparison is claimed.
fn morita_bases(r: &FiniteRing) -> Option<(&'static str, Vec<Arc<FiniteRing>>, fn(u64) -> bool)> {
    if let Some(k) = r.construction::<KsRing>() {
        let s = k.s_code;
        if center(&k.base).contains(s) && is_nilpotent(&k.base, s) {
            return Some(("ks_nilpotent", vec![k.base.clone()], morita_n));
        }
        if s == k.base.from_int(2) {
            return Some(("ks_two", vec![k.base.clone()], |n| n % 2 == 1));
        }
        return None;
    }
    if let Some(ft) = r.construction::<FormalTriangular>() {
        return Some(("formal_triangular", vec![ft.left.clone(), ft.right.clone()], morita_n));
    }
    if let Some(t) = r.construction::<TrivialExtension>() {
        return Some(("trivial_extension", vec![t.base.clone()], morita_n));
    }
    if let Some(t) = r.construction::<TriangularRing>() {
        return Some(("triangular", vec![t.base.clone()], morita_n));
    }
    if let Some(p) = r.construction::<PolyQuotient>() {
        return Some(("polynomial_quotient", vec![p.base.clone()], morita_n));
    }
    None
}

fn morita(r: &FiniteRing, ns: &[u64]) -> Result<Option<Outcome>> {
    let Some((kind, bases, applies)) = morita_bases(r) else {
        return Ok(None);
    };
    let sel: Vec<u64> = ns.iter().copied().filter(|&n| applies(n)).collect();
    let mut o = Outcome::new(sel.clone());
    let lhs = nuu_all(r, &sel);
    let rhs: Vec<bool> = sel.iter().map(|&n| bases.iter().all(|b| nuu(b, n))).collect();
    for ((&n, &a), &b) in sel.iter().zip(&lhs).zip(&rhs) {
        if a != b {
            o.fail(&[("n", n as i64)]);
        }
    }
    o.set("kind", kind);
    o.set("ring_n_uu", lhs);
    o.set("bases_n_uu", rhs);
    Ok(Some(o))
}

fn thm2(r: &FiniteRing, ns: &[u64]) -> Result<Option<Outcome>> {
    let (q, m) = matrix_params(r).expect("matrix instance");
    let l = lcm_criterion(q, m as u32)?;
    let sel: Vec<u64> = ns.iter().copied().filter(|&n| n >= 2).collect();
    let mut o = Outcome::new(sel.clone());
    let (mut c1, mut c2, mut c3) = (Vec::new(), Vec::new(), Vec::new());
    for &n in &sel {
        let iii = (n - 1) % l == 0;
        let ii = is_strongly_n_nil_clean(r, n).holds;
        let i = nuu(r, n - 1);
        if (iii && !ii) || (ii && !i) || (thm2_converse_n(n) && i && !iii) {
            o.fail(&[("n", n as i64)]);
        }
        c1.push(i);
        c2.push(ii);
        c3.push(iii);
    }
    o.set("lcm", l);
    o.set("i_n_minus_1_uu", c1);
    o.set("ii_strongly_n_nil_clean", c2);
    o.set("iii_lcm_divides", c3);
    Ok(Some(o))
}

fn groupring_nec(r: &FiniteRing, ns: &[u64]) -> Result<Option<Outcome>> {
    let Some(gr) = r.construction::<GroupRing>() else {
        return Ok(None);
    };
    let mut o = Outcome::new(ns.to_vec());
    let m = gr.base.characteristic();
    let orders: Vec<u64> = (0..gr.group.order() as u32).map(|g| gr.group.element_order(g)).collect();
    let (mut a, mut b, mut c) = (Vec::new(), Vec::new(), Vec::new());
    for &n in ns {
        let mut pi = prime_divisors(m);
        pi.extend(prime_divisors(n));
        pi.sort_unstable();
        pi.dedup();
        let rg = nuu(r, n);
        let base = nuu(&gr.base, n);
        let torsion = orders.iter().all(|&k| is_pi_number(k, &pi));
        if rg && !(base && torsion) {
            o.fail(&[("n", n as i64)]);
        }
        a.push(rg);
        b.push(base);
        c.push(torsion);
    }
    o.set("ring_n_uu", a);
    o.set("base_n_uu", b);
    o.set("pi_torsion", c);
    Ok(Some(o))
}

fn groupring_suf_targets(corpus: &Corpus, guard: &ResourceGuard) -> Vec<Target> {
    let mut out: Vec<Target> = corpus_targets(corpus)
        .into_iter()
        .filter(|t| match &t.ring {
            Ok(r) => r.construction::<GroupRing>().is_some(),
            Err(_) => t.label.starts_with("GR("),
        })
        .collect();
    for s in GROUPRING_SUF_PAIRS {
        if !out.iter().any(|t| t.label == s) {
            out.push(Target::fixed(s, guard));
        }
    }
    out
}

fn groupring_suf(r: &FiniteRing, ns: &[u64]) -> Result<Option<Outcome>> {
    let Some(gr) = r.construction::<GroupRing>() else {
        return Ok(None);
    };
    let mut o = Outcome::new(ns.to_vec());
    let p = gr.group.p_group_prime();
    let p_nil = p.is_some_and(|p| is_nilpotent(&gr.base, gr.base.from_int(p as i64)));
    let two_group = gr.group.order() == 1 || p == Some(2);
    let (mut a, mut h) = (Vec::new(), Vec::new());
    for &n in ns {
        let rg = nuu(r, n);
        let base = nuu(&gr.base, n);
        let hyp = base && p_nil;
        if hyp && !rg {
            o.fail(&[("n", n as i64)]);
        }
        if n % 2 == 1 && base && two_group && !rg {
            o.fail(&[("n", n as i64), ("odd_two_group", 1)]);
        }
        a.push(rg);
        h.push(hyp);
    }
    let rg_uu = nuu(r, 1);
    let base_uu = nuu(&gr.base, 1);
    if rg_uu != (base_uu && two_group) {
        o.fail(&[("uu", rg_uu as i64)]);
    }
    o.set("ring_n_uu", a);
    o.set("hypothesis", h);
    o.set("ring_uu", rg_uu);
    o.set("base_uu", base_uu);
    o.set("two_group", two_group);
    Ok(Some(o))
}

fn unipo(r: &Arc<FiniteRing>) -> Result<Option<Outcome>> {
    let mut o = Outcome::new(Vec::new());
    let nil: Vec<Code> = nilpotents(r).iter().collect();
    let mut max_exp = 0u64;
    for &a in &nil {
        let v = unipotent_order_check(r, a)?;
        max_exp = max_exp.max(v.exponent("exponent").unwrap_or(0));
        if !v.holds {
            o.fail(&[("a", a as i64)]);
        }
    }
    o.set("nilpotents", nil.len() as u64);
    o.set("max_exponent", max_exp);
    Ok(Some(o))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corpus(texts: &[&str]) -> Corpus {
        Corpus::from_text(&texts.join("\n"), &ResourceGuard::default()).unwrap()
    }

    #[test]
    fn suite_ids_round_trip() {
        for id in SuiteId::ALL {
            assert_eq!(id.name().parse::<SuiteId>().unwrap(), id);
        }
        assert_eq!("thm1-equiv".parse::<SuiteId>().unwrap(), SuiteId::Thm1Equiv);
        assert!("NOSUCH".parse::<SuiteId>().is_err());
    }

    #[test]
    fn thm1_on_spec_corpus() {
        let c = corpus(&[
            "Z(2)", "Z(3)", "Z(4)", "Z(5)", "Z(6)", "Z(7)", "Z(8)", "Z(9)", "Prod(Z(2),Z(3))", "M(2,Z(2))",
            "T(2,Z(2))", "GR(Z(2),C(2))",
        ]);
        let ns: Vec<u64> = (2..=9).collect();
        let res = run_suite(SuiteId::Thm1Equiv, &c, &ns, &ResourceGuard::default());
        assert!(res.holds(), "{:?}", res.failures);
        assert_eq!(res.records.len(), 12);
        // Z_3 is strongly 3-nil-clean, Z_5 is not.
        assert_eq!(res.records[1].conditions["c4"][1], Value::Bool(true));
        assert_eq!(res.records[3].conditions["c1"][1], Value::Bool(false));
    }

    #[test]
    fn matrix_lcm_records() {
        let res = run_suite(SuiteId::MatrixLcm, &Corpus::default(), &[], &ResourceGuard::default());
        assert!(res.holds(), "{:?}", res.failures);
        assert_eq!(res.records.len(), MATRIX_INSTANCES.len());
        let m22 = res.records.iter().find(|r| r.ring == "M(2,GF(2))").unwrap();
        assert_eq!(m22.conditions["uu_exponent"], Value::from(3u64));
        let m32 = res.records.iter().find(|r| r.ring == "M(2,GF(3))").unwrap();
        assert_eq!(m32.conditions["lcm"], Value::from(8u64));
    }

    #[test]
    fn size_exceeded_is_skipped_not_failed() {
        let c = Corpus::from_text("Z(4)\nM(2,Z(4))", &ResourceGuard::with_max_size(100)).unwrap();
        let res = run_suite(SuiteId::DivUu, &c, &[1, 2, 4], &ResourceGuard::with_max_size(100));
        assert!(res.holds());
        assert_eq!(res.skipped(), 1);
        assert!(res.records[1].skipped.is_some());
        let res = run_suite(SuiteId::NegMatrix, &c, &[], &ResourceGuard::with_max_size(100));
        assert!(res.holds());
        assert_eq!(res.skipped(), 3);
    }

    #[test]
    fn failures_carry_witnesses() {
        // A suite fed a ring that breaks its hypothesis-free claim cannot be
        // produced from real rings, so exercise the record plumbing directly.
        let t = [Target::fixed("Z(5)", &ResourceGuard::default())];
        let recs = evaluate(SuiteId::FieldUu, &t, |_| {
            let mut o = Outcome::new(vec![1]);
            o.fail(&[("n", 1)]);
            o.fail(&[("n", 2)]);
            Ok(Some(o))
        });
        assert!(recs[0].is_failure());
        assert_eq!(recs[0].witness, vec![Witness::new("n", 1)]);
    }

    #[test]
    fn group_ring_pairs_are_uu() {
        let res = run_suite(SuiteId::GroupRingSuf, &Corpus::default(), &[1], &ResourceGuard::default());
        assert!(res.holds(), "{:?}", res.failures);
        assert_eq!(res.records.len(), 4);
        for r in &res.records {
            assert_eq!(r.conditions["ring_uu"], Value::Bool(true), "{}", r.ring);
        }
    }

    #[test]
    fn n_sets() {
        let m: Vec<u64> = (1..=12).filter(|&n| morita_n(n)).collect();
        assert_eq!(m, vec![1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11]);
        let t: Vec<u64> = (2..=12).filter(|&n| thm2_converse_n(n)).collect();
        assert_eq!(t, vec![2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12]);
        assert!(!thm2_converse_n(13));
        assert!(thm2_converse_n(17));
    }
}
