//! The finite-ring contract: dense element codes, total operations, and the
//! resource guard every construction consults before allocating.

use std::any::Any;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Result, RingError};
use crate::invariants::StructureCache;
use crate::verdict::{CheckMode, Verdict};

/// Dense element code, meaningful only relative to its owning ring.
pub type Code = u32;

/// Rings up to this size have their axioms checked over every triple.
pub const EXHAUSTIVE_AXIOM_LIMIT: usize = 4096;
/// Number of triples drawn above [`EXHAUSTIVE_AXIOM_LIMIT`].
pub const AXIOM_SAMPLE_TRIPLES: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingId(u64);

static NEXT_RING_ID: AtomicU64 = AtomicU64::new(1);

impl RingId {
    fn fresh() -> Self {
        RingId(NEXT_RING_ID.fetch_add(1, Ordering::Relaxed))
    }
}

/// An element handle tagged with its owning ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Elem {
    pub ring: RingId,
    pub code: Code,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResourceGuard {
    pub max_ring_size: usize,
    pub memo_budget_bytes: usize,
    pub threads: usize,
}

impl Default for ResourceGuard {
    fn default() -> Self {
        ResourceGuard {
            max_ring_size: 65536,
            memo_budget_bytes: 1 << 28,
            threads: 1,
        }
    }
}

impl ResourceGuard {
    pub fn with_max_size(max_ring_size: usize) -> Self {
        ResourceGuard {
            max_ring_size,
            ..Default::default()
        }
    }

    /// Rejects a projected size before anything is allocated.
    pub fn check(&self, projected: u128) -> Result<usize> {
        if projected > self.max_ring_size as u128 || projected > u32::MAX as u128 {
            return Err(RingError::SizeExceeded {
                projected,
                limit: self.max_ring_size,
            });
        }
        Ok(projected as usize)
    }

    /// `base^exp` as a projected size, saturating instead of overflowing.
    pub fn check_power(&self, base: usize, exp: u32) -> Result<usize> {
        let projected = (base as u128).checked_pow(exp).unwrap_or(u128::MAX);
        self.check(projected)
    }
}

/// Raw arithmetic of one construction. Implementations never see memo tables;
/// [`FiniteRing`] layers those on top.
pub trait RingOps: Send + Sync + fmt::Debug + 'static {
    fn size(&self) -> usize;
    fn add(&self, a: Code, b: Code) -> Code;
    fn mul(&self, a: Code, b: Code) -> Code;
    fn neg(&self, a: Code) -> Code;
    fn zero(&self) -> Code {
        0
    }
    fn one(&self) -> Code;
    fn label(&self) -> String;
    /// Structured rendering of an element (matrix entries, coefficients...).
    fn render(&self, a: Code) -> String {
        format!("#{a}")
    }
    fn as_any(&self) -> &dyn Any;
}

/// A finite unital ring with dense codes `0..size`.
///
/// Immutable after construction; memo tables are filled before the ring is
/// handed out and structural caches are published through `OnceLock`s.
pub struct FiniteRing {
    id: RingId,
    label: String,
    size: usize,
    zero: Code,
    one: Code,
    ops: Box<dyn RingOps>,
    add_table: Option<Vec<u16>>,
    mul_table: Option<Vec<u16>>,
    pub(crate) cache: StructureCache,
}

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteRing")
            .field("label", &self.label)
            .field("size", &self.size)
            .field("memo", &self.mul_table.is_some())
            .finish()
    }
}

impl FiniteRing {
    /// Wraps raw operations, building the memo tables when `size²` entries
    /// fit the guard's budget.
    pub fn new(ops: impl RingOps, guard: &ResourceGuard) -> Result<Arc<FiniteRing>> {
        let size = guard.check(ops.size() as u128)?;
        if size < 2 || ops.zero() == ops.one() {
            return Err(RingError::InvalidParameter(format!(
                "{} is the zero ring",
                ops.label()
            )));
        }
        let memo = size <= 1 << 16 && size * size * 2 <= guard.memo_budget_bytes;
        let (add_table, mul_table) = if memo {
            (
                Some(build_table(size, |a, b| ops.add(a, b))),
                Some(build_table(size, |a, b| ops.mul(a, b))),
            )
        } else {
            (None, None)
        };
        Ok(Arc::new(FiniteRing {
            id: RingId::fresh(),
            label: ops.label(),
            size,
            zero: ops.zero(),
            one: ops.one(),
            ops: Box::new(ops),
            add_table,
            mul_table,
            cache: StructureCache::default(),
        }))
    }

    pub fn id(&self) -> RingId {
        self.id
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn zero(&self) -> Code {
        self.zero
    }

    #[inline]
    pub fn one(&self) -> Code {
        self.one
    }

    pub fn codes(&self) -> std::ops::Range<Code> {
        0..self.size as Code
    }

    pub fn is_memoized(&self) -> bool {
        self.mul_table.is_some()
    }

    pub fn ops(&self) -> &dyn RingOps {
        self.ops.as_ref()
    }

    /// Downcasts the underlying construction.
    pub fn construction<T: 'static>(&self) -> Option<&T> {
        self.ops.as_any().downcast_ref::<T>()
    }

    pub fn render(&self, a: Code) -> String {
        self.ops.render(a)
    }

    #[inline]
    pub fn add(&self, a: Code, b: Code) -> Code {
        match &self.add_table {
            Some(t) => t[a as usize * self.size + b as usize] as Code,
            None => self.ops.add(a, b),
        }
    }

    #[inline]
    pub fn mul(&self, a: Code, b: Code) -> Code {
        match &self.mul_table {
            Some(t) => t[a as usize * self.size + b as usize] as Code,
            None => self.ops.mul(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: Code) -> Code {
        self.ops.neg(a)
    }

    #[inline]
    pub fn sub(&self, a: Code, b: Code) -> Code {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn commute(&self, a: Code, b: Code) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    /// `a^k` by square-and-multiply; `a^0 = 1`.
    pub fn pow(&self, a: Code, mut k: u64) -> Code {
        let mut acc = self.one;
        let mut base = a;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(base, base);
            }
        }
        acc
    }

    /// `k·a`, the k-fold sum, by doubling.
    pub fn times(&self, a: Code, mut k: u64) -> Code {
        let mut acc = self.zero;
        let mut base = a;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(acc, base);
            }
            k >>= 1;
            if k > 0 {
                base = self.add(base, base);
            }
        }
        acc
    }

    /// Image of an integer under `Z -> R`.
    pub fn from_int(&self, k: i64) -> Code {
        let v = self.times(self.one, k.unsigned_abs());
        if k < 0 {
            self.neg(v)
        } else {
            v
        }
    }

    /// Additive order of one.
    pub fn characteristic(&self) -> u64 {
        let mut x = self.one;
        let mut k = 1;
        while x != self.zero {
            x = self.add(x, self.one);
            k += 1;
        }
        k
    }

    pub fn elem(&self, code: u64) -> Result<Elem> {
        if code >= self.size as u64 {
            return Err(RingError::CodeOutOfRange {
                code,
                size: self.size,
            });
        }
        Ok(Elem {
            ring: self.id,
            code: code as Code,
        })
    }

    fn own(&self, e: Elem) -> Result<Code> {
        if e.ring != self.id {
            return Err(RingError::ForeignElement);
        }
        Ok(e.code)
    }

    fn wrap(&self, code: Code) -> Elem {
        Elem {
            ring: self.id,
            code,
        }
    }

    pub fn add_elem(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.wrap(self.add(self.own(a)?, self.own(b)?)))
    }

    pub fn mul_elem(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.wrap(self.mul(self.own(a)?, self.own(b)?)))
    }

    pub fn neg_elem(&self, a: Elem) -> Result<Elem> {
        Ok(self.wrap(self.neg(self.own(a)?)))
    }

    pub fn pow_elem(&self, a: Elem, k: u64) -> Result<Elem> {
        Ok(self.wrap(self.pow(self.own(a)?, k)))
    }

    /// Greedy additive generating set in ascending code order.
    pub fn additive_generators(&self) -> Vec<Code> {
        let mut span = crate::bitset::BitSet::new(self.size);
        span.insert(self.zero);
        let mut members = vec![self.zero];
        let mut gens = Vec::new();
        for x in self.codes() {
            if span.contains(x) {
                continue;
            }
            gens.push(x);
            let mut frontier = members.clone();
            while let Some(m) = frontier.pop() {
                let y = self.add(m, x);
                if span.insert(y) {
                    members.push(y);
                    frontier.push(y);
                }
            }
        }
        gens
    }

    /// Checks the ring axioms; exhaustive up to [`EXHAUSTIVE_AXIOM_LIMIT`],
    /// otherwise on a seeded sample of [`AXIOM_SAMPLE_TRIPLES`] triples.
    pub fn verify_ring_axioms(&self, seed: u64) -> Verdict {
        let start = Instant::now();
        let n = self.size as Code;
        if self.zero == self.one {
            return Verdict::fail().with_witness("a", self.one).timed(start);
        }
        let pair_fault = (0..n).into_par_iter().find_map_first(|a| {
            if self.add(a, self.neg(a)) != self.zero
                || self.add(a, self.zero) != a
                || self.mul(a, self.one) != a
                || self.mul(self.one, a) != a
            {
                return Some(vec![a]);
            }
            (0..n)
                .find(|&b| self.add(a, b) != self.add(b, a))
                .map(|b| vec![a, b])
        });
        if let Some(w) = pair_fault {
            return fault_verdict(w, CheckMode::Exhaustive).timed(start);
        }

        if self.size <= EXHAUSTIVE_AXIOM_LIMIT {
            let fault = (0..n).into_par_iter().find_map_first(|a| {
                for b in 0..n {
                    let ab = self.mul(a, b);
                    let a_plus_b = self.add(a, b);
                    for c in 0..n {
                        if self.triple_fault(a, b, c, ab, a_plus_b) {
                            return Some(vec![a, b, c]);
                        }
                    }
                }
                None
            });
            match fault {
                Some(w) => fault_verdict(w, CheckMode::Exhaustive),
                None => Verdict::pass(),
            }
            .timed(start)
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..AXIOM_SAMPLE_TRIPLES {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if self.triple_fault(a, b, c, self.mul(a, b), self.add(a, b)) {
                    return fault_verdict(vec![a, b, c], CheckMode::Sampled).timed(start);
                }
            }
            Verdict::pass().with_mode(CheckMode::Sampled).timed(start)
        }
    }

    #[inline]
    fn triple_fault(&self, a: Code, b: Code, c: Code, ab: Code, a_plus_b: Code) -> bool {
        self.mul(ab, c) != self.mul(a, self.mul(b, c))
            || self.add(a_plus_b, c) != self.add(a, self.add(b, c))
            || self.mul(a, self.add(b, c)) != self.add(ab, self.mul(a, c))
            || self.mul(a_plus_b, c) != self.add(self.mul(a, c), self.mul(b, c))
    }
}

fn fault_verdict(witness: Vec<Code>, mode: CheckMode) -> Verdict {
    let roles = ["a", "b", "c"];
    witness
        .into_iter()
        .zip(roles)
        .fold(Verdict::fail().with_mode(mode), |v, (code, role)| {
            v.with_witness(role, code)
        })
}

fn build_table(size: usize, op: impl Fn(Code, Code) -> Code + Sync) -> Vec<u16> {
    let mut table = vec![0u16; size * size];
    table
        .par_chunks_mut(size)
        .enumerate()
        .for_each(|(a, row)| {
            for (b, slot) in row.iter_mut().enumerate() {
                *slot = op(a as Code, b as Code) as u16;
            }
        });
    table
}

/// Either an enumerable finite ring or the restricted handle for ℤ.
#[derive(Debug, Clone)]
pub enum RingHandle {
    Finite(Arc<FiniteRing>),
    Integers,
}

impl RingHandle {
    pub fn label(&self) -> String {
        match self {
            RingHandle::Finite(r) => r.label().to_string(),
            RingHandle::Integers => "Z".to_string(),
        }
    }

    pub fn finite(&self, op: &'static str) -> Result<&Arc<FiniteRing>> {
        match self {
            RingHandle::Finite(r) => Ok(r),
            RingHandle::Integers => Err(RingError::UnsupportedPredicate(op)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::zmod;

    #[derive(Debug)]
    struct BrokenIdentity;

    impl RingOps for BrokenIdentity {
        fn size(&self) -> usize {
            4
        }
        fn add(&self, a: Code, b: Code) -> Code {
            (a + b) % 4
        }
        fn mul(&self, a: Code, b: Code) -> Code {
            if a == 1 && b == 1 {
                0
            } else {
                (a * b) % 4
            }
        }
        fn neg(&self, a: Code) -> Code {
            (4 - a) % 4
        }
        fn one(&self) -> Code {
            1
        }
        fn label(&self) -> String {
            "broken".into()
        }
        fn as_any(&self) -> &dyn Any {
            self
        }
    }

    #[test]
    fn pow_examples() {
        let z12 = zmod(12, &ResourceGuard::default()).unwrap();
        assert_eq!(z12.pow(3, 2), 9);
        assert_eq!(z12.pow(5, 2), 1);
        for a in z12.codes() {
            assert_eq!(z12.pow(a, 0), 1);
        }
    }

    #[test]
    fn pow_oracle_matches_modular_arithmetic() {
        let z12 = zmod(12, &ResourceGuard::default()).unwrap();
        for a in 0..12u64 {
            for k in 0..20u64 {
                let expected = crate::numtheory::pow_mod(a, k, 12);
                assert_eq!(z12.pow(a as Code, k) as u64, expected);
            }
        }
    }

    #[test]
    fn characteristic_of_zmod() {
        let z12 = zmod(12, &ResourceGuard::default()).unwrap();
        assert_eq!(z12.characteristic(), 12);
    }

    #[test]
    fn corrupted_identity_is_caught() {
        let r = FiniteRing::new(BrokenIdentity, &ResourceGuard::default()).unwrap();
        let v = r.verify_ring_axioms(0);
        assert!(!v.holds);
        assert_eq!(v.witness_value("a"), Some(1));
    }

    #[test]
    fn foreign_elements_are_rejected() {
        let g = ResourceGuard::default();
        let a = zmod(5, &g).unwrap();
        let b = zmod(5, &g).unwrap();
        let x = a.elem(2).unwrap();
        let y = b.elem(3).unwrap();
        assert_eq!(a.mul_elem(x, y), Err(RingError::ForeignElement));
        assert_eq!(a.mul_elem(x, x).unwrap().code, 4);
        assert!(a.elem(5).is_err());
    }

    #[test]
    fn guard_rejects_before_building() {
        let g = ResourceGuard::with_max_size(10);
        assert!(matches!(
            zmod(11, &g),
            Err(RingError::SizeExceeded { projected: 11, limit: 10 })
        ));
        assert!(g.check_power(3, 100).is_err());
    }

    #[test]
    fn memo_is_transparent() {
        let memo = zmod(9, &ResourceGuard::default()).unwrap();
        let plain = zmod(
            9,
            &ResourceGuard {
                memo_budget_bytes: 0,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(memo.is_memoized());
        assert!(!plain.is_memoized());
        for a in 0..9 {
            for b in 0..9 {
                assert_eq!(memo.mul(a, b), plain.mul(a, b));
                assert_eq!(memo.add(a, b), plain.add(a, b));
            }
        }
    }
}
