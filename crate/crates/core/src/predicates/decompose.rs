//! Element-level searches: periodicity, n-nil-clean and π-regular
//! decompositions, unipotent orders and the augmentation map.

use std::time::Instant;

use crate::bitset::BitSet;
use crate::constructions::{GroupRing, IdealSet};
use crate::error::{Result, RingError};
use crate::invariants::{idempotents, n_potents, nilpotents, units};
use crate::numtheory::pow_mod;
use crate::ring::{Code, FiniteRing};
use crate::verdict::Verdict;

/// Least j, then least i > j, with a^i = a^j.
pub fn is_periodic_element(r: &FiniteRing, a: Code) -> Verdict {
    let start = Instant::now();
    // Brent: period of the sequence a, a^2, a^3, ...
    let mut power = 1u64;
    let mut lam = 1u64;
    let mut tortoise = a;
    let mut hare = r.mul(a, a);
    while tortoise != hare {
        if power == lam {
            tortoise = hare;
            power *= 2;
            lam = 0;
        }
        hare = r.mul(hare, a);
        lam += 1;
    }
    // Start of the cycle.
    let mut tortoise = a;
    let mut hare = r.pow(a, 1 + lam);
    let mut mu = 1u64;
    while tortoise != hare {
        tortoise = r.mul(tortoise, a);
        hare = r.mul(hare, a);
        mu += 1;
    }
    Verdict::pass()
        .with_witness("i", (mu + lam) as i64)
        .with_witness("j", mu as i64)
        .timed(start)
}

/// Minimal-code n-potent f with q = a - f nilpotent and fq = qf.
pub fn strongly_n_nil_clean_decompose(r: &FiniteRing, a: Code, n: u64) -> Verdict {
    let nil = nilpotents(r);
    for &f in n_potents(r, n).iter() {
        let q = r.sub(a, f);
        if nil.contains(q) && r.commute(f, q) {
            return Verdict::pass().with_witness("f", f).with_witness("q", q);
        }
    }
    Verdict::fail()
}

/// Minimal-code idempotent e with q = a - e nilpotent; no commutation.
pub fn nil_clean_decompose(r: &FiniteRing, a: Code) -> Verdict {
    let nil = nilpotents(r);
    for &e in idempotents(r).iter() {
        let q = r.sub(a, e);
        if nil.contains(q) {
            return Verdict::pass().with_witness("e", e).with_witness("q", q);
        }
    }
    Verdict::fail()
}

/// Whether a unit is strongly m-nil-clean as an element; same search as
/// [`strongly_n_nil_clean_decompose`].
pub fn is_strongly_m_nil_clean_element(r: &FiniteRing, a: Code, m: u64) -> Verdict {
    strongly_n_nil_clean_decompose(r, a, m)
}

/// Lexicographically least (e, u) with e idempotent, u a unit,
/// w = a - eu nilpotent and e, u, w pairwise commuting.
pub fn pi_regular_decompose(r: &FiniteRing, a: Code) -> Result<Verdict> {
    let nil = nilpotents(r);
    let u_list = units(r).list();
    for &e in idempotents(r).iter() {
        for &u in u_list {
            if !r.commute(e, u) {
                continue;
            }
            let w = r.sub(a, r.mul(e, u));
            if nil.contains(w) && r.commute(e, w) && r.commute(u, w) {
                return Ok(Verdict::pass()
                    .with_witness("e", e)
                    .with_witness("u", u)
                    .with_witness("w", w));
            }
        }
    }
    Err(RingError::DecompositionNotFound(a))
}

/// Least k >= 1 with a^k = 0.
pub fn nilpotency_index_of(r: &FiniteRing, a: Code) -> Option<u64> {
    if !nilpotents(r).contains(a) {
        return None;
    }
    let mut x = a;
    let mut k = 1;
    while x != r.zero() {
        x = r.mul(x, a);
        k += 1;
    }
    Some(k)
}

/// For nilpotent a with a^(s+1) = 0 and char m: (1 - a)^(m^s) = 1.
///
/// When m^s exceeds 2^62 the exponent is reduced modulo the multiplicative
/// order of 1 - a and the verdict carries `reduced = 1`.
pub fn unipotent_order_check(r: &FiniteRing, a: Code) -> Result<Verdict> {
    let start = Instant::now();
    let index = nilpotency_index_of(r, a)
        .ok_or_else(|| RingError::InvalidParameter(format!("#{a} is not nilpotent")))?;
    let s = index - 1;
    let m = r.characteristic();
    let b = r.sub(r.one(), a);
    let (exponent, reduced) = match m.checked_pow(s as u32).filter(|&e| e <= 1 << 62) {
        Some(e) => (e, false),
        None => {
            let ord = units(r)
                .order(b)
                .expect("1 - a is a unit when a is nilpotent");
            (pow_mod(m, s, ord), true)
        }
    };
    let v = Verdict::from_bool(r.pow(b, exponent) == r.one())
        .with_exponent("m", m)
        .with_exponent("s", s)
        .with_exponent("exponent", exponent)
        .with_exponent("reduced", reduced as u64);
    let v = if v.holds { v } else { v.with_witness("a", a) };
    Ok(v.timed(start))
}

fn group_ring(r: &FiniteRing) -> Result<&GroupRing> {
    r.construction::<GroupRing>()
        .ok_or(RingError::WrongRingKind { expected: "group ring" })
}

/// ω: sum of coefficients, as a code of the coefficient ring.
pub fn augmentation(r: &FiniteRing, x: Code) -> Result<Code> {
    Ok(group_ring(r)?.augmentation(x))
}

/// Δ(RG) = ker ω, verified to be a two-sided ideal.
pub fn augmentation_ideal(r: &FiniteRing) -> Result<IdealSet> {
    let gr = group_ring(r)?;
    let base_zero = gr.base.zero();
    let members = BitSet::from_fn(r.size(), |c| gr.augmentation(c) == base_zero);
    let gens = members.to_vec();
    IdealSet::from_members(r, members, gens)
}

/// Every member is nilpotent.
pub fn is_nil_ideal(r: &FiniteRing, ideal: &IdealSet) -> bool {
    ideal.members.is_subset(nilpotents(r))
}
