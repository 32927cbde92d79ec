//! Structural sets and exponents of a finite ring, cached per ring.
//!
//! Caches are filled outside the `OnceLock` initialiser (compute, then
//! `set`), so a rayon worker that re-enters a cache while helping with a
//! parallel computation never blocks on itself. Concurrent first calls may
//! compute twice; the results are identical and the first one wins.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use crate::bitset::BitSet;
use crate::constructions::{ideal_closure, IdealSet};
use crate::error::{Result, RingError};
use crate::numtheory::{divisors, lcm};
use crate::ring::{Code, FiniteRing, RingHandle};

#[derive(Debug, Default)]
pub struct StructureCache {
    units: OnceLock<UnitGroup>,
    nilpotents: OnceLock<BitSet>,
    radical: OnceLock<IdealSet>,
    center: OnceLock<BitSet>,
    unipotence: OnceLock<Vec<u64>>,
    n_potents: Mutex<HashMap<u64, Arc<Vec<Code>>>>,
}

fn cached<T>(cell: &OnceLock<T>, compute: impl FnOnce() -> T) -> &T {
    if let Some(v) = cell.get() {
        return v;
    }
    let v = compute();
    let _ = cell.set(v);
    cell.get().expect("just set")
}

/// U(R) with inverses and multiplicative orders.
#[derive(Debug, Clone)]
pub struct UnitGroup {
    members: BitSet,
    list: Vec<Code>,
    /// Indexed by code; `Code::MAX` for non-units.
    inverse: Vec<Code>,
    /// Indexed like `list`.
    order: Vec<u64>,
}

impl UnitGroup {
    pub fn contains(&self, a: Code) -> bool {
        self.members.contains(a)
    }

    /// Units in ascending code order.
    pub fn list(&self) -> &[Code] {
        &self.list
    }

    pub fn members(&self) -> &BitSet {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    pub fn inverse(&self, a: Code) -> Option<Code> {
        match self.inverse[a as usize] {
            Code::MAX => None,
            v => Some(v),
        }
    }

    /// Multiplicative order of a unit.
    pub fn order(&self, u: Code) -> Option<u64> {
        self.list.binary_search(&u).ok().map(|i| self.order[i])
    }

    /// Exponent of U(R).
    pub fn exponent(&self) -> u64 {
        self.order.iter().fold(1, |acc, &o| lcm(acc, o))
    }
}

/// Brent cycle detection on `k -> a^k`, returning the period of the tail.
/// `a` is a unit exactly when the sequence is purely periodic, i.e. when
/// `a^period = 1`.
fn power_period(r: &FiniteRing, a: Code) -> u64 {
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
    lam
}

fn compute_units(r: &FiniteRing) -> UnitGroup {
    let found: Vec<Option<(Code, Code, u64)>> = r
        .codes()
        .into_par_iter()
        .map(|a| {
            let period = power_period(r, a);
            if r.pow(a, period) != r.one() {
                return None;
            }
            let inv = r.pow(a, period - 1);
            assert!(
                r.mul(a, inv) == r.one() && r.mul(inv, a) == r.one(),
                "inverse of #{a} failed verification in {}",
                r.label()
            );
            Some((a, inv, period))
        })
        .collect();
    let mut inverse = vec![Code::MAX; r.size()];
    let mut list = Vec::new();
    let mut order = Vec::new();
    for (a, inv, period) in found.into_iter().flatten() {
        inverse[a as usize] = inv;
        list.push(a);
        order.push(period);
    }
    UnitGroup {
        members: BitSet::from_codes(r.size(), list.iter().copied()),
        list,
        inverse,
        order,
    }
}

pub fn units(r: &FiniteRing) -> &UnitGroup {
    cached(&r.cache.units, || compute_units(r))
}

/// Number of squarings that reaches exponent >= N.
fn squarings(n: usize) -> u32 {
    usize::BITS - (n - 1).leading_zeros()
}

pub fn nilpotents(r: &FiniteRing) -> &BitSet {
    cached(&r.cache.nilpotents, || {
        let k = squarings(r.size());
        let flags: Vec<bool> = r
            .codes()
            .into_par_iter()
            .map(|a| {
                let mut x = a;
                for _ in 0..k {
                    if x == r.zero() {
                        break;
                    }
                    x = r.mul(x, x);
                }
                x == r.zero()
            })
            .collect();
        BitSet::from_fn(r.size(), |c| flags[c as usize])
    })
}

pub fn is_nilpotent(r: &FiniteRing, a: Code) -> bool {
    nilpotents(r).contains(a)
}

/// All f with f^n = f, ascending.
pub fn n_potents(r: &FiniteRing, n: u64) -> Arc<Vec<Code>> {
    if let Some(v) = r.cache.n_potents.lock().expect("cache lock").get(&n) {
        return v.clone();
    }
    let list: Vec<Code> = r
        .codes()
        .into_par_iter()
        .filter(|&a| r.pow(a, n) == a)
        .collect();
    let list = Arc::new(list);
    r.cache
        .n_potents
        .lock()
        .expect("cache lock")
        .entry(n)
        .or_insert(list)
        .clone()
}

pub fn idempotents(r: &FiniteRing) -> Arc<Vec<Code>> {
    n_potents(r, 2)
}

/// J(R) = {a : 1 - ra is a unit for every r}. Members are nilpotent in a
/// finite ring, so only nilpotents are tested.
pub fn jacobson_radical(r: &FiniteRing) -> &IdealSet {
    cached(&r.cache.radical, || {
        let u = units(r);
        let candidates: Vec<Code> = nilpotents(r).iter().collect();
        let members: Vec<Code> = candidates
            .into_par_iter()
            .filter(|&a| r.codes().all(|x| u.contains(r.sub(r.one(), r.mul(x, a)))))
            .collect();
        let set = BitSet::from_codes(r.size(), members.iter().copied());
        let closure = ideal_closure(r, &members);
        assert!(closure.members == set, "radical of {} is not an ideal", r.label());
        assert!(
            nilpotency_index(r, &members).is_some(),
            "radical of {} is not nilpotent",
            r.label()
        );
        IdealSet {
            ring: r.id(),
            members: set,
            gens: members,
        }
    })
}

/// Least k with I^k = 0 for the ideal spanned by `ideal`, or None if the
/// powers stabilise above zero.
pub fn nilpotency_index(r: &FiniteRing, ideal: &[Code]) -> Option<u32> {
    let base = ideal_closure(r, ideal);
    let base_gens = span_generators(r, &base.elements());
    let mut current = base.clone();
    let mut k = 1;
    loop {
        if current.len() == 1 {
            return Some(k);
        }
        let cur_gens = span_generators(r, &current.elements());
        let products: Vec<Code> = cur_gens
            .iter()
            .flat_map(|&x| base_gens.iter().map(move |&y| r.mul(x, y)))
            .collect();
        let next = ideal_closure(r, &products);
        if next.len() == current.len() {
            return None;
        }
        current = next;
        k += 1;
    }
}

fn span_generators(r: &FiniteRing, elements: &[Code]) -> Vec<Code> {
    let mut span = BitSet::new(r.size());
    span.insert(r.zero());
    let mut members = vec![r.zero()];
    let mut gens = Vec::new();
    for &y in elements {
        if span.contains(y) {
            continue;
        }
        gens.push(y);
        let base = members.clone();
        let mut m = y;
        while !span.contains(m) {
            for &b in &base {
                let z = r.add(b, m);
                if span.insert(z) {
                    members.push(z);
                }
            }
            m = r.add(m, y);
        }
    }
    gens
}

pub fn center(r: &FiniteRing) -> &BitSet {
    cached(&r.cache.center, || {
        let gens = r.additive_generators();
        let flags: Vec<bool> = r
            .codes()
            .into_par_iter()
            .map(|c| gens.iter().all(|&g| r.commute(c, g)))
            .collect();
        BitSet::from_fn(r.size(), |c| flags[c as usize])
    })
}

pub fn is_commutative(r: &FiniteRing) -> bool {
    center(r).len() == r.size()
}

/// Least d with u^d - 1 nilpotent, for every unit in list order. The
/// multiplicative order always works, so d divides it.
fn unipotence_table(r: &FiniteRing) -> &Vec<u64> {
    cached(&r.cache.unipotence, || {
        let u = units(r);
        let nil = nilpotents(r);
        u.list
            .par_iter()
            .zip(u.order.par_iter())
            .map(|(&a, &ord)| {
                divisors(ord)
                    .into_iter()
                    .find(|&d| nil.contains(r.sub(r.pow(a, d), r.one())))
                    .expect("the order is always a unipotence exponent")
            })
            .collect()
    })
}

/// d_u for a unit `u`.
pub fn unipotence_exponent(r: &FiniteRing, u: Code) -> Result<u64> {
    let group = units(r);
    let i = group
        .list
        .binary_search(&u)
        .map_err(|_| RingError::InvalidParameter(format!("#{u} is not a unit of {}", r.label())))?;
    Ok(unipotence_table(r)[i])
}

/// Pairs (u, d_u) in ascending unit order.
pub fn unipotence_exponents(r: &FiniteRing) -> Vec<(Code, u64)> {
    units(r).list.iter().copied().zip(unipotence_table(r).iter().copied()).collect()
}

/// lcm of all d_u: R is n-UU exactly when this divides n.
pub fn uu_exponent(r: &FiniteRing) -> u64 {
    unipotence_table(r).iter().fold(1, |acc, &d| lcm(acc, d))
}

/// [`uu_exponent`] that also accepts ℤ, whose only non-trivial unit is -1.
pub fn uu_exponent_of(h: &RingHandle) -> u64 {
    match h {
        RingHandle::Finite(r) => uu_exponent(r),
        RingHandle::Integers => 2,
    }
}
