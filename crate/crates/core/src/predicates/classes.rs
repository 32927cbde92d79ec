//! Ring-class predicates: n-UU and friends, nil-cleanness, and the six
//! equivalent conditions of the strongly n-nil-clean characterisation.

use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Result, RingError};
use crate::invariants::{idempotents, n_potents, nilpotents, units, uu_exponent, uu_exponent_of};
use crate::numtheory::{lcm, prime_power};
use crate::predicates::decompose::{pi_regular_decompose, strongly_n_nil_clean_decompose};
use crate::ring::{Code, FiniteRing, RingHandle};
use crate::verdict::Verdict;

/// Every unit u has u^n - 1 nilpotent. Cross-checked against the
/// uu-exponent: the two must agree.
pub fn is_n_uu(r: &FiniteRing, n: u64) -> Verdict {
    assert!(n >= 1, "n-UU needs n >= 1");
    let start = Instant::now();
    let nil = nilpotents(r);
    let fail = units(r)
        .list()
        .par_iter()
        .find_first(|&&u| !nil.contains(r.sub(r.pow(u, n), r.one())))
        .copied();
    let d = uu_exponent(r);
    assert_eq!(
        fail.is_none(),
        n % d == 0,
        "n-UU scan and uu-exponent disagree on {} at n = {n}",
        r.label()
    );
    let v = match fail {
        None => Verdict::pass(),
        Some(u) => Verdict::fail().with_witness("u", u),
    };
    v.with_exponent("uu_exponent", d).timed(start)
}

/// [`is_n_uu`] that also accepts ℤ (units ±1, no non-zero nilpotents).
pub fn is_n_uu_any(h: &RingHandle, n: u64) -> Verdict {
    match h {
        RingHandle::Finite(r) => is_n_uu(r, n),
        RingHandle::Integers => {
            let oracle = crate::constructions::integers_oracle();
            let v = match oracle.units().into_iter().find(|&u| !oracle.unit_power_is_unipotent(u, n)) {
                None => Verdict::pass(),
                Some(u) => Verdict::fail().with_witness("u", u),
            };
            v.with_exponent("uu_exponent", uu_exponent_of(h))
        }
    }
}

pub fn is_uu(r: &FiniteRing) -> Verdict {
    is_n_uu(r, 1)
}

/// Some unit-dependent power of every unit is unipotent. Always true on a
/// finite ring; the exponent reported is lcm of the d_u.
pub fn is_pi_uu(r: &FiniteRing) -> Verdict {
    let start = Instant::now();
    Verdict::pass().with_exponent("uu_exponent", uu_exponent(r)).timed(start)
}

pub fn is_pi_uu_any(h: &RingHandle) -> Verdict {
    match h {
        RingHandle::Finite(r) => is_pi_uu(r),
        RingHandle::Integers => Verdict::pass().with_exponent("uu_exponent", 2),
    }
}

/// a - a^n is nilpotent for every a (n >= 2).
pub fn is_strongly_n_nil_clean(r: &FiniteRing, n: u64) -> Verdict {
    assert!(n >= 2, "strongly n-nil-clean needs n >= 2");
    let start = Instant::now();
    let nil = nilpotents(r);
    let codes: Vec<Code> = r.codes().collect();
    let fail = codes
        .par_iter()
        .find_first(|&&a| !nil.contains(r.sub(a, r.pow(a, n))))
        .copied();
    match fail {
        None => Verdict::pass(),
        Some(a) => Verdict::fail().with_witness("a", a),
    }
    .timed(start)
}

/// Every element is an idempotent plus a nilpotent, not necessarily
/// commuting.
pub fn is_nil_clean(r: &FiniteRing) -> Verdict {
    let start = Instant::now();
    let nil: Vec<Code> = nilpotents(r).iter().collect();
    let mut covered = crate::bitset::BitSet::new(r.size());
    for &e in idempotents(r).iter() {
        for &q in &nil {
            covered.insert(r.add(e, q));
        }
    }
    match r.codes().find(|&a| !covered.contains(a)) {
        None => Verdict::pass(),
        Some(a) => Verdict::fail().with_witness("a", a),
    }
    .timed(start)
}

/// The element 2 = 1 + 1: (central, nilpotent).
pub fn two_is_central_nilpotent(r: &FiniteRing) -> (bool, bool) {
    let two = r.from_int(2);
    let central = r.codes().all(|x| r.commute(two, x));
    (central, nilpotents(r).contains(two))
}

/// lcm(q^i - 1 : 1 <= i <= m).
pub fn lcm_criterion(q: u64, m: u32) -> Result<u64> {
    if prime_power(q).is_none() {
        return Err(RingError::NotAPrimePower(q));
    }
    if m == 0 {
        return Err(RingError::InvalidParameter("matrix size must be >= 1".into()));
    }
    (1..=m).try_fold(1u64, |acc, i| {
        let t = q
            .checked_pow(i)
            .ok_or_else(|| RingError::InvalidParameter(format!("{q}^{i} overflows")))?;
        Ok(lcm(acc, t - 1))
    })
}

/// Which of the six equivalent conditions of the strongly n-nil-clean
/// characterisation to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Thm1Condition {
    /// Every a is an n-potent plus a commuting nilpotent.
    Decomposition,
    /// a = ev + b, e idempotent, v an n-potent unit, b nilpotent, ab = ba, ev = ve.
    CommutingUnitForm,
    /// As above with ve = eve in place of ev = ve.
    CornerUnitForm,
    /// a - a^n nilpotent.
    PowerDifference,
    /// a^(n-1) is strongly nil-clean.
    PowerNilClean,
    /// Strongly π-regular and (n-1)-UU.
    PiRegularUu,
}

impl Thm1Condition {
    pub const ALL: [Thm1Condition; 6] = [
        Thm1Condition::Decomposition,
        Thm1Condition::CommutingUnitForm,
        Thm1Condition::CornerUnitForm,
        Thm1Condition::PowerDifference,
        Thm1Condition::PowerNilClean,
        Thm1Condition::PiRegularUu,
    ];

    pub fn from_index(i: u8) -> Option<Self> {
        Self::ALL.get((i as usize).checked_sub(1)?).copied()
    }

    pub fn index(self) -> u8 {
        Self::ALL.iter().position(|&c| c == self).unwrap() as u8 + 1
    }
}

fn first_failure(r: &FiniteRing, ok: impl Fn(Code) -> bool + Sync) -> Verdict {
    let codes: Vec<Code> = r.codes().collect();
    match codes.par_iter().find_first(|&&a| !ok(a)) {
        None => Verdict::pass(),
        Some(&a) => Verdict::fail().with_witness("a", a),
    }
}

/// Evaluates one condition exactly as stated, for n >= 2.
pub fn thm1_condition(r: &FiniteRing, n: u64, which: Thm1Condition) -> Result<Verdict> {
    if n < 2 {
        return Err(RingError::InvalidParameter("condition needs n >= 2".into()));
    }
    let start = Instant::now();
    let nil = nilpotents(r);
    let v = match which {
        Thm1Condition::Decomposition => {
            first_failure(r, |a| strongly_n_nil_clean_decompose(r, a, n).holds)
        }
        Thm1Condition::CommutingUnitForm | Thm1Condition::CornerUnitForm => {
            let ids = idempotents(r);
            let u = units(r);
            let vs: Vec<Code> = n_potents(r, n).iter().copied().filter(|&v| u.contains(v)).collect();
            let corner = which == Thm1Condition::CornerUnitForm;
            first_failure(r, |a| {
                ids.iter().any(|&e| {
                    vs.iter().any(|&v| {
                        let ev = r.mul(e, v);
                        let side = if corner {
                            r.mul(v, e) == r.mul(ev, e)
                        } else {
                            ev == r.mul(v, e)
                        };
                        if !side {
                            return false;
                        }
                        let b = r.sub(a, ev);
                        nil.contains(b) && r.commute(a, b)
                    })
                })
            })
        }
        Thm1Condition::PowerDifference => is_strongly_n_nil_clean(r, n),
        Thm1Condition::PowerNilClean => {
            first_failure(r, |a| strongly_n_nil_clean_decompose(r, r.pow(a, n - 1), 2).holds)
        }
        Thm1Condition::PiRegularUu => {
            for a in r.codes() {
                pi_regular_decompose(r, a)?;
            }
            is_n_uu(r, n - 1)
        }
    };
    Ok(v.timed(start))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{gf, matrix, zmod};
    use crate::ring::ResourceGuard;

    fn g() -> ResourceGuard {
        ResourceGuard::default()
    }

    #[test]
    fn n_uu_examples() {
        let z5 = zmod(5, &g()).unwrap();
        assert!(is_n_uu(&z5, 8).holds);
        let v = is_n_uu(&z5, 6);
        assert!(!v.holds);
        assert_eq!(v.witness_value("u"), Some(2));
        let m = matrix(&zmod(2, &g()).unwrap(), 2, &g()).unwrap();
        assert!(is_n_uu(&m, 3).holds);
        assert!(is_uu(&zmod(2, &g()).unwrap()).holds);
        assert!(is_uu(&zmod(4, &g()).unwrap()).holds);
        let v = is_uu(&z5);
        assert_eq!(v.witness_value("u"), Some(2));
    }

    #[test]
    fn integers_row() {
        let z = RingHandle::Integers;
        assert!(is_n_uu_any(&z, 2).holds);
        let v = is_n_uu_any(&z, 3);
        assert!(!v.holds);
        assert_eq!(v.witness_value("u"), Some(-1));
        assert!(!is_n_uu_any(&z, 1).holds);
        assert!(is_n_uu_any(&z, 6).holds);
        assert!(is_n_uu_any(&z, 8).holds);
        assert!(is_pi_uu_any(&z).holds);
    }

    #[test]
    fn pi_uu_reports_exponent() {
        let z7 = zmod(7, &g()).unwrap();
        let v = is_pi_uu(&z7);
        assert!(v.holds);
        assert_eq!(6 % v.exponent("uu_exponent").unwrap(), 0);
    }

    #[test]
    fn strongly_n_nil_clean_examples() {
        assert!(is_strongly_n_nil_clean(&zmod(3, &g()).unwrap(), 3).holds);
        let m = matrix(&zmod(2, &g()).unwrap(), 2, &g()).unwrap();
        assert!(is_strongly_n_nil_clean(&m, 4).holds);
        let v = is_strongly_n_nil_clean(&zmod(5, &g()).unwrap(), 2);
        assert_eq!(v.witness_value("a"), Some(2));
    }

    #[test]
    fn nil_clean_examples() {
        assert!(is_nil_clean(&zmod(4, &g()).unwrap()).holds);
        assert_eq!(is_nil_clean(&zmod(3, &g()).unwrap()).witness_value("a"), Some(2));
        let m = matrix(&zmod(2, &g()).unwrap(), 2, &g()).unwrap();
        assert!(is_nil_clean(&m).holds);
    }

    #[test]
    fn lcm_criterion_examples() {
        assert_eq!(lcm_criterion(2, 2).unwrap(), 3);
        assert_eq!(lcm_criterion(3, 2).unwrap(), 8);
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            assert_eq!(lcm_criterion(q, 1).unwrap(), q - 1);
        }
        assert!(lcm_criterion(6, 2).is_err());
    }

    #[test]
    fn thm1_examples() {
        let z3 = zmod(3, &g()).unwrap();
        assert!(thm1_condition(&z3, 3, Thm1Condition::PowerDifference).unwrap().holds);
        let m = matrix(&zmod(2, &g()).unwrap(), 2, &g()).unwrap();
        assert!(thm1_condition(&m, 4, Thm1Condition::PiRegularUu).unwrap().holds);
        let z5 = zmod(5, &g()).unwrap();
        for c in Thm1Condition::ALL {
            assert!(!thm1_condition(&z5, 3, c).unwrap().holds, "{c:?}");
            assert!(thm1_condition(&z5, 5, c).unwrap().holds, "{c:?}");
        }
        assert!(thm1_condition(&z5, 1, Thm1Condition::PowerDifference).is_err());
        assert_eq!(Thm1Condition::from_index(4), Some(Thm1Condition::PowerDifference));
        assert_eq!(Thm1Condition::from_index(0), None);
        assert_eq!(Thm1Condition::PiRegularUu.index(), 6);
    }

    #[test]
    fn thm1_agreement_on_small_rings() {
        let rings = [
            zmod(4, &g()).unwrap(),
            zmod(6, &g()).unwrap(),
            gf(4, &g()).unwrap(),
            matrix(&zmod(2, &g()).unwrap(), 2, &g()).unwrap(),
        ];
        for r in &rings {
            for n in 2..8 {
                let results: Vec<bool> = Thm1Condition::ALL
                    .iter()
                    .map(|&c| thm1_condition(r, n, c).unwrap().holds)
                    .collect();
                assert!(results.iter().all(|&b| b == results[0]), "{} n={n}: {results:?}", r.label());
            }
        }
    }

    #[test]
    fn two_in_z4_and_z5() {
        assert_eq!(two_is_central_nilpotent(&zmod(4, &g()).unwrap()), (true, true));
        assert_eq!(two_is_central_nilpotent(&zmod(5, &g()).unwrap()), (true, false));
    }
}
