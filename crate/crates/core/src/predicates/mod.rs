//! Ring-class predicates, decomposition finders and the theorem suites.

mod classes;
mod decompose;

pub use classes::{
    is_n_uu, is_n_uu_any, is_nil_clean, is_pi_uu, is_pi_uu_any, is_strongly_n_nil_clean, is_uu, lcm_criterion,
    thm1_condition, two_is_central_nilpotent, Thm1Condition,
};
pub use decompose::{
    augmentation, augmentation_ideal, is_nil_ideal, is_periodic_element, is_strongly_m_nil_clean_element,
    nil_clean_decompose,
    nilpotency_index_of, pi_regular_decompose, strongly_n_nil_clean_decompose, unipotent_order_check,
};

pub mod corpus;
pub mod explore;
pub mod suites;

pub use corpus::{Corpus, CorpusError, CorpusRing, BUILTIN_CORPUS};
pub use explore::{explore_group_rings, ExploreRecord, ExploreRequest};
pub use suites::{run_suite, SuiteId, SuiteRecord, SuiteResult};

#[cfg(test)]
mod properties {
    use std::sync::{Arc, OnceLock};

    use num_integer::gcd;
    use proptest::prelude::*;

    use super::*;
    use crate::invariants::{idempotents, is_nilpotent, units, uu_exponent};
    use crate::ring::{Code, FiniteRing, ResourceGuard};

    fn rings() -> &'static Vec<Arc<FiniteRing>> {
        static RINGS: OnceLock<Vec<Arc<FiniteRing>>> = OnceLock::new();
        RINGS.get_or_init(|| {
            Corpus::builtin(&ResourceGuard::default())
                .rings
                .iter()
                .filter_map(|c| c.finite().cloned())
                .collect()
        })
    }

    fn ring_and_element() -> impl Strategy<Value = (Arc<FiniteRing>, Code)> {
        (0..rings().len(), any::<u32>()).prop_map(|(i, x)| {
            let r = rings()[i].clone();
            let a = x % r.size() as u32;
            (r, a)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]

        #[test]
        fn n_uu_iff_exponent_divides(i in 0..40usize, n in 1u64..=24) {
            let r = &rings()[i % rings().len()];
            prop_assert_eq!(is_n_uu(r, n).holds, n % uu_exponent(r) == 0);
        }

        #[test]
        fn n_uu_is_monotone_in_multiples(i in 0..40usize, n in 1u64..=24, k in 1u64..=4) {
            let r = &rings()[i % rings().len()];
            if is_n_uu(r, n).holds {
                prop_assert!(is_n_uu(r, k * n).holds);
            }
        }

        #[test]
        fn n_uu_closed_under_gcd(i in 0..40usize, m in 1u64..=24, n in 1u64..=24) {
            let r = &rings()[i % rings().len()];
            if is_n_uu(r, m).holds && is_n_uu(r, n).holds {
                prop_assert!(is_n_uu(r, gcd(m, n)).holds);
            }
        }

        #[test]
        fn failing_unit_witness_is_minimal(i in 0..40usize, n in 1u64..=24) {
            let r = &rings()[i % rings().len()];
            let v = is_n_uu(r, n);
            if let Some(u) = v.witness_value("u") {
                let bad = |w: Code| !is_nilpotent(r, r.sub(r.pow(w, n), r.one()));
                prop_assert!(bad(u as Code));
                prop_assert!(units(r).list().iter().filter(|&&w| (w as i64) < u).all(|&w| !bad(w)));
            }
            prop_assert_eq!(v.witness, is_n_uu(r, n).witness);
        }

        #[test]
        fn decompositions_recheck((r, a) in ring_and_element(), n in 2u64..=9) {
            let v = strongly_n_nil_clean_decompose(&r, a, n);
            if v.holds {
                let f = v.witness_value("f").unwrap() as Code;
                let q = v.witness_value("q").unwrap() as Code;
                prop_assert_eq!(r.pow(f, n), f);
                prop_assert!(is_nilpotent(&r, q));
                prop_assert!(r.commute(f, q));
                prop_assert_eq!(r.add(f, q), a);
            }
            let v = pi_regular_decompose(&r, a).unwrap();
            let e = v.witness_value("e").unwrap() as Code;
            let u = v.witness_value("u").unwrap() as Code;
            let w = v.witness_value("w").unwrap() as Code;
            prop_assert_eq!(r.mul(e, e), e);
            prop_assert!(units(&r).contains(u));
            prop_assert!(is_nilpotent(&r, w));
            prop_assert!(r.commute(e, u) && r.commute(e, w) && r.commute(u, w));
            prop_assert_eq!(r.add(r.mul(e, u), w), a);
            let v = nil_clean_decompose(&r, a);
            if v.holds {
                let e = v.witness_value("e").unwrap() as Code;
                let q = v.witness_value("q").unwrap() as Code;
                prop_assert!(idempotents(&r).contains(&e));
                prop_assert!(is_nilpotent(&r, q));
                prop_assert_eq!(r.add(e, q), a);
            }
            let v = is_periodic_element(&r, a);
            let (i, j) = (v.witness_value("i").unwrap() as u64, v.witness_value("j").unwrap() as u64);
            prop_assert!(i > j && j >= 1);
            prop_assert_eq!(r.pow(a, i), r.pow(a, j));
        }

        #[test]
        fn thm1_conditions_agree(i in 0..40usize, n in 2u64..=9) {
            let r = &rings()[i % rings().len()];
            let row: Vec<bool> = Thm1Condition::ALL
                .iter()
                .map(|&c| thm1_condition(r, n, c).unwrap().holds)
                .collect();
            prop_assert!(row.iter().all(|&b| b == row[0]), "{} n={}: {:?}", r.label(), n, row);
        }

        #[test]
        fn unipotent_orders_hold((r, a) in ring_and_element()) {
            if is_nilpotent(&r, a) {
                prop_assert!(unipotent_order_check(&r, a).unwrap().holds);
            }
        }
    }
}
