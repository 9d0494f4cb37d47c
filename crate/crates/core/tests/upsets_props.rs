use std::collections::BTreeSet;

use dissect_core::upsets::{ArithmeticProgression, UltimatelyPeriodicSet};
use proptest::prelude::*;

const HORIZON: usize = 2000;

#[derive(Debug, Clone)]
struct Raw {
    t: usize,
    q: usize,
    finite: BTreeSet<usize>,
    residues: BTreeSet<usize>,
}

impl Raw {
    fn contains(&self, n: usize) -> bool {
        if n < self.t {
            self.finite.contains(&n)
        } else {
            self.residues.contains(&(n % self.q))
        }
    }

    fn build(&self) -> UltimatelyPeriodicSet {
        UltimatelyPeriodicSet::from_parts(self.t, self.q, self.finite.clone(), self.residues.clone()).unwrap()
    }

    fn bits(&self) -> Vec<bool> {
        (0..=HORIZON).map(|n| self.contains(n)).collect()
    }
}

fn raw() -> impl Strategy<Value = Raw> {
    (0usize..=20, 1usize..=12).prop_flat_map(|(t, q)| {
        (
            proptest::collection::btree_set(0..t.max(1), 0..=t),
            proptest::collection::btree_set(0..q, 0..=q),
        )
            .prop_map(move |(finite, residues)| Raw {
                t,
                q,
                finite: finite.into_iter().filter(|&n| n < t).collect(),
                residues,
            })
    })
}

fn bits(x: &UltimatelyPeriodicSet) -> Vec<bool> {
    (0..=HORIZON).map(|n| x.contains(n)).collect()
}

fn brute_sum(a: &[bool], b: &[bool]) -> Vec<bool> {
    let mut out = vec![false; HORIZON + 1];
    for i in 0..=HORIZON {
        if !a[i] {
            continue;
        }
        for j in 0..=HORIZON - i {
            if b[j] {
                out[i + j] = true;
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn operations_match_bitsets(x in raw(), y in raw()) {
        let (a, b) = (x.bits(), y.bits());
        let (sx, sy) = (x.build(), y.build());
        prop_assert_eq!(bits(&sx), a.clone());
        let zip = |f: fn(bool, bool) -> bool| -> Vec<bool> { a.iter().zip(&b).map(|(&p, &q)| f(p, q)).collect() };
        prop_assert_eq!(bits(&sx.union(&sy)), zip(|p, q| p || q));
        prop_assert_eq!(bits(&sx.intersect(&sy)), zip(|p, q| p && q));
        prop_assert_eq!(bits(&sx.difference(&sy)), zip(|p, q| p && !q));
        prop_assert_eq!(bits(&sx.complement()), a.iter().map(|p| !p).collect::<Vec<_>>());
        prop_assert_eq!(bits(&sx.minkowski_sum(&sy)), brute_sum(&a, &b));
    }

    #[test]
    fn normalize_is_idempotent(x in raw()) {
        let s = x.build();
        let again = UltimatelyPeriodicSet::from_parts(
            s.threshold(), s.period(), s.finite_part().clone(), s.residues().clone()).unwrap();
        prop_assert_eq!(again, s);
    }

    #[test]
    fn equal_membership_means_equal_structure(x in raw(), extra in 0usize..15, mult in 1usize..4) {
        // the same set written with a larger threshold and a multiple of the period
        let t = x.t + extra;
        let q = x.q * mult;
        let finite = (0..t).filter(|&n| x.contains(n)).collect();
        let residues = (0..q).filter(|&r| x.contains(t + ((r + q - t % q) % q))).collect();
        let y = UltimatelyPeriodicSet::from_parts(t, q, finite, residues).unwrap();
        prop_assert_eq!(y, x.build());
    }

    #[test]
    fn de_morgan(x in raw(), y in raw()) {
        let (sx, sy) = (x.build(), y.build());
        prop_assert_eq!(sx.union(&sy).complement(), sx.complement().intersect(&sy.complement()));
    }

    #[test]
    fn infinite_residues_match_intersections(x in raw(), m in 1usize..=64) {
        let s = x.build();
        let expected: BTreeSet<usize> = (0..m)
            .filter(|&r| s.intersect(&ArithmeticProgression::new(m as u64, r as u64, 0).unwrap().to_upset()).is_infinite())
            .collect();
        prop_assert_eq!(s.infinite_residues(m).unwrap(), expected);
    }

    #[test]
    fn serialization_round_trips(x in raw()) {
        let s = x.build();
        let text = serde_json::to_string(&s).unwrap();
        let back: UltimatelyPeriodicSet = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, s);
    }
}

#[test]
fn equal_sets_from_different_sources() {
    let a = ArithmeticProgression::new(6, 3, 2).unwrap().to_upset();
    let b = UltimatelyPeriodicSet::from_predicate(40, 12, |n| n >= 15 && n % 6 == 3);
    assert_eq!(a, b);
}

#[test]
fn malformed_json_is_rejected() {
    for bad in [
        r#"{"t":2,"q":0,"finite_part":[],"residues":[]}"#,
        r#"{"t":2,"q":4,"finite_part":[3],"residues":[]}"#,
        r#"{"t":2,"q":4,"finite_part":[],"residues":[4]}"#,
    ] {
        assert!(serde_json::from_str::<UltimatelyPeriodicSet>(bad).is_err(), "{bad}");
    }
}
