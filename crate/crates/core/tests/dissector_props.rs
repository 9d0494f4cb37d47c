use std::collections::BTreeSet;

use dissect_core::alphabet::Alphabet;
use dissect_core::corpus::{find, CORPUS};
use dissect_core::dissector::{
    choose_residues, dissect_auto, dissect_semilinear_difference, factorial_dissection_decision, verify_dissection,
    DissectConfig, FactorialSide,
};
use dissect_core::semilinear::LinearSet;
use dissect_core::upsets::UltimatelyPeriodicSet;
use num_bigint::BigUint;
use proptest::prelude::*;

fn upset() -> impl Strategy<Value = UltimatelyPeriodicSet> {
    (0usize..=20, 1usize..=12).prop_flat_map(|(t, q)| {
        (proptest::collection::btree_set(0..t.max(1), 0..=t), proptest::collection::btree_set(0..q, 1..=q)).prop_map(
            move |(f, r): (BTreeSet<usize>, BTreeSet<usize>)| {
                UltimatelyPeriodicSet::from_parts(t, q, f.into_iter().filter(|&n| n < t).collect(), r).unwrap()
            },
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn chosen_residues_are_both_infinite(x in upset()) {
        let (m, r1, r2) = choose_residues(&x).unwrap();
        prop_assert!(r1 != r2 && r1 < m && r2 < m);
        // census over the top half of [0, 10^4)
        let seen: BTreeSet<usize> = (5_000..10_000).filter(|&n| x.contains(n)).map(|n| n % m).collect();
        prop_assert!(seen.contains(&r1) && seen.contains(&r2));
    }

    #[test]
    fn semilinear_witnesses_are_disjoint(rows in proptest::collection::vec(proptest::collection::vec(0u64..=4, 2), 2..=4)) {
        let t = LinearSet::from_matrix(rows).unwrap();
        let ab = Alphabet::new(['a', 'b']);
        match dissect_semilinear_difference(&t, &ab) {
            Ok((c0, c1)) => {
                prop_assert!(c0.intersect(&c1).unwrap().is_empty());
                prop_assert!(!c0.is_empty() && !c1.is_empty());
            }
            Err(_) => prop_assert!(t.periods().is_empty()),
        }
    }
}

fn triples() -> Vec<(u64, u64, u64)> {
    let mut out = Vec::new();
    for a in 1..=6 {
        for b in 0..a {
            for k in 0..=3 {
                out.push((a, b, k));
            }
        }
    }
    out
}

fn in_ap(f: &BigUint, (a, b, k): (u64, u64, u64)) -> bool {
    let a = BigUint::from(a);
    let b = BigUint::from(b);
    f >= &(&a * BigUint::from(k) + &b) && (f - &b) % &a == BigUint::from(0u32)
}

#[test]
fn factorial_decision_is_exact() {
    let all = triples();
    let mut checked = 0;
    let mut sets: Vec<Vec<(u64, u64, u64)>> = vec![vec![]];
    for i in 0..all.len() {
        sets.push(vec![all[i]]);
        for j in i + 1..all.len() {
            sets.push(vec![all[i], all[j]]);
            for l in j + 1..all.len() {
                sets.push(vec![all[i], all[j], all[l]]);
            }
        }
    }
    let facts: Vec<BigUint> = (0..=12u32)
        .scan(BigUint::from(1u32), |f, m| {
            if m > 0 {
                *f *= BigUint::from(m);
            }
            Some(f.clone())
        })
        .collect();
    for g in &sets {
        let o = factorial_dissection_decision(g).unwrap();
        assert!(!o.dissects);
        for (m, f) in facts.iter().enumerate() {
            let inside = g.iter().any(|&t| in_ap(f, t));
            let on_finite_side = match o.side {
                FactorialSide::InsideCofinite => !inside,
                FactorialSide::InsideFinite => inside,
            };
            if m as u64 >= o.stable_from {
                assert!(!on_finite_side, "{g:?} m = {m}");
            }
            let listed = o.finite_side_lengths.iter().any(|&x| BigUint::from(x) == *f);
            assert_eq!(listed, on_finite_side, "{g:?} m = {m}");
        }
        checked += 1;
    }
    assert_eq!(checked, sets.len());
}

fn cfg(name: &str) -> DissectConfig {
    if name == "dyck" {
        DissectConfig::new(20, 20)
    } else {
        DissectConfig::new(200, 20)
    }
}

#[test]
fn witnesses_transfer_to_supersets() {
    let mut pairs = 0;
    for entry in CORPUS {
        let Some(outer) = entry.contained_in else { continue };
        let inner = entry.handle().unwrap();
        let outer = find(outer).unwrap().handle().unwrap();
        let c = cfg(entry.name);
        let cert = dissect_auto(&inner, &c);
        assert!(cert.is_verified(), "{}", entry.name);
        let again = verify_dissection(&outer, cert.witness.as_ref().unwrap(), &c).unwrap();
        assert!(again.is_verified(), "{} ⊆ {}", entry.name, outer.name());
        pairs += 1;
    }
    assert!(pairs >= 3);
}

#[test]
fn unions_and_reversals_stay_dissectible() {
    let handles: Vec<_> = CORPUS.iter().map(|e| (e.name, e.handle().unwrap())).collect();
    for (name, h) in &handles {
        let c = cfg(name);
        if !dissect_auto(h, &c).is_verified() {
            continue;
        }
        assert!(dissect_auto(&h.reverse(), &c).is_verified(), "reverse of {name}");
        for (other, g) in &handles {
            if other <= name || g.alphabet() != h.alphabet() || !dissect_auto(g, &cfg(other)).is_verified() {
                continue;
            }
            let c = if *other == "dyck" { cfg(other) } else { c };
            let u = h.union(g).unwrap();
            assert!(dissect_auto(&u, &c).is_verified(), "{name} ∪ {other}");
        }
    }
}
