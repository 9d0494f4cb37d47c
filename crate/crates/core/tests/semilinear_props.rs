use std::collections::BTreeSet;

use dissect_core::language::{Builtin, LanguageHandle};
use dissect_core::semilinear::{parikh_of, tilde_psi_decompositions, LinearSet, ParikhVector, SemiLinearSet};
use proptest::prelude::*;

/// All z with Σ z_i·p_i + offset = target, by exhaustive search with z_i ≤ 20.
fn brute_member(offset: &[u64], periods: &[Vec<u64>], target: &[u64]) -> bool {
    fn go(i: usize, acc: Vec<u64>, periods: &[Vec<u64>], target: &[u64]) -> bool {
        if acc.iter().zip(target).any(|(a, t)| a > t) {
            return false;
        }
        if i == periods.len() {
            return acc == target;
        }
        (0..=20u64).any(|z| {
            let next: Vec<u64> = acc.iter().zip(&periods[i]).map(|(a, p)| a + z * p).collect();
            go(i + 1, next, periods, target)
        })
    }
    go(0, offset.to_vec(), periods, target)
}

fn instance() -> impl Strategy<Value = (Vec<u64>, Vec<Vec<u64>>, Vec<u64>)> {
    (1usize..=3, 0usize..=3).prop_flat_map(|(m, k)| {
        (
            proptest::collection::vec(0u64..=4, m),
            proptest::collection::vec(proptest::collection::vec(0u64..=4, m), k),
            proptest::collection::vec(0u64..=20, m),
        )
    })
}

/// Coin-change reachability of n − offset with the given steps.
fn reachable(offset: u64, steps: &[u64], max: usize) -> Vec<bool> {
    let mut r = vec![false; max + 1];
    if (offset as usize) <= max {
        r[offset as usize] = true;
    }
    for n in 0..=max {
        if r[n] {
            for &s in steps {
                if s > 0 && n + s as usize <= max {
                    r[n + s as usize] = true;
                }
            }
        }
    }
    r
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn member_matches_exhaustive_search((offset, periods, target) in instance()) {
        let set = LinearSet::new(offset.clone(), periods.clone()).unwrap();
        let got = set.member(&ParikhVector(target.clone())).unwrap();
        prop_assert_eq!(got, brute_member(&offset, &periods, &target));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn one_dimensional_upset_matches_enumeration(offset in 0u64..=20, steps in proptest::collection::vec(0u64..=12, 0..=3)) {
        let set = LinearSet::new(vec![offset], steps.iter().map(|&s| vec![s]).collect()).unwrap();
        let upset = SemiLinearSet::linear(set.clone()).to_upset().unwrap();
        let direct = reachable(offset, &steps, 5000);
        for (n, &expected) in direct.iter().enumerate() {
            prop_assert_eq!(upset.contains(n), expected, "n = {}", n);
        }
        for n in (0..=300).step_by(7) {
            prop_assert_eq!(set.member(&ParikhVector(vec![n as u64])).unwrap(), direct[n]);
        }
    }

    #[test]
    fn weighted_image_matches_joint_enumeration(
        offset in proptest::collection::vec(0u64..=3, 2),
        periods in proptest::collection::vec(proptest::collection::vec(0u64..=3, 2), 0..=2),
        u in proptest::collection::vec(1u64..=3, 2),
    ) {
        let s = SemiLinearSet::linear(LinearSet::new(offset.clone(), periods.clone()).unwrap());
        let image = s.image_under_weights(&u).unwrap();
        let mut values = BTreeSet::new();
        let zs: Vec<Vec<u64>> = match periods.len() {
            0 => vec![vec![]],
            1 => (0..=20).map(|a| vec![a]).collect(),
            _ => (0..=20).flat_map(|a| (0..=20).map(move |b| vec![a, b])).collect(),
        };
        for z in zs {
            let mut v = offset.clone();
            for (zi, p) in z.iter().zip(&periods) {
                for d in 0..2 {
                    v[d] += zi * p[d];
                }
            }
            values.insert(v[0] * u[0] + v[1] * u[1]);
        }
        for target in 0..=20u64 {
            prop_assert_eq!(image.member(&ParikhVector(vec![target])).unwrap(), values.contains(&target));
        }
    }

    #[test]
    fn decompositions_match_tuple_search(
        words in proptest::collection::vec("[ab]{1,3}", 1..=3),
        w in "[ab]{0,12}",
    ) {
        let refs: Vec<&str> = words.iter().map(String::as_str).collect();
        let got = tilde_psi_decompositions(&w, &refs).unwrap();
        let mut expected = BTreeSet::new();
        let m = words.len();
        let mut idx = vec![0usize; m];
        loop {
            let built: String = words.iter().zip(&idx).map(|(x, &i)| x.repeat(i)).collect();
            if built == w {
                expected.insert(idx.clone());
            }
            let mut d = 0;
            while d < m {
                idx[d] += 1;
                if idx[d] <= 12 {
                    break;
                }
                idx[d] = 0;
                d += 1;
            }
            if d == m {
                break;
            }
        }
        prop_assert_eq!(&got, &expected);
        for tuple in &got {
            let built: String = words.iter().zip(tuple).map(|(x, &i)| x.repeat(i)).collect();
            prop_assert_eq!(&built, &w);
        }
    }
}

#[test]
fn parikh_images_of_l1_and_l2_coincide() {
    let l1 = LanguageHandle::parse_grammar("l1", "S -> 0 S 1 | ε").unwrap();
    let l2 = LanguageHandle::builtin(Builtin::L2Union);
    let order = ['0', '1'];
    let image = |h: &LanguageHandle| -> BTreeSet<Vec<u64>> {
        h.enumerate(24).iter().map(|w| parikh_of(w, &order).unwrap().0).collect()
    };
    let expected: BTreeSet<Vec<u64>> = (0..=12).map(|n| vec![n, n]).collect();
    assert_eq!(image(&l1), expected);
    assert_eq!(image(&l2), expected);
}
