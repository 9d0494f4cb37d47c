use std::collections::BTreeSet;

use dissect_core::corpus::CORPUS;
use dissect_core::grammar::{infer_upset, ContextFreeGrammar};
use dissect_core::language::LanguageHandle;
use proptest::prelude::*;

fn scale(name: &str) -> usize {
    if name == "dyck" {
        16
    } else {
        60
    }
}

#[test]
fn spectrum_matches_enumeration_census() {
    for entry in CORPUS {
        let g = ContextFreeGrammar::parse(entry.text).unwrap();
        let n = scale(entry.name);
        let e = g.enumerate(n, 1_000_000);
        assert!(!e.truncated);
        assert_eq!(g.length_spectrum(n), e.census(), "{}", entry.name);
    }
}

#[test]
fn inferred_sets_agree_with_spectra() {
    for entry in CORPUS {
        let g = ContextFreeGrammar::parse(entry.text).unwrap();
        let spectrum = g.length_spectrum(400);
        if let Ok(inferred) = infer_upset(&spectrum, 400) {
            for (n, &b) in spectrum.iter().enumerate() {
                assert_eq!(inferred.set.contains(n), b, "{} at {n}", entry.name);
            }
            assert_eq!(inferred.verified_to, 400);
        }
    }
}

#[test]
fn useless_symbols_do_not_change_membership() {
    for entry in CORPUS {
        let padded = format!("{}\nU -> U a U\nV -> ( V\nS -> U\n", entry.text);
        let clean = ContextFreeGrammar::parse(entry.text).unwrap();
        let noisy = ContextFreeGrammar::parse(&padded).unwrap();
        assert!(noisy.removed().iter().any(|s| s == "U"));
        let alphabet = clean.terminals().clone();
        for w in alphabet.strings_up_to(10) {
            assert_eq!(clean.member(&w).unwrap(), noisy.member(&w).unwrap_or(false), "{} on {w}", entry.name);
        }
    }
}

#[test]
fn exhaustive_membership_matches_enumeration() {
    for entry in CORPUS {
        let h = entry.handle().unwrap();
        let members: BTreeSet<String> = h.enumerate(10).iter().cloned().collect();
        for w in h.alphabet().strings_up_to(10) {
            assert_eq!(h.member(&w), members.contains(&w), "{} on {w}", entry.name);
        }
    }
}

fn body() -> impl Strategy<Value = String> {
    proptest::collection::vec(prop::sample::select(vec!["S", "A", "B", "a", "b"]), 0..=3)
        .prop_map(|v| if v.is_empty() { "ε".to_string() } else { v.join(" ") })
}

fn grammar_text() -> impl Strategy<Value = String> {
    proptest::collection::vec(proptest::collection::vec(body(), 1..=3), 3).prop_map(|rules| {
        ["S", "A", "B"]
            .iter()
            .zip(rules)
            .map(|(lhs, bodies)| format!("{lhs} -> {}", bodies.join(" | ")))
            .collect::<Vec<_>>()
            .join("\n")
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn random_grammars_agree_three_ways(text in grammar_text()) {
        let g = match ContextFreeGrammar::parse(&text) {
            Ok(g) => g,
            Err(_) => return Ok(()),
        };
        let h = LanguageHandle::grammar("random", g.clone());
        let e = g.enumerate(8, 1_000_000);
        prop_assert_eq!(g.length_spectrum(8), e.census());
        let members: BTreeSet<String> = e.iter().cloned().collect();
        for w in g.terminals().strings_up_to(8) {
            prop_assert_eq!(g.member(&w).unwrap(), members.contains(&w), "{:?}", w);
            prop_assert_eq!(h.member(&w), members.contains(&w));
        }
        let reversed = h.reverse();
        for w in e.iter() {
            let r: String = w.chars().rev().collect();
            prop_assert!(reversed.member(&r));
        }
    }
}
