use dissect_core::automata::Dfa;
use dissect_core::corpus::{find, CORPUS};
use dissect_core::dissector::DissectConfig;
use dissect_core::separation::{build_separator, iseparate, CoveringPair};

fn nested_pairs() -> Vec<CoveringPair> {
    CORPUS
        .iter()
        .filter_map(|e| {
            let outer = find(e.contained_in?)?;
            Some(CoveringPair::new(outer.handle().unwrap(), e.handle().unwrap()).unwrap())
        })
        .collect()
}

#[test]
fn successful_runs_sit_between_inner_and_cover() {
    let cfg = DissectConfig::new(200, 20);
    let mut runs = 0;
    for pair in nested_pairs() {
        let Ok(sep) = iseparate(&pair, &cfg) else { continue };
        runs += 1;
        let e = &sep.separator;
        // soundness at scale: a verified margin dissection gives a verified separation
        assert!(sep.report.dissection.is_verified());
        assert!(sep.report.separation.holds, "{}", pair.cover().name());
        for w in pair.inner().enumerate(200).iter() {
            assert!(e.member(w), "B ⊄ E at {w}");
        }
        for w in e.enumerate(200).iter() {
            assert!(pair.cover().member(w), "E ⊄ A at {w}");
        }
    }
    assert!(runs >= 2);
}

#[test]
fn larger_witness_never_shrinks_separator() {
    for pair in nested_pairs() {
        let ab = pair.cover().alphabet().clone();
        let c1 = Dfa::length_modulus(8, 2, &ab).unwrap();
        let c2 = c1.union(&Dfa::length_modulus(8, 6, &ab).unwrap()).unwrap();
        let c3 = c2.union(&Dfa::length_modulus(4, 0, &ab).unwrap()).unwrap();
        let es: Vec<_> = [&c1, &c2, &c3, &Dfa::universal(&ab)]
            .iter()
            .map(|c| build_separator(&pair, c).unwrap())
            .collect();
        for w in pair.cover().enumerate(60).iter() {
            for win in es.windows(2) {
                assert!(!win[0].member(w) || win[1].member(w), "{w}");
            }
        }
    }
}
