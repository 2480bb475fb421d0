mod common;

use pdaverify::closure::{bounded_path_search, dyck_closure, is_insecure};
use pdaverify::protocol::{build_fsa, reduce_word, CancelTable, Operator, Protocol};
use rand::seq::SliceRandom;
use rand::Rng;

#[test]
fn relation_is_a_preorder() {
    let ct = CancelTable::default();
    let mut rng = common::rng(21);
    for _ in 0..100 {
        let f = common::random_fsa(&mut rng, 7, 20);
        let r = dyck_closure(&f, &ct);
        let nodes = f.nodes();
        for a in &nodes {
            assert!(r.contains(a.as_str(), a.as_str()));
            for b in &nodes {
                for c in &nodes {
                    if r.contains(a.as_str(), b.as_str()) && r.contains(b.as_str(), c.as_str()) {
                        assert!(r.contains(a.as_str(), c.as_str()));
                    }
                }
            }
        }
        assert_eq!(r.pairs().count(), r.len());
    }
}

#[test]
fn adding_edges_never_makes_a_graph_secure() {
    let ct = CancelTable::default();
    let mut rng = common::rng(22);
    for _ in 0..200 {
        let mut f = common::random_fsa(&mut rng, 6, 12);
        let before = dyck_closure(&f, &ct);
        let u = rng.gen_range(0..6).to_string();
        let v = rng.gen_range(0..6).to_string();
        f.add_edge(&u, *Operator::UNIVERSE.choose(&mut rng).unwrap(), &v)
            .unwrap();
        let after = dyck_closure(&f, &ct);
        for (a, b) in before.pairs() {
            assert!(after.contains(a.as_str(), b.as_str()));
        }
    }
}

#[test]
fn search_agrees_with_path_enumeration() {
    let ct = CancelTable::default();
    let mut rng = common::rng(23);
    for _ in 0..300 {
        let f = common::random_fsa(&mut rng, 5, 9);
        let bound = 6;
        let found = bounded_path_search(&f, &ct, bound);
        assert_eq!(
            found.is_some(),
            common::erasable_path_within(&f, &ct, bound),
            "{}",
            f.to_edge_list()
        );
        if let Some(path) = found {
            assert!(path.len() <= bound);
            assert_eq!(
                path.first().map(|e| &e.from).unwrap_or(&f.source),
                &f.source
            );
            assert_eq!(path.last().map(|e| &e.to).unwrap_or(&f.target), &f.target);
            assert!(path.windows(2).all(|w| w[0].to == w[1].from));
            assert!(path.iter().all(|e| f.contains(e)));
            let word: Vec<Operator> = path.iter().map(|e| e.op).collect();
            assert!(reduce_word(&word, &ct).is_empty());
        }
    }
}

#[test]
fn insecure_graphs_have_short_witnesses() {
    let ct = CancelTable::default();
    let mut rng = common::rng(24);
    let mut corpus: Vec<_> = (0..300)
        .map(|_| common::random_fsa(&mut rng, 8, 24))
        .collect();
    corpus.extend(
        [Protocol::echo(), Protocol::double_encrypted()]
            .iter()
            .map(build_fsa),
    );
    for f in corpus.iter().filter(|f| is_insecure(f, &ct)) {
        let bound = 2 * f.nodes().len() * (f.edges().len() + 1);
        assert!(
            bounded_path_search(f, &ct, bound).is_some(),
            "{}",
            f.to_edge_list()
        );
    }
    for f in corpus.iter().filter(|f| !is_insecure(f, &ct)) {
        assert!(bounded_path_search(f, &ct, 64).is_none());
    }
}

#[test]
fn single_operator_never_cancels() {
    let f = pdaverify::protocol::parse_fsa("0 EY 1").unwrap();
    assert!(!is_insecure(&f, &CancelTable::default()));
    assert!(bounded_path_search(&f, &CancelTable::default(), 5).is_none());
}
