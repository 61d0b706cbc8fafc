mod common;

use common::{binrel, constant_graph, graph, ree, rem};
use graphdef_core::def_ree::{decide_ree, level_closure, synthesize_ree, DEFAULT_BUDGET};
use graphdef_core::def_rem::{decide_k_rem, decide_rem, synthesize_rem};
use graphdef_core::def_ucq::{
    decide_ucrdpq, enumerate_homomorphisms, is_homomorphism, synthesize_ucrdpq, GraphHomomorphism,
};
use graphdef_core::eval::{eval_ree_query, eval_rem_query, eval_ucrdpq};
use graphdef_core::expr::{registers_of, ReeExpr};
use graphdef_core::oracle::{
    enum_homs_bruteforce, enum_ree, levels_bruteforce, rpq_definable_bruteforce,
};
use graphdef_core::{BinRel, DataGraph, Decision, NodeRelation};
use proptest::prelude::*;

/// A graph with a relation that is sometimes definable: an arbitrary
/// relation, or the answer of a random REE, REM or RPQ.
fn instance(nodes: usize, values: usize) -> impl Strategy<Value = (DataGraph, BinRel)> {
    graph(nodes, values, 2).prop_flat_map(|g| {
        let n = g.node_count();
        let (g1, g2, g3) = (g.clone(), g.clone(), g.clone());
        (
            Just(g),
            prop_oneof![
                binrel(n),
                ree(2, 5).prop_map(move |e| eval_ree_query(&g1, &e)),
                rem(2, 2, 5).prop_map(move |e| eval_rem_query(&g2, &e)),
                rem(2, 0, 5).prop_map(move |e| eval_rem_query(&g3, &e)),
            ],
        )
    })
}

fn definable(d: Decision) -> bool {
    assert_ne!(d, Decision::ResourceExhausted);
    d == Decision::Definable
}

fn closed_under_homs(g: &DataGraph, s: &NodeRelation) -> bool {
    enum_homs_bruteforce(g).iter().all(|h| {
        s.iter()
            .all(|t| s.contains(&t.iter().map(|&p| h[p]).collect::<Vec<_>>()))
    })
}

fn ree_depth(e: &ReeExpr) -> usize {
    match e {
        ReeExpr::Eps | ReeExpr::Letter(_) => 0,
        ReeExpr::Union(a, b) | ReeExpr::Concat(a, b) => ree_depth(a).max(ree_depth(b)),
        ReeExpr::Plus(a) => ree_depth(a),
        ReeExpr::Eq(a) | ReeExpr::Neq(a) => 1 + ree_depth(a),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn hierarchy((g, s) in instance(4, 3)) {
        let rpq = definable(decide_k_rem(&g, &s, 0).unwrap().decision);
        let ree = definable(decide_ree(&g, &s).unwrap().decision);
        let rem = definable(decide_rem(&g, &s).unwrap().decision);
        let ucq = definable(decide_ucrdpq(&g, &NodeRelation::from(&s)).unwrap().decision);
        prop_assert_eq!(rpq, rpq_definable_bruteforce(&g, &s));
        prop_assert!(!rpq || ree);
        prop_assert!(!ree || rem);
        prop_assert!(!rem || ucq);
        prop_assert_eq!(ucq, closed_under_homs(&g, &NodeRelation::from(&s)));
    }

    #[test]
    fn register_monotonicity((g, s) in instance(4, 3)) {
        let delta = g.distinct_values();
        let by_k: Vec<bool> = (0..=delta + 1)
            .map(|k| definable(decide_k_rem(&g, &s, k).unwrap().decision))
            .collect();
        for k in 0..=delta {
            prop_assert!(!by_k[k] || by_k[k + 1], "k = {}", k);
        }
        prop_assert_eq!(by_k[delta], by_k[delta + 1]);
    }

    #[test]
    fn synthesized_queries_define_the_relation((g, s) in instance(4, 3)) {
        let r = decide_rem(&g, &s).unwrap();
        if r.decision.is_definable() {
            prop_assert_eq!(eval_rem_query(&g, &synthesize_rem(&g, &r).unwrap()), s.clone());
        }
        let r = decide_ree(&g, &s).unwrap();
        if r.decision.is_definable() {
            prop_assert_eq!(eval_ree_query(&g, &synthesize_ree(&g, &r).unwrap()), s.clone());
        }
        let s = NodeRelation::from(&s);
        if decide_ucrdpq(&g, &s).unwrap().decision.is_definable() {
            prop_assert_eq!(eval_ucrdpq(&g, &synthesize_ucrdpq(&g, &s).unwrap()), s);
        }
    }

    #[test]
    fn defined_relations_are_recognized(g in graph(4, 3, 2), e in rem(2, 2, 5), f in ree(2, 5)) {
        let s = eval_rem_query(&g, &e);
        // Without registers the empty relation needs a path-free word, as
        // for RPQs; `eps[~true]` does not count.
        let k = if s.is_empty() { registers_of(&e).max(1) } else { registers_of(&e) };
        prop_assert!(definable(decide_k_rem(&g, &s, k).unwrap().decision), "{}", e);
        let s = eval_ree_query(&g, &f);
        prop_assert!(definable(decide_ree(&g, &s).unwrap().decision), "{}", f);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    // With a single data value `e_=` is `e` and `e_!=` is empty, so REE and
    // RPQ definability coincide on nonempty relations. The empty relation
    // is `(eps)_!=` but need not be an RPQ answer.
    #[test]
    fn constant_data_reduces_to_rpq(
        (g, s) in constant_graph(4, 2).prop_flat_map(|g| { let n = g.node_count(); (Just(g), binrel(n)) })
    ) {
        prop_assume!(!s.is_empty());
        prop_assert_eq!(
            decide_ree(&g, &s).unwrap().decision,
            decide_k_rem(&g, &s, 0).unwrap().decision,
        );
    }

    #[test]
    fn levels_match_explicit_closure(g in graph(3, 2, 2)) {
        let levels = level_closure(&g, 3, DEFAULT_BUDGET).unwrap();
        let brute = levels_bruteforce(&g, 3);
        for (i, want) in brute.iter().enumerate() {
            let got: std::collections::BTreeSet<BinRel> =
                levels.materialize(i, 1 << 16).unwrap().into_iter().collect();
            prop_assert_eq!(&got, want, "level {}", i);
        }
    }

    #[test]
    fn small_rees_land_in_their_level(g in graph(4, 3, 1)) {
        let levels = level_closure(&g, 4, DEFAULT_BUDGET).unwrap();
        for e in enum_ree(4, &["a"]) {
            let s = eval_ree_query(&g, &e);
            let (level, members) = levels.decompose(&s).expect("every REE relation is in the closure");
            prop_assert!(level <= ree_depth(&e), "{} at level {}", e, level);
            let mut union = BinRel::empty(g.node_count());
            for i in members {
                union.union_with(&levels.relations()[i]);
                prop_assert_eq!(eval_ree_query(&g, &levels.expression(&g, i)), levels.relations()[i].clone());
            }
            prop_assert_eq!(union, s);
        }
    }

    #[test]
    fn pruned_homomorphisms_match_exhaustive(g in graph(4, 3, 2)) {
        let homs: Vec<Vec<usize>> = enumerate_homomorphisms(&g, 1 << 20)
            .unwrap()
            .into_iter()
            .map(|h| h.map().to_vec())
            .collect();
        prop_assert_eq!(&homs, &enum_homs_bruteforce(&g));
        prop_assert!(homs.contains(&(0..g.node_count()).collect()));
        for a in &homs {
            let ha = GraphHomomorphism::certify(&g, a.clone()).unwrap();
            for b in &homs {
                let hb = GraphHomomorphism::certify(&g, b.clone()).unwrap();
                prop_assert!(is_homomorphism(&g, &ha.after(&hb)));
            }
        }
    }

    #[test]
    fn ucrdpq_matches_homomorphism_closure(
        (g, arity, picks) in graph(4, 3, 2).prop_flat_map(|g| {
            let n = g.node_count();
            (Just(g), 1..=3usize).prop_flat_map(move |(g, a)| {
                (Just(g), Just(a), prop::collection::vec(prop::collection::vec(0..n, a), 0..4))
            })
        })
    ) {
        let s = NodeRelation::from_tuples(arity, g.node_count(), picks).unwrap();
        let r = decide_ucrdpq(&g, &s).unwrap();
        prop_assert_eq!(definable(r.decision), closed_under_homs(&g, &s));
        if let Some(c) = r.counterexample {
            prop_assert!(is_homomorphism(&g, c.hom.map()));
            prop_assert!(s.contains(&c.tuple));
            prop_assert!(!s.contains(&c.image));
            prop_assert_eq!(c.hom.apply(&c.tuple), c.image);
        } else {
            prop_assert_eq!(eval_ucrdpq(&g, &synthesize_ucrdpq(&g, &s).unwrap()), s);
        }
    }
}
