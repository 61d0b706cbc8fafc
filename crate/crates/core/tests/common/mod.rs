#![allow(dead_code)]

use graphdef_core::expr::{Condition, ReeExpr, RemExpr};
use graphdef_core::{BinRel, DataGraph};
use proptest::prelude::*;

pub const LETTERS: [&str; 2] = ["a", "b"];

/// Graph with `1..=max_nodes` nodes named `n0, n1, …`, values drawn from
/// `0..values`, and edges over the first `letters` letters of [`LETTERS`].
pub fn graph(max_nodes: usize, values: usize, letters: usize) -> impl Strategy<Value = DataGraph> {
    (1..=max_nodes).prop_flat_map(move |n| {
        (
            prop::collection::vec(0..values, n),
            prop::collection::vec(prop::bool::weighted(0.35), n * n * letters),
        )
            .prop_map(move |(data, edges)| build(n, letters, &data, &edges))
    })
}

/// All nodes carry the same value.
pub fn constant_graph(max_nodes: usize, letters: usize) -> impl Strategy<Value = DataGraph> {
    (1..=max_nodes).prop_flat_map(move |n| {
        prop::collection::vec(prop::bool::weighted(0.35), n * n * letters)
            .prop_map(move |edges| build(n, letters, &vec![0; n], &edges))
    })
}

pub fn build(n: usize, letters: usize, data: &[usize], edges: &[bool]) -> DataGraph {
    let ids: Vec<String> = (0..n).map(|i| format!("n{i}")).collect();
    let vals: Vec<String> = data.iter().map(|d| d.to_string()).collect();
    let mut es = Vec::new();
    for (i, &on) in edges.iter().enumerate() {
        if on {
            let (u, rest) = (i / (n * letters), i % (n * letters));
            let (v, a) = (rest / letters, rest % letters);
            es.push((ids[u].as_str(), LETTERS[a], ids[v].as_str()));
        }
    }
    DataGraph::new(
        LETTERS[..letters].iter().copied(),
        ids.iter()
            .map(String::as_str)
            .zip(vals.iter().map(String::as_str)),
        es,
    )
    .unwrap()
}

pub fn binrel(n: usize) -> impl Strategy<Value = BinRel> {
    prop::collection::vec(prop::bool::weighted(0.3), n * n).prop_map(move |bits| {
        BinRel::from_pairs(n, (0..n * n).filter(|&i| bits[i]).map(|i| (i / n, i % n)))
    })
}

pub fn condition(k: usize) -> BoxedStrategy<Condition> {
    let leaf = prop_oneof![
        Just(Condition::True),
        (1..=k).prop_map(Condition::Eq),
        (1..=k).prop_map(Condition::Neq),
    ];
    leaf.prop_recursive(2, 4, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.and(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.or(b)),
            inner.prop_map(Condition::not),
        ]
    })
    .boxed()
}

/// REMs over `letters` letters using registers `1..=k`, at most `size`
/// AST nodes.
pub fn rem(letters: usize, k: usize, size: usize) -> impl Strategy<Value = RemExpr> {
    let leaf = prop_oneof![
        1 => Just(RemExpr::Eps),
        4 => (0..letters).prop_map(|a| RemExpr::letter(LETTERS[a])),
    ];
    leaf.prop_recursive(4, size as u32, 2, move |inner| {
        let mut alts: Vec<BoxedStrategy<RemExpr>> = vec![
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| a.union(b))
                .boxed(),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| a.concat(b))
                .boxed(),
            inner.clone().prop_map(RemExpr::plus).boxed(),
        ];
        if k > 0 {
            alts.push(
                (inner.clone(), condition(k))
                    .prop_map(|(e, c)| e.test(c))
                    .boxed(),
            );
            alts.push(
                (
                    inner,
                    prop::sample::subsequence((1..=k).collect::<Vec<_>>(), 1..=k),
                )
                    .prop_map(|(e, r)| RemExpr::store(r, e))
                    .boxed(),
            );
        }
        prop::strategy::Union::new(alts)
    })
    .prop_filter("size", move |e| e.size() <= size)
}

pub fn ree(letters: usize, size: usize) -> impl Strategy<Value = ReeExpr> {
    let leaf = prop_oneof![
        1 => Just(ReeExpr::Eps),
        4 => (0..letters).prop_map(|a| ReeExpr::letter(LETTERS[a])),
    ];
    leaf.prop_recursive(4, size as u32, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.union(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.concat(b)),
            inner.clone().prop_map(ReeExpr::plus),
            inner.clone().prop_map(ReeExpr::eq),
            inner.prop_map(ReeExpr::neq),
        ]
    })
    .prop_filter("size", move |e| e.size() <= size)
}

/// Node index of `id`, panicking when absent.
pub fn node(g: &DataGraph, id: &str) -> usize {
    g.node_index(id).unwrap()
}

/// The usual REM for an REE: a restriction at nesting depth `d` stores
/// the first value in `r(d+1)` and tests it against the last.
pub fn ree_as_rem(e: &ReeExpr) -> RemExpr {
    fn go(e: &ReeExpr, depth: usize) -> RemExpr {
        match e {
            ReeExpr::Eps => RemExpr::Eps,
            ReeExpr::Letter(a) => RemExpr::Letter(a.clone()),
            ReeExpr::Union(a, b) => go(a, depth).union(go(b, depth)),
            ReeExpr::Concat(a, b) => go(a, depth).concat(go(b, depth)),
            ReeExpr::Plus(a) => go(a, depth).plus(),
            ReeExpr::Eq(a) => RemExpr::store(
                vec![depth + 1],
                go(a, depth + 1).test(Condition::Eq(depth + 1)),
            ),
            ReeExpr::Neq(a) => RemExpr::store(
                vec![depth + 1],
                go(a, depth + 1).test(Condition::Neq(depth + 1)),
            ),
        }
    }
    go(e, 0)
}
