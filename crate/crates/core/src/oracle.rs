//! Brute-force reference implementations for tests.
//!
//! Everything here is exponential by design and avoids the production
//! algorithms it is compared against: paths are enumerated explicitly,
//! relations are plain pair sets, and homomorphisms are found by trying
//! every map.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::eval::{Crdpq, PathExpr};
use crate::expr::{ree_member, rem_lang_member, rem_match, Condition, ReeExpr, RemExpr};
use crate::graph::{DataGraph, Letter, Value};
use crate::path::DataPath;
use crate::relation::{BinRel, NodeRelation};

type Pairs = BTreeSet<(usize, usize)>;

/// Every data path of at most `max_letters` letters, grouped by its
/// endpoints. Within a group paths appear in depth-first order.
pub fn enum_paths(g: &DataGraph, max_letters: usize) -> BTreeMap<(usize, usize), Vec<DataPath>> {
    fn go(
        g: &DataGraph,
        start: usize,
        at: usize,
        left: usize,
        values: &mut Vec<Value>,
        letters: &mut Vec<Letter>,
        out: &mut BTreeMap<(usize, usize), Vec<DataPath>>,
    ) {
        out.entry((start, at))
            .or_default()
            .push(DataPath::new(values.clone(), letters.clone()).expect("well-formed"));
        if left == 0 {
            return;
        }
        for e in g.edges().iter().filter(|e| e.from == at) {
            values.push(g.value(e.to).clone());
            letters.push(g.alphabet()[e.letter].clone());
            go(g, start, e.to, left - 1, values, letters, out);
            values.pop();
            letters.pop();
        }
    }
    let mut out = BTreeMap::new();
    for u in 0..g.node_count() {
        let mut values = alloc::vec![g.value(u).clone()];
        go(g, u, u, max_letters, &mut values, &mut Vec::new(), &mut out);
    }
    out
}

fn to_binrel(n: usize, pairs: &Pairs) -> BinRel {
    BinRel::from_pairs(n, pairs.iter().copied())
}

/// Pairs connected by a path of at most `max_letters` letters whose data
/// path is in `L(e)`.
pub fn eval_rem_by_paths(g: &DataGraph, e: &RemExpr, max_letters: usize) -> BinRel {
    let pairs: Pairs = enum_paths(g, max_letters)
        .into_iter()
        .filter(|(_, ws)| ws.iter().any(|w| rem_lang_member(e, w)))
        .map(|(p, _)| p)
        .collect();
    to_binrel(g.node_count(), &pairs)
}

pub fn eval_ree_by_paths(g: &DataGraph, e: &ReeExpr, max_letters: usize) -> BinRel {
    let pairs: Pairs = enum_paths(g, max_letters)
        .into_iter()
        .filter(|(_, ws)| ws.iter().any(|w| ree_member(e, w)))
        .map(|(p, _)| p)
        .collect();
    to_binrel(g.node_count(), &pairs)
}

/// `{(v, σ') | some data path w of exactly `letters` letters connects u
/// to v and (e, w, σ) ⊢ σ'}`.
pub fn run_reach_by_paths(
    g: &DataGraph,
    u: usize,
    sigma: &[Option<Value>],
    e: &RemExpr,
    letters: usize,
) -> BTreeSet<(usize, Vec<Option<Value>>)> {
    let mut out = BTreeSet::new();
    for ((from, to), ws) in enum_paths(g, letters) {
        if from != u {
            continue;
        }
        for w in ws.iter().filter(|w| w.len() == letters) {
            if let Ok(finals) = rem_match(e, w, sigma) {
                out.extend(finals.into_iter().map(|s| (to, s)));
            }
        }
    }
    out
}

/// Is there a bijection between the values of `w1` and `w2` mapping one
/// path onto the other?
pub fn automorphic_bruteforce<V: Clone + Ord>(w1: &DataPath<V>, w2: &DataPath<V>) -> bool {
    if w1.letters() != w2.letters() {
        return false;
    }
    let d1: Vec<V> = w1
        .values()
        .iter()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let d2: Vec<V> = w2
        .values()
        .iter()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if d1.len() != d2.len() {
        return false;
    }
    let mut perm: Vec<usize> = (0..d2.len()).collect();
    loop {
        let ok = w1.values().iter().zip(w2.values()).all(|(a, b)| {
            let i = d1.iter().position(|x| x == a).expect("value of w1");
            d2[perm[i]] == *b
        });
        if ok {
            return true;
        }
        if !next_permutation(&mut perm) {
            return false;
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len())
        .rev()
        .find(|&j| p[j] > p[i - 1])
        .expect("pivot");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Pairs connected by at least one edge, by repeated relaxation.
fn reach_pairs(g: &DataGraph) -> Pairs {
    let mut r: Pairs = g.edges().iter().map(|e| (e.from, e.to)).collect();
    loop {
        let extra: Vec<(usize, usize)> = r
            .iter()
            .flat_map(|&(p, q)| {
                r.iter()
                    .filter(move |&&(q2, _)| q2 == q)
                    .map(move |&(_, s)| (p, s))
            })
            .filter(|x| !r.contains(x))
            .collect();
        if extra.is_empty() {
            return r;
        }
        r.extend(extra);
    }
}

/// Every map `V → V` satisfying the homomorphism conditions, in
/// lexicographic order.
pub fn enum_homs_bruteforce(g: &DataGraph) -> Vec<Vec<usize>> {
    let n = g.node_count();
    let edges: BTreeSet<(usize, usize, usize)> =
        g.edges().iter().map(|e| (e.from, e.letter, e.to)).collect();
    let reach = reach_pairs(g);
    let same = |p: usize, q: usize| g.value(p) == g.value(q);
    let mut out = Vec::new();
    let mut h = alloc::vec![0usize; n];
    loop {
        let ok = edges
            .iter()
            .all(|&(p, a, q)| edges.contains(&(h[p], a, h[q])))
            && reach.iter().all(|&(p, q)| same(p, q) == same(h[p], h[q]));
        if ok {
            out.push(h.clone());
        }
        // odometer, last position fastest
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            h[i] += 1;
            if h[i] < n {
                break;
            }
            h[i] = 0;
        }
    }
}

/// All valuations of the query's variables, with atoms evaluated by path
/// enumeration up to `max_letters` letters.
pub fn eval_crdpq_bruteforce(g: &DataGraph, q: &Crdpq, max_letters: usize) -> NodeRelation {
    let n = g.node_count();
    let vars = q.variables();
    let rels: Vec<BinRel> = q
        .atoms()
        .iter()
        .map(|a| match &a.expr {
            PathExpr::Rem(e) => eval_rem_by_paths(g, e, max_letters),
            PathExpr::Ree(e) => eval_ree_by_paths(g, e, max_letters),
        })
        .collect();
    let pos = |x: &str| vars.iter().position(|v| *v == x).expect("variable");
    let mut out = NodeRelation::new(q.arity()).expect("positive arity");
    if n == 0 {
        return out;
    }
    let mut val = alloc::vec![0usize; vars.len()];
    loop {
        let ok = q
            .atoms()
            .iter()
            .zip(&rels)
            .all(|(a, r)| r.contains(val[pos(&a.from)], val[pos(&a.to)]));
        if ok {
            out.insert_unchecked(q.answer().iter().map(|z| val[pos(z)]).collect());
        }
        let mut i = vars.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            val[i] += 1;
            if val[i] < n {
                break;
            }
            val[i] = 0;
        }
    }
}

fn compose(a: &Pairs, b: &Pairs) -> Pairs {
    a.iter()
        .flat_map(|&(p, q)| {
            b.iter()
                .filter(move |&&(q2, _)| q2 == q)
                .map(move |&(_, s)| (p, s))
        })
        .collect()
}

/// Levels `L_0 … L_max_level` computed on explicit relation sets by
/// pairwise closure under union and composition. Entry `i` is `L_i`.
pub fn levels_bruteforce(g: &DataGraph, max_level: usize) -> Vec<BTreeSet<BinRel>> {
    let n = g.node_count();
    let close = |mut set: BTreeSet<Pairs>| -> BTreeSet<Pairs> {
        loop {
            let items: Vec<Pairs> = set.iter().cloned().collect();
            let mut grew = false;
            for a in &items {
                for b in &items {
                    for c in [a.union(b).copied().collect(), compose(a, b)] {
                        grew |= set.insert(c);
                    }
                }
            }
            if !grew {
                return set;
            }
        }
    };
    let mut base: BTreeSet<Pairs> = BTreeSet::new();
    base.insert((0..n).map(|p| (p, p)).collect());
    for li in 0..g.alphabet().len() {
        base.insert(
            g.edges()
                .iter()
                .filter(|e| e.letter == li)
                .map(|e| (e.from, e.to))
                .collect(),
        );
    }
    let mut level = close(base);
    let mut out = Vec::new();
    for i in 0..=max_level {
        out.push(level.iter().map(|p| to_binrel(n, p)).collect());
        if i == max_level {
            break;
        }
        let mut next = level.clone();
        for r in &level {
            next.insert(
                r.iter()
                    .copied()
                    .filter(|&(p, q)| g.value(p) == g.value(q))
                    .collect(),
            );
            next.insert(
                r.iter()
                    .copied()
                    .filter(|&(p, q)| g.value(p) != g.value(q))
                    .collect(),
            );
        }
        level = close(next);
    }
    out
}

/// RPQ definability by exploring `{R_w | w ∈ Σ*}` directly:
/// `R_ε` is the identity and `R_{wa} = R_w ∘ S_a`. `S` is definable iff it
/// is the union of the `R_w` it contains (or, for `S = ∅`, some `R_w` is
/// empty).
pub fn rpq_definable_bruteforce(g: &DataGraph, s: &BinRel) -> bool {
    let n = g.node_count();
    let target: Pairs = s.iter().collect();
    let letters: Vec<Pairs> = (0..g.alphabet().len())
        .map(|li| {
            g.edges()
                .iter()
                .filter(|e| e.letter == li)
                .map(|e| (e.from, e.to))
                .collect()
        })
        .collect();
    let mut seen: BTreeSet<Pairs> = BTreeSet::new();
    let mut queue: Vec<Pairs> = alloc::vec![(0..n).map(|p| (p, p)).collect()];
    while let Some(r) = queue.pop() {
        if !seen.insert(r.clone()) {
            continue;
        }
        for a in &letters {
            queue.push(compose(&r, a));
        }
    }
    if target.is_empty() {
        return seen.iter().any(|r| r.is_empty());
    }
    let covered: Pairs = seen
        .iter()
        .filter(|r| r.is_subset(&target))
        .flatten()
        .copied()
        .collect();
    covered == target
}

fn conditions(k: usize) -> Vec<Condition> {
    let mut out = alloc::vec![Condition::True];
    for r in 1..=k {
        out.push(Condition::Eq(r));
        out.push(Condition::Neq(r));
    }
    out
}

fn store_sets(k: usize) -> Vec<Vec<usize>> {
    (1u32..1 << k)
        .map(|m| (0..k).filter(|i| m >> i & 1 == 1).map(|i| i + 1).collect())
        .collect()
}

/// All REMs with at most `size` AST nodes over `sigma` using registers
/// `1..=k`, by size then construction order. Conditions are `true` or a
/// single `ri==` / `ri!=`; store sets are nonempty.
pub fn enum_rem(size: usize, sigma: &[&str], k: usize) -> Vec<RemExpr> {
    let mut by_size: Vec<Vec<RemExpr>> = alloc::vec![Vec::new()];
    for s in 1..=size {
        let mut cur = Vec::new();
        if s == 1 {
            cur.push(RemExpr::Eps);
            cur.extend(sigma.iter().map(|a| RemExpr::letter(a)));
        } else {
            for e in &by_size[s - 1] {
                cur.push(RemExpr::Plus(Box::new(e.clone())));
                for c in conditions(k) {
                    cur.push(RemExpr::Test(Box::new(e.clone()), c));
                }
                for r in store_sets(k) {
                    cur.push(RemExpr::Store(r, Box::new(e.clone())));
                }
            }
            for i in 1..s - 1 {
                for a in &by_size[i] {
                    for b in &by_size[s - 1 - i] {
                        cur.push(RemExpr::Union(Box::new(a.clone()), Box::new(b.clone())));
                        cur.push(RemExpr::Concat(Box::new(a.clone()), Box::new(b.clone())));
                    }
                }
            }
        }
        by_size.push(cur);
    }
    by_size.into_iter().flatten().collect()
}

/// All REEs with at most `size` AST nodes over `sigma`.
pub fn enum_ree(size: usize, sigma: &[&str]) -> Vec<ReeExpr> {
    let mut by_size: Vec<Vec<ReeExpr>> = alloc::vec![Vec::new()];
    for s in 1..=size {
        let mut cur = Vec::new();
        if s == 1 {
            cur.push(ReeExpr::Eps);
            cur.extend(sigma.iter().map(|a| ReeExpr::letter(a)));
        } else {
            for e in &by_size[s - 1] {
                cur.push(ReeExpr::Plus(Box::new(e.clone())));
                cur.push(ReeExpr::Eq(Box::new(e.clone())));
                cur.push(ReeExpr::Neq(Box::new(e.clone())));
            }
            for i in 1..s - 1 {
                for a in &by_size[i] {
                    for b in &by_size[s - 1 - i] {
                        cur.push(ReeExpr::Union(Box::new(a.clone()), Box::new(b.clone())));
                        cur.push(ReeExpr::Concat(Box::new(a.clone()), Box::new(b.clone())));
                    }
                }
            }
        }
        by_size.push(cur);
    }
    by_size.into_iter().flatten().collect()
}
