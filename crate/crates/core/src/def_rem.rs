//! k-RDPQ_mem and RDPQ_mem definability.
//!
//! A relation `S` is definable with `k` registers iff every pair of `S`
//! has a witness: a basic k-REM that connects the pair and whose language
//! connects no pair outside `S`. Witnesses are found by one breadth-first
//! search over subset tuples `⟨Q_1, …, Q_n⟩` of the assignment graph,
//! starting from `⟨{(v_1, ⊥^k)}, …, {(v_n, ⊥^k)}⟩`. A tuple reached by a
//! label sequence `e` witnesses `⟨v_u, v⟩` when slot `u` contains a state
//! at `v` and every state `(v', σ)` in every slot `i` has `⟨v_i, v'⟩ ∈ S`.
//!
//! With `k = δ` (the number of distinct values of the graph) the decider
//! answers full RDPQ_mem definability.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::hash::BuildHasher;

use hashbrown::hash_table::Entry;
use hashbrown::{DefaultHashBuilder, HashTable};

use crate::assign::{atomic_condition, AssignGraph, BlockLabel, SubsetTuple};
use crate::error::{Error, Result};
use crate::eval::eval_rem_query;
use crate::expr::{BasicRem, RemExpr};
use crate::graph::DataGraph;
use crate::relation::BinRel;
use crate::Decision;

/// Default cap on visited subset tuples.
pub const DEFAULT_BUDGET: usize = 1 << 22;

#[derive(Clone, Debug)]
pub struct WitnessReport {
    pub decision: Decision,
    pub registers: usize,
    pub relation: BinRel,
    /// One witness per pair of `S`, in pair order (definable reports only).
    pub witnesses: Vec<((usize, usize), BasicRem)>,
    /// The smallest pair without a witness (not-definable reports only).
    pub failing_pair: Option<(usize, usize)>,
    /// For `S = ∅` and `k = 0`: a word leading to the all-empty tuple.
    pub empty_witness: Option<BasicRem>,
    /// Subset tuples visited by the search.
    pub visited: usize,
}

impl WitnessReport {
    fn new(decision: Decision, k: usize, s: &BinRel) -> Self {
        WitnessReport {
            decision,
            registers: k,
            relation: s.clone(),
            witnesses: Vec::new(),
            failing_pair: None,
            empty_witness: None,
            visited: 0,
        }
    }
}

struct Search<'a> {
    ag: AssignGraph<'a>,
    hasher: DefaultHashBuilder,
    tuples: Vec<SubsetTuple>,
    parent: Vec<Option<(u32, BlockLabel)>>,
    index: HashTable<u32>,
}

impl Search<'_> {
    /// Index of `t`, and whether it was new.
    fn intern(&mut self, t: SubsetTuple, from: Option<(u32, BlockLabel)>) -> (u32, bool) {
        let h = self.hasher.hash_one(&t);
        let tuples = &self.tuples;
        let hasher = &self.hasher;
        match self.index.entry(
            h,
            |&i| tuples[i as usize] == t,
            |&i| hasher.hash_one(&tuples[i as usize]),
        ) {
            Entry::Occupied(o) => (*o.get(), false),
            Entry::Vacant(v) => {
                let i = self.tuples.len() as u32;
                v.insert(i);
                self.tuples.push(t);
                self.parent.push(from);
                (i, true)
            }
        }
    }

    fn witness(&self, mut i: u32) -> BasicRem {
        let g = self.ag.graph();
        let k = self.ag.registers();
        let mut blocks = Vec::new();
        while let Some((p, l)) = self.parent[i as usize] {
            blocks.push(l.to_block(g, k));
            i = p;
        }
        blocks.reverse();
        BasicRem::new(blocks)
    }
}

/// Searches for a k-REM witness for every pair of `s`, visiting at most
/// `budget` subset tuples.
pub fn find_witnesses(g: &DataGraph, s: &BinRel, k: usize, budget: usize) -> Result<WitnessReport> {
    let n = g.node_count();
    if s.nodes() != n {
        return Err(Error::NodeCountMismatch {
            expected: n,
            found: s.nodes(),
        });
    }
    if s.is_empty() && k >= 1 {
        return Ok(WitnessReport::new(Decision::Definable, k, s));
    }
    let ag = match AssignGraph::new(g, k) {
        Ok(ag) => ag,
        Err(Error::ResourceExhausted { .. }) => {
            return Ok(WitnessReport::new(Decision::ResourceExhausted, k, s))
        }
        Err(e) => return Err(e),
    };
    // For S = ∅ (and k = 0) the goal is the all-empty tuple.
    let want_empty = s.is_empty();
    let reach = {
        let mut step = BinRel::empty(n);
        for li in 0..g.alphabet().len() {
            step.union_with(&BinRel::letter(g, li));
        }
        step.transitive_closure().union(&BinRel::identity(n))
    };
    let mut pending: BTreeSet<(usize, usize)> = s.iter().collect();
    let mut found: BTreeMap<(usize, usize), u32> = BTreeMap::new();
    let mut goal_empty = None;

    let mut search = Search {
        ag,
        hasher: DefaultHashBuilder::default(),
        tuples: Vec::new(),
        parent: Vec::new(),
        index: HashTable::new(),
    };
    let start = search.ag.initial_tuple();
    let (root, _) = search.intern(start, None);

    // Records witnesses carried by tuple `i`; true when nothing is left.
    let check = |search: &Search<'_>,
                 i: u32,
                 pending: &mut BTreeSet<(usize, usize)>,
                 found: &mut BTreeMap<(usize, usize), u32>,
                 goal_empty: &mut Option<u32>|
     -> bool {
        let t = &search.tuples[i as usize];
        if want_empty {
            if t.is_empty() {
                *goal_empty = Some(i);
                return true;
            }
            return false;
        }
        let ag = &search.ag;
        if !t.iter().all(|(slot, id)| s.contains(slot, ag.node_of(id))) {
            return false;
        }
        for (slot, id) in t.iter() {
            let pair = (slot, ag.node_of(id));
            if pending.remove(&pair) {
                found.insert(pair, i);
            }
        }
        pending.is_empty()
    };
    let useful = |search: &Search<'_>, i: u32, pending: &BTreeSet<(usize, usize)>| -> bool {
        let t = &search.tuples[i as usize];
        if want_empty {
            return !t.is_empty();
        }
        let ag = &search.ag;
        t.iter().any(|(slot, id)| {
            let x = ag.node_of(id);
            pending
                .range((slot, 0)..(slot + 1, 0))
                .any(|&(_, v)| reach.contains(x, v))
        })
    };

    let letters = g.alphabet().len();
    let mut done = check(&search, root, &mut pending, &mut found, &mut goal_empty);
    let mut exhausted = false;
    let mut head = 0u32;
    'bfs: while !done && (head as usize) < search.tuples.len() {
        let i = head;
        head += 1;
        if !useful(&search, i, &pending) {
            continue;
        }
        for letter in 0..letters {
            for store in 0..1u32 << k {
                let next =
                    search
                        .ag
                        .step_all_types(&search.tuples[i as usize], letter, store, want_empty);
                for (eq, t) in next {
                    let label = BlockLabel { letter, store, eq };
                    let (j, fresh) = search.intern(t, Some((i, label)));
                    if !fresh {
                        continue;
                    }
                    if check(&search, j, &mut pending, &mut found, &mut goal_empty) {
                        done = true;
                        break 'bfs;
                    }
                    if search.tuples.len() > budget {
                        exhausted = true;
                        break 'bfs;
                    }
                }
            }
        }
    }

    let visited = search.tuples.len();
    let mut report = WitnessReport::new(Decision::NotDefinable, k, s);
    report.visited = visited;
    if done {
        report.decision = Decision::Definable;
        report.witnesses = found
            .iter()
            .map(|(&p, &i)| (p, search.witness(i)))
            .collect();
        report.empty_witness = goal_empty.map(|i| search.witness(i));
    } else if exhausted {
        report.decision = Decision::ResourceExhausted;
    } else {
        report.failing_pair = pending.first().copied();
    }
    Ok(report)
}

/// k-RDPQ_mem definability with the default budget; `k = 0` decides RPQ
/// definability.
pub fn decide_k_rem(g: &DataGraph, s: &BinRel, k: usize) -> Result<WitnessReport> {
    find_witnesses(g, s, k, DEFAULT_BUDGET)
}

/// RDPQ_mem definability, decided with `δ` registers.
pub fn decide_rem(g: &DataGraph, s: &BinRel) -> Result<WitnessReport> {
    decide_k_rem(g, s, g.distinct_values())
}

/// The union of the report's witnesses, checked to evaluate to exactly
/// the input relation.
pub fn synthesize_rem(g: &DataGraph, report: &WitnessReport) -> Result<RemExpr> {
    if report.decision != Decision::Definable {
        return Err(Error::NotDefinable);
    }
    let e = if report.relation.is_empty() {
        match &report.empty_witness {
            Some(w) => w.to_rem(),
            None => {
                // Unsatisfiable test: `r1== && r1!=`.
                let base = match g.alphabet().first() {
                    Some(a) => RemExpr::Letter(a.clone()),
                    None => RemExpr::Eps,
                };
                base.test(atomic_condition(1, 1).and(atomic_condition(1, 0)))
            }
        }
    } else {
        let mut distinct: Vec<&BasicRem> = Vec::new();
        for (_, w) in &report.witnesses {
            if !distinct.contains(&w) {
                distinct.push(w);
            }
        }
        distinct
            .into_iter()
            .map(BasicRem::to_rem)
            .reduce(RemExpr::union)
            .ok_or(Error::NotDefinable)?
    };
    if eval_rem_query(g, &e) != report.relation {
        return Err(Error::SynthesisMismatch);
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn fig1() -> DataGraph {
        DataGraph::new(
            ["a"],
            [
                ("v1", "0"),
                ("v2", "1"),
                ("v3", "0"),
                ("v4", "1"),
                ("z1", "3"),
                ("z2", "1"),
                ("v1'", "2"),
                ("v2'", "3"),
                ("v3'", "2"),
                ("v4'", "3"),
            ],
            [
                ("v1", "a", "v2"),
                ("v2", "a", "v3"),
                ("v3", "a", "v4"),
                ("v1", "a", "z2"),
                ("z2", "a", "v2"),
                ("z2", "a", "v1'"),
                ("v1'", "a", "v2'"),
                ("v2'", "a", "v3'"),
                ("v3'", "a", "v4'"),
                ("v2'", "a", "v4"),
                ("v3", "a", "v3'"),
                ("z1", "a", "z2"),
            ],
        )
        .unwrap()
    }

    fn rel(g: &DataGraph, pairs: &[(&str, &str)]) -> BinRel {
        BinRel::from_pairs(
            g.node_count(),
            pairs
                .iter()
                .map(|(u, v)| (g.node_index(u).unwrap(), g.node_index(v).unwrap())),
        )
    }

    #[test]
    fn s2_needs_two_registers() {
        let g = fig1();
        let s2 = rel(&g, &[("v1", "v4"), ("v1'", "v4'")]);
        let r = decide_k_rem(&g, &s2, 2).unwrap();
        assert_eq!(r.decision, Decision::Definable);
        assert_eq!(r.witnesses.len(), 2);
        let e = synthesize_rem(&g, &r).unwrap();
        assert_eq!(eval_rem_query(&g, &e), s2);
        assert_eq!(
            decide_k_rem(&g, &s2, 1).unwrap().decision,
            Decision::NotDefinable
        );
        assert_eq!(
            decide_k_rem(&g, &s2, 0).unwrap().decision,
            Decision::NotDefinable
        );
    }

    #[test]
    fn sink_source_is_not_definable() {
        let g = fig1();
        let s = rel(&g, &[("v4", "v1")]);
        for k in 0..3 {
            let r = decide_k_rem(&g, &s, k).unwrap();
            assert_eq!(r.decision, Decision::NotDefinable);
            assert_eq!(r.failing_pair, Some((3, 0)));
        }
    }

    #[test]
    fn empty_relation() {
        let g = fig1();
        let s = BinRel::empty(g.node_count());
        let r = decide_k_rem(&g, &s, 1).unwrap();
        assert!(r.decision.is_definable());
        let e = synthesize_rem(&g, &r).unwrap();
        assert_eq!(e.to_string(), "a[r1== && r1!=]");
        // Every node dies after four steps, so aaaa reaches the empty tuple.
        let r = decide_k_rem(&g, &s, 0).unwrap();
        assert!(r.decision.is_definable());
        assert!(eval_rem_query(&g, &synthesize_rem(&g, &r).unwrap()).is_empty());
    }

    #[test]
    fn identity_via_eps() {
        let g = fig1();
        let s = BinRel::identity(g.node_count());
        let r = decide_k_rem(&g, &s, 0).unwrap();
        assert!(r.decision.is_definable());
        assert!(r.witnesses.iter().all(|(_, w)| w.blocks.is_empty()));
        assert_eq!(eval_rem_query(&g, &synthesize_rem(&g, &r).unwrap()), s);
    }

    #[test]
    fn budget_is_reported() {
        let g = fig1();
        let s = rel(&g, &[("v1", "v2")]);
        let r = find_witnesses(&g, &s, 2, 3).unwrap();
        assert_eq!(r.decision, Decision::ResourceExhausted);
        assert!(synthesize_rem(&g, &r).is_err());
    }
}
