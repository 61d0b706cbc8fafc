//! RDPQ_mem evaluation: reachability over configurations
//! `(automaton state, node, register assignment)`.

use alloc::boxed::Box;
use alloc::vec::Vec;

use hashbrown::HashSet;

use super::automaton::{compile_rem, PosOp, RegisterAutomaton};
use crate::expr::semantics::eval_unchecked;
use crate::expr::RemExpr;
use crate::graph::DataGraph;
use crate::relation::BinRel;

/// Registers hold dense value indices of the graph; `None` is `⊥`.
type Regs = Box<[Option<u32>]>;

struct Prepared<'a> {
    g: &'a DataGraph,
    ops: Vec<Vec<(&'a PosOp, usize)>>,
    // letter transitions by state, with the graph's letter index
    steps: Vec<Vec<(usize, usize)>>,
    finals: Vec<bool>,
}

impl<'a> Prepared<'a> {
    fn new(g: &'a DataGraph, a: &'a RegisterAutomaton) -> Self {
        let mut steps = alloc::vec![Vec::new(); a.states];
        for (s, l, t) in &a.letters {
            if let Some(li) = g.letter_index(l.as_str()) {
                steps[*s].push((li, *t));
            }
        }
        let mut finals = alloc::vec![false; a.states];
        for &f in &a.finals {
            finals[f] = true;
        }
        Prepared {
            g,
            ops: a.ops_by_state(),
            steps,
            finals,
        }
    }

    /// Applies position operations at `node` until no new configuration
    /// appears. `seen` is shared so already-explored configurations are
    /// skipped; newly found ones are appended to `out`.
    fn close(
        &self,
        node: usize,
        start: Vec<(usize, Regs)>,
        seen: &mut HashSet<(usize, usize, Regs)>,
        out: &mut Vec<(usize, Regs)>,
    ) {
        let d = self.g.value_index(node);
        let mut stack = Vec::new();
        for (s, r) in start {
            if seen.insert((s, node, r.clone())) {
                stack.push((s, r));
            }
        }
        while let Some((s, r)) = stack.pop() {
            for &(op, t) in &self.ops[s] {
                let next = match op {
                    PosOp::Silent => r.clone(),
                    PosOp::Store(rs) => {
                        let mut n = r.clone();
                        for &i in rs {
                            n[i - 1] = Some(d);
                        }
                        n
                    }
                    PosOp::Test(c) => {
                        if !eval_unchecked(c, &d, &r) {
                            continue;
                        }
                        r.clone()
                    }
                };
                if seen.insert((t, node, next.clone())) {
                    stack.push((t, next));
                }
            }
            out.push((s, r));
        }
    }
}

/// `⟨u,v⟩` such that some data path from `u` to `v` is in `L(e)`.
pub fn eval_rem_query(g: &DataGraph, e: &RemExpr) -> BinRel {
    let a = compile_rem(e);
    eval_automaton(g, &a)
}

pub fn eval_automaton(g: &DataGraph, a: &RegisterAutomaton) -> BinRel {
    let p = Prepared::new(g, a);
    let n = g.node_count();
    let mut result = BinRel::empty(n);
    let empty: Regs = alloc::vec![None; a.registers].into_boxed_slice();
    for u in 0..n {
        let mut seen = HashSet::new();
        let mut work: Vec<(usize, Vec<(usize, Regs)>)> =
            alloc::vec![(u, alloc::vec![(a.initial, empty.clone())])];
        while let Some((node, start)) = work.pop() {
            let mut found = Vec::new();
            p.close(node, start, &mut seen, &mut found);
            for (s, r) in found {
                if p.finals[s] {
                    result.insert(u, node);
                }
                for &(li, t) in &p.steps[s] {
                    for &next in g.successors(node, li) {
                        work.push((next, alloc::vec![(t, r.clone())]));
                    }
                }
            }
        }
    }
    result
}

/// Like [`eval_rem_query`] but only over data paths with at most
/// `max_letters` letters.
pub fn eval_rem_bounded(g: &DataGraph, e: &RemExpr, max_letters: usize) -> BinRel {
    let a = compile_rem(e);
    let p = Prepared::new(g, &a);
    let n = g.node_count();
    let mut result = BinRel::empty(n);
    let empty: Regs = alloc::vec![None; a.registers].into_boxed_slice();
    for u in 0..n {
        // Configurations reachable with exactly `len` letters.
        let mut layer: Vec<(usize, Vec<(usize, Regs)>)> =
            alloc::vec![(u, alloc::vec![(a.initial, empty.clone())])];
        for len in 0..=max_letters {
            let mut seen = HashSet::new();
            let mut next_layer: Vec<(usize, Vec<(usize, Regs)>)> = Vec::new();
            for (node, start) in layer {
                let mut found = Vec::new();
                p.close(node, start, &mut seen, &mut found);
                for (s, r) in found {
                    if p.finals[s] {
                        result.insert(u, node);
                    }
                    if len == max_letters {
                        continue;
                    }
                    for &(li, t) in &p.steps[s] {
                        for &next in g.successors(node, li) {
                            next_layer.push((next, alloc::vec![(t, r.clone())]));
                        }
                    }
                }
            }
            if next_layer.is_empty() {
                break;
            }
            layer = next_layer;
        }
    }
    result
}

/// RPQ evaluation: a plain regular expression read as a 0-register REM.
pub fn eval_rpq(g: &DataGraph, e: &RemExpr) -> BinRel {
    eval_rem_query(g, e)
}
