use alloc::vec::Vec;

use crate::expr::{registers_of, Condition, RemExpr};
use crate::graph::Letter;

/// Operation applied at the current position without consuming a letter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PosOp {
    /// Write the current value into the registers (1-based).
    Store(Vec<usize>),
    /// Continue only if the condition holds for the current value.
    Test(Condition),
    Silent,
}

/// An automaton over data paths with `registers` registers: position
/// transitions act on the current value, letter transitions move along an
/// edge.
#[derive(Clone, Debug)]
pub struct RegisterAutomaton {
    pub states: usize,
    pub initial: usize,
    pub finals: Vec<usize>,
    pub registers: usize,
    pub ops: Vec<(usize, PosOp, usize)>,
    pub letters: Vec<(usize, Letter, usize)>,
}

impl RegisterAutomaton {
    /// Position transitions grouped by source state.
    pub(crate) fn ops_by_state(&self) -> Vec<Vec<(&PosOp, usize)>> {
        let mut out = alloc::vec![Vec::new(); self.states];
        for (s, op, t) in &self.ops {
            out[*s].push((op, *t));
        }
        out
    }

    pub fn is_final(&self, s: usize) -> bool {
        self.finals.contains(&s)
    }
}

struct Builder {
    states: usize,
    ops: Vec<(usize, PosOp, usize)>,
    letters: Vec<(usize, Letter, usize)>,
}

impl Builder {
    fn fresh(&mut self) -> usize {
        self.states += 1;
        self.states - 1
    }

    /// Returns the (initial, final) pair of the fragment for `e`.
    fn build(&mut self, e: &RemExpr) -> (usize, usize) {
        match e {
            RemExpr::Eps => {
                let s = self.fresh();
                (s, s)
            }
            RemExpr::Letter(a) => {
                let (s, t) = (self.fresh(), self.fresh());
                self.letters.push((s, a.clone(), t));
                (s, t)
            }
            RemExpr::Union(a, b) => {
                let (i, f) = (self.fresh(), self.fresh());
                for part in [a, b] {
                    let (pi, pf) = self.build(part);
                    self.ops.push((i, PosOp::Silent, pi));
                    self.ops.push((pf, PosOp::Silent, f));
                }
                (i, f)
            }
            RemExpr::Concat(a, b) => {
                let (ai, af) = self.build(a);
                let (bi, bf) = self.build(b);
                // no letter between the parts: they share the boundary value
                self.ops.push((af, PosOp::Silent, bi));
                (ai, bf)
            }
            RemExpr::Plus(body) => {
                let (i, f) = (self.fresh(), self.fresh());
                let (bi, bf) = self.build(body);
                self.ops.push((i, PosOp::Silent, bi));
                self.ops.push((bf, PosOp::Silent, f));
                self.ops.push((bf, PosOp::Silent, bi));
                (i, f)
            }
            RemExpr::Test(body, c) => {
                let (bi, bf) = self.build(body);
                let f = self.fresh();
                self.ops.push((bf, PosOp::Test(c.clone()), f));
                (bi, f)
            }
            RemExpr::Store(rs, body) => {
                let i = self.fresh();
                let (bi, bf) = self.build(body);
                self.ops.push((i, PosOp::Store(rs.clone()), bi));
                (i, bf)
            }
        }
    }
}

/// Compiles an REM into an equivalent register automaton.
pub fn compile_rem(e: &RemExpr) -> RegisterAutomaton {
    let mut b = Builder {
        states: 0,
        ops: Vec::new(),
        letters: Vec::new(),
    };
    let (initial, fin) = b.build(e);
    RegisterAutomaton {
        states: b.states,
        initial,
        finals: alloc::vec![fin],
        registers: registers_of(e),
        ops: b.ops,
        letters: b.letters,
    }
}
