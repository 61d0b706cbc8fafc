//! UCRDPQ definability via data graph homomorphisms.
//!
//! A relation `S` is UCRDPQ-definable iff every homomorphism `h` of the
//! graph into itself maps tuples of `S` to tuples of `S`. A homomorphism
//! preserves labelled edges, and for every pair `p ⇝ q` connected by a
//! nonempty path it preserves whether `p` and `q` carry the same value.
//!
//! When `S` is closed, the union over its tuples of the canonical query
//! `φ_G` defines it; `φ_G` has one variable per node, an atom per edge and
//! a `(Σ^+)_=` or `(Σ^+)_≠` atom per reachable pair.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::eval::{eval_ucrdpq, Atom, Crdpq, PathExpr, Ucrdpq};
use crate::expr::ReeExpr;
use crate::graph::DataGraph;
use crate::relation::{BinRel, NodeRelation};
use crate::Decision;

/// Default cap on search nodes of the homomorphism enumeration.
pub const DEFAULT_BUDGET: usize = 1 << 26;

/// Pairs connected by a path of at least one edge.
fn reach_plus(g: &DataGraph) -> BinRel {
    let mut step = BinRel::empty(g.node_count());
    for li in 0..g.alphabet().len() {
        step.union_with(&BinRel::letter(g, li));
    }
    step.transitive_closure()
}

/// Reachable pairs (at least one edge) split into those with equal and
/// those with different values: `((Σ^+)_=(G), (Σ^+)_≠(G))`.
pub fn reachable_pairs(g: &DataGraph) -> (NodeRelation, NodeRelation) {
    let r = reach_plus(g);
    (
        NodeRelation::from(r.restrict_eq(g)),
        NodeRelation::from(r.restrict_neq(g)),
    )
}

/// A node map checked to be a data graph homomorphism.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GraphHomomorphism(Vec<usize>);

impl GraphHomomorphism {
    pub fn identity(n: usize) -> Self {
        GraphHomomorphism((0..n).collect())
    }

    pub fn certify(g: &DataGraph, map: Vec<usize>) -> Option<Self> {
        is_homomorphism(g, &map).then_some(GraphHomomorphism(map))
    }

    pub fn map(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, t: &[usize]) -> Vec<usize> {
        t.iter().map(|&p| self.0[p]).collect()
    }

    /// `self ∘ other`, i.e. `p ↦ self(other(p))`.
    pub fn after(&self, other: &GraphHomomorphism) -> Vec<usize> {
        other.0.iter().map(|&p| self.0[p]).collect()
    }
}

/// Checks single-step compatibility and data compatibility of reachable
/// pairs. Maps of the wrong length or with out-of-range images are
/// rejected.
pub fn is_homomorphism(g: &DataGraph, h: &[usize]) -> bool {
    let n = g.node_count();
    if h.len() != n || h.iter().any(|&x| x >= n) {
        return false;
    }
    if !g
        .edges()
        .iter()
        .all(|e| g.has_edge(h[e.from], e.letter, h[e.to]))
    {
        return false;
    }
    reach_plus(g)
        .iter()
        .all(|(p, q)| g.same_value(p, q) == g.same_value(h[p], h[q]))
}

struct HomSearch<'g> {
    g: &'g DataGraph,
    reach: BinRel,
    // (letter, other endpoint) per node
    out: Vec<Vec<(usize, usize)>>,
    inc: Vec<Vec<(usize, usize)>>,
    budget: usize,
    steps: usize,
}

impl<'g> HomSearch<'g> {
    fn new(g: &'g DataGraph, budget: usize) -> Self {
        let n = g.node_count();
        let mut out = alloc::vec![Vec::new(); n];
        let mut inc = alloc::vec![Vec::new(); n];
        for e in g.edges() {
            out[e.from].push((e.letter, e.to));
            inc[e.to].push((e.letter, e.from));
        }
        HomSearch {
            g,
            reach: reach_plus(g),
            out,
            inc,
            budget,
            steps: 0,
        }
    }

    fn fits(&self, h: &[usize], p: usize, x: usize) -> bool {
        let g = self.g;
        let image = |q: usize| if q == p { x } else { h[q] };
        self.out[p]
            .iter()
            .filter(|&&(_, q)| q <= p)
            .all(|&(a, q)| g.has_edge(x, a, image(q)))
            && self.inc[p]
                .iter()
                .filter(|&&(_, q)| q < p)
                .all(|&(a, q)| g.has_edge(h[q], a, x))
            && (0..p)
                .filter(|&q| self.reach.contains(p, q) || self.reach.contains(q, p))
                .all(|q| g.same_value(p, q) == g.same_value(x, h[q]))
    }

    /// Calls `f` on every homomorphism with `h(v_0) ∈ first`, in
    /// lexicographic order.
    fn run<B>(
        &mut self,
        first: core::ops::Range<usize>,
        f: &mut dyn FnMut(&[usize]) -> ControlFlow<B>,
    ) -> Result<ControlFlow<B>> {
        let n = self.g.node_count();
        if n == 0 {
            return Ok(f(&[]));
        }
        let mut h = alloc::vec![0usize; n];
        // next candidate to try per position
        let mut next = alloc::vec![0usize; n];
        next[0] = first.start;
        let mut p = 0usize;
        loop {
            let limit = if p == 0 { first.end.min(n) } else { n };
            let mut placed = false;
            while next[p] < limit {
                let x = next[p];
                next[p] += 1;
                self.steps += 1;
                if self.steps > self.budget {
                    return Err(Error::ResourceExhausted {
                        budget: self.budget,
                    });
                }
                if self.fits(&h, p, x) {
                    h[p] = x;
                    placed = true;
                    break;
                }
            }
            if placed {
                if p + 1 == n {
                    if let ControlFlow::Break(b) = f(&h) {
                        return Ok(ControlFlow::Break(b));
                    }
                } else {
                    p += 1;
                    next[p] = 0;
                }
            } else if p == 0 {
                return Ok(ControlFlow::Continue(()));
            } else {
                p -= 1;
            }
        }
    }
}

/// All homomorphisms in lexicographic order.
pub fn enumerate_homomorphisms(g: &DataGraph, budget: usize) -> Result<Vec<GraphHomomorphism>> {
    let mut out = Vec::new();
    let mut s = HomSearch::new(g, budget);
    let _ = s.run::<()>(0..g.node_count(), &mut |h| {
        out.push(GraphHomomorphism(h.to_vec()));
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// `h(tuple) = image ∉ S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub hom: GraphHomomorphism,
    pub tuple: Vec<usize>,
    pub image: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct UcqReport {
    pub decision: Decision,
    pub counterexample: Option<Counterexample>,
    /// Homomorphisms examined.
    pub homomorphisms: usize,
}

fn check_nodes(g: &DataGraph, s: &NodeRelation) -> Result<()> {
    let n = g.node_count();
    match s.iter().flatten().find(|&&p| p >= n) {
        Some(&p) => Err(Error::NodeOutOfRange { index: p, nodes: n }),
        None => Ok(()),
    }
}

/// Searches homomorphisms with `h(v_0)` in `first` for one that moves a
/// tuple of `s` outside `s`. The first counterexample in lexicographic
/// order of `h` (then tuple order) is reported, so splitting `0..n` into
/// ranges and keeping the leftmost counterexample reproduces the
/// sequential answer.
pub fn decide_ucrdpq_range(
    g: &DataGraph,
    s: &NodeRelation,
    first: core::ops::Range<usize>,
    budget: usize,
) -> Result<UcqReport> {
    check_nodes(g, s)?;
    let mut search = HomSearch::new(g, budget);
    let mut homs = 0usize;
    let outcome = search.run(first, &mut |h| {
        homs += 1;
        for t in s.iter() {
            let image: Vec<usize> = t.iter().map(|&p| h[p]).collect();
            if !s.contains(&image) {
                return ControlFlow::Break(Counterexample {
                    hom: GraphHomomorphism(h.to_vec()),
                    tuple: t.to_vec(),
                    image,
                });
            }
        }
        ControlFlow::Continue(())
    });
    Ok(match outcome {
        Ok(ControlFlow::Break(c)) => UcqReport {
            decision: Decision::NotDefinable,
            counterexample: Some(c),
            homomorphisms: homs,
        },
        Ok(ControlFlow::Continue(())) => UcqReport {
            decision: Decision::Definable,
            counterexample: None,
            homomorphisms: homs,
        },
        Err(Error::ResourceExhausted { .. }) => UcqReport {
            decision: Decision::ResourceExhausted,
            counterexample: None,
            homomorphisms: homs,
        },
        Err(e) => return Err(e),
    })
}

/// UCRDPQ definability: `S` is closed under every homomorphism.
pub fn decide_ucrdpq(g: &DataGraph, s: &NodeRelation) -> Result<UcqReport> {
    decide_ucrdpq_range(g, s, 0..g.node_count(), DEFAULT_BUDGET)
}

fn var(p: usize) -> String {
    format!("x{}", p + 1)
}

/// The atoms of `φ_G` over variables `x1 … xn` (node order): one per
/// edge, one `(Σ^+)_=` or `(Σ^+)_!=` atom per reachable pair, and
/// `xi -[eps]-> xi` for nodes mentioned by neither.
pub fn phi_atoms(g: &DataGraph) -> Vec<Atom> {
    let n = g.node_count();
    let mut atoms = Vec::new();
    let mut mentioned = alloc::vec![false; n];
    let mut push = |atoms: &mut Vec<Atom>, p: usize, e: ReeExpr, q: usize| {
        mentioned[p] = true;
        mentioned[q] = true;
        atoms.push(Atom {
            from: var(p),
            expr: PathExpr::Ree(e),
            to: var(q),
        });
    };
    for e in g.edges() {
        push(
            &mut atoms,
            e.from,
            ReeExpr::Letter(g.alphabet()[e.letter].clone()),
            e.to,
        );
    }
    let sigma_plus = g
        .alphabet()
        .iter()
        .map(|a| ReeExpr::Letter(a.clone()))
        .reduce(ReeExpr::union)
        .map(ReeExpr::plus);
    if let Some(sp) = sigma_plus {
        for (p, q) in reach_plus(g).iter() {
            let e = if g.same_value(p, q) {
                sp.clone().eq()
            } else {
                sp.clone().neq()
            };
            push(&mut atoms, p, e, q);
        }
    }
    for (p, seen) in mentioned.iter().enumerate() {
        if !seen {
            atoms.push(Atom {
                from: var(p),
                expr: PathExpr::Ree(ReeExpr::Eps),
                to: var(p),
            });
        }
    }
    atoms
}

/// The union of `Ans(x_{p1}, …, x_{pr}) := φ_G` over the tuples of `s`,
/// checked to evaluate to exactly `s`. Fails unless `s` is definable.
pub fn synthesize_ucrdpq(g: &DataGraph, s: &NodeRelation) -> Result<Ucrdpq> {
    let report = decide_ucrdpq(g, s)?;
    match report.decision {
        Decision::Definable => {}
        Decision::NotDefinable => return Err(Error::NotDefinable),
        Decision::ResourceExhausted => {
            return Err(Error::ResourceExhausted {
                budget: DEFAULT_BUDGET,
            })
        }
    }
    let q = if s.is_empty() {
        Ucrdpq::empty(s.arity())?
    } else {
        let atoms = phi_atoms(g);
        let members = s
            .iter()
            .map(|t| Crdpq::new(t.iter().map(|&p| var(p)).collect(), atoms.clone()))
            .collect::<Result<Vec<_>>>()?;
        Ucrdpq::new(members)?
    };
    if eval_ucrdpq(g, &q) != *s {
        return Err(Error::SynthesisMismatch);
    }
    Ok(q)
}
