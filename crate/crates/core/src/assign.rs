//! The k-assignment graph `T_G` and its subset-tuple transition system.
//!
//! States are pairs `(v, σ)` of a node and a register assignment over the
//! graph's values. A transition `↓r̄.a[c]` from `(v, σ)` follows an
//! `a`-edge `v → v'`, stores `ρ(v)` into `r̄` and then tests `c` against
//! `ρ(v')`.
//!
//! Block labels carry atomic types only: every register is tested for
//! either `=` or `≠`. A state's successor under a store set and a letter
//! has exactly one atomic type, so [`AssignGraph`] precomputes successor
//! lists tagged with that type.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::expr::{cond_eval, BasicRem, Block, Condition};
use crate::graph::DataGraph;

/// A state of `T_G`. Registers hold value indices of the graph
/// ([`DataGraph::value_index`]); `None` is `⊥`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct AssignState {
    pub node: usize,
    pub regs: Vec<Option<u32>>,
}

impl AssignState {
    /// `(node, ⊥^k)`.
    pub fn initial(node: usize, k: usize) -> Self {
        AssignState {
            node,
            regs: alloc::vec![None; k],
        }
    }
}

/// `↓r̄.a[τ]` with `τ` an atomic type.
///
/// Bit `i` of `store` means register `i + 1` is stored; bit `i` of `eq`
/// means register `i + 1` is tested with `=`, otherwise with `≠`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct BlockLabel {
    pub letter: usize,
    pub store: u32,
    pub eq: u32,
}

impl BlockLabel {
    pub fn to_block(self, g: &DataGraph, k: usize) -> Block {
        Block {
            store: (0..k)
                .filter(|i| self.store >> i & 1 == 1)
                .map(|i| i + 1)
                .collect(),
            letter: g.alphabet()[self.letter].clone(),
            cond: atomic_condition(k, self.eq),
        }
    }
}

/// The conjunction `⋀ ri== / ri!=` for the atomic type `eq`, or `true`
/// when `k = 0`.
pub fn atomic_condition(k: usize, eq: u32) -> Condition {
    Condition::all((0..k).map(|i| {
        if eq >> i & 1 == 1 {
            Condition::Eq(i + 1)
        } else {
            Condition::Neq(i + 1)
        }
    }))
}

/// All block labels for `k` registers: by letter, then store set, then
/// atomic type. There are `|Σ| · 2^k · 2^k` of them.
pub fn labels(g: &DataGraph, k: usize) -> Vec<BlockLabel> {
    let sets = 1u32 << k;
    let mut out = Vec::with_capacity(g.alphabet().len() * (sets as usize).pow(2));
    for letter in 0..g.alphabet().len() {
        for store in 0..sets {
            for eq in 0..sets {
                out.push(BlockLabel { letter, store, eq });
            }
        }
    }
    out
}

fn stored(g: &DataGraph, s: &AssignState, store: impl Fn(usize) -> bool) -> Vec<Option<u32>> {
    let d = g.value_index(s.node);
    s.regs
        .iter()
        .enumerate()
        .map(|(i, &r)| if store(i) { Some(d) } else { r })
        .collect()
}

/// Successors of `s` under `ℓ`, computed directly from the definition.
pub fn successors(
    g: &DataGraph,
    k: usize,
    s: &AssignState,
    l: &BlockLabel,
) -> BTreeSet<AssignState> {
    debug_assert_eq!(s.regs.len(), k);
    let regs = stored(g, s, |i| l.store >> i & 1 == 1);
    g.successors(s.node, l.letter)
        .iter()
        .filter(|&&t| {
            let d = g.value_index(t);
            regs.iter()
                .enumerate()
                .all(|(i, &r)| (r == Some(d)) == (l.eq >> i & 1 == 1))
        })
        .map(|&t| AssignState {
            node: t,
            regs: regs.clone(),
        })
        .collect()
}

/// Successors of `s` under a block with an arbitrary condition.
pub fn step_block(g: &DataGraph, s: &AssignState, b: &Block) -> Result<BTreeSet<AssignState>> {
    let k = s.regs.len();
    if let Some(&r) = b.store.iter().find(|&&r| r == 0 || r > k) {
        return Err(Error::RegisterOutOfRange {
            register: r,
            registers: k,
        });
    }
    let Some(li) = g.letter_index(b.letter.as_str()) else {
        return Ok(BTreeSet::new());
    };
    let regs = stored(g, s, |i| b.store.contains(&(i + 1)));
    let mut out = BTreeSet::new();
    for &t in g.successors(s.node, li) {
        if cond_eval(&b.cond, &g.value_index(t), &regs)? {
            out.insert(AssignState {
                node: t,
                regs: regs.clone(),
            });
        }
    }
    Ok(out)
}

/// All states reachable from `s` by a run labelled with the blocks of `e`.
pub fn run_reach(g: &DataGraph, s: &AssignState, e: &BasicRem) -> Result<BTreeSet<AssignState>> {
    let mut current = BTreeSet::from([s.clone()]);
    for b in &e.blocks {
        let mut next = BTreeSet::new();
        for st in &current {
            next.extend(step_block(g, st, b)?);
        }
        current = next;
    }
    Ok(current)
}

/// Upper bound on `|Q_G| · |Σ| · 2^k` for which [`AssignGraph`] builds
/// its transition table.
pub const TABLE_LIMIT: usize = 1 << 24;

/// `T_G` for a fixed number of registers, with states numbered densely.
///
/// State `(v, σ)` has number `v · b^k + Σ c_i · b^i` where `b = δ + 1`
/// and `c_i` is `0` for `⊥` and `value index + 1` otherwise.
pub struct AssignGraph<'g> {
    g: &'g DataGraph,
    k: usize,
    base: usize,
    per_node: usize,
    states: usize,
    groups: usize,
    // (target, atomic type) per (state, letter, store set)
    table: Vec<Vec<(u32, u32)>>,
}

impl<'g> AssignGraph<'g> {
    /// Fails with [`Error::ResourceExhausted`] when the transition table
    /// would exceed [`TABLE_LIMIT`] entries or `k > 16`.
    pub fn new(g: &'g DataGraph, k: usize) -> Result<Self> {
        let exhausted = Error::ResourceExhausted {
            budget: TABLE_LIMIT,
        };
        if k > 16 {
            return Err(exhausted);
        }
        let base = g.distinct_values() + 1;
        let per_node = base
            .checked_pow(k as u32)
            .ok_or_else(|| exhausted.clone())?;
        let states = per_node
            .checked_mul(g.node_count())
            .ok_or_else(|| exhausted.clone())?;
        let groups = g.alphabet().len() << k;
        if states
            .checked_mul(groups.max(1))
            .is_none_or(|t| t > TABLE_LIMIT)
        {
            return Err(exhausted);
        }
        let mut ag = AssignGraph {
            g,
            k,
            base,
            per_node,
            states,
            groups,
            table: Vec::new(),
        };
        ag.table = ag.build_table();
        Ok(ag)
    }

    fn build_table(&self) -> Vec<Vec<(u32, u32)>> {
        let g = self.g;
        let mut table = Vec::with_capacity(self.states * self.groups);
        let mut codes = alloc::vec![0usize; self.k];
        for id in 0..self.states {
            let node = id / self.per_node;
            let mut rest = id % self.per_node;
            for c in codes.iter_mut() {
                *c = rest % self.base;
                rest /= self.base;
            }
            let d = g.value_index(node) as usize + 1;
            for letter in 0..g.alphabet().len() {
                for store in 0..1usize << self.k {
                    let mut regs_id = 0;
                    let mut new_codes = codes.clone();
                    for (i, c) in new_codes.iter_mut().enumerate().rev() {
                        if store >> i & 1 == 1 {
                            *c = d;
                        }
                        regs_id = regs_id * self.base + *c;
                    }
                    let mut out = Vec::new();
                    for &t in g.successors(node, letter) {
                        let dt = g.value_index(t) as usize + 1;
                        let ty = new_codes
                            .iter()
                            .enumerate()
                            .filter(|&(_, &c)| c == dt)
                            .fold(0u32, |m, (i, _)| m | 1 << i);
                        out.push(((t * self.per_node + regs_id) as u32, ty));
                    }
                    table.push(out);
                }
            }
        }
        table
    }

    pub fn graph(&self) -> &'g DataGraph {
        self.g
    }

    pub fn registers(&self) -> usize {
        self.k
    }

    /// `|Q_G| = n · (δ + 1)^k`.
    pub fn state_count(&self) -> usize {
        self.states
    }

    pub fn encode(&self, s: &AssignState) -> Option<u32> {
        if s.node >= self.g.node_count() || s.regs.len() != self.k {
            return None;
        }
        let mut id = 0;
        for r in s.regs.iter().rev() {
            let c = match r {
                None => 0,
                Some(v) if (*v as usize) < self.base - 1 => *v as usize + 1,
                Some(_) => return None,
            };
            id = id * self.base + c;
        }
        Some((s.node * self.per_node + id) as u32)
    }

    #[inline]
    pub fn node_of(&self, id: u32) -> usize {
        id as usize / self.per_node
    }

    pub fn decode(&self, id: u32) -> AssignState {
        let id = id as usize;
        let mut rest = id % self.per_node;
        let mut regs = Vec::with_capacity(self.k);
        for _ in 0..self.k {
            let c = rest % self.base;
            rest /= self.base;
            regs.push(c.checked_sub(1).map(|v| v as u32));
        }
        AssignState {
            node: id / self.per_node,
            regs,
        }
    }

    /// Successors of state `id` under `letter` and store set `store`,
    /// each with the atomic type it satisfies.
    #[inline]
    pub fn transitions(&self, id: u32, letter: usize, store: u32) -> &[(u32, u32)] {
        &self.table[id as usize * self.groups + (letter << self.k) + store as usize]
    }

    pub fn successors(&self, s: &AssignState, l: &BlockLabel) -> BTreeSet<AssignState> {
        let Some(id) = self.encode(s) else {
            return BTreeSet::new();
        };
        self.transitions(id, l.letter, l.store)
            .iter()
            .filter(|&&(_, ty)| ty == l.eq)
            .map(|&(t, _)| self.decode(t))
            .collect()
    }

    /// `⟨{(v_1, ⊥^k)}, …, {(v_n, ⊥^k)}⟩`.
    pub fn initial_tuple(&self) -> SubsetTuple {
        let items = (0..self.g.node_count())
            .map(|i| (i * self.states + i * self.per_node) as u64)
            .collect();
        SubsetTuple {
            states: self.states,
            items,
        }
    }

    pub fn tuple_step(&self, t: &SubsetTuple, l: &BlockLabel) -> SubsetTuple {
        let mut items = Vec::new();
        for &x in &t.items {
            let (slot, id) = t.split(x);
            for &(to, ty) in self.transitions(id, l.letter, l.store) {
                if ty == l.eq {
                    items.push((slot * self.states) as u64 + to as u64);
                }
            }
        }
        items.sort_unstable();
        items.dedup();
        SubsetTuple {
            states: self.states,
            items,
        }
    }

    /// The successor tuples of `t` under `letter` and store set `store`,
    /// one per atomic type, in increasing type order. Types whose
    /// successor is the all-empty tuple are included only if
    /// `keep_empty` is set.
    pub fn step_all_types(
        &self,
        t: &SubsetTuple,
        letter: usize,
        store: u32,
        keep_empty: bool,
    ) -> Vec<(u32, SubsetTuple)> {
        let mut tagged: Vec<(u32, u64)> = Vec::new();
        for &x in &t.items {
            let (slot, id) = t.split(x);
            for &(to, ty) in self.transitions(id, letter, store) {
                tagged.push((ty, (slot * self.states) as u64 + to as u64));
            }
        }
        tagged.sort_unstable();
        tagged.dedup();
        let mut out: Vec<(u32, SubsetTuple)> = Vec::new();
        let mut i = 0;
        let types = 1u32 << self.k;
        for ty in 0..types {
            let start = i;
            while i < tagged.len() && tagged[i].0 == ty {
                i += 1;
            }
            if start == i && !keep_empty {
                continue;
            }
            out.push((
                ty,
                SubsetTuple {
                    states: self.states,
                    items: tagged[start..i].iter().map(|&(_, x)| x).collect(),
                },
            ));
        }
        out
    }

    /// Every transition of `T_G` as `(from, label, to)`, in state order
    /// then label order.
    pub fn edges(&self) -> Vec<(AssignState, BlockLabel, AssignState)> {
        let mut out = Vec::new();
        for id in 0..self.states as u32 {
            for letter in 0..self.g.alphabet().len() {
                for store in 0..1u32 << self.k {
                    let mut ts = self.transitions(id, letter, store).to_vec();
                    ts.sort_unstable_by_key(|&(t, ty)| (ty, t));
                    for (to, eq) in ts {
                        out.push((
                            self.decode(id),
                            BlockLabel { letter, store, eq },
                            self.decode(to),
                        ));
                    }
                }
            }
        }
        out
    }
}

/// A tuple `⟨Q_1, …, Q_n⟩` of state sets, stored sparsely as the sorted
/// list of `slot · |Q_G| + state`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct SubsetTuple {
    states: usize,
    items: Vec<u64>,
}

impl SubsetTuple {
    #[inline]
    fn split(&self, x: u64) -> (usize, u32) {
        (
            (x / self.states as u64) as usize,
            (x % self.states as u64) as u32,
        )
    }

    /// Builds a tuple from explicit slots; states outside `ag` are
    /// rejected.
    pub fn from_slots(ag: &AssignGraph<'_>, slots: &[BTreeSet<AssignState>]) -> Result<Self> {
        if slots.len() != ag.g.node_count() {
            return Err(Error::ArityMismatch {
                expected: ag.g.node_count(),
                found: slots.len(),
            });
        }
        let mut items = Vec::new();
        for (i, slot) in slots.iter().enumerate() {
            for s in slot {
                let id = ag.encode(s).ok_or(Error::NodeOutOfRange {
                    index: s.node,
                    nodes: ag.g.node_count(),
                })?;
                items.push((i * ag.states) as u64 + id as u64);
            }
        }
        items.sort_unstable();
        Ok(SubsetTuple {
            states: ag.states,
            items,
        })
    }

    /// True when every slot is empty.
    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Number of `(slot, state)` memberships.
    pub fn len(&self) -> usize {
        self.items.len()
    }

    /// `(slot, state number)` pairs in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.items.iter().map(|&x| self.split(x))
    }

    pub fn slot(&self, ag: &AssignGraph<'_>, i: usize) -> BTreeSet<AssignState> {
        self.iter()
            .filter(|&(s, _)| s == i)
            .map(|(_, id)| ag.decode(id))
            .collect()
    }

    /// Slotwise inclusion.
    pub fn is_subset(&self, other: &SubsetTuple) -> bool {
        let mut j = 0;
        for &x in &self.items {
            while j < other.items.len() && other.items[j] < x {
                j += 1;
            }
            if j == other.items.len() || other.items[j] != x {
                return false;
            }
        }
        true
    }
}
