//! Node relations and the relation algebra `+`, `∘`, `=`/`≠` restriction.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::DataGraph;

/// A binary relation on `n` nodes stored as an `n × n` bit matrix.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct BinRel {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BinRel {
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64);
        BinRel {
            n,
            words,
            bits: alloc::vec![0; n * words],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut r = Self::empty(n);
        for u in 0..n {
            r.insert(u, u);
        }
        r
    }

    pub fn full(n: usize) -> Self {
        let mut r = Self::empty(n);
        for u in 0..n {
            for v in 0..n {
                r.insert(u, v);
            }
        }
        r
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut r = Self::empty(n);
        for (u, v) in pairs {
            r.insert(u, v);
        }
        r
    }

    /// The `letter`-edge relation of `g`.
    pub fn letter(g: &DataGraph, letter: usize) -> Self {
        let mut r = Self::empty(g.node_count());
        for e in g.edges().iter().filter(|e| e.letter == letter) {
            r.insert(e.from, e.to);
        }
        r
    }

    pub fn nodes(&self) -> usize {
        self.n
    }

    #[inline]
    fn row(&self, u: usize) -> &[u64] {
        &self.bits[u * self.words..(u + 1) * self.words]
    }

    #[inline]
    pub fn contains(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, u: usize, v: usize) {
        assert!(u < self.n && v < self.n, "node out of range");
        self.bits[u * self.words + v / 64] |= 1 << (v % 64);
    }

    pub fn remove(&mut self, u: usize, v: usize) {
        self.bits[u * self.words + v / 64] &= !(1 << (v % 64));
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// Targets of `u`, ascending.
    pub fn image(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        let words = self.row(u);
        (0..self.n).filter(move |&v| words[v / 64] >> (v % 64) & 1 == 1)
    }

    /// Pairs in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.image(u).map(move |v| (u, v)))
    }

    pub fn is_subset(&self, other: &BinRel) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn union(&self, other: &BinRel) -> BinRel {
        let mut r = self.clone();
        r.union_with(other);
        r
    }

    pub fn union_with(&mut self, other: &BinRel) {
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a |= b;
        }
    }

    pub fn intersection(&self, other: &BinRel) -> BinRel {
        let mut r = self.clone();
        for (a, b) in r.bits.iter_mut().zip(&other.bits) {
            *a &= b;
        }
        r
    }

    /// `{⟨u,v⟩ | ∃z: ⟨u,z⟩ ∈ self ∧ ⟨z,v⟩ ∈ other}`.
    pub fn compose(&self, other: &BinRel) -> BinRel {
        let mut r = BinRel::empty(self.n);
        for u in 0..self.n {
            let out = u * self.words;
            for z in self.image(u) {
                for w in 0..self.words {
                    r.bits[out + w] |= other.bits[z * self.words + w];
                }
            }
        }
        r
    }

    /// Pairs whose endpoints carry equal data values.
    pub fn restrict_eq(&self, g: &DataGraph) -> BinRel {
        self.restrict(g, true)
    }

    /// Pairs whose endpoints carry different data values.
    pub fn restrict_neq(&self, g: &DataGraph) -> BinRel {
        self.restrict(g, false)
    }

    fn restrict(&self, g: &DataGraph, equal: bool) -> BinRel {
        let mut r = self.clone();
        for (u, v) in self.iter() {
            if g.same_value(u, v) != equal {
                r.remove(u, v);
            }
        }
        r
    }

    /// `self⁺`, the union of all positive powers.
    pub fn transitive_closure(&self) -> BinRel {
        let mut closure = self.clone();
        loop {
            let next = closure.union(&closure.compose(self));
            if next == closure {
                return closure;
            }
            closure = next;
        }
    }
}

/// A finite set of node tuples of one positive arity.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct NodeRelation {
    arity: usize,
    tuples: BTreeSet<Vec<usize>>,
}

impl NodeRelation {
    pub fn new(arity: usize) -> Result<Self> {
        if arity == 0 {
            return Err(Error::ZeroArity);
        }
        Ok(NodeRelation {
            arity,
            tuples: BTreeSet::new(),
        })
    }

    /// Builds a relation over a graph of `nodes` nodes, checking arity and
    /// node range of every tuple.
    pub fn from_tuples(
        arity: usize,
        nodes: usize,
        tuples: impl IntoIterator<Item = Vec<usize>>,
    ) -> Result<Self> {
        let mut r = Self::new(arity)?;
        for t in tuples {
            if t.len() != arity {
                return Err(Error::ArityMismatch {
                    expected: arity,
                    found: t.len(),
                });
            }
            if let Some(&index) = t.iter().find(|&&u| u >= nodes) {
                return Err(Error::NodeOutOfRange { index, nodes });
            }
            r.tuples.insert(t);
        }
        Ok(r)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn contains(&self, t: &[usize]) -> bool {
        self.tuples.contains(t)
    }

    /// Tuples in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = &[usize]> + '_ {
        self.tuples.iter().map(Vec::as_slice)
    }

    pub(crate) fn insert_unchecked(&mut self, t: Vec<usize>) {
        debug_assert_eq!(t.len(), self.arity);
        self.tuples.insert(t);
    }

    pub fn to_binary(&self, nodes: usize) -> Result<BinRel> {
        if self.arity != 2 {
            return Err(Error::NotBinary(self.arity));
        }
        let mut r = BinRel::empty(nodes);
        for t in &self.tuples {
            if let Some(&index) = t.iter().find(|&&u| u >= nodes) {
                return Err(Error::NodeOutOfRange { index, nodes });
            }
            r.insert(t[0], t[1]);
        }
        Ok(r)
    }
}

impl From<&BinRel> for NodeRelation {
    fn from(r: &BinRel) -> Self {
        NodeRelation {
            arity: 2,
            tuples: r.iter().map(|(u, v)| alloc::vec![u, v]).collect(),
        }
    }
}

impl From<BinRel> for NodeRelation {
    fn from(r: BinRel) -> Self {
        NodeRelation::from(&r)
    }
}

fn binary_pair(s1: &NodeRelation, s2: &NodeRelation) -> Result<()> {
    for s in [s1, s2] {
        if s.arity != 2 {
            return Err(Error::NotBinary(s.arity));
        }
    }
    Ok(())
}

fn nodes_mentioned(rs: &[&NodeRelation]) -> usize {
    rs.iter()
        .flat_map(|r| r.tuples.iter().flatten())
        .max()
        .map_or(0, |&m| m + 1)
}

/// `S1 + S2`.
pub fn rel_union(s1: &NodeRelation, s2: &NodeRelation) -> Result<NodeRelation> {
    binary_pair(s1, s2)?;
    let n = nodes_mentioned(&[s1, s2]);
    Ok(s1.to_binary(n)?.union(&s2.to_binary(n)?).into())
}

/// `S1 ∘ S2`.
pub fn rel_compose(s1: &NodeRelation, s2: &NodeRelation) -> Result<NodeRelation> {
    binary_pair(s1, s2)?;
    let n = nodes_mentioned(&[s1, s2]);
    Ok(s1.to_binary(n)?.compose(&s2.to_binary(n)?).into())
}

/// `S^=` with respect to the data values of `g`.
pub fn rel_eq_restrict(g: &DataGraph, s: &NodeRelation) -> Result<NodeRelation> {
    Ok(s.to_binary(g.node_count())?.restrict_eq(g).into())
}

/// `S^≠` with respect to the data values of `g`.
pub fn rel_neq_restrict(g: &DataGraph, s: &NodeRelation) -> Result<NodeRelation> {
    Ok(s.to_binary(g.node_count())?.restrict_neq(g).into())
}
