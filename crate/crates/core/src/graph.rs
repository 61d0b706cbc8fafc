//! The data graph model: nodes with one data value each and letter-labelled
//! edges. Identifiers, letters and values are interned to dense indices.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

macro_rules! token_type {
    ($(#[$m:meta])* $name:ident) => {
        $(#[$m])*
        #[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(Arc<str>);

        impl $name {
            pub fn new(s: &str) -> Self {
                $name(Arc::from(s))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                fmt::Debug::fmt(&*self.0, f)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                $name::new(s)
            }
        }
    };
}

token_type!(
    /// An edge label.
    Letter
);
token_type!(
    /// An opaque data value. The only operation on values is equality.
    Value
);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub from: usize,
    pub letter: usize,
    pub to: usize,
}

/// A finite data graph `(V, E, ρ)` over an ordered alphabet.
///
/// Node order is the declaration order and is used everywhere a
/// deterministic order is needed.
#[derive(Clone, Debug)]
pub struct DataGraph {
    alphabet: Vec<Letter>,
    node_ids: Vec<String>,
    node_index: BTreeMap<String, usize>,
    values: Vec<Value>,
    data: Vec<u32>,
    edges: Vec<Edge>,
    // succ[letter][node] -> sorted targets
    succ: Vec<Vec<Vec<usize>>>,
}

impl DataGraph {
    /// Builds a graph from string identifiers, validating every reference.
    pub fn new<'a>(
        alphabet: impl IntoIterator<Item = &'a str>,
        nodes: impl IntoIterator<Item = (&'a str, &'a str)>,
        edges: impl IntoIterator<Item = (&'a str, &'a str, &'a str)>,
    ) -> Result<Self> {
        let mut b = GraphBuilder::new();
        for a in alphabet {
            b.letter(a)?;
        }
        for (id, d) in nodes {
            b.node(id, d)?;
        }
        for (from, a, to) in edges {
            b.edge(from, a, to)?;
        }
        Ok(b.build())
    }

    pub fn node_count(&self) -> usize {
        self.node_ids.len()
    }

    pub fn alphabet(&self) -> &[Letter] {
        &self.alphabet
    }

    pub fn letter_index(&self, a: &str) -> Option<usize> {
        self.alphabet.iter().position(|l| l.as_str() == a)
    }

    pub fn node_id(&self, node: usize) -> &str {
        &self.node_ids[node]
    }

    pub fn node_ids(&self) -> &[String] {
        &self.node_ids
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.node_index.get(id).copied()
    }

    pub fn node(&self, id: &str) -> Result<usize> {
        self.node_index(id)
            .ok_or_else(|| Error::UnknownNode(id.to_string()))
    }

    /// The data value `ρ(node)`.
    pub fn value(&self, node: usize) -> &Value {
        &self.values[self.data[node] as usize]
    }

    /// Dense index of `ρ(node)` among the graph's distinct values.
    pub fn value_index(&self, node: usize) -> u32 {
        self.data[node]
    }

    /// Distinct data values, in order of first occurrence over the nodes.
    pub fn values(&self) -> &[Value] {
        &self.values
    }

    /// δ, the number of distinct data values.
    pub fn distinct_values(&self) -> usize {
        self.values.len()
    }

    pub fn same_value(&self, u: usize, v: usize) -> bool {
        self.data[u] == self.data[v]
    }

    /// Sorted, duplicate-free edge list.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn successors(&self, node: usize, letter: usize) -> &[usize] {
        &self.succ[letter][node]
    }

    pub fn has_edge(&self, from: usize, letter: usize, to: usize) -> bool {
        self.succ[letter][from].binary_search(&to).is_ok()
    }

    /// The same graph with every data value replaced by `rename(value)`.
    /// Used to check renaming invariance.
    pub fn map_values(&self, mut rename: impl FnMut(&Value) -> Value) -> DataGraph {
        let mut b = GraphBuilder::new();
        for a in &self.alphabet {
            b.letter(a.as_str()).expect("alphabet is duplicate-free");
        }
        for u in 0..self.node_count() {
            let d = rename(self.value(u));
            b.node(&self.node_ids[u], d.as_str())
                .expect("node ids are unique");
        }
        for e in &self.edges {
            b.edges.push(*e);
        }
        b.build()
    }
}

/// Incremental construction of a [`DataGraph`].
#[derive(Default, Debug)]
pub struct GraphBuilder {
    alphabet: Vec<Letter>,
    node_ids: Vec<String>,
    node_index: BTreeMap<String, usize>,
    values: Vec<Value>,
    data: Vec<u32>,
    edges: Vec<Edge>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn letter(&mut self, a: &str) -> Result<usize> {
        if self.alphabet.iter().any(|l| l.as_str() == a) {
            return Err(Error::DuplicateLetter(a.to_string()));
        }
        self.alphabet.push(Letter::new(a));
        Ok(self.alphabet.len() - 1)
    }

    pub fn node(&mut self, id: &str, data: &str) -> Result<usize> {
        if self.node_index.contains_key(id) {
            return Err(Error::DuplicateNode(id.to_string()));
        }
        let value = match self.values.iter().position(|v| v.as_str() == data) {
            Some(i) => i,
            None => {
                self.values.push(Value::new(data));
                self.values.len() - 1
            }
        };
        let index = self.node_ids.len();
        self.node_ids.push(id.to_string());
        self.node_index.insert(id.to_string(), index);
        self.data.push(value as u32);
        Ok(index)
    }

    pub fn edge(&mut self, from: &str, letter: &str, to: &str) -> Result<()> {
        let from = *self
            .node_index
            .get(from)
            .ok_or_else(|| Error::UnknownNode(from.to_string()))?;
        let to = *self
            .node_index
            .get(to)
            .ok_or_else(|| Error::UnknownNode(to.to_string()))?;
        let letter = self
            .alphabet
            .iter()
            .position(|l| l.as_str() == letter)
            .ok_or_else(|| Error::UnknownLetter(letter.to_string()))?;
        self.edges.push(Edge { from, letter, to });
        Ok(())
    }

    pub fn build(mut self) -> DataGraph {
        self.edges.sort_unstable();
        self.edges.dedup();
        let n = self.node_ids.len();
        let mut succ = alloc::vec![alloc::vec![Vec::new(); n]; self.alphabet.len()];
        for e in &self.edges {
            succ[e.letter][e.from].push(e.to);
        }
        DataGraph {
            alphabet: self.alphabet,
            node_ids: self.node_ids,
            node_index: self.node_index,
            values: self.values,
            data: self.data,
            edges: self.edges,
            succ,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_dangling_references() {
        assert_eq!(
            DataGraph::new(["a"], [("u", "1")], [("u", "a", "v")]).unwrap_err(),
            Error::UnknownNode("v".into())
        );
        assert_eq!(
            DataGraph::new(["a"], [("u", "1")], [("u", "b", "u")]).unwrap_err(),
            Error::UnknownLetter("b".into())
        );
        assert_eq!(
            DataGraph::new(["a"], [("u", "1"), ("u", "2")], []).unwrap_err(),
            Error::DuplicateNode("u".into())
        );
        assert_eq!(
            DataGraph::new(["a", "a"], [], []).unwrap_err(),
            Error::DuplicateLetter("a".into())
        );
    }

    #[test]
    fn interns_values_and_dedups_edges() {
        let g = DataGraph::new(
            ["a"],
            [("u", "7"), ("v", "8"), ("w", "7")],
            [("u", "a", "v"), ("u", "a", "v"), ("v", "a", "w")],
        )
        .unwrap();
        assert_eq!(g.distinct_values(), 2);
        assert!(g.same_value(0, 2));
        assert!(!g.same_value(0, 1));
        assert_eq!(g.edges().len(), 2);
        assert_eq!(g.successors(0, 0), &[1]);
        assert!(g.has_edge(1, 0, 2));
        assert!(!g.has_edge(2, 0, 1));
    }
}
