//! Data paths `d0 a0 d1 … a(m-1) dm` and their automorphism classes.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, ParseError, Result};
use crate::graph::{DataGraph, Letter, Value};

/// An alternating sequence of data values and letters that starts and ends
/// with a value. A single value with no letters is a valid path.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct DataPath<V = Value> {
    values: Vec<V>,
    letters: Vec<Letter>,
}

impl<V> DataPath<V> {
    pub fn new(values: Vec<V>, letters: Vec<Letter>) -> Result<Self> {
        if values.is_empty() || letters.len() + 1 != values.len() {
            return Err(Error::PathShape {
                expected: values.len().saturating_sub(1),
                found: letters.len(),
            });
        }
        Ok(DataPath { values, letters })
    }

    pub fn single(value: V) -> Self {
        DataPath {
            values: alloc::vec![value],
            letters: Vec::new(),
        }
    }

    pub fn values(&self) -> &[V] {
        &self.values
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// Number of letters.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn first(&self) -> &V {
        &self.values[0]
    }

    pub fn last(&self) -> &V {
        &self.values[self.values.len() - 1]
    }

    pub fn map_values<W>(&self, f: impl FnMut(&V) -> W) -> DataPath<W> {
        DataPath {
            values: self.values.iter().map(f).collect(),
            letters: self.letters.clone(),
        }
    }

    /// The subpath spanning value positions `from..=to`.
    pub fn slice(&self, from: usize, to: usize) -> DataPath<V>
    where
        V: Clone,
    {
        DataPath {
            values: self.values[from..=to].to_vec(),
            letters: self.letters[from..to].to_vec(),
        }
    }
}

impl<V: Clone + PartialEq> DataPath<V> {
    /// `self · other`, defined only when the last value of `self` equals the
    /// first value of `other`.
    pub fn concat(&self, other: &DataPath<V>) -> Option<DataPath<V>> {
        if self.last() != other.first() {
            return None;
        }
        let mut values = self.values.clone();
        values.extend_from_slice(&other.values[1..]);
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Some(DataPath { values, letters })
    }
}

impl DataPath<Value> {
    /// Parses the command-line path form.
    ///
    /// With whitespace present, tokens are whitespace separated and
    /// alternate value, letter, value, … (`"x a y"`). Without whitespace the
    /// compact form applies: maximal digit runs are values and maximal
    /// non-digit runs are letters (`"2a3a2a3"`).
    pub fn parse(text: &str) -> core::result::Result<Self, ParseError> {
        let text = text.trim();
        let tokens: Vec<(usize, &str)> = if text.chars().any(char::is_whitespace) {
            text.split_whitespace()
                .map(|t| (t.as_ptr() as usize - text.as_ptr() as usize, t))
                .collect()
        } else {
            compact_tokens(text)
        };
        if tokens.is_empty() {
            return Err(ParseError::new(0, "empty data path"));
        }
        if tokens.len().is_multiple_of(2) {
            let (pos, _) = tokens[tokens.len() - 1];
            return Err(ParseError::new(pos, "data path must end with a value"));
        }
        let values = tokens
            .iter()
            .step_by(2)
            .map(|(_, t)| Value::new(t))
            .collect();
        let letters = tokens
            .iter()
            .skip(1)
            .step_by(2)
            .map(|(_, t)| Letter::new(t))
            .collect();
        Ok(DataPath { values, letters })
    }
}

fn compact_tokens(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = 0;
    let mut prev: Option<bool> = None;
    for (i, c) in text.char_indices() {
        let digit = c.is_ascii_digit();
        if prev.is_some_and(|p| p != digit) {
            out.push((start, &text[start..i]));
            start = i;
        }
        prev = Some(digit);
    }
    if prev.is_some() {
        out.push((start, &text[start..]));
    }
    out
}

impl<V: fmt::Display> fmt::Display for DataPath<V> {
    /// Compact form when it re-parses unambiguously, spaced otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let values: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        let compact = values
            .iter()
            .all(|v| !v.is_empty() && v.bytes().all(|b| b.is_ascii_digit()))
            && self.letters.iter().all(|a| {
                !a.as_str().is_empty()
                    && a.as_str()
                        .chars()
                        .all(|c| !c.is_ascii_digit() && !c.is_whitespace())
            });
        let sep = if compact { "" } else { " " };
        for (i, v) in values.iter().enumerate() {
            if i > 0 {
                write!(f, "{sep}{}{sep}", self.letters[i - 1])?;
            }
            f.write_str(v)?;
        }
        Ok(())
    }
}

/// A data path whose values are first-occurrence indices `0, 1, 2, …`.
///
/// Two paths are automorphic (related by a bijective renaming of values)
/// iff their canonical forms are equal.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CanonicalPath(DataPath<u32>);

impl CanonicalPath {
    pub fn path(&self) -> &DataPath<u32> {
        &self.0
    }

    pub fn into_path(self) -> DataPath<u32> {
        self.0
    }

    /// Number of distinct values in the class.
    pub fn distinct_values(&self) -> usize {
        self.0.values.iter().max().map_or(0, |&m| m as usize + 1)
    }
}

impl fmt::Display for CanonicalPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// Renames every value of `w` to the index of its first occurrence.
pub fn canonical_path<V: PartialEq>(w: &DataPath<V>) -> CanonicalPath {
    let mut seen: Vec<&V> = Vec::new();
    let values = w
        .values
        .iter()
        .map(|v| match seen.iter().position(|s| *s == v) {
            Some(i) => i as u32,
            None => {
                seen.push(v);
                (seen.len() - 1) as u32
            }
        })
        .collect();
    CanonicalPath(DataPath {
        values,
        letters: w.letters.clone(),
    })
}

/// The data path `ρ(v0) a0 ρ(v1) …` of the graph path `nodes` / `letters`
/// (letter `i` labels the step from `nodes[i]` to `nodes[i + 1]`).
pub fn data_path_of(g: &DataGraph, nodes: &[usize], letters: &[usize]) -> Result<DataPath> {
    if nodes.is_empty() || letters.len() + 1 != nodes.len() {
        return Err(Error::PathShape {
            expected: nodes.len().saturating_sub(1),
            found: letters.len(),
        });
    }
    for &u in nodes {
        if u >= g.node_count() {
            return Err(Error::NodeOutOfRange {
                index: u,
                nodes: g.node_count(),
            });
        }
    }
    for (i, &a) in letters.iter().enumerate() {
        let (u, v) = (nodes[i], nodes[i + 1]);
        if a >= g.alphabet().len() || !g.has_edge(u, a, v) {
            return Err(Error::NotAnEdge {
                from: g.node_id(u).to_string(),
                letter: g
                    .alphabet()
                    .get(a)
                    .map_or_else(|| alloc::format!("#{a}"), |l| l.to_string()),
                to: g.node_id(v).to_string(),
            });
        }
    }
    Ok(DataPath {
        values: nodes.iter().map(|&u| g.value(u).clone()).collect(),
        letters: letters.iter().map(|&a| g.alphabet()[a].clone()).collect(),
    })
}
