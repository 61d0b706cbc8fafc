//! File formats: JSON graphs and relations, and query text files.
//!
//! Graph:
//!
//! ```json
//! {
//!   "alphabet": ["a"],
//!   "nodes": [{"id": "v1", "data": 0}, {"id": "v2", "data": "x"}],
//!   "edges": [["v1", "a", "v2"]]
//! }
//! ```
//!
//! `alphabet` is optional; without it letters are collected from the
//! edges in order of first use. Data values are strings or integers and
//! compare as strings.
//!
//! Relation: `{"arity": 2, "tuples": [["v1", "v2"]]}`. `arity` may be
//! omitted when there is at least one tuple.

use std::fmt;
use std::path::Path;

use graphdef_core::eval::{parse_crdpq, parse_ucrdpq, Crdpq, Ucrdpq};
use graphdef_core::expr::{parse_ree, parse_rem, ReeExpr, RemExpr};
use graphdef_core::{DataGraph, Error, GraphBuilder, NodeRelation};
use serde::Deserialize;
use serde_json::Value as Json;

/// A malformed-input diagnostic, `file:line:col: message`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError {
    pub file: String,
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}:{}: {}",
            self.file, self.line, self.col, self.message
        )
    }
}

impl std::error::Error for InputError {}

impl InputError {
    pub fn at_offset(file: &str, text: &str, offset: usize, message: impl Into<String>) -> Self {
        let (line, col) = line_col(text, offset);
        InputError {
            file: file.to_string(),
            line,
            col,
            message: message.into(),
        }
    }

    fn at_pointer(file: &str, text: &str, path: &[Seg<'_>], message: impl Into<String>) -> Self {
        Self::at_offset(file, text, locate(text, path).unwrap_or(0), message)
    }
}

/// 1-based line and column (in characters) of byte `offset`.
pub fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let start = before.rfind('\n').map_or(0, |i| i + 1);
    (line, before[start..].chars().count() + 1)
}

#[derive(Clone, Copy)]
enum Seg<'a> {
    Key(&'a str),
    Index(usize),
}

/// Byte offset of the value at `path` in the JSON document `text`.
fn locate(text: &str, path: &[Seg<'_>]) -> Option<usize> {
    let b = text.as_bytes();
    let mut i = skip_ws(b, 0);
    for seg in path {
        match (seg, b.get(i)?) {
            (Seg::Key(k), b'{') => {
                i = skip_ws(b, i + 1);
                loop {
                    if b.get(i)? != &b'"' {
                        return None;
                    }
                    let end = string_end(b, i)?;
                    let key = &text[i + 1..end - 1];
                    i = skip_ws(b, end);
                    if b.get(i)? != &b':' {
                        return None;
                    }
                    i = skip_ws(b, i + 1);
                    if key == *k {
                        break;
                    }
                    i = skip_ws(b, value_end(b, i)?);
                    match b.get(i)? {
                        b',' => i = skip_ws(b, i + 1),
                        _ => return None,
                    }
                }
            }
            (Seg::Index(n), b'[') => {
                i = skip_ws(b, i + 1);
                for _ in 0..*n {
                    i = skip_ws(b, value_end(b, i)?);
                    match b.get(i)? {
                        b',' => i = skip_ws(b, i + 1),
                        _ => return None,
                    }
                }
            }
            _ => return None,
        }
    }
    Some(i)
}

fn skip_ws(b: &[u8], mut i: usize) -> usize {
    while i < b.len() && b[i].is_ascii_whitespace() {
        i += 1;
    }
    i
}

/// Offset just past the string starting at `i`.
fn string_end(b: &[u8], mut i: usize) -> Option<usize> {
    i += 1;
    while i < b.len() {
        match b[i] {
            b'\\' => i += 2,
            b'"' => return Some(i + 1),
            _ => i += 1,
        }
    }
    None
}

/// Offset just past the value starting at `i`.
fn value_end(b: &[u8], i: usize) -> Option<usize> {
    match b.get(i)? {
        b'"' => string_end(b, i),
        b'{' | b'[' => {
            let mut depth = 0usize;
            let mut j = i;
            while j < b.len() {
                match b[j] {
                    b'"' => {
                        j = string_end(b, j)?;
                        continue;
                    }
                    b'{' | b'[' => depth += 1,
                    b'}' | b']' => {
                        depth -= 1;
                        if depth == 0 {
                            return Some(j + 1);
                        }
                    }
                    _ => {}
                }
                j += 1;
            }
            None
        }
        _ => {
            let mut j = i;
            while j < b.len() && !matches!(b[j], b',' | b'}' | b']') && !b[j].is_ascii_whitespace()
            {
                j += 1;
            }
            Some(j)
        }
    }
}

fn json_error(file: &str, e: &serde_json::Error) -> InputError {
    // serde_json columns are 1-based byte columns; good enough for ASCII
    // input and never past the offending line.
    InputError {
        file: file.to_string(),
        line: e.line().max(1),
        col: e.column().max(1),
        message: strip_position(&e.to_string()),
    }
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    alphabet: Option<Vec<String>>,
    nodes: Vec<NodeEntry>,
    #[serde(default)]
    edges: Vec<(String, String, String)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeEntry {
    id: String,
    data: Json,
}

pub fn parse_graph(file: &str, text: &str) -> Result<DataGraph, InputError> {
    let raw: GraphFile = serde_json::from_str(text).map_err(|e| json_error(file, &e))?;
    let err = |path: &[Seg<'_>], e: &dyn fmt::Display| {
        InputError::at_pointer(file, text, path, e.to_string())
    };
    let mut b = GraphBuilder::new();
    if let Some(alphabet) = &raw.alphabet {
        for (i, a) in alphabet.iter().enumerate() {
            check_letter(a).map_err(|m| err(&[Seg::Key("alphabet"), Seg::Index(i)], &m))?;
            b.letter(a)
                .map_err(|e| err(&[Seg::Key("alphabet"), Seg::Index(i)], &e))?;
        }
    }
    for (i, n) in raw.nodes.iter().enumerate() {
        let data = match &n.data {
            Json::String(s) => s.clone(),
            Json::Number(x) if x.is_i64() || x.is_u64() => x.to_string(),
            _ => {
                return Err(err(
                    &[Seg::Key("nodes"), Seg::Index(i), Seg::Key("data")],
                    &"data must be a string or an integer",
                ))
            }
        };
        b.node(&n.id, &data)
            .map_err(|e| err(&[Seg::Key("nodes"), Seg::Index(i), Seg::Key("id")], &e))?;
    }
    for (i, (from, a, to)) in raw.edges.iter().enumerate() {
        let at = [Seg::Key("edges"), Seg::Index(i)];
        if raw.alphabet.is_none() {
            check_letter(a).map_err(|m| err(&at, &m))?;
            let _ = b.letter(a);
        }
        b.edge(from, a, to).map_err(|e| err(&at, &e))?;
    }
    Ok(b.build())
}

/// Letters must be usable in query text.
fn check_letter(a: &str) -> Result<(), String> {
    let mut cs = a.chars();
    let ok = cs.next().is_some_and(|c| c.is_ascii_alphabetic())
        && cs.all(|c| c.is_ascii_alphanumeric())
        && a != "eps";
    if ok {
        Ok(())
    } else {
        Err(format!(
            "`{a}` is not a valid letter (expected [A-Za-z][A-Za-z0-9]*, not `eps`)"
        ))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RelationFile {
    arity: Option<usize>,
    tuples: Vec<Vec<String>>,
}

pub fn parse_relation(file: &str, text: &str, g: &DataGraph) -> Result<NodeRelation, InputError> {
    let raw: RelationFile = serde_json::from_str(text).map_err(|e| json_error(file, &e))?;
    let err = |path: &[Seg<'_>], m: &str| InputError::at_pointer(file, text, path, m);
    let arity = match (raw.arity, raw.tuples.first()) {
        (Some(0), _) => return Err(err(&[Seg::Key("arity")], "arity must be positive")),
        (Some(k), _) => k,
        (None, Some(t)) if !t.is_empty() => t.len(),
        (None, Some(_)) => {
            return Err(err(
                &[Seg::Key("tuples"), Seg::Index(0)],
                "arity must be positive",
            ))
        }
        (None, None) => {
            return Err(err(
                &[Seg::Key("tuples")],
                "`arity` is required when there are no tuples",
            ))
        }
    };
    let mut tuples = Vec::with_capacity(raw.tuples.len());
    for (i, t) in raw.tuples.iter().enumerate() {
        if t.len() != arity {
            return Err(err(
                &[Seg::Key("tuples"), Seg::Index(i)],
                &format!("tuple has {} entries, arity is {arity}", t.len()),
            ));
        }
        let mut nodes = Vec::with_capacity(arity);
        for (j, id) in t.iter().enumerate() {
            let p = g.node_index(id).ok_or_else(|| {
                err(
                    &[Seg::Key("tuples"), Seg::Index(i), Seg::Index(j)],
                    &format!("unknown node `{id}`"),
                )
            })?;
            nodes.push(p);
        }
        tuples.push(nodes);
    }
    NodeRelation::from_tuples(arity, g.node_count(), tuples)
        .map_err(|e| err(&[Seg::Key("tuples")], &e.to_string()))
}

/// The relation as `{"arity": k, "tuples": [...]}` in tuple order.
pub fn relation_json(g: &DataGraph, s: &NodeRelation) -> Json {
    serde_json::json!({
        "arity": s.arity(),
        "tuples": s
            .iter()
            .map(|t| t.iter().map(|&p| g.node_id(p)).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    })
}

/// Query languages accepted by `eval`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum QueryType {
    Rem,
    Ree,
    Rpq,
    Crdpq,
    Ucrdpq,
}

#[derive(Clone, Debug)]
pub enum Query {
    Rem(RemExpr),
    Ree(ReeExpr),
    Crdpq(Crdpq),
    Ucrdpq(Ucrdpq),
}

/// Blanks out `#` comments, keeping byte offsets intact.
fn blank_comments(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut comment = false;
    for c in text.chars() {
        match c {
            '#' => comment = true,
            '\n' => comment = false,
            _ => {}
        }
        if comment {
            out.extend(std::iter::repeat_n(' ', c.len_utf8()));
        } else {
            out.push(c);
        }
    }
    out
}

pub fn parse_query(file: &str, text: &str, ty: QueryType) -> Result<Query, InputError> {
    let core_err = |e: Error| match e {
        Error::Parse(p) => InputError::at_offset(file, text, p.pos, p.message),
        other => InputError::at_offset(file, text, 0, other.to_string()),
    };
    let clean = blank_comments(text);
    match ty {
        QueryType::Rem => parse_rem(&clean)
            .map(Query::Rem)
            .map_err(|p| InputError::at_offset(file, text, p.pos, p.message)),
        QueryType::Rpq => {
            let e = parse_rem(&clean)
                .map_err(|p| InputError::at_offset(file, text, p.pos, p.message))?;
            if !e.is_plain() {
                return Err(InputError::at_offset(
                    file,
                    text,
                    clean.find(['!', '[']).unwrap_or(0),
                    "an RPQ may not use registers or conditions",
                ));
            }
            Ok(Query::Rem(e))
        }
        QueryType::Ree => parse_ree(&clean)
            .map(Query::Ree)
            .map_err(|p| InputError::at_offset(file, text, p.pos, p.message)),
        QueryType::Crdpq => parse_crdpq(&clean).map(Query::Crdpq).map_err(core_err),
        QueryType::Ucrdpq => parse_ucrdpq(text).map(Query::Ucrdpq).map_err(core_err),
    }
}

/// Reads a file, labelling I/O failures with the path.
pub fn read_file(path: &Path) -> std::io::Result<String> {
    std::fs::read_to_string(path)
}
