//! Conjunctive (CRDPQ) and union (UCRDPQ) data path queries.
//!
//! Text form, one conjunctive query per member:
//!
//! ```text
//! ans(x1,y1) := x1 -[a.a]-> y1 & y1 -[(a)_=]-> x1
//! |||
//! ans(x1,y1) := x1 -[eps]-> y1
//! ```
//!
//! Members of a union are separated by a line containing only `|||`.
//! The empty union is written `empty N` where `N` is its arity. Lines
//! starting with `#` are comments.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::{eval_ree_query, eval_rem_query};
use crate::error::{Error, ParseError, Result};
use crate::expr::parse::parse_prefix;
use crate::expr::{Dialect, ParsedExpr, ReeExpr, RemExpr};
use crate::graph::DataGraph;
use crate::relation::{BinRel, NodeRelation};

/// The expression of one query atom.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PathExpr {
    Rem(RemExpr),
    Ree(ReeExpr),
}

impl PathExpr {
    pub fn eval(&self, g: &DataGraph) -> BinRel {
        match self {
            PathExpr::Rem(e) => eval_rem_query(g, e),
            PathExpr::Ree(e) => eval_ree_query(g, e),
        }
    }

    fn is_plain(&self) -> bool {
        match self {
            PathExpr::Rem(e) => e.is_plain(),
            PathExpr::Ree(e) => e.to_rem().is_some(),
        }
    }
}

impl fmt::Display for PathExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathExpr::Rem(e) => fmt::Display::fmt(e, f),
            PathExpr::Ree(e) => fmt::Display::fmt(e, f),
        }
    }
}

/// `from -[expr]-> to`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Atom {
    pub from: String,
    pub expr: PathExpr,
    pub to: String,
}

/// `Ans(z̄) := ⋀ xi -[ei]-> yi`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Crdpq {
    answer: Vec<String>,
    atoms: Vec<Atom>,
}

impl Crdpq {
    /// Checks: at least one atom and one answer variable, every answer
    /// variable occurs in an atom, and the atoms do not mix REM registers
    /// with REE restrictions.
    pub fn new(answer: Vec<String>, atoms: Vec<Atom>) -> Result<Self> {
        if answer.is_empty() {
            return Err(Error::InvalidQuery("answer tuple is empty".into()));
        }
        if atoms.is_empty() {
            return Err(Error::InvalidQuery("query has no atoms".into()));
        }
        for z in &answer {
            if !atoms.iter().any(|a| a.from == *z || a.to == *z) {
                return Err(Error::InvalidQuery(format!(
                    "answer variable `{z}` does not occur in any atom"
                )));
            }
        }
        let rem = atoms
            .iter()
            .any(|a| matches!(a.expr, PathExpr::Rem(_)) && !a.expr.is_plain());
        let ree = atoms
            .iter()
            .any(|a| matches!(a.expr, PathExpr::Ree(_)) && !a.expr.is_plain());
        if rem && ree {
            return Err(Error::InvalidQuery(
                "atoms mix REM and REE expressions".into(),
            ));
        }
        Ok(Crdpq { answer, atoms })
    }

    pub fn arity(&self) -> usize {
        self.answer.len()
    }

    pub fn answer(&self) -> &[String] {
        &self.answer
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// Variables in order of first occurrence in the atoms.
    pub fn variables(&self) -> Vec<&str> {
        let mut vars: Vec<&str> = Vec::new();
        for a in &self.atoms {
            for v in [&a.from, &a.to] {
                if !vars.contains(&v.as_str()) {
                    vars.push(v);
                }
            }
        }
        vars
    }
}

impl fmt::Display for Crdpq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ans({}) :=", self.answer.join(","))?;
        for (i, a) in self.atoms.iter().enumerate() {
            let sep = if i == 0 { " " } else { " & " };
            write!(f, "{sep}{} -[{}]-> {}", a.from, a.expr, a.to)?;
        }
        Ok(())
    }
}

/// A finite union of conjunctive queries of one arity; may be empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ucrdpq {
    arity: usize,
    members: Vec<Crdpq>,
}

impl Ucrdpq {
    pub fn empty(arity: usize) -> Result<Self> {
        if arity == 0 {
            return Err(Error::ZeroArity);
        }
        Ok(Ucrdpq {
            arity,
            members: Vec::new(),
        })
    }

    pub fn new(members: Vec<Crdpq>) -> Result<Self> {
        let arity = members
            .first()
            .map(Crdpq::arity)
            .ok_or_else(|| Error::InvalidQuery("use Ucrdpq::empty for the empty union".into()))?;
        if let Some(q) = members.iter().find(|q| q.arity() != arity) {
            return Err(Error::ArityMismatch {
                expected: arity,
                found: q.arity(),
            });
        }
        Ok(Ucrdpq { arity, members })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn members(&self) -> &[Crdpq] {
        &self.members
    }
}

impl fmt::Display for Ucrdpq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.members.is_empty() {
            return write!(f, "empty {}", self.arity);
        }
        for (i, q) in self.members.iter().enumerate() {
            if i > 0 {
                f.write_str("\n|||\n")?;
            }
            write!(f, "{q}")?;
        }
        Ok(())
    }
}

/// Answers of `q`: projections onto the answer tuple of every valuation
/// satisfying all atoms.
pub fn eval_crdpq(g: &DataGraph, q: &Crdpq) -> NodeRelation {
    let vars = q.variables();
    let index: BTreeMap<&str, usize> = vars.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let mut atoms: Vec<(usize, BinRel, usize)> = q
        .atoms
        .iter()
        .map(|a| (index[a.from.as_str()], a.expr.eval(g), index[a.to.as_str()]))
        .collect();
    // Smallest relations first, then prefer atoms touching bound variables.
    atoms.sort_by_key(|(_, r, _)| r.len());
    let mut ordered = Vec::with_capacity(atoms.len());
    let mut bound = alloc::vec![false; vars.len()];
    while !atoms.is_empty() {
        let pick = atoms
            .iter()
            .position(|(x, _, y)| bound[*x] || bound[*y])
            .unwrap_or(0);
        let atom = atoms.remove(pick);
        bound[atom.0] = true;
        bound[atom.2] = true;
        ordered.push(atom);
    }
    let answer: Vec<usize> = q.answer.iter().map(|z| index[z.as_str()]).collect();
    let mut out = NodeRelation::new(q.arity()).expect("arity is positive");
    let mut valuation = alloc::vec![None; vars.len()];
    search(&ordered, 0, &mut valuation, &mut |mu| {
        out.insert_unchecked(
            answer
                .iter()
                .map(|&z| mu[z].expect("answer bound"))
                .collect(),
        );
    });
    out
}

fn search(
    atoms: &[(usize, BinRel, usize)],
    depth: usize,
    mu: &mut Vec<Option<usize>>,
    emit: &mut dyn FnMut(&[Option<usize>]),
) {
    let Some((x, rel, y)) = atoms.get(depth) else {
        emit(mu);
        return;
    };
    let (x, y) = (*x, *y);
    match (mu[x], mu[y]) {
        (Some(u), Some(v)) => {
            if rel.contains(u, v) {
                search(atoms, depth + 1, mu, emit);
            }
        }
        (Some(u), None) => {
            for v in rel.image(u) {
                mu[y] = Some(v);
                search(atoms, depth + 1, mu, emit);
            }
            mu[y] = None;
        }
        (None, Some(v)) => {
            for u in (0..rel.nodes()).filter(|&u| rel.contains(u, v)) {
                mu[x] = Some(u);
                search(atoms, depth + 1, mu, emit);
            }
            mu[x] = None;
        }
        (None, None) => {
            for (u, v) in rel.iter() {
                if x == y && u != v {
                    continue;
                }
                mu[x] = Some(u);
                mu[y] = Some(v);
                search(atoms, depth + 1, mu, emit);
            }
            mu[x] = None;
            mu[y] = None;
        }
    }
}

/// Union of the members' answers; empty for the empty union.
pub fn eval_ucrdpq(g: &DataGraph, q: &Ucrdpq) -> NodeRelation {
    let mut out = NodeRelation::new(q.arity).expect("arity is positive");
    for m in &q.members {
        for t in eval_crdpq(g, m).iter() {
            out.insert_unchecked(t.to_vec());
        }
    }
    out
}

/// Parses one conjunctive query.
pub fn parse_crdpq(text: &str) -> core::result::Result<Crdpq, Error> {
    let mut p = QueryParser { src: text, pos: 0 };
    let q = p.crdpq()?;
    p.skip_ws();
    if p.pos != text.len() {
        return Err(p.error("unexpected trailing input").into());
    }
    Ok(q)
}

/// Parses a union query file.
pub fn parse_ucrdpq(text: &str) -> core::result::Result<Ucrdpq, Error> {
    // Blank out comments, keeping byte offsets intact.
    let mut cleaned = String::with_capacity(text.len());
    let mut chunks: Vec<(usize, usize)> = Vec::new();
    let mut chunk_start = 0;
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let trimmed = line.trim();
        if trimmed.starts_with('#') {
            cleaned.extend(line.chars().map(|c| if c == '\n' { '\n' } else { ' ' }));
        } else {
            cleaned.push_str(line);
        }
        if trimmed == "|||" {
            chunks.push((chunk_start, offset));
            chunk_start = offset + line.len();
        }
        offset += line.len();
    }
    chunks.push((chunk_start, text.len()));

    let whole = cleaned.trim();
    if let Some(rest) = whole.strip_prefix("empty") {
        if chunks.len() == 1 {
            let arity = rest.trim().parse::<usize>().map_err(|_| {
                ParseError::new(
                    cleaned.find("empty").unwrap_or(0) + 5,
                    "expected the arity after `empty`",
                )
            })?;
            return Ucrdpq::empty(arity);
        }
    }

    let mut members = Vec::new();
    for (start, end) in chunks {
        let mut p = QueryParser {
            src: &cleaned[..end],
            pos: start,
        };
        p.skip_ws();
        if p.pos == end {
            return Err(p.error("empty union member").into());
        }
        members.push(p.crdpq()?);
        p.skip_ws();
        if p.pos != end {
            return Err(p.error("unexpected trailing input").into());
        }
    }
    Ucrdpq::new(members)
}

struct QueryParser<'a> {
    src: &'a str,
    pos: usize,
}

impl QueryParser<'_> {
    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn error(&self, msg: &str) -> ParseError {
        ParseError::new(self.pos, msg.to_string())
    }

    fn skip_ws(&mut self) {
        let rest = self.rest();
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> core::result::Result<(), ParseError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{tok}`")))
        }
    }

    fn ident(&mut self) -> core::result::Result<String, ParseError> {
        self.skip_ws();
        let rest = self.rest();
        let len = rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_' || c == '\''))
            .unwrap_or(rest.len());
        if len == 0 || !rest.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_') {
            return Err(self.error("expected an identifier"));
        }
        let id = rest[..len].to_string();
        self.pos += len;
        Ok(id)
    }

    fn crdpq(&mut self) -> core::result::Result<Crdpq, Error> {
        let head_pos = self.pos;
        self.ident()?;
        self.expect("(")?;
        let mut answer = alloc::vec![self.ident()?];
        while self.eat(",") {
            answer.push(self.ident()?);
        }
        self.expect(")")?;
        self.expect(":=")?;
        let mut atoms = alloc::vec![self.atom()?];
        while self.eat("&") {
            atoms.push(self.atom()?);
        }
        Crdpq::new(answer, atoms).map_err(|e| match e {
            Error::InvalidQuery(msg) => ParseError::new(head_pos, msg).into(),
            other => other,
        })
    }

    fn atom(&mut self) -> core::result::Result<Atom, ParseError> {
        let from = self.ident()?;
        self.expect("-[")?;
        let (expr, end) = parse_prefix(self.src, self.pos, Dialect::Any)?;
        self.pos = end;
        self.expect("]->")?;
        let to = self.ident()?;
        let expr = match expr {
            ParsedExpr::Rem(e) => PathExpr::Rem(e),
            ParsedExpr::Ree(e) => PathExpr::Ree(e),
        };
        Ok(Atom { from, expr, to })
    }
}
