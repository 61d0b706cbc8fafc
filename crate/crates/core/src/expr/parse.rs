use alloc::boxed::Box;
use alloc::format;
use alloc::vec::Vec;

use super::{Condition, ReeExpr, RemExpr};
use crate::error::ParseError;
use crate::graph::Letter;

/// Which expression language a parser accepts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dialect {
    Rem,
    Ree,
    /// Either language, decided by the constructs used. Plain regular
    /// expressions come back as [`ParsedExpr::Rem`].
    Any,
}

/// Result of parsing with [`Dialect::Any`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ParsedExpr {
    Rem(RemExpr),
    Ree(ReeExpr),
}

pub fn parse_rem(text: &str) -> Result<RemExpr, ParseError> {
    match parse_complete(text, Dialect::Rem)? {
        ParsedExpr::Rem(e) => Ok(e),
        ParsedExpr::Ree(_) => unreachable!("REM dialect never yields an REE"),
    }
}

pub fn parse_ree(text: &str) -> Result<ReeExpr, ParseError> {
    match parse_complete(text, Dialect::Ree)? {
        ParsedExpr::Ree(e) => Ok(e),
        ParsedExpr::Rem(e) => Ok(e
            .to_ree()
            .expect("REE dialect only admits plain REM syntax")),
    }
}

/// Parses a complete expression in `dialect`.
pub fn parse_complete(text: &str, dialect: Dialect) -> Result<ParsedExpr, ParseError> {
    let (e, end) = parse_prefix(text, 0, dialect)?;
    let mut p = Parser::new(text, dialect);
    p.pos = end;
    p.skip_ws();
    if p.pos != text.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

/// Parses the longest expression starting at byte `start`, returning it and
/// the byte offset just past it (trailing whitespace not consumed).
pub(crate) fn parse_prefix(
    text: &str,
    start: usize,
    dialect: Dialect,
) -> Result<(ParsedExpr, usize), ParseError> {
    let mut p = Parser::new(text, dialect);
    p.pos = start;
    let syn = p.expr()?;
    let e = match (p.rem_only, p.ree_only) {
        (Some(a), Some(b)) => {
            return Err(ParseError::new(
                a.max(b),
                "expression mixes REM registers/conditions with REE restrictions",
            ))
        }
        (_, Some(_)) => ParsedExpr::Ree(syn.into_ree()),
        _ => ParsedExpr::Rem(syn.into_rem()),
    };
    Ok((e, p.pos))
}

enum Syn {
    Eps,
    Letter(Letter),
    Union(Box<Syn>, Box<Syn>),
    Concat(Box<Syn>, Box<Syn>),
    Plus(Box<Syn>),
    Test(Box<Syn>, Condition),
    Store(Vec<usize>, Box<Syn>),
    Eq(Box<Syn>),
    Neq(Box<Syn>),
}

impl Syn {
    fn into_rem(self) -> RemExpr {
        match self {
            Syn::Eps => RemExpr::Eps,
            Syn::Letter(a) => RemExpr::Letter(a),
            Syn::Union(a, b) => a.into_rem().union(b.into_rem()),
            Syn::Concat(a, b) => a.into_rem().concat(b.into_rem()),
            Syn::Plus(e) => e.into_rem().plus(),
            Syn::Test(e, c) => e.into_rem().test(c),
            Syn::Store(rs, e) => RemExpr::store(rs, e.into_rem()),
            Syn::Eq(_) | Syn::Neq(_) => unreachable!("checked by the dialect"),
        }
    }

    fn into_ree(self) -> ReeExpr {
        match self {
            Syn::Eps => ReeExpr::Eps,
            Syn::Letter(a) => ReeExpr::Letter(a),
            Syn::Union(a, b) => a.into_ree().union(b.into_ree()),
            Syn::Concat(a, b) => a.into_ree().concat(b.into_ree()),
            Syn::Plus(e) => e.into_ree().plus(),
            Syn::Eq(e) => e.into_ree().eq(),
            Syn::Neq(e) => e.into_ree().neq(),
            Syn::Test(..) | Syn::Store(..) => unreachable!("checked by the dialect"),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    dialect: Dialect,
    rem_only: Option<usize>,
    ree_only: Option<usize>,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, dialect: Dialect) -> Self {
        Parser {
            src,
            pos: 0,
            dialect,
            rem_only: None,
            ree_only: None,
        }
    }

    fn error(&self, msg: &str) -> ParseError {
        let found = self.rest().chars().next();
        let message = match found {
            Some(c) => format!("{msg} (found `{c}`)"),
            None => format!("{msg} (found end of input)"),
        };
        ParseError::new(self.pos, message)
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let rest = self.rest();
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
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

    fn expect(&mut self, tok: &str) -> Result<(), ParseError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{tok}`")))
        }
    }

    fn mark_rem(&mut self, at: usize) -> Result<(), ParseError> {
        if self.dialect == Dialect::Ree {
            return Err(ParseError::new(at, "REM construct not allowed in an REE"));
        }
        self.rem_only.get_or_insert(at);
        Ok(())
    }

    fn mark_ree(&mut self, at: usize) -> Result<(), ParseError> {
        if self.dialect == Dialect::Rem {
            return Err(ParseError::new(at, "REE construct not allowed in an REM"));
        }
        self.ree_only.get_or_insert(at);
        Ok(())
    }

    fn expr(&mut self) -> Result<Syn, ParseError> {
        let mut e = self.concat()?;
        while self.peek() == Some('|') && !self.rest().starts_with("||") {
            self.pos += 1;
            let rhs = self.concat()?;
            e = Syn::Union(Box::new(e), Box::new(rhs));
        }
        Ok(e)
    }

    fn concat(&mut self) -> Result<Syn, ParseError> {
        let mut e = self.postfix()?;
        while self.eat(".") {
            let rhs = self.postfix()?;
            e = Syn::Concat(Box::new(e), Box::new(rhs));
        }
        Ok(e)
    }

    fn postfix(&mut self) -> Result<Syn, ParseError> {
        let mut e = self.atom()?;
        loop {
            self.skip_ws();
            let at = self.pos;
            if self.eat("^+") {
                e = Syn::Plus(Box::new(e));
            } else if self.rest().starts_with('[') {
                self.mark_rem(at)?;
                self.pos += 1;
                let c = self.cond()?;
                self.expect("]")?;
                e = Syn::Test(Box::new(e), c);
            } else if self.eat("_!=") {
                self.mark_ree(at)?;
                e = Syn::Neq(Box::new(e));
            } else if self.eat("_=") {
                self.mark_ree(at)?;
                e = Syn::Eq(Box::new(e));
            } else {
                return Ok(e);
            }
        }
    }

    fn atom(&mut self) -> Result<Syn, ParseError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(")")?;
                Ok(e)
            }
            Some('!') => {
                self.mark_rem(self.pos)?;
                self.pos += 1;
                self.expect("{")?;
                let mut regs = alloc::vec![self.register()?];
                while self.eat(",") {
                    regs.push(self.register()?);
                }
                self.expect("}")?;
                self.expect(".")?;
                let body = self.atom()?;
                regs.sort_unstable();
                regs.dedup();
                Ok(Syn::Store(regs, Box::new(body)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let ident = self.ident();
                if ident == "eps" {
                    Ok(Syn::Eps)
                } else {
                    Ok(Syn::Letter(Letter::new(ident)))
                }
            }
            _ => Err(self.error("expected `eps`, a letter, `(` or `!{`")),
        }
    }

    fn ident(&mut self) -> &'a str {
        let rest = self.rest();
        let len = rest
            .find(|c: char| !c.is_ascii_alphanumeric())
            .unwrap_or(rest.len());
        self.pos += len;
        &rest[..len]
    }

    fn register(&mut self) -> Result<usize, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let rest = self.rest();
        let digits = rest.strip_prefix('r').map(|d| {
            let len = d.find(|c: char| !c.is_ascii_digit()).unwrap_or(d.len());
            &d[..len]
        });
        match digits {
            Some(d) if !d.is_empty() && !d.starts_with('0') => {
                let index = d
                    .parse()
                    .map_err(|_| ParseError::new(start, "register index too large"))?;
                self.pos += 1 + d.len();
                Ok(index)
            }
            _ => Err(self.error("expected a register `r1`, `r2`, …")),
        }
    }

    fn cond(&mut self) -> Result<Condition, ParseError> {
        let mut c = self.conj()?;
        while self.eat("||") {
            c = c.or(self.conj()?);
        }
        Ok(c)
    }

    fn conj(&mut self) -> Result<Condition, ParseError> {
        let mut c = self.lit()?;
        while self.eat("&&") {
            c = c.and(self.lit()?);
        }
        Ok(c)
    }

    fn lit(&mut self) -> Result<Condition, ParseError> {
        if self.eat("~") {
            return Ok(self.lit()?.not());
        }
        if self.eat("(") {
            let c = self.cond()?;
            self.expect(")")?;
            return Ok(c);
        }
        self.skip_ws();
        if self.rest().starts_with("true")
            && !self.rest()[4..].starts_with(|c: char| c.is_ascii_alphanumeric())
        {
            self.pos += 4;
            return Ok(Condition::True);
        }
        let r = self.register()?;
        if self.eat("==") {
            Ok(Condition::Eq(r))
        } else if self.eat("!=") {
            Ok(Condition::Neq(r))
        } else {
            Err(self.error("expected `==` or `!=` after register"))
        }
    }
}
