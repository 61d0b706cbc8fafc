//! Regular expressions with memory (REM) and with equality (REE).
//!
//! Concrete syntax (shared by both languages; REM-only and REE-only forms
//! are rejected by the other parser):
//!
//! ```text
//! expr    := concat ('|' concat)*
//! concat  := postfix ('.' postfix)*
//! postfix := atom ('^+' | '[' cond ']' | '_=' | '_!=')*
//! atom    := 'eps' | LETTER | '(' expr ')' | '!' '{' REG (',' REG)* '}' '.' atom
//! cond    := conj ('||' conj)*
//! conj    := lit ('&&' lit)*
//! lit     := 'true' | REG '==' | REG '!=' | '~' lit | '(' cond ')'
//! REG     := 'r' [1-9][0-9]*
//! LETTER  := [A-Za-z][A-Za-z0-9]*   (except the keyword `eps`)
//! ```
//!
//! `[c]` and `!{…}.` are REM-only, `_=` and `_!=` are REE-only. Postfix
//! operators bind tightest, then `.`, then `|`; both binary operators are
//! left associative.

mod canonical;
pub(crate) mod parse;
pub(crate) mod semantics;

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::Letter;

pub use canonical::canonical_rem;
pub use parse::{parse_ree, parse_rem, Dialect, ParsedExpr};
pub use semantics::{cond_eval, ree_member, rem_lang_member, rem_match, Assignment};

/// A boolean condition over registers `r1 … rk`, tested against the current
/// data value.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Condition {
    True,
    /// `ri==`: register `i` (1-based) holds the current value.
    Eq(usize),
    /// `ri!=`: register `i` is empty or holds a different value.
    Neq(usize),
    And(Box<Condition>, Box<Condition>),
    Or(Box<Condition>, Box<Condition>),
    Not(Box<Condition>),
}

impl Condition {
    pub fn and(self, other: Condition) -> Condition {
        Condition::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Condition) -> Condition {
        Condition::Or(Box::new(self), Box::new(other))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Condition {
        Condition::Not(Box::new(self))
    }

    /// Conjunction of `conds`, or `true` when empty.
    pub fn all(conds: impl IntoIterator<Item = Condition>) -> Condition {
        conds
            .into_iter()
            .reduce(Condition::and)
            .unwrap_or(Condition::True)
    }

    /// Highest register index mentioned, 0 if none.
    pub fn max_register(&self) -> usize {
        match self {
            Condition::True => 0,
            Condition::Eq(r) | Condition::Neq(r) => *r,
            Condition::And(a, b) | Condition::Or(a, b) => a.max_register().max(b.max_register()),
            Condition::Not(c) => c.max_register(),
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Condition::Or(..) => 0,
            Condition::And(..) => 1,
            _ => 2,
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.prec() < min {
            f.write_str("(")?;
            self.write(f, 0)?;
            return f.write_str(")");
        }
        match self {
            Condition::True => f.write_str("true"),
            Condition::Eq(r) => write!(f, "r{r}=="),
            Condition::Neq(r) => write!(f, "r{r}!="),
            Condition::And(a, b) => {
                a.write(f, 1)?;
                f.write_str(" && ")?;
                b.write(f, 2)
            }
            Condition::Or(a, b) => {
                a.write(f, 0)?;
                f.write_str(" || ")?;
                b.write(f, 1)
            }
            Condition::Not(c) => {
                f.write_str("~")?;
                c.write(f, 2)
            }
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}

/// Regular expression with memory.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum RemExpr {
    Eps,
    Letter(Letter),
    Union(Box<RemExpr>, Box<RemExpr>),
    Concat(Box<RemExpr>, Box<RemExpr>),
    Plus(Box<RemExpr>),
    /// `e[c]`: `c` must hold for the last value of the match.
    Test(Box<RemExpr>, Condition),
    /// `↓r̄.e`: store the first value of the match in registers `r̄`
    /// (1-based, sorted, nonempty) before matching `e`.
    Store(Vec<usize>, Box<RemExpr>),
}

impl RemExpr {
    pub fn letter(a: &str) -> RemExpr {
        RemExpr::Letter(Letter::new(a))
    }

    pub fn union(self, other: RemExpr) -> RemExpr {
        RemExpr::Union(Box::new(self), Box::new(other))
    }

    pub fn concat(self, other: RemExpr) -> RemExpr {
        RemExpr::Concat(Box::new(self), Box::new(other))
    }

    pub fn plus(self) -> RemExpr {
        RemExpr::Plus(Box::new(self))
    }

    pub fn test(self, c: Condition) -> RemExpr {
        RemExpr::Test(Box::new(self), c)
    }

    /// `↓r̄.self`; `registers` is sorted and deduplicated.
    pub fn store(mut registers: Vec<usize>, e: RemExpr) -> RemExpr {
        registers.sort_unstable();
        registers.dedup();
        RemExpr::Store(registers, Box::new(e))
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            RemExpr::Eps | RemExpr::Letter(_) => 1,
            RemExpr::Union(a, b) | RemExpr::Concat(a, b) => 1 + a.size() + b.size(),
            RemExpr::Plus(e) | RemExpr::Test(e, _) | RemExpr::Store(_, e) => 1 + e.size(),
        }
    }

    /// True when the expression uses no registers, i.e. it is a plain
    /// regular expression.
    pub fn is_plain(&self) -> bool {
        registers_of(self) == 0 && !self.has_test()
    }

    fn has_test(&self) -> bool {
        match self {
            RemExpr::Eps | RemExpr::Letter(_) => false,
            RemExpr::Test(..) => true,
            RemExpr::Union(a, b) | RemExpr::Concat(a, b) => a.has_test() || b.has_test(),
            RemExpr::Plus(e) | RemExpr::Store(_, e) => e.has_test(),
        }
    }

    /// The same expression read as an REE, if it is plain.
    pub fn to_ree(&self) -> Option<ReeExpr> {
        Some(match self {
            RemExpr::Eps => ReeExpr::Eps,
            RemExpr::Letter(a) => ReeExpr::Letter(a.clone()),
            RemExpr::Union(a, b) => ReeExpr::Union(Box::new(a.to_ree()?), Box::new(b.to_ree()?)),
            RemExpr::Concat(a, b) => ReeExpr::Concat(Box::new(a.to_ree()?), Box::new(b.to_ree()?)),
            RemExpr::Plus(e) => ReeExpr::Plus(Box::new(e.to_ree()?)),
            RemExpr::Test(..) | RemExpr::Store(..) => return None,
        })
    }

    fn prec(&self) -> u8 {
        match self {
            RemExpr::Union(..) => 0,
            RemExpr::Concat(..) => 1,
            RemExpr::Plus(_) | RemExpr::Test(..) => 2,
            RemExpr::Eps | RemExpr::Letter(_) | RemExpr::Store(..) => 3,
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.prec() < min {
            f.write_str("(")?;
            self.write(f, 0)?;
            return f.write_str(")");
        }
        match self {
            RemExpr::Eps => f.write_str("eps"),
            RemExpr::Letter(a) => write!(f, "{a}"),
            RemExpr::Union(a, b) => {
                a.write(f, 0)?;
                f.write_str(" | ")?;
                b.write(f, 1)
            }
            RemExpr::Concat(a, b) => {
                a.write(f, 1)?;
                f.write_str(" . ")?;
                b.write(f, 2)
            }
            RemExpr::Plus(e) => {
                e.write_operand(f)?;
                f.write_str("^+")
            }
            RemExpr::Test(e, c) => {
                e.write_operand(f)?;
                write!(f, "[{c}]")
            }
            RemExpr::Store(rs, e) => {
                f.write_str("!{")?;
                write_registers(f, rs)?;
                f.write_str("}.")?;
                e.write(f, 3)
            }
        }
    }

    fn write_operand(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if matches!(self, RemExpr::Eps) {
            return f.write_str("(eps)");
        }
        self.write(f, 2)
    }
}

fn write_registers(f: &mut fmt::Formatter<'_>, rs: &[usize]) -> fmt::Result {
    for (i, r) in rs.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "r{r}")?;
    }
    Ok(())
}

impl fmt::Display for RemExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}

/// Highest register index used by `e`, 0 for plain expressions.
pub fn registers_of(e: &RemExpr) -> usize {
    match e {
        RemExpr::Eps | RemExpr::Letter(_) => 0,
        RemExpr::Union(a, b) | RemExpr::Concat(a, b) => registers_of(a).max(registers_of(b)),
        RemExpr::Plus(e) => registers_of(e),
        RemExpr::Test(e, c) => registers_of(e).max(c.max_register()),
        RemExpr::Store(rs, e) => registers_of(e).max(rs.iter().copied().max().unwrap_or(0)),
    }
}

/// Regular expression with equality.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ReeExpr {
    Eps,
    Letter(Letter),
    Union(Box<ReeExpr>, Box<ReeExpr>),
    Concat(Box<ReeExpr>, Box<ReeExpr>),
    Plus(Box<ReeExpr>),
    /// `e_=`: first and last value of the match are equal.
    Eq(Box<ReeExpr>),
    /// `e_!=`: first and last value of the match differ.
    Neq(Box<ReeExpr>),
}

impl ReeExpr {
    pub fn letter(a: &str) -> ReeExpr {
        ReeExpr::Letter(Letter::new(a))
    }

    pub fn union(self, other: ReeExpr) -> ReeExpr {
        ReeExpr::Union(Box::new(self), Box::new(other))
    }

    pub fn concat(self, other: ReeExpr) -> ReeExpr {
        ReeExpr::Concat(Box::new(self), Box::new(other))
    }

    pub fn plus(self) -> ReeExpr {
        ReeExpr::Plus(Box::new(self))
    }

    pub fn eq(self) -> ReeExpr {
        ReeExpr::Eq(Box::new(self))
    }

    pub fn neq(self) -> ReeExpr {
        ReeExpr::Neq(Box::new(self))
    }

    pub fn size(&self) -> usize {
        match self {
            ReeExpr::Eps | ReeExpr::Letter(_) => 1,
            ReeExpr::Union(a, b) | ReeExpr::Concat(a, b) => 1 + a.size() + b.size(),
            ReeExpr::Plus(e) | ReeExpr::Eq(e) | ReeExpr::Neq(e) => 1 + e.size(),
        }
    }

    /// The same expression read as an REM, if it uses no restriction.
    pub fn to_rem(&self) -> Option<RemExpr> {
        Some(match self {
            ReeExpr::Eps => RemExpr::Eps,
            ReeExpr::Letter(a) => RemExpr::Letter(a.clone()),
            ReeExpr::Union(a, b) => RemExpr::Union(Box::new(a.to_rem()?), Box::new(b.to_rem()?)),
            ReeExpr::Concat(a, b) => RemExpr::Concat(Box::new(a.to_rem()?), Box::new(b.to_rem()?)),
            ReeExpr::Plus(e) => RemExpr::Plus(Box::new(e.to_rem()?)),
            ReeExpr::Eq(_) | ReeExpr::Neq(_) => return None,
        })
    }

    fn prec(&self) -> u8 {
        match self {
            ReeExpr::Union(..) => 0,
            ReeExpr::Concat(..) => 1,
            ReeExpr::Plus(_) | ReeExpr::Eq(_) | ReeExpr::Neq(_) => 2,
            ReeExpr::Eps | ReeExpr::Letter(_) => 3,
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.prec() < min {
            f.write_str("(")?;
            self.write(f, 0)?;
            return f.write_str(")");
        }
        match self {
            ReeExpr::Eps => f.write_str("eps"),
            ReeExpr::Letter(a) => write!(f, "{a}"),
            ReeExpr::Union(a, b) => {
                a.write(f, 0)?;
                f.write_str(" | ")?;
                b.write(f, 1)
            }
            ReeExpr::Concat(a, b) => {
                a.write(f, 1)?;
                f.write_str(" . ")?;
                b.write(f, 2)
            }
            ReeExpr::Plus(e) => {
                e.write_operand(f)?;
                f.write_str("^+")
            }
            ReeExpr::Eq(e) => {
                e.write_operand(f)?;
                f.write_str("_=")
            }
            ReeExpr::Neq(e) => {
                e.write_operand(f)?;
                f.write_str("_!=")
            }
        }
    }

    fn write_operand(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if matches!(self, ReeExpr::Eps) {
            return f.write_str("(eps)");
        }
        self.write(f, 2)
    }
}

impl fmt::Display for ReeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}

/// One block `↓r̄.a[c]` of a basic REM.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Block {
    /// Registers stored before the step, 1-based and sorted; may be empty.
    pub store: Vec<usize>,
    pub letter: Letter,
    pub cond: Condition,
}

impl Block {
    pub fn to_rem(&self) -> RemExpr {
        let step = RemExpr::Letter(self.letter.clone());
        let step = if self.store.is_empty() {
            step
        } else {
            RemExpr::store(self.store.clone(), step)
        };
        match self.cond {
            Condition::True => step,
            ref c => step.test(c.clone()),
        }
    }
}

/// `↓r̄1.a1[c1] · … · ↓r̄m.am[cm]`, the normal form of REM witnesses.
/// Zero blocks denote `eps`.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct BasicRem {
    pub blocks: Vec<Block>,
}

impl BasicRem {
    pub fn new(blocks: Vec<Block>) -> Self {
        BasicRem { blocks }
    }

    pub fn registers(&self) -> usize {
        self.blocks
            .iter()
            .map(|b| {
                b.store
                    .iter()
                    .copied()
                    .max()
                    .unwrap_or(0)
                    .max(b.cond.max_register())
            })
            .max()
            .unwrap_or(0)
    }

    pub fn to_rem(&self) -> RemExpr {
        self.blocks
            .iter()
            .map(Block::to_rem)
            .reduce(RemExpr::concat)
            .unwrap_or(RemExpr::Eps)
    }
}

impl fmt::Display for BasicRem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_rem(), f)
    }
}
