//! RDPQ_= definability through the level hierarchy.
//!
//! `L_0` is the closure of `{S_ε} ∪ {S_a}` under union and composition;
//! `L_{i+1}` closes `L_i` together with the `=` and `≠` restrictions of
//! its members. A relation is RDPQ_=-definable iff it lies in `L_{n²}`,
//! and the hierarchy usually stabilizes much earlier.
//!
//! Union distributes over composition and over both restrictions, so each
//! level is exactly the set of unions of its *generators*: relations built
//! from the base relations by composition and restriction alone. Only the
//! generators are materialized, and generators that are unions of others
//! are not expanded further; [`LevelSet::decompose`] answers membership by
//! collecting the generators below a relation.

use alloc::vec::Vec;
use core::hash::BuildHasher;

use hashbrown::hash_table::Entry;
use hashbrown::{DefaultHashBuilder, HashTable};

use crate::error::{Error, Result};
use crate::eval::eval_ree_query;
use crate::expr::ReeExpr;
use crate::graph::DataGraph;
use crate::relation::BinRel;
use crate::Decision;

/// Default cap on generator relations.
pub const DEFAULT_BUDGET: usize = 1 << 20;

/// How a generator was first derived. Indices refer to earlier generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Eps,
    Letter(usize),
    Compose(usize, usize),
    Eq(usize),
    Neq(usize),
}

#[derive(Clone, Debug)]
pub struct LevelSet {
    n: usize,
    relations: Vec<BinRel>,
    provenance: Vec<Provenance>,
    levels: Vec<usize>,
    /// Highest level computed.
    top: usize,
    /// First level `i` with `L_{i+1} = L_i`, if reached.
    stable: Option<usize>,
}

struct Closure<'g> {
    g: &'g DataGraph,
    set: LevelSet,
    hasher: DefaultHashBuilder,
    index: HashTable<u32>,
    budget: usize,
    /// Generators that are not a union of earlier generators. Only these
    /// are composed and restricted.
    kept: Vec<usize>,
    is_kept: Vec<bool>,
    /// Kept generators every kept generator is a product of: the letter
    /// relations and the restrictions.
    primes: Vec<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Added {
    Known,
    Kept,
    Redundant,
}

impl Closure<'_> {
    fn add(&mut self, r: BinRel, p: Provenance, level: usize) -> Result<Added> {
        let h = self.hasher.hash_one(&r);
        let rels = &self.set.relations;
        let hasher = &self.hasher;
        let slot = match self.index.entry(
            h,
            |&i| rels[i as usize] == r,
            |&i| hasher.hash_one(&rels[i as usize]),
        ) {
            Entry::Occupied(_) => return Ok(Added::Known),
            Entry::Vacant(v) => v,
        };
        if self.set.relations.len() >= self.budget {
            return Err(Error::ResourceExhausted {
                budget: self.budget,
            });
        }
        let mut covered = BinRel::empty(self.set.n);
        if !r.is_empty() {
            for &i in &self.kept {
                if rels[i].is_subset(&r) {
                    covered.union_with(&rels[i]);
                }
            }
        }
        let keep = r.is_empty() || covered != r;
        let i = self.set.relations.len();
        slot.insert(i as u32);
        self.set.relations.push(r);
        self.set.provenance.push(p);
        self.set.levels.push(level);
        self.is_kept.push(keep);
        if keep {
            self.kept.push(i);
            Ok(Added::Kept)
        } else {
            Ok(Added::Redundant)
        }
    }

    /// Restores closure under composition after new primes were added.
    /// Every kept generator is a product of primes, so right-multiplying
    /// by primes suffices: older kept generators meet the new primes, and
    /// every kept generator from `from` on meets all of them.
    fn compose_close(&mut self, from: usize, new_primes: usize, level: usize) -> Result<()> {
        let old: Vec<usize> = self
            .kept
            .iter()
            .copied()
            .take_while(|&i| i < from)
            .collect();
        for i in old {
            for pi in new_primes..self.primes.len() {
                let p = self.primes[pi];
                let r = self.set.relations[i].compose(&self.set.relations[p]);
                self.add(r, Provenance::Compose(i, p), level)?;
            }
        }
        let mut i = from;
        while i < self.set.relations.len() {
            if self.is_kept[i] {
                for pi in 0..self.primes.len() {
                    let p = self.primes[pi];
                    let r = self.set.relations[i].compose(&self.set.relations[p]);
                    self.add(r, Provenance::Compose(i, p), level)?;
                }
            }
            i += 1;
        }
        Ok(())
    }
}

/// Computes levels `L_0 … L_max_level`, stopping early once a level adds
/// nothing. Fails when more than `budget` generators appear.
///
/// A new relation that is the union of kept generators inside it is
/// recorded but not expanded: composition and restriction distribute over
/// union, so everything it would derive is a union of what its parts
/// derive.
pub fn level_closure(g: &DataGraph, max_level: usize, budget: usize) -> Result<LevelSet> {
    let n = g.node_count();
    let mut c = Closure {
        g,
        set: LevelSet {
            n,
            relations: Vec::new(),
            provenance: Vec::new(),
            levels: Vec::new(),
            top: 0,
            stable: None,
        },
        hasher: DefaultHashBuilder::default(),
        index: HashTable::new(),
        budget,
        kept: Vec::new(),
        is_kept: Vec::new(),
        primes: Vec::new(),
    };
    c.add(BinRel::identity(n), Provenance::Eps, 0)?;
    for li in 0..g.alphabet().len() {
        if c.add(BinRel::letter(g, li), Provenance::Letter(li), 0)? == Added::Kept {
            c.primes.push(c.set.relations.len() - 1);
        }
    }
    c.compose_close(0, 0, 0)?;
    // Kept generators below this index have been restricted already.
    let mut restricted = 0;
    for level in 1..=max_level {
        let known = c.set.relations.len();
        let old_primes = c.primes.len();
        let fresh: Vec<usize> = c
            .kept
            .iter()
            .copied()
            .filter(|&i| i >= restricted)
            .collect();
        for i in fresh {
            let r = &c.set.relations[i];
            let (eq, neq) = (r.restrict_eq(c.g), r.restrict_neq(c.g));
            for (part, p) in [(eq, Provenance::Eq(i)), (neq, Provenance::Neq(i))] {
                if c.add(part, p, level)? == Added::Kept {
                    c.primes.push(c.set.relations.len() - 1);
                }
            }
        }
        restricted = known;
        if c.primes.len() == old_primes {
            c.set.stable = Some(level - 1);
            break;
        }
        c.compose_close(known, old_primes, level)?;
        c.set.top = level;
    }
    Ok(c.set)
}

impl LevelSet {
    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn relations(&self) -> &[BinRel] {
        &self.relations
    }

    pub fn provenance(&self, i: usize) -> Provenance {
        self.provenance[i]
    }

    pub fn level(&self, i: usize) -> usize {
        self.levels[i]
    }

    /// Highest level computed.
    pub fn top(&self) -> usize {
        self.top
    }

    /// The level at which the hierarchy stopped growing, if it did.
    pub fn stable_level(&self) -> Option<usize> {
        self.stable
    }

    /// Generators of level at most `level`.
    pub fn generators(&self, level: usize) -> impl Iterator<Item = (usize, &BinRel)> + '_ {
        self.relations
            .iter()
            .enumerate()
            .filter(move |&(i, _)| self.levels[i] <= level)
    }

    /// Writes `s` as a union of generators of the lowest possible level.
    /// Returns that level and the chosen generators, or `None` when `s` is
    /// not in any computed level.
    pub fn decompose(&self, s: &BinRel) -> Option<(usize, Vec<usize>)> {
        if s.nodes() != self.n {
            return None;
        }
        if s.is_empty() {
            let i = (0..self.len())
                .filter(|&i| self.relations[i].is_empty())
                .min_by_key(|&i| (self.levels[i], i))?;
            return Some((self.levels[i], alloc::vec![i]));
        }
        let below: Vec<usize> = (0..self.len())
            .filter(|&i| !self.relations[i].is_empty() && self.relations[i].is_subset(s))
            .collect();
        // Each pair of `s` needs a generator; the level is the max over
        // pairs of the cheapest generator covering it.
        let mut level = 0;
        for (u, v) in s.iter() {
            let best = below
                .iter()
                .filter(|&&i| self.relations[i].contains(u, v))
                .map(|&i| self.levels[i])
                .min()?;
            level = level.max(best);
        }
        let mut covered = BinRel::empty(self.n);
        let mut chosen = Vec::new();
        for &i in below.iter().filter(|&&i| self.levels[i] <= level) {
            let r = &self.relations[i];
            if !r.is_subset(&covered) {
                covered.union_with(r);
                chosen.push(i);
                if covered == *s {
                    break;
                }
            }
        }
        debug_assert_eq!(covered, *s);
        Some((level, chosen))
    }

    /// The REE recorded by the provenance of generator `i`.
    pub fn expression(&self, g: &DataGraph, i: usize) -> ReeExpr {
        match self.provenance[i] {
            Provenance::Eps => ReeExpr::Eps,
            Provenance::Letter(li) => ReeExpr::Letter(g.alphabet()[li].clone()),
            Provenance::Compose(a, b) => self.expression(g, a).concat(self.expression(g, b)),
            Provenance::Eq(a) => self.expression(g, a).eq(),
            Provenance::Neq(a) => self.expression(g, a).neq(),
        }
    }

    /// Every union of generators up to `level`, i.e. the whole of `L_level`.
    /// Fails when more than `budget` relations appear.
    pub fn materialize(&self, level: usize, budget: usize) -> Result<Vec<BinRel>> {
        let mut seen = hashbrown::HashSet::new();
        let mut out: Vec<BinRel> = Vec::new();
        for (_, r) in self.generators(level) {
            if seen.insert(r.clone()) {
                out.push(r.clone());
            }
        }
        let gens: Vec<BinRel> = out.clone();
        let mut i = 0;
        while i < out.len() {
            for gen in &gens {
                let u = out[i].union(gen);
                if !seen.contains(&u) {
                    if out.len() >= budget {
                        return Err(Error::ResourceExhausted { budget });
                    }
                    seen.insert(u.clone());
                    out.push(u);
                }
            }
            i += 1;
        }
        out.sort();
        Ok(out)
    }
}

/// Result of [`decide_ree`].
#[derive(Clone, Debug)]
pub struct ReeReport {
    pub decision: Decision,
    pub relation: BinRel,
    /// Lowest level containing the relation.
    pub level: Option<usize>,
    /// Generators whose union is the relation.
    pub members: Vec<usize>,
    /// Generator count of the computed closure.
    pub generators: usize,
    pub levels: Option<LevelSet>,
}

/// RDPQ_= definability: membership in `L_{n²}`.
pub fn decide_ree(g: &DataGraph, s: &BinRel) -> Result<ReeReport> {
    decide_ree_with_budget(g, s, DEFAULT_BUDGET)
}

pub fn decide_ree_with_budget(g: &DataGraph, s: &BinRel, budget: usize) -> Result<ReeReport> {
    let n = g.node_count();
    if s.nodes() != n {
        return Err(Error::NodeCountMismatch {
            expected: n,
            found: s.nodes(),
        });
    }
    let mut report = ReeReport {
        decision: Decision::ResourceExhausted,
        relation: s.clone(),
        level: None,
        members: Vec::new(),
        generators: 0,
        levels: None,
    };
    let set = match level_closure(g, n * n, budget) {
        Ok(set) => set,
        Err(Error::ResourceExhausted { .. }) => return Ok(report),
        Err(e) => return Err(e),
    };
    report.generators = set.len();
    match set.decompose(s) {
        Some((level, members)) => {
            report.decision = Decision::Definable;
            report.level = Some(level);
            report.members = members;
        }
        None => report.decision = Decision::NotDefinable,
    }
    report.levels = Some(set);
    Ok(report)
}

/// The union of the member generators' expressions, checked to evaluate
/// to exactly the relation.
pub fn synthesize_ree(g: &DataGraph, report: &ReeReport) -> Result<ReeExpr> {
    let set = match (&report.decision, &report.levels) {
        (Decision::Definable, Some(set)) => set,
        _ => return Err(Error::NotDefinable),
    };
    let e = report
        .members
        .iter()
        .map(|&i| set.expression(g, i))
        .reduce(ReeExpr::union)
        .ok_or(Error::NotDefinable)?;
    if eval_ree_query(g, &e) != report.relation {
        return Err(Error::SynthesisMismatch);
    }
    Ok(e)
}
