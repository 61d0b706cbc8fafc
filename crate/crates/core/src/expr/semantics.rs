//! Direct semantics of REM and REE on a single data path.
//!
//! Subexpressions are matched against slices `i..=j` of the value
//! positions; results are memoized per (subexpression, slice, assignment).

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::hash::Hash;

use hashbrown::{HashMap, HashSet};

use super::{registers_of, Condition, ReeExpr, RemExpr};
use crate::error::{Error, Result};
use crate::path::DataPath;

/// Register contents; `None` is the empty register `⊥`.
pub type Assignment<V> = Vec<Option<V>>;

/// `d, τ ⊨ c`. An empty register never equals a value.
pub fn cond_eval<V: PartialEq>(c: &Condition, d: &V, tau: &[Option<V>]) -> Result<bool> {
    let r = c.max_register();
    if r > tau.len() {
        return Err(Error::RegisterOutOfRange {
            register: r,
            registers: tau.len(),
        });
    }
    Ok(eval_unchecked(c, d, tau))
}

pub(crate) fn eval_unchecked<V: PartialEq>(c: &Condition, d: &V, tau: &[Option<V>]) -> bool {
    match c {
        Condition::True => true,
        Condition::Eq(r) => tau[r - 1].as_ref() == Some(d),
        Condition::Neq(r) => tau[r - 1].as_ref() != Some(d),
        Condition::And(a, b) => eval_unchecked(a, d, tau) && eval_unchecked(b, d, tau),
        Condition::Or(a, b) => eval_unchecked(a, d, tau) || eval_unchecked(b, d, tau),
        Condition::Not(c) => !eval_unchecked(c, d, tau),
    }
}

/// All `σ'` with `(e, w, σ) ⊢ σ'`.
pub fn rem_match<V>(
    e: &RemExpr,
    w: &DataPath<V>,
    sigma: &[Option<V>],
) -> Result<BTreeSet<Assignment<V>>>
where
    V: Clone + Eq + Hash + Ord,
{
    let k = registers_of(e);
    if k > sigma.len() {
        return Err(Error::RegisterOutOfRange {
            register: k,
            registers: sigma.len(),
        });
    }
    let mut m = RemMatcher {
        w,
        memo: HashMap::new(),
    };
    Ok(m.run(e, 0, w.len(), sigma).into_iter().collect())
}

/// `w ∈ L(e)`, i.e. `(e, w, ⊥^k) ⊢ σ` for some `σ`.
pub fn rem_lang_member<V>(e: &RemExpr, w: &DataPath<V>) -> bool
where
    V: Clone + Eq + Hash + Ord,
{
    let empty = alloc::vec![None; registers_of(e)];
    let mut m = RemMatcher {
        w,
        memo: HashMap::new(),
    };
    !m.run(e, 0, w.len(), &empty).is_empty()
}

type MemoKey<V> = (usize, usize, usize, Assignment<V>);

struct RemMatcher<'a, V> {
    w: &'a DataPath<V>,
    memo: HashMap<MemoKey<V>, Vec<Assignment<V>>>,
}

impl<V: Clone + Eq + Hash> RemMatcher<'_, V> {
    fn run(&mut self, e: &RemExpr, i: usize, j: usize, sigma: &[Option<V>]) -> Vec<Assignment<V>> {
        // Subexpressions live as long as the call, so their addresses are
        // stable keys.
        let key = (e as *const RemExpr as usize, i, j, sigma.to_vec());
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let out = self.compute(e, i, j, sigma);
        self.memo.insert(key, out.clone());
        out
    }

    fn compute(
        &mut self,
        e: &RemExpr,
        i: usize,
        j: usize,
        sigma: &[Option<V>],
    ) -> Vec<Assignment<V>> {
        let values = self.w.values();
        match e {
            RemExpr::Eps => {
                if i == j {
                    alloc::vec![sigma.to_vec()]
                } else {
                    Vec::new()
                }
            }
            RemExpr::Letter(a) => {
                if j == i + 1 && self.w.letters()[i] == *a {
                    alloc::vec![sigma.to_vec()]
                } else {
                    Vec::new()
                }
            }
            RemExpr::Union(a, b) => {
                let mut out = self.run(a, i, j, sigma);
                out.extend(self.run(b, i, j, sigma));
                dedup(out)
            }
            RemExpr::Concat(a, b) => {
                let mut out = Vec::new();
                for mid in i..=j {
                    for s1 in self.run(a, i, mid, sigma) {
                        out.extend(self.run(b, mid, j, &s1));
                    }
                }
                dedup(out)
            }
            RemExpr::Plus(body) => {
                // Reachability over (position, assignment) by iterations of
                // `body`; each iteration covers a (possibly single-value)
                // slice.
                let mut out = Vec::new();
                let mut seen: HashSet<(usize, Assignment<V>)> = HashSet::new();
                let mut stack = alloc::vec![(i, sigma.to_vec())];
                while let Some((p, tau)) = stack.pop() {
                    for q in p..=j {
                        for next in self.run(body, p, q, &tau) {
                            if q == j {
                                out.push(next.clone());
                            }
                            if seen.insert((q, next.clone())) {
                                stack.push((q, next));
                            }
                        }
                    }
                }
                dedup(out)
            }
            RemExpr::Test(body, c) => self
                .run(body, i, j, sigma)
                .into_iter()
                .filter(|s| eval_unchecked(c, &values[j], s))
                .collect(),
            RemExpr::Store(rs, body) => {
                let mut s = sigma.to_vec();
                for &r in rs {
                    s[r - 1] = Some(values[i].clone());
                }
                self.run(body, i, j, &s)
            }
        }
    }
}

fn dedup<T: Eq + Hash + Clone>(v: Vec<T>) -> Vec<T> {
    let mut seen = HashSet::new();
    v.into_iter().filter(|x| seen.insert(x.clone())).collect()
}

/// `w ∈ L(e)` for an REE.
pub fn ree_member<V: Eq>(e: &ReeExpr, w: &DataPath<V>) -> bool {
    let mut m = ReeMatcher {
        w,
        memo: HashMap::new(),
    };
    m.run(e, 0, w.len())
}

struct ReeMatcher<'a, V> {
    w: &'a DataPath<V>,
    memo: HashMap<(usize, usize, usize), bool>,
}

impl<V: Eq> ReeMatcher<'_, V> {
    fn run(&mut self, e: &ReeExpr, i: usize, j: usize) -> bool {
        let key = (e as *const ReeExpr as usize, i, j);
        if let Some(&hit) = self.memo.get(&key) {
            return hit;
        }
        let out = match e {
            ReeExpr::Eps => i == j,
            ReeExpr::Letter(a) => j == i + 1 && self.w.letters()[i] == *a,
            ReeExpr::Union(a, b) => self.run(a, i, j) || self.run(b, i, j),
            ReeExpr::Concat(a, b) => (i..=j).any(|mid| self.run(a, i, mid) && self.run(b, mid, j)),
            ReeExpr::Plus(body) => {
                let mut reached = false;
                let mut stack = alloc::vec![i];
                let mut expanded = alloc::vec![false; j + 1];
                while let Some(p) = stack.pop() {
                    if expanded[p] {
                        continue;
                    }
                    expanded[p] = true;
                    for q in p..=j {
                        if self.run(body, p, q) {
                            reached |= q == j;
                            stack.push(q);
                        }
                    }
                }
                reached
            }
            ReeExpr::Eq(body) => self.w.values()[i] == self.w.values()[j] && self.run(body, i, j),
            ReeExpr::Neq(body) => self.w.values()[i] != self.w.values()[j] && self.run(body, i, j),
        };
        self.memo.insert(key, out);
        out
    }
}
