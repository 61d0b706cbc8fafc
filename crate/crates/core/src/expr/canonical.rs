use alloc::vec::Vec;

use super::{Condition, RemExpr};
use crate::path::DataPath;

/// An REM whose language is exactly the automorphism class of `w`.
///
/// Register `ri` holds the `i`-th distinct value of `w`. A repeated value
/// is checked with `ri==`. A new value must differ from every register
/// filled so far and is then stored in a fresh register, so paths that
/// merge two values of `w` are rejected.
pub fn canonical_rem<V: PartialEq>(w: &DataPath<V>) -> RemExpr {
    let values = w.values();
    let mut seen: Vec<&V> = alloc::vec![&values[0]];
    let mut e = RemExpr::store(alloc::vec![1], RemExpr::Eps);
    for (a, d) in w.letters().iter().zip(&values[1..]) {
        let step = RemExpr::Letter(a.clone());
        e = match seen.iter().position(|s| *s == d) {
            Some(i) => e.concat(step.test(Condition::Eq(i + 1))),
            None => {
                let fresh = Condition::all((1..=seen.len()).map(Condition::Neq));
                seen.push(d);
                e.concat(step.test(fresh))
                    .concat(RemExpr::store(alloc::vec![seen.len()], RemExpr::Eps))
            }
        };
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{registers_of, rem_lang_member};
    use alloc::string::ToString;

    fn p(s: &str) -> DataPath {
        DataPath::parse(s).unwrap()
    }

    #[test]
    fn accepts_exactly_the_class() {
        let e = canonical_rem(&p("0a1a0a1"));
        assert_eq!(registers_of(&e), 2);
        assert!(rem_lang_member(&e, &p("2a3a2a3")));
        assert!(rem_lang_member(&e, &p("0a1a0a1")));
        assert!(!rem_lang_member(&e, &p("0a0a0a0")));
        assert!(!rem_lang_member(&e, &p("0a1a0a2")));
        assert!(!rem_lang_member(&e, &p("0a1a0a1a0")));
    }

    #[test]
    fn single_value_and_repeat() {
        let e = canonical_rem(&p("9"));
        assert_eq!(e.to_string(), "!{r1}.eps");
        assert!(rem_lang_member(&e, &p("4")));
        assert!(!rem_lang_member(&e, &p("4a4")));

        let e = canonical_rem(&p("7a7"));
        assert!(rem_lang_member(&e, &p("5a5")));
        assert!(!rem_lang_member(&e, &p("5a6")));
    }
}
