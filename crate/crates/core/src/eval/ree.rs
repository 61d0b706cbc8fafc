use crate::expr::ReeExpr;
use crate::graph::DataGraph;
use crate::relation::BinRel;

/// RDPQ_= evaluation by structural recursion on relations:
/// `S_ε` is the identity, `S_a` the `a`-edges, concatenation composes,
/// restrictions filter by endpoint data, and `e^+` is the transitive
/// closure of `S_e`.
pub fn eval_ree_query(g: &DataGraph, e: &ReeExpr) -> BinRel {
    let n = g.node_count();
    match e {
        ReeExpr::Eps => BinRel::identity(n),
        ReeExpr::Letter(a) => match g.letter_index(a.as_str()) {
            Some(li) => BinRel::letter(g, li),
            None => BinRel::empty(n),
        },
        ReeExpr::Union(a, b) => eval_ree_query(g, a).union(&eval_ree_query(g, b)),
        ReeExpr::Concat(a, b) => eval_ree_query(g, a).compose(&eval_ree_query(g, b)),
        ReeExpr::Plus(body) => eval_ree_query(g, body).transitive_closure(),
        ReeExpr::Eq(body) => eval_ree_query(g, body).restrict_eq(g),
        ReeExpr::Neq(body) => eval_ree_query(g, body).restrict_neq(g),
    }
}
