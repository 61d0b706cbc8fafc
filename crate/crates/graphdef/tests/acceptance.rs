//! One PASS/FAIL line per acceptance criterion.
//!
//! Random instances come from fixed seeds, so every run checks the same
//! cases. Criteria listed in `KNOWN_RED` are expected to fail; the process
//! exits nonzero only on other failures.

use std::collections::BTreeSet;
use std::path::Path;
use std::time::{Duration, Instant};

use graphdef::format::{parse_graph, parse_query, parse_relation, Query, QueryType};
use graphdef_core::assign::{labels, run_reach, AssignGraph, AssignState, BlockLabel};
use graphdef_core::def_ree::{decide_ree, decide_ree_with_budget, synthesize_ree};
use graphdef_core::def_rem::{decide_k_rem, decide_rem, find_witnesses, synthesize_rem};
use graphdef_core::def_ucq::{
    decide_ucrdpq, decide_ucrdpq_range, enumerate_homomorphisms, synthesize_ucrdpq,
};
use graphdef_core::eval::{
    eval_crdpq, eval_ree_query, eval_rem_bounded, eval_rem_query, eval_ucrdpq,
};
use graphdef_core::expr::{BasicRem, Block, Condition, ReeExpr, RemExpr};
use graphdef_core::oracle::{
    enum_homs_bruteforce, eval_ree_by_paths, eval_rem_by_paths, rpq_definable_bruteforce,
    run_reach_by_paths,
};
use graphdef_core::{BinRel, DataGraph, Decision, NodeRelation};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const KNOWN_RED: &[(u32, &str)] = &[(
    1,
    "the listed Q5 answer omits valuations that satisfy both atoms, e.g. x1 = x2",
)];

const LETTERS: [&str; 2] = ["a", "b"];

type Check = fn() -> Outcome;

struct Outcome {
    pass: bool,
    detail: String,
}

fn fixture(name: &str) -> (String, String) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    (name.to_string(), text)
}

fn fig1() -> DataGraph {
    let (f, t) = fixture("fig1.json");
    parse_graph(&f, &t).unwrap()
}

fn relation(g: &DataGraph, name: &str) -> NodeRelation {
    let (f, t) = fixture(name);
    parse_relation(&f, &t, g).unwrap()
}

fn binary(g: &DataGraph, name: &str) -> BinRel {
    relation(g, name).to_binary(g.node_count()).unwrap()
}

fn query(name: &str, ty: QueryType) -> Query {
    let (f, t) = fixture(name);
    parse_query(&f, &t, ty).unwrap()
}

fn tuples(g: &DataGraph, ids: &[&[&str]]) -> NodeRelation {
    let rows = ids
        .iter()
        .map(|t| t.iter().map(|id| g.node_index(id).unwrap()).collect());
    NodeRelation::from_tuples(ids[0].len(), g.node_count(), rows).unwrap()
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let v = f();
    (v, start.elapsed())
}

// Random instances.

fn random_graph(
    rng: &mut ChaCha8Rng,
    max_nodes: usize,
    values: usize,
    letters: usize,
) -> DataGraph {
    let n = rng.gen_range(1..=max_nodes);
    let data: Vec<usize> = (0..n).map(|_| rng.gen_range(0..values)).collect();
    let edges: Vec<bool> = (0..n * n * letters).map(|_| rng.gen_bool(0.35)).collect();
    build(n, letters, &data, &edges)
}

fn constant_graph(rng: &mut ChaCha8Rng, max_nodes: usize) -> DataGraph {
    let n = rng.gen_range(1..=max_nodes);
    let edges: Vec<bool> = (0..n * n * 2).map(|_| rng.gen_bool(0.35)).collect();
    build(n, 2, &vec![0; n], &edges)
}

fn build(n: usize, letters: usize, data: &[usize], edges: &[bool]) -> DataGraph {
    let ids: Vec<String> = (0..n).map(|i| format!("n{i}")).collect();
    let vals: Vec<String> = data.iter().map(|d| d.to_string()).collect();
    let mut es = Vec::new();
    for (i, _) in edges.iter().enumerate().filter(|(_, &on)| on) {
        let (u, rest) = (i / (n * letters), i % (n * letters));
        es.push((
            ids[u].as_str(),
            LETTERS[rest % letters],
            ids[rest / letters].as_str(),
        ));
    }
    DataGraph::new(
        LETTERS[..letters].iter().copied(),
        ids.iter()
            .map(String::as_str)
            .zip(vals.iter().map(String::as_str)),
        es,
    )
    .unwrap()
}

fn random_binrel(rng: &mut ChaCha8Rng, n: usize) -> BinRel {
    BinRel::from_pairs(
        n,
        (0..n * n)
            .filter(|_| rng.gen_bool(0.3))
            .map(|i| (i / n, i % n)),
    )
}

fn random_condition(rng: &mut ChaCha8Rng, k: usize) -> Condition {
    let atom = |rng: &mut ChaCha8Rng| {
        let r = rng.gen_range(1..=k);
        if rng.gen() {
            Condition::Eq(r)
        } else {
            Condition::Neq(r)
        }
    };
    match rng.gen_range(0..5) {
        0 => Condition::True,
        1 => atom(rng).and(atom(rng)),
        2 => atom(rng).or(atom(rng)),
        3 => atom(rng).not(),
        _ => atom(rng),
    }
}

/// An REM of exactly `size` AST nodes.
fn random_rem(rng: &mut ChaCha8Rng, size: usize, letters: usize, k: usize) -> RemExpr {
    if size == 1 {
        return if rng.gen_ratio(1, 5) {
            RemExpr::Eps
        } else {
            RemExpr::letter(LETTERS[rng.gen_range(0..letters)])
        };
    }
    let choices: &[u8] = match (size >= 3, k > 0) {
        (true, true) => &[0, 1, 2, 3, 4],
        (true, false) => &[0, 1, 2],
        (false, true) => &[2, 3, 4],
        (false, false) => &[2],
    };
    match *choices.choose(rng).unwrap() {
        c @ (0 | 1) => {
            let left = rng.gen_range(1..size - 1);
            let a = random_rem(rng, left, letters, k);
            let b = random_rem(rng, size - 1 - left, letters, k);
            if c == 0 {
                a.union(b)
            } else {
                a.concat(b)
            }
        }
        2 => random_rem(rng, size - 1, letters, k).plus(),
        3 => {
            let c = random_condition(rng, k);
            random_rem(rng, size - 1, letters, k).test(c)
        }
        _ => {
            let mut regs: Vec<usize> = (1..=k).filter(|_| rng.gen()).collect();
            if regs.is_empty() {
                regs.push(rng.gen_range(1..=k));
            }
            RemExpr::store(regs, random_rem(rng, size - 1, letters, k))
        }
    }
}

fn random_ree(rng: &mut ChaCha8Rng, size: usize, letters: usize) -> ReeExpr {
    if size == 1 {
        return if rng.gen_ratio(1, 5) {
            ReeExpr::Eps
        } else {
            ReeExpr::letter(LETTERS[rng.gen_range(0..letters)])
        };
    }
    let pick = if size >= 3 {
        rng.gen_range(0..5)
    } else {
        rng.gen_range(2..5)
    };
    match pick {
        0 | 1 => {
            let left = rng.gen_range(1..size - 1);
            let a = random_ree(rng, left, letters);
            let b = random_ree(rng, size - 1 - left, letters);
            if pick == 0 {
                a.union(b)
            } else {
                a.concat(b)
            }
        }
        2 => random_ree(rng, size - 1, letters).plus(),
        3 => random_ree(rng, size - 1, letters).eq(),
        _ => random_ree(rng, size - 1, letters).neq(),
    }
}

/// A restriction at nesting depth `d` stores the first value in `r(d+1)`.
fn ree_as_rem(e: &ReeExpr, depth: usize) -> RemExpr {
    match e {
        ReeExpr::Eps => RemExpr::Eps,
        ReeExpr::Letter(a) => RemExpr::Letter(a.clone()),
        ReeExpr::Union(a, b) => ree_as_rem(a, depth).union(ree_as_rem(b, depth)),
        ReeExpr::Concat(a, b) => ree_as_rem(a, depth).concat(ree_as_rem(b, depth)),
        ReeExpr::Plus(a) => ree_as_rem(a, depth).plus(),
        ReeExpr::Eq(a) => RemExpr::store(
            vec![depth + 1],
            ree_as_rem(a, depth + 1).test(Condition::Eq(depth + 1)),
        ),
        ReeExpr::Neq(a) => RemExpr::store(
            vec![depth + 1],
            ree_as_rem(a, depth + 1).test(Condition::Neq(depth + 1)),
        ),
    }
}

/// A relation that is definable often enough to exercise synthesis.
fn random_relation(rng: &mut ChaCha8Rng, g: &DataGraph) -> BinRel {
    let size = rng.gen_range(1..=5);
    match rng.gen_range(0..4) {
        0 => random_binrel(rng, g.node_count()),
        1 => eval_ree_query(g, &random_ree(rng, size, 2)),
        2 => eval_rem_query(g, &random_rem(rng, size, 2, 2)),
        _ => eval_rem_query(g, &random_rem(rng, size, 2, 0)),
    }
}

fn definable(d: Decision) -> Result<bool, String> {
    match d {
        Decision::Definable => Ok(true),
        Decision::NotDefinable => Ok(false),
        Decision::ResourceExhausted => Err("unexpected budget exhaustion".into()),
    }
}

// Criteria.

fn example_reproduction() -> Outcome {
    let g = fig1();
    let q5_expected = tuples(
        &g,
        &[
            &["v1", "z2", "z1"],
            &["v3", "v4", "v2'"],
            &["v3", "v3'", "v2'"],
        ],
    );
    let cases = [
        ("a.a.a", relation(&g, "s1.json"), "aaa.q", QueryType::Rpq),
        ("e2", relation(&g, "s2.json"), "e2.q", QueryType::Rem),
        ("e3", relation(&g, "s3.json"), "e3.q", QueryType::Ree),
        ("Q4", relation(&g, "q4.json"), "q4.q", QueryType::Crdpq),
        ("Q5", q5_expected, "q5.q", QueryType::Crdpq),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, want, file, ty) in cases {
        let (got, t) = timed(|| eval_q(&g, file, ty));
        let ok = got == want && t < Duration::from_secs(1);
        pass &= ok;
        if ok {
            parts.push(format!("{name} ok"));
        } else {
            let extra = got.iter().filter(|x| !want.contains(x)).count();
            let missing = want.iter().filter(|x| !got.contains(x)).count();
            parts.push(format!(
                "{name} differs ({} tuples, {extra} extra, {missing} missing, {t:?})",
                got.len()
            ));
        }
    }
    Outcome {
        pass,
        detail: parts.join(", "),
    }
}

fn eval_q(g: &DataGraph, name: &str, ty: QueryType) -> NodeRelation {
    match query(name, ty) {
        Query::Rem(e) => NodeRelation::from(eval_rem_query(g, &e)),
        Query::Ree(e) => NodeRelation::from(eval_ree_query(g, &e)),
        Query::Crdpq(q) => eval_crdpq(g, &q),
        Query::Ucrdpq(q) => eval_ucrdpq(g, &q),
    }
}

fn definability_matrix() -> Outcome {
    let g = fig1();
    let (s1, s2, s3, q4) = (
        binary(&g, "s1.json"),
        binary(&g, "s2.json"),
        binary(&g, "s3.json"),
        binary(&g, "q4.json"),
    );
    let rem = |s: &BinRel, k: usize| decide_k_rem(&g, s, k).unwrap().decision;
    let ree = |s: &BinRel| decide_ree(&g, s).unwrap().decision;
    let ucq = |s: &BinRel| decide_ucrdpq(&g, &NodeRelation::from(s)).unwrap().decision;
    use Decision::{Definable as D, NotDefinable as N};
    let (rows, t) = timed(|| {
        vec![
            ("S1 k=0", rem(&s1, 0), D),
            ("S2 k=2", rem(&s2, 2), D),
            ("S2 k=1", rem(&s2, 1), N),
            ("S2 ree", ree(&s2), N),
            ("S2 k=0", rem(&s2, 0), N),
            ("S3 ree", ree(&s3), D),
            ("S3 k=2", rem(&s3, 2), D),
            ("S3 k=1", rem(&s3, 1), N),
            ("S3 k=0", rem(&s3, 0), N),
            ("Q4 k=4", rem(&q4, g.distinct_values()), N),
            ("Q4 ree", ree(&q4), N),
            ("Q4 ucrdpq", ucq(&q4), D),
        ]
    });
    let wrong: Vec<&str> = rows
        .iter()
        .filter(|(_, got, want)| got != want)
        .map(|r| r.0)
        .collect();
    Outcome {
        pass: wrong.is_empty() && t < Duration::from_secs(10),
        detail: if wrong.is_empty() {
            format!("{} entries as expected in {t:?}", rows.len())
        } else {
            format!("wrong: {}", wrong.join(", "))
        },
    }
}

fn witness_soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut checked, mut bad) = (0, Vec::new());
    let mut instances: Vec<(DataGraph, BinRel)> = (0..300)
        .map(|_| {
            let g = random_graph(&mut rng, 4, 3, 2);
            let s = random_relation(&mut rng, &g);
            (g, s)
        })
        .collect();
    let g = fig1();
    for f in ["s1.json", "s2.json", "s3.json", "q4.json"] {
        instances.push((g.clone(), binary(&g, f)));
    }
    for (i, (g, s)) in instances.iter().enumerate() {
        let r = decide_rem(g, s).unwrap();
        if r.decision.is_definable() {
            checked += 1;
            match synthesize_rem(g, &r) {
                Ok(e) if eval_rem_query(g, &e) == *s => {}
                _ => bad.push(format!("rem #{i}")),
            }
        }
        let r = decide_ree(g, s).unwrap();
        if r.decision.is_definable() {
            checked += 1;
            match synthesize_ree(g, &r) {
                Ok(e) if eval_ree_query(g, &e) == *s => {}
                _ => bad.push(format!("ree #{i}")),
            }
        }
        let s = NodeRelation::from(s);
        if decide_ucrdpq(g, &s).unwrap().decision.is_definable() {
            checked += 1;
            match synthesize_ucrdpq(g, &s) {
                Ok(q) if eval_ucrdpq(g, &q) == s => {}
                _ => bad.push(format!("ucrdpq #{i}")),
            }
        }
    }
    Outcome {
        pass: bad.is_empty() && checked > 0,
        detail: format!(
            "{checked} synthesized queries over {} instances, {} mismatches {bad:?}",
            instances.len(),
            bad.len()
        ),
    }
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let start = Instant::now();
    let mut failures = Vec::new();
    let cases = 500;
    for i in 0..cases {
        let g = random_graph(&mut rng, 5, 3, 2);
        let size = rng.gen_range(1..=6);
        let e = random_rem(&mut rng, size, 2, 2);
        if eval_rem_bounded(&g, &e, 6) != eval_rem_by_paths(&g, &e, 6) {
            failures.push(format!("rem #{i} {e}"));
        }
        let f = random_ree(&mut rng, size, 2);
        if eval_rem_bounded(&g, &ree_as_rem(&f, 0), 6) != eval_ree_by_paths(&g, &f, 6) {
            failures.push(format!("ree #{i} {f}"));
        }
    }
    for i in 0..cases {
        let g = random_graph(&mut rng, 4, 3, 2);
        let k = rng.gen_range(0..=2);
        let blocks = (0..rng.gen_range(0..=4))
            .map(|_| Block {
                store: (1..=k).filter(|_| rng.gen()).collect(),
                letter: LETTERS[rng.gen_range(0..2)].into(),
                cond: if k == 0 {
                    Condition::True
                } else {
                    random_condition(&mut rng, k)
                },
            })
            .collect();
        let e = BasicRem::new(blocks);
        let d = g.distinct_values() as u32;
        let s = AssignState {
            node: rng.gen_range(0..g.node_count()),
            regs: (0..k)
                .map(|_| rng.gen_bool(0.5).then(|| rng.gen_range(0..d)))
                .collect(),
        };
        let by_run = run_reach(&g, &s, &e).unwrap();
        let sigma: Vec<_> = s
            .regs
            .iter()
            .map(|r| r.map(|v| g.values()[v as usize].clone()))
            .collect();
        let by_paths: BTreeSet<AssignState> =
            run_reach_by_paths(&g, s.node, &sigma, &e.to_rem(), e.blocks.len())
                .into_iter()
                .map(|(node, regs)| AssignState {
                    node,
                    regs: regs
                        .iter()
                        .map(|r| {
                            r.as_ref()
                                .map(|v| g.values().iter().position(|x| x == v).unwrap() as u32)
                        })
                        .collect(),
                })
                .collect();
        if by_run != by_paths {
            failures.push(format!("run #{i} {e}"));
        }
    }
    for i in 0..cases {
        let g = random_graph(&mut rng, 4, 3, 2);
        let pruned: Vec<Vec<usize>> = enumerate_homomorphisms(&g, 1 << 20)
            .unwrap()
            .iter()
            .map(|h| h.map().to_vec())
            .collect();
        if pruned != enum_homs_bruteforce(&g) {
            failures.push(format!("homs #{i}"));
        }
    }
    let t = start.elapsed();
    Outcome {
        pass: failures.is_empty() && t < Duration::from_secs(300),
        detail: format!(
            "{cases} REM + {cases} REE evaluations, {cases} runs, {cases} hom enumerations in {t:?}; failures {failures:?}"
        ),
    }
}

fn hierarchy() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut failures = Vec::new();
    let mut counts = [0usize; 4];
    let run = |g: &DataGraph, s: &BinRel| -> Result<Vec<String>, String> {
        let mut bad = Vec::new();
        let rpq = definable(decide_k_rem(g, s, 0).unwrap().decision)?;
        let ree = definable(decide_ree(g, s).unwrap().decision)?;
        let delta = g.distinct_values();
        let by_k: Vec<bool> = (0..=delta + 1)
            .map(|k| definable(decide_k_rem(g, s, k).unwrap().decision))
            .collect::<Result<_, _>>()?;
        let ucq = definable(decide_ucrdpq(g, &NodeRelation::from(s)).unwrap().decision)?;
        let rem = by_k[delta];
        if rpq != rpq_definable_bruteforce(g, s) {
            bad.push("rpq oracle".into());
        }
        if (rpq && !ree) || (ree && !rem) || (rem && !ucq) {
            bad.push(format!("chain rpq={rpq} ree={ree} rem={rem} ucq={ucq}"));
        }
        if by_k.windows(2).any(|w| w[0] && !w[1]) {
            bad.push(format!("k-monotonicity {by_k:?}"));
        }
        if by_k[delta] != by_k[delta + 1] {
            bad.push("delta vs delta+1".into());
        }
        Ok(bad)
    };
    for i in 0..200 {
        let g = random_graph(&mut rng, 4, 3, 2);
        let s = random_relation(&mut rng, &g);
        match run(&g, &s) {
            Ok(bad) => failures.extend(bad.into_iter().map(|b| format!("#{i} {b}"))),
            Err(e) => failures.push(format!("#{i} {e}")),
        }
        counts[0] += decide_k_rem(&g, &s, 0).unwrap().decision.is_definable() as usize;
        counts[1] += decide_ree(&g, &s).unwrap().decision.is_definable() as usize;
        counts[2] += decide_rem(&g, &s).unwrap().decision.is_definable() as usize;
        counts[3] += decide_ucrdpq(&g, &NodeRelation::from(&s))
            .unwrap()
            .decision
            .is_definable() as usize;
    }
    Outcome {
        pass: failures.is_empty(),
        detail: format!(
            "200 instances; definable rpq/ree/rem/ucrdpq = {}/{}/{}/{}; failures {failures:?}",
            counts[0], counts[1], counts[2], counts[3]
        ),
    }
}

fn constant_data() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut checked, mut failures) = (0, Vec::new());
    while checked < 100 {
        let g = constant_graph(&mut rng, 4);
        let s = random_binrel(&mut rng, g.node_count());
        // `(eps)_!=` defines the empty relation, which no RPQ need define.
        if s.is_empty() {
            continue;
        }
        checked += 1;
        if decide_ree(&g, &s).unwrap().decision != decide_k_rem(&g, &s, 0).unwrap().decision {
            failures.push(checked);
        }
    }
    Outcome {
        pass: failures.is_empty(),
        detail: format!(
            "{checked} nonempty relations on constant-data graphs; disagreements {failures:?}"
        ),
    }
}

fn excision() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut repeats, mut failures) = (0, Vec::new());
    for i in 0..200 {
        let g = random_graph(&mut rng, 3, 2, 2);
        let k = rng.gen_range(0..=2);
        let ag = AssignGraph::new(&g, k).unwrap();
        let all = labels(&g, k);
        let seq: Vec<BlockLabel> = (0..rng.gen_range(1..=10))
            .map(|_| *all.choose(&mut rng).unwrap())
            .collect();
        let run = |ls: &[BlockLabel]| {
            let mut ts = vec![ag.initial_tuple()];
            for l in ls {
                let next = ag.tuple_step(ts.last().unwrap(), l);
                ts.push(next);
            }
            ts
        };
        let ts = run(&seq);
        for a in 0..ts.len() {
            for b in a + 1..ts.len() {
                if ts[a] == ts[b] {
                    repeats += 1;
                    let mut cut = seq[..a].to_vec();
                    cut.extend_from_slice(&seq[b..]);
                    if run(&cut).last() != ts.last() {
                        failures.push(i);
                    }
                }
            }
        }
    }
    Outcome {
        pass: failures.is_empty() && repeats > 0,
        detail: format!(
            "200 label sequences, {repeats} repeated tuples excised; failures {failures:?}"
        ),
    }
}

fn budget_behavior() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut exhausted, mut failures) = (0, Vec::new());
    for i in 0..200 {
        let g = random_graph(&mut rng, 4, 3, 2);
        let s = random_relation(&mut rng, &g);
        let budget = rng.gen_range(0..40);
        let k = rng.gen_range(0..=2);
        let pairs = [
            (
                decide_k_rem(&g, &s, k).unwrap().decision,
                find_witnesses(&g, &s, k, budget).unwrap().decision,
            ),
            (
                decide_ree(&g, &s).unwrap().decision,
                decide_ree_with_budget(&g, &s, budget).unwrap().decision,
            ),
            (
                decide_ucrdpq(&g, &NodeRelation::from(&s)).unwrap().decision,
                decide_ucrdpq_range(&g, &NodeRelation::from(&s), 0..g.node_count(), budget / 8)
                    .unwrap()
                    .decision,
            ),
        ];
        for (full, small) in pairs {
            if small == Decision::ResourceExhausted {
                exhausted += 1;
            } else if small != full {
                failures.push(i);
            }
        }
    }
    // The command line reports exhaustion with its own exit code.
    let g = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let args = [
        "graphdef",
        "definable",
        "--language",
        "rem",
        "--registers",
        "2",
        "--graph",
        &g.join("fig1.json").display().to_string(),
        "--relation",
        &g.join("s2.json").display().to_string(),
        "--budget",
        "3",
    ]
    .map(String::from);
    let code = graphdef::cli::run(args, &mut Vec::new(), &mut Vec::new());
    Outcome {
        pass: failures.is_empty() && exhausted > 0 && code == 2,
        detail: format!(
            "600 budgeted runs, {exhausted} exhausted, none contradicting the full decision {failures:?}; \
             exhausted CLI run exits {code}; complexity bounds themselves are not measured"
        ),
    }
}

fn main() {
    let criteria: [(u32, &str, Check); 8] = [
        (1, "example reproduction", example_reproduction),
        (2, "definability matrix on FIG1", definability_matrix),
        (3, "witness soundness", witness_soundness),
        (4, "oracle equivalence", oracle_equivalence),
        (5, "hierarchy properties", hierarchy),
        (6, "constant-data reduction", constant_data),
        (7, "excision", excision),
        (8, "budget exhaustion is never a decision", budget_behavior),
    ];
    let mut unexpected = 0;
    for (n, title, check) in criteria {
        let out = check();
        let known = KNOWN_RED.iter().find(|(k, _)| *k == n);
        let status = if out.pass { "PASS" } else { "FAIL" };
        println!("criterion {n} {status} {title}: {}", out.detail);
        match (out.pass, known) {
            (false, Some((_, why))) => println!("  known red: {why}"),
            (false, None) => unexpected += 1,
            (true, Some(_)) => println!("  listed as known red but passed"),
            (true, None) => {}
        }
    }
    if unexpected > 0 {
        println!("{unexpected} unexpected failure(s)");
        std::process::exit(1);
    }
}
