//! The `graphdef` command line.
//!
//! Exit codes: 0 success or definable, 1 not definable, 2 search budget
//! exhausted, 64 malformed input or usage, 66 unreadable input file,
//! 70 internal error, 74 output error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use graphdef_core::def_ree::{self, decide_ree_with_budget, synthesize_ree};
use graphdef_core::def_rem::{self, decide_k_rem, find_witnesses, synthesize_rem};
use graphdef_core::def_ucq::{self, decide_ucrdpq_range, synthesize_ucrdpq, UcqReport};
use graphdef_core::eval::{eval_crdpq, eval_ree_query, eval_rem_query, eval_ucrdpq};
use graphdef_core::{canonical_path, BinRel, DataGraph, DataPath, Decision, NodeRelation};
use rayon::prelude::*;
use serde_json::{json, Value as Json};

use crate::format::{
    parse_graph, parse_query, parse_relation, relation_json, InputError, Query, QueryType,
};

pub const EXIT_NOT_DEFINABLE: i32 = 1;
pub const EXIT_EXHAUSTED: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_NOINPUT: i32 = 66;
pub const EXIT_SOFTWARE: i32 = 70;
pub const EXIT_IOERR: i32 = 74;

#[derive(Parser, Debug)]
#[command(
    name = "graphdef",
    version,
    about = "Evaluate data graph queries and decide definability"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate a query and print its answer relation as JSON.
    Eval {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum)]
        r#type: QueryType,
        #[arg(long)]
        query: PathBuf,
    },
    /// Decide whether a relation is definable and print a JSON report.
    Definable(DecideArgs),
    /// Decide definability and write the defining query.
    Synthesize {
        #[command(flatten)]
        args: DecideArgs,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the canonical form of a data path such as `2a3a2a3`.
    Canon { path: String },
    /// Print the k-assignment graph as an edge list.
    #[command(hide = true)]
    DumpAssign {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        registers: usize,
    },
    #[cfg(feature = "oracle")]
    #[command(hide = true, subcommand)]
    Oracle(OracleCommand),
}

#[derive(clap::Args, Debug)]
pub struct DecideArgs {
    #[arg(long, value_enum)]
    pub language: Language,
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub relation: PathBuf,
    /// Registers for `rem`; defaults to the number of distinct data values.
    #[arg(long)]
    pub registers: Option<usize>,
    /// Also write the defining query to this file when definable.
    #[arg(long)]
    pub synthesize: Option<PathBuf>,
    /// Search budget: subset tuples (rem), relations (ree), or search
    /// nodes per first-node partition (ucrdpq).
    #[arg(long)]
    pub budget: Option<usize>,
    /// Worker threads for the ucrdpq search; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Language {
    Rem,
    Ree,
    Ucrdpq,
}

#[cfg(feature = "oracle")]
#[derive(Subcommand, Debug)]
pub enum OracleCommand {
    /// All data paths up to a length, grouped by endpoints.
    Paths {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        max_letters: usize,
    },
    /// All homomorphisms by exhaustive search.
    Homs {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Evaluate an REM or REE by path enumeration.
    Eval {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum)]
        r#type: QueryType,
        #[arg(long)]
        query: PathBuf,
        #[arg(long)]
        max_letters: usize,
    },
}

#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error("{0}")]
    Input(#[from] InputError),
    #[error("{path}: {1}", path = .0.display())]
    Read(PathBuf, std::io::Error),
    #[error("write error: {0}")]
    Write(#[from] std::io::Error),
    #[error("internal error: {0}")]
    Internal(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Input(_) => EXIT_USAGE,
            Failure::Read(..) => EXIT_NOINPUT,
            Failure::Internal(_) => EXIT_SOFTWARE,
            Failure::Write(_) => EXIT_IOERR,
        }
    }
}

type Outcome = Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the command,
/// returning the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "graphdef: {f}");
            f.code()
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Outcome {
    match cmd {
        Command::Eval {
            graph,
            r#type,
            query,
        } => cmd_eval(&graph, r#type, &query, out),
        Command::Definable(args) => cmd_definable(&args, out),
        Command::Synthesize { args, out: path } => cmd_synthesize(&args, path.as_deref(), out),
        Command::Canon { path } => cmd_canon(&path, out),
        Command::DumpAssign { graph, registers } => cmd_dump_assign(&graph, registers, out),
        #[cfg(feature = "oracle")]
        Command::Oracle(o) => oracle::run(o, out),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Read(path.to_path_buf(), e))
}

fn label(path: &Path) -> String {
    path.display().to_string()
}

fn load_graph(path: &Path) -> Result<DataGraph, Failure> {
    Ok(parse_graph(&label(path), &read(path)?)?)
}

fn write_json(out: &mut dyn Write, v: &Json) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(v).map_err(|e| Failure::Internal(e.to_string()))?;
    writeln!(out, "{text}")?;
    Ok(())
}

fn cmd_eval(graph: &Path, ty: QueryType, query: &Path, out: &mut dyn Write) -> Outcome {
    let g = load_graph(graph)?;
    let q = parse_query(&label(query), &read(query)?, ty)?;
    let answer = match q {
        Query::Rem(e) => NodeRelation::from(eval_rem_query(&g, &e)),
        Query::Ree(e) => NodeRelation::from(eval_ree_query(&g, &e)),
        Query::Crdpq(q) => eval_crdpq(&g, &q),
        Query::Ucrdpq(q) => eval_ucrdpq(&g, &q),
    };
    write_json(out, &relation_json(&g, &answer))?;
    Ok(0)
}

fn pair_json(g: &DataGraph, (u, v): (usize, usize)) -> Json {
    json!([g.node_id(u), g.node_id(v)])
}

fn exit_for(d: Decision) -> i32 {
    match d {
        Decision::Definable => 0,
        Decision::NotDefinable => EXIT_NOT_DEFINABLE,
        Decision::ResourceExhausted => EXIT_EXHAUSTED,
    }
}

/// A decision with its JSON report and, when requested and definable,
/// the defining query text.
struct Decided {
    decision: Decision,
    report: Json,
    query: Option<String>,
}

fn decide(args: &DecideArgs, want_query: bool) -> Result<Decided, Failure> {
    let g = load_graph(&args.graph)?;
    let rel_text = read(&args.relation)?;
    let rel_file = label(&args.relation);
    let s = parse_relation(&rel_file, &rel_text, &g)?;
    let binary = |s: &NodeRelation| -> Result<BinRel, Failure> {
        s.to_binary(g.node_count()).map_err(|_| {
            Failure::Input(InputError::at_offset(
                &rel_file,
                &rel_text,
                0,
                format!(
                    "the {:?} language needs a binary relation, got arity {}",
                    args.language,
                    s.arity()
                )
                .to_lowercase(),
            ))
        })
    };
    let internal = |e: graphdef_core::Error| Failure::Internal(e.to_string());
    match args.language {
        Language::Rem => {
            let s = binary(&s)?;
            let k = args.registers.unwrap_or(g.distinct_values());
            let r = match args.budget {
                Some(b) => find_witnesses(&g, &s, k, b),
                None => decide_k_rem(&g, &s, k),
            }
            .map_err(internal)?;
            let mut report = json!({
                "language": "rem",
                "decision": r.decision.as_str(),
                "registers": k,
                "visited": r.visited,
                "budget": args.budget.unwrap_or(def_rem::DEFAULT_BUDGET),
            });
            if r.decision == Decision::Definable {
                report["witnesses"] = r
                    .witnesses
                    .iter()
                    .map(|(p, w)| json!({"pair": pair_json(&g, *p), "expression": w.to_string()}))
                    .collect();
                if let Some(w) = &r.empty_witness {
                    report["empty_witness"] = json!(w.to_string());
                }
            }
            if let Some(p) = r.failing_pair {
                report["failing_pair"] = pair_json(&g, p);
            }
            let query = match (want_query, r.decision) {
                (true, Decision::Definable) => {
                    Some(synthesize_rem(&g, &r).map_err(internal)?.to_string())
                }
                _ => None,
            };
            Ok(Decided {
                decision: r.decision,
                report,
                query,
            })
        }
        Language::Ree => {
            let s = binary(&s)?;
            let budget = args.budget.unwrap_or(def_ree::DEFAULT_BUDGET);
            let r = decide_ree_with_budget(&g, &s, budget).map_err(internal)?;
            let mut report = json!({
                "language": "ree",
                "decision": r.decision.as_str(),
                "generators": r.generators,
                "budget": budget,
            });
            if let Some(level) = r.level {
                report["level"] = json!(level);
            }
            if let Some(stable) = r.levels.as_ref().and_then(|l| l.stable_level()) {
                report["stable_level"] = json!(stable);
            }
            let query = match (want_query, r.decision) {
                (true, Decision::Definable) => {
                    Some(synthesize_ree(&g, &r).map_err(internal)?.to_string())
                }
                _ => None,
            };
            Ok(Decided {
                decision: r.decision,
                report,
                query,
            })
        }
        Language::Ucrdpq => {
            let budget = args.budget.unwrap_or(def_ucq::DEFAULT_BUDGET);
            let r = decide_ucrdpq_parallel(&g, &s, budget, args.jobs)?;
            let mut report = json!({
                "language": "ucrdpq",
                "decision": r.decision.as_str(),
                "homomorphisms": r.homomorphisms,
                "budget": budget,
            });
            if let Some(c) = &r.counterexample {
                let hom: serde_json::Map<String, Json> = c
                    .hom
                    .map()
                    .iter()
                    .enumerate()
                    .map(|(p, &x)| (g.node_id(p).to_string(), json!(g.node_id(x))))
                    .collect();
                let ids = |t: &[usize]| t.iter().map(|&p| g.node_id(p)).collect::<Vec<_>>();
                report["counterexample"] = json!({
                    "hom": hom,
                    "tuple": ids(&c.tuple),
                    "image": ids(&c.image),
                });
            }
            let query = match (want_query, r.decision) {
                (true, Decision::Definable) => {
                    Some(synthesize_ucrdpq(&g, &s).map_err(internal)?.to_string())
                }
                _ => None,
            };
            Ok(Decided {
                decision: r.decision,
                report,
                query,
            })
        }
    }
}

/// Runs one search per image of the first node and combines them in
/// order, so the answer does not depend on the number of workers.
fn decide_ucrdpq_parallel(
    g: &DataGraph,
    s: &NodeRelation,
    budget: usize,
    jobs: usize,
) -> Result<UcqReport, Failure> {
    let n = g.node_count();
    let internal = |e: graphdef_core::Error| Failure::Internal(e.to_string());
    if n == 0 {
        return decide_ucrdpq_range(g, s, 0..0, budget).map_err(internal);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Failure::Internal(e.to_string()))?;
    let parts: Vec<UcqReport> = pool
        .install(|| {
            (0..n)
                .into_par_iter()
                .map(|i| decide_ucrdpq_range(g, s, i..i + 1, budget))
                .collect::<Result<Vec<_>, _>>()
        })
        .map_err(internal)?;
    let mut homs = 0;
    let mut exhausted = false;
    for part in parts {
        homs += part.homomorphisms;
        match part.decision {
            Decision::NotDefinable => {
                return Ok(UcqReport {
                    decision: Decision::NotDefinable,
                    counterexample: part.counterexample,
                    homomorphisms: homs,
                })
            }
            Decision::ResourceExhausted => exhausted = true,
            Decision::Definable => {}
        }
    }
    Ok(UcqReport {
        decision: if exhausted {
            Decision::ResourceExhausted
        } else {
            Decision::Definable
        },
        counterexample: None,
        homomorphisms: homs,
    })
}

fn cmd_definable(args: &DecideArgs, out: &mut dyn Write) -> Outcome {
    let mut d = decide(args, args.synthesize.is_some())?;
    if let (Some(path), Some(q)) = (&args.synthesize, &d.query) {
        std::fs::write(path, format!("{q}\n"))?;
        d.report["synthesized"] = json!(path.display().to_string());
    }
    write_json(out, &d.report)?;
    Ok(exit_for(d.decision))
}

fn cmd_synthesize(args: &DecideArgs, path: Option<&Path>, out: &mut dyn Write) -> Outcome {
    let d = decide(args, true)?;
    if let Some(q) = &d.query {
        match path {
            Some(p) => std::fs::write(p, format!("{q}\n"))?,
            None => writeln!(out, "{q}")?,
        }
    }
    Ok(exit_for(d.decision))
}

fn cmd_canon(text: &str, out: &mut dyn Write) -> Outcome {
    let w = DataPath::parse(text)
        .map_err(|e| InputError::at_offset("<path>", text, e.pos, e.message))?;
    writeln!(out, "{}", canonical_path(&w))?;
    Ok(0)
}

fn cmd_dump_assign(graph: &Path, k: usize, out: &mut dyn Write) -> Outcome {
    use graphdef_core::assign::{AssignGraph, AssignState};
    let g = load_graph(graph)?;
    let ag = AssignGraph::new(&g, k).map_err(|e| Failure::Internal(e.to_string()))?;
    let show = |s: &AssignState| {
        let regs: Vec<&str> = s
            .regs
            .iter()
            .map(|r| r.map_or("_", |v| g.values()[v as usize].as_str()))
            .collect();
        format!("({},[{}])", g.node_id(s.node), regs.join(","))
    };
    for (from, l, to) in ag.edges() {
        writeln!(
            out,
            "{} {} {}",
            show(&from),
            l.to_block(&g, k).to_rem(),
            show(&to)
        )?;
    }
    Ok(0)
}

#[cfg(feature = "oracle")]
mod oracle {
    use super::*;
    use graphdef_core::oracle::{
        enum_homs_bruteforce, enum_paths, eval_ree_by_paths, eval_rem_by_paths,
    };

    pub(super) fn run(cmd: OracleCommand, out: &mut dyn Write) -> Outcome {
        match cmd {
            OracleCommand::Paths { graph, max_letters } => {
                let g = load_graph(&graph)?;
                for ((u, v), ws) in enum_paths(&g, max_letters) {
                    for w in ws {
                        writeln!(out, "{} {} {w}", g.node_id(u), g.node_id(v))?;
                    }
                }
            }
            OracleCommand::Homs { graph } => {
                let g = load_graph(&graph)?;
                for h in enum_homs_bruteforce(&g) {
                    let ids: Vec<&str> = h.iter().map(|&x| g.node_id(x)).collect();
                    writeln!(out, "{}", ids.join(" "))?;
                }
            }
            OracleCommand::Eval {
                graph,
                r#type,
                query,
                max_letters,
            } => {
                let g = load_graph(&graph)?;
                let r = match parse_query(&label(&query), &read(&query)?, r#type)? {
                    Query::Rem(e) => eval_rem_by_paths(&g, &e, max_letters),
                    Query::Ree(e) => eval_ree_by_paths(&g, &e, max_letters),
                    _ => {
                        return Err(Failure::Internal(
                            "oracle eval supports rem, ree and rpq".into(),
                        ))
                    }
                };
                write_json(out, &relation_json(&g, &NodeRelation::from(r)))?;
            }
        }
        Ok(0)
    }
}
