//! Command-line front end.
//!
//! Every command prints JSON on stdout. Decision commands exit with 0 for
//! yes and 1 for no; any failure exits with 2 after printing
//! `{"error": code, "detail": ...}`.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use tpq_core::analysis::{
    answer_correctness, exact_tree_projection_with_cap, greedy_tree_projection, is_tp_covered_with,
    lc_gc_certificate_with, lc_nonempty_certificate_with, width, Limits, WidthMode,
};
use tpq_core::consistency::reduct;
use tpq_core::engine::build_plan;
use tpq_core::game::{greedy_strategy, to_nice, ComponentGraph};
use tpq_core::hypergraph::DEFAULT_ARITY_CAP;
use tpq_core::relational::cores;
use tpq_core::views::generate;
use tpq_core::{Database, Hypergraph, Method, Query, ViewSystem};

use crate::error::{CliError, CliResult};
use crate::format::*;
use crate::probe::{probe_counterexample, ProbeConfig};

/// Environment variable overriding the simplicial arity cap.
pub const ARITY_CAP_VAR: &str = "TPQ_ARITY_CAP";

#[derive(Parser, Debug)]
#[command(name = "tpq", version, about = "Tree projections and local consistency for conjunctive queries")]
struct Cli {
    /// Worker threads for parallel commands (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Is the hypergraph acyclic? (exit 0 yes, 1 no)
    Acyclic { hypergraph: PathBuf },
    /// Print a join tree of an acyclic hypergraph.
    Jointree { hypergraph: PathBuf },
    /// Decide whether H1 has a tree projection with respect to H2.
    Tp(TpArgs),
    /// Print all cores of a query.
    Core { query: PathBuf },
    /// Is a set of variables tp-covered? (exit 0 yes, 1 no)
    Tpcovered {
        #[arg(long, value_delimiter = ',', required = true)]
        vars: Vec<String>,
        query: PathBuf,
        views: PathBuf,
    },
    /// Check a certificate: local consistency implies global consistency
    /// (gc) or a non-empty answer (nonempty).
    Certify {
        #[arg(long, value_enum)]
        mode: CertMode,
        query: PathBuf,
        views: PathBuf,
    },
    /// Generate the views of a decomposition method with their relations.
    Views {
        #[arg(long, value_enum)]
        method: MethodArg,
        #[arg(short, long, default_value_t = 1)]
        k: usize,
        /// For tw: fill views with products of variable domains.
        #[arg(long)]
        liberal: bool,
        query: PathBuf,
        database: PathBuf,
    },
    /// Compute the reduct of the view relations.
    Reduct {
        /// Print each effective semijoin as a JSON line first.
        #[arg(long)]
        trace: bool,
        query: PathBuf,
        views: PathBuf,
        database: PathBuf,
    },
    /// Answer the query projected onto the output variables.
    Eval {
        #[arg(long, value_delimiter = ',')]
        output: Vec<String>,
        #[arg(long, value_enum, default_value_t = Via::Tp)]
        via: Via,
        #[arg(long)]
        limit: Option<usize>,
        query: PathBuf,
        views: PathBuf,
        database: PathBuf,
    },
    /// Compute ghw, gr-hw or hw up to a bound.
    Width {
        #[arg(long, value_enum)]
        mode: WidthArg,
        #[arg(long, default_value_t = 3)]
        kmax: usize,
        query: PathBuf,
    },
    /// Check a file against a schema (exit 0 valid, 2 invalid).
    Validate {
        #[arg(long, value_enum)]
        schema: Schema,
        file: PathBuf,
        /// The query, needed for the views schema.
        #[arg(long)]
        query: Option<PathBuf>,
    },
    /// Search for legal locally consistent databases with an empty answer.
    ProbeCounterexample {
        #[arg(long, default_value_t = 4)]
        domain: usize,
        #[arg(long, default_value_t = 200)]
        attempts: usize,
        query: PathBuf,
        views: PathBuf,
    },
}

#[derive(Args, Debug)]
struct TpArgs {
    /// Exact decision via the simplicial expansion.
    #[arg(long, conflicts_with = "greedy")]
    exact: bool,
    /// Greedy strategies on the pair as given.
    #[arg(long)]
    greedy: bool,
    /// With --greedy, only monotone strategies.
    #[arg(long, requires = "greedy")]
    monotone: bool,
    /// Also write the tree projection to this file.
    #[arg(long)]
    emit: Option<PathBuf>,
    /// Write the component graph of the greedy strategy to this file.
    #[arg(long)]
    emit_strategy: Option<PathBuf>,
    h1: PathBuf,
    h2: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CertMode {
    Gc,
    Nonempty,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Acyc,
    Tw,
    Hw,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Via {
    Lc,
    Tp,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum WidthArg {
    Ghw,
    Grhw,
    Hw,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Schema {
    Hypergraph,
    Query,
    Database,
    Views,
    Tp,
}

/// What a command produced: JSON lines, then an exit code.
struct Outcome {
    lines: Vec<Value>,
    code: i32,
}

impl Outcome {
    fn one(v: Value) -> Self {
        Outcome { lines: vec![v], code: 0 }
    }

    fn decision(v: Value, yes: bool) -> Self {
        Outcome {
            lines: vec![v],
            code: if yes { 0 } else { 1 },
        }
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::new("Io", format!("{}: {e}", path.display())))
}

fn with_file<T>(path: &Path, r: CliResult<T>) -> CliResult<T> {
    r.map_err(|mut e| {
        e.detail = format!("{}: {}", path.display(), e.detail);
        e
    })
}

fn load_hypergraph(path: &Path) -> CliResult<Hypergraph> {
    with_file(path, parse_hypergraph(&read(path)?))
}

fn load_query(path: &Path) -> CliResult<Query> {
    with_file(path, parse_query(&read(path)?))
}

fn load_views(path: &Path, q: &Query) -> CliResult<ViewSystem> {
    with_file(path, parse_views(&read(path)?, q))
}

fn load_database(path: &Path, q: &Query, vs: Option<&ViewSystem>) -> CliResult<Database> {
    with_file(path, parse_database(&read(path)?, &arities(q, vs)))
}

fn write_json(path: &Path, v: &Value) -> CliResult<()> {
    let text = serde_json::to_string_pretty(v).expect("serializable");
    fs::write(path, text + "\n").map_err(|e| CliError::new("Io", format!("{}: {e}", path.display())))
}

/// The simplicial arity cap, from the environment if set.
pub fn arity_cap() -> CliResult<usize> {
    match std::env::var(ARITY_CAP_VAR) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| CliError::new("Usage", format!("{ARITY_CAP_VAR} must be a non-negative integer, got `{s}`"))),
        Err(_) => Ok(DEFAULT_ARITY_CAP),
    }
}

fn limits() -> CliResult<Limits> {
    Ok(Limits {
        arity_cap: arity_cap()?,
        ..Limits::default()
    })
}

fn execute(cli: Cli) -> CliResult<Outcome> {
    match cli.command {
        Command::Acyclic { hypergraph } => {
            let h = load_hypergraph(&hypergraph)?;
            let yes = h.is_acyclic();
            Ok(Outcome::decision(json!({ "acyclic": yes }), yes))
        }
        Command::Jointree { hypergraph } => {
            let h = load_hypergraph(&hypergraph)?;
            let jt = h.join_tree()?;
            Ok(Outcome::one(json!({
                "vertices": h.edge_name_lists(),
                "joinTree": join_tree_json(&jt),
                "treeEdges": jt.tree_edges(),
            })))
        }
        Command::Tp(args) => tp(args),
        Command::Core { query } => {
            let q = load_query(&query)?;
            let all = cores(&q)?;
            Ok(Outcome::one(json!({ "cores": all.iter().map(query_json).collect::<Vec<_>>() })))
        }
        Command::Tpcovered { vars, query, views } => {
            let q = load_query(&query)?;
            let vs = load_views(&views, &q)?;
            let c = is_tp_covered_with(&q, &vs, &vars, limits()?)?;
            Ok(Outcome::decision(coverage_json(&c), c.covered))
        }
        Command::Certify { mode, query, views } => {
            let q = load_query(&query)?;
            let vs = load_views(&views, &q)?;
            let cert = match mode {
                CertMode::Gc => lc_gc_certificate_with(&q, &vs, limits()?)?,
                CertMode::Nonempty => lc_nonempty_certificate_with(&q, &vs, limits()?)?,
            };
            Ok(Outcome::decision(certificate_json(&cert), cert.holds))
        }
        Command::Views {
            method,
            k,
            liberal,
            query,
            database,
        } => {
            let q = load_query(&query)?;
            let db = load_database(&database, &q, None)?;
            if k == 0 && !matches!(method, MethodArg::Acyc) {
                return Err(CliError::new("Usage", "k must be at least 1"));
            }
            let m = match method {
                MethodArg::Acyc => Method::Acyc,
                MethodArg::Hw => Method::Hw { k },
                MethodArg::Tw => Method::Tw { k, liberal },
            };
            let (vs, vdb) = generate(&q, &db, m)?;
            let mut doc = views_json(&vs);
            doc["relations"] = database_json(&vdb)["relations"].clone();
            Ok(Outcome::one(doc))
        }
        Command::Reduct {
            trace,
            query,
            views,
            database,
        } => {
            let q = load_query(&query)?;
            let vs = load_views(&views, &q)?;
            let db = load_database(&database, &q, Some(&vs))?;
            let r = reduct(&vs, &db)?;
            let mut lines = Vec::new();
            if trace {
                for s in &r.trace {
                    lines.push(json!({ "target": s.target, "source": s.source, "deleted": s.deleted }));
                }
            }
            lines.push(reduct_json(&r, &vs));
            Ok(Outcome { lines, code: 0 })
        }
        Command::Eval {
            output,
            via,
            limit,
            query,
            views,
            database,
        } => eval(&output, via, limit, &query, &views, &database),
        Command::Width { mode, kmax, query } => {
            let q = load_query(&query)?;
            let mode = match mode {
                WidthArg::Ghw => WidthMode::Ghw,
                WidthArg::Grhw => WidthMode::Grhw,
                WidthArg::Hw => WidthMode::Hw,
            };
            let w = width(&q, mode, kmax)?;
            Ok(Outcome::one(json!({
                "mode": format!("{mode:?}").to_lowercase(),
                "kmax": kmax,
                "width": w.value,
                "treeProjection": w.witness.as_ref().map(tree_projection_json),
            })))
        }
        Command::Validate { schema, file, query } => {
            let text = read(&file)?;
            let checked = match schema {
                Schema::Hypergraph => parse_hypergraph(&text).map(|_| ()),
                Schema::Query => parse_query(&text).map(|_| ()),
                Schema::Database => parse_database(&text, &Default::default()).map(|_| ()),
                Schema::Tp => parse_tree_projection(&text).map(|_| ()),
                Schema::Views => {
                    let q = query
                        .as_deref()
                        .ok_or_else(|| CliError::new("Usage", "--query is required for the views schema"))?;
                    let q = load_query(q)?;
                    parse_views(&text, &q).map(|_| ())
                }
            };
            with_file(&file, checked)?;
            Ok(Outcome::one(json!({ "valid": true })))
        }
        Command::ProbeCounterexample {
            domain,
            attempts,
            query,
            views,
        } => {
            let q = load_query(&query)?;
            let vs = load_views(&views, &q)?;
            let cfg = ProbeConfig {
                domain,
                attempts,
                seed: cli.seed,
            };
            let report = probe_counterexample(&q, &vs, cfg)?;
            Ok(Outcome::one(json!({
                "seed": cli.seed,
                "attempts": report.attempts,
                "hits": report.hits,
                "hitRate": report.hit_rate(),
                "witness": report.witness.as_ref().map(database_json),
            })))
        }
    }
}

fn tp(args: TpArgs) -> CliResult<Outcome> {
    if !args.exact && !args.greedy {
        return Err(CliError::new("Usage", "one of --exact or --greedy is required"));
    }
    let h1 = load_hypergraph(&args.h1)?;
    let h2 = load_hypergraph(&args.h2)?;
    if let Some(path) = &args.emit_strategy {
        let target = if args.exact { h2.simplicial(arity_cap()?)? } else { h2.clone() };
        let doc = match greedy_strategy(&h1, &target, args.monotone) {
            Some(g) => component_graph_json(&ComponentGraph::from_nice(&to_nice(&g, &h1)?, &h1)?, &h1),
            None => Value::Null,
        };
        write_json(path, &doc)?;
    }
    let found = if args.exact {
        exact_tree_projection_with_cap(&h1, &h2, arity_cap()?)?
    } else {
        greedy_tree_projection(&h1, &h2, args.monotone)?
    };
    match found {
        Some(tp) => {
            let doc = tree_projection_json(&tp);
            if let Some(path) = &args.emit {
                write_json(path, &doc)?;
            }
            Ok(Outcome::decision(json!({ "exists": true, "treeProjection": doc }), true))
        }
        None => Ok(Outcome::decision(json!({ "exists": false }), false)),
    }
}

fn eval(
    output: &[String],
    via: Via,
    limit: Option<usize>,
    query: &Path,
    views: &Path,
    database: &Path,
) -> CliResult<Outcome> {
    let q = load_query(query)?;
    let vs = load_views(views, &q)?;
    let db = load_database(database, &q, Some(&vs))?;
    q.check_vars(output.iter().map(String::as_str))?;
    let row = |values: &[String]| -> Value {
        let obj: serde_json::Map<String, Value> =
            output.iter().cloned().zip(values.iter().map(|v| json!(v))).collect();
        Value::Object(obj)
    };
    let mut lines = Vec::new();
    match via {
        Via::Tp => {
            let h1 = q.hypergraph()?;
            let tp = exact_tree_projection_with_cap(&h1, &vs.hypergraph(), arity_cap()?)?.ok_or_else(|| {
                CliError::new("NoTreeProjection", "the query has no tree projection with respect to the views")
            })?;
            let (plan, _) = build_plan(&q, &vs, &db, &tp)?.full_reduce();
            for answer in plan.enumerate(output, limit)? {
                lines.push(row(&answer));
            }
        }
        Via::Lc => {
            let answer = answer_correctness(&q, &vs, &db, output)?;
            let t = answer.relation.project(output);
            for r in t.rows().iter().take(limit.unwrap_or(usize::MAX)) {
                lines.push(row(r));
            }
            lines.push(json!({
                "summary": { "view": answer.view, "exactness": format!("{:?}", answer.exactness) }
            }));
        }
    }
    Ok(Outcome { lines, code: 0 })
}

/// Runs the CLI on `args` (including the program name), writing to `out`
/// and `err`, and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let _ = write!(err, "{e}");
            let detail = e.to_string().lines().next().unwrap_or_default().to_string();
            let _ = writeln!(out, "{}", CliError::new("Usage", detail).to_json());
            return 2;
        }
    };
    if let Some(n) = cli.threads {
        // A second call in the same process keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match execute(cli) {
        Ok(o) => {
            for line in &o.lines {
                let _ = writeln!(out, "{line}");
            }
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            let _ = writeln!(out, "{}", e.to_json());
            2
        }
    }
}
