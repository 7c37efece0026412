//! `bgc`: command-line front end for the weighted-graph calculus.
//!
//! Exit status: 0 success, 1 negative answer (`equiv`) or invariant
//! violations (`check`), 2 unreadable or malformed input, 3 input that
//! violates a precondition of the command.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bgc_core::oracle::{
    check_invariants, explore, oracle_equivalent, standardize_chain, structural_key, OracleError, SearchBounds, Verdict,
};
use bgc_core::{
    apply_trace, canonical_form, equivalent, gamma0, is_standard, normalize_branch_weights, segments, CanonError,
    ParseError, SegmentKind, Trace, TraceError, WeightedGraph,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser)]
#[command(name = "bgc", version, about = "Birational calculus of integer-weighted graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the canonical encoding of a standard graph.
    Canon {
        #[command(flatten)]
        input: OneGraph,
        /// Also print the branch-weight normalization trace.
        #[arg(long)]
        emit_trace: bool,
        /// Write the normalization trace to a file.
        #[arg(long, value_name = "FILE")]
        trace_out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Decide whether two standard graphs are equivalent (exit 0 if so, 1 if not).
    Equiv {
        #[command(flatten)]
        input: TwoGraphs,
        /// Also run the search oracle and print its verdict.
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        bounds: BoundsArgs,
    },
    /// Show the components of Γ₀ with their case and branching-weight sum.
    Gamma0 {
        #[command(flatten)]
        input: OneGraph,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// List the linear segments of a tree.
    Segments {
        #[command(flatten)]
        input: OneGraph,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Replay a trace file and print the resulting graph.
    Apply {
        #[command(flatten)]
        input: OneGraph,
        #[arg(long, short, value_name = "FILE")]
        trace: PathBuf,
    },
    /// Reduce a chain to a standard chain.
    Standardize {
        #[command(flatten)]
        input: OneGraph,
        #[arg(long)]
        emit_trace: bool,
        #[arg(long, value_name = "FILE")]
        trace_out: Option<PathBuf>,
        #[command(flatten)]
        bounds: BoundsArgs,
    },
    /// Breadth-first exploration of the graphs reachable by moves.
    Explore {
        #[command(flatten)]
        input: OneGraph,
        /// Only list reachable standard graphs.
        #[arg(long)]
        standard_only: bool,
        #[command(flatten)]
        bounds: BoundsArgs,
    },
    /// Run the randomized invariant checks (exit 1 on violations).
    Check {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Write the report as JSON to a file.
        #[arg(long, value_name = "FILE")]
        report_out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[command(flatten)]
        bounds: BoundsArgs,
    },
    /// Render a graph in DOT format.
    Dot {
        #[command(flatten)]
        input: OneGraph,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct OneGraph {
    /// Graph file (.wg).
    #[arg(required_unless_present = "expr", conflicts_with = "expr")]
    path: Option<PathBuf>,
    /// Inline graph text; `;` separates lines.
    #[arg(long, allow_hyphen_values = true)]
    expr: Option<String>,
}

#[derive(Args)]
struct TwoGraphs {
    /// Graph files (.wg); combined with --expr to make two graphs.
    paths: Vec<PathBuf>,
    /// Inline graph text; `;` separates lines. May be repeated.
    #[arg(long, allow_hyphen_values = true)]
    expr: Vec<String>,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long, env = "BGC_MAX_VERTICES", default_value_t = SearchBounds::default().max_vertices)]
    max_vertices: usize,
    #[arg(long, env = "BGC_WEIGHT_MIN", allow_negative_numbers = true, default_value_t = SearchBounds::default().weight_min)]
    weight_min: i64,
    #[arg(long, env = "BGC_WEIGHT_MAX", allow_negative_numbers = true, default_value_t = SearchBounds::default().weight_max)]
    weight_max: i64,
    #[arg(long, env = "BGC_MAX_DEPTH", default_value_t = SearchBounds::default().max_depth)]
    max_depth: usize,
    #[arg(long, env = "BGC_MAX_STATES", default_value_t = SearchBounds::default().max_states)]
    max_states: usize,
}

impl BoundsArgs {
    fn bounds(&self) -> Result<SearchBounds, Failure> {
        let b = SearchBounds {
            max_vertices: self.max_vertices,
            weight_min: self.weight_min,
            weight_max: self.weight_max,
            max_depth: self.max_depth,
            max_states: self.max_states,
        };
        b.validate().map_err(|e| Failure::Input(e.to_string()))?;
        Ok(b)
    }
}

enum Failure {
    /// Exit 1 with no message.
    Negative,
    Input(String),
    Domain(String),
}

impl From<CanonError> for Failure {
    fn from(e: CanonError) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<TraceError> for Failure {
    fn from(e: TraceError) -> Self {
        Failure::Domain(e.to_string())
    }
}

fn parse_failure(origin: &str, e: ParseError) -> Failure {
    Failure::Input(format!("{origin}:{e}"))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_path(path: &Path) -> Result<WeightedGraph, Failure> {
    read(path)?.parse().map_err(|e| parse_failure(&path.display().to_string(), e))
}

fn load_expr(expr: &str) -> Result<WeightedGraph, Failure> {
    expr.replace(';', "\n").parse().map_err(|e| parse_failure("<expr>", e))
}

impl OneGraph {
    fn load(&self) -> Result<WeightedGraph, Failure> {
        match (&self.path, &self.expr) {
            (Some(p), _) => load_path(p),
            (None, Some(e)) => load_expr(e),
            (None, None) => unreachable!("clap requires one input"),
        }
    }
}

impl TwoGraphs {
    fn load(&self) -> Result<(WeightedGraph, WeightedGraph), Failure> {
        let mut graphs = Vec::new();
        for p in &self.paths {
            graphs.push(load_path(p)?);
        }
        for e in &self.expr {
            graphs.push(load_expr(e)?);
        }
        match <[WeightedGraph; 2]>::try_from(graphs) {
            Ok([a, b]) => Ok((a, b)),
            Err(v) => Err(Failure::Input(format!("expected two graphs, got {}", v.len()))),
        }
    }
}

fn require_standard(g: &WeightedGraph) -> Result<(), Failure> {
    if is_standard(g) {
        Ok(())
    } else {
        Err(Failure::Domain("graph is not standard".into()))
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn ids<I: IntoIterator<Item = T>, T: ToString>(items: I) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("JSON values serialize"));
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Canon { input, emit_trace, trace_out, format } => {
            let g = input.load()?;
            require_standard(&g)?;
            let cf = canonical_form(&g)?;
            let trace = if g.is_circular() { Trace::new() } else { normalize_branch_weights(&g)?.1 };
            if let Some(p) = &trace_out {
                write(p, &trace.to_text())?;
            }
            match format {
                Format::Text => {
                    println!("{}", cf.encoding);
                    if emit_trace {
                        println!("# normalization trace, {} moves", trace.len());
                        print!("{}", trace.to_text());
                    }
                }
                Format::Json => {
                    let mut v = json!({ "encoding": cf.encoding, "normalized": cf.normalized.to_text() });
                    if emit_trace {
                        v["trace"] = json!(trace.moves().map(|m| m.to_string()).collect::<Vec<_>>());
                    }
                    print_json(&v);
                }
            }
        }
        Command::Equiv { input, oracle, bounds } => {
            let (a, b) = input.load()?;
            let verdict = equivalent(&a, &b)?;
            println!("{}", if verdict { "equivalent" } else { "inequivalent" });
            if oracle {
                match oracle_equivalent(&a, &b, &bounds.bounds()?) {
                    Verdict::True { depth } => println!("oracle: true (depth {depth})"),
                    Verdict::False(sep) => println!("oracle: false ({sep:?})"),
                    Verdict::Inconclusive { states, budget_exhausted } => {
                        println!(
                            "oracle: inconclusive ({states} states, budget exhausted: {})",
                            yes_no(budget_exhausted)
                        )
                    }
                }
            }
            if !verdict {
                return Err(Failure::Negative);
            }
        }
        Command::Gamma0 { input, format } => {
            let g = input.load()?;
            let d = gamma0(&g)?;
            match format {
                Format::Text => {
                    println!("gamma0 {{{}}}", ids(&d.gamma0_vertices));
                    for (i, c) in d.components.iter().enumerate() {
                        println!(
                            "component {} vertices={{{}}} branch={{{}}} case={} sum={}",
                            i + 1,
                            ids(&c.vertices),
                            ids(&c.branch_subset),
                            c.case.as_str(),
                            c.weight_sum
                        );
                    }
                }
                Format::Json => {
                    let comps: Vec<_> = d
                        .components
                        .iter()
                        .map(|c| {
                            json!({
                                "vertices": c.vertices.iter().map(|v| v.0).collect::<Vec<_>>(),
                                "branch": c.branch_subset.iter().map(|v| v.0).collect::<Vec<_>>(),
                                "case": c.case.as_str(),
                                "sum": c.weight_sum,
                            })
                        })
                        .collect();
                    print_json(&json!({
                        "gamma0": d.gamma0_vertices.iter().map(|v| v.0).collect::<Vec<_>>(),
                        "components": comps,
                    }));
                }
            }
        }
        Command::Segments { input, format } => {
            let g = input.load()?;
            if g.is_circular() {
                return Err(Failure::Domain("graph is circular".into()));
            }
            let segs = segments(&g);
            let kind = |s: &bgc_core::Segment| match s.kind() {
                SegmentKind::End => "end",
                SegmentKind::Inner => "inner",
                SegmentKind::WholeLine => "whole-line",
            };
            match format {
                Format::Text => {
                    for s in &segs {
                        println!(
                            "{} vertices={} attach={} zeros={} tail=[{}] standard={}",
                            kind(s),
                            ids(&s.vertices),
                            ids(s.attachments()),
                            s.zero_block,
                            ids(&s.tail),
                            yes_no(s.is_standard())
                        );
                    }
                }
                Format::Json => {
                    let v: Vec<_> = segs
                        .iter()
                        .map(|s| {
                            json!({
                                "kind": kind(s),
                                "vertices": s.vertices.iter().map(|v| v.0).collect::<Vec<_>>(),
                                "start": s.start.map(|v| v.0),
                                "end": s.end.map(|v| v.0),
                                "zero_block": s.zero_block,
                                "tail": s.tail,
                                "standard": s.is_standard(),
                            })
                        })
                        .collect();
                    print_json(&json!(v));
                }
            }
        }
        Command::Apply { input, trace } => {
            let g = input.load()?;
            let t: Trace = read(&trace)?.parse().map_err(|e| parse_failure(&trace.display().to_string(), e))?;
            print!("{}", apply_trace(&g, &t)?.to_text());
        }
        Command::Standardize { input, emit_trace, trace_out, bounds } => {
            let g = input.load()?;
            let (h, t) = standardize_chain(&g, &bounds.bounds()?)?;
            if let Some(p) = &trace_out {
                write(p, &t.to_text())?;
            }
            print!("{}", h.to_text());
            if emit_trace {
                println!("# trace, {} moves", t.len());
                print!("{}", t.to_text());
            }
        }
        Command::Explore { input, standard_only, bounds } => {
            let g = input.load()?;
            let ex = explore(&g, &bounds.bounds()?)?;
            println!("states {} complete {}", ex.len(), yes_no(ex.is_complete()));
            for (h, depth) in ex.graphs() {
                if standard_only && !is_standard(h) {
                    continue;
                }
                println!("{depth} {}", structural_key(h).as_str());
            }
        }
        Command::Check { seed, trials, report_out, format, bounds } => {
            let report = check_invariants(seed, trials, &bounds.bounds()?)?;
            let as_json = || serde_json::to_value(&report).expect("report serializes");
            if let Some(p) = &report_out {
                write(p, &serde_json::to_string_pretty(&as_json()).unwrap())?;
            }
            match format {
                Format::Text => print!("{}", report.to_text()),
                Format::Json => print_json(&as_json()),
            }
            if !report.is_clean() {
                return Err(Failure::Negative);
            }
        }
        Command::Dot { input } => print!("{}", input.load()?.to_dot()),
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Negative) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
