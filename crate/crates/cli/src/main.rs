use std::io::Write;
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::{json, Value};
use thiserror::Error;

use quiverkit_core::adjacency::{adjacency_matrix, count_paths_matrix, is_nilpotent, mat_pow};
use quiverkit_core::extremal::{
    brute_force_max, decomposition, explore_real_relaxation, maximize_with_trace, optimal_bound,
    RelaxConfig,
};
use quiverkit_core::leavitt::{
    pullback_check, quotient_map, LeavittAlgebra, DEFAULT_FILTRATION_DEGREE,
};
use quiverkit_core::path_algebra::{self, enumerate_graphs_with_dim, is_commutative, PathAlgebra};
use quiverkit_core::structure::{
    admissible_subgraphs, hereditary_subsets, is_admissible_inclusion, is_admissible_intersection,
    is_admissible_union, saturated_subsets, GraphHom, VertexSubset,
};
use quiverkit_core::{CountMatrix, Graph};

type Q = BigRational;

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("engines disagree: matrix {matrix}, dfs {dfs}")]
    Disagreement { matrix: String, dfs: String },
    #[error("certificate failed: {0}")]
    Certificate(String),
    #[error(transparent)]
    Core(#[from] quiverkit_core::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use quiverkit_core::Error as E;
        match self {
            CliError::Parse(_) | CliError::Core(E::Parse(_) | E::InvalidWord(_)) => 2,
            CliError::Disagreement { .. } => 3,
            CliError::Certificate(_) => 4,
            CliError::Core(_) => 5,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser)]
#[command(name = "quiverkit", version, about = "Path counting and path algebras of finite directed graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GraphArg {
    /// Graph JSON file
    #[arg(long)]
    graph: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Engine {
    Matrix,
    Dfs,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Number of paths of length k
    Count {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "matrix")]
        engine: Engine,
    },
    /// List the paths of length k
    Enum {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 100_000)]
        cap: usize,
    },
    /// Most k-paths possible on N edges without loops
    Bound {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// Reshape a loop-free graph into a maximizer, recording each step
    Maximize {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long)]
        k: usize,
        /// Write the trace here; `.dot` gives a DOT sequence, anything else JSON
        #[arg(long)]
        trace_out: Option<PathBuf>,
    },
    /// Exhaustive maximum over loop-free graphs with N edges
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Vertex cap, 2N by default
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Hereditary, saturated and admissible vertex sets
    Analyze {
        #[command(flatten)]
        g: GraphArg,
    },
    /// Admissibility of an inclusion or of an intersection and union
    Admissible {
        #[command(flatten)]
        g: GraphArg,
        /// Subgraph included by ids
        #[arg(long, conflicts_with = "with")]
        sub: Option<PathBuf>,
        /// Second graph for the intersection and union
        #[arg(long, required_unless_present = "sub")]
        with: Option<PathBuf>,
    },
    /// Path algebra over the rationals
    Algebra {
        #[command(subcommand)]
        op: AlgebraOp,
    },
    /// Leavitt path algebra over the rationals
    Leavitt {
        #[command(subcommand)]
        op: LeavittOp,
    },
    /// Adjacency matrix operations
    Matrix {
        #[command(subcommand)]
        op: MatrixOp,
    },
    /// Numerical exploration of the real relaxation
    Conjecture {
        #[command(subcommand)]
        op: ConjectureOp,
    },
    /// Re-emit a graph as DOT or JSON
    Convert {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long, value_enum)]
        to: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum AlgebraOp {
    Dim {
        #[command(flatten)]
        g: GraphArg,
    },
    /// Product of two paths, each given as edge ids or a vertex name
    Mul {
        #[command(flatten)]
        g: GraphArg,
        left: String,
        right: String,
    },
    Unit {
        #[command(flatten)]
        g: GraphArg,
    },
    Commutative {
        #[command(flatten)]
        g: GraphArg,
    },
    /// Test an element stored as element JSON
    Idempotent {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long)]
        element: PathBuf,
    },
    /// All graphs whose path algebra has dimension d
    EnumDim {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        connected: bool,
    },
}

#[derive(Subcommand)]
enum LeavittOp {
    /// Normal form of a word or linear combination of words
    Reduce {
        #[command(flatten)]
        g: GraphArg,
        word: String,
    },
    Mul {
        #[command(flatten)]
        g: GraphArg,
        left: String,
        right: String,
    },
    Dim {
        #[command(flatten)]
        g: GraphArg,
    },
    /// Image of a word in the algebra of an admissible subgraph
    Quotient {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long)]
        sub: PathBuf,
        word: String,
    },
    /// Check the pullback square over the intersection
    Pullback {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long)]
        with: PathBuf,
        #[arg(long, default_value_t = DEFAULT_FILTRATION_DEGREE)]
        filtration: usize,
    },
}

#[derive(Subcommand)]
enum MatrixOp {
    Power {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long)]
        k: usize,
    },
    Nilpotent {
        #[command(flatten)]
        g: GraphArg,
    },
}

#[derive(Subcommand)]
enum ConjectureOp {
    Explore {
        #[arg(long)]
        n: f64,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest matrix dimension tried
        #[arg(long)]
        cap: Option<usize>,
    },
}

fn load(path: &FsPath) -> CliResult<Graph> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    Graph::from_json(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn write_out(path: &FsPath, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json value")
}

fn subset_names(s: &VertexSubset) -> Vec<String> {
    let mut names = s.names();
    names.sort();
    names
}

fn matrix_json(m: &CountMatrix) -> Value {
    let rows: Vec<Vec<String>> = m.rows().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
    json!({ "index": m.index(), "rows": rows })
}

fn path_element(alg: &PathAlgebra<Q>, text: &str) -> CliResult<path_algebra::AlgebraElement<Q>> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    match tokens.as_slice() {
        [v] if alg.graph().has_vertex(v) => Ok(alg.vertex(v)?),
        [] => Err(CliError::Parse("empty path".into())),
        _ => Ok(alg.path(&tokens)?),
    }
}

fn run(cli: Cli) -> CliResult<String> {
    Ok(match cli.command {
        Command::Count { g, k, engine } => {
            let graph = load(&g.graph)?;
            match engine {
                Engine::Matrix => count_paths_matrix(&graph, k)?.to_string(),
                Engine::Dfs => graph.count_paths_bruteforce(k)?.to_string(),
                Engine::Both => {
                    let (m, d) = (count_paths_matrix(&graph, k)?, graph.count_paths_bruteforce(k)?);
                    if m != d {
                        return Err(CliError::Disagreement { matrix: m.to_string(), dfs: d.to_string() });
                    }
                    m.to_string()
                }
            }
        }
        Command::Enum { g, k, cap } => {
            let paths = load(&g.graph)?.enumerate_paths_capped(k, cap)?;
            let list: Vec<Value> = paths.iter().map(|p| json!(p.edges)).collect();
            pretty(&json!({ "k": k.to_string(), "count": paths.len().to_string(), "paths": list }))
        }
        Command::Bound { n, k } => {
            let bound = optimal_bound(n, k)?;
            let (q, r) = decomposition(n, k)?;
            format!("{bound} = {}^{r} * {q}^{}", q + 1, k - r)
        }
        Command::Maximize { g, k, trace_out } => {
            let trace = maximize_with_trace(&load(&g.graph)?, k)?;
            let cert = trace.certify();
            if let Some(path) = trace_out {
                let text = if path.extension().is_some_and(|e| e == "dot") {
                    trace.to_dot_sequence()
                } else {
                    serde_json::to_string_pretty(&trace).expect("trace json")
                };
                write_out(&path, &text)?;
            }
            if !cert.holds() {
                return Err(CliError::Certificate(format!("{cert:?}")));
            }
            let count = |c: Option<&num_bigint::BigUint>| c.map(ToString::to_string);
            pretty(&json!({
                "k": k.to_string(),
                "initial": count(trace.initial_count()),
                "final": count(trace.final_count()),
                "steps": trace.steps.len().to_string(),
                "certificate": cert,
            }))
        }
        Command::Search { n, k, cap } => {
            let (best, witness) = brute_force_max(n, k, cap.unwrap_or(2 * n))?;
            pretty(&json!({
                "n": n.to_string(),
                "k": k.to_string(),
                "max": best.to_string(),
                "bound": optimal_bound(n, k)?.to_string(),
                "witness": witness,
            }))
        }
        Command::Analyze { g } => {
            let graph = load(&g.graph)?;
            let sets = |v: Vec<VertexSubset>| v.iter().map(subset_names).collect::<Vec<_>>();
            let admissible: Vec<Vec<String>> = admissible_subgraphs(&graph)?
                .iter()
                .map(|(_, sub)| {
                    let mut names: Vec<String> = sub.vertices().iter().map(ToString::to_string).collect();
                    names.sort();
                    names
                })
                .collect();
            pretty(&json!({
                "hereditary": sets(hereditary_subsets(&graph)?),
                "saturated": sets(saturated_subsets(&graph)?),
                "admissible_subgraphs": admissible,
            }))
        }
        Command::Admissible { g, sub, with } => {
            let graph = load(&g.graph)?;
            if let Some(sub) = sub {
                let small = load(&sub)?;
                let ok = is_admissible_inclusion(&small, &graph, &GraphHom::inclusion(&small))?;
                pretty(&json!({ "admissible": ok }))
            } else {
                let other = load(&with.expect("clap requires --sub or --with"))?;
                pretty(&json!({
                    "intersection_admissible": is_admissible_intersection(&graph, &other)?,
                    "union_admissible": is_admissible_union(&graph, &other)?,
                }))
            }
        }
        Command::Algebra { op } => algebra(op)?,
        Command::Leavitt { op } => leavitt(op)?,
        Command::Matrix { op } => match op {
            MatrixOp::Power { g, k } => pretty(&matrix_json(&mat_pow(&adjacency_matrix(&load(&g.graph)?)?, k))),
            MatrixOp::Nilpotent { g } => {
                let index = is_nilpotent(&adjacency_matrix(&load(&g.graph)?)?);
                pretty(&json!({ "nilpotent": index.is_some(), "index": index.map(|i| i.to_string()) }))
            }
        },
        Command::Conjecture { op: ConjectureOp::Explore { n, k, seed, cap } } => {
            let mut cfg = RelaxConfig { seed, ..RelaxConfig::default() };
            if let Some(cap) = cap {
                cfg.dim_cap = cap;
            }
            let res = explore_real_relaxation(n, k, &cfg)?;
            let num = |x: f64| format!("{x:.12}");
            pretty(&json!({
                "target": num(res.target),
                "best": num(res.best),
                "exceeds_target": res.best > res.target + 1e-9,
                "runs": res.runs.iter().map(|&x| num(x)).collect::<Vec<_>>(),
                "argmax": res.argmax.iter().map(|r| r.iter().map(|&x| num(x)).collect::<Vec<_>>()).collect::<Vec<_>>(),
            }))
        }
        Command::Convert { g, to, out } => {
            let graph = load(&g.graph)?;
            let text = match to {
                Format::Dot => graph.to_dot(),
                Format::Json => graph.to_json(),
            };
            match out {
                Some(path) => {
                    write_out(&path, &text)?;
                    String::new()
                }
                None => text,
            }
        }
    })
}

fn algebra(op: AlgebraOp) -> CliResult<String> {
    let open = |g: &GraphArg| -> CliResult<PathAlgebra<Q>> { Ok(PathAlgebra::new(load(&g.graph)?)?) };
    Ok(match op {
        AlgebraOp::Dim { g } => path_algebra::dimension(&load(&g.graph)?).to_string(),
        AlgebraOp::Mul { g, left, right } => {
            let alg = open(&g)?;
            let (x, y) = (path_element(&alg, &left)?, path_element(&alg, &right)?);
            alg.multiply(&x, &y)?.to_string()
        }
        AlgebraOp::Unit { g } => open(&g)?.unit().to_string(),
        AlgebraOp::Commutative { g } => is_commutative(&load(&g.graph)?).to_string(),
        AlgebraOp::Idempotent { g, element } => {
            let alg = open(&g)?;
            let text = std::fs::read_to_string(&element)
                .map_err(|e| CliError::Parse(format!("{}: {e}", element.display())))?;
            let x = alg.from_json(&text)?;
            alg.is_idempotent(&x)?.to_string()
        }
        AlgebraOp::EnumDim { d, connected } => {
            let graphs = enumerate_graphs_with_dim(d, connected)?;
            pretty(&json!({ "d": d.to_string(), "count": graphs.len().to_string(), "graphs": graphs }))
        }
    })
}

fn leavitt(op: LeavittOp) -> CliResult<String> {
    let open = |g: &GraphArg| -> CliResult<LeavittAlgebra<Q>> { Ok(LeavittAlgebra::new(load(&g.graph)?)?) };
    Ok(match op {
        LeavittOp::Reduce { g, word } => open(&g)?.reduce(&word)?.to_string(),
        LeavittOp::Mul { g, left, right } => {
            let alg = open(&g)?;
            alg.multiply(&alg.reduce(&left)?, &alg.reduce(&right)?)?.to_string()
        }
        LeavittOp::Dim { g } => open(&g)?.dimension_if_finite().to_string(),
        LeavittOp::Quotient { g, sub, word } => {
            let (big, small) = (open(&g)?, LeavittAlgebra::new(load(&sub)?)?);
            quotient_map(&big, &small, &big.reduce(&word)?)?.to_string()
        }
        LeavittOp::Pullback { g, with, filtration } => {
            let report = pullback_check::<Q>(&load(&g.graph)?, &load(&with)?, filtration)?;
            serde_json::to_string_pretty(&report).expect("report json")
        }
    })
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            if !out.is_empty() {
                let _ = writeln!(std::io::stdout(), "{out}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
