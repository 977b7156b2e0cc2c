//! `madst`: minimum-Wiener-index spanning trees from the command line.
//!
//! Exit codes: 0 for a solved instance or a yes answer, 1 for a no answer,
//! 2 for any error or a failed `check`.

mod solve;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use madst_core::gen::{gen_cograph, gen_partial_ktree, gen_random_connected, gen_split, gen_x3c, reduce_x3c};
use madst_core::io::{format_graph, format_td, format_tree, format_x3c, parse_graph, parse_td, GraphFile};
use madst_core::oracle::MAX_ORACLE_N_ENV;
use madst_core::treewidth::heuristic_tree_decomposition;
use madst_core::{wiener_graph, Error, Graph, Result};
use solve::{Algo, AutoThresholds};

#[derive(Parser)]
#[command(name = "madst", version, about = "Spanning trees of minimum Wiener index")]
struct Cli {
    /// Worker threads for solver-internal parallelism.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Vertex limit for the brute-force oracle (also read from MADST_MAX_ORACLE_N).
    #[arg(long, global = true)]
    max_oracle_n: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Computes the optimum, or decides `W <= budget`.
    Solve(SolveArgs),
    /// Prints the Wiener index of a connected graph or tree.
    Wiener { file: PathBuf },
    /// Generates instances.
    Gen {
        /// Output file; stdout when absent.
        #[arg(short, long, global = true)]
        out: Option<PathBuf>,
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Validates a spanning tree or a tree decomposition against a graph.
    Check {
        graph: PathBuf,
        #[arg(long, conflicts_with = "td", required_unless_present = "td")]
        tree: Option<PathBuf>,
        #[arg(long)]
        td: Option<PathBuf>,
    },
    /// Writes the heuristic tree decomposition of a graph.
    Decompose { graph: PathBuf },
}

#[derive(Args)]
struct SolveArgs {
    graph: PathBuf,
    #[arg(long, value_enum, default_value_t = Algo::Auto)]
    algo: Algo,
    /// Decision budget; defaults to a `c budget` line in the graph file.
    #[arg(long)]
    budget: Option<u64>,
    /// Tree decomposition for the treewidth solver (PACE `.td`).
    #[arg(long)]
    td: Option<PathBuf>,
    /// Writes the witness tree here when the solver produces one.
    #[arg(long)]
    emit_tree: Option<PathBuf>,
    #[arg(long)]
    json: bool,
    #[arg(long, default_value_t = AutoThresholds::default().max_modules)]
    auto_max_modules: usize,
    #[arg(long, default_value_t = AutoThresholds::default().max_width)]
    auto_max_width: usize,
    #[arg(long, default_value_t = AutoThresholds::default().max_integrity)]
    auto_max_integrity: usize,
    #[arg(long, default_value_t = AutoThresholds::default().max_slack)]
    auto_max_slack: u64,
}

#[derive(Subcommand)]
enum GenKind {
    /// Connected G(n, p).
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    Cograph {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Random k-tree with some edges removed, kept connected.
    Ktree {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        removals: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    Split {
        #[arg(long)]
        clique: usize,
        #[arg(long)]
        independent: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Random X3C instance reduced to a split graph with its budget.
    X3c {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        planted: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also writes the X3C instance itself.
        #[arg(long)]
        instance: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<GraphFile> {
    parse_graph(&read(path)?)
}

fn cmd_solve(a: SolveArgs) -> Result<ExitCode> {
    let file = load_graph(&a.graph)?;
    let g = &file.graph;
    let td = match &a.td {
        Some(p) => Some(parse_td(&read(p)?, g.n())?),
        None => None,
    };
    let thresholds = AutoThresholds {
        max_modules: a.auto_max_modules,
        max_width: a.auto_max_width,
        max_integrity: a.auto_max_integrity,
        max_slack: a.auto_max_slack,
    };
    let budget = a.budget.or(file.budget);
    let out = solve::run(g, a.algo, budget, td.as_ref(), &thresholds)?;
    if let Some(path) = &a.emit_tree {
        match &out.tree {
            Some(t) => write(path, &format_tree(t))?,
            None => eprintln!("note: the {} solver produces no witness tree", out.report.algo),
        }
    }
    if a.json {
        println!("{}", serde_json::to_string(&out.report).expect("reports serialize"));
    } else {
        println!("{}", out.report.line());
    }
    Ok(if out.report.decision == Some(false) {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_gen(out: Option<PathBuf>, kind: GenKind) -> Result<ExitCode> {
    let (g, comments): (Graph, Vec<String>) = match kind {
        GenKind::Random { n, p, seed } => (gen_random_connected(n, p, seed)?, vec![format!("random n={n} p={p} seed={seed}")]),
        GenKind::Cograph { n, seed } => (gen_cograph(n, seed)?.graph, vec![format!("cograph n={n} seed={seed}")]),
        GenKind::Ktree { n, k, removals, seed } => (
            gen_partial_ktree(n, k, removals, seed)?,
            vec![format!("partial {k}-tree n={n} removals={removals} seed={seed}")],
        ),
        GenKind::Split { clique, independent, p, seed } => (
            gen_split(clique, independent, p, seed)?,
            vec![format!("split clique={clique} independent={independent} p={p} seed={seed}")],
        ),
        GenKind::X3c { q, s, planted, seed, instance } => {
            let x = gen_x3c(q, s, planted, seed)?;
            if let Some(p) = instance {
                write(&p, &format_x3c(&x))?;
            }
            let r = reduce_x3c(&x)?;
            let note = format!("x3c q={q} s={s} planted={planted} seed={seed}");
            (r.graph, vec![note, format!("budget {}", r.budget)])
        }
    };
    emit(&out, &format_graph(&g, &comments))?;
    Ok(ExitCode::SUCCESS)
}

/// Every way `tree` fails to be a spanning tree of `g`.
fn tree_violations(g: &Graph, tree: &Graph) -> Vec<String> {
    let mut v = Vec::new();
    if tree.n() != g.n() {
        v.push(format!("tree has {} vertices, graph has {}", tree.n(), g.n()));
        return v;
    }
    if tree.m() + 1 != g.n() {
        v.push(format!("tree has {} edges, a spanning tree needs {}", tree.m(), g.n() - 1));
    }
    for (a, b) in tree.edges() {
        if !g.has_edge(a, b) {
            v.push(format!("edge {} {} is not in the graph", a + 1, b + 1));
        }
    }
    let comps = tree.components();
    if comps.len() > 1 {
        v.push(format!("tree has {} components", comps.len()));
    }
    if tree.m() + comps.len() > tree.n() {
        v.push("tree contains a cycle".into());
    }
    v
}

fn cmd_check(graph: &Path, tree: Option<PathBuf>, td: Option<PathBuf>) -> Result<ExitCode> {
    let g = load_graph(graph)?.graph;
    let violations = match (tree, td) {
        (Some(t), _) => {
            let t = load_graph(&t)?.graph;
            let v = tree_violations(&g, &t);
            if v.is_empty() {
                println!("ok: spanning tree with W={}", wiener_graph(&t)?);
            }
            v
        }
        (None, Some(p)) => {
            let td = parse_td(&read(&p)?, g.n())?;
            match td.validate(&g) {
                Ok(()) => {
                    println!("ok: tree decomposition of width {}", td.width());
                    vec![]
                }
                Err(e) => vec![e.to_string()],
            }
        }
        (None, None) => unreachable!("clap requires one of --tree and --td"),
    };
    for v in &violations {
        println!("violation: {v}");
    }
    Ok(if violations.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Solve(a) => cmd_solve(a),
        Cmd::Wiener { file } => {
            println!("{}", wiener_graph(&load_graph(&file)?.graph)?);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Gen { out, kind } => cmd_gen(out, kind),
        Cmd::Check { graph, tree, td } => cmd_check(&graph, tree, td),
        Cmd::Decompose { graph } => {
            let g = load_graph(&graph)?.graph;
            print!("{}", format_td(&heuristic_tree_decomposition(&g), g.n()));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.max_oracle_n {
        std::env::set_var(MAX_ORACLE_N_ENV, n.to_string());
    }
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads.max(1)).build_global() {
        eprintln!("madst: thread pool: {e}");
        return ExitCode::from(2);
    }
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("madst: {e}");
            ExitCode::from(2)
        }
    }
}
