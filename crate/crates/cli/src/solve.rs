use std::time::Instant;

use clap::ValueEnum;
use madst_core::above::{above_optimum, solve_above};
use madst_core::graph::best_bfs_tree;
use madst_core::integrity::{solve_vertex_integrity, vi_witness};
use madst_core::modular::{modular_partition, solve_modular};
use madst_core::oracle::{mad_tree_bruteforce, max_oracle_n};
use madst_core::treewidth::{heuristic_tree_decomposition, solve_treewidth, TreeDecomposition};
use madst_core::{wiener_graph, Error, Graph, Result, SpanningTree};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Oracle,
    Modular,
    Treewidth,
    Above,
    Vi,
    Auto,
}

impl Algo {
    pub fn name(self) -> &'static str {
        match self {
            Algo::Oracle => "oracle",
            Algo::Modular => "modular",
            Algo::Treewidth => "treewidth",
            Algo::Above => "above",
            Algo::Vi => "vi",
            Algo::Auto => "auto",
        }
    }
}

/// Parameter ceilings used by `--algo auto`, tried in this order.
#[derive(Debug, Clone, Copy)]
pub struct AutoThresholds {
    /// Largest modular partition handed to the modular solver.
    pub max_modules: usize,
    /// Largest heuristic treewidth handed to the treewidth solver.
    pub max_width: usize,
    /// Largest vertex integrity handed to the vertex-integrity solver.
    pub max_integrity: usize,
    /// Largest gap between the best BFS tree and `W(G)` handed to the
    /// above-guarantee solver.
    pub max_slack: u64,
}

impl Default for AutoThresholds {
    fn default() -> Self {
        AutoThresholds {
            max_modules: 8,
            max_width: 4,
            max_integrity: 4,
            max_slack: 12,
        }
    }
}

/// Vertex integrity is only estimated up to this many vertices; the
/// separator search is exhaustive.
const AUTO_VI_MAX_N: usize = 20;

/// Picks a solver for `g` and says why.
pub fn choose(g: &Graph, t: &AutoThresholds) -> Result<(Algo, String)> {
    if !g.is_connected() {
        return Err(Error::DisconnectedGraph);
    }
    if g.n() < 2 {
        return Ok((Algo::Oracle, "single vertex".into()));
    }
    let k = modular_partition(g)?.k();
    if k <= t.max_modules {
        return Ok((Algo::Modular, format!("modular partition size {k}")));
    }
    let width = heuristic_tree_decomposition(g).width();
    if width <= t.max_width {
        return Ok((Algo::Treewidth, format!("heuristic treewidth {width}")));
    }
    if g.n() <= AUTO_VI_MAX_N {
        let vi = vi_witness(g)?.k;
        if vi <= t.max_integrity {
            return Ok((Algo::Vi, format!("vertex integrity {vi}")));
        }
    }
    let slack = best_bfs_tree(g)?.1 - wiener_graph(g)?;
    if slack <= t.max_slack {
        return Ok((Algo::Above, format!("greedy slack {slack}")));
    }
    if g.n() <= max_oracle_n() {
        return Ok((Algo::Oracle, format!("{} vertices", g.n())));
    }
    Err(Error::AlgorithmUnavailable(format!(
        "k={k}, width={width}, slack={slack}, n={} exceed every threshold",
        g.n()
    )))
}

/// Machine-readable result of `solve`. Witness edges are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub algo: String,
    pub n: usize,
    pub m: usize,
    #[serde(rename = "W")]
    pub wiener: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decision: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    pub millis: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_edges: Option<Vec<[usize; 2]>>,
}

impl Report {
    /// One-line text form: `W=10 yes`, `W=9`, or a bare `no` when a
    /// decision procedure rejected without computing the optimum.
    pub fn line(&self) -> String {
        let verdict = self.decision.map(|d| if d { "yes" } else { "no" });
        match (self.wiener, verdict) {
            (Some(w), Some(v)) => format!("W={w} {v}"),
            (Some(w), None) => format!("W={w}"),
            (None, Some(v)) => v.to_string(),
            (None, None) => "unknown".into(),
        }
    }
}

pub struct Outcome {
    pub report: Report,
    pub tree: Option<SpanningTree>,
}

pub fn run(g: &Graph, algo: Algo, budget: Option<u64>, td: Option<&TreeDecomposition>, t: &AutoThresholds) -> Result<Outcome> {
    let start = Instant::now();
    let algo = match algo {
        Algo::Auto => {
            let (chosen, why) = choose(g, t)?;
            eprintln!("auto: {} ({why})", chosen.name());
            chosen
        }
        a => a,
    };
    let decide = |w: u64| budget.map(|b| w <= b);
    let (wiener, decision, tree) = match algo {
        Algo::Oracle => {
            let (tree, w) = mad_tree_bruteforce(g)?;
            (Some(w), decide(w), Some(tree))
        }
        Algo::Modular => {
            let s = solve_modular(g, budget)?;
            (Some(s.wiener), s.decision, Some(s.tree))
        }
        Algo::Treewidth => {
            let s = solve_treewidth(g, td, budget)?;
            (Some(s.wiener), s.decision, None)
        }
        Algo::Vi => {
            let s = solve_vertex_integrity(g, budget)?;
            (Some(s.wiener), s.decision, Some(s.tree))
        }
        Algo::Above => match budget {
            Some(b) => {
                let out = solve_above(g, b)?;
                let w = out.witness.as_ref().map(SpanningTree::wiener);
                (w, Some(out.decision), out.witness)
            }
            None => {
                let ub = best_bfs_tree(g)?.1;
                let s = above_optimum(g, Some(ub))?.expect("the best BFS tree meets its own bound");
                (Some(s.wiener), None, s.tree)
            }
        },
        Algo::Auto => unreachable!("resolved above"),
    };
    let report = Report {
        algo: algo.name().into(),
        n: g.n(),
        m: g.m(),
        wiener,
        decision,
        budget,
        millis: start.elapsed().as_millis() as u64,
        witness_edges: tree.as_ref().map(|t| t.edges().iter().map(|&(u, v)| [u + 1, v + 1]).collect()),
    };
    Ok(Outcome { report, tree })
}
