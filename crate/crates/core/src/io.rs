//! Text formats: DIMACS-like graphs and trees, PACE tree decompositions, X3C
//! instances, and a DOT emitter. Files use 1-based vertex ids.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::gen::X3CInstance;
use crate::graph::{Graph, SpanningTree};
use crate::treewidth::TreeDecomposition;

/// A graph file together with the optional `c budget` and `c wiener` comments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphFile {
    pub graph: Graph,
    pub budget: Option<u64>,
    pub wiener: Option<u64>,
}

fn tokens(line: &str) -> Vec<&str> {
    line.split_whitespace().collect()
}

fn num<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| Error::parse(line, format!("bad {what} `{tok}`")))
}

fn vertex(tok: &str, line: usize, n: usize) -> Result<usize> {
    let v: usize = num(tok, line, "vertex id")?;
    if v == 0 || v > n {
        return Err(Error::parse(line, format!("vertex {v} outside 1..={n}")));
    }
    Ok(v - 1)
}

pub fn parse_graph(text: &str) -> Result<GraphFile> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let (mut budget, mut wiener) = (None, None);
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let t = tokens(raw);
        match t.first().copied() {
            None => {}
            Some("c") => match t.get(1).copied() {
                Some("budget") if t.len() == 3 => budget = Some(num(t[2], line, "budget")?),
                Some("wiener") if t.len() == 3 => wiener = Some(num(t[2], line, "wiener index")?),
                _ => {}
            },
            Some("p") => {
                if header.is_some() {
                    return Err(Error::parse(line, "duplicate header"));
                }
                if t.len() != 4 || t[1] != "edge" {
                    return Err(Error::parse(line, "expected `p edge <n> <m>`"));
                }
                header = Some((num(t[2], line, "vertex count")?, num(t[3], line, "edge count")?));
            }
            Some("e") => {
                let (n, _) = header.ok_or_else(|| Error::parse(line, "edge before header"))?;
                if t.len() != 3 {
                    return Err(Error::parse(line, "expected `e <u> <v>`"));
                }
                edges.push((vertex(t[1], line, n)?, vertex(t[2], line, n)?));
            }
            Some(other) => return Err(Error::parse(line, format!("unknown line type `{other}`"))),
        }
    }
    let (n, m) = header.ok_or_else(|| Error::parse(0, "missing `p edge` header"))?;
    if edges.len() != m {
        return Err(Error::parse(
            0,
            format!("header announces {m} edges, found {}", edges.len()),
        ));
    }
    let graph = Graph::from_edges(n, &edges).map_err(|e| Error::parse(0, e.to_string()))?;
    Ok(GraphFile {
        graph,
        budget,
        wiener,
    })
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<GraphFile> {
    parse_graph(&std::fs::read_to_string(path)?)
}

fn write_edges(out: &mut String, n: usize, edges: &[(usize, usize)]) {
    let _ = writeln!(out, "p edge {} {}", n, edges.len());
    for &(u, v) in edges {
        let _ = writeln!(out, "e {} {}", u + 1, v + 1);
    }
}

/// Graph text with edges in lexicographic order, then any extra comment lines.
pub fn format_graph(g: &Graph, comments: &[String]) -> String {
    let mut out = String::new();
    write_edges(&mut out, g.n(), &g.edge_list());
    for c in comments {
        let _ = writeln!(out, "c {c}");
    }
    out
}

pub fn format_tree(t: &SpanningTree) -> String {
    let mut out = String::new();
    write_edges(&mut out, t.n(), t.edges());
    let _ = writeln!(out, "c wiener {}", t.wiener());
    out
}

/// DOT text for `g`; edges of `highlight` are drawn bold.
pub fn format_dot(g: &Graph, highlight: Option<&SpanningTree>) -> String {
    let mut out = String::from("graph {\n");
    for v in 0..g.n() {
        let _ = writeln!(out, "  {};", v + 1);
    }
    for (u, v) in g.edges() {
        let bold = highlight.is_some_and(|t| t.contains_edge(u, v));
        let attr = if bold { " [style=bold]" } else { "" };
        let _ = writeln!(out, "  {} -- {}{};", u + 1, v + 1, attr);
    }
    out.push_str("}\n");
    out
}

/// Parses a PACE `.td` file for a graph on `n` vertices. Structural validity
/// against the graph is checked separately.
pub fn parse_td(text: &str, n: usize) -> Result<TreeDecomposition> {
    let mut header: Option<usize> = None;
    let mut bags: Vec<Option<Vec<usize>>> = Vec::new();
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let t = tokens(raw);
        match t.first().copied() {
            None | Some("c") => {}
            Some("s") => {
                if t.len() != 5 || t[1] != "td" {
                    return Err(Error::parse(line, "expected `s td <bags> <width+1> <n>`"));
                }
                let count: usize = num(t[2], line, "bag count")?;
                let vertices: usize = num(t[4], line, "vertex count")?;
                if vertices != n {
                    return Err(Error::parse(
                        line,
                        format!("decomposition is for {vertices} vertices, graph has {n}"),
                    ));
                }
                header = Some(count);
                bags = vec![None; count];
            }
            Some("b") => {
                let count = header.ok_or_else(|| Error::parse(line, "bag before header"))?;
                if t.len() < 2 {
                    return Err(Error::parse(line, "bag line without id"));
                }
                let id = vertex(t[1], line, count)?;
                if bags[id].is_some() {
                    return Err(Error::parse(line, format!("bag {} defined twice", id + 1)));
                }
                let mut bag = t[2..]
                    .iter()
                    .map(|tok| vertex(tok, line, n))
                    .collect::<Result<Vec<_>>>()?;
                bag.sort_unstable();
                bag.dedup();
                bags[id] = Some(bag);
            }
            Some(_) => {
                let count = header.ok_or_else(|| Error::parse(line, "edge before header"))?;
                if t.len() != 2 {
                    return Err(Error::parse(line, "expected `<bag> <bag>`"));
                }
                edges.push((vertex(t[0], line, count)?, vertex(t[1], line, count)?));
            }
        }
    }
    if header.is_none() {
        return Err(Error::parse(0, "missing `s td` header"));
    }
    let bags = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or_else(|| Error::parse(0, format!("bag {} missing", i + 1))))
        .collect::<Result<Vec<_>>>()?;
    Ok(TreeDecomposition::new(bags, edges))
}

pub fn format_td(td: &TreeDecomposition, n: usize) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "s td {} {} {}", td.bags().len(), td.width() + 1, n);
    for (i, bag) in td.bags().iter().enumerate() {
        let _ = write!(out, "b {}", i + 1);
        for v in bag {
            let _ = write!(out, " {}", v + 1);
        }
        out.push('\n');
    }
    for &(a, b) in td.edges() {
        let _ = writeln!(out, "{} {}", a + 1, b + 1);
    }
    out
}

pub fn parse_x3c(text: &str) -> Result<X3CInstance> {
    let mut header: Option<(usize, usize)> = None;
    let mut sets = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let t = tokens(raw);
        match t.first().copied() {
            None | Some("c") => {}
            Some("x3c") => {
                if t.len() != 3 {
                    return Err(Error::parse(line, "expected `x3c <3q> <s>`"));
                }
                header = Some((num(t[1], line, "universe size")?, num(t[2], line, "set count")?));
            }
            Some(_) => {
                let (u, _) = header.ok_or_else(|| Error::parse(line, "set before header"))?;
                if t.len() != 3 {
                    return Err(Error::parse(line, "a set needs exactly three elements"));
                }
                sets.push([
                    vertex(t[0], line, u)?,
                    vertex(t[1], line, u)?,
                    vertex(t[2], line, u)?,
                ]);
            }
        }
    }
    let (u, s) = header.ok_or_else(|| Error::parse(0, "missing `x3c` header"))?;
    if sets.len() != s {
        return Err(Error::parse(0, format!("header announces {s} sets, found {}", sets.len())));
    }
    if u % 3 != 0 {
        return Err(Error::parse(1, format!("universe size {u} is not a multiple of 3")));
    }
    X3CInstance::new(u / 3, sets).map_err(|e| Error::parse(0, e.to_string()))
}

pub fn format_x3c(x: &X3CInstance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "x3c {} {}", 3 * x.q(), x.sets().len());
    for s in x.sets() {
        let _ = writeln!(out, "{} {} {}", s[0] + 1, s[1] + 1, s[2] + 1);
    }
    out
}
