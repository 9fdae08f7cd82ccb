//! Line-oriented text formats.
//!
//! Graph file:
//!
//! ```text
//! # comment
//! n m
//! u v            (m edge lines, 0-based ids)
//! id B|R         (one per colored node)
//! terminals id...
//! ```
//!
//! Labeling file: one `u v t1 t2 ...` line per labeled edge.
//!
//! Tree file: `root id`, then one `node parent weight` line per non-root node.
//!
//! Everything after `#` on a line is ignored.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;
use std::path::Path;

use fml_core::frt::WeightedTree;
use fml_core::{Color, ColoredGraph, Edge, NodeId, TemporalLabeling, Timestamp};

use crate::error::{CliError, CliResult};

/// A parse failure at a 1-based line number (0 when not tied to a line).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError { line, message: message.into() }
    }

    pub fn in_file(self, path: &Path) -> CliError {
        CliError::Parse { path: path.display().to_string(), line: self.line, message: self.message }
    }
}

type ParseResult<T> = Result<T, ParseError>;

/// Non-empty lines with comments removed, as `(line number, tokens)`.
fn data_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let content = line.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        (!tokens.is_empty()).then_some((i + 1, tokens))
    })
}

fn number<T: std::str::FromStr>(line: usize, token: &str, what: &str) -> ParseResult<T> {
    token.parse().map_err(|_| ParseError::new(line, format!("expected {what}, found `{token}`")))
}

fn node(line: usize, token: &str, n: usize) -> ParseResult<NodeId> {
    let v: NodeId = number(line, token, "a node id")?;
    if v >= n {
        return Err(ParseError::new(line, format!("node {v} out of range (n = {n})")));
    }
    Ok(v)
}

pub fn parse_graph(text: &str) -> ParseResult<ColoredGraph> {
    let mut lines = data_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| ParseError::new(0, "empty graph file"))?;
    if header.len() != 2 {
        return Err(ParseError::new(hl, "header must be `n m`"));
    }
    let n: usize = number(hl, header[0], "node count")?;
    let m: usize = number(hl, header[1], "edge count")?;

    let mut edges = Vec::with_capacity(m);
    let mut seen = HashSet::with_capacity(m);
    let mut last_line = hl;
    for k in 0..m {
        let (ln, toks) = lines
            .next()
            .ok_or_else(|| ParseError::new(last_line, format!("expected {m} edges, found {k}")))?;
        last_line = ln;
        if toks.len() != 2 {
            return Err(ParseError::new(ln, "edge line must be `u v`"));
        }
        let (u, v) = (node(ln, toks[0], n)?, node(ln, toks[1], n)?);
        let e = Edge::new(u, v).ok_or_else(|| ParseError::new(ln, format!("self-loop at node {u}")))?;
        if !seen.insert(e) {
            return Err(ParseError::new(ln, format!("duplicate edge {u} {v}")));
        }
        edges.push((u, v));
    }

    let mut colors = vec![Color::Uncolored; n];
    let mut terminals: Option<Vec<NodeId>> = None;
    for (ln, toks) in lines {
        last_line = ln;
        if toks[0] == "terminals" {
            if terminals.is_some() {
                return Err(ParseError::new(ln, "second `terminals` line"));
            }
            let ts = toks[1..].iter().map(|t| node(ln, t, n)).collect::<ParseResult<Vec<_>>>()?;
            if ts.is_empty() {
                return Err(ParseError::new(ln, "`terminals` needs at least one node"));
            }
            terminals = Some(ts);
            continue;
        }
        if toks.len() != 2 {
            return Err(ParseError::new(ln, "color line must be `id B` or `id R`"));
        }
        let v = node(ln, toks[0], n)?;
        let c = match toks[1] {
            "B" => Color::Blue,
            "R" => Color::Red,
            other => return Err(ParseError::new(ln, format!("unknown color `{other}` (expected B or R)"))),
        };
        if colors[v] != Color::Uncolored {
            return Err(ParseError::new(ln, format!("node {v} colored twice")));
        }
        colors[v] = c;
    }
    let terminals = terminals.ok_or_else(|| ParseError::new(last_line, "missing `terminals` line"))?;
    ColoredGraph::new(n, edges, colors, terminals).map_err(|e| ParseError::new(0, e.to_string()))
}

pub fn write_graph(graph: &ColoredGraph, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    let _ = writeln!(out, "{} {}", graph.n(), graph.m());
    for e in graph.edges() {
        let _ = writeln!(out, "{} {}", e.lo(), e.hi());
    }
    for (v, c) in graph.colors().iter().enumerate() {
        match c {
            Color::Blue => {
                let _ = writeln!(out, "{v} B");
            }
            Color::Red => {
                let _ = writeln!(out, "{v} R");
            }
            Color::Uncolored => {}
        }
    }
    out.push_str("terminals");
    for t in graph.terminals() {
        let _ = write!(out, " {t}");
    }
    out.push('\n');
    out
}

pub fn parse_labeling(text: &str) -> ParseResult<TemporalLabeling> {
    let mut labeling = TemporalLabeling::new();
    for (ln, toks) in data_lines(text) {
        if toks.len() < 3 {
            return Err(ParseError::new(ln, "labeling line must be `u v t1 [t2 ...]`"));
        }
        let u: NodeId = number(ln, toks[0], "a node id")?;
        let v: NodeId = number(ln, toks[1], "a node id")?;
        let e = Edge::new(u, v).ok_or_else(|| ParseError::new(ln, format!("self-loop at node {u}")))?;
        for t in &toks[2..] {
            let t: Timestamp = number(ln, t, "a timestamp")?;
            labeling.insert_edge(e, t).map_err(|err| ParseError::new(ln, err.to_string()))?;
        }
    }
    Ok(labeling)
}

pub fn write_labeling(labeling: &TemporalLabeling, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    for (e, ts) in labeling.iter() {
        let _ = write!(out, "{} {}", e.lo(), e.hi());
        for t in ts {
            let _ = write!(out, " {t}");
        }
        out.push('\n');
    }
    out
}

pub fn parse_tree(text: &str) -> ParseResult<WeightedTree> {
    let mut lines = data_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| ParseError::new(0, "empty tree file"))?;
    if header.len() != 2 || header[0] != "root" {
        return Err(ParseError::new(hl, "tree file must start with `root id`"));
    }
    let root: NodeId = number(hl, header[1], "a node id")?;
    let mut records = BTreeMap::new();
    for (ln, toks) in lines {
        if toks.len() != 3 {
            return Err(ParseError::new(ln, "tree line must be `node parent weight`"));
        }
        let v: NodeId = number(ln, toks[0], "a node id")?;
        let p: NodeId = number(ln, toks[1], "a node id")?;
        let w: f64 = number(ln, toks[2], "a weight")?;
        if records.insert(v, (p, w, ln)).is_some() {
            return Err(ParseError::new(ln, format!("node {v} listed twice")));
        }
    }
    let n = records.len() + 1;
    let mut parent = vec![None; n];
    let mut weight = vec![0.0; n];
    for (&v, &(p, w, ln)) in &records {
        if v >= n || p >= n {
            return Err(ParseError::new(ln, format!("node ids must be 0..{n}")));
        }
        parent[v] = Some(p);
        weight[v] = w;
    }
    WeightedTree::from_parents(root, parent, weight).map_err(|e| ParseError::new(0, e.to_string()))
}

pub fn write_tree(tree: &WeightedTree) -> String {
    let mut out = format!("root {}\n", tree.root());
    for v in 0..tree.n() {
        if let Some(p) = tree.parent(v) {
            let _ = writeln!(out, "{v} {p} {}", tree.weight(v));
        }
    }
    out
}

/// Graph read from a raw edge list, with the original id of every node.
#[derive(Clone, Debug, PartialEq)]
pub struct Ingested {
    pub graph: ColoredGraph,
    /// `original_ids[v]` is the id node `v` had in the input.
    pub original_ids: Vec<u64>,
}

/// Reads a raw `u v` edge list with arbitrary integer ids (extra columns,
/// self-loops and repeated or reversed edges are ignored), keeps the
/// connected component of `terminal`, and renumbers it densely in increasing
/// original id. `colors` holds `id B|R` lines; a colored node outside the
/// terminal's component is an error.
pub fn ingest_edge_list(edges: &str, colors: Option<&str>, terminal: u64) -> ParseResult<Ingested> {
    let mut adj: HashMap<u64, Vec<u64>> = HashMap::new();
    let mut seen = HashSet::new();
    for (ln, toks) in data_lines(edges) {
        if toks.len() < 2 {
            return Err(ParseError::new(ln, "edge line must start with `u v`"));
        }
        let u: u64 = number(ln, toks[0], "a node id")?;
        let v: u64 = number(ln, toks[1], "a node id")?;
        if u == v || !seen.insert((u.min(v), u.max(v))) {
            continue;
        }
        adj.entry(u).or_default().push(v);
        adj.entry(v).or_default().push(u);
    }
    if !adj.contains_key(&terminal) {
        return Err(ParseError::new(0, format!("terminal {terminal} has no edges")));
    }
    let mut component = HashSet::from([terminal]);
    let mut stack = vec![terminal];
    while let Some(u) = stack.pop() {
        for &w in &adj[&u] {
            if component.insert(w) {
                stack.push(w);
            }
        }
    }
    let mut original_ids: Vec<u64> = component.iter().copied().collect();
    original_ids.sort_unstable();
    let index: HashMap<u64, NodeId> = original_ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let mut edge_list = Vec::new();
    for &(u, v) in &seen {
        if let (Some(&a), Some(&b)) = (index.get(&u), index.get(&v)) {
            edge_list.push((a, b));
        }
    }
    edge_list.sort_unstable();
    let mut color_vec = vec![Color::Uncolored; original_ids.len()];
    if let Some(text) = colors {
        for (ln, toks) in data_lines(text) {
            if toks.len() != 2 {
                return Err(ParseError::new(ln, "color line must be `id B` or `id R`"));
            }
            let id: u64 = number(ln, toks[0], "a node id")?;
            let c = match toks[1] {
                "B" => Color::Blue,
                "R" => Color::Red,
                other => return Err(ParseError::new(ln, format!("unknown color `{other}` (expected B or R)"))),
            };
            let v = *index.get(&id).ok_or_else(|| {
                ParseError::new(ln, format!("colored node {id} is not connected to terminal {terminal}"))
            })?;
            color_vec[v] = c;
        }
    }
    let graph = ColoredGraph::new(original_ids.len(), edge_list, color_vec, vec![index[&terminal]])
        .map_err(|e| ParseError::new(0, e.to_string()))?;
    Ok(Ingested { graph, original_ids })
}

pub fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

pub fn read_graph(path: &Path) -> CliResult<ColoredGraph> {
    parse_graph(&read_text(path)?).map_err(|e| e.in_file(path))
}

pub fn read_labeling(path: &Path) -> CliResult<TemporalLabeling> {
    parse_labeling(&read_text(path)?).map_err(|e| e.in_file(path))
}

pub fn read_tree(path: &Path) -> CliResult<WeightedTree> {
    parse_tree(&read_text(path)?).map_err(|e| e.in_file(path))
}
