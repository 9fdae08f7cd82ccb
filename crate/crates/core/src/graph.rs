//! Colored static graphs, temporal labelings and reachability.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Dense node identifier in `0..n`.
pub type NodeId = usize;

/// Positive integer activation time.
pub type Timestamp = u64;

/// Group tag of a node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Color {
    Blue,
    Red,
    #[default]
    Uncolored,
}

/// Undirected edge stored with its endpoints in increasing order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Edge {
    lo: NodeId,
    hi: NodeId,
}

impl Edge {
    /// Returns `None` for a self-loop.
    pub fn new(u: NodeId, v: NodeId) -> Option<Self> {
        match u.cmp(&v) {
            core::cmp::Ordering::Less => Some(Edge { lo: u, hi: v }),
            core::cmp::Ordering::Greater => Some(Edge { lo: v, hi: u }),
            core::cmp::Ordering::Equal => None,
        }
    }

    pub fn lo(&self) -> NodeId {
        self.lo
    }

    pub fn hi(&self) -> NodeId {
        self.hi
    }

    pub fn endpoints(&self) -> (NodeId, NodeId) {
        (self.lo, self.hi)
    }

    /// The endpoint that is not `u`, if `u` is an endpoint.
    pub fn other(&self, u: NodeId) -> Option<NodeId> {
        if u == self.lo {
            Some(self.hi)
        } else if u == self.hi {
            Some(self.lo)
        } else {
            None
        }
    }
}

/// A single timestamped activation of a static edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TemporalEdge {
    pub timestamp: Timestamp,
    pub edge: Edge,
}

/// Simple undirected graph with a group tag per node and a nonempty terminal set.
#[derive(Clone, Debug, PartialEq)]
pub struct ColoredGraph {
    adjacency: Vec<Vec<NodeId>>,
    edges: Vec<Edge>,
    colors: Vec<Color>,
    terminals: Vec<NodeId>,
}

impl ColoredGraph {
    /// Builds a graph and rejects self-loops, duplicate edges, out-of-range
    /// ids, and an empty or out-of-range terminal set.
    pub fn new<I>(n: usize, edges: I, colors: Vec<Color>, terminals: Vec<NodeId>) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        if colors.len() != n {
            return Err(Error::InvalidGraph(format!("{} colors for {} nodes", colors.len(), n)));
        }
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::NodeOutOfRange(u.max(v), n));
            }
            let e = Edge::new(u, v).ok_or_else(|| Error::InvalidGraph(format!("self-loop at node {u}")))?;
            if !set.insert(e) {
                return Err(Error::InvalidGraph(format!("duplicate edge {{{u}, {v}}}")));
            }
        }
        let edges: Vec<Edge> = set.into_iter().collect();
        let mut adjacency = vec![Vec::new(); n];
        for e in &edges {
            adjacency[e.lo].push(e.hi);
            adjacency[e.hi].push(e.lo);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let mut g = ColoredGraph { adjacency, edges, colors, terminals: Vec::new() };
        g.set_terminals(terminals)?;
        Ok(g)
    }

    /// Uncolored graph with the given single terminal.
    pub fn uncolored<I>(n: usize, edges: I, terminal: NodeId) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        Self::new(n, edges, vec![Color::Uncolored; n], vec![terminal])
    }

    pub fn set_terminals(&mut self, mut terminals: Vec<NodeId>) -> Result<()> {
        terminals.sort_unstable();
        terminals.dedup();
        if terminals.is_empty() {
            return Err(Error::InvalidGraph("terminal set is empty".into()));
        }
        if let Some(&t) = terminals.iter().find(|&&t| t >= self.n()) {
            return Err(Error::NodeOutOfRange(t, self.n()));
        }
        self.terminals = terminals;
        Ok(())
    }

    pub fn set_colors(&mut self, colors: Vec<Color>) -> Result<()> {
        if colors.len() != self.n() {
            return Err(Error::InvalidGraph(format!("{} colors for {} nodes", colors.len(), self.n())));
        }
        self.colors = colors;
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Edges in increasing `(lo, hi)` order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Neighbors of `u` in increasing id order.
    pub fn neighbors(&self, u: NodeId) -> &[NodeId] {
        &self.adjacency[u]
    }

    pub fn has_edge(&self, e: Edge) -> bool {
        self.adjacency.get(e.lo).is_some_and(|adj| adj.binary_search(&e.hi).is_ok())
    }

    pub fn color(&self, u: NodeId) -> Color {
        self.colors[u]
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    pub fn terminals(&self) -> &[NodeId] {
        &self.terminals
    }

    /// The terminal of a single-terminal graph.
    pub fn single_terminal(&self) -> Result<NodeId> {
        match self.terminals.as_slice() {
            [t] => Ok(*t),
            ts => Err(Error::Unsupported(format!("expected one terminal, found {}", ts.len()))),
        }
    }

    pub fn count(&self, color: Color) -> usize {
        self.colors.iter().filter(|&&c| c == color).count()
    }

    pub fn blue_count(&self) -> usize {
        self.count(Color::Blue)
    }

    pub fn red_count(&self) -> usize {
        self.count(Color::Red)
    }

    pub fn nodes_with(&self, color: Color) -> impl Iterator<Item = NodeId> + '_ {
        self.colors.iter().enumerate().filter(move |(_, &c)| c == color).map(|(u, _)| u)
    }

    fn check_node(&self, u: NodeId) -> Result<()> {
        if u < self.n() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange(u, self.n()))
        }
    }
}

/// Map from static edges to sets of timestamps.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TemporalLabeling {
    assignments: BTreeMap<Edge, BTreeSet<Timestamp>>,
}

impl TemporalLabeling {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds timestamp `t` to edge `{u, v}`. Returns whether it was new.
    pub fn insert(&mut self, u: NodeId, v: NodeId, t: Timestamp) -> Result<bool> {
        let e = Edge::new(u, v).ok_or_else(|| Error::InvalidLabeling(format!("self-loop at node {u}")))?;
        self.insert_edge(e, t)
    }

    pub fn insert_edge(&mut self, e: Edge, t: Timestamp) -> Result<bool> {
        if t == 0 {
            return Err(Error::InvalidLabeling(format!("timestamp 0 on edge {{{}, {}}}", e.lo, e.hi)));
        }
        Ok(self.assignments.entry(e).or_default().insert(t))
    }

    /// Timestamps on `e` (empty if unlabeled).
    pub fn timestamps(&self, e: Edge) -> impl Iterator<Item = Timestamp> + '_ {
        self.assignments.get(&e).into_iter().flat_map(|s| s.iter().copied())
    }

    /// Total number of assigned timestamps.
    pub fn size(&self) -> usize {
        self.assignments.values().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.size() == 0
    }

    /// Labeled edges with their (nonempty) timestamp sets, in edge order.
    pub fn iter(&self) -> impl Iterator<Item = (Edge, &BTreeSet<Timestamp>)> {
        self.assignments.iter().filter(|(_, ts)| !ts.is_empty()).map(|(e, ts)| (*e, ts))
    }

    pub fn max_timestamp(&self) -> Option<Timestamp> {
        self.assignments.values().filter_map(|s| s.last().copied()).max()
    }

    /// Checks that every labeled edge exists in `graph`.
    pub fn validate(&self, graph: &ColoredGraph) -> Result<()> {
        for (e, _) in self.iter() {
            if !graph.has_edge(e) {
                return Err(Error::UnknownEdge(e.lo, e.hi));
            }
        }
        Ok(())
    }
}

/// Lists the temporal edges induced by `labeling`, ordered by timestamp and then edge.
pub fn induce_temporal_graph(graph: &ColoredGraph, labeling: &TemporalLabeling) -> Result<Vec<TemporalEdge>> {
    labeling.validate(graph)?;
    let mut out: Vec<TemporalEdge> = labeling
        .iter()
        .flat_map(|(edge, ts)| ts.iter().map(move |&timestamp| TemporalEdge { timestamp, edge }))
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// Dense node membership set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeSet {
    members: Vec<bool>,
}

impl NodeSet {
    pub fn contains(&self, u: NodeId) -> bool {
        self.members.get(u).copied().unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.members.iter().enumerate().filter(|(_, &b)| b).map(|(u, _)| u)
    }
}

/// Every node with a strictly-increasing temporal path to `target` (including
/// `target` itself).
///
/// Sweeps the temporal edges once in decreasing timestamp order, keeping for
/// each node the latest time at which it can still depart and reach
/// `target`. Edges sharing a timestamp never chain because the relaxation
/// test is strict.
pub fn reachable_set(graph: &ColoredGraph, labeling: &TemporalLabeling, target: NodeId) -> Result<NodeSet> {
    graph.check_node(target)?;
    let mut temporal = induce_temporal_graph(graph, labeling)?;
    temporal.reverse();

    // latest[v]: largest first-edge timestamp over temporal paths from v to target.
    let mut latest: Vec<Option<Timestamp>> = vec![None; graph.n()];
    let continues = |latest: &[Option<Timestamp>], v: NodeId, tau: Timestamp| {
        v == target || latest[v].is_some_and(|l| tau < l)
    };
    for te in temporal {
        let (u, v) = te.edge.endpoints();
        let tau = te.timestamp;
        if continues(&latest, v, tau) && u != target {
            latest[u] = Some(latest[u].map_or(tau, |l| l.max(tau)));
        }
        if continues(&latest, u, tau) && v != target {
            latest[v] = Some(latest[v].map_or(tau, |l| l.max(tau)));
        }
    }
    let mut members: Vec<bool> = latest.iter().map(Option::is_some).collect();
    members[target] = true;
    Ok(NodeSet { members })
}

/// Earliest arrival time at every node for temporal paths leaving `source`.
/// `source` itself gets `Some(0)`; unreachable nodes get `None`.
pub fn earliest_arrival(
    graph: &ColoredGraph,
    labeling: &TemporalLabeling,
    source: NodeId,
) -> Result<Vec<Option<Timestamp>>> {
    graph.check_node(source)?;
    let temporal = induce_temporal_graph(graph, labeling)?;
    let mut arrival: Vec<Option<Timestamp>> = vec![None; graph.n()];
    arrival[source] = Some(0);
    for te in temporal {
        let (u, v) = te.edge.endpoints();
        let tau = te.timestamp;
        let au = arrival[u];
        let av = arrival[v];
        if au.is_some_and(|a| a < tau) && av.is_none_or(|a| a > tau) {
            arrival[v] = Some(tau);
        }
        if av.is_some_and(|a| a < tau) && au.is_none_or(|a| a > tau) {
            arrival[u] = Some(tau);
        }
    }
    Ok(arrival)
}

/// Per-group counts of nodes reaching enough terminals.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Coverage {
    pub blue: usize,
    pub red: usize,
}

impl Coverage {
    pub fn total(&self) -> usize {
        self.blue + self.red
    }
}

/// Counts blue and red nodes that temporally reach at least `rho` terminals.
pub fn coverage_counts(graph: &ColoredGraph, labeling: &TemporalLabeling, rho: usize) -> Result<Coverage> {
    let terminals = graph.terminals();
    if rho == 0 || rho > terminals.len() {
        return Err(Error::InfeasibleRequirement(format!(
            "rho = {rho} with {} terminal(s)",
            terminals.len()
        )));
    }
    let mut hits = vec![0usize; graph.n()];
    for &t in terminals {
        for u in reachable_set(graph, labeling, t)?.iter() {
            hits[u] += 1;
        }
    }
    let mut cov = Coverage::default();
    for (u, &h) in hits.iter().enumerate() {
        if h >= rho {
            match graph.color(u) {
                Color::Blue => cov.blue += 1,
                Color::Red => cov.red += 1,
                Color::Uncolored => {}
            }
        }
    }
    Ok(cov)
}

/// Hop distances from `source`; `None` marks unreachable nodes.
pub fn bfs_distances(graph: &ColoredGraph, source: NodeId) -> Vec<Option<u32>> {
    let mut dist = vec![None; graph.n()];
    let mut queue = VecDeque::new();
    dist[source] = Some(0);
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap_or(0);
        for &w in graph.neighbors(u) {
            if dist[w].is_none() {
                dist[w] = Some(du + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// All-pairs hop distances. Pairs in different components have no distance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<Option<u32>>,
}

impl DistanceMatrix {
    /// Builds a matrix from row-major entries.
    pub fn from_rows(n: usize, data: Vec<Option<u32>>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::InvalidParameter(format!("{} entries for a {n}x{n} matrix", data.len())));
        }
        Ok(DistanceMatrix { n, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `None` is the infinite distance.
    pub fn get(&self, u: NodeId, v: NodeId) -> Option<u32> {
        self.data[u * self.n + v]
    }

    pub fn row(&self, u: NodeId) -> &[Option<u32>] {
        &self.data[u * self.n..(u + 1) * self.n]
    }

    pub fn is_connected(&self) -> bool {
        self.data.iter().all(Option::is_some)
    }

    /// Largest finite distance.
    pub fn diameter(&self) -> u32 {
        self.data.iter().flatten().copied().max().unwrap_or(0)
    }
}

pub fn all_pairs_hop_distance(graph: &ColoredGraph) -> DistanceMatrix {
    let n = graph.n();
    let mut data = Vec::with_capacity(n * n);
    for u in 0..n {
        data.extend(bfs_distances(graph, u));
    }
    DistanceMatrix { n, data }
}

/// Shortest path from `u` to `v` as directed steps `(from, to)`.
///
/// At every step the smallest-id neighbor one hop closer to `v` is taken, so
/// the output is deterministic.
pub fn shortest_path(graph: &ColoredGraph, u: NodeId, v: NodeId) -> Result<Vec<(NodeId, NodeId)>> {
    graph.check_node(u)?;
    graph.check_node(v)?;
    let to_target = bfs_distances(graph, v);
    let mut d = to_target[u].ok_or(Error::NoPath(u, v))?;
    let mut steps = Vec::with_capacity(d as usize);
    let mut cur = u;
    while d > 0 {
        let next = graph
            .neighbors(cur)
            .iter()
            .copied()
            .find(|&w| to_target[w] == Some(d - 1))
            .ok_or_else(|| Error::Internal(format!("BFS layer broken at node {cur}")))?;
        steps.push((cur, next));
        cur = next;
        d -= 1;
    }
    Ok(steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::vec::Vec as StdVec;

    const B: Color = Color::Blue;
    const R: Color = Color::Red;
    const U: Color = Color::Uncolored;

    fn labeling(entries: &[(NodeId, NodeId, Timestamp)]) -> TemporalLabeling {
        let mut l = TemporalLabeling::new();
        for &(u, v, t) in entries {
            l.insert(u, v, t).unwrap();
        }
        l
    }

    /// Enumerates every temporal walk with strictly increasing timestamps.
    fn brute_force_reaches(graph: &ColoredGraph, lab: &TemporalLabeling, target: NodeId) -> StdVec<bool> {
        let temporal = induce_temporal_graph(graph, lab).unwrap();
        fn walk(node: NodeId, last: Timestamp, target: NodeId, temporal: &[TemporalEdge]) -> bool {
            if node == target {
                return true;
            }
            temporal.iter().any(|te| {
                te.timestamp > last && te.edge.other(node).is_some_and(|w| walk(w, te.timestamp, target, temporal))
            })
        }
        (0..graph.n()).map(|u| walk(u, 0, target, &temporal)).collect()
    }

    fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> ColoredGraph {
        let mut edges = StdVec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        ColoredGraph::uncolored(n, edges, 0).unwrap()
    }

    #[test]
    fn rejects_malformed_graphs() {
        assert!(matches!(ColoredGraph::uncolored(3, [(0, 0)], 0), Err(Error::InvalidGraph(_))));
        assert!(matches!(ColoredGraph::uncolored(3, [(0, 1), (1, 0)], 0), Err(Error::InvalidGraph(_))));
        assert!(matches!(ColoredGraph::uncolored(3, [(0, 5)], 0), Err(Error::NodeOutOfRange(5, 3))));
        assert!(ColoredGraph::new(3, [(0, 1)], vec![U; 3], vec![]).is_err());
        assert!(ColoredGraph::new(3, [(0, 1)], vec![U; 2], vec![0]).is_err());
    }

    #[test]
    fn induce_lists_one_entry_per_timestamp() {
        let g = ColoredGraph::uncolored(2, [(0, 1)], 0).unwrap();
        assert!(induce_temporal_graph(&g, &TemporalLabeling::new()).unwrap().is_empty());
        let lab = labeling(&[(0, 1, 3), (1, 0, 1)]);
        let te = induce_temporal_graph(&g, &lab).unwrap();
        let e = Edge::new(0, 1).unwrap();
        assert_eq!(te, vec![TemporalEdge { timestamp: 1, edge: e }, TemporalEdge { timestamp: 3, edge: e }]);
        let bad = labeling(&[(0, 1, 1), (1, 2, 1)]);
        let g3 = ColoredGraph::uncolored(3, [(0, 1)], 0).unwrap();
        assert_eq!(induce_temporal_graph(&g3, &bad), Err(Error::UnknownEdge(1, 2)));
    }

    #[test]
    fn timestamp_zero_is_rejected() {
        assert!(TemporalLabeling::new().insert(0, 1, 0).is_err());
    }

    #[test]
    fn reachability_requires_strict_increase() {
        // t=0, a=1, b=2 on a path t-a-b.
        let g = ColoredGraph::uncolored(3, [(0, 1), (1, 2)], 0).unwrap();
        let empty = reachable_set(&g, &TemporalLabeling::new(), 0).unwrap();
        assert_eq!(empty.iter().collect::<StdVec<_>>(), vec![0]);

        let up = labeling(&[(1, 2, 1), (0, 1, 2)]);
        assert_eq!(reachable_set(&g, &up, 0).unwrap().iter().collect::<StdVec<_>>(), vec![0, 1, 2]);

        let down = labeling(&[(1, 2, 2), (0, 1, 1)]);
        assert_eq!(reachable_set(&g, &down, 0).unwrap().iter().collect::<StdVec<_>>(), vec![0, 1]);

        let equal = labeling(&[(1, 2, 1), (0, 1, 1)]);
        assert_eq!(reachable_set(&g, &equal, 0).unwrap().iter().collect::<StdVec<_>>(), vec![0, 1]);
    }

    /// Six nodes: t=0, x=1, b1=2, b2=3, r1=4, r2=5. Red side labeled
    /// increasing toward t, blue side decreasing.
    fn red_only_instance() -> (ColoredGraph, TemporalLabeling) {
        let g = ColoredGraph::new(
            6,
            [(0, 1), (1, 2), (2, 3), (0, 4), (4, 5)],
            vec![U, U, B, B, R, R],
            vec![0],
        )
        .unwrap();
        let lab = labeling(&[(0, 1, 1), (1, 2, 2), (2, 3, 3), (4, 5, 1), (0, 4, 2)]);
        (g, lab)
    }

    #[test]
    fn red_only_paths_exclude_blue() {
        let (g, lab) = red_only_instance();
        let reach = reachable_set(&g, &lab, 0).unwrap();
        let brute = brute_force_reaches(&g, &lab, 0);
        for u in 0..g.n() {
            assert_eq!(reach.contains(u), brute[u], "node {u}");
        }
        assert!(g.nodes_with(B).all(|u| !reach.contains(u)));
        assert!(reach.contains(4) && reach.contains(5) && reach.contains(1));
    }

    #[test]
    fn coverage_examples() {
        let g = ColoredGraph::new(3, [(0, 1)], vec![U, B, R], vec![0]).unwrap();
        assert_eq!(coverage_counts(&g, &TemporalLabeling::new(), 1).unwrap(), Coverage { blue: 0, red: 0 });
        assert!(matches!(coverage_counts(&g, &TemporalLabeling::new(), 2), Err(Error::InfeasibleRequirement(_))));

        // star: t=0 center, leaves 1,2 blue, 3 red.
        let star = ColoredGraph::new(4, [(0, 1), (0, 2), (0, 3)], vec![U, B, B, R], vec![0]).unwrap();
        let lab = labeling(&[(0, 1, 1), (0, 2, 1)]);
        assert_eq!(coverage_counts(&star, &lab, 1).unwrap(), Coverage { blue: 2, red: 0 });

        let (g, lab) = red_only_instance();
        assert_eq!(coverage_counts(&g, &lab, 1).unwrap(), Coverage { blue: 0, red: 2 });
    }

    #[test]
    fn coverage_with_two_terminals_and_rho() {
        // path 0 - 1 - 2 with terminals {0, 2}; node 1 blue.
        let g = ColoredGraph::new(3, [(0, 1), (1, 2)], vec![U, B, U], vec![0, 2]).unwrap();
        let lab = labeling(&[(0, 1, 1)]);
        assert_eq!(coverage_counts(&g, &lab, 1).unwrap().blue, 1);
        assert_eq!(coverage_counts(&g, &lab, 2).unwrap().blue, 0);
        let both = labeling(&[(0, 1, 1), (1, 2, 1)]);
        assert_eq!(coverage_counts(&g, &both, 2).unwrap().blue, 1);
    }

    #[test]
    fn hop_distances() {
        let path = ColoredGraph::uncolored(3, [(0, 1), (1, 2)], 0).unwrap();
        assert_eq!(all_pairs_hop_distance(&path).get(0, 2), Some(2));
        let split = ColoredGraph::uncolored(4, [(0, 1), (2, 3)], 0).unwrap();
        let d = all_pairs_hop_distance(&split);
        assert_eq!(d.get(0, 3), None);
        assert!(!d.is_connected());
    }

    fn floyd_warshall(g: &ColoredGraph) -> StdVec<StdVec<Option<u32>>> {
        let n = g.n();
        let mut d = vec![vec![None; n]; n];
        for u in 0..n {
            d[u][u] = Some(0);
        }
        for e in g.edges() {
            d[e.lo()][e.hi()] = Some(1);
            d[e.hi()][e.lo()] = Some(1);
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                        if d[i][j].is_none_or(|c| a + b < c) {
                            d[i][j] = Some(a + b);
                        }
                    }
                }
            }
        }
        d
    }

    #[test]
    fn distances_match_floyd_warshall() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let g = random_graph(&mut rng, 20, 0.12);
            let fw = floyd_warshall(&g);
            let d = all_pairs_hop_distance(&g);
            for u in 0..20 {
                for v in 0..20 {
                    assert_eq!(d.get(u, v), fw[u][v]);
                }
            }
        }
    }

    #[test]
    fn shortest_path_tie_break_and_length() {
        let g = ColoredGraph::uncolored(2, [(0, 1)], 0).unwrap();
        assert_eq!(shortest_path(&g, 0, 1).unwrap(), vec![(0, 1)]);

        // 4-cycle 0-1-2-3-0: both 0->2 routes have 2 hops; smaller intermediate wins.
        let cycle = ColoredGraph::uncolored(4, [(0, 1), (1, 2), (2, 3), (3, 0)], 0).unwrap();
        assert_eq!(shortest_path(&cycle, 0, 2).unwrap(), vec![(0, 1), (1, 2)]);
        assert_eq!(shortest_path(&cycle, 2, 0).unwrap(), vec![(2, 1), (1, 0)]);

        let mut edges = StdVec::new();
        for r in 0..5 {
            for c in 0..5 {
                let id = r * 5 + c;
                if c + 1 < 5 {
                    edges.push((id, id + 1));
                }
                if r + 1 < 5 {
                    edges.push((id, id + 5));
                }
            }
        }
        let grid = ColoredGraph::uncolored(25, edges, 0).unwrap();
        let p = shortest_path(&grid, 0, 24).unwrap();
        assert_eq!(p.len(), 8);
        assert_eq!(p.first().unwrap().0, 0);
        assert_eq!(p.last().unwrap().1, 24);

        let split = ColoredGraph::uncolored(4, [(0, 1), (2, 3)], 0).unwrap();
        assert_eq!(shortest_path(&split, 0, 3), Err(Error::NoPath(0, 3)));
    }

    fn small_instance() -> impl Strategy<Value = (usize, StdVec<(usize, usize)>, StdVec<(usize, u64)>, usize)> {
        (2usize..=8).prop_flat_map(|n| {
            let pairs: StdVec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            let m = pairs.len();
            (
                Just(n),
                Just(pairs),
                proptest::collection::vec((0..m, 1u64..=6), 0..=12),
                0..n,
            )
        })
    }

    proptest! {
        #[test]
        fn reachability_matches_brute_force((n, pairs, labels, target) in small_instance()) {
            let g = ColoredGraph::uncolored(n, pairs.iter().copied(), target).unwrap();
            let mut lab = TemporalLabeling::new();
            for (i, t) in labels {
                let (u, v) = pairs[i];
                lab.insert(u, v, t).unwrap();
            }
            prop_assert_eq!(induce_temporal_graph(&g, &lab).unwrap().len(), lab.size());
            let fast = reachable_set(&g, &lab, target).unwrap();
            let brute = brute_force_reaches(&g, &lab, target);
            for u in 0..n {
                prop_assert_eq!(fast.contains(u), brute[u]);
                let forward = earliest_arrival(&g, &lab, u).unwrap();
                prop_assert_eq!(forward[target].is_some(), brute[u]);
            }
        }

        #[test]
        fn reachability_is_monotone((n, pairs, labels, target) in small_instance(), extra in (0usize..64, 1u64..=8)) {
            let g = ColoredGraph::uncolored(n, pairs.iter().copied(), target).unwrap();
            let mut lab = TemporalLabeling::new();
            for (i, t) in labels {
                let (u, v) = pairs[i];
                lab.insert(u, v, t).unwrap();
            }
            let before = reachable_set(&g, &lab, target).unwrap();
            let (u, v) = pairs[extra.0 % pairs.len()];
            lab.insert(u, v, extra.1).unwrap();
            let after = reachable_set(&g, &lab, target).unwrap();
            for w in before.iter() {
                prop_assert!(after.contains(w));
            }
        }

        #[test]
        fn distances_form_a_metric(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = random_graph(&mut rng, 12, 0.25);
            let d = all_pairs_hop_distance(&g);
            for u in 0..12 {
                prop_assert_eq!(d.get(u, u), Some(0));
                for v in 0..12 {
                    prop_assert_eq!(d.get(u, v), d.get(v, u));
                    for w in 0..12 {
                        if let (Some(a), Some(b)) = (d.get(u, w), d.get(w, v)) {
                            prop_assert!(d.get(u, v).is_some_and(|c| c <= a + b));
                        }
                    }
                }
            }
        }
    }
}
