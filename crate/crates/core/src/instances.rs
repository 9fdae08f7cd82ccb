//! Synthetic instance families.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{bfs_distances, Color, ColoredGraph, NodeId, TemporalLabeling, Timestamp};
use crate::verifier::FmlInstance;

/// Random geometric graph with the node positions it was built from.
#[derive(Clone, Debug, PartialEq)]
pub struct GeometricGraph {
    pub graph: ColoredGraph,
    pub positions: Vec<(f64, f64)>,
}

/// `n` uniform points in the unit square, joined when at distance at most
/// `radius`. Only the largest connected component is kept (ties go to the
/// component with the smallest node id), re-indexed in original order. The
/// terminal is a uniformly random kept node; no colors are assigned.
pub fn gen_geometric(n: usize, radius: f64, seed: u64) -> Result<GeometricGraph> {
    if n == 0 {
        return Err(Error::InvalidParameter("geometric graph needs n >= 1".into()));
    }
    if !(radius > 0.0 && radius <= core::f64::consts::SQRT_2) {
        return Err(Error::InvalidParameter(format!("radius {radius} outside (0, sqrt 2]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen::<f64>(), rng.gen::<f64>())).collect();
    let r2 = radius * radius;
    let mut adj = vec![Vec::new(); n];
    for u in 0..n {
        for v in u + 1..n {
            let (dx, dy) = (points[u].0 - points[v].0, points[u].1 - points[v].1);
            if dx * dx + dy * dy <= r2 {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
    }
    let mut comp = vec![usize::MAX; n];
    let mut best = (0usize, 0usize);
    let mut count = 0;
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let mut size = 0;
        let mut queue = VecDeque::from([s]);
        comp[s] = count;
        while let Some(u) = queue.pop_front() {
            size += 1;
            for &w in &adj[u] {
                if comp[w] == usize::MAX {
                    comp[w] = count;
                    queue.push_back(w);
                }
            }
        }
        if size > best.1 {
            best = (count, size);
        }
        count += 1;
    }
    let mut index = vec![usize::MAX; n];
    let mut positions = Vec::with_capacity(best.1);
    for u in 0..n {
        if comp[u] == best.0 {
            index[u] = positions.len();
            positions.push(points[u]);
        }
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for &v in &adj[u] {
            if u < v && index[u] != usize::MAX {
                edges.push((index[u], index[v]));
            }
        }
    }
    let terminal = rng.gen_range(0..positions.len());
    let graph = ColoredGraph::uncolored(positions.len(), edges, terminal)?;
    Ok(GeometricGraph { graph, positions })
}

/// Preferential attachment: a clique on the first `m_bar` nodes, then every
/// new node links to `m_bar` distinct existing nodes chosen with probability
/// proportional to degree. The terminal is a uniformly random node.
pub fn gen_barabasi_albert(n: usize, m_bar: usize, seed: u64) -> Result<ColoredGraph> {
    if m_bar == 0 || m_bar >= n {
        return Err(Error::InvalidParameter(format!("need 1 <= m_bar < n, got m_bar = {m_bar}, n = {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(m_bar * (n - m_bar) + m_bar * (m_bar - 1) / 2);
    // Each node appears once per incident edge.
    let mut endpoints: Vec<NodeId> = Vec::new();
    for u in 0..m_bar {
        for v in u + 1..m_bar {
            edges.push((u, v));
            endpoints.extend([u, v]);
        }
    }
    for v in m_bar..n {
        let mut targets: Vec<NodeId> = Vec::with_capacity(m_bar);
        if endpoints.is_empty() {
            targets.extend(0..m_bar);
        }
        while targets.len() < m_bar {
            let u = endpoints[rng.gen_range(0..endpoints.len())];
            if !targets.contains(&u) {
                targets.push(u);
            }
        }
        for &u in &targets {
            edges.push((u, v));
            endpoints.extend([u, v]);
        }
    }
    let terminal = rng.gen_range(0..n);
    ColoredGraph::uncolored(n, edges, terminal)
}

fn check_counts(graph: &ColoredGraph, count_blue: usize, count_red: usize) -> Result<()> {
    if count_blue + count_red > graph.n().saturating_sub(1) {
        return Err(Error::InvalidParameter(format!(
            "{count_blue} blue + {count_red} red exceed the {} non-terminal nodes",
            graph.n().saturating_sub(1)
        )));
    }
    Ok(())
}

/// Colors `near[..count_blue]` blue and `far[..count_red]` red.
fn color_split(graph: &ColoredGraph, near: &[NodeId], far: &[NodeId], count_blue: usize, count_red: usize) -> Result<ColoredGraph> {
    let mut colors = vec![Color::Uncolored; graph.n()];
    for &u in &near[..count_blue] {
        colors[u] = Color::Blue;
    }
    for &u in &far[..count_red] {
        if colors[u] == Color::Blue {
            return Err(Error::Internal(format!("node {u} selected for both groups")));
        }
        colors[u] = Color::Red;
    }
    let mut g = graph.clone();
    g.set_colors(colors)?;
    Ok(g)
}

/// Colors the `count_blue` nodes nearest the terminal blue and the
/// `count_red` farthest red, by hop distance with ties to the smaller id.
/// Requires a connected graph.
pub fn assign_groups_by_proximity(graph: &ColoredGraph, count_blue: usize, count_red: usize) -> Result<ColoredGraph> {
    check_counts(graph, count_blue, count_red)?;
    let t = graph.single_terminal()?;
    let dist = bfs_distances(graph, t);
    if dist.iter().any(Option::is_none) {
        return Err(Error::Disconnected);
    }
    let mut near: Vec<NodeId> = (0..graph.n()).filter(|&u| u != t).collect();
    let mut far = near.clone();
    near.sort_by_key(|&u| (dist[u], u));
    far.sort_by_key(|&u| (core::cmp::Reverse(dist[u]), u));
    color_split(graph, &near, &far, count_blue, count_red)
}

/// Same split by Euclidean distance to the terminal's position.
pub fn assign_groups_by_euclidean(geo: &GeometricGraph, count_blue: usize, count_red: usize) -> Result<ColoredGraph> {
    let graph = &geo.graph;
    check_counts(graph, count_blue, count_red)?;
    let t = graph.single_terminal()?;
    let (tx, ty) = geo.positions[t];
    let d = |u: NodeId| {
        let (x, y) = geo.positions[u];
        (x - tx) * (x - tx) + (y - ty) * (y - ty)
    };
    let mut near: Vec<NodeId> = (0..graph.n()).filter(|&u| u != t).collect();
    let mut far = near.clone();
    near.sort_by(|&a, &b| d(a).total_cmp(&d(b)).then(a.cmp(&b)));
    far.sort_by(|&a, &b| d(b).total_cmp(&d(a)).then(a.cmp(&b)));
    color_split(graph, &near, &far, count_blue, count_red)
}

/// Instance built from a set system, with its known optimal cost.
///
/// Node layout: terminal `0`, elements `1..=m`, sets `m+1..=m+k`, then for
/// each set its `chain_length - 1` chain nodes in order from the set node
/// toward the terminal. Every element is blue; there are no red nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct SetCoverInstance {
    pub instance: FmlInstance,
    pub universe_size: usize,
    pub sets: Vec<Vec<usize>>,
    pub chain_length: usize,
    /// Indices of one minimum cover.
    pub min_cover: Vec<usize>,
    /// `universe_size + chain_length * min_cover.len()`, the cost of
    /// [`witness`](Self::witness). It is the true optimum when
    /// `chain_length == 1`. With longer chains and overlapping sets it is only
    /// an upper bound: an element can relay through a second set node, e.g.
    /// sets `{0,1}` and `{1,2}` with `L = 2` admit a labeling of cost 6, not 7.
    pub optimum: usize,
}

impl SetCoverInstance {
    pub fn element_node(&self, j: usize) -> NodeId {
        1 + j
    }

    pub fn set_node(&self, i: usize) -> NodeId {
        1 + self.universe_size + i
    }

    /// Nodes from the set node to the terminal, inclusive.
    pub fn chain(&self, i: usize) -> Vec<NodeId> {
        let base = 1 + self.universe_size + self.sets.len() + i * (self.chain_length - 1);
        let mut nodes = vec![self.set_node(i)];
        nodes.extend(base..base + self.chain_length - 1);
        nodes.push(0);
        nodes
    }

    /// Labeling of size `optimum`: each element uses the first cover set
    /// containing it at time 1, and that set's chain carries times `2..`.
    pub fn witness(&self) -> Result<TemporalLabeling> {
        let mut l = TemporalLabeling::new();
        for j in 0..self.universe_size {
            let i = *self
                .min_cover
                .iter()
                .find(|&&i| self.sets[i].contains(&j))
                .ok_or_else(|| Error::Internal(format!("element {j} not in the cover")))?;
            l.insert(self.element_node(j), self.set_node(i), 1)?;
        }
        for &i in &self.min_cover {
            let chain = self.chain(i);
            for (k, w) in chain.windows(2).enumerate() {
                l.insert(w[0], w[1], k as Timestamp + 2)?;
            }
        }
        Ok(l)
    }
}

/// Smallest sub-family covering `0..universe_size`; ties go to the
/// lexicographically first index set.
pub fn minimum_set_cover(universe_size: usize, sets: &[Vec<usize>]) -> Result<Vec<usize>> {
    if sets.len() > 24 || universe_size > 64 {
        return Err(Error::Unsupported(format!("exhaustive set cover over {} sets", sets.len())));
    }
    let full: u64 = if universe_size == 64 { u64::MAX } else { (1u64 << universe_size) - 1 };
    let masks: Vec<u64> = sets.iter().map(|s| s.iter().fold(0u64, |m, &j| m | (1u64 << j))).collect();
    let mut best: Option<u32> = None;
    for choice in 0u32..(1u32 << sets.len()) {
        let covered = (0..sets.len()).filter(|&i| choice & (1 << i) != 0).fold(0u64, |m, i| m | masks[i]);
        if covered & full != full {
            continue;
        }
        let better = match best {
            None => true,
            Some(b) => choice.count_ones() < b.count_ones() || (choice.count_ones() == b.count_ones() && choice.reverse_bits() > b.reverse_bits()),
        };
        if better {
            best = Some(choice);
        }
    }
    let best = best.ok_or_else(|| Error::InvalidParameter("sets do not cover the universe".into()))?;
    Ok((0..sets.len()).filter(|&i| best & (1 << i) != 0).collect())
}

/// Builds the element / set / chain graph for a set system with `alpha = 1`
/// and `rho = 1`. `chain_length` is the number of edges from each set node to
/// the terminal.
pub fn gen_setcover_reduction(universe_size: usize, sets: Vec<Vec<usize>>, chain_length: usize) -> Result<SetCoverInstance> {
    if chain_length == 0 {
        return Err(Error::InvalidParameter("chain length must be at least 1".into()));
    }
    if universe_size == 0 {
        return Err(Error::InvalidParameter("empty universe".into()));
    }
    for (i, s) in sets.iter().enumerate() {
        if let Some(&j) = s.iter().find(|&&j| j >= universe_size) {
            return Err(Error::InvalidParameter(format!("set {i} contains element {j} outside the universe")));
        }
    }
    for j in 0..universe_size {
        if !sets.iter().any(|s| s.contains(&j)) {
            return Err(Error::InvalidParameter(format!("element {j} is in no set")));
        }
    }
    let min_cover = minimum_set_cover(universe_size, &sets)?;
    let k = sets.len();
    let n = 1 + universe_size + k + k * (chain_length - 1);
    let mut colors = vec![Color::Uncolored; n];
    for c in colors.iter_mut().skip(1).take(universe_size) {
        *c = Color::Blue;
    }
    let mut edges = Vec::new();
    for (i, s) in sets.iter().enumerate() {
        let mut elems = s.clone();
        elems.sort_unstable();
        elems.dedup();
        for j in elems {
            edges.push((1 + j, 1 + universe_size + i));
        }
    }
    let shell = SetCoverInstance {
        instance: FmlInstance::new(ColoredGraph::uncolored(1, core::iter::empty(), 0)?, 1, 0.0, 0.0)?,
        universe_size,
        sets,
        chain_length,
        optimum: universe_size + chain_length * min_cover.len(),
        min_cover,
    };
    for i in 0..k {
        for w in shell.chain(i).windows(2) {
            edges.push((w[0], w[1]));
        }
    }
    let graph = ColoredGraph::new(n, edges, colors, vec![0])?;
    let instance = FmlInstance::with_alpha(graph, 1.0)?;
    Ok(SetCoverInstance { instance, ..shell })
}
