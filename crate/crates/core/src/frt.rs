//! Random tree embedding of the hop metric.
//!
//! [`sample_hst`] builds a hierarchical decomposition: a random scale
//! `beta` in `[1, 2)` with density `1 / (beta ln 2)` and a uniformly random
//! permutation of the vertices. At level `i` every vertex is assigned to the
//! first vertex of the permutation within distance `beta * 2^(i-1)`, and each
//! level-`(i+1)` cluster is split by that assignment. Level 0 clusters are
//! singletons; the edge from a level-`i` cluster to each child has weight
//! equal to that level's radius `beta * 2^(i-1)`. Two vertices first
//! separated below level `L` are `2 beta (2^L - 1)` apart in the tree, while
//! sharing a level-`L` cluster puts them within `beta * 2^L` of each other,
//! so tree distances never undercut hop distances.
//!
//! [`contract_to_vertex_tree`] turns the hierarchy into a spanning tree on
//! the original vertices rooted at the terminal.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{all_pairs_hop_distance, ColoredGraph, DistanceMatrix, NodeId};

#[derive(Clone, Debug, PartialEq)]
pub struct Cluster {
    pub level: u32,
    pub center: NodeId,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub members: Vec<NodeId>,
}

/// Nested clusters of a sampled hierarchically separated tree.
#[derive(Clone, Debug, PartialEq)]
pub struct HstDecomposition {
    clusters: Vec<Cluster>,
    top_level: u32,
    beta: f64,
    permutation: Vec<NodeId>,
    rank: Vec<usize>,
    // cluster_at[level][v]
    cluster_at: Vec<Vec<usize>>,
}

impl HstDecomposition {
    pub fn clusters(&self) -> &[Cluster] {
        &self.clusters
    }

    /// Index of the root cluster.
    pub fn root(&self) -> usize {
        0
    }

    /// Levels `0..=top_level`.
    pub fn level_count(&self) -> u32 {
        self.top_level + 1
    }

    pub fn top_level(&self) -> u32 {
        self.top_level
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn permutation(&self) -> &[NodeId] {
        &self.permutation
    }

    /// Position of `v` in the permutation.
    pub fn rank(&self, v: NodeId) -> usize {
        self.rank[v]
    }

    pub fn n(&self) -> usize {
        self.rank.len()
    }

    /// Cluster containing `v` at `level`.
    pub fn cluster_of(&self, level: u32, v: NodeId) -> usize {
        self.cluster_at[level as usize][v]
    }

    /// Radius used to carve level-`level` clusters.
    pub fn radius(&self, level: u32) -> f64 {
        self.beta * libm::exp2(level as f64 - 1.0)
    }

    /// Weight of the edge from a level-`level` cluster down to a child.
    pub fn edge_weight(&self, level: u32) -> f64 {
        self.radius(level)
    }

    /// Leaf-to-leaf distance in the hierarchy.
    pub fn tree_distance(&self, u: NodeId, v: NodeId) -> f64 {
        if u == v {
            return 0.0;
        }
        let lca = (1..=self.top_level)
            .find(|&l| self.cluster_of(l, u) == self.cluster_of(l, v))
            .unwrap_or(self.top_level);
        // 2 * sum_{j=1..lca} beta 2^(j-1)
        2.0 * self.beta * (libm::exp2(lca as f64) - 1.0)
    }
}

/// Samples a hierarchical decomposition of `metric`, deterministic in `seed`.
pub fn sample_hst(metric: &DistanceMatrix, seed: u64) -> Result<HstDecomposition> {
    let n = metric.n();
    if n == 0 {
        return Err(Error::InvalidParameter("empty metric".into()));
    }
    if !metric.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let beta = libm::exp2(rng.gen::<f64>());
    let mut permutation: Vec<NodeId> = (0..n).collect();
    permutation.shuffle(&mut rng);
    let mut rank = vec![0; n];
    for (i, &v) in permutation.iter().enumerate() {
        rank[v] = i;
    }

    let diameter = metric.diameter() as f64;
    let radius = |level: u32| beta * libm::exp2(level as f64 - 1.0);
    let mut top_level = 0;
    while radius(top_level) < diameter {
        top_level += 1;
    }

    let mut clusters = vec![Cluster {
        level: top_level,
        center: permutation[0],
        parent: None,
        children: Vec::new(),
        members: (0..n).collect(),
    }];
    let mut cluster_at = vec![Vec::new(); top_level as usize + 1];
    cluster_at[top_level as usize] = vec![0; n];

    let mut frontier = vec![0usize];
    for level in (0..top_level).rev() {
        let r = radius(level);
        let mut centre_of = vec![0; n];
        for v in 0..n {
            centre_of[v] = permutation
                .iter()
                .copied()
                .find(|&c| metric.get(c, v).is_some_and(|d| d as f64 <= r))
                .unwrap_or(v);
        }
        let mut at_level = vec![0; n];
        let mut next = Vec::new();
        for &pi in &frontier {
            let mut groups: BTreeMap<usize, Vec<NodeId>> = BTreeMap::new();
            for &v in &clusters[pi].members {
                groups.entry(rank[centre_of[v]]).or_default().push(v);
            }
            for (center_rank, members) in groups {
                let idx = clusters.len();
                for &v in &members {
                    at_level[v] = idx;
                }
                clusters.push(Cluster {
                    level,
                    center: permutation[center_rank],
                    parent: Some(pi),
                    children: Vec::new(),
                    members,
                });
                clusters[pi].children.push(idx);
                next.push(idx);
            }
        }
        cluster_at[level as usize] = at_level;
        frontier = next;
    }

    Ok(HstDecomposition { clusters, top_level, beta, permutation, rank, cluster_at })
}

/// Rooted spanning tree on the vertex set with positive edge weights.
/// `weight[v]` is the weight of the edge from `v` to its parent.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedTree {
    root: NodeId,
    parent: Vec<Option<NodeId>>,
    weight: Vec<f64>,
    children: Vec<Vec<NodeId>>,
    depth: Vec<u32>,
    height: u32,
}

impl WeightedTree {
    /// Validates that `parent` describes a tree rooted at `root` covering
    /// every node and that every edge weight is at least 1.
    pub fn from_parents(root: NodeId, parent: Vec<Option<NodeId>>, mut weight: Vec<f64>) -> Result<Self> {
        let n = parent.len();
        if weight.len() != n {
            return Err(Error::InvalidParameter(format!("{} weights for {n} nodes", weight.len())));
        }
        if root >= n {
            return Err(Error::NodeOutOfRange(root, n));
        }
        if parent[root].is_some() {
            return Err(Error::InvalidParameter(format!("root {root} has a parent")));
        }
        weight[root] = 0.0;
        let mut children = vec![Vec::new(); n];
        for (v, p) in parent.iter().enumerate() {
            match *p {
                None if v != root => return Err(Error::InvalidParameter(format!("node {v} has no parent"))),
                None => {}
                Some(p) if p >= n => return Err(Error::NodeOutOfRange(p, n)),
                Some(p) => {
                    if !(weight[v] >= 1.0 && weight[v].is_finite()) {
                        return Err(Error::InvalidParameter(format!("edge weight {} below 1 at node {v}", weight[v])));
                    }
                    children[p].push(v);
                }
            }
        }
        let mut depth = vec![u32::MAX; n];
        depth[root] = 0;
        let mut stack = vec![root];
        let mut seen = 1;
        while let Some(v) = stack.pop() {
            for &c in &children[v] {
                depth[c] = depth[v] + 1;
                seen += 1;
                stack.push(c);
            }
        }
        if seen != n {
            return Err(Error::InvalidParameter("parent pointers contain a cycle".into()));
        }
        let height = depth.iter().copied().max().unwrap_or(0);
        Ok(WeightedTree { root, parent, weight, children, depth, height })
    }

    pub fn n(&self) -> usize {
        self.parent.len()
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        self.parent[v]
    }

    pub fn parents(&self) -> &[Option<NodeId>] {
        &self.parent
    }

    /// Weight of the edge from `v` to its parent (0 at the root).
    pub fn weight(&self, v: NodeId) -> f64 {
        self.weight[v]
    }

    /// Children in increasing id order.
    pub fn children(&self, v: NodeId) -> &[NodeId] {
        &self.children[v]
    }

    /// Edge count from the root.
    pub fn depth(&self, v: NodeId) -> u32 {
        self.depth[v]
    }

    /// Maximum root-to-leaf edge count.
    pub fn height(&self) -> u32 {
        self.height
    }

    /// Children before parents; siblings in increasing id order.
    pub fn post_order(&self) -> Vec<NodeId> {
        let mut order = Vec::with_capacity(self.n());
        let mut stack = vec![(self.root, false)];
        while let Some((v, expanded)) = stack.pop() {
            if expanded {
                order.push(v);
            } else {
                stack.push((v, true));
                for &c in self.children[v].iter().rev() {
                    stack.push((c, false));
                }
            }
        }
        order
    }

    /// Height of the subtree rooted at each node (leaves are 0).
    pub fn subtree_heights(&self) -> Vec<u32> {
        let mut h = vec![0u32; self.n()];
        for v in self.post_order() {
            h[v] = self.children[v].iter().map(|&c| h[c] + 1).max().unwrap_or(0);
        }
        h
    }

    /// Weighted path length between `u` and `v`.
    pub fn distance(&self, mut u: NodeId, mut v: NodeId) -> f64 {
        let mut total = 0.0;
        while self.depth[u] > self.depth[v] {
            total += self.weight[u];
            u = self.parent[u].unwrap_or(u);
        }
        while self.depth[v] > self.depth[u] {
            total += self.weight[v];
            v = self.parent[v].unwrap_or(v);
        }
        while u != v {
            total += self.weight[u] + self.weight[v];
            u = self.parent[u].unwrap_or(u);
            v = self.parent[v].unwrap_or(v);
        }
        total
    }

    /// Same tree with parent pointers reversed along the path from
    /// `new_root` to the current root; weights stay on their edges.
    pub fn reroot(&self, new_root: NodeId) -> Result<WeightedTree> {
        if new_root >= self.n() {
            return Err(Error::NodeOutOfRange(new_root, self.n()));
        }
        let mut parent = self.parent.clone();
        let mut weight = self.weight.clone();
        let mut prev: Option<NodeId> = None;
        let mut prev_weight = 0.0;
        let mut cur = Some(new_root);
        while let Some(v) = cur {
            let (next, w) = (self.parent[v], self.weight[v]);
            parent[v] = prev;
            weight[v] = prev_weight;
            prev = Some(v);
            prev_weight = w;
            cur = next;
        }
        WeightedTree::from_parents(new_root, parent, weight)
    }
}

/// Collapses the hierarchy onto the vertex set, rooted at `terminal`.
///
/// Each cluster is represented by the terminal if it contains it, otherwise
/// by its member with the smallest permutation rank. A vertex therefore
/// represents a contiguous chain of clusters from its leaf upward; the top
/// of the chain hangs off the representative of the parent cluster with the
/// weight of that hierarchy edge.
pub fn contract_to_vertex_tree(hst: &HstDecomposition, terminal: NodeId) -> Result<WeightedTree> {
    let n = hst.n();
    if terminal >= n {
        return Err(Error::NodeOutOfRange(terminal, n));
    }
    let clusters = hst.clusters();
    let mut has_terminal = vec![false; clusters.len()];
    let mut min_rank = vec![usize::MAX; clusters.len()];
    // Children always have larger indices than their parent.
    for idx in (0..clusters.len()).rev() {
        let c = &clusters[idx];
        if c.children.is_empty() {
            has_terminal[idx] = c.members.contains(&terminal);
            min_rank[idx] = c.members.iter().map(|&v| hst.rank(v)).min().unwrap_or(usize::MAX);
        } else {
            has_terminal[idx] = c.children.iter().any(|&k| has_terminal[k]);
            min_rank[idx] = c.children.iter().map(|&k| min_rank[k]).min().unwrap_or(usize::MAX);
        }
    }
    let representative: Vec<NodeId> = (0..clusters.len())
        .map(|idx| if has_terminal[idx] { terminal } else { hst.permutation()[min_rank[idx]] })
        .collect();

    let mut parent = vec![None; n];
    let mut weight = vec![0.0; n];
    for (idx, c) in clusters.iter().enumerate() {
        let Some(p) = c.parent else { continue };
        let (child_rep, parent_rep) = (representative[idx], representative[p]);
        if child_rep != parent_rep {
            if parent[child_rep].is_some() {
                return Err(Error::Internal(format!("vertex {child_rep} represents two chains")));
            }
            parent[child_rep] = Some(parent_rep);
            weight[child_rep] = hst.edge_weight(clusters[p].level);
        }
    }
    WeightedTree::from_parents(representative[hst.root()], parent, weight)
}

/// Samples a tree for `graph` and roots it at `terminal`.
pub fn embed(metric: &DistanceMatrix, terminal: NodeId, seed: u64) -> Result<(HstDecomposition, WeightedTree)> {
    let hst = sample_hst(metric, seed)?;
    let tree = contract_to_vertex_tree(&hst, terminal)?;
    Ok((hst, tree))
}

/// Mean over trials of `d_T(u, v) / d_G(u, v)` for every pair `u < v`.
#[derive(Clone, Debug, PartialEq)]
pub struct StretchStats {
    pub trials: usize,
    /// `(u, v, mean stretch)` for every pair with `u < v`.
    pub pairs: Vec<(NodeId, NodeId, f64)>,
}

impl StretchStats {
    pub fn max_mean(&self) -> f64 {
        self.pairs.iter().map(|p| p.2).fold(0.0, f64::max)
    }

    pub fn average(&self) -> f64 {
        if self.pairs.is_empty() {
            return 0.0;
        }
        self.pairs.iter().map(|p| p.2).sum::<f64>() / self.pairs.len() as f64
    }
}

/// Samples `trials` hierarchies and averages each pair's stretch.
pub fn empirical_stretch(graph: &ColoredGraph, trials: usize, seed: u64) -> Result<StretchStats> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let metric = all_pairs_hop_distance(graph);
    let n = graph.n();
    let mut sums = vec![0.0; n * (n.saturating_sub(1)) / 2];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let hst = sample_hst(&metric, rng.gen())?;
        let mut k = 0;
        for u in 0..n {
            for v in u + 1..n {
                let d = metric.get(u, v).ok_or(Error::Disconnected)? as f64;
                sums[k] += hst.tree_distance(u, v) / d;
                k += 1;
            }
        }
    }
    let mut pairs = Vec::with_capacity(sums.len());
    let mut k = 0;
    for u in 0..n {
        for v in u + 1..n {
            pairs.push((u, v, sums[k] / trials as f64));
            k += 1;
        }
    }
    Ok(StretchStats { trials, pairs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{connected_graph, random_tree, rng};

    fn metric_of(g: &ColoredGraph) -> DistanceMatrix {
        all_pairs_hop_distance(g)
    }

    #[test]
    fn single_node() {
        let g = ColoredGraph::uncolored(1, [], 0).unwrap();
        let hst = sample_hst(&metric_of(&g), 3).unwrap();
        assert_eq!(hst.clusters().len(), 1);
        let tree = contract_to_vertex_tree(&hst, 0).unwrap();
        assert_eq!(tree.n(), 1);
        assert_eq!(tree.height(), 0);
    }

    #[test]
    fn two_nodes() {
        let g = ColoredGraph::uncolored(2, [(0, 1)], 1).unwrap();
        for seed in 0..20 {
            let hst = sample_hst(&metric_of(&g), seed).unwrap();
            let leaves: Vec<_> = hst.clusters().iter().filter(|c| c.children.is_empty()).collect();
            assert_eq!(leaves.len(), 2);
            assert_eq!(leaves[0].parent, leaves[1].parent);
            assert!(hst.tree_distance(0, 1) >= 1.0);
            let tree = contract_to_vertex_tree(&hst, 1).unwrap();
            assert_eq!(tree.root(), 1);
            assert_eq!(tree.parent(0), Some(1));
            assert!(tree.weight(0) >= 1.0);
        }
    }

    #[test]
    fn disconnected_metric_is_rejected() {
        let g = ColoredGraph::uncolored(3, [(0, 1)], 0).unwrap();
        assert_eq!(sample_hst(&metric_of(&g), 1), Err(Error::Disconnected));
    }

    #[test]
    fn hierarchy_invariants() {
        let mut r = rng(5);
        for trial in 0..20 {
            let g = connected_graph(&mut r, 30, 0.08);
            let d = metric_of(&g);
            let hst = sample_hst(&d, trial).unwrap();
            assert!((1.0..2.0).contains(&hst.beta()));
            for level in 0..hst.level_count() {
                let mut seen = vec![0; 30];
                for c in hst.clusters().iter().filter(|c| c.level == level) {
                    for &v in &c.members {
                        seen[v] += 1;
                        assert_eq!(hst.cluster_of(level, v), hst.clusters().iter().position(|x| x == c).unwrap());
                        for &w in &c.members {
                            let diam_bound = libm::exp2(level as f64) * hst.beta() * 2.0;
                            assert!(d.get(v, w).unwrap() as f64 <= diam_bound);
                        }
                    }
                    if level == 0 {
                        assert_eq!(c.members.len(), 1);
                    }
                    let mut centers: Vec<_> = c.children.iter().map(|&k| hst.clusters()[k].center).collect();
                    let before = centers.len();
                    centers.sort_unstable();
                    centers.dedup();
                    assert_eq!(before, centers.len());
                }
                assert!(seen.iter().all(|&s| s == 1));
            }
        }
    }

    #[test]
    fn hierarchy_dominates_hop_metric() {
        let mut r = rng(17);
        for _ in 0..10 {
            let g = connected_graph(&mut r, 30, 0.05);
            let d = metric_of(&g);
            for seed in 0..50 {
                let hst = sample_hst(&d, seed).unwrap();
                for u in 0..30 {
                    for v in 0..30 {
                        assert!(hst.tree_distance(u, v) >= d.get(u, v).unwrap() as f64);
                    }
                }
            }
        }
    }

    #[test]
    fn star_contracts_to_five_node_tree() {
        let g = ColoredGraph::uncolored(5, [(0, 1), (0, 2), (0, 3), (0, 4)], 0).unwrap();
        let d = metric_of(&g);
        for seed in 0..10 {
            let (_, tree) = embed(&d, 0, seed).unwrap();
            assert_eq!(tree.n(), 5);
            assert_eq!(tree.root(), 0);
            assert_eq!(tree.post_order().len(), 5);
        }
    }

    #[test]
    fn contracted_tree_is_spanning_and_rooted_at_terminal() {
        let mut r = rng(23);
        for _ in 0..10 {
            let g = connected_graph(&mut r, 30, 0.06);
            let d = metric_of(&g);
            for seed in 0..50 {
                let terminal = (seed as usize * 7) % 30;
                let (hst, tree) = embed(&d, terminal, seed).unwrap();
                assert_eq!(tree.root(), terminal);
                assert_eq!(tree.parents().iter().filter(|p| p.is_some()).count(), 29);
                for v in 0..30 {
                    if v != terminal {
                        assert!(tree.weight(v) >= 1.0);
                    }
                }
                assert!(tree.height() <= hst.level_count());
            }
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let mut r = rng(2);
        let g = connected_graph(&mut r, 25, 0.1);
        let d = metric_of(&g);
        assert_eq!(embed(&d, 3, 99).unwrap(), embed(&d, 3, 99).unwrap());
        assert_eq!(empirical_stretch(&g, 5, 4).unwrap(), empirical_stretch(&g, 5, 4).unwrap());
    }

    #[test]
    fn reroot_reverses_the_root_path() {
        let mut r = rng(8);
        for _ in 0..20 {
            let (parent, weight) = random_tree(&mut r, 12);
            let tree = WeightedTree::from_parents(0, parent, weight).unwrap();
            let new_root = r.gen_range(0..12);
            let re = tree.reroot(new_root).unwrap();
            assert_eq!(re.root(), new_root);
            for u in 0..12 {
                for v in 0..12 {
                    assert_eq!(tree.distance(u, v), re.distance(u, v));
                }
            }
            let total: f64 = (0..12).map(|v| tree.weight(v)).sum();
            let total_re: f64 = (0..12).map(|v| re.weight(v)).sum();
            assert_eq!(total, total_re);
        }
    }

    #[test]
    fn from_parents_rejects_bad_input() {
        assert!(WeightedTree::from_parents(0, vec![None, Some(2), Some(1)], vec![0.0, 1.0, 1.0]).is_err());
        assert!(WeightedTree::from_parents(0, vec![None, Some(0)], vec![0.0, 0.5]).is_err());
        assert!(WeightedTree::from_parents(0, vec![None, None], vec![0.0, 1.0]).is_err());
    }

    #[test]
    fn stretch_of_two_nodes_is_at_least_one() {
        let g = ColoredGraph::uncolored(2, [(0, 1)], 0).unwrap();
        let s = empirical_stretch(&g, 1, 0).unwrap();
        assert_eq!(s.pairs.len(), 1);
        assert!(s.max_mean() >= 1.0);
        assert!(empirical_stretch(&g, 0, 0).is_err());
    }
}
