//! Label dynamic program on a rooted weighted tree.
//!
//! A label `(b, r, c)` at node `v` says that `b` blue and `r` red nodes of
//! `v`'s subtree can be connected to `v` at weighted cost `c`. Nodes are
//! processed in post-order; each child's final label set is merged into the
//! node's running set (take one child label plus the connecting edge, or skip
//! the child), keeping one minimum-cost label per `(b, r)` and discarding
//! dominated labels after every merge.
//!
//! In bucketed mode the completed set at each node is further reduced to one
//! label per pair of geometric buckets `(bucket(b), bucket(r))`, so counts
//! lose at most a factor `1 + eps` per tree level.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::ceil_requirement;
use crate::error::{Error, Result};
use crate::frt::WeightedTree;
use crate::graph::{Color, NodeId, Timestamp};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DpLabel {
    pub blue: u32,
    pub red: u32,
    pub cost: f64,
}

impl DpLabel {
    pub const fn new(blue: u32, red: u32, cost: f64) -> Self {
        DpLabel { blue, red, cost }
    }

    /// `(1,0,0)` for blue, `(0,1,0)` for red, `(0,0,0)` otherwise.
    pub fn base(color: Color) -> Self {
        match color {
            Color::Blue => DpLabel::new(1, 0, 0.0),
            Color::Red => DpLabel::new(0, 1, 0.0),
            Color::Uncolored => DpLabel::new(0, 0, 0.0),
        }
    }

    /// At least as many of both groups for no more cost, and not identical.
    pub fn dominates(&self, other: &DpLabel) -> bool {
        self.blue >= other.blue
            && self.red >= other.red
            && self.cost <= other.cost
            && (self.blue > other.blue || self.red > other.red || self.cost < other.cost)
    }

    /// Preferred label within one key: cheaper, then larger `(b, r)`.
    fn better_than(&self, other: &DpLabel) -> bool {
        match self.cost.total_cmp(&other.cost) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => (self.blue, self.red) > (other.blue, other.red),
        }
    }
}

/// How a label was produced: index of the label it extends in the previous
/// set, and the child label taken (if the child was not skipped).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LabelOrigin {
    pub prev: u32,
    pub child: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Pruning {
    /// One label per exact `(b, r)`.
    Exact,
    /// One label per `(bucket_index(b), bucket_index(r))`.
    Bucketed { epsilon: f64 },
}

impl Pruning {
    fn key(&self, l: &DpLabel) -> (u64, u64) {
        match *self {
            Pruning::Exact => (l.blue as u64, l.red as u64),
            Pruning::Bucketed { epsilon } => (bucket_index(l.blue, epsilon), bucket_index(l.red, epsilon)),
        }
    }
}

/// Geometric bucket of a count: 0 for 0, otherwise the `i >= 1` with
/// `(1+eps)^(i-1) <= x < (1+eps)^i`.
pub fn bucket_index(x: u32, epsilon: f64) -> u64 {
    if x == 0 {
        return 0;
    }
    let x = x as f64;
    let base = 1.0 + epsilon;
    let mut i = libm::floor(libm::log(x) / libm::log1p(epsilon)).max(0.0) as u64;
    // Snap values within float noise of an exact power onto the power.
    let tol = 1.0 + 1e-12;
    while libm::pow(base, (i + 1) as f64) <= x * tol {
        i += 1;
    }
    while i > 0 && libm::pow(base, i as f64) > x * tol {
        i -= 1;
    }
    i + 1
}

/// Labels kept at one point of the DP, with their origins.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LabelSet {
    labels: Vec<DpLabel>,
    origins: Vec<LabelOrigin>,
}

impl LabelSet {
    /// Single base label for a node of the given color.
    pub fn base(color: Color) -> Self {
        LabelSet { labels: vec![DpLabel::base(color)], origins: vec![LabelOrigin { prev: 0, child: None }] }
    }

    /// Unpruned set with trivial origins.
    pub fn from_labels(labels: Vec<DpLabel>) -> Self {
        let origins = (0..labels.len() as u32).map(|prev| LabelOrigin { prev, child: None }).collect();
        LabelSet { labels, origins }
    }

    pub fn labels(&self) -> &[DpLabel] {
        &self.labels
    }

    pub fn origins(&self) -> &[LabelOrigin] {
        &self.origins
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Prunes this set; origins of the result point into `self`.
    pub fn pruned(&self, pruning: Pruning) -> LabelSet {
        let mut table = KeyedMin::new(pruning, self.labels.iter().map(|l| l.blue).max(), self.labels.iter().map(|l| l.red).max());
        for (i, l) in self.labels.iter().enumerate() {
            table.offer(*l, LabelOrigin { prev: i as u32, child: None });
        }
        table.finish()
    }
}

#[derive(Clone, Copy)]
struct Entry {
    label: DpLabel,
    origin: LabelOrigin,
}

/// Minimum-cost entry per key, dense when the key space is small.
enum KeyedMin {
    Dense { pruning: Pruning, width: usize, cells: Vec<Option<Entry>> },
    Sparse { pruning: Pruning, cells: BTreeMap<(u64, u64), Entry> },
}

const DENSE_LIMIT: u64 = 1 << 21;

impl KeyedMin {
    fn new(pruning: Pruning, max_blue: Option<u32>, max_red: Option<u32>) -> Self {
        let probe = DpLabel::new(max_blue.unwrap_or(0), max_red.unwrap_or(0), 0.0);
        let (kb, kr) = pruning.key(&probe);
        let cells = (kb + 1).saturating_mul(kr + 1);
        if cells <= DENSE_LIMIT {
            KeyedMin::Dense { pruning, width: kr as usize + 1, cells: vec![None; cells as usize] }
        } else {
            KeyedMin::Sparse { pruning, cells: BTreeMap::new() }
        }
    }

    fn offer(&mut self, label: DpLabel, origin: LabelOrigin) {
        let slot = match self {
            KeyedMin::Dense { pruning, width, cells } => {
                let (kb, kr) = pruning.key(&label);
                &mut cells[kb as usize * *width + kr as usize]
            }
            KeyedMin::Sparse { pruning, cells } => {
                let key = pruning.key(&label);
                match cells.get_mut(&key) {
                    Some(e) => {
                        if label.better_than(&e.label) {
                            *e = Entry { label, origin };
                        }
                    }
                    None => {
                        cells.insert(key, Entry { label, origin });
                    }
                }
                return;
            }
        };
        match slot {
            Some(e) if !label.better_than(&e.label) => {}
            _ => *slot = Some(Entry { label, origin }),
        }
    }

    fn finish(self) -> LabelSet {
        let winners: Vec<Entry> = match self {
            KeyedMin::Dense { cells, .. } => cells.into_iter().flatten().collect(),
            KeyedMin::Sparse { cells, .. } => cells.into_values().collect(),
        };
        drop_dominated(winners)
    }
}

/// Removes entries dominated by another entry and sorts by `(b, r)`.
/// Entries must have pairwise distinct `(b, r)`.
fn drop_dominated(mut entries: Vec<Entry>) -> LabelSet {
    entries.sort_by(|a, b| {
        a.label
            .cost
            .total_cmp(&b.label.cost)
            .then(b.label.blue.cmp(&a.label.blue))
            .then(b.label.red.cmp(&a.label.red))
    });
    let max_blue = entries.iter().map(|e| e.label.blue).max().unwrap_or(0) as usize;
    // Fenwick tree over reversed blue index: prefix max of red over blue >= b.
    let size = max_blue + 1;
    let mut fenwick = vec![-1i64; size + 1];
    let query = |fenwick: &[i64], b: usize| {
        let mut i = size - b;
        let mut best = -1;
        while i > 0 {
            best = best.max(fenwick[i]);
            i &= i - 1;
        }
        best
    };
    let mut kept = Vec::with_capacity(entries.len());
    for e in entries {
        let b = e.label.blue as usize;
        if query(&fenwick, b) >= e.label.red as i64 {
            continue;
        }
        let mut i = size - b;
        while i <= size {
            fenwick[i] = fenwick[i].max(e.label.red as i64);
            i += i & i.wrapping_neg();
        }
        kept.push(e);
    }
    kept.sort_by_key(|e| (e.label.blue, e.label.red));
    LabelSet {
        labels: kept.iter().map(|e| e.label).collect(),
        origins: kept.iter().map(|e| e.origin).collect(),
    }
}

/// Merges a child's label set into `acc`: every label of `acc` either skips
/// the child or is combined with one child label plus `edge_weight`.
/// The result's origins point into `acc` and `child`.
pub fn merge_child(acc: &LabelSet, child: &LabelSet, edge_weight: f64, pruning: Pruning) -> LabelSet {
    let max_b = acc.labels.iter().map(|l| l.blue).max().unwrap_or(0)
        + child.labels.iter().map(|l| l.blue).max().unwrap_or(0);
    let max_r = acc.labels.iter().map(|l| l.red).max().unwrap_or(0)
        + child.labels.iter().map(|l| l.red).max().unwrap_or(0);
    let mut table = KeyedMin::new(pruning, Some(max_b), Some(max_r));
    for (i, a) in acc.labels.iter().enumerate() {
        table.offer(*a, LabelOrigin { prev: i as u32, child: None });
        for (j, c) in child.labels.iter().enumerate() {
            let combined = DpLabel::new(a.blue + c.blue, a.red + c.red, a.cost + c.cost + edge_weight);
            table.offer(combined, LabelOrigin { prev: i as u32, child: Some(j as u32) });
        }
    }
    table.finish()
}

/// Per-node DP state: the running set after each child merge and the final set.
#[derive(Clone, Debug, PartialEq)]
pub struct NodeTable {
    /// `layers[0]` is the base label; `layers[k]` follows the `k`-th child.
    layers: Vec<LabelSet>,
    /// Origins point into the last layer.
    final_set: LabelSet,
}

/// DP result for a whole tree.
#[derive(Clone, Debug, PartialEq)]
pub struct DpTable {
    pruning: Pruning,
    root: NodeId,
    nodes: Vec<NodeTable>,
}

impl DpTable {
    pub fn pruning(&self) -> Pruning {
        self.pruning
    }

    /// Final label set at `v`.
    pub fn labels_at(&self, v: NodeId) -> &LabelSet {
        &self.nodes[v].final_set
    }

    pub fn root_labels(&self) -> &LabelSet {
        self.labels_at(self.root)
    }

    /// Child nodes of the tree edges selected by label `index` at `v`.
    pub fn reconstruct(&self, tree: &WeightedTree, v: NodeId, index: usize) -> Vec<NodeId> {
        let mut selected = Vec::new();
        let mut stack = vec![(v, index)];
        while let Some((node, idx)) = stack.pop() {
            let table = &self.nodes[node];
            let mut cur = table.final_set.origins[idx].prev as usize;
            let children = tree.children(node);
            for k in (1..table.layers.len()).rev() {
                let origin = table.layers[k].origins[cur];
                if let Some(ci) = origin.child {
                    let child = children[k - 1];
                    selected.push(child);
                    stack.push((child, ci as usize));
                }
                cur = origin.prev as usize;
            }
        }
        selected.sort_unstable();
        selected
    }
}

/// Runs the post-order DP over `tree` with node colors `colors`.
pub fn run_dp(tree: &WeightedTree, colors: &[Color], pruning: Pruning) -> Result<DpTable> {
    if colors.len() != tree.n() {
        return Err(Error::InvalidParameter(format!("{} colors for a tree on {} nodes", colors.len(), tree.n())));
    }
    if let Pruning::Bucketed { epsilon } = pruning {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidParameter(format!("epsilon = {epsilon} must be positive")));
        }
    }
    let mut nodes: Vec<Option<NodeTable>> = vec![None; tree.n()];
    for v in tree.post_order() {
        let mut layers = vec![LabelSet::base(colors[v])];
        for &c in tree.children(v) {
            let child = nodes[c].as_ref().map(|t| &t.final_set).ok_or_else(|| {
                Error::Internal(format!("child {c} of {v} not processed before its parent"))
            })?;
            let merged = merge_child(layers.last().unwrap_or(&LabelSet::default()), child, tree.weight(c), Pruning::Exact);
            layers.push(merged);
        }
        let final_set = layers.last().map(|l| l.pruned(pruning)).unwrap_or_default();
        nodes[v] = Some(NodeTable { layers, final_set });
    }
    let nodes = nodes
        .into_iter()
        .enumerate()
        .map(|(v, t)| t.ok_or_else(|| Error::Internal(format!("node {v} unreachable from the root"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(DpTable { pruning, root: tree.root(), nodes })
}

/// One activated tree edge `child -> parent` with its timestamp.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TreeActivation {
    pub child: NodeId,
    pub parent: NodeId,
    pub timestamp: Timestamp,
}

/// Labeling of a rooted subtree: one timestamp per selected edge.
#[derive(Clone, Debug, PartialEq)]
pub struct TreeSolution {
    /// Sorted by child.
    pub activations: Vec<TreeActivation>,
    pub blue: u32,
    pub red: u32,
    pub weighted_cost: f64,
}

impl TreeSolution {
    /// Root plus every selected child endpoint.
    pub fn selected_nodes(&self, root: NodeId) -> Vec<NodeId> {
        let mut nodes: Vec<NodeId> = self.activations.iter().map(|a| a.child).collect();
        nodes.push(root);
        nodes.sort_unstable();
        nodes
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BicriteriaSolution {
    pub solution: TreeSolution,
    /// `(1 + eps)^(H + 1)` for tree height `H`.
    pub xi: f64,
}

/// Per-group counts a tree solution must reach.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Thresholds {
    pub blue: u32,
    pub red: u32,
}

impl Thresholds {
    /// `(ceil(alpha |B|), ceil(alpha |R|))` over `colors`.
    pub fn from_alpha(colors: &[Color], alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidParameter(format!("alpha = {alpha} outside [0, 1]")));
        }
        let blue = colors.iter().filter(|&&c| c == Color::Blue).count() as f64;
        let red = colors.iter().filter(|&&c| c == Color::Red).count() as f64;
        Ok(Thresholds { blue: ceil_requirement(alpha * blue), red: ceil_requirement(alpha * red) })
    }

    /// `ceil(t / xi)` per group.
    pub fn relaxed(&self, xi: f64) -> Self {
        Thresholds {
            blue: ceil_requirement(self.blue as f64 / xi),
            red: ceil_requirement(self.red as f64 / xi),
        }
    }
}

/// Index of the cheapest label meeting `thresholds`; ties prefer larger `(b, r)`.
pub fn select_root_label(labels: &LabelSet, thresholds: Thresholds) -> Option<usize> {
    labels
        .labels()
        .iter()
        .enumerate()
        .filter(|(_, l)| l.blue >= thresholds.blue && l.red >= thresholds.red)
        .min_by(|(_, a), (_, b)| {
            a.cost.total_cmp(&b.cost).then((b.blue, b.red).cmp(&(a.blue, a.red)))
        })
        .map(|(i, _)| i)
}

/// Picks the root label for `thresholds` from a finished table and rebuilds its subtree.
pub fn solve_on_table(tree: &WeightedTree, table: &DpTable, thresholds: Thresholds) -> Result<TreeSolution> {
    let idx = select_root_label(table.root_labels(), thresholds).ok_or_else(|| {
        Error::Infeasible(format!(
            "no root label reaches {} blue and {} red",
            thresholds.blue, thresholds.red
        ))
    })?;
    let label = table.root_labels().labels()[idx];
    let selected = table.reconstruct(tree, tree.root(), idx);
    let activations = schedule_tree_timestamps(&selected, tree)?;
    let weighted_cost = activations.iter().map(|a| tree.weight(a.child)).sum::<f64>();
    if (weighted_cost - label.cost).abs() > 1e-9 * label.cost.max(1.0) {
        return Err(Error::Internal(format!(
            "reconstructed cost {weighted_cost} differs from label cost {}",
            label.cost
        )));
    }
    Ok(TreeSolution { activations, blue: label.blue, red: label.red, weighted_cost })
}

/// Minimum weighted-cost subtree meeting `thresholds` exactly.
pub fn solve_exact_for(tree: &WeightedTree, colors: &[Color], thresholds: Thresholds) -> Result<TreeSolution> {
    let table = run_dp(tree, colors, Pruning::Exact)?;
    solve_on_table(tree, &table, thresholds)
}

/// Exact solve with thresholds `ceil(alpha |B|)`, `ceil(alpha |R|)`.
pub fn solve_exact(tree: &WeightedTree, colors: &[Color], alpha: f64) -> Result<TreeSolution> {
    solve_exact_for(tree, colors, Thresholds::from_alpha(colors, alpha)?)
}

/// `(1 + eps)^(H + 1)`.
pub fn bicriteria_xi(tree: &WeightedTree, epsilon: f64) -> f64 {
    libm::pow(1.0 + epsilon, tree.height() as f64 + 1.0)
}

/// Bucketed DP; returns the cheapest root label whose counts reach
/// `ceil(threshold / xi)`.
pub fn solve_bicriteria_for(
    tree: &WeightedTree,
    colors: &[Color],
    thresholds: Thresholds,
    epsilon: f64,
) -> Result<BicriteriaSolution> {
    let table = run_dp(tree, colors, Pruning::Bucketed { epsilon })?;
    let xi = bicriteria_xi(tree, epsilon);
    let solution = solve_on_table(tree, &table, thresholds.relaxed(xi))?;
    Ok(BicriteriaSolution { solution, xi })
}

pub fn solve_bicriteria(tree: &WeightedTree, colors: &[Color], alpha: f64, epsilon: f64) -> Result<BicriteriaSolution> {
    solve_bicriteria_for(tree, colors, Thresholds::from_alpha(colors, alpha)?, epsilon)
}

/// Gives the selected edge at depth `k` (edges below the root count from 1)
/// timestamp `D - k + 1`, `D` being the deepest selected edge, so timestamps
/// strictly increase toward the root.
pub fn schedule_tree_timestamps(selected: &[NodeId], tree: &WeightedTree) -> Result<Vec<TreeActivation>> {
    let mut in_sel = vec![false; tree.n()];
    for &c in selected {
        if c >= tree.n() {
            return Err(Error::NodeOutOfRange(c, tree.n()));
        }
        in_sel[c] = true;
    }
    let mut out = Vec::with_capacity(selected.len());
    let deepest = selected.iter().map(|&c| tree.depth(c)).max().unwrap_or(0) as Timestamp;
    for &c in selected {
        let parent = tree
            .parent(c)
            .ok_or_else(|| Error::Internal(format!("root {c} selected as a child endpoint")))?;
        if parent != tree.root() && !in_sel[parent] {
            return Err(Error::Internal(format!("selected edge at {c} is disconnected from the root")));
        }
        out.push(TreeActivation { child: c, parent, timestamp: deepest - tree.depth(c) as Timestamp + 1 });
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}
