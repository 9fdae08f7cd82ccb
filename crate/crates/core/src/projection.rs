//! Maps a tree solution back onto the graph.
//!
//! Each selected tree edge `child -> parent` with tree timestamp `tau` becomes
//! the shortest graph path from `child` to `parent`, labeled
//! `(tau-1)*n + 1, ..., (tau-1)*n + p` in order. Windows for different tree
//! timestamps are disjoint, so concatenating segments keeps timestamps strictly
//! increasing toward the terminal.

use crate::error::{Error, Result};
use crate::frt::WeightedTree;
use crate::graph::{shortest_path, ColoredGraph, Edge, TemporalLabeling, Timestamp};
use crate::tree_dp::TreeSolution;

/// Projected graph labeling; coincident `(edge, timestamp)` pairs are merged.
pub fn project(graph: &ColoredGraph, solution: &TreeSolution, tree: &WeightedTree) -> Result<TemporalLabeling> {
    if tree.n() != graph.n() {
        return Err(Error::InvalidParameter(alloc::format!(
            "tree has {} nodes, graph has {}",
            tree.n(),
            graph.n()
        )));
    }
    let n = graph.n() as Timestamp;
    let mut labeling = TemporalLabeling::new();
    for a in &solution.activations {
        let path = shortest_path(graph, a.child, a.parent).map_err(|_| {
            Error::Internal(alloc::format!("tree edge {}-{} has no graph path", a.child, a.parent))
        })?;
        let start = (a.timestamp - 1) * n;
        for (k, &(u, v)) in path.iter().enumerate() {
            let e = Edge::new(u, v).ok_or_else(|| Error::Internal(alloc::format!("self-loop {u} on path")))?;
            labeling.insert_edge(e, start + k as Timestamp + 1)?;
        }
    }
    Ok(labeling)
}

/// `|project(..)|`, never more than the sum of graph distances over selected edges.
pub fn projected_cost(graph: &ColoredGraph, solution: &TreeSolution, tree: &WeightedTree) -> Result<usize> {
    project(graph, solution, tree).map(|l| l.size())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{reachable_set, Color};
    use crate::tree_dp::TreeActivation;
    use alloc::vec;
    use alloc::vec::Vec;

    fn solution(acts: &[(usize, usize, u64)]) -> TreeSolution {
        TreeSolution {
            activations: acts.iter().map(|&(child, parent, timestamp)| TreeActivation { child, parent, timestamp }).collect(),
            blue: 0,
            red: 0,
            weighted_cost: 0.0,
        }
    }

    fn path_graph(n: usize) -> ColoredGraph {
        ColoredGraph::uncolored(n, (0..n - 1).map(|i| (i, i + 1)), 0).unwrap()
    }

    fn star_tree(n: usize) -> WeightedTree {
        let parent = (0..n).map(|v| if v == 0 { None } else { Some(0) }).collect();
        WeightedTree::from_parents(0, parent, vec![1.0; n]).unwrap()
    }

    #[test]
    fn adjacent_edge_gets_one_label() {
        let g = path_graph(2);
        let l = project(&g, &solution(&[(1, 0, 1)]), &star_tree(2)).unwrap();
        assert_eq!(l.size(), 1);
        assert_eq!(l.timestamps(Edge::new(0, 1).unwrap()).collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn window_arithmetic() {
        // distance 3 from node 3 to 0 on a 10-node path, tau = 2 -> 11, 12, 13
        let g = path_graph(10);
        let l = project(&g, &solution(&[(3, 0, 2)]), &star_tree(10)).unwrap();
        let ts = |u, v| l.timestamps(Edge::new(u, v).unwrap()).collect::<Vec<_>>();
        assert_eq!(ts(2, 3), vec![11]);
        assert_eq!(ts(1, 2), vec![12]);
        assert_eq!(ts(0, 1), vec![13]);
        assert!(reachable_set(&g, &l, 0).unwrap().contains(3));
    }

    #[test]
    fn empty_and_disjoint_costs() {
        let g = path_graph(5);
        assert_eq!(projected_cost(&g, &solution(&[]), &star_tree(5)).unwrap(), 0);
        // star graph: disjoint paths
        let star = ColoredGraph::uncolored(4, [(0, 1), (0, 2), (0, 3)], 0).unwrap();
        assert_eq!(projected_cost(&star, &solution(&[(1, 0, 1), (2, 0, 1)]), &star_tree(4)).unwrap(), 2);
    }

    #[test]
    fn overlapping_paths_are_merged() {
        // 0-1-2, 1-3, 1-4. Tree edges 2->0 and 3->0 at tau=1 share edge {0,1}
        // at timestamp 2.
        let g = ColoredGraph::new(
            5,
            [(0, 1), (1, 2), (1, 3), (1, 4)],
            vec![Color::Uncolored, Color::Uncolored, Color::Blue, Color::Red, Color::Uncolored],
            vec![0],
        )
        .unwrap();
        let sol = solution(&[(2, 0, 1), (3, 0, 1)]);
        assert_eq!(projected_cost(&g, &sol, &star_tree(5)).unwrap(), 3);
        let reach = reachable_set(&g, &project(&g, &sol, &star_tree(5)).unwrap(), 0).unwrap();
        assert!(reach.contains(2) && reach.contains(3));
    }
}
