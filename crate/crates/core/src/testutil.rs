//! Random graphs and trees shared by unit tests.

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Color, ColoredGraph, NodeId};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Connected graph on `n` nodes: a random spanning tree plus each other
/// pair with probability `p`. Terminal 0, no colors.
pub fn connected_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> ColoredGraph {
    let mut edges = Vec::new();
    let mut order: Vec<NodeId> = (0..n).collect();
    order.shuffle(rng);
    for i in 1..n {
        let j = rng.gen_range(0..i);
        let (u, v) = (order[i], order[j]);
        edges.push((u.min(v), u.max(v)));
    }
    for u in 0..n {
        for v in u + 1..n {
            if !edges.contains(&(u, v)) && rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    ColoredGraph::uncolored(n, edges, 0).unwrap()
}

/// Random parent array rooted at 0 (`parent[v] < v`) with integer weights in `1..=4`.
pub fn random_tree(rng: &mut ChaCha8Rng, n: usize) -> (Vec<Option<NodeId>>, Vec<f64>) {
    let mut parent = Vec::with_capacity(n);
    let mut weight = Vec::with_capacity(n);
    parent.push(None);
    weight.push(0.0);
    for v in 1..n {
        parent.push(Some(rng.gen_range(0..v)));
        weight.push(rng.gen_range(1..=4) as f64);
    }
    (parent, weight)
}

/// Random blue/red/uncolored tags, root uncolored.
pub fn random_colors(rng: &mut ChaCha8Rng, n: usize) -> Vec<Color> {
    (0..n)
        .map(|v| {
            if v == 0 {
                return Color::Uncolored;
            }
            match rng.gen_range(0..3) {
                0 => Color::Blue,
                1 => Color::Red,
                _ => Color::Uncolored,
            }
        })
        .collect()
}
