//! Greedy shortest-path heuristics.
//!
//! All three repeatedly pick an uncovered colored node closest to the
//! terminal (ties by smallest id) and activate its shortest path in a fresh
//! timestamp window. Coverage is recomputed after every activation, so nodes
//! picked up along the way count too. They differ only in which node is
//! eligible next and when they stop.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{bfs_distances, reachable_set, Color, ColoredGraph, Coverage, Edge, NodeId, NodeSet, TemporalLabeling, Timestamp};
use crate::verifier::{FmlInstance, FmlSolution, SolutionMeta};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Baseline {
    /// Closest colored node regardless of group, until the pooled total is met.
    Greedy,
    /// Closest colored node from any group still below quota, until both quotas are met.
    Closest,
    /// Alternates blue and red picks, skipping a group at quota.
    Alternating,
}

impl Baseline {
    pub fn name(&self) -> &'static str {
        match self {
            Baseline::Greedy => "greedy",
            Baseline::Closest => "closest",
            Baseline::Alternating => "alternating",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BaselineOutcome {
    pub solution: FmlSolution,
    /// Sum of hop distances to the terminal over all covered colored nodes.
    pub hop_cost: u64,
    pub coverage: Coverage,
}

struct State<'a> {
    graph: &'a ColoredGraph,
    terminal: NodeId,
    dist: Vec<Option<u32>>,
    /// Colored nodes sorted by (distance, id).
    order: Vec<NodeId>,
    labeling: TemporalLabeling,
    covered: NodeSet,
    windows: Timestamp,
}

impl<'a> State<'a> {
    fn new(graph: &'a ColoredGraph) -> Result<Self> {
        let terminal = graph.single_terminal()?;
        let dist = bfs_distances(graph, terminal);
        let mut order: Vec<NodeId> = (0..graph.n()).filter(|&u| graph.color(u) != Color::Uncolored).collect();
        order.sort_by_key(|&u| (dist[u].unwrap_or(u32::MAX), u));
        let labeling = TemporalLabeling::new();
        let covered = reachable_set(graph, &labeling, terminal)?;
        Ok(State { graph, terminal, dist, order, labeling, covered, windows: 0 })
    }

    fn coverage(&self) -> Coverage {
        let mut c = Coverage::default();
        for u in self.covered.iter() {
            match self.graph.color(u) {
                Color::Blue => c.blue += 1,
                Color::Red => c.red += 1,
                Color::Uncolored => {}
            }
        }
        c
    }

    fn next(&self, eligible: impl Fn(Color) -> bool) -> Option<NodeId> {
        self.order
            .iter()
            .copied()
            .find(|&u| !self.covered.contains(u) && eligible(self.graph.color(u)))
    }

    fn activate(&mut self, source: NodeId) -> Result<()> {
        if self.dist[source].is_none() {
            return Err(Error::NoPath(source, self.terminal));
        }
        let path = crate::graph::shortest_path(self.graph, source, self.terminal)?;
        let start = self.windows * self.graph.n() as Timestamp;
        for (k, &(u, v)) in path.iter().enumerate() {
            let e = Edge::new(u, v).ok_or_else(|| Error::Internal(format!("self-loop {u} on path")))?;
            self.labeling.insert_edge(e, start + k as Timestamp + 1)?;
        }
        self.windows += 1;
        self.covered = reachable_set(self.graph, &self.labeling, self.terminal)?;
        Ok(())
    }

    fn finish(self, name: &str) -> BaselineOutcome {
        let coverage = self.coverage();
        let hop_cost = self
            .covered
            .iter()
            .filter(|&u| self.graph.color(u) != Color::Uncolored)
            .map(|u| self.dist[u].unwrap_or(0) as u64)
            .sum();
        let meta = SolutionMeta { algorithm: String::from(name), ..SolutionMeta::default() };
        BaselineOutcome { solution: FmlSolution::new(self.labeling, meta), hop_cost, coverage }
    }
}

fn out_of_candidates(what: &str) -> Error {
    Error::Infeasible(format!("no uncovered colored node left while {what}"))
}

/// Group-agnostic greedy: stops once `ceil(req_B + req_R)` colored nodes are covered.
pub fn greedy_agnostic(instance: &FmlInstance) -> Result<BaselineOutcome> {
    let mut st = State::new(instance.graph())?;
    let quota = instance.required_total() as usize;
    while st.coverage().total() < quota {
        let u = st.next(|_| true).ok_or_else(|| out_of_candidates("filling the pooled quota"))?;
        st.activate(u)?;
    }
    Ok(st.finish(Baseline::Greedy.name()))
}

/// Closest node from any group below quota, until both quotas are met.
pub fn closest(instance: &FmlInstance) -> Result<BaselineOutcome> {
    let mut st = State::new(instance.graph())?;
    let (qb, qr) = instance.required_counts();
    loop {
        let c = st.coverage();
        let (need_b, need_r) = (c.blue < qb as usize, c.red < qr as usize);
        if !need_b && !need_r {
            break;
        }
        let u = st
            .next(|col| (col == Color::Blue && need_b) || (col == Color::Red && need_r))
            .ok_or_else(|| out_of_candidates("filling the group quotas"))?;
        st.activate(u)?;
    }
    Ok(st.finish(Baseline::Closest.name()))
}

/// Alternates blue and red picks starting with blue; a group at quota is skipped.
pub fn alternating(instance: &FmlInstance) -> Result<BaselineOutcome> {
    let mut st = State::new(instance.graph())?;
    let (qb, qr) = instance.required_counts();
    let mut turn = Color::Blue;
    loop {
        let c = st.coverage();
        let (need_b, need_r) = (c.blue < qb as usize, c.red < qr as usize);
        if !need_b && !need_r {
            break;
        }
        let group = match (turn, need_b, need_r) {
            (Color::Blue, true, _) | (_, true, false) => Color::Blue,
            _ => Color::Red,
        };
        let u = st.next(|col| col == group).ok_or_else(|| out_of_candidates("alternating between groups"))?;
        st.activate(u)?;
        turn = if group == Color::Blue { Color::Red } else { Color::Blue };
    }
    Ok(st.finish(Baseline::Alternating.name()))
}

pub fn run_baseline(baseline: Baseline, instance: &FmlInstance) -> Result<BaselineOutcome> {
    match baseline {
        Baseline::Greedy => greedy_agnostic(instance),
        Baseline::Closest => closest(instance),
        Baseline::Alternating => alternating(instance),
    }
}
