//! Embed, solve on the tree, project back.

use alloc::format;
use alloc::string::String;

use crate::error::{Error, Result};
use crate::frt::{embed, WeightedTree};
use crate::graph::{all_pairs_hop_distance, DistanceMatrix};
use crate::projection::project;
use crate::tree_dp::{bicriteria_xi, run_dp, solve_on_table, Pruning, Thresholds, TreeSolution};
use crate::verifier::{verify_relaxed, FmlInstance, FmlSolution, SolutionMeta};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TreeSolver {
    Exact,
    Bicriteria { epsilon: f64 },
}

impl TreeSolver {
    pub fn name(&self) -> &'static str {
        match self {
            TreeSolver::Exact => "fml-exact",
            TreeSolver::Bicriteria { .. } => "fml-bicriteria",
        }
    }

    fn pruning(&self) -> Pruning {
        match *self {
            TreeSolver::Exact => Pruning::Exact,
            TreeSolver::Bicriteria { epsilon } => Pruning::Bucketed { epsilon },
        }
    }
}

/// Result of the tree stage.
#[derive(Clone, Debug, PartialEq)]
pub struct TreeStage {
    pub solution: TreeSolution,
    /// `1.0` for the exact solver.
    pub xi: f64,
}

/// Solves on a tree whose nodes carry the instance's colors, with the
/// instance's integer requirements (relaxed by `xi` for the bicriteria solver).
pub fn solve_tree(instance: &FmlInstance, tree: &WeightedTree, solver: TreeSolver) -> Result<TreeStage> {
    let (blue, red) = instance.required_counts();
    let thresholds = Thresholds { blue, red };
    let xi = match solver {
        TreeSolver::Exact => 1.0,
        TreeSolver::Bicriteria { epsilon } => bicriteria_xi(tree, epsilon),
    };
    let table = run_dp(tree, instance.graph().colors(), solver.pruning())?;
    let solution = solve_on_table(tree, &table, thresholds.relaxed(xi))?;
    Ok(TreeStage { solution, xi })
}

/// One full run of the framework, with its intermediate products.
#[derive(Clone, Debug, PartialEq)]
pub struct PipelineRun {
    pub solution: FmlSolution,
    pub tree: WeightedTree,
    pub tree_stage: TreeStage,
    /// Seed the tree was sampled with.
    pub embedding_seed: u64,
}

impl PipelineRun {
    pub fn xi(&self) -> f64 {
        self.tree_stage.xi
    }

    pub fn height(&self) -> u32 {
        self.tree.height()
    }
}

/// Checks the preconditions of the framework: one terminal, `rho = 1` and a
/// connected graph.
pub fn check_instance(instance: &FmlInstance) -> Result<()> {
    instance.graph().single_terminal()?;
    if instance.rho() != 1 {
        return Err(Error::Unsupported(format!("rho = {} (only single-terminal reach is solved)", instance.rho())));
    }
    Ok(())
}

/// Seconds spent in each stage of a run.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct StageTimes {
    pub metric: f64,
    pub embed: f64,
    pub dp: f64,
    pub project: f64,
}

impl StageTimes {
    pub fn total(&self) -> f64 {
        self.metric + self.embed + self.dp + self.project
    }

    fn add(&mut self, other: &StageTimes) {
        self.metric += other.metric;
        self.embed += other.embed;
        self.dp += other.dp;
        self.project += other.project;
    }
}

/// Monotonic time source in seconds; the core crate has no clock of its own.
pub trait Clock {
    fn now(&self) -> f64;
}

/// Clock that always reads zero.
pub struct NoClock;

impl Clock for NoClock {
    fn now(&self) -> f64 {
        0.0
    }
}

/// Samples one tree with `seed`, solves and projects.
pub fn run_once(instance: &FmlInstance, metric: &DistanceMatrix, solver: TreeSolver, seed: u64) -> Result<PipelineRun> {
    run_once_timed(instance, metric, solver, seed, &NoClock).map(|(run, _)| run)
}

pub fn run_once_timed(
    instance: &FmlInstance,
    metric: &DistanceMatrix,
    solver: TreeSolver,
    seed: u64,
    clock: &dyn Clock,
) -> Result<(PipelineRun, StageTimes)> {
    check_instance(instance)?;
    let terminal = instance.graph().single_terminal()?;
    let mut times = StageTimes::default();
    let t0 = clock.now();
    let (_, tree) = embed(metric, terminal, seed)?;
    let t1 = clock.now();
    let tree_stage = solve_tree(instance, &tree, solver)?;
    let t2 = clock.now();
    let labeling = project(instance.graph(), &tree_stage.solution, &tree)?;
    let t3 = clock.now();
    times.embed = t1 - t0;
    times.dp = t2 - t1;
    times.project = t3 - t2;
    let meta = SolutionMeta {
        algorithm: String::from(solver.name()),
        seed: Some(seed),
        epsilon: match solver {
            TreeSolver::Exact => None,
            TreeSolver::Bicriteria { epsilon } => Some(epsilon),
        },
        xi: match solver {
            TreeSolver::Exact => None,
            TreeSolver::Bicriteria { .. } => Some(tree_stage.xi),
        },
        seconds: times.total(),
    };
    Ok((PipelineRun { solution: FmlSolution::new(labeling, meta), tree, tree_stage, embedding_seed: seed }, times))
}

/// Seed for the `k`-th resampled tree; trial 0 uses `seed` itself.
pub fn trial_seed(seed: u64, k: usize) -> u64 {
    seed.wrapping_add((k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Runs `trials` independent trees and keeps the cheapest solution that
/// passes verification at its declared `xi` (first one on ties).
pub fn solve_fml(instance: &FmlInstance, solver: TreeSolver, seed: u64, trials: usize) -> Result<PipelineRun> {
    solve_fml_timed(instance, solver, seed, trials, &NoClock).map(|(run, _)| run)
}

/// As [`solve_fml`], also returning stage times summed over all trials.
pub fn solve_fml_timed(
    instance: &FmlInstance,
    solver: TreeSolver,
    seed: u64,
    trials: usize,
    clock: &dyn Clock,
) -> Result<(PipelineRun, StageTimes)> {
    check_instance(instance)?;
    let t0 = clock.now();
    let metric = all_pairs_hop_distance(instance.graph());
    let mut times = StageTimes { metric: clock.now() - t0, ..StageTimes::default() };
    if !metric.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut best: Option<PipelineRun> = None;
    for k in 0..trials.max(1) {
        let (run, t) = run_once_timed(instance, &metric, solver, trial_seed(seed, k), clock)?;
        times.add(&t);
        if !verify_relaxed(instance, &run.solution, run.xi())?.feasible {
            return Err(Error::Internal(format!("trial {k} produced a labeling that fails verification")));
        }
        if best.as_ref().map_or(true, |b| run.solution.cost() < b.solution.cost()) {
            best = Some(run);
        }
    }
    let mut best = best.ok_or_else(|| Error::Internal("no trial ran".into()))?;
    best.solution.meta.seconds = times.total();
    Ok((best, times))
}
