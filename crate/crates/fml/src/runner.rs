//! Runs one algorithm on one instance and produces a flat result record.

use std::time::Instant;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use fml_core::baselines::{run_baseline, Baseline};
use fml_core::frt::WeightedTree;
use fml_core::pipeline::{solve_fml_timed, Clock, TreeSolver};
use fml_core::verifier::{verify, verify_pooled, verify_relaxed};
use fml_core::{FmlInstance, FmlSolution};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    FmlExact,
    FmlBicriteria,
    Greedy,
    Closest,
    Alternating,
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::FmlExact => "fml-exact",
            Algorithm::FmlBicriteria => "fml-bicriteria",
            Algorithm::Greedy => "greedy",
            Algorithm::Closest => "closest",
            Algorithm::Alternating => "alternating",
        }
    }

    fn baseline(&self) -> Option<Baseline> {
        match self {
            Algorithm::Greedy => Some(Baseline::Greedy),
            Algorithm::Closest => Some(Baseline::Closest),
            Algorithm::Alternating => Some(Baseline::Alternating),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    /// Only used by `fml-bicriteria`.
    pub epsilon: f64,
    pub seed: u64,
    pub trials: usize,
}

/// One row of results. `seconds`, `embed_seconds` and `dp_seconds` are the
/// only wall-clock columns.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub algorithm: String,
    pub seed: u64,
    pub epsilon: Option<f64>,
    pub trials: usize,
    pub n: usize,
    pub m: usize,
    pub blue_total: usize,
    pub red_total: usize,
    pub required_blue: u32,
    pub required_red: u32,
    /// Number of timestamps in the labeling.
    pub cost: usize,
    /// Sum of hop distances of covered colored nodes (baselines only).
    pub hop_cost: Option<u64>,
    /// Weighted cost of the tree solution (framework only).
    pub tree_cost: Option<f64>,
    pub covered_blue: usize,
    pub covered_red: usize,
    pub tree_blue: Option<u32>,
    pub tree_red: Option<u32>,
    pub tree_height: Option<u32>,
    pub xi: Option<f64>,
    /// Feasible under the algorithm's own rule: relaxed by `xi` for the
    /// bicriteria solver, pooled for greedy, exact otherwise.
    pub feasible: bool,
    /// Feasible under the exact per-group rule.
    pub exact_feasible: bool,
    pub embed_seconds: Option<f64>,
    pub dp_seconds: Option<f64>,
    pub seconds: f64,
    pub error: Option<String>,
}

impl RunRecord {
    /// Record with the wall-clock columns zeroed, for reproducibility checks.
    pub fn without_timing(&self) -> RunRecord {
        RunRecord { embed_seconds: self.embed_seconds.map(|_| 0.0), dp_seconds: self.dp_seconds.map(|_| 0.0), seconds: 0.0, ..self.clone() }
    }
}

pub struct RunOutput {
    pub record: RunRecord,
    pub solution: FmlSolution,
    pub tree: Option<WeightedTree>,
}

struct WallClock(Instant);

impl Clock for WallClock {
    fn now(&self) -> f64 {
        self.0.elapsed().as_secs_f64()
    }
}

fn base_record(instance: &FmlInstance, cfg: &RunConfig) -> RunRecord {
    let g = instance.graph();
    let (required_blue, required_red) = instance.required_counts();
    RunRecord {
        algorithm: cfg.algorithm.name().to_string(),
        seed: cfg.seed,
        epsilon: (cfg.algorithm == Algorithm::FmlBicriteria).then_some(cfg.epsilon),
        trials: if cfg.algorithm.baseline().is_some() { 1 } else { cfg.trials.max(1) },
        n: g.n(),
        m: g.m(),
        blue_total: g.blue_count(),
        red_total: g.red_count(),
        required_blue,
        required_red,
        ..RunRecord::default()
    }
}

/// Record for a run that failed before producing a labeling.
pub fn failed_record(instance: &FmlInstance, cfg: &RunConfig, error: &fml_core::Error) -> RunRecord {
    RunRecord { error: Some(error.to_string()), ..base_record(instance, cfg) }
}

pub fn run(instance: &FmlInstance, cfg: &RunConfig) -> Result<RunOutput, fml_core::Error> {
    let mut record = base_record(instance, cfg);
    let clock = WallClock(Instant::now());
    let (solution, tree) = if let Some(b) = cfg.algorithm.baseline() {
        let start = clock.now();
        let out = run_baseline(b, instance)?;
        record.seconds = clock.now() - start;
        record.hop_cost = Some(out.hop_cost);
        let mut solution = out.solution;
        solution.meta.seconds = record.seconds;
        (solution, None)
    } else {
        let solver = match cfg.algorithm {
            Algorithm::FmlExact => TreeSolver::Exact,
            _ => TreeSolver::Bicriteria { epsilon: cfg.epsilon },
        };
        let (run, times) = solve_fml_timed(instance, solver, cfg.seed, cfg.trials, &clock)?;
        record.seconds = times.total();
        record.embed_seconds = Some(times.metric + times.embed);
        record.dp_seconds = Some(times.dp);
        record.tree_cost = Some(run.tree_stage.solution.weighted_cost);
        record.tree_blue = Some(run.tree_stage.solution.blue);
        record.tree_red = Some(run.tree_stage.solution.red);
        record.tree_height = Some(run.height());
        record.xi = run.solution.meta.xi;
        (run.solution, Some(run.tree))
    };
    let exact = verify(instance, &solution)?;
    let own = match cfg.algorithm {
        Algorithm::FmlBicriteria => verify_relaxed(instance, &solution, record.xi.unwrap_or(1.0))?,
        Algorithm::Greedy => verify_pooled(instance, &solution)?,
        _ => exact.clone(),
    };
    record.cost = solution.cost();
    record.covered_blue = exact.covered_blue;
    record.covered_red = exact.covered_red;
    record.feasible = own.feasible;
    record.exact_feasible = exact.feasible;
    Ok(RunOutput { record, solution, tree })
}
