//! Benchmark sweeps over algorithms and seeds.
//!
//! Output is CSV in up to three blocks separated by blank lines: one row per
//! run, one aggregate row per algorithm (and epsilon) with means and sample
//! standard deviations, and, when both tree solvers ran, the mean
//! bicriteria/exact ratio of selected blue and red counts per epsilon.

use std::collections::BTreeMap;

use serde::Serialize;

use fml_core::{ColoredGraph, FmlInstance};

use crate::error::CliResult;
use crate::family::{generate, Family};
use crate::runner::{failed_record, run, Algorithm, RunConfig, RunRecord};

#[derive(Clone, Debug, PartialEq)]
pub enum InstanceSource {
    /// Fresh instance per seed.
    Generated(Family),
    /// One fixed instance; seeds only drive the embedding.
    Fixed(ColoredGraph),
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchConfig {
    pub source: InstanceSource,
    pub algorithms: Vec<Algorithm>,
    pub epsilons: Vec<f64>,
    pub seeds: Vec<u64>,
    pub alpha: f64,
    pub trials: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Aggregate {
    pub algorithm: String,
    pub epsilon: Option<f64>,
    pub runs: usize,
    pub failures: usize,
    pub feasible_runs: usize,
    pub cost_mean: f64,
    pub cost_std: f64,
    pub hop_cost_mean: Option<f64>,
    pub hop_cost_std: Option<f64>,
    pub covered_blue_mean: f64,
    pub covered_blue_std: f64,
    pub covered_red_mean: f64,
    pub covered_red_std: f64,
    pub seconds_mean: f64,
    pub seconds_std: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioRow {
    pub epsilon: f64,
    pub seeds: usize,
    /// Mean over seeds of tree-selected blue count, bicriteria / exact.
    pub blue_ratio_mean: f64,
    pub red_ratio_mean: f64,
    /// Same ratios for counts covered in the graph.
    pub covered_blue_ratio_mean: f64,
    pub covered_red_ratio_mean: f64,
    pub tree_cost_ratio_mean: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchResult {
    pub rows: Vec<RunRecord>,
    pub aggregates: Vec<Aggregate>,
    pub ratios: Vec<RatioRow>,
}

/// Mean and sample standard deviation (0 for fewer than two values).
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        if num == 0.0 { 1.0 } else { f64::INFINITY }
    } else {
        num / den
    }
}

fn runs_for(cfg: &BenchConfig) -> Vec<RunConfig> {
    let mut out = Vec::new();
    for &algorithm in &cfg.algorithms {
        if algorithm == Algorithm::FmlBicriteria {
            for &epsilon in &cfg.epsilons {
                out.push(RunConfig { algorithm, epsilon, seed: 0, trials: cfg.trials });
            }
        } else {
            out.push(RunConfig { algorithm, epsilon: 0.0, seed: 0, trials: cfg.trials });
        }
    }
    out
}

pub fn run_bench(cfg: &BenchConfig) -> CliResult<BenchResult> {
    let mut rows = Vec::new();
    for &seed in &cfg.seeds {
        let graph = match &cfg.source {
            InstanceSource::Generated(f) => generate(f, seed)?.graph,
            InstanceSource::Fixed(g) => g.clone(),
        };
        let instance = FmlInstance::with_alpha(graph, cfg.alpha)?;
        for mut rc in runs_for(cfg) {
            rc.seed = seed;
            let record = match run(&instance, &rc) {
                Ok(out) => out.record,
                Err(e) => failed_record(&instance, &rc, &e),
            };
            rows.push(record);
        }
    }
    let aggregates = aggregate(&rows);
    let ratios = ratios(&rows);
    Ok(BenchResult { rows, aggregates, ratios })
}

type Key = (String, Option<u64>);

fn key(r: &RunRecord) -> Key {
    (r.algorithm.clone(), r.epsilon.map(f64::to_bits))
}

pub fn aggregate(rows: &[RunRecord]) -> Vec<Aggregate> {
    let mut order: Vec<Key> = Vec::new();
    let mut groups: BTreeMap<Key, Vec<&RunRecord>> = BTreeMap::new();
    for r in rows {
        let k = key(r);
        if !groups.contains_key(&k) {
            order.push(k.clone());
        }
        groups.entry(k).or_default().push(r);
    }
    order
        .into_iter()
        .map(|k| {
            let all = &groups[&k];
            let ok: Vec<&RunRecord> = all.iter().copied().filter(|r| r.error.is_none()).collect();
            let col = |f: &dyn Fn(&RunRecord) -> f64| mean_std(&ok.iter().map(|r| f(r)).collect::<Vec<_>>());
            let (cost_mean, cost_std) = col(&|r| r.cost as f64);
            let hops: Vec<f64> = ok.iter().filter_map(|r| r.hop_cost.map(|h| h as f64)).collect();
            let (hop_mean, hop_std) = mean_std(&hops);
            let (covered_blue_mean, covered_blue_std) = col(&|r| r.covered_blue as f64);
            let (covered_red_mean, covered_red_std) = col(&|r| r.covered_red as f64);
            let (seconds_mean, seconds_std) = col(&|r| r.seconds);
            Aggregate {
                algorithm: all[0].algorithm.clone(),
                epsilon: all[0].epsilon,
                runs: all.len(),
                failures: all.len() - ok.len(),
                feasible_runs: ok.iter().filter(|r| r.feasible).count(),
                cost_mean,
                cost_std,
                hop_cost_mean: (!hops.is_empty()).then_some(hop_mean),
                hop_cost_std: (!hops.is_empty()).then_some(hop_std),
                covered_blue_mean,
                covered_blue_std,
                covered_red_mean,
                covered_red_std,
                seconds_mean,
                seconds_std,
            }
        })
        .collect()
}

/// Pairs every successful bicriteria run with the exact run on the same seed.
pub fn ratios(rows: &[RunRecord]) -> Vec<RatioRow> {
    let exact: BTreeMap<u64, &RunRecord> = rows
        .iter()
        .filter(|r| r.algorithm == Algorithm::FmlExact.name() && r.error.is_none())
        .map(|r| (r.seed, r))
        .collect();
    let mut by_eps: Vec<(f64, Vec<[f64; 5]>)> = Vec::new();
    for r in rows.iter().filter(|r| r.algorithm == Algorithm::FmlBicriteria.name() && r.error.is_none()) {
        let (Some(ex), Some(eps)) = (exact.get(&r.seed), r.epsilon) else { continue };
        let v = [
            ratio(r.tree_blue.unwrap_or(0) as f64, ex.tree_blue.unwrap_or(0) as f64),
            ratio(r.tree_red.unwrap_or(0) as f64, ex.tree_red.unwrap_or(0) as f64),
            ratio(r.covered_blue as f64, ex.covered_blue as f64),
            ratio(r.covered_red as f64, ex.covered_red as f64),
            ratio(r.tree_cost.unwrap_or(0.0), ex.tree_cost.unwrap_or(0.0)),
        ];
        match by_eps.iter_mut().find(|(e, _)| *e == eps) {
            Some((_, list)) => list.push(v),
            None => by_eps.push((eps, vec![v])),
        }
    }
    by_eps
        .into_iter()
        .map(|(epsilon, list)| {
            let m = |i: usize| mean_std(&list.iter().map(|v| v[i]).collect::<Vec<_>>()).0;
            RatioRow {
                epsilon,
                seeds: list.len(),
                blue_ratio_mean: m(0),
                red_ratio_mean: m(1),
                covered_blue_ratio_mean: m(2),
                covered_red_ratio_mean: m(3),
                tree_cost_ratio_mean: m(4),
            }
        })
        .collect()
}

fn csv_block<T: Serialize>(items: &[T]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for item in items {
        w.serialize(item)?;
    }
    let bytes = w.into_inner().map_err(|e| crate::error::CliError::Output(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| crate::error::CliError::Output(e.to_string()))
}

/// Runs, aggregates and ratios as CSV blocks separated by blank lines.
pub fn to_csv(result: &BenchResult) -> CliResult<String> {
    let mut out = csv_block(&result.rows)?;
    out.push('\n');
    out.push_str(&csv_block(&result.aggregates)?);
    if !result.ratios.is_empty() {
        out.push('\n');
        out.push_str(&csv_block(&result.ratios)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_std_examples() {
        assert_eq!(mean_std(&[]), (0.0, 0.0));
        assert_eq!(mean_std(&[3.0]), (3.0, 0.0));
        let (m, s) = mean_std(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((s - 1.2909944487358056).abs() < 1e-12);
    }

    #[test]
    fn ratio_of_zero_counts_is_one() {
        assert_eq!(ratio(0.0, 0.0), 1.0);
        assert_eq!(ratio(3.0, 4.0), 0.75);
    }
}
