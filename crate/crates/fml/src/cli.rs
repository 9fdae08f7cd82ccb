//! Command-line interface.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use fml_core::verifier::{verify, verify_pooled, verify_relaxed};
use fml_core::{ColoredGraph, FmlInstance, FmlSolution, SolutionMeta};

use crate::bench::{run_bench, to_csv, BenchConfig, InstanceSource};
use crate::error::{CliError, CliResult, EXIT_INFEASIBLE, EXIT_OK};
use crate::family::{generate, parse_pair, parse_sets, Family, Split};
use crate::format::{ingest_edge_list, read_graph, read_labeling, read_text, write_graph, write_labeling, write_text, write_tree};
use crate::runner::{run, Algorithm, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "fml", version, about = "Fair minimum temporal labeling solver")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate or ingest an instance.
    Gen(GenArgs),
    /// Solve an instance and write the labeling.
    Solve(SolveArgs),
    /// Check a labeling against an instance.
    Verify(VerifyArgs),
    /// Run algorithms over many seeds and write a CSV table.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    Geometric,
    Ba,
    Setcover,
    /// Raw edge list (`--input`), colors (`--color-file`) and `--terminal`.
    Edgelist,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: FamilyName,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long)]
    pub mbar: Option<usize>,
    /// Group sizes as `BLUE,RED`.
    #[arg(long)]
    pub colors: Option<String>,
    #[arg(long, value_enum, default_value = "hop")]
    pub split: Split,
    #[arg(long)]
    pub universe: Option<usize>,
    /// Set system as `a,b;c,d;...`.
    #[arg(long)]
    pub sets: Option<String>,
    /// Edges from each set node to the terminal.
    #[arg(long)]
    pub chain: Option<usize>,
}

impl FamilyArgs {
    fn family(&self) -> CliResult<Family> {
        let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| CliError::Usage(format!("--{flag} is required for this family")));
        let colors = || -> CliResult<(usize, usize)> {
            match &self.colors {
                Some(c) => parse_pair(c).map_err(CliError::Usage),
                None => Ok((0, 0)),
            }
        };
        match self.family {
            FamilyName::Geometric => {
                let (blue, red) = colors()?;
                let radius = self.radius.ok_or_else(|| CliError::Usage("--radius is required for this family".into()))?;
                Ok(Family::Geometric { n: need(self.n, "n")?, radius, blue, red, split: self.split })
            }
            FamilyName::Ba => {
                let (blue, red) = colors()?;
                Ok(Family::Ba { n: need(self.n, "n")?, m_bar: need(self.mbar, "mbar")?, blue, red })
            }
            FamilyName::Setcover => {
                let sets = self.sets.as_deref().ok_or_else(|| CliError::Usage("--sets is required".into()))?;
                Ok(Family::SetCover {
                    universe: need(self.universe, "universe")?,
                    sets: parse_sets(sets).map_err(CliError::Usage)?,
                    chain: need(self.chain, "chain")?,
                })
            }
            FamilyName::Edgelist => Err(CliError::Usage("edge lists are read by `gen`, not generated".into())),
        }
    }
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Recorded as a comment only.
    #[arg(long)]
    pub alpha_doc: Option<f64>,
    /// Raw edge list for `--family edgelist`.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// `id B|R` lines for `--family edgelist`.
    #[arg(long)]
    pub color_file: Option<PathBuf>,
    /// Terminal id (original numbering) for `--family edgelist`.
    #[arg(long)]
    pub terminal: Option<u64>,
    /// Instance file to write; the instance goes to stdout if omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Requirements {
    /// Required fraction of each group.
    #[arg(long, conflicts_with_all = ["req_blue", "req_red"])]
    pub alpha: Option<f64>,
    #[arg(long, requires = "req_red")]
    pub req_blue: Option<f64>,
    #[arg(long, requires = "req_blue")]
    pub req_red: Option<f64>,
    /// Terminals each covered node must reach.
    #[arg(long, default_value_t = 1)]
    pub rho: usize,
}

impl Requirements {
    fn instance(&self, graph: ColoredGraph) -> CliResult<FmlInstance> {
        match (self.alpha, self.req_blue, self.req_red) {
            (Some(a), _, _) => Ok(FmlInstance::with_alpha_rho(graph, a, self.rho)?),
            (None, Some(b), Some(r)) => Ok(FmlInstance::new(graph, self.rho, b, r)?),
            _ => Err(CliError::Usage("give --alpha or both --req-blue and --req-red".into())),
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long, value_enum)]
    pub algorithm: Algorithm,
    #[command(flatten)]
    pub requirements: Requirements,
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Sampled trees; the cheapest verified solution is kept.
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    /// Labeling file to write.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// JSON result record to write (also printed to stdout).
    #[arg(long)]
    pub record: Option<PathBuf>,
    /// Write the sampled tree.
    #[arg(long)]
    pub dump_tree: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub solution: PathBuf,
    #[command(flatten)]
    pub requirements: Requirements,
    /// Accept `covered >= ceil(required / xi)` per group.
    #[arg(long, conflicts_with = "pooled")]
    pub xi: Option<f64>,
    /// Only check the pooled count of both groups.
    #[arg(long)]
    pub pooled: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Fixed instance file; otherwise an instance is generated per seed.
    #[arg(long, conflicts_with = "family")]
    pub instance: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub family: Option<FamilyName>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long)]
    pub mbar: Option<usize>,
    #[arg(long)]
    pub colors: Option<String>,
    #[arg(long, value_enum, default_value = "hop")]
    pub split: Split,
    #[arg(long, value_enum, value_delimiter = ',', required = true)]
    pub algorithms: Vec<Algorithm>,
    #[arg(long, value_delimiter = ',', default_value = "0.1")]
    pub epsilon: Vec<f64>,
    /// Seeds as a list `1,2,3` or a range `0..10`.
    #[arg(long, default_value = "0..10")]
    pub seeds: String,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    /// CSV file to write; stdout if omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// JSON metadata file; defaults to the output path with `.json` appended.
    #[arg(long)]
    pub sidecar: Option<PathBuf>,
}

pub fn parse_seeds(text: &str) -> Result<Vec<u64>, String> {
    if let Some((a, b)) = text.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|_| format!("bad seed range `{text}`"))?;
        let b: u64 = b.trim().parse().map_err(|_| format!("bad seed range `{text}`"))?;
        if a >= b {
            return Err(format!("empty seed range `{text}`"));
        }
        return Ok((a..b).collect());
    }
    text.split(',').map(|s| s.trim().parse().map_err(|_| format!("bad seed `{s}`"))).collect()
}

fn print_json<T: Serialize>(value: &T) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value)?;
    let mut out = std::io::stdout().lock();
    writeln!(out, "{text}").map_err(|e| CliError::Output(e.to_string()))
}

fn cmd_gen(args: &GenArgs) -> CliResult<i32> {
    let (graph, mut comments, optimum) = if args.family.family == FamilyName::Edgelist {
        let input = args.input.as_ref().ok_or_else(|| CliError::Usage("--input is required for edgelist".into()))?;
        let terminal = args.terminal.ok_or_else(|| CliError::Usage("--terminal is required for edgelist".into()))?;
        let colors = args.color_file.as_ref().map(|p| read_text(p)).transpose()?;
        let ing = ingest_edge_list(&read_text(input)?, colors.as_deref(), terminal).map_err(|e| e.in_file(input))?;
        let comments = vec![format!("ingested from {} terminal={terminal}", input.display())];
        (ing.graph, comments, None)
    } else {
        let g = generate(&args.family.family()?, args.seed)?;
        (g.graph, g.comments, g.optimum)
    };
    if let Some(a) = args.alpha_doc {
        comments.push(format!("alpha {a}"));
    }
    let text = write_graph(&graph, &comments);
    let mut summary = format!(
        "n={} m={} blue={} red={} terminals={:?}",
        graph.n(),
        graph.m(),
        graph.blue_count(),
        graph.red_count(),
        graph.terminals()
    );
    if let Some(opt) = optimum {
        summary.push_str(&format!(" optimum={opt}"));
    }
    match &args.output {
        Some(p) => {
            write_text(p, &text)?;
            println!("{summary}");
        }
        None => {
            print!("{text}");
            eprintln!("{summary}");
        }
    }
    Ok(EXIT_OK)
}

fn solution_comments(meta: &SolutionMeta) -> Vec<String> {
    let mut c = vec![format!("algorithm {}", meta.algorithm)];
    if let Some(s) = meta.seed {
        c.push(format!("seed {s}"));
    }
    if let Some(e) = meta.epsilon {
        c.push(format!("epsilon {e}"));
    }
    if let Some(x) = meta.xi {
        c.push(format!("xi {x}"));
    }
    c
}

fn cmd_solve(args: &SolveArgs) -> CliResult<i32> {
    let instance = args.requirements.instance(read_graph(&args.instance)?)?;
    let cfg = RunConfig { algorithm: args.algorithm, epsilon: args.epsilon, seed: args.seed, trials: args.trials };
    let out = run(&instance, &cfg)?;
    if let Some(p) = &args.output {
        write_text(p, &write_labeling(out.solution.labeling(), &solution_comments(&out.solution.meta)))?;
    }
    if let (Some(p), Some(tree)) = (&args.dump_tree, &out.tree) {
        write_text(p, &write_tree(tree))?;
    }
    if let Some(p) = &args.record {
        write_text(p, &serde_json::to_string_pretty(&out.record)?)?;
    }
    print_json(&out.record)?;
    Ok(if out.record.feasible { EXIT_OK } else { EXIT_INFEASIBLE })
}

fn cmd_verify(args: &VerifyArgs) -> CliResult<i32> {
    let instance = args.requirements.instance(read_graph(&args.instance)?)?;
    let solution = FmlSolution::new(read_labeling(&args.solution)?, SolutionMeta::default());
    let report = match (args.xi, args.pooled) {
        (Some(xi), _) => verify_relaxed(&instance, &solution, xi)?,
        (None, true) => verify_pooled(&instance, &solution)?,
        (None, false) => verify(&instance, &solution)?,
    };
    print_json(&report)?;
    Ok(if report.feasible { EXIT_OK } else { EXIT_INFEASIBLE })
}

#[derive(Serialize)]
struct Sidecar<'a> {
    version: &'static str,
    source: String,
    algorithms: Vec<&'static str>,
    epsilons: &'a [f64],
    seeds: &'a [u64],
    alpha: f64,
    trials: usize,
    wall_clock_columns: [&'static str; 3],
    aggregates: &'a [crate::bench::Aggregate],
    ratios: &'a [crate::bench::RatioRow],
}

fn cmd_bench(args: &BenchArgs) -> CliResult<i32> {
    let seeds = parse_seeds(&args.seeds).map_err(CliError::Usage)?;
    let (source, source_desc) = match (&args.instance, args.family) {
        (Some(p), _) => (InstanceSource::Fixed(read_graph(p)?), format!("file {}", p.display())),
        (None, Some(family)) => {
            let fa = FamilyArgs {
                family,
                n: args.n,
                radius: args.radius,
                mbar: args.mbar,
                colors: args.colors.clone(),
                split: args.split,
                universe: None,
                sets: None,
                chain: None,
            };
            let f = fa.family()?;
            let desc = format!("{f:?}");
            (InstanceSource::Generated(f), desc)
        }
        (None, None) => return Err(CliError::Usage("give --instance or --family".into())),
    };
    let cfg = BenchConfig {
        source,
        algorithms: args.algorithms.clone(),
        epsilons: args.epsilon.clone(),
        seeds: seeds.clone(),
        alpha: args.alpha,
        trials: args.trials,
    };
    let result = run_bench(&cfg)?;
    let csv = to_csv(&result)?;
    let sidecar = Sidecar {
        version: env!("CARGO_PKG_VERSION"),
        source: source_desc,
        algorithms: args.algorithms.iter().map(|a| a.name()).collect(),
        epsilons: &args.epsilon,
        seeds: &seeds,
        alpha: args.alpha,
        trials: args.trials,
        wall_clock_columns: ["embed_seconds", "dp_seconds", "seconds"],
        aggregates: &result.aggregates,
        ratios: &result.ratios,
    };
    let sidecar_text = serde_json::to_string_pretty(&sidecar)?;
    match &args.output {
        Some(p) => {
            write_text(p, &csv)?;
            let side = args.sidecar.clone().unwrap_or_else(|| {
                let mut s = p.clone().into_os_string();
                s.push(".json");
                PathBuf::from(s)
            });
            write_text(&side, &sidecar_text)?;
        }
        None => {
            print!("{csv}");
            if let Some(side) = &args.sidecar {
                write_text(side, &sidecar_text)?;
            }
        }
    }
    Ok(EXIT_OK)
}

/// Runs a parsed command and returns the process exit code.
pub fn execute(cli: &Cli) -> CliResult<i32> {
    match &cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Bench(a) => cmd_bench(a),
    }
}
