//! Instance families available from the command line.

use clap::ValueEnum;

use fml_core::instances::{
    assign_groups_by_euclidean, assign_groups_by_proximity, gen_barabasi_albert, gen_geometric, gen_setcover_reduction,
};
use fml_core::ColoredGraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Split {
    /// Nearest/farthest by hop distance.
    Hop,
    /// Nearest/farthest by Euclidean distance (geometric family only).
    Euclidean,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    Geometric { n: usize, radius: f64, blue: usize, red: usize, split: Split },
    Ba { n: usize, m_bar: usize, blue: usize, red: usize },
    SetCover { universe: usize, sets: Vec<Vec<usize>>, chain: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Generated {
    pub graph: ColoredGraph,
    /// Lines written as comments at the top of the instance file.
    pub comments: Vec<String>,
    /// Known optimal labeling size, when the family has one.
    pub optimum: Option<usize>,
}

/// Parses `"0,1;2,3"` into `[[0, 1], [2, 3]]`.
pub fn parse_sets(text: &str) -> Result<Vec<Vec<usize>>, String> {
    text.split(';')
        .map(|set| {
            set.split(',')
                .filter(|t| !t.trim().is_empty())
                .map(|t| t.trim().parse::<usize>().map_err(|_| format!("bad element `{t}` in --sets")))
                .collect()
        })
        .collect()
}

/// Parses `"64,64"` into `(64, 64)`.
pub fn parse_pair(text: &str) -> Result<(usize, usize), String> {
    let parts: Vec<&str> = text.split(',').collect();
    match parts.as_slice() {
        [b, r] => Ok((
            b.trim().parse().map_err(|_| format!("bad count `{b}`"))?,
            r.trim().parse().map_err(|_| format!("bad count `{r}`"))?,
        )),
        _ => Err(format!("expected `BLUE,RED`, found `{text}`")),
    }
}

pub fn generate(family: &Family, seed: u64) -> fml_core::Result<Generated> {
    match family {
        Family::Geometric { n, radius, blue, red, split } => {
            let geo = gen_geometric(*n, *radius, seed)?;
            let graph = match split {
                Split::Hop => assign_groups_by_proximity(&geo.graph, *blue, *red)?,
                Split::Euclidean => assign_groups_by_euclidean(&geo, *blue, *red)?,
            };
            let comments = vec![format!(
                "geometric n={n} radius={radius} seed={seed} kept={} split={split:?}",
                geo.graph.n()
            )];
            Ok(Generated { graph, comments, optimum: None })
        }
        Family::Ba { n, m_bar, blue, red } => {
            let g = gen_barabasi_albert(*n, *m_bar, seed)?;
            let graph = assign_groups_by_proximity(&g, *blue, *red)?;
            Ok(Generated { graph, comments: vec![format!("barabasi-albert n={n} mbar={m_bar} seed={seed}")], optimum: None })
        }
        Family::SetCover { universe, sets, chain } => {
            let sc = gen_setcover_reduction(*universe, sets.clone(), *chain)?;
            let comments = vec![
                format!("set-cover universe={universe} sets={sets:?} chain={chain}"),
                format!("minimum cover {:?}, optimum {} at alpha = 1", sc.min_cover, sc.optimum),
            ];
            Ok(Generated { graph: sc.instance.graph().clone(), comments, optimum: Some(sc.optimum) })
        }
    }
}
