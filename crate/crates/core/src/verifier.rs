//! Feasibility checks for labelings, independent of any solver.

use alloc::format;
use alloc::string::String;

use crate::ceil_requirement;
use crate::error::{Error, Result};
use crate::graph::{coverage_counts, ColoredGraph, Coverage, TemporalLabeling};

/// A problem statement: graph with groups and terminals, the number of
/// terminals `rho` each covered node must reach, and per-group requirements.
#[derive(Clone, Debug, PartialEq)]
pub struct FmlInstance {
    graph: ColoredGraph,
    rho: usize,
    requirement_blue: f64,
    requirement_red: f64,
    alpha: Option<f64>,
}

impl FmlInstance {
    /// Instance with explicit requirements. Rejects requirements larger than
    /// the group they apply to.
    pub fn new(graph: ColoredGraph, rho: usize, requirement_blue: f64, requirement_red: f64) -> Result<Self> {
        if rho == 0 || rho > graph.terminals().len() {
            return Err(Error::InfeasibleRequirement(format!(
                "rho = {rho} with {} terminal(s)",
                graph.terminals().len()
            )));
        }
        for (name, req, size) in [
            ("blue", requirement_blue, graph.blue_count()),
            ("red", requirement_red, graph.red_count()),
        ] {
            if !req.is_finite() || req < 0.0 {
                return Err(Error::InvalidParameter(format!("{name} requirement {req}")));
            }
            if ceil_requirement(req) as usize > size {
                return Err(Error::InfeasibleRequirement(format!(
                    "{name} requirement {req} exceeds group size {size}"
                )));
            }
        }
        Ok(FmlInstance { graph, rho, requirement_blue, requirement_red, alpha: None })
    }

    /// Single-reach instance requiring a fraction `alpha` of each group.
    pub fn with_alpha(graph: ColoredGraph, alpha: f64) -> Result<Self> {
        Self::with_alpha_rho(graph, alpha, 1)
    }

    pub fn with_alpha_rho(graph: ColoredGraph, alpha: f64, rho: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidParameter(format!("alpha = {alpha} outside [0, 1]")));
        }
        let req_b = alpha * graph.blue_count() as f64;
        let req_r = alpha * graph.red_count() as f64;
        let mut inst = Self::new(graph, rho, req_b, req_r)?;
        inst.alpha = Some(alpha);
        Ok(inst)
    }

    pub fn graph(&self) -> &ColoredGraph {
        &self.graph
    }

    pub fn rho(&self) -> usize {
        self.rho
    }

    pub fn alpha(&self) -> Option<f64> {
        self.alpha
    }

    pub fn requirement_blue(&self) -> f64 {
        self.requirement_blue
    }

    pub fn requirement_red(&self) -> f64 {
        self.requirement_red
    }

    /// Integer requirements `(ceil(req_B), ceil(req_R))`.
    pub fn required_counts(&self) -> (u32, u32) {
        (ceil_requirement(self.requirement_blue), ceil_requirement(self.requirement_red))
    }

    /// Pooled requirement `ceil(req_B + req_R)` used by the group-agnostic baseline.
    pub fn required_total(&self) -> u32 {
        ceil_requirement(self.requirement_blue + self.requirement_red)
    }
}

/// Provenance attached to a labeling.
#[derive(Clone, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SolutionMeta {
    pub algorithm: String,
    pub seed: Option<u64>,
    pub epsilon: Option<f64>,
    /// Declared coverage relaxation factor; `None` means exact coverage.
    pub xi: Option<f64>,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FmlSolution {
    labeling: TemporalLabeling,
    cost: usize,
    pub meta: SolutionMeta,
}

impl FmlSolution {
    pub fn new(labeling: TemporalLabeling, meta: SolutionMeta) -> Self {
        let cost = labeling.size();
        FmlSolution { labeling, cost, meta }
    }

    pub fn labeling(&self) -> &TemporalLabeling {
        &self.labeling
    }

    /// `|labeling|`.
    pub fn cost(&self) -> usize {
        self.cost
    }

    pub fn into_labeling(self) -> TemporalLabeling {
        self.labeling
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VerifyReport {
    pub feasible: bool,
    pub covered_blue: usize,
    pub covered_red: usize,
    pub required_blue: u32,
    pub required_red: u32,
    pub cost: usize,
    pub slack_blue: i64,
    pub slack_red: i64,
    pub xi: f64,
}

fn report(instance: &FmlInstance, labeling: &TemporalLabeling, required: (u32, u32), xi: f64) -> Result<VerifyReport> {
    labeling.validate(instance.graph())?;
    let Coverage { blue, red } = coverage_counts(instance.graph(), labeling, instance.rho())?;
    let slack_blue = blue as i64 - required.0 as i64;
    let slack_red = red as i64 - required.1 as i64;
    Ok(VerifyReport {
        feasible: slack_blue >= 0 && slack_red >= 0,
        covered_blue: blue,
        covered_red: red,
        required_blue: required.0,
        required_red: required.1,
        cost: labeling.size(),
        slack_blue,
        slack_red,
        xi,
    })
}

/// Checks both group requirements exactly.
pub fn verify(instance: &FmlInstance, solution: &FmlSolution) -> Result<VerifyReport> {
    report(instance, solution.labeling(), instance.required_counts(), 1.0)
}

/// Checks `covered_c >= ceil(req_c / xi)` for both groups.
pub fn verify_relaxed(instance: &FmlInstance, solution: &FmlSolution, xi: f64) -> Result<VerifyReport> {
    if !(xi >= 1.0 && xi.is_finite()) {
        return Err(Error::InvalidParameter(format!("xi = {xi} must be >= 1")));
    }
    let required = (
        ceil_requirement(instance.requirement_blue() / xi),
        ceil_requirement(instance.requirement_red() / xi),
    );
    report(instance, solution.labeling(), required, xi)
}

/// Checks only the pooled count `covered_B + covered_R >= ceil(req_B + req_R)`.
/// The per-group slacks in the report are still relative to the per-group
/// requirements.
pub fn verify_pooled(instance: &FmlInstance, solution: &FmlSolution) -> Result<VerifyReport> {
    let mut r = report(instance, solution.labeling(), instance.required_counts(), 1.0)?;
    r.feasible = r.covered_blue + r.covered_red >= instance.required_total() as usize;
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Color::{Blue as B, Red as R, Uncolored as U};
    use alloc::vec;
    use proptest::prelude::*;

    fn solution(entries: &[(usize, usize, u64)]) -> FmlSolution {
        let mut l = TemporalLabeling::new();
        for &(u, v, t) in entries {
            l.insert(u, v, t).unwrap();
        }
        FmlSolution::new(l, SolutionMeta::default())
    }

    /// t=0 center with two arms: 0-1(B)-2(B) and 0-3(R)-4(R).
    fn toy() -> ColoredGraph {
        ColoredGraph::new(5, [(0, 1), (1, 2), (0, 3), (3, 4)], vec![U, B, B, R, R], vec![0]).unwrap()
    }

    #[test]
    fn zero_requirement_is_feasible() {
        let inst = FmlInstance::with_alpha(toy(), 0.0).unwrap();
        let r = verify(&inst, &solution(&[])).unwrap();
        assert!(r.feasible);
        assert_eq!(r.cost, 0);
    }

    #[test]
    fn equitable_vs_red_only() {
        let inst = FmlInstance::with_alpha(toy(), 0.5).unwrap();
        // Connects both reds (half of the colored nodes), no blue.
        let red_only = verify(&inst, &solution(&[(3, 4, 1), (0, 3, 2)])).unwrap();
        assert!(!red_only.feasible);
        assert_eq!((red_only.covered_blue, red_only.covered_red), (0, 2));
        assert!(red_only.slack_blue < 0);
        // One node of each group.
        let fair = verify(&inst, &solution(&[(0, 1, 1), (0, 3, 1)])).unwrap();
        assert!(fair.feasible);
        assert_eq!((fair.covered_blue, fair.covered_red), (1, 1));
    }

    #[test]
    fn relaxed_thresholds() {
        // 32 blue leaves around t; the first 31 are labeled.
        let n = 34;
        let mut colors = vec![B; n];
        colors[0] = U;
        colors[33] = R;
        let g = ColoredGraph::new(n, (1..n).map(|u| (0, u)), colors, vec![0]).unwrap();
        let inst = FmlInstance::new(g, 1, 32.0, 0.0).unwrap();
        let entries: alloc::vec::Vec<_> = (1..=31).map(|u| (0, u, 1)).collect();
        let sol = solution(&entries);
        assert!(verify_relaxed(&inst, &sol, 1.05).unwrap().feasible);
        assert!(!verify_relaxed(&inst, &sol, 1.0).unwrap().feasible);
        assert_eq!(verify_relaxed(&inst, &sol, 1.0).unwrap().feasible, verify(&inst, &sol).unwrap().feasible);
        assert!(verify_relaxed(&inst, &sol, 0.5).is_err());
    }

    #[test]
    fn invalid_labeling_is_an_error_not_infeasible() {
        let inst = FmlInstance::with_alpha(toy(), 0.5).unwrap();
        assert_eq!(verify(&inst, &solution(&[(1, 3, 1)])), Err(Error::UnknownEdge(1, 3)));
    }

    #[test]
    fn construction_rejects_impossible_requirements() {
        assert!(matches!(FmlInstance::new(toy(), 1, 3.0, 0.0), Err(Error::InfeasibleRequirement(_))));
        assert!(matches!(FmlInstance::new(toy(), 2, 0.0, 0.0), Err(Error::InfeasibleRequirement(_))));
        assert!(FmlInstance::with_alpha(toy(), 1.5).is_err());
        assert!(FmlInstance::with_alpha(toy(), -0.1).is_err());
        assert_eq!(FmlInstance::with_alpha(toy(), 0.5).unwrap().required_counts(), (1, 1));
    }

    #[test]
    fn pooled_check_ignores_balance() {
        let inst = FmlInstance::with_alpha(toy(), 0.5).unwrap();
        let sol = solution(&[(3, 4, 1), (0, 3, 2)]);
        assert!(verify_pooled(&inst, &sol).unwrap().feasible);
        assert!(!verify(&inst, &sol).unwrap().feasible);
    }

    proptest! {
        #[test]
        fn exact_feasibility_implies_relaxed(mask in 0u8..16, xi in 1.0f64..4.0, alpha in 0.0f64..=1.0) {
            let inst = FmlInstance::with_alpha(toy(), alpha).unwrap();
            let edges = [(0usize, 1usize), (1, 2), (0, 3), (3, 4)];
            let ts = [2u64, 1, 2, 1];
            let entries: alloc::vec::Vec<_> = (0..4)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| (edges[i].0, edges[i].1, ts[i]))
                .collect();
            let sol = solution(&entries);
            if verify(&inst, &sol).unwrap().feasible {
                prop_assert!(verify_relaxed(&inst, &sol, xi).unwrap().feasible);
            }
        }
    }
}
