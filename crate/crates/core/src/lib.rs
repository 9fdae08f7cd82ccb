//! Fair minimum temporal labeling.
//!
//! Given a static graph whose nodes carry a group tag (blue, red or none) and
//! a terminal, compute a small set of timestamped edge activations such that a
//! required number of nodes of *each* group can reach the terminal along a
//! path with strictly increasing timestamps.
//!
//! The crate is organized bottom-up:
//!
//! * [`graph`] holds colored graphs, temporal labelings, temporal
//!   reachability and hop distances.
//! * [`verifier`] checks any labeling against the coverage constraints.
//! * [`frt`] samples a hierarchically separated tree over the hop metric and
//!   contracts it to a weighted spanning tree rooted at the terminal.
//! * [`tree_dp`] solves the problem on that tree, exactly or with geometric
//!   bucketing of the `(blue, red)` counts.
//! * [`projection`] maps a tree solution back to the graph.
//! * [`pipeline`] chains the three stages.
//! * [`baselines`] contains the greedy heuristics used for comparison.
//! * [`instances`] generates synthetic instances.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, timing and the
//! command line live in the companion `fml` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod baselines;
pub mod error;
pub mod frt;
pub mod graph;
pub mod instances;
pub mod pipeline;
pub mod projection;
pub mod tree_dp;
pub mod verifier;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
pub use graph::{Color, ColoredGraph, Coverage, DistanceMatrix, Edge, NodeId, NodeSet, TemporalEdge, TemporalLabeling, Timestamp};
pub use verifier::{FmlInstance, FmlSolution, SolutionMeta, VerifyReport};

/// Ceiling of a fractional requirement, ignoring floating-point noise below
/// `1e-9` (so `0.1 * 30.0` counts as 3, not 4).
pub fn ceil_requirement(x: f64) -> u32 {
    if x <= 0.0 {
        return 0;
    }
    libm::ceil(x - 1e-9).max(0.0) as u32
}
