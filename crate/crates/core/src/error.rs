use alloc::string::String;

use crate::graph::NodeId;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid labeling: edge {{{0}, {1}}} is not an edge of the graph")]
    UnknownEdge(NodeId, NodeId),

    #[error("invalid labeling: {0}")]
    InvalidLabeling(String),

    #[error("node {0} is out of range for a graph with {1} nodes")]
    NodeOutOfRange(NodeId, usize),

    #[error("infeasible requirement: {0}")]
    InfeasibleRequirement(String),

    #[error("no path between {0} and {1}")]
    NoPath(NodeId, NodeId),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported instance: {0}")]
    Unsupported(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}
