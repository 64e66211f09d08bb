// SPDX-License-Identifier: MPL-2.0
//! Error types shared across the crate.

use thiserror::Error;

/// Malformed graph or order input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("line {line}: expected {expected} columns, found {found} (matrix must be square)")]
    NotSquare {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}, column {column}: illegal cell value {value:?} (allowed: 0, 1, 2)")]
    IllegalCell {
        line: usize,
        column: usize,
        value: String,
    },
    #[error("empty input")]
    Empty,
}

/// A structural invariant of a graph or order does not hold.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("directed cycle {}", fmt_cycle(.0))]
    Cycle(Vec<usize>),
    #[error("self-loop at node {0}")]
    SelfLoop(usize),
    #[error("duplicate edge between {0} and {1}")]
    MultiEdge(usize, usize),
    #[error("node {node} out of range for a graph with {p} nodes")]
    NodeOutOfRange { node: usize, p: usize },
    #[error("cell ({0},{1}) is 1 but cell ({1},{0}) is not 0")]
    AsymmetricDirected(usize, usize),
    #[error("cell ({0},{1}) is 2 but cell ({1},{0}) is not 2")]
    AsymmetricUndirected(usize, usize),
    #[error("undirected edge {0}—{1} in a graph declared as DAG")]
    UndirectedInDag(usize, usize),
    #[error("no consistent DAG extension exists")]
    NoConsistentExtension,
    #[error("graph is not the completed PDAG of its Markov equivalence class (edge {0}, {1} differs)")]
    NotCompleted(usize, usize),
    #[error("pair ({0},{0}) in a strict partial order")]
    ReflexiveOrder(usize),
    #[error("expected a DAG")]
    NotADag,
}

fn fmt_cycle(c: &[usize]) -> String {
    let parts: Vec<String> = c.iter().map(|v| v.to_string()).collect();
    format!("[{}]", parts.join(" -> "))
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error("node count mismatch: {0} vs {1}")]
    NodeCountMismatch(usize, usize),
    #[error("invalid node {node} for a graph with {p} nodes")]
    InvalidNode { node: usize, p: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("graph has no edges")]
    EmptyGraph,
    #[error("oracle size guard: {p} nodes exceeds limit {limit}")]
    OracleSizeGuard { p: usize, limit: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("report serialization: {0}")]
    Report(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
