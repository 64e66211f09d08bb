// SPDX-License-Identifier: MPL-2.0
//! Strict partial orders over the nodes of a graph.

use crate::error::{Error, ParseError, ValidationError};
use crate::graph::{Graph, GraphKind};

/// A set of pairs `(a, b)` meaning `a ≺ b`. The order itself is the
/// transitive closure of the pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialOrder {
    p: usize,
    pairs: Vec<(usize, usize)>,
}

impl PartialOrder {
    pub fn new(p: usize, pairs: Vec<(usize, usize)>) -> Result<Self, ValidationError> {
        for &(a, b) in &pairs {
            for node in [a, b] {
                if node >= p {
                    return Err(ValidationError::NodeOutOfRange { node, p });
                }
            }
            if a == b {
                return Err(ValidationError::ReflexiveOrder(a));
            }
        }
        Ok(PartialOrder { p, pairs })
    }

    /// The total order `order[0] ≺ order[1] ≺ …`.
    pub fn total(order: &[usize]) -> Result<Self, ValidationError> {
        let pairs = order.windows(2).map(|w| (w[0], w[1])).collect();
        PartialOrder::new(order.len(), pairs)
    }

    pub fn n_nodes(&self) -> usize {
        self.p
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Parses lines `a b` (`a ≺ b`); blank lines and `#` comments are skipped.
    pub fn parse(text: &str, p: usize) -> Result<Self, Error> {
        let mut pairs = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let bad = |msg: String| ParseError::Malformed { line: i + 1, msg };
            let fields: Vec<&str> = content.split_whitespace().collect();
            let [a, b] = fields.as_slice() else {
                return Err(bad("expected `a b`".into()).into());
            };
            let id = |s: &str| s.parse::<usize>().map_err(|_| bad(format!("invalid node id {s:?}")));
            pairs.push((id(a)?, id(b)?));
        }
        Ok(PartialOrder::new(p, pairs)?)
    }
}

/// The transitively closed DAG with `a → b` iff `a ≺ b`.
pub fn order_to_dag(o: &PartialOrder) -> Result<Graph, ValidationError> {
    let mut pairs = o.pairs.clone();
    pairs.sort_unstable();
    pairs.dedup();
    let base = Graph::from_edges(o.p, GraphKind::Dag, &pairs, &[])?;
    let mut closed = Vec::new();
    let mut seen = vec![usize::MAX; o.p];
    let mut stack = Vec::new();
    for a in 0..o.p {
        stack.extend_from_slice(base.children_of(a));
        while let Some(v) = stack.pop() {
            if seen[v] == a {
                continue;
            }
            seen[v] = a;
            closed.push((a, v));
            stack.extend_from_slice(base.children_of(v));
        }
    }
    Graph::from_edges(o.p, GraphKind::Dag, &closed, &[])
}
