// SPDX-License-Identifier: MPL-2.0
//! Adjustment identification distances between causal graphs.
//!
//! Compares a guessed DAG or CPDAG against a true one by counting the
//! treatment/target pairs whose causal-effect identification, derived from the
//! guess, is wrong in the truth. Three identification strategies are provided
//! (parent, ancestor and optimal adjustment), together with the structural
//! Hamming distance and a distance between a DAG and a causal order.
//!
//! ```
//! use gaid::{aid, Graph, GraphKind, PairFilter, Strategy};
//!
//! let full = Graph::from_edges(3, GraphKind::Dag, &[(0, 1), (0, 2), (1, 2)], &[]).unwrap();
//! let chain = Graph::from_edges(3, GraphKind::Dag, &[(0, 1), (1, 2)], &[]).unwrap();
//! let d = aid(&full, &chain, Strategy::Parent, &PairFilter::all()).unwrap();
//! assert_eq!(d.count, 1);
//! ```

pub mod distances;
pub mod error;
pub mod graph;
pub mod io;
pub mod nodeset;
pub mod oracle;
pub mod order;
pub mod reachability;
pub mod simbench;
pub mod strategies;

pub use distances::{aid, order_aid, shd, with_threads, Distance, DistanceResult, PairFilter, Strategy};
pub use error::{Error, ParseError, Result, ValidationError};
pub use graph::{cpdag_of_dag, validate_cpdag, validate_dag, EdgeState, Graph, GraphKind};
pub use io::{parse_graph, Format};
pub use nodeset::NodeSet;
pub use order::{order_to_dag, PartialOrder};
pub use reachability::AdjustmentVerdict;
pub use strategies::{IdentificationClaim, StrategyOutput};
