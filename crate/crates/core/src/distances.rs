// SPDX-License-Identifier: MPL-2.0
//! Adjustment identification distances, SHD and the DAG-to-order distance.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, ValidationError};
use crate::graph::{EdgeState, Graph, GraphKind};
use crate::nodeset::NodeSet;
use crate::order::{order_to_dag, PartialOrder};
use crate::reachability::{non_amenable_of, possible_descendants_of, verify_adjustment_of};
use crate::strategies::{ancestor_strategy_of, oset_strategy_of, parent_strategy_of, StrategyOutput};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Parent,
    Ancestor,
    Oset,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Parent, Strategy::Ancestor, Strategy::Oset];

    pub(crate) fn run(self, g: &Graph, t: usize) -> StrategyOutput {
        match self {
            Strategy::Parent => parent_strategy_of(g, t),
            Strategy::Ancestor => ancestor_strategy_of(g, t),
            Strategy::Oset => oset_strategy_of(g, t),
        }
    }
}

/// Any of the distances between two graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Distance {
    Parent,
    Ancestor,
    Oset,
    Shd,
}

impl Distance {
    pub fn strategy(self) -> Option<Strategy> {
        match self {
            Distance::Parent => Some(Strategy::Parent),
            Distance::Ancestor => Some(Strategy::Ancestor),
            Distance::Oset => Some(Strategy::Oset),
            Distance::Shd => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Distance::Parent => "parent",
            Distance::Ancestor => "ancestor",
            Distance::Oset => "oset",
            Distance::Shd => "shd",
        }
    }

    /// Computes this distance. The SHD does not accept a pair filter.
    pub fn compute(self, g_true: &Graph, g_guess: &Graph, filter: &PairFilter) -> Result<DistanceResult> {
        match self.strategy() {
            Some(s) => aid(g_true, g_guess, s, filter),
            None if filter.is_all() => shd(g_true, g_guess),
            None => Err(Error::Precondition("shd does not support pair filters".into())),
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Distance {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "parent" => Ok(Distance::Parent),
            "ancestor" => Ok(Distance::Ancestor),
            "oset" => Ok(Distance::Oset),
            "shd" => Ok(Distance::Shd),
            other => Err(format!("unknown distance {other:?}")),
        }
    }
}

/// Restricts the counted pairs to treatments × targets, minus the diagonal.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PairFilter {
    pub treatments: Option<Vec<usize>>,
    pub targets: Option<Vec<usize>>,
}

impl PairFilter {
    /// Every ordered pair of distinct nodes.
    pub fn all() -> Self {
        PairFilter::default()
    }

    pub fn new(treatments: Option<Vec<usize>>, targets: Option<Vec<usize>>) -> Self {
        PairFilter { treatments, targets }
    }

    pub fn is_all(&self) -> bool {
        self.treatments.is_none() && self.targets.is_none()
    }

    fn resolve(&self, p: usize) -> Result<(NodeSet, NodeSet)> {
        let side = |ids: &Option<Vec<usize>>, what: &str| -> Result<NodeSet> {
            match ids {
                None => Ok(NodeSet::full(p)),
                Some(v) if v.is_empty() => Err(Error::Precondition(format!("empty {what} filter"))),
                Some(v) => {
                    if let Some(&node) = v.iter().find(|&&n| n >= p) {
                        return Err(Error::InvalidNode { node, p });
                    }
                    Ok(NodeSet::from_nodes(p, v.iter().copied()))
                }
            }
        };
        Ok((side(&self.treatments, "treatment")?, side(&self.targets, "target")?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceResult {
    /// Number of wrong claims (or differing edges for the SHD).
    pub count: u64,
    /// Number of pairs the count is taken over.
    pub pair_total: u64,
    /// `count / pair_total`, or 0 when there are no pairs.
    pub normalized: f64,
}

impl DistanceResult {
    fn new(count: u64, pair_total: u64) -> Self {
        let normalized = if pair_total == 0 {
            0.0
        } else {
            count as f64 / pair_total as f64
        };
        DistanceResult {
            count,
            pair_total,
            normalized,
        }
    }
}

fn check_same_size(a: &Graph, b: &Graph) -> Result<()> {
    if a.n_nodes() != b.n_nodes() {
        return Err(Error::NodeCountMismatch(a.n_nodes(), b.n_nodes()));
    }
    Ok(())
}

/// Number of wrong claims made for treatment `t`, over the targets in `ys`.
fn mistakes_for(g_true: &Graph, g_guess: &Graph, strategy: Strategy, t: usize, ys: &NodeSet) -> u64 {
    let p = g_true.n_nodes();
    let out = strategy.run(g_guess, t);
    let ts = NodeSet::singleton(p, t);
    let mut count = 0;

    if !out.a.is_empty() {
        // claimed non-identifiable, but amenable in the truth
        let nam = non_amenable_of(g_true, &ts);
        let mut wrong = out.a.difference(&nam);
        wrong.intersect_with(ys);
        count += wrong.len();
    }
    if !out.b.is_empty() {
        // claimed zero effect, but a possible descendant in the truth
        let mut possde = possible_descendants_of(g_true, &ts);
        possde.remove(t);
        possde.intersect_with(&out.b);
        count += possde.intersection_count(ys);
    }
    let mut expansions = 0;
    for group in &out.c {
        if group.targets.is_disjoint(ys) {
            continue;
        }
        let verdict = verify_adjustment_of(g_true, &ts, &group.z, &mut expansions);
        let mut wrong = verdict.nva;
        wrong.intersect_with(&group.targets);
        count += wrong.intersection_count(ys);
    }
    count as u64
}

#[cfg(feature = "parallel")]
fn sum_over(ts: &[usize], f: impl Fn(usize) -> u64 + Sync) -> u64 {
    use rayon::prelude::*;
    ts.par_iter().map(|&t| f(t)).sum()
}

#[cfg(not(feature = "parallel"))]
fn sum_over(ts: &[usize], f: impl Fn(usize) -> u64) -> u64 {
    ts.iter().map(|&t| f(t)).sum()
}

/// Adjustment identification distance: the number of (treatment, target)
/// pairs whose claim, made by `strategy` on `g_guess`, is
/// wrong in `g_true`.
///
/// Either graph may be a DAG or a CPDAG.
pub fn aid(g_true: &Graph, g_guess: &Graph, strategy: Strategy, filter: &PairFilter) -> Result<DistanceResult> {
    check_same_size(g_true, g_guess)?;
    let p = g_true.n_nodes();
    let (tset, ys) = filter.resolve(p)?;
    let pair_total = (tset.len() * ys.len() - tset.intersection_count(&ys)) as u64;
    if p < 2 {
        return Ok(DistanceResult::new(0, pair_total));
    }
    let ts = tset.to_vec();
    let count = sum_over(&ts, |t| mistakes_for(g_true, g_guess, strategy, t, &ys));
    Ok(DistanceResult::new(count, pair_total))
}

/// Structural Hamming distance: unordered node pairs whose edge differs in
/// presence, orientation or type.
pub fn shd(g_a: &Graph, g_b: &Graph) -> Result<DistanceResult> {
    check_same_size(g_a, g_b)?;
    let p = g_a.n_nodes();
    let mut count = 0u64;
    for (x, y) in g_a.directed_edges().chain(g_a.undirected_edges()) {
        if g_a.edge_state(x, y) != g_b.edge_state(x, y) {
            count += 1;
        }
    }
    for (x, y) in g_b.directed_edges().chain(g_b.undirected_edges()) {
        if g_a.edge_state(x, y) == EdgeState::None {
            count += 1;
        }
    }
    Ok(DistanceResult::new(count, (p * p.saturating_sub(1) / 2) as u64))
}

/// Ancestor-AID between a DAG and the transitively closed DAG of a causal order.
pub fn order_aid(g_true: &Graph, order_guess: &PartialOrder) -> Result<DistanceResult> {
    if g_true.kind() != GraphKind::Dag {
        return Err(ValidationError::NotADag.into());
    }
    if g_true.n_nodes() != order_guess.n_nodes() {
        return Err(Error::NodeCountMismatch(g_true.n_nodes(), order_guess.n_nodes()));
    }
    let g_guess = order_to_dag(order_guess)?;
    aid(g_true, &g_guess, Strategy::Ancestor, &PairFilter::all())
}

/// Runs `f` with the distance computations restricted to `threads` workers.
///
/// Without the `parallel` feature everything already runs on the calling
/// thread and `threads` is ignored.
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> Result<R> {
    #[cfg(feature = "parallel")]
    {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build()
            .map_err(|e| Error::Precondition(e.to_string()))?;
        Ok(pool.install(f))
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        Ok(f())
    }
}
