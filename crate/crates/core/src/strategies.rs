// SPDX-License-Identifier: MPL-2.0
//! Identification strategies: for a treatment `t` and every target `y`, claim
//! that the effect is not identifiable, that it is zero, or that it is
//! identified by adjusting for a set `z`.
//!
//! Inside CPDAGs, parents, ancestors and descendants follow directed edges only.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::nodeset::NodeSet;
use crate::reachability::{ancestors_of, descendants_of, non_amenable_of, proper_ancestors_of};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdentificationClaim {
    NonIdentifiable,
    ZeroEffect,
    AdjustBy(NodeSet),
}

/// Targets that share one adjustment set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjustmentGroup {
    pub z: NodeSet,
    pub targets: NodeSet,
}

/// All claims of a strategy for one treatment.
///
/// `a`, `b` and the targets of `c` partition the nodes other than the treatment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategyOutput {
    pub treatment: usize,
    /// Targets claimed non-identifiable.
    pub a: NodeSet,
    /// Targets claimed to have zero effect.
    pub b: NodeSet,
    /// Adjustment claims, grouped by identical adjustment set and ordered by
    /// their smallest target.
    pub c: Vec<AdjustmentGroup>,
}

impl StrategyOutput {
    /// Adjustment claims as `(target, z)` in ascending target order.
    pub fn adjustments(&self) -> Vec<(usize, &NodeSet)> {
        let mut out: Vec<(usize, &NodeSet)> = self
            .c
            .iter()
            .flat_map(|g| g.targets.iter().map(move |y| (y, &g.z)))
            .collect();
        out.sort_unstable_by_key(|&(y, _)| y);
        out
    }

    /// The claim for target `y`, or `None` for the treatment itself.
    pub fn claim(&self, y: usize) -> Option<IdentificationClaim> {
        if self.a.contains(y) {
            Some(IdentificationClaim::NonIdentifiable)
        } else if self.b.contains(y) {
            Some(IdentificationClaim::ZeroEffect)
        } else {
            self.c
                .iter()
                .find(|g| g.targets.contains(y))
                .map(|g| IdentificationClaim::AdjustBy(g.z.clone()))
        }
    }
}

fn check_treatment(g: &Graph, t: usize) -> Result<()> {
    if t >= g.n_nodes() {
        return Err(Error::InvalidNode { node: t, p: g.n_nodes() });
    }
    Ok(())
}

/// Non-amenable targets and amenable targets of `t`.
fn amenability_split(g: &Graph, t: usize) -> (NodeSet, NodeSet) {
    let ts = NodeSet::singleton(g.n_nodes(), t);
    let nam = non_amenable_of(g, &ts);
    let mut amen = nam.complement();
    amen.remove(t);
    (nam, amen)
}

fn short_circuit(t: usize, nam: NodeSet) -> StrategyOutput {
    let p = nam.capacity();
    StrategyOutput {
        treatment: t,
        a: nam,
        b: NodeSet::new(p),
        c: Vec::new(),
    }
}

fn single_group(z: NodeSet, targets: NodeSet) -> Vec<AdjustmentGroup> {
    if targets.is_empty() {
        Vec::new()
    } else {
        vec![AdjustmentGroup { z, targets }]
    }
}

pub(crate) fn parent_strategy_of(g: &Graph, t: usize) -> StrategyOutput {
    let (nam, amen) = amenability_split(g, t);
    if amen.is_empty() {
        return short_circuit(t, nam);
    }
    let pa = NodeSet::from_nodes(g.n_nodes(), g.parents_of(t).iter().copied());
    let b = pa.intersection(&amen);
    let targets = amen.difference(&pa);
    StrategyOutput {
        treatment: t,
        a: nam,
        b,
        c: single_group(pa, targets),
    }
}

/// Adjust for the parents of the treatment; parents themselves get a zero-effect claim.
pub fn parent_strategy(g: &Graph, t: usize) -> Result<StrategyOutput> {
    check_treatment(g, t)?;
    Ok(parent_strategy_of(g, t))
}

pub(crate) fn ancestor_strategy_of(g: &Graph, t: usize) -> StrategyOutput {
    let (nam, amen) = amenability_split(g, t);
    if amen.is_empty() {
        return short_circuit(t, nam);
    }
    let p = g.n_nodes();
    let ts = NodeSet::singleton(p, t);
    let mut de = descendants_of(g, &ts);
    de.remove(t);
    let mut an = ancestors_of(g, &ts);
    an.remove(t);
    let b = amen.difference(&de);
    let targets = de.intersection(&amen);
    StrategyOutput {
        treatment: t,
        a: nam,
        b,
        c: single_group(an, targets),
    }
}

/// Non-descendants of the treatment get a zero-effect claim; descendants are
/// adjusted for the ancestors of the treatment.
pub fn ancestor_strategy(g: &Graph, t: usize) -> Result<StrategyOutput> {
    check_treatment(g, t)?;
    Ok(ancestor_strategy_of(g, t))
}

/// `pa(cn) ∖ de(t)` where `cn` are the descendants of `t` (other than `t`)
/// that lie on a directed path to `y`. `de` must be `de(t)` including `t`.
fn oset_within(g: &Graph, t: usize, y: usize, de: &NodeSet, scratch: &mut Vec<usize>) -> NodeSet {
    let p = g.n_nodes();
    let mut cn = NodeSet::new(p);
    let mut result = NodeSet::new(p);
    cn.insert(y);
    scratch.clear();
    scratch.push(y);
    while let Some(v) = scratch.pop() {
        for &w in g.parents_of(v) {
            if w != t && de.contains(w) {
                if cn.insert(w) {
                    scratch.push(w);
                }
            } else if !de.contains(w) {
                result.insert(w);
            }
        }
    }
    result
}

/// The optimal adjustment set `O(t, y)`.
///
/// Requires `y` to be a proper descendant of `t` and the graph to be amenable
/// relative to `(t, y)`.
pub fn oset(g: &Graph, t: usize, y: usize) -> Result<NodeSet> {
    check_treatment(g, t)?;
    check_treatment(g, y)?;
    let p = g.n_nodes();
    let ts = NodeSet::singleton(p, t);
    let de = descendants_of(g, &ts);
    if y == t || !de.contains(y) {
        return Err(Error::Precondition(format!("{y} is not a proper descendant of {t}")));
    }
    if non_amenable_of(g, &ts).contains(y) {
        return Err(Error::Precondition(format!("graph is not amenable relative to ({t}, {y})")));
    }
    let mut cn = proper_ancestors_of(g, y, &ts);
    cn.intersect_with(&de);
    let mut pa_cn = NodeSet::new(p);
    for v in cn.iter() {
        pa_cn.extend(g.parents_of(v).iter().copied());
    }
    pa_cn.difference_with(&de);
    Ok(pa_cn)
}

pub(crate) fn oset_strategy_of(g: &Graph, t: usize) -> StrategyOutput {
    let (nam, amen) = amenability_split(g, t);
    if amen.is_empty() {
        return short_circuit(t, nam);
    }
    let p = g.n_nodes();
    let de = descendants_of(g, &NodeSet::singleton(p, t));
    let mut proper_de = de.clone();
    proper_de.remove(t);
    let b = amen.difference(&proper_de);
    let mut groups: HashMap<NodeSet, NodeSet> = HashMap::new();
    let mut scratch = Vec::new();
    for y in proper_de.intersection(&amen).iter() {
        let z = oset_within(g, t, y, &de, &mut scratch);
        groups.entry(z).or_insert_with(|| NodeSet::new(p)).insert(y);
    }
    let mut c: Vec<AdjustmentGroup> = groups
        .into_iter()
        .map(|(z, targets)| AdjustmentGroup { z, targets })
        .collect();
    c.sort_unstable_by_key(|g| g.targets.iter().next());
    StrategyOutput { treatment: t, a: nam, b, c }
}

/// Like the ancestor strategy, but each descendant is adjusted for its
/// optimal adjustment set.
pub fn oset_strategy(g: &Graph, t: usize) -> Result<StrategyOutput> {
    check_treatment(g, t)?;
    Ok(oset_strategy_of(g, t))
}
