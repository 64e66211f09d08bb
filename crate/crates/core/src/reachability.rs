// SPDX-License-Identifier: MPL-2.0
//! Linear-time reachability on DAGs and CPDAGs.
//!
//! All traversals use an explicit stack, never enter the start set `t`
//! (walks are proper) and expand neighbors in ascending order.

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphKind};
use crate::nodeset::NodeSet;

/// The edge over which a traversal arrived at a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArrivalEdge {
    Init = 0,
    /// `→ V`: moved from a parent to its child `V`.
    ViaDirectedIn = 1,
    /// `← V`: moved from a child to its parent `V`.
    ViaDirectedOut = 2,
    /// `— V`
    ViaUndirected = 3,
}

/// Status of the walk that reached a node during adjustment verification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WalkStatus {
    Init = 0,
    /// Possibly directed, first edge out of `t` directed, no node of `z` yet.
    PdToOpen = 1,
    /// Possibly directed, first edge directed, passed a node of `z`.
    PdToBlocked = 2,
    /// Possibly directed, first edge undirected, no node of `z` yet.
    PdUndirOpen = 3,
    PdUndirBlocked = 4,
    /// Open non-causal walk.
    NonCausal = 5,
}

/// Nodes for which a candidate adjustment set fails, relative to a fixed
/// treatment set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjustmentVerdict {
    /// Targets `y` such that the graph is not amenable relative to `(t, y)`.
    pub nam: NodeSet,
    /// Targets `y` for which `z` is not a valid adjustment set, plus `z` itself.
    pub nva: NodeSet,
}

fn check_set(g: &Graph, s: &NodeSet) -> Result<()> {
    if s.capacity() != g.n_nodes() {
        return Err(Error::NodeCountMismatch(s.capacity(), g.n_nodes()));
    }
    Ok(())
}

fn check_node(g: &Graph, v: usize) -> Result<()> {
    if v >= g.n_nodes() {
        return Err(Error::InvalidNode { node: v, p: g.n_nodes() });
    }
    Ok(())
}

fn check_disjoint(t: &NodeSet, z: &NodeSet) -> Result<()> {
    if !t.is_disjoint(z) {
        return Err(Error::Precondition(
            "treatment and adjustment sets must be disjoint".into(),
        ));
    }
    Ok(())
}

/// Generic closure of `start` under a neighbor function.
fn closure<'g, F>(g: &'g Graph, start: impl IntoIterator<Item = usize>, next: F) -> NodeSet
where
    F: Fn(usize) -> [&'g [usize]; 2],
{
    let mut seen = NodeSet::new(g.n_nodes());
    let mut stack: Vec<usize> = Vec::new();
    for v in start {
        if seen.insert(v) {
            stack.push(v);
        }
    }
    while let Some(v) = stack.pop() {
        for list in next(v) {
            for &w in list {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
    }
    seen
}

pub(crate) fn descendants_of(g: &Graph, t: &NodeSet) -> NodeSet {
    closure(g, t.iter(), |v| [g.children_of(v), &[]])
}

pub(crate) fn ancestors_of(g: &Graph, t: &NodeSet) -> NodeSet {
    closure(g, t.iter(), |v| [g.parents_of(v), &[]])
}

pub(crate) fn possible_descendants_of(g: &Graph, t: &NodeSet) -> NodeSet {
    closure(g, t.iter(), |v| [g.children_of(v), g.undirected_of(v)])
}

/// `de(t)`: nodes reachable from `t` along directed edges, including `t`.
pub fn descendants(g: &Graph, t: &NodeSet) -> Result<NodeSet> {
    check_set(g, t)?;
    Ok(descendants_of(g, t))
}

/// `an(t)`: nodes with a directed path into `t`, including `t`.
pub fn ancestors(g: &Graph, t: &NodeSet) -> Result<NodeSet> {
    check_set(g, t)?;
    Ok(ancestors_of(g, t))
}

/// `possde(t)`: nodes reachable from `t` along directed edges taken forward
/// and undirected edges, including `t`.
pub fn possible_descendants(g: &Graph, t: &NodeSet) -> Result<NodeSet> {
    check_set(g, t)?;
    Ok(possible_descendants_of(g, t))
}

pub(crate) fn proper_ancestors_of(g: &Graph, y: usize, avoid: &NodeSet) -> NodeSet {
    let mut seen = NodeSet::new(g.n_nodes());
    seen.insert(y);
    let mut stack = vec![y];
    while let Some(v) = stack.pop() {
        for &w in g.parents_of(v) {
            if !avoid.contains(w) && seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen
}

/// Nodes with a directed path to `y` that contains no node of `avoid`,
/// including `y`.
pub fn proper_ancestors(g: &Graph, y: usize, avoid: &NodeSet) -> Result<NodeSet> {
    check_node(g, y)?;
    check_set(g, avoid)?;
    if avoid.contains(y) {
        return Err(Error::Precondition("target must not be in the avoided set".into()));
    }
    Ok(proper_ancestors_of(g, y, avoid))
}

pub(crate) fn non_amenable_of(g: &Graph, t: &NodeSet) -> NodeSet {
    let p = g.n_nodes();
    let mut nam = NodeSet::new(p);
    if g.kind() == GraphKind::Dag {
        return nam;
    }
    let mut visited = t.clone();
    let mut stack: Vec<usize> = Vec::new();
    // every traversal starts with an undirected edge out of t
    for v in t.iter() {
        for &w in g.undirected_of(v) {
            if visited.insert(w) {
                stack.push(w);
            }
        }
    }
    while let Some(v) = stack.pop() {
        nam.insert(v);
        for &w in g.undirected_of(v).iter().chain(g.children_of(v)) {
            if visited.insert(w) {
                stack.push(w);
            }
        }
    }
    nam
}

/// Targets `y ∉ t` reachable from `t` by a proper possibly directed walk whose
/// first edge is undirected, that is, the targets for which the graph is not
/// amenable relative to `(t, y)`. Empty for DAGs.
pub fn non_amenable(g: &Graph, t: &NodeSet) -> Result<NodeSet> {
    check_set(g, t)?;
    Ok(non_amenable_of(g, t))
}

const N_STATUS: u32 = 6;

#[inline]
fn visit_bit(arrival: ArrivalEdge, status: WalkStatus) -> u32 {
    1 << (arrival as u32 * N_STATUS + status as u32)
}

#[inline]
fn transition(status: WalkStatus, moveon: ArrivalEdge, blocked: bool) -> Option<WalkStatus> {
    use ArrivalEdge::{ViaDirectedIn, ViaDirectedOut, ViaUndirected};
    use WalkStatus::*;
    match status {
        WalkStatus::Init => Some(match moveon {
            ViaDirectedIn => PdToOpen,
            ViaUndirected => PdUndirOpen,
            ViaDirectedOut => NonCausal,
            ArrivalEdge::Init => unreachable!("never move on by init"),
        }),
        PdToOpen | PdToBlocked => match moveon {
            ViaDirectedIn | ViaUndirected => Some(if blocked { PdToBlocked } else { status }),
            _ => (!blocked && status == PdToOpen).then_some(NonCausal),
        },
        PdUndirOpen | PdUndirBlocked => match moveon {
            ViaDirectedIn | ViaUndirected => Some(if blocked { PdUndirBlocked } else { status }),
            _ => (!blocked && status == PdUndirOpen).then_some(NonCausal),
        },
        NonCausal => (!blocked).then_some(NonCausal),
    }
}

fn transition_allowed(from: WalkStatus, to: WalkStatus) -> bool {
    use WalkStatus::*;
    match from {
        Init => to != Init,
        PdToOpen => matches!(to, PdToOpen | PdToBlocked | NonCausal),
        PdUndirOpen => matches!(to, PdUndirOpen | PdUndirBlocked | NonCausal),
        PdToBlocked | PdUndirBlocked | NonCausal => to == from,
    }
}

pub(crate) fn verify_adjustment_of(g: &Graph, t: &NodeSet, z: &NodeSet, expansions: &mut usize) -> AdjustmentVerdict {
    use ArrivalEdge::*;
    let p = g.n_nodes();
    let cpdag = g.kind() == GraphKind::Cpdag;
    let mut visited = vec![0u32; p];
    let mut nam = NodeSet::new(p);
    let mut nva = z.clone();
    let mut stack: Vec<(ArrivalEdge, usize, WalkStatus)> = Vec::new();
    for v in t.iter() {
        visited[v] |= visit_bit(Init, WalkStatus::Init);
        stack.push((Init, v, WalkStatus::Init));
    }

    while let Some((arrived, v, status)) = stack.pop() {
        *expansions += 1;
        match status {
            WalkStatus::PdUndirOpen | WalkStatus::PdUndirBlocked => {
                nam.insert(v);
                nva.insert(v);
            }
            WalkStatus::NonCausal | WalkStatus::PdToBlocked => {
                nva.insert(v);
            }
            _ => {}
        }
        let in_z = z.contains(v);
        let mut step = |moveon: ArrivalEdge, w: usize, blocked: bool| {
            if t.contains(w) {
                return;
            }
            if let Some(next) = transition(status, moveon, blocked) {
                debug_assert!(transition_allowed(status, next), "{status:?} -> {next:?}");
                let bit = visit_bit(moveon, next);
                if visited[w] & bit == 0 {
                    visited[w] |= bit;
                    stack.push((moveon, w, next));
                }
            }
        };
        match arrived {
            // collider → v ← w
            ViaDirectedIn => {
                for &w in g.parents_of(v) {
                    step(ViaDirectedOut, w, !in_z);
                }
            }
            Init | ViaDirectedOut => {
                for &w in g.parents_of(v) {
                    step(ViaDirectedOut, w, in_z);
                }
            }
            // — v ← w is never continued
            ViaUndirected => {}
        }
        if cpdag {
            for &w in g.undirected_of(v) {
                step(ViaUndirected, w, in_z);
            }
        }
        for &w in g.children_of(v) {
            step(ViaDirectedIn, w, in_z);
        }
    }
    AdjustmentVerdict { nam, nva }
}

/// Checks `z` as an adjustment set relative to `(t, y)` for every `y` at once.
///
/// `nam` holds the targets with respect to which the graph is not amenable,
/// `nva` the targets for which `z` is not a valid adjustment set together
/// with `z` itself.
pub fn verify_adjustment(g: &Graph, t: &NodeSet, z: &NodeSet) -> Result<AdjustmentVerdict> {
    verify_adjustment_counted(g, t, z).map(|(v, _)| v)
}

/// [`verify_adjustment`] that also reports the number of expanded
/// `(arrival, node, status)` records.
pub fn verify_adjustment_counted(g: &Graph, t: &NodeSet, z: &NodeSet) -> Result<(AdjustmentVerdict, usize)> {
    check_set(g, t)?;
    check_set(g, z)?;
    check_disjoint(t, z)?;
    let mut expansions = 0;
    let verdict = verify_adjustment_of(g, t, z, &mut expansions);
    Ok((verdict, expansions))
}

/// Nodes outside `t` that are d-connected to `t` given `z`.
pub fn d_connected(g: &Graph, t: &NodeSet, z: &NodeSet) -> Result<NodeSet> {
    use ArrivalEdge::*;
    check_set(g, t)?;
    check_set(g, z)?;
    check_disjoint(t, z)?;
    let p = g.n_nodes();
    let mut visited = vec![0u8; p];
    let mut reached = NodeSet::new(p);
    let mut stack: Vec<(ArrivalEdge, usize)> = t.iter().map(|v| (Init, v)).collect();
    while let Some((arrived, v)) = stack.pop() {
        if arrived != Init {
            reached.insert(v);
        }
        let in_z = z.contains(v);
        let (to_parents, to_undirected, to_children) = match arrived {
            Init => (true, true, true),
            ViaDirectedOut => (!in_z, !in_z, !in_z),
            ViaUndirected => (false, !in_z, !in_z),
            ViaDirectedIn => (in_z, false, !in_z),
        };
        let mut push = |moveon: ArrivalEdge, list: &[usize]| {
            for &w in list {
                let bit = 1u8 << moveon as u8;
                if !t.contains(w) && visited[w] & bit == 0 {
                    visited[w] |= bit;
                    stack.push((moveon, w));
                }
            }
        };
        if to_parents {
            push(ViaDirectedOut, g.parents_of(v));
        }
        if to_undirected {
            push(ViaUndirected, g.undirected_of(v));
        }
        if to_children {
            push(ViaDirectedIn, g.children_of(v));
        }
    }
    Ok(reached)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dag(p: usize, e: &[(usize, usize)]) -> Graph {
        Graph::from_edges(p, GraphKind::Dag, e, &[]).unwrap()
    }
    fn cpdag(p: usize, d: &[(usize, usize)], u: &[(usize, usize)]) -> Graph {
        Graph::from_edges(p, GraphKind::Cpdag, d, u).unwrap()
    }
    fn set(p: usize, v: &[usize]) -> NodeSet {
        NodeSet::from_nodes(p, v.iter().copied())
    }
    fn figure1() -> Graph {
        cpdag(4, &[(0, 1), (0, 2), (3, 1), (3, 2)], &[(1, 2)])
    }
    fn full(p: usize) -> Graph {
        let e: Vec<_> = (0..p).flat_map(|a| (a + 1..p).map(move |b| (a, b))).collect();
        dag(p, &e)
    }

    #[test]
    fn ancestral_sets() {
        let chain = dag(3, &[(0, 1), (1, 2)]);
        assert_eq!(descendants(&chain, &set(3, &[0])).unwrap().to_vec(), vec![0, 1, 2]);
        assert_eq!(descendants(&chain, &set(3, &[2])).unwrap().to_vec(), vec![2]);
        assert_eq!(descendants(&figure1(), &set(4, &[3])).unwrap().to_vec(), vec![1, 2, 3]);
        assert_eq!(ancestors(&chain, &set(3, &[2])).unwrap().to_vec(), vec![0, 1, 2]);
        assert_eq!(ancestors(&Graph::empty(3, GraphKind::Dag), &set(3, &[1])).unwrap().to_vec(), vec![1]);
        assert_eq!(ancestors(&full(4), &set(4, &[2])).unwrap().to_vec(), vec![0, 1, 2]);
    }

    #[test]
    fn possible_descendant_sets() {
        let path = cpdag(3, &[], &[(0, 1), (1, 2)]);
        assert_eq!(possible_descendants(&path, &set(3, &[0])).unwrap().to_vec(), vec![0, 1, 2]);
        let collider = dag(3, &[(0, 1), (2, 1)]);
        assert_eq!(possible_descendants(&collider, &set(3, &[0])).unwrap().to_vec(), vec![0, 1]);
        assert_eq!(possible_descendants(&figure1(), &set(4, &[1])).unwrap().to_vec(), vec![1, 2]);
    }

    #[test]
    fn proper_ancestor_sets() {
        let chain = dag(3, &[(0, 1), (1, 2)]);
        assert_eq!(proper_ancestors(&chain, 2, &set(3, &[1])).unwrap().to_vec(), vec![2]);
        assert_eq!(proper_ancestors(&chain, 2, &set(3, &[])).unwrap().to_vec(), vec![0, 1, 2]);
        let g = dag(3, &[(0, 2), (0, 1), (1, 2)]);
        assert_eq!(proper_ancestors(&g, 2, &set(3, &[1])).unwrap().to_vec(), vec![0, 2]);
        assert!(proper_ancestors(&g, 2, &set(3, &[2])).is_err());
    }

    #[test]
    fn amenability() {
        assert!(non_amenable(&full(5), &set(5, &[2])).unwrap().is_empty());
        assert_eq!(non_amenable(&figure1(), &set(4, &[1])).unwrap().to_vec(), vec![2]);
        let path = cpdag(3, &[], &[(0, 1), (1, 2)]);
        assert_eq!(non_amenable(&path, &set(3, &[0])).unwrap().to_vec(), vec![1, 2]);
    }

    #[test]
    fn adjustment_examples() {
        let g = dag(2, &[(0, 1)]);
        let v = verify_adjustment(&g, &set(2, &[0]), &set(2, &[])).unwrap();
        assert!(v.nam.is_empty() && v.nva.is_empty());

        let v = verify_adjustment(&full(4), &set(4, &[2]), &set(4, &[1])).unwrap();
        assert!(v.nva.contains(3));
        let v = verify_adjustment(&full(4), &set(4, &[2]), &set(4, &[0, 1])).unwrap();
        assert_eq!(v.nva.to_vec(), vec![0, 1]);

        // 0 = Z0, 1 = T, 2 = Y
        let g = dag(3, &[(0, 1), (0, 2), (1, 2)]);
        let v = verify_adjustment(&g, &set(3, &[1]), &set(3, &[0])).unwrap();
        assert_eq!(v.nva.to_vec(), vec![0]);
        let v = verify_adjustment(&g, &set(3, &[1]), &set(3, &[])).unwrap();
        assert!(v.nva.contains(2));
    }

    #[test]
    fn adjustment_rejects_overlap() {
        let g = dag(2, &[(0, 1)]);
        assert!(matches!(
            verify_adjustment(&g, &set(2, &[0]), &set(2, &[0])),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn cpdag_verdict_contains_non_amenable() {
        let v = verify_adjustment(&figure1(), &set(4, &[1]), &set(4, &[0, 3])).unwrap();
        assert_eq!(v.nam.to_vec(), vec![2]);
        assert!(v.nam.is_subset(&v.nva));
    }

    #[test]
    fn expansions_are_bounded() {
        let g = full(12);
        let (_, n) = verify_adjustment_counted(&g, &set(12, &[5]), &set(12, &[1, 2])).unwrap();
        assert!(n <= 24 * (g.n_nodes() + g.n_edges()));
    }

    #[test]
    fn d_connection() {
        let collider = dag(3, &[(0, 1), (2, 1)]);
        assert_eq!(d_connected(&collider, &set(3, &[0]), &set(3, &[])).unwrap().to_vec(), vec![1]);
        assert_eq!(d_connected(&collider, &set(3, &[0]), &set(3, &[1])).unwrap().to_vec(), vec![1, 2]);
        let path = cpdag(3, &[], &[(0, 1), (1, 2)]);
        assert_eq!(d_connected(&path, &set(3, &[0]), &set(3, &[1])).unwrap().to_vec(), vec![1]);
    }
}
