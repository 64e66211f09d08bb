// SPDX-License-Identifier: MPL-2.0
//! Brute-force reference implementations by exhaustive path enumeration.
//!
//! Everything here follows the textbook definitions directly: simple paths
//! are enumerated, their definite status and blocking are checked on the
//! completed path, and node relations are recomputed with bitmasks. The cost
//! is exponential, so inputs are capped at [`DAG_LIMIT`] / [`CPDAG_LIMIT`] nodes.

use std::collections::HashMap;

use crate::distances::Strategy;
use crate::error::{Error, Result};
use crate::graph::{Graph, GraphKind};
use crate::nodeset::NodeSet;
use crate::strategies::IdentificationClaim;

pub const DAG_LIMIT: usize = 12;
pub const CPDAG_LIMIT: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Step {
    Forward,
    Backward,
    Undirected,
}

/// Bitmask copy of a graph.
#[derive(Debug, Clone)]
struct Masks {
    p: usize,
    ch: Vec<u32>,
    pa: Vec<u32>,
    und: Vec<u32>,
}

fn bit(v: usize) -> u32 {
    1 << v
}

fn members(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |&v| mask & (1 << v) != 0)
}

impl Masks {
    fn new(g: &Graph) -> Result<Self> {
        let limit = match g.kind() {
            GraphKind::Dag => DAG_LIMIT,
            GraphKind::Cpdag => CPDAG_LIMIT,
        };
        let p = g.n_nodes();
        if p > limit {
            return Err(Error::OracleSizeGuard { p, limit });
        }
        let to_mask = |s: &[usize]| s.iter().fold(0u32, |m, &v| m | bit(v));
        Ok(Masks {
            p,
            ch: (0..p).map(|v| to_mask(g.children_of(v))).collect(),
            pa: (0..p).map(|v| to_mask(g.parents_of(v))).collect(),
            und: (0..p).map(|v| to_mask(g.undirected_of(v))).collect(),
        })
    }

    fn adjacent(&self, a: usize, b: usize) -> bool {
        (self.ch[a] | self.pa[a] | self.und[a]) & bit(b) != 0
    }

    fn step(&self, a: usize, b: usize) -> Step {
        if self.ch[a] & bit(b) != 0 {
            Step::Forward
        } else if self.pa[a] & bit(b) != 0 {
            Step::Backward
        } else {
            Step::Undirected
        }
    }

    /// Fixpoint of `start` under `next`.
    fn reach(&self, start: u32, next: impl Fn(usize) -> u32) -> u32 {
        let mut seen = start;
        loop {
            let grown = members(seen).fold(seen, |m, v| m | next(v));
            if grown == seen {
                return seen;
            }
            seen = grown;
        }
    }

    fn de(&self, s: u32) -> u32 {
        self.reach(s, |v| self.ch[v])
    }

    fn an(&self, s: u32) -> u32 {
        self.reach(s, |v| self.pa[v])
    }

    fn possde(&self, s: u32) -> u32 {
        self.reach(s, |v| self.ch[v] | self.und[v])
    }

    /// Calls `f` on every simple path from `s` to `t`.
    fn for_each_path(&self, s: usize, t: usize, f: &mut impl FnMut(&[usize])) {
        let mut path = vec![s];
        self.extend_path(&mut path, bit(s), t, f);
    }

    fn extend_path(&self, path: &mut Vec<usize>, used: u32, t: usize, f: &mut impl FnMut(&[usize])) {
        let v = *path.last().unwrap();
        if v == t {
            f(path);
            return;
        }
        let next = (self.ch[v] | self.pa[v] | self.und[v]) & !used;
        for w in members(next) {
            path.push(w);
            self.extend_path(path, used | bit(w), t, f);
            path.pop();
        }
    }
}

/// What decides whether one definite-status path is blocked.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct PathSig {
    non_colliders: u32,
    /// `de(C)` for every collider `C`.
    collider_de: Vec<u32>,
}

impl PathSig {
    fn blocked(&self, z: u32) -> bool {
        self.non_colliders & z != 0 || self.collider_de.iter().any(|&d| d & z == 0)
    }
}

/// All facts about the simple paths between one ordered pair.
#[derive(Debug, Clone)]
struct PairPaths {
    amenable: bool,
    /// Possibly causal nodes.
    cn: u32,
    forb: u32,
    definite: Vec<PathSig>,
    definite_non_causal: Vec<PathSig>,
}

impl PairPaths {
    fn new(m: &Masks, t: usize, y: usize) -> Self {
        let mut amenable = true;
        let mut cn = 0u32;
        let mut definite = Vec::new();
        let mut definite_non_causal = Vec::new();
        m.for_each_path(t, y, &mut |path| {
            let steps: Vec<Step> = path.windows(2).map(|w| m.step(w[0], w[1])).collect();
            let possibly_directed = steps.iter().all(|&s| s != Step::Backward);
            if possibly_directed {
                if steps[0] == Step::Undirected {
                    amenable = false;
                }
                cn |= path[1..].iter().fold(0, |acc, &v| acc | bit(v));
            }
            let mut sig = PathSig {
                non_colliders: 0,
                collider_de: Vec::new(),
            };
            for i in 1..path.len() - 1 {
                let (u, v, w) = (path[i - 1], path[i], path[i + 1]);
                let (into, out) = (steps[i - 1], steps[i]);
                if into == Step::Forward && out == Step::Backward {
                    sig.collider_de.push(m.de(bit(v)));
                } else if into == Step::Backward
                    || out == Step::Forward
                    || (into == Step::Undirected && out == Step::Undirected && !m.adjacent(u, w))
                {
                    sig.non_colliders |= bit(v);
                } else {
                    return;
                }
            }
            if !possibly_directed {
                definite_non_causal.push(sig.clone());
            }
            definite.push(sig);
        });
        dedup(&mut definite);
        dedup(&mut definite_non_causal);
        let forb = m.possde(cn) | bit(t);
        PairPaths {
            amenable,
            cn,
            forb,
            definite,
            definite_non_causal,
        }
    }

    fn valid_adjustment(&self, z: u32) -> bool {
        self.amenable && z & self.forb == 0 && self.definite_non_causal.iter().all(|s| s.blocked(z))
    }

    fn d_separated(&self, z: u32) -> bool {
        self.definite.iter().all(|s| s.blocked(z))
    }
}

fn dedup(v: &mut Vec<PathSig>) {
    let mut seen = std::collections::HashSet::new();
    v.retain(|s| seen.insert(s.clone()));
}

fn to_mask(s: &NodeSet) -> u32 {
    s.iter().fold(0, |m, v| m | bit(v))
}

fn from_mask(p: usize, mask: u32) -> NodeSet {
    NodeSet::from_nodes(p, members(mask))
}

fn check_pair(g: &Graph, t: usize, y: usize) -> Result<()> {
    for v in [t, y] {
        if v >= g.n_nodes() {
            return Err(Error::InvalidNode { node: v, p: g.n_nodes() });
        }
    }
    if t == y {
        return Err(Error::Precondition("treatment and target must differ".into()));
    }
    Ok(())
}

fn check_z(g: &Graph, t: usize, y: usize, z: &NodeSet) -> Result<()> {
    if z.capacity() != g.n_nodes() {
        return Err(Error::NodeCountMismatch(z.capacity(), g.n_nodes()));
    }
    if z.contains(t) || z.contains(y) {
        return Err(Error::Precondition("treatment, target and z must be disjoint".into()));
    }
    Ok(())
}

/// Whether every definite-status path between `t` and `y` is blocked by `z`.
pub fn naive_d_separated(g: &Graph, t: usize, y: usize, z: &NodeSet) -> Result<bool> {
    let m = Masks::new(g)?;
    check_pair(g, t, y)?;
    check_z(g, t, y, z)?;
    Ok(PairPaths::new(&m, t, y).d_separated(to_mask(z)))
}

/// Whether every possibly directed path from `t` to `y` starts with a directed edge.
pub fn naive_amenable(g: &Graph, t: usize, y: usize) -> Result<bool> {
    let m = Masks::new(g)?;
    check_pair(g, t, y)?;
    Ok(PairPaths::new(&m, t, y).amenable)
}

/// The generalized adjustment criterion for `z` relative to `(t, y)`.
pub fn naive_valid_adjustment(g: &Graph, t: usize, y: usize, z: &NodeSet) -> Result<bool> {
    let m = Masks::new(g)?;
    check_pair(g, t, y)?;
    check_z(g, t, y, z)?;
    Ok(PairPaths::new(&m, t, y).valid_adjustment(to_mask(z)))
}

/// Memoizing oracle over one graph, for checking many `(t, y, z)` triples.
#[derive(Debug)]
pub struct PathOracle {
    masks: Masks,
    pairs: HashMap<(usize, usize), PairPaths>,
}

impl PathOracle {
    pub fn new(g: &Graph) -> Result<Self> {
        Ok(PathOracle {
            masks: Masks::new(g)?,
            pairs: HashMap::new(),
        })
    }

    fn pair(&mut self, t: usize, y: usize) -> &PairPaths {
        assert!(t != y && t < self.masks.p && y < self.masks.p, "invalid pair ({t}, {y})");
        let masks = &self.masks;
        self.pairs.entry((t, y)).or_insert_with(|| PairPaths::new(masks, t, y))
    }

    pub fn amenable(&mut self, t: usize, y: usize) -> bool {
        self.pair(t, y).amenable
    }

    /// `z` must not contain `t` or `y`.
    pub fn valid_adjustment(&mut self, t: usize, y: usize, z: &NodeSet) -> bool {
        let z = to_mask(z);
        self.pair(t, y).valid_adjustment(z)
    }

    /// `z` must not contain `t` or `y`.
    pub fn d_separated(&mut self, t: usize, y: usize, z: &NodeSet) -> bool {
        let z = to_mask(z);
        self.pair(t, y).d_separated(z)
    }

    pub fn possible_descendants(&self, t: usize) -> NodeSet {
        from_mask(self.masks.p, self.masks.possde(bit(t)))
    }

    /// The strategy's claim for `(t, y)`, derived from the definitions.
    pub fn claim(&mut self, strategy: Strategy, t: usize, y: usize) -> IdentificationClaim {
        if !self.amenable(t, y) {
            return IdentificationClaim::NonIdentifiable;
        }
        let m = &self.masks;
        let p = m.p;
        match strategy {
            Strategy::Parent => {
                if m.pa[t] & bit(y) != 0 {
                    IdentificationClaim::ZeroEffect
                } else {
                    IdentificationClaim::AdjustBy(from_mask(p, m.pa[t]))
                }
            }
            Strategy::Ancestor => {
                if m.de(bit(t)) & bit(y) == 0 {
                    IdentificationClaim::ZeroEffect
                } else {
                    IdentificationClaim::AdjustBy(from_mask(p, m.an(bit(t)) & !bit(t)))
                }
            }
            Strategy::Oset => {
                if m.de(bit(t)) & bit(y) == 0 {
                    return IdentificationClaim::ZeroEffect;
                }
                let pp = self.pair(t, y);
                let (cn, forb) = (pp.cn, pp.forb);
                let m = &self.masks;
                let pa_cn = members(cn).fold(0, |acc, v| acc | m.pa[v]);
                IdentificationClaim::AdjustBy(from_mask(p, pa_cn & !forb))
            }
        }
    }

    /// Whether `claim` for `(t, y)` is correct in this graph.
    pub fn verify(&mut self, t: usize, y: usize, claim: &IdentificationClaim) -> bool {
        match claim {
            IdentificationClaim::NonIdentifiable => !self.amenable(t, y),
            IdentificationClaim::ZeroEffect => !self.possible_descendants(t).contains(y),
            IdentificationClaim::AdjustBy(z) => {
                !z.contains(y) && !z.contains(t) && self.valid_adjustment(t, y, z)
            }
        }
    }
}

/// The identification distance by the literal per-pair definition: claim on
/// `g_guess`, verify on `g_true`.
pub fn naive_aid(g_true: &Graph, g_guess: &Graph, strategy: Strategy) -> Result<u64> {
    if g_true.n_nodes() != g_guess.n_nodes() {
        return Err(Error::NodeCountMismatch(g_true.n_nodes(), g_guess.n_nodes()));
    }
    let mut truth = PathOracle::new(g_true)?;
    let mut guess = PathOracle::new(g_guess)?;
    let p = g_true.n_nodes();
    let mut count = 0;
    for t in 0..p {
        for y in (0..p).filter(|&y| y != t) {
            let claim = guess.claim(strategy, t, y);
            if !truth.verify(t, y, &claim) {
                count += 1;
            }
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dag(p: usize, e: &[(usize, usize)]) -> Graph {
        Graph::from_edges(p, GraphKind::Dag, e, &[]).unwrap()
    }
    fn set(p: usize, v: &[usize]) -> NodeSet {
        NodeSet::from_nodes(p, v.iter().copied())
    }
    fn full(p: usize) -> Graph {
        let e: Vec<_> = (0..p).flat_map(|a| (a + 1..p).map(move |b| (a, b))).collect();
        dag(p, &e)
    }

    #[test]
    fn d_separation_examples() {
        let collider = dag(3, &[(0, 1), (2, 1)]);
        assert!(naive_d_separated(&collider, 0, 2, &set(3, &[])).unwrap());
        assert!(!naive_d_separated(&collider, 0, 2, &set(3, &[1])).unwrap());
        let path = Graph::from_edges(3, GraphKind::Cpdag, &[], &[(0, 1), (1, 2)]).unwrap();
        assert!(naive_d_separated(&path, 0, 2, &set(3, &[1])).unwrap());
    }

    #[test]
    fn amenability_examples() {
        assert!(naive_amenable(&full(4), 0, 3).unwrap());
        let edge = Graph::from_edges(2, GraphKind::Cpdag, &[], &[(0, 1)]).unwrap();
        assert!(!naive_amenable(&edge, 0, 1).unwrap());
        let fig1 = Graph::from_edges(4, GraphKind::Cpdag, &[(0, 1), (0, 2), (3, 1), (3, 2)], &[(1, 2)]).unwrap();
        assert!(!naive_amenable(&fig1, 1, 2).unwrap());
    }

    #[test]
    fn adjustment_examples() {
        let g = dag(3, &[(0, 1), (0, 2), (1, 2)]);
        assert!(naive_valid_adjustment(&g, 1, 2, &set(3, &[0])).unwrap());
        assert!(!naive_valid_adjustment(&g, 1, 2, &set(3, &[])).unwrap());
        let chain = dag(3, &[(0, 1), (1, 2)]);
        assert!(naive_valid_adjustment(&chain, 1, 2, &set(3, &[0])).unwrap());
        assert!(naive_valid_adjustment(&g, 1, 2, &set(3, &[1])).is_err());
    }

    #[test]
    fn aid_examples() {
        let chain = dag(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
        assert_eq!(naive_aid(&full(5), &chain, Strategy::Parent).unwrap(), 9);
        for s in Strategy::ALL {
            assert_eq!(naive_aid(&chain, &chain, s).unwrap(), 0);
        }
        let empty = Graph::empty(3, GraphKind::Cpdag);
        let complete = Graph::from_edges(3, GraphKind::Cpdag, &[], &[(0, 1), (0, 2), (1, 2)]).unwrap();
        for s in Strategy::ALL {
            assert_eq!(naive_aid(&empty, &complete, s).unwrap(), 6);
        }
    }

    #[test]
    fn oset_counter_example_count() {
        let guess = dag(3, &[(0, 1), (1, 2)]);
        assert_eq!(naive_aid(&dag(3, &[(0, 2)]), &guess, Strategy::Oset).unwrap(), 0);
        assert_eq!(naive_aid(&dag(3, &[(0, 1), (1, 2), (0, 2)]), &guess, Strategy::Oset).unwrap(), 1);
    }

    #[test]
    fn size_guard() {
        let big = Graph::empty(13, GraphKind::Dag);
        assert!(matches!(naive_amenable(&big, 0, 1), Err(Error::OracleSizeGuard { p: 13, limit: 12 })));
        let big = Graph::empty(9, GraphKind::Cpdag);
        assert!(matches!(naive_aid(&big, &big, Strategy::Parent), Err(Error::OracleSizeGuard { .. })));
    }

    #[test]
    fn valid_adjustment_implies_amenable() {
        let fig1 = Graph::from_edges(4, GraphKind::Cpdag, &[(0, 1), (0, 2), (3, 1), (3, 2)], &[(1, 2)]).unwrap();
        let mut o = PathOracle::new(&fig1).unwrap();
        for t in 0..4 {
            for y in (0..4).filter(|&y| y != t) {
                for zm in 0u32..16 {
                    if zm & (bit(t) | bit(y)) != 0 {
                        continue;
                    }
                    let z = from_mask(4, zm);
                    if o.valid_adjustment(t, y, &z) {
                        assert!(o.amenable(t, y));
                    }
                }
            }
        }
    }
}
