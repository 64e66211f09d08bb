// SPDX-License-Identifier: MPL-2.0
//! Immutable DAG / CPDAG storage laid out for reachability traversals.
//!
//! Every node owns three sorted neighbor slices (parents, children and
//! undirected neighbors), stored back to back in flat arrays so that a
//! traversal touches contiguous memory only.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::ValidationError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphKind {
    Dag,
    Cpdag,
}

/// State of the edge between an ordered node pair `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeState {
    None,
    /// `a → b`
    Forward,
    /// `a ← b`
    Backward,
    /// `a — b`
    Undirected,
}

/// Compressed neighbor lists: `targets[offsets[v]..offsets[v + 1]]` are the
/// neighbors of `v`, sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Adjacency {
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

impl Adjacency {
    fn build(p: usize, pairs: impl Iterator<Item = (usize, usize)> + Clone) -> Self {
        let mut offsets = vec![0usize; p + 1];
        for (from, _) in pairs.clone() {
            offsets[from + 1] += 1;
        }
        for v in 0..p {
            offsets[v + 1] += offsets[v];
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0usize; offsets[p]];
        for (from, to) in pairs {
            targets[fill[from]] = to;
            fill[from] += 1;
        }
        for v in 0..p {
            targets[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        Adjacency { offsets, targets }
    }

    #[inline]
    fn of(&self, v: usize) -> &[usize] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }
}

/// A partially directed acyclic graph over nodes `0..p`.
///
/// Constructed once and never mutated. The directed part is always acyclic,
/// and a `Dag` carries no undirected edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    p: usize,
    kind: GraphKind,
    n_directed: usize,
    n_undirected: usize,
    parents: Adjacency,
    children: Adjacency,
    undirected: Adjacency,
}

impl Graph {
    /// Builds and validates a graph from explicit edge lists.
    ///
    /// `directed` holds `(from, to)` pairs; every undirected edge is listed
    /// once in either orientation.
    pub fn from_edges(
        p: usize,
        kind: GraphKind,
        directed: &[(usize, usize)],
        undirected: &[(usize, usize)],
    ) -> Result<Graph, ValidationError> {
        for &(a, b) in directed.iter().chain(undirected) {
            for v in [a, b] {
                if v >= p {
                    return Err(ValidationError::NodeOutOfRange { node: v, p });
                }
            }
            if a == b {
                return Err(ValidationError::SelfLoop(a));
            }
        }
        if kind == GraphKind::Dag {
            if let Some(&(a, b)) = undirected.first() {
                return Err(ValidationError::UndirectedInDag(a.min(b), a.max(b)));
            }
        }

        let mut pairs: Vec<(usize, usize)> = directed
            .iter()
            .chain(undirected)
            .map(|&(a, b)| (a.min(b), a.max(b)))
            .collect();
        pairs.sort_unstable();
        if let Some(w) = pairs.windows(2).find(|w| w[0] == w[1]) {
            return Err(ValidationError::MultiEdge(w[0].0, w[0].1));
        }

        let g = Graph {
            p,
            kind,
            n_directed: directed.len(),
            n_undirected: undirected.len(),
            parents: Adjacency::build(p, directed.iter().map(|&(a, b)| (b, a))),
            children: Adjacency::build(p, directed.iter().copied()),
            undirected: Adjacency::build(
                p,
                undirected
                    .iter()
                    .flat_map(|&(a, b)| [(a, b), (b, a)].into_iter()),
            ),
        };
        if let Some(cycle) = g.find_directed_cycle() {
            return Err(ValidationError::Cycle(cycle));
        }
        Ok(g)
    }

    /// Builds a graph from a row-major `p × p` matrix using the cell coding
    /// `1` for `i → j` and `2` (mirrored) for `i — j`.
    ///
    /// With `kind == None` the kind is inferred: any `2` makes it a CPDAG.
    pub fn from_adjacency_matrix(
        p: usize,
        cells: &[u8],
        kind: Option<GraphKind>,
    ) -> Result<Graph, ValidationError> {
        assert_eq!(cells.len(), p * p, "matrix buffer must hold p*p cells");
        let triplets = (0..p).flat_map(|i| {
            (0..p).filter_map(move |j| match cells[i * p + j] {
                0 => None,
                v => Some((i, j, v)),
            })
        });
        Self::from_triplets(p, triplets, kind)
    }

    /// Sparse counterpart of [`Graph::from_adjacency_matrix`]: one
    /// `(row, col, value)` entry per nonzero cell.
    pub fn from_triplets<I>(p: usize, triplets: I, kind: Option<GraphKind>) -> Result<Graph, ValidationError>
    where
        I: IntoIterator<Item = (usize, usize, u8)>,
    {
        let mut directed = Vec::new();
        let mut undirected_cells = Vec::new();
        for (i, j, v) in triplets {
            for node in [i, j] {
                if node >= p {
                    return Err(ValidationError::NodeOutOfRange { node, p });
                }
            }
            if i == j {
                return Err(ValidationError::SelfLoop(i));
            }
            match v {
                1 => directed.push((i, j)),
                2 => undirected_cells.push((i, j)),
                // zero cells carry no information
                _ => {}
            }
        }
        let mut dir_sorted: Vec<(usize, usize)> = directed.clone();
        dir_sorted.sort_unstable();
        dir_sorted.dedup();
        let mut und_sorted = undirected_cells.clone();
        und_sorted.sort_unstable();
        und_sorted.dedup();
        for &(i, j) in &dir_sorted {
            if dir_sorted.binary_search(&(j, i)).is_ok() || und_sorted.binary_search(&(j, i)).is_ok() {
                return Err(ValidationError::AsymmetricDirected(i, j));
            }
        }
        let mut undirected = Vec::new();
        for &(i, j) in &und_sorted {
            if und_sorted.binary_search(&(j, i)).is_err() {
                return Err(ValidationError::AsymmetricUndirected(i, j));
            }
            if i < j {
                undirected.push((i, j));
            }
        }
        let kind = kind.unwrap_or(if undirected.is_empty() {
            GraphKind::Dag
        } else {
            GraphKind::Cpdag
        });
        Graph::from_edges(p, kind, &directed, &undirected)
    }

    /// Empty graph on `p` nodes.
    pub fn empty(p: usize, kind: GraphKind) -> Graph {
        Graph::from_edges(p, kind, &[], &[]).expect("empty graph is valid")
    }

    #[inline]
    pub fn n_nodes(&self) -> usize {
        self.p
    }

    /// Number of edges; directed and undirected edges count once each.
    #[inline]
    pub fn n_edges(&self) -> usize {
        self.n_directed + self.n_undirected
    }

    pub fn n_undirected_edges(&self) -> usize {
        self.n_undirected
    }

    #[inline]
    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    #[inline]
    pub fn parents_of(&self, v: usize) -> &[usize] {
        self.parents.of(v)
    }

    #[inline]
    pub fn children_of(&self, v: usize) -> &[usize] {
        self.children.of(v)
    }

    #[inline]
    pub fn undirected_of(&self, v: usize) -> &[usize] {
        self.undirected.of(v)
    }

    /// State of the edge between `a` and `b`, seen from `a`.
    pub fn edge_state(&self, a: usize, b: usize) -> EdgeState {
        if self.children_of(a).binary_search(&b).is_ok() {
            EdgeState::Forward
        } else if self.parents_of(a).binary_search(&b).is_ok() {
            EdgeState::Backward
        } else if self.undirected_of(a).binary_search(&b).is_ok() {
            EdgeState::Undirected
        } else {
            EdgeState::None
        }
    }

    pub fn is_adjacent(&self, a: usize, b: usize) -> bool {
        self.edge_state(a, b) != EdgeState::None
    }

    /// All directed edges `(from, to)` in lexicographic order.
    pub fn directed_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.p).flat_map(move |v| self.children_of(v).iter().map(move |&c| (v, c)))
    }

    /// All undirected edges as `(a, b)` with `a < b`.
    pub fn undirected_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.p).flat_map(move |v| {
            self.undirected_of(v)
                .iter()
                .filter(move |&&u| u > v)
                .map(move |&u| (v, u))
        })
    }

    /// Kahn's algorithm over the directed part. `None` when a directed cycle exists.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let mut indeg: Vec<usize> = (0..self.p).map(|v| self.parents_of(v).len()).collect();
        let mut queue: VecDeque<usize> = (0..self.p).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(self.p);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &c in self.children_of(v) {
                indeg[c] -= 1;
                if indeg[c] == 0 {
                    queue.push_back(c);
                }
            }
        }
        (order.len() == self.p).then_some(order)
    }

    fn find_directed_cycle(&self) -> Option<Vec<usize>> {
        if self.topological_order().is_some() {
            return None;
        }
        // 0 = unseen, 1 = on stack, 2 = done
        let mut state = vec![0u8; self.p];
        let mut path: Vec<usize> = Vec::new();
        for root in 0..self.p {
            if state[root] != 0 {
                continue;
            }
            let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
            state[root] = 1;
            path.push(root);
            while let Some(&mut (v, ref mut next)) = stack.last_mut() {
                let ch = self.children_of(v);
                if *next < ch.len() {
                    let c = ch[*next];
                    *next += 1;
                    match state[c] {
                        0 => {
                            state[c] = 1;
                            path.push(c);
                            stack.push((c, 0));
                        }
                        1 => {
                            let start = path.iter().position(|&x| x == c).unwrap();
                            return Some(path[start..].to_vec());
                        }
                        _ => {}
                    }
                } else {
                    state[v] = 2;
                    path.pop();
                    stack.pop();
                }
            }
        }
        None
    }
}

/// Checks the invariants of a DAG: no undirected edges and an acyclic
/// directed part.
pub fn validate_dag(g: &Graph) -> Result<(), ValidationError> {
    if let Some((a, b)) = g.undirected_edges().next() {
        return Err(ValidationError::UndirectedInDag(a, b));
    }
    if let Some(cycle) = g.find_directed_cycle() {
        return Err(ValidationError::Cycle(cycle));
    }
    Ok(())
}

/// Checks that `g` is a well-formed PDAG and, with `strict`, that it is the
/// CPDAG of some DAG: a consistent extension must exist and re-completing it
/// must reproduce `g` exactly.
pub fn validate_cpdag(g: &Graph, strict: bool) -> Result<(), ValidationError> {
    if let Some(cycle) = g.find_directed_cycle() {
        return Err(ValidationError::Cycle(cycle));
    }
    if !strict {
        return Ok(());
    }
    let ext = consistent_extension(g)?;
    let completed = cpdag_of_dag(&ext)?;
    for a in 0..g.n_nodes() {
        for b in a + 1..g.n_nodes() {
            if g.edge_state(a, b) != completed.edge_state(a, b) {
                return Err(ValidationError::NotCompleted(a, b));
            }
        }
    }
    Ok(())
}

/// Orients the undirected edges of `g` without creating new v-structures or
/// directed cycles (Dor–Tarsi sink elimination).
pub fn consistent_extension(g: &Graph) -> Result<Graph, ValidationError> {
    let p = g.n_nodes();
    let mut alive = vec![true; p];
    let mut directed: Vec<(usize, usize)> = g.directed_edges().collect();
    let mut remaining = p;
    while remaining > 0 {
        let sink = (0..p).find(|&x| {
            alive[x]
                && g.children_of(x).iter().all(|&c| !alive[c])
                && g.undirected_of(x).iter().filter(|&&y| alive[y]).all(|&y| {
                    let x_neighbors = g
                        .parents_of(x)
                        .iter()
                        .chain(g.undirected_of(x))
                        .filter(|&&n| alive[n] && n != y);
                    x_neighbors.clone().all(|n| g.is_adjacent(y, *n))
                })
        });
        let Some(x) = sink else {
            return Err(ValidationError::NoConsistentExtension);
        };
        for &y in g.undirected_of(x) {
            if alive[y] {
                directed.push((y, x));
            }
        }
        alive[x] = false;
        remaining -= 1;
    }
    Graph::from_edges(p, GraphKind::Dag, &directed, &[])
        .map_err(|_| ValidationError::NoConsistentExtension)
}

/// CPDAG of the Markov equivalence class of a DAG: keep the edges that take
/// part in v-structures directed, then close under Meek's rules 1–3.
pub fn cpdag_of_dag(g: &Graph) -> Result<Graph, ValidationError> {
    if g.kind() != GraphKind::Dag {
        return Err(ValidationError::NotADag);
    }
    let p = g.n_nodes();
    // compelled[a][b] == true means a → b is fixed in the CPDAG
    let mut state = vec![EdgeState::None; p * p];
    let idx = |a: usize, b: usize| a * p + b;
    for (a, b) in g.directed_edges() {
        state[idx(a, b)] = EdgeState::Undirected;
        state[idx(b, a)] = EdgeState::Undirected;
    }
    let orient = |state: &mut Vec<EdgeState>, a: usize, b: usize| {
        state[a * p + b] = EdgeState::Forward;
        state[b * p + a] = EdgeState::Backward;
    };
    for c in 0..p {
        let pa = g.parents_of(c);
        for (i, &a) in pa.iter().enumerate() {
            for &b in &pa[i + 1..] {
                if !g.is_adjacent(a, b) {
                    orient(&mut state, a, c);
                    orient(&mut state, b, c);
                }
            }
        }
    }
    let adj = |state: &Vec<EdgeState>, a: usize, b: usize| state[a * p + b] != EdgeState::None;
    let mut changed = true;
    while changed {
        changed = false;
        for a in 0..p {
            for b in 0..p {
                if state[idx(a, b)] != EdgeState::Undirected {
                    continue;
                }
                // R1: c → a — b, c and b non-adjacent
                let r1 = (0..p).any(|c| state[idx(c, a)] == EdgeState::Forward && !adj(&state, c, b) && c != b);
                // R2: a → c → b with a — b
                let r2 = || {
                    (0..p).any(|c| {
                        state[idx(a, c)] == EdgeState::Forward && state[idx(c, b)] == EdgeState::Forward
                    })
                };
                // R3: a — c → b, a — d → b, c and d non-adjacent
                let r3 = || {
                    let cands: Vec<usize> = (0..p)
                        .filter(|&c| {
                            state[idx(a, c)] == EdgeState::Undirected
                                && state[idx(c, b)] == EdgeState::Forward
                        })
                        .collect();
                    cands.iter().enumerate().any(|(i, &c)| {
                        cands[i + 1..].iter().any(|&d| !adj(&state, c, d))
                    })
                };
                if r1 || r2() || r3() {
                    orient(&mut state, a, b);
                    changed = true;
                }
            }
        }
    }
    let mut directed = Vec::new();
    let mut undirected = Vec::new();
    for a in 0..p {
        for b in 0..p {
            match state[idx(a, b)] {
                EdgeState::Forward => directed.push((a, b)),
                EdgeState::Undirected if a < b => undirected.push((a, b)),
                _ => {}
            }
        }
    }
    Graph::from_edges(p, GraphKind::Cpdag, &directed, &undirected)
}
