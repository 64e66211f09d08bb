// SPDX-License-Identifier: MPL-2.0
#![allow(dead_code)]

use gaid::oracle::{naive_aid, PathOracle};
use gaid::reachability::{d_connected, non_amenable, verify_adjustment};
use gaid::simbench::{random_cpdag, random_dag, rng_for};
use gaid::{aid, Graph, GraphKind, NodeSet, PairFilter, Strategy};
use rand::Rng;

pub fn dag(p: usize, edges: &[(usize, usize)]) -> Graph {
    Graph::from_edges(p, GraphKind::Dag, edges, &[]).unwrap()
}

pub fn full_dag(p: usize) -> Graph {
    let e: Vec<_> = (0..p).flat_map(|a| (a + 1..p).map(move |b| (a, b))).collect();
    dag(p, &e)
}

pub fn chain(p: usize) -> Graph {
    let e: Vec<_> = (1..p).map(|a| (a - 1, a)).collect();
    dag(p, &e)
}

pub fn reversed_chain(p: usize) -> Graph {
    let e: Vec<_> = (1..p).map(|a| (a, a - 1)).collect();
    dag(p, &e)
}

/// Pair `i` of the random DAG corpus: 2..=max_p nodes, varied density.
pub fn random_dag_pair(seed: u64, i: u64, max_p: usize) -> (Graph, Graph) {
    let mut rng = rng_for(seed, i);
    let p = rng.random_range(2..=max_p);
    let prob = rng.random_range(0.1..0.9);
    (random_dag(p, prob, &mut rng), random_dag(p, prob, &mut rng))
}

pub fn random_cpdag_pair(seed: u64, i: u64, max_p: usize) -> (Graph, Graph) {
    let mut rng = rng_for(seed, i);
    let p = rng.random_range(2..=max_p);
    let prob = rng.random_range(0.1..0.9);
    (random_cpdag(p, prob, &mut rng), random_cpdag(p, prob, &mut rng))
}

/// Compares the fast engine against the path-enumeration oracle on one pair.
/// Returns a description of every disagreement.
pub fn oracle_discrepancies(g_true: &Graph, g_guess: &Graph) -> Vec<String> {
    let mut out = Vec::new();
    let p = g_true.n_nodes();
    for s in Strategy::ALL {
        let fast = aid(g_true, g_guess, s, &PairFilter::all()).unwrap().count;
        let naive = naive_aid(g_true, g_guess, s).unwrap();
        if fast != naive {
            out.push(format!("{s:?}: aid {fast} vs naive {naive}"));
        }
    }
    let mut oracle = PathOracle::new(g_true).unwrap();
    for t in 0..p {
        let ts = NodeSet::singleton(p, t);
        let nam = non_amenable(g_true, &ts).unwrap();
        for y in (0..p).filter(|&y| y != t) {
            if nam.contains(y) == oracle.amenable(t, y) {
                out.push(format!("non_amenable t={t} y={y}"));
            }
        }
        let others: Vec<usize> = (0..p).filter(|&v| v != t).collect();
        for bits in 0u32..(1 << others.len()) {
            let z = NodeSet::from_nodes(p, others.iter().enumerate().filter(|(i, _)| bits & (1 << i) != 0).map(|(_, &v)| v));
            let verdict = verify_adjustment(g_true, &ts, &z).unwrap();
            let conn = d_connected(g_true, &ts, &z).unwrap();
            if !verdict.nam.is_subset(&verdict.nva) || !z.is_subset(&verdict.nva) || verdict.nam != nam {
                out.push(format!("verdict invariants t={t} z={z:?}"));
            }
            for &y in others.iter().filter(|&&y| !z.contains(y)) {
                if verdict.nva.contains(y) == oracle.valid_adjustment(t, y, &z) {
                    out.push(format!("verify_adjustment t={t} y={y} z={z:?}"));
                }
                if conn.contains(y) == oracle.d_separated(t, y, &z) {
                    out.push(format!("d_connected t={t} y={y} z={z:?}"));
                }
            }
        }
    }
    out
}
