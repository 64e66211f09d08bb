// SPDX-License-Identifier: MPL-2.0
//! Random graphs, perturbations, and the runtime and comparison experiments.
//!
//! All randomness comes from ChaCha8 seeded with a 64-bit seed; independent
//! draws use separate ChaCha streams of the same seed, so results are
//! reproducible across runs and platforms.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::distances::{aid, shd, with_threads, PairFilter, Strategy};
use crate::error::{Error, Result};
use crate::graph::{cpdag_of_dag, Graph, GraphKind};

/// Name of the generator recorded in every report.
pub const PRNG_NAME: &str = "ChaCha8";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Density {
    /// Edge probability `20 / (p - 1)`, clamped to 1: about `10p` edges.
    Sparse,
    /// Edge probability 0.3.
    Dense,
    Custom(f64),
}

impl Density {
    pub fn edge_probability(self, p: usize) -> f64 {
        match self {
            Density::Sparse if p < 2 => 0.0,
            Density::Sparse => (20.0 / (p - 1) as f64).min(1.0),
            Density::Dense => 0.3,
            Density::Custom(prob) => prob.clamp(0.0, 1.0),
        }
    }
}

impl fmt::Display for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Density::Sparse => f.write_str("sparse"),
            Density::Dense => f.write_str("dense"),
            Density::Custom(prob) => write!(f, "{prob}"),
        }
    }
}

impl FromStr for Density {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "sparse" => Ok(Density::Sparse),
            "dense" => Ok(Density::Dense),
            other => match other.parse::<f64>() {
                Ok(prob) if (0.0..=1.0).contains(&prob) => Ok(Density::Custom(prob)),
                _ => Err(format!("density must be sparse, dense or a probability in [0, 1], got {other:?}")),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    pub p: usize,
    pub density: Density,
    pub seed: u64,
}

/// Generator for stream `stream` of `seed`.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Random DAG: a uniformly random node order, then every edge compatible
/// with that order independently with probability `prob`.
pub fn random_dag<R: Rng + ?Sized>(p: usize, prob: f64, rng: &mut R) -> Graph {
    let mut order: Vec<usize> = (0..p).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for i in 0..p {
        for j in i + 1..p {
            if rng.random_bool(prob) {
                edges.push((order[i], order[j]));
            }
        }
    }
    Graph::from_edges(p, GraphKind::Dag, &edges, &[]).expect("order-compatible edges form a DAG")
}

/// CPDAG of a random DAG.
pub fn random_cpdag<R: Rng + ?Sized>(p: usize, prob: f64, rng: &mut R) -> Graph {
    cpdag_of_dag(&random_dag(p, prob, rng)).expect("input is a DAG")
}

pub fn gen_random_dag(cfg: &GenConfig) -> Graph {
    let mut rng = rng_for(cfg.seed, 0);
    random_dag(cfg.p, cfg.density.edge_probability(cfg.p), &mut rng)
}

/// Removes one uniformly chosen edge.
pub fn remove_random_edge_with<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> Result<Graph> {
    let mut edges: Vec<(usize, usize)> = g.directed_edges().collect();
    if edges.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let k = rng.random_range(0..edges.len());
    edges.swap_remove(k);
    Ok(Graph::from_edges(g.n_nodes(), GraphKind::Dag, &edges, &[])?)
}

pub fn remove_random_edge(g: &Graph, seed: u64) -> Result<Graph> {
    if g.kind() != GraphKind::Dag {
        return Err(crate::error::ValidationError::NotADag.into());
    }
    remove_random_edge_with(g, &mut rng_for(seed, 0))
}

/// Adds every absent edge compatible with a topological order of `g`
/// independently with probability `prob`.
pub fn gen_super_dag<R: Rng + ?Sized>(g: &Graph, prob: f64, rng: &mut R) -> Graph {
    let order = g.topological_order().expect("DAG has a topological order");
    let mut edges: Vec<(usize, usize)> = g.directed_edges().collect();
    for (i, &a) in order.iter().enumerate() {
        for &b in &order[i + 1..] {
            if !g.is_adjacent(a, b) && rng.random_bool(prob) {
                edges.push((a, b));
            }
        }
    }
    Graph::from_edges(g.n_nodes(), GraphKind::Dag, &edges, &[]).expect("order-compatible edges form a DAG")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub density: Density,
    pub strategy: Strategy,
    pub reps: usize,
    pub seed: u64,
    pub threads: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub p: usize,
    /// Mean edge count of the true graphs.
    pub m: f64,
    pub mean_ms: f64,
    /// Runtime projected from the smallest size under `c(p)`, divided by the
    /// observed runtime.
    pub rel_p2: f64,
    pub rel_p3: f64,
    pub rel_p4: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub prng: String,
    pub config: BenchConfig,
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    pub fn to_csv(&self) -> Result<String> {
        rows_to_csv(&self.rows)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Report(e.to_string()))
    }
}

fn rows_to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(|e| Error::Report(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Report(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Report(e.to_string()))
}

/// Relative projected runtimes `c(p)·r(p*)/c(p*) / r(p)` for
/// `c(p) = p², p³, p⁴`, with `p*` the first size.
pub fn relative_projections(sizes: &[usize], times: &[f64]) -> Vec<[f64; 3]> {
    let (Some(&p0), Some(&t0)) = (sizes.first(), times.first()) else {
        return Vec::new();
    };
    sizes
        .iter()
        .zip(times)
        .map(|(&p, &t)| {
            let ratio = p as f64 / p0 as f64;
            [2, 3, 4].map(|k| ratio.powi(k) * t0 / t)
        })
        .collect()
}

/// Times one strategy's distance on fresh random DAG pairs for each size:
/// one discarded warm-up pair, then the mean over `reps` pairs.
pub fn run_complexity_bench(cfg: &BenchConfig) -> Result<BenchReport> {
    if cfg.sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition("sizes must be strictly ascending".into()));
    }
    if cfg.reps == 0 {
        return Err(Error::Precondition("at least one repetition is required".into()));
    }
    let mut times = Vec::with_capacity(cfg.sizes.len());
    let mut edges = Vec::with_capacity(cfg.sizes.len());
    for &p in &cfg.sizes {
        let prob = cfg.density.edge_probability(p);
        let mut total = 0.0;
        let mut m_total = 0usize;
        for rep in 0..=cfg.reps {
            let mut rng = rng_for(cfg.seed, ((p as u64) << 20) | rep as u64);
            let g_true = random_dag(p, prob, &mut rng);
            let g_guess = random_dag(p, prob, &mut rng);
            let start = Instant::now();
            with_threads(cfg.threads, || aid(&g_true, &g_guess, cfg.strategy, &PairFilter::all()))??;
            let elapsed = start.elapsed().as_secs_f64() * 1e3;
            if rep > 0 {
                total += elapsed;
                m_total += g_true.n_edges();
            }
        }
        times.push(total / cfg.reps as f64);
        edges.push(m_total as f64 / cfg.reps as f64);
    }
    let rel = relative_projections(&cfg.sizes, &times);
    let rows = cfg
        .sizes
        .iter()
        .enumerate()
        .map(|(i, &p)| BenchRow {
            p,
            m: edges[i],
            mean_ms: times[i],
            rel_p2: rel[i][0],
            rel_p3: rel[i][1],
            rel_p4: rel[i][2],
        })
        .collect();
    Ok(BenchReport {
        prng: PRNG_NAME.to_string(),
        config: cfg.clone(),
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComparisonMode {
    /// The guess is the true graph with one random edge removed.
    EdgeRemoval,
    /// True and guess graphs are drawn independently.
    IndependentPair,
}

impl FromStr for ComparisonMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "edge-removal" => Ok(ComparisonMode::EdgeRemoval),
            "independent" | "independent-pair" => Ok(ComparisonMode::IndependentPair),
            other => Err(format!("mode must be edge-removal or independent, got {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonConfig {
    pub p: usize,
    pub density: Density,
    pub mode: ComparisonMode,
    pub n_pairs: usize,
    pub seed: u64,
    pub threads: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub pair: usize,
    pub ancestor: u64,
    pub oset: u64,
    pub parent: u64,
    pub shd: u64,
}

/// Column order of [`ComparisonReport::correlations`] and [`ComparisonReport::means`].
pub const COMPARISON_COLUMNS: [&str; 4] = ["ancestor", "oset", "parent", "shd"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub prng: String,
    pub config: ComparisonConfig,
    pub rows: Vec<ComparisonRow>,
    pub means: [f64; 4],
    /// Pearson correlations; `None` where a column is constant.
    pub correlations: [[Option<f64>; 4]; 4],
}

impl ComparisonReport {
    pub fn to_csv(&self) -> Result<String> {
        rows_to_csv(&self.rows)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Report(e.to_string()))
    }

    fn column(&self, i: usize) -> Vec<f64> {
        self.rows
            .iter()
            .map(|r| [r.ancestor, r.oset, r.parent, r.shd][i] as f64)
            .collect()
    }
}

/// Pearson correlation, `None` if either input has zero variance.
pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len().min(y.len());
    if n < 2 {
        return None;
    }
    let mx = x[..n].iter().sum::<f64>() / n as f64;
    let my = y[..n].iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for i in 0..n {
        let (dx, dy) = (x[i] - mx, y[i] - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some(sxy / (sxx * syy).sqrt())
}

/// Draws `n_pairs` DAG pairs and records all four distances for each.
pub fn run_comparison(cfg: &ComparisonConfig) -> Result<ComparisonReport> {
    if cfg.p < 2 {
        return Err(Error::Precondition("comparison needs at least 2 nodes".into()));
    }
    let prob = cfg.density.edge_probability(cfg.p);
    let all = PairFilter::all();
    let mut rows = Vec::with_capacity(cfg.n_pairs);
    for pair in 0..cfg.n_pairs {
        let mut rng = rng_for(cfg.seed, pair as u64);
        let mut g_true = random_dag(cfg.p, prob, &mut rng);
        let g_guess = match cfg.mode {
            ComparisonMode::EdgeRemoval => {
                // resample until there is an edge to remove
                while g_true.n_edges() == 0 && prob > 0.0 {
                    g_true = random_dag(cfg.p, prob, &mut rng);
                }
                remove_random_edge_with(&g_true, &mut rng)?
            }
            ComparisonMode::IndependentPair => random_dag(cfg.p, prob, &mut rng),
        };
        rows.push(compare_pair(pair, &g_true, &g_guess, &all, cfg.threads)?);
    }
    let mut report = ComparisonReport {
        prng: PRNG_NAME.to_string(),
        config: cfg.clone(),
        rows,
        means: [0.0; 4],
        correlations: [[None; 4]; 4],
    };
    let columns: Vec<Vec<f64>> = (0..4).map(|i| report.column(i)).collect();
    for i in 0..4 {
        let n = columns[i].len().max(1) as f64;
        report.means[i] = columns[i].iter().sum::<f64>() / n;
        for j in 0..4 {
            report.correlations[i][j] = pearson(&columns[i], &columns[j]);
        }
    }
    Ok(report)
}

fn compare_pair(pair: usize, g_true: &Graph, g_guess: &Graph, all: &PairFilter, threads: usize) -> Result<ComparisonRow> {
    with_threads(threads, || {
        Ok(ComparisonRow {
            pair,
            ancestor: aid(g_true, g_guess, Strategy::Ancestor, all)?.count,
            oset: aid(g_true, g_guess, Strategy::Oset, all)?.count,
            parent: aid(g_true, g_guess, Strategy::Parent, all)?.count,
            shd: shd(g_true, g_guess)?.count,
        })
    })?
}
