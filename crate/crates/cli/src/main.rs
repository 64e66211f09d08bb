// SPDX-License-Identifier: MPL-2.0
//! `gaid` command-line front end.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gaid::simbench::{
    gen_random_dag, run_comparison, run_complexity_bench, BenchConfig, ComparisonConfig, ComparisonMode, Density,
    GenConfig, PRNG_NAME,
};
use gaid::{
    io::{parse_graph_with_header, to_adjacency_matrix, to_edge_list},
    order_aid, with_threads, Distance, DistanceResult, Error, Format, Graph, GraphKind, PairFilter, PartialOrder,
};
use serde_json::json;

const EXIT_USAGE: u8 = 2;
const EXIT_VALIDATION: u8 = 3;

#[derive(Parser)]
#[command(name = "gaid", version, about = "Causal identification distances between DAGs and CPDAGs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Distance between a true and a guessed graph.
    Dist(DistArgs),
    /// Ancestor-AID between a true DAG and a guessed causal order.
    Order(OrderArgs),
    /// Draw a random DAG.
    Gen(GenArgs),
    /// Runtime scaling of one distance over growing random graphs.
    Bench(BenchArgs),
    /// All four distances over many random graph pairs.
    Compare(CompareArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Dag,
    Cpdag,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Adj,
    Edgelist,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Adj => Format::AdjMatrix,
            FormatArg::Edgelist => Format::EdgeList,
        }
    }
}

#[derive(Args)]
struct InputArgs {
    /// Graph kind; inferred from the cells when absent (any undirected edge means CPDAG).
    #[arg(long, value_enum)]
    kind: Option<KindArg>,
    #[arg(long, value_enum, default_value = "adj")]
    format: FormatArg,
    /// The adjacency matrix files start with a header row.
    #[arg(long)]
    header: bool,
}

#[derive(Args)]
struct ThreadArgs {
    #[arg(long, env = "GAID_THREADS", default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    threads: u16,
}

#[derive(Args)]
struct DistArgs {
    /// parent, ancestor, oset or shd.
    #[arg(long)]
    distance: Distance,
    #[arg(long = "true", value_name = "FILE")]
    true_graph: PathBuf,
    #[arg(long = "guess", value_name = "FILE")]
    guess_graph: PathBuf,
    #[command(flatten)]
    input: InputArgs,
    /// Comma separated treatment nodes.
    #[arg(long, value_delimiter = ',')]
    treatments: Option<Vec<usize>>,
    /// Comma separated target nodes.
    #[arg(long, value_delimiter = ',')]
    targets: Option<Vec<usize>>,
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    threads: ThreadArgs,
}

#[derive(Args)]
struct OrderArgs {
    #[arg(long = "true", value_name = "FILE")]
    true_graph: PathBuf,
    /// Lines `a b` meaning a precedes b.
    #[arg(long, value_name = "FILE")]
    order: PathBuf,
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    threads: ThreadArgs,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    nodes: usize,
    /// sparse, dense or an edge probability.
    #[arg(long, default_value = "sparse")]
    density: Density,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long, value_name = "FILE")]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "adj")]
    format: FormatArg,
}

#[derive(Args)]
struct ReportArgs {
    /// Write JSON instead of CSV.
    #[arg(long)]
    json: bool,
    #[arg(short, long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "64,128,256,512,1024")]
    sizes: Vec<usize>,
    #[arg(long, default_value = "sparse")]
    density: Density,
    /// parent, ancestor or oset.
    #[arg(long, default_value = "ancestor")]
    distance: Distance,
    #[arg(long, default_value_t = 5)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    threads: ThreadArgs,
    #[command(flatten)]
    report: ReportArgs,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long, default_value_t = 30)]
    nodes: usize,
    #[arg(long, default_value = "dense")]
    density: Density,
    /// edge-removal or independent.
    #[arg(long, default_value = "edge-removal")]
    mode: ComparisonMode,
    #[arg(long, default_value_t = 300)]
    pairs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    threads: ThreadArgs,
    #[command(flatten)]
    report: ReportArgs,
}

/// An error with the input it concerns.
struct Failure {
    source: Option<PathBuf>,
    error: Error,
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self.error {
            Error::Validation(_) | Error::NodeCountMismatch(..) | Error::EmptyGraph => EXIT_VALIDATION,
            _ => EXIT_USAGE,
        }
    }
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Failure { source: None, error }
    }
}

fn at(path: &Path) -> impl FnOnce(Error) -> Failure + '_ {
    move |error| Failure { source: Some(path.to_path_buf()), error }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| at(path)(e.into()))
}

fn load_graph(path: &Path, input: &InputArgs) -> Result<Graph, Failure> {
    let kind = input.kind.map(|k| match k {
        KindArg::Dag => GraphKind::Dag,
        KindArg::Cpdag => GraphKind::Cpdag,
    });
    parse_graph_with_header(&read(path)?, input.format.into(), kind, input.header).map_err(at(path))
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(path) => fs::write(path, text).map_err(|e| at(path)(e.into())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn print_result(name: &str, r: &DistanceResult, p: usize, elapsed_ms: f64, threads: u16, as_json: bool) {
    if as_json {
        let out = json!({
            "distance": name,
            "count": r.count,
            "normalized": r.normalized,
            "p": p,
            "pair_total": r.pair_total,
            "elapsed_ms": elapsed_ms,
            "threads": threads,
            "versions": { "gaid": env!("CARGO_PKG_VERSION"), "prng": PRNG_NAME },
        });
        println!("{out}");
    } else {
        println!("count={} normalized={}", r.count, r.normalized);
    }
}

fn dist(args: DistArgs) -> Result<(), Failure> {
    let g_true = load_graph(&args.true_graph, &args.input)?;
    let g_guess = load_graph(&args.guess_graph, &args.input)?;
    let filter = PairFilter::new(args.treatments, args.targets);
    let threads = args.threads.threads;
    let start = Instant::now();
    let r = with_threads(threads.into(), || args.distance.compute(&g_true, &g_guess, &filter))??;
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    print_result(args.distance.name(), &r, g_true.n_nodes(), elapsed, threads, args.json);
    Ok(())
}

fn order(args: OrderArgs) -> Result<(), Failure> {
    let g_true = load_graph(&args.true_graph, &args.input)?;
    let text = String::from_utf8_lossy(&read(&args.order)?).into_owned();
    let order = PartialOrder::parse(&text, g_true.n_nodes()).map_err(at(&args.order))?;
    let threads = args.threads.threads;
    let start = Instant::now();
    let r = with_threads(threads.into(), || order_aid(&g_true, &order))??;
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    print_result("order", &r, g_true.n_nodes(), elapsed, threads, args.json);
    Ok(())
}

fn generate(args: GenArgs) -> Result<(), Failure> {
    let g = gen_random_dag(&GenConfig { p: args.nodes, density: args.density, seed: args.seed });
    let text = match args.format {
        FormatArg::Adj => to_adjacency_matrix(&g),
        FormatArg::Edgelist => to_edge_list(&g),
    };
    write_output(args.output.as_deref(), &text)
}

fn bench(args: BenchArgs) -> Result<(), Failure> {
    let strategy = args
        .distance
        .strategy()
        .ok_or_else(|| Error::Precondition("bench needs parent, ancestor or oset".into()))?;
    let report = run_complexity_bench(&BenchConfig {
        sizes: args.sizes,
        density: args.density,
        strategy,
        reps: args.reps,
        seed: args.seed,
        threads: args.threads.threads.into(),
    })?;
    let text = if args.report.json { report.to_json()? + "\n" } else { report.to_csv()? };
    write_output(args.report.output.as_deref(), &text)
}

fn compare(args: CompareArgs) -> Result<(), Failure> {
    let report = run_comparison(&ComparisonConfig {
        p: args.nodes,
        density: args.density,
        mode: args.mode,
        n_pairs: args.pairs,
        seed: args.seed,
        threads: args.threads.threads.into(),
    })?;
    let text = if args.report.json { report.to_json()? + "\n" } else { report.to_csv()? };
    write_output(args.report.output.as_deref(), &text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Dist(a) => dist(a),
        Command::Order(a) => order(a),
        Command::Gen(a) => generate(a),
        Command::Bench(a) => bench(a),
        Command::Compare(a) => compare(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f.source {
                Some(path) => eprintln!("error: {}: {}", path.display(), f.error),
                None => eprintln!("error: {}", f.error),
            }
            ExitCode::from(f.exit_code())
        }
    }
}
