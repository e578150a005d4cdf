//! `ustat`: exact U- and V-statistics of decomposable kernels from the
//! command line.

mod analyze;
mod error;
mod input;
mod stats;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ustat_core::engine::EngineOptions;
use ustat_core::graph::{
    degeneracy, treewidth_exact_with_bound, treewidth_upper, Heuristic, ReportOptions, EXACT_BOUND,
};
use ustat_core::kernels::motif_counts;
use ustat_core::tensor::{OrderStrategy, DEFAULT_MEM_CAP};

use error::CliError;
use stats::{format_value, KernelSpec};

#[derive(Parser)]
#[command(name = "ustat", version, about = "Exact U- and V-statistics via tensor contraction")]
struct Cli {
    #[command(flatten)]
    engine: EngineArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct EngineArgs {
    /// Elimination order planner: auto, greedy-min-degree, greedy-min-fill, exhaustive.
    #[arg(long, global = true, default_value = "auto", value_parser = parse_strategy)]
    order_strategy: OrderStrategy,
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Maximum entries in any single tensor.
    #[arg(long, global = true, default_value_t = DEFAULT_MEM_CAP)]
    mem_cap: u64,
}

fn parse_strategy(s: &str) -> Result<OrderStrategy, String> {
    s.parse()
}

#[derive(Subcommand)]
enum Command {
    /// Sum of the kernel over ordered tuples of distinct observations.
    U(StatArgs),
    /// Sum of the kernel over all tuples of observations.
    V(StatArgs),
    /// Complexity report for a decomposition signature, as JSON.
    Analyze(AnalyzeArgs),
    /// Induced motif counts of a graph.
    Motifs {
        #[arg(long)]
        graph: PathBuf,
        /// 3 for r1..r2, 4 for r3..r8.
        #[arg(long, default_value_t = 3)]
        order: usize,
    },
    /// Squared distance covariance of paired samples.
    Dcov {
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
        /// Also run the direct quadruple loop (n <= 60) and print the relative error.
        #[arg(long)]
        oracle: bool,
    },
    /// Treewidth bounds of a graph, with an elimination order.
    Treewidth {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        exact: bool,
        /// Largest graph for which --exact is attempted.
        #[arg(long, default_value_t = EXACT_BOUND)]
        exact_bound: usize,
    },
}

#[derive(Args)]
struct StatArgs {
    /// prod2, hoif:<j>:<k>, motif:<id> or dcov[:<p>].
    #[arg(long)]
    kernel: String,
    /// CSV of observations, or an edge list for motif kernels.
    #[arg(long)]
    data: PathBuf,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// 1-based tuples, e.g. "1 2, 2 3, 3 4".
    #[arg(long)]
    signature: Option<String>,
    /// hoif:<m> for the order-m chain.
    #[arg(long)]
    builtin: Option<String>,
    /// Sample size for FLOP figures.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = EXACT_BOUND)]
    exact_bound: usize,
}

const ORACLE_LIMIT: usize = 60;

fn engine_options(args: &EngineArgs) -> EngineOptions {
    EngineOptions { strategy: args.order_strategy, mem_cap: args.mem_cap, ..Default::default() }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(t) = cli.engine.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Other(e.to_string()))?;
    }
    let opts = engine_options(&cli.engine);
    let mut out = io::stdout().lock();
    let w = |e: io::Error| CliError::Other(e.to_string());
    match cli.command {
        Command::U(args) => stat(&args, false, &opts, &mut out),
        Command::V(args) => stat(&args, true, &opts, &mut out),
        Command::Analyze(args) => {
            let sig = analyze::resolve_signature(args.signature.as_deref(), args.builtin.as_deref())?;
            let ropts = ReportOptions {
                n: args.n,
                exact_bound: args.exact_bound,
                path_flops: args.n.is_some(),
                strategy: cli.engine.order_strategy,
                ..Default::default()
            };
            let report = analyze::analyze(&sig, &ropts)?;
            let json = serde_json::to_string_pretty(&report).map_err(|e| CliError::Other(e.to_string()))?;
            writeln!(out, "{json}").map_err(w)
        }
        Command::Motifs { graph, order } => {
            if order != 3 && order != 4 {
                return Err(CliError::Parse(format!("--order must be 3 or 4, got {order}")));
            }
            let g = input::read_graph(&graph)?;
            for (id, count) in motif_counts(&g, order, &opts)? {
                writeln!(out, "{id}\t{count}").map_err(w)?;
            }
            Ok(())
        }
        Command::Dcov { x, y, oracle } => {
            let (x, y) = (input::read_csv(&x)?, input::read_csv(&y)?);
            let check = oracle && x.len() <= ORACLE_LIMIT;
            if oracle && !check {
                eprintln!("skipping oracle: n = {} exceeds {ORACLE_LIMIT}", x.len());
            }
            let rep = stats::dcov_report(&x, &y, check, &opts)?;
            writeln!(out, "{}", format_value(rep.value)).map_err(w)?;
            if let Some(o) = rep.oracle {
                let err = if o == 0.0 { rep.value.abs() } else { (rep.value - o).abs() / o.abs() };
                writeln!(out, "oracle {}", format_value(o)).map_err(w)?;
                writeln!(out, "relative_error {err:.3e}").map_err(w)?;
            }
            Ok(())
        }
        Command::Treewidth { graph, exact, exact_bound } => {
            let g = input::read_graph(&graph)?;
            let upper = [Heuristic::MinFill, Heuristic::MinDegree]
                .into_iter()
                .map(|h| treewidth_upper(&g, h))
                .min_by_key(|r| r.width)
                .expect("two heuristics");
            writeln!(out, "vertices\t{}", g.vertex_count()).map_err(w)?;
            writeln!(out, "edges\t{}", g.edge_count()).map_err(w)?;
            writeln!(out, "lower\t{}", degeneracy(&g)).map_err(w)?;
            writeln!(out, "upper\t{}", upper.width).map_err(w)?;
            let order = if exact {
                let r = treewidth_exact_with_bound(&g, exact_bound)?;
                writeln!(out, "exact\t{}", r.width).map_err(w)?;
                r.order
            } else {
                upper.order
            };
            let order: Vec<String> = order.iter().map(|v| v.to_string()).collect();
            writeln!(out, "order\t{}", order.join(" ")).map_err(w)
        }
    }
}

fn stat(args: &StatArgs, v: bool, opts: &EngineOptions, out: &mut impl Write) -> Result<(), CliError> {
    let spec: KernelSpec = args.kernel.parse()?;
    let result = match spec {
        KernelSpec::Motif(id) => stats::run_on_graph(id, &input::read_graph(&args.data)?, v, opts)?,
        _ => stats::run_on_rows(&spec, input::read_csv(&args.data)?, v, opts)?,
    };
    writeln!(out, "{}", format_value(result.value)).map_err(|e| CliError::Other(e.to_string()))?;
    eprintln!(
        "tensorize {:.6} s, contract {:.6} s, {} flops",
        result.tensorize.as_secs_f64(),
        result.contract.as_secs_f64(),
        result.flops
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
