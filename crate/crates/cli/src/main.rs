//! `gtsp`: solve, cluster, generate and benchmark GTSP instances.
//!
//! Exit codes: 0 success, 1 usage error, 2 instance or I/O error,
//! 3 solver refusal.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use gtsp_core::aco::{AcoParams, ReinitMode};
use gtsp_core::bench::{self, Algorithm, ExperimentConfig, SolveError, SolveOutput};
use gtsp_core::exact::DEFAULT_SEQUENCE_CAP;
use gtsp_core::generate;
use gtsp_core::instance::{
    cluster_instance, euc2d_costs, parse_clustered, parse_partition, parse_tsplib, write_clustered, GtspInstance,
};

#[derive(Parser)]
#[command(name = "gtsp", version, about = "Generalized TSP solvers and benchmark harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance with a single algorithm.
    Solve(SolveArgs),
    /// Run an experiment described by a JSON config file.
    Bench {
        #[arg(long)]
        config: PathBuf,
        /// Output prefix for the CSV/JSON tables; overrides the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cluster a TSPLIB file around farthest centers and write the clustered format.
    Cluster {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Number of clusters (default ⌈n/5⌉).
        #[arg(long)]
        clusters: Option<usize>,
    },
    /// Generate a random instance in the clustered format.
    Gen {
        #[arg(long)]
        nodes: usize,
        #[arg(long)]
        clusters: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// `euclidean` points or `random` symmetric integer costs.
        #[arg(long, value_enum, default_value_t = GenKind::Euclidean)]
        kind: GenKind,
        /// Largest edge cost for `--kind random`.
        #[arg(long, default_value_t = 100)]
        max_cost: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Euclidean,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Exact,
    Nn,
    Acs,
    Racs,
}

impl From<Algo> for Algorithm {
    fn from(a: Algo) -> Self {
        match a {
            Algo::Exact => Algorithm::Exact,
            Algo::Nn => Algorithm::Nn,
            Algo::Acs => Algorithm::Acs,
            Algo::Racs => Algorithm::Racs,
        }
    }
}

#[derive(clap::Args)]
struct SolveArgs {
    /// TSPLIB EUC_2D file or clustered instance file.
    file: PathBuf,
    #[arg(long, value_enum, default_value_t = Algo::Racs)]
    algo: Algo,
    /// Wall-clock budget in seconds for ACS/RACS.
    #[arg(long, default_value_t = 600.0)]
    time_max: f64,
    #[arg(long)]
    max_iters: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    ants: usize,
    #[arg(long, default_value_t = 5.0)]
    beta: f64,
    #[arg(long, default_value_t = 0.5)]
    rho: f64,
    #[arg(long, default_value_t = 0.5)]
    q0: f64,
    /// Reset the whole pheromone matrix instead of single entries above τ_max.
    #[arg(long)]
    reset_matrix: bool,
    /// Number of clusters when the file has no cluster section.
    #[arg(long, conflicts_with = "cluster_file")]
    clusters: Option<usize>,
    /// File whose GTSP_SET_SECTION supplies the partition.
    #[arg(long)]
    cluster_file: Option<PathBuf>,
    /// Largest (p-1)! the exact solver will enumerate.
    #[arg(long, default_value_t = DEFAULT_SEQUENCE_CAP)]
    exact_cap: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

/// Error carrying the process exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl Failure {
    fn usage(error: impl Into<anyhow::Error>) -> Self {
        Self { code: 1, error: error.into() }
    }

    fn instance(error: impl Into<anyhow::Error>) -> Self {
        Self { code: 2, error: error.into() }
    }

    fn refusal(error: impl Into<anyhow::Error>) -> Self {
        Self { code: 3, error: error.into() }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(Failure::instance)
}

fn write_output(out: Option<&Path>, body: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, body)
            .with_context(|| format!("cannot write {}", path.display()))
            .map_err(Failure::instance),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn load_instance(args: &SolveArgs) -> Result<GtspInstance, Failure> {
    let text = read(&args.file)?;
    let ctx = |e: gtsp_core::instance::InstanceError| Failure::instance(anyhow::anyhow!("{}: {e}", args.file.display()));
    if text.contains("GTSP_SET_SECTION") && args.cluster_file.is_none() {
        if args.clusters.is_some() {
            return Err(Failure::usage(anyhow::anyhow!(
                "{} is already clustered; --clusters does not apply",
                args.file.display()
            )));
        }
        return parse_clustered(&text).map_err(ctx);
    }
    let coords = parse_tsplib(&text).map_err(ctx)?;
    let costs = euc2d_costs(&coords);
    match &args.cluster_file {
        Some(f) => {
            let sets = parse_partition(&read(f)?)
                .map_err(|e| Failure::instance(anyhow::anyhow!("{}: {e}", f.display())))?;
            let name = format!("{}{}", sets.len(), coords.name.to_uppercase());
            Ok(GtspInstance::new(name, costs, sets).map_err(ctx)?.with_coords(coords))
        }
        None => cluster_instance(&coords, &costs, args.clusters).map_err(ctx),
    }
}

fn solve(args: SolveArgs) -> Result<(), Failure> {
    let instance = load_instance(&args)?;
    let params = AcoParams {
        beta: args.beta,
        rho: args.rho,
        q0: args.q0,
        num_ants: args.ants,
        time_max: Some(args.time_max),
        max_iterations: args.max_iters,
        seed: args.seed,
        reinit: if args.reset_matrix { ReinitMode::Matrix } else { ReinitMode::Entry },
        ..AcoParams::default()
    };
    let algorithm = Algorithm::from(args.algo);
    if algorithm.is_stochastic() {
        params.validate().map_err(Failure::usage)?;
    }
    let started = std::time::Instant::now();
    let output = bench::solve(&instance, algorithm, &params, args.exact_cap).map_err(|e| match e {
        SolveError::Exact(_) => Failure::refusal(e),
        SolveError::Aco(gtsp_core::aco::AcoError::InvalidParams(_)) => Failure::usage(e),
        SolveError::Aco(_) => Failure::refusal(e),
    })?;
    let elapsed = started.elapsed().as_secs_f64();

    let body = match args.format {
        Format::Json => serde_json::to_string_pretty(&output).map_err(Failure::instance)? + "\n",
        Format::Csv => {
            let (iterations, seed) = match &output {
                SolveOutput::Colony(r) => (r.iterations.to_string(), r.seed.to_string()),
                SolveOutput::Tour(_) => (String::new(), String::new()),
            };
            let tour = output.tour();
            let nodes: Vec<String> = tour.nodes.iter().map(usize::to_string).collect();
            format!(
                "problem,nc,n,algorithm,cost,iterations,seed,elapsed_seconds,nodes\n{},{},{},{},{},{iterations},{seed},{elapsed},{}\n",
                instance.name,
                instance.p(),
                instance.n(),
                algorithm.name(),
                tour.cost,
                nodes.join(" ")
            )
        }
        Format::Text => {
            let tour = output.tour();
            let mut s = format!(
                "{} ({} clusters, {} nodes)\n{}: cost {}\ntour: {:?}\n",
                instance.name,
                instance.p(),
                instance.n(),
                algorithm.name(),
                tour.cost,
                tour.nodes
            );
            if let SolveOutput::Colony(r) = &output {
                s.push_str(&format!("iterations: {}, L_nn: {}, seed: {}\n", r.iterations, r.l_nn, r.seed));
            }
            s.push_str(&format!("elapsed: {elapsed:.3}s\n"));
            s
        }
    };
    write_output(args.out.as_deref(), &body)
}

fn run_bench(config: &Path, out: Option<PathBuf>) -> Result<(), Failure> {
    let mut cfg = ExperimentConfig::from_json(&read(config)?).map_err(Failure::usage)?;
    if out.is_some() {
        cfg.output = out;
    }
    let reports = bench::run_experiment(&cfg).map_err(Failure::usage)?;
    let table = bench::emit_table(&reports, cfg.output.as_deref()).map_err(Failure::instance)?;
    print!("{table}");
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Solve(args) => solve(args),
        Command::Bench { config, out } => run_bench(&config, out),
        Command::Cluster { file, out, clusters } => {
            let coords = parse_tsplib(&read(&file)?)
                .map_err(|e| Failure::instance(anyhow::anyhow!("{}: {e}", file.display())))?;
            let instance = cluster_instance(&coords, &euc2d_costs(&coords), clusters).map_err(Failure::usage)?;
            write_output(out.as_deref(), &write_clustered(&instance))
        }
        Command::Gen { nodes, clusters, seed, kind, max_cost, out } => {
            let instance = match kind {
                GenKind::Euclidean => generate::random_euclidean(nodes, clusters, seed),
                GenKind::Random => generate::random_costs(nodes, clusters, max_cost, seed),
            }
            .map_err(Failure::usage)?;
            write_output(out.as_deref(), &write_clustered(&instance))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
