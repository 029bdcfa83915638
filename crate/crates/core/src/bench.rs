//! Experiment harness: runs EXACT / NN / ACS / RACS over a list of
//! instances, averages the stochastic solvers over several seeds and renders
//! comparison tables as text, CSV and JSON.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::aco::{self, AcoParams, ReinitMode, Variant};
use crate::construct::{nn_reference_cost, Tour};
use crate::exact::{exact_solve, ExactError, DEFAULT_SEQUENCE_CAP};
use crate::generate;
use crate::instance::{cluster_instance, euc2d_costs, parse_clustered, parse_tsplib, Cost, GtspInstance};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Instance(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Algorithm {
    Exact,
    Nn,
    Acs,
    Racs,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Algorithm::Exact, Algorithm::Nn, Algorithm::Acs, Algorithm::Racs];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Exact => "EXACT",
            Algorithm::Nn => "NN",
            Algorithm::Acs => "ACS",
            Algorithm::Racs => "RACS",
        }
    }

    pub fn is_stochastic(self) -> bool {
        matches!(self, Algorithm::Acs | Algorithm::Racs)
    }
}

impl std::str::FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown algorithm `{s}` (expected exact, nn, acs or racs)"))
    }
}

/// Where an experiment instance comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "type")]
pub enum InstanceSpec {
    /// Plain TSPLIB `EUC_2D` file, clustered by the farthest-center rule
    /// (`⌈n/5⌉` clusters unless given).
    Tsplib {
        path: PathBuf,
        #[serde(default)]
        clusters: Option<usize>,
    },
    /// File in the clustered-instance format.
    Clustered { path: PathBuf },
    /// Random integer points, clustered around farthest centers.
    Euclidean { nodes: usize, clusters: usize, seed: u64 },
    /// Random symmetric integer costs with a random partition.
    RandomCosts {
        nodes: usize,
        clusters: usize,
        max_cost: Cost,
        seed: u64,
    },
}

impl InstanceSpec {
    fn label(&self) -> String {
        match self {
            InstanceSpec::Tsplib { path, .. } | InstanceSpec::Clustered { path } => {
                path.display().to_string()
            }
            InstanceSpec::Euclidean { nodes, clusters, seed } => {
                format!("euclidean(n={nodes}, p={clusters}, seed={seed})")
            }
            InstanceSpec::RandomCosts { nodes, clusters, seed, .. } => {
                format!("random_costs(n={nodes}, p={clusters}, seed={seed})")
            }
        }
    }

    /// Loads the instance and, for file sources, the known optimum from the
    /// optional `<path>.opt` sidecar.
    pub fn load(&self) -> Result<(GtspInstance, Option<Cost>), BenchError> {
        let inst_err = |e: crate::instance::InstanceError| BenchError::Instance(format!("{}: {e}", self.label()));
        match self {
            InstanceSpec::Tsplib { path, clusters } => {
                let text = read(path)?;
                let coords = parse_tsplib(&text).map_err(inst_err)?;
                let inst = cluster_instance(&coords, &euc2d_costs(&coords), *clusters).map_err(inst_err)?;
                Ok((inst, read_optimum(path)?))
            }
            InstanceSpec::Clustered { path } => {
                let inst = parse_clustered(&read(path)?).map_err(inst_err)?;
                Ok((inst, read_optimum(path)?))
            }
            InstanceSpec::Euclidean { nodes, clusters, seed } => {
                Ok((generate::random_euclidean(*nodes, *clusters, *seed).map_err(inst_err)?, None))
            }
            InstanceSpec::RandomCosts { nodes, clusters, max_cost, seed } => Ok((
                generate::random_costs(*nodes, *clusters, *max_cost, *seed).map_err(inst_err)?,
                None,
            )),
        }
    }
}

fn read(path: &Path) -> Result<String, BenchError> {
    std::fs::read_to_string(path).map_err(|source| BenchError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Path of the optimum sidecar for an instance file.
pub fn optimum_sidecar(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".opt");
    PathBuf::from(s)
}

fn read_optimum(path: &Path) -> Result<Option<Cost>, BenchError> {
    let side = optimum_sidecar(path);
    if !side.exists() {
        return Ok(None);
    }
    let text = read(&side)?;
    text.trim()
        .parse()
        .map(Some)
        .map_err(|_| BenchError::Instance(format!("{}: optimum is not an integer", side.display())))
}

/// Colony parameters shared by every ACS/RACS cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ColonySettings {
    pub beta: f64,
    pub rho: f64,
    pub q0: f64,
    pub num_ants: usize,
    pub reinit: ReinitMode,
}

impl Default for ColonySettings {
    fn default() -> Self {
        let d = AcoParams::default();
        Self {
            beta: d.beta,
            rho: d.rho,
            q0: d.q0,
            num_ants: d.num_ants,
            reinit: d.reinit,
        }
    }
}

fn default_repetitions() -> usize {
    5
}

fn default_time_max() -> Option<f64> {
    Some(600.0)
}

fn default_exact_cap() -> u64 {
    DEFAULT_SEQUENCE_CAP
}

fn default_parallel() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub instances: Vec<InstanceSpec>,
    pub algorithms: Vec<Algorithm>,
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    /// Seconds per ACS/RACS run; `null` disables the time limit.
    #[serde(default = "default_time_max")]
    pub time_max: Option<f64>,
    #[serde(default)]
    pub max_iterations: Option<u64>,
    /// Repetition `r` uses `base_seed + r` unless `seeds` is given.
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default)]
    pub seeds: Option<Vec<u64>>,
    #[serde(default)]
    pub colony: ColonySettings,
    #[serde(default = "default_exact_cap")]
    pub exact_cap: u64,
    /// Output prefix; `<prefix>.csv` and `<prefix>.json` are written.
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default = "default_parallel")]
    pub parallel: bool,
}

impl ExperimentConfig {
    pub fn new(instances: Vec<InstanceSpec>, algorithms: Vec<Algorithm>) -> Self {
        Self {
            instances,
            algorithms,
            repetitions: default_repetitions(),
            time_max: default_time_max(),
            max_iterations: None,
            base_seed: 0,
            seeds: None,
            colony: ColonySettings::default(),
            exact_cap: DEFAULT_SEQUENCE_CAP,
            output: None,
            parallel: true,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, BenchError> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| BenchError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        if self.repetitions == 0 {
            return Err(BenchError::Config("repetitions must be >= 1".into()));
        }
        if self.algorithms.is_empty() {
            return Err(BenchError::Config("no algorithms selected".into()));
        }
        if let Some(seeds) = &self.seeds {
            if seeds.len() < self.repetitions {
                return Err(BenchError::Config(format!(
                    "{} seeds given for {} repetitions",
                    seeds.len(),
                    self.repetitions
                )));
            }
        }
        self.aco_params(Variant::Racs, 0)
            .validate()
            .map_err(|e| BenchError::Config(e.to_string()))
    }

    pub fn seed_for(&self, repetition: usize) -> u64 {
        match &self.seeds {
            Some(s) => s[repetition],
            None => self.base_seed.wrapping_add(repetition as u64),
        }
    }

    pub fn aco_params(&self, variant: Variant, seed: u64) -> AcoParams {
        AcoParams {
            beta: self.colony.beta,
            rho: self.colony.rho,
            q0: self.colony.q0,
            num_ants: self.colony.num_ants,
            time_max: self.time_max,
            max_iterations: self.max_iterations,
            seed,
            variant,
            reinit: self.colony.reinit,
        }
    }
}

/// Outcome of one algorithm on one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status", content = "detail")]
pub enum CellStatus {
    Ok,
    /// The exact solver declined (too many cluster sequences).
    Refused(String),
    Failed(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmResult {
    pub algorithm: Algorithm,
    pub status: CellStatus,
    pub best: Option<Cost>,
    pub mean: Option<f64>,
    /// Cost of every run, in repetition order.
    pub runs: Vec<Cost>,
    pub seeds: Vec<u64>,
    pub mean_iterations: Option<f64>,
    pub mean_elapsed_seconds: f64,
}

impl AlgorithmResult {
    /// Value shown in the comparison table: the mean for stochastic
    /// solvers, the single cost otherwise.
    pub fn display_value(&self) -> Option<f64> {
        self.mean
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub problem: String,
    pub nc: usize,
    pub n: usize,
    pub optimum: Option<Cost>,
    /// Set when the instance could not be loaded; `results` is then empty.
    pub error: Option<String>,
    pub results: Vec<AlgorithmResult>,
}

impl RunReport {
    pub fn result(&self, algorithm: Algorithm) -> Option<&AlgorithmResult> {
        self.results.iter().find(|r| r.algorithm == algorithm)
    }

    /// Copy with all timing fields zeroed.
    pub fn without_timing(&self) -> Self {
        let mut r = self.clone();
        for a in &mut r.results {
            a.mean_elapsed_seconds = 0.0;
        }
        r
    }
}

/// Result of a single solver invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SolveOutput {
    Tour(Tour),
    Colony(aco::RunResult),
}

impl SolveOutput {
    pub fn tour(&self) -> &Tour {
        match self {
            SolveOutput::Tour(t) => t,
            SolveOutput::Colony(r) => &r.best_tour,
        }
    }
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Aco(#[from] aco::AcoError),
}

/// Runs one algorithm once. `params` is used by ACS/RACS only, with its
/// variant overridden by `algorithm`.
pub fn solve(
    instance: &GtspInstance,
    algorithm: Algorithm,
    params: &AcoParams,
    exact_cap: u64,
) -> Result<SolveOutput, SolveError> {
    Ok(match algorithm {
        Algorithm::Exact => SolveOutput::Tour(exact_solve(instance, exact_cap)?),
        Algorithm::Nn => SolveOutput::Tour(nn_reference_cost(instance).1),
        Algorithm::Acs | Algorithm::Racs => {
            let variant = if algorithm == Algorithm::Acs { Variant::Acs } else { Variant::Racs };
            let p = AcoParams { variant, ..params.clone() };
            SolveOutput::Colony(aco::run(instance, &p)?)
        }
    })
}

struct Cell {
    instance: usize,
    algorithm: Algorithm,
    repetition: usize,
}

struct CellOutcome {
    result: Result<SolveOutput, SolveError>,
    elapsed: f64,
    seed: u64,
}

/// Runs every instance × algorithm cell. EXACT and NN run once; ACS and
/// RACS run `repetitions` times. Reports come back in input order.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<RunReport>, BenchError> {
    config.validate()?;
    let loaded: Vec<Result<(GtspInstance, Option<Cost>), BenchError>> =
        config.instances.iter().map(InstanceSpec::load).collect();

    let mut cells = Vec::new();
    for (i, inst) in loaded.iter().enumerate() {
        if inst.is_err() {
            continue;
        }
        for &algorithm in &config.algorithms {
            let reps = if algorithm.is_stochastic() { config.repetitions } else { 1 };
            cells.extend((0..reps).map(|repetition| Cell {
                instance: i,
                algorithm,
                repetition,
            }));
        }
    }

    let run_cell = |cell: &Cell| {
        let (inst, _) = loaded[cell.instance].as_ref().expect("only loaded instances have cells");
        let seed = if cell.algorithm.is_stochastic() { config.seed_for(cell.repetition) } else { 0 };
        let variant = if cell.algorithm == Algorithm::Acs { Variant::Acs } else { Variant::Racs };
        let params = config.aco_params(variant, seed);
        let started = Instant::now();
        let result = solve(inst, cell.algorithm, &params, config.exact_cap);
        CellOutcome {
            result,
            elapsed: started.elapsed().as_secs_f64(),
            seed,
        }
    };
    let outcomes: Vec<CellOutcome> = if config.parallel {
        cells.par_iter().map(run_cell).collect()
    } else {
        cells.iter().map(run_cell).collect()
    };

    let mut reports = Vec::with_capacity(loaded.len());
    for (i, load) in loaded.into_iter().enumerate() {
        let (inst, sidecar_opt) = match load {
            Ok(l) => l,
            Err(e) => {
                reports.push(RunReport {
                    problem: config.instances[i].label(),
                    nc: 0,
                    n: 0,
                    optimum: None,
                    error: Some(e.to_string()),
                    results: Vec::new(),
                });
                continue;
            }
        };
        let mut results = Vec::new();
        for &algorithm in &config.algorithms {
            let mine: Vec<&CellOutcome> = cells
                .iter()
                .zip(&outcomes)
                .filter(|(c, _)| c.instance == i && c.algorithm == algorithm)
                .map(|(_, o)| o)
                .collect();
            results.push(aggregate(algorithm, &mine));
        }
        let exact_opt = results
            .iter()
            .find(|r| r.algorithm == Algorithm::Exact && r.status == CellStatus::Ok)
            .and_then(|r| r.best);
        reports.push(RunReport {
            problem: inst.name.clone(),
            nc: inst.p(),
            n: inst.n(),
            optimum: sidecar_opt.or(exact_opt),
            error: None,
            results,
        });
    }
    Ok(reports)
}

fn aggregate(algorithm: Algorithm, outcomes: &[&CellOutcome]) -> AlgorithmResult {
    let mean_elapsed_seconds = outcomes.iter().map(|o| o.elapsed).sum::<f64>() / outcomes.len().max(1) as f64;
    let mut runs = Vec::new();
    let mut iterations = Vec::new();
    for o in outcomes {
        match &o.result {
            Ok(out) => {
                runs.push(out.tour().cost);
                if let SolveOutput::Colony(r) = out {
                    iterations.push(r.iterations as f64);
                }
            }
            Err(e) => {
                let status = match e {
                    SolveError::Exact(ExactError::CapExceeded { .. }) => CellStatus::Refused(e.to_string()),
                    _ => CellStatus::Failed(e.to_string()),
                };
                return AlgorithmResult {
                    algorithm,
                    status,
                    best: None,
                    mean: None,
                    runs: Vec::new(),
                    seeds: Vec::new(),
                    mean_iterations: None,
                    mean_elapsed_seconds,
                };
            }
        }
    }
    let mean = runs.iter().map(|&c| c as f64).sum::<f64>() / runs.len() as f64;
    AlgorithmResult {
        algorithm,
        status: CellStatus::Ok,
        best: runs.iter().copied().min(),
        mean: Some(mean),
        seeds: if algorithm.is_stochastic() { outcomes.iter().map(|o| o.seed).collect() } else { Vec::new() },
        runs,
        mean_iterations: (!iterations.is_empty()).then(|| iterations.iter().sum::<f64>() / iterations.len() as f64),
        mean_elapsed_seconds,
    }
}

/// Algorithms present in any report, in canonical column order.
fn columns(reports: &[RunReport]) -> Vec<Algorithm> {
    let mut cols: Vec<Algorithm> = reports.iter().flat_map(|r| r.results.iter().map(|a| a.algorithm)).collect();
    cols.sort();
    cols.dedup();
    cols
}

fn fmt_value(v: f64) -> String {
    if v.fract() == 0.0 {
        format!("{v:.0}")
    } else {
        format!("{v:.1}")
    }
}

/// Aligned comparison table. The best value in each row is marked with `*`
/// (every tied algorithm is marked); refused or failed cells show `—`.
pub fn render_text(reports: &[RunReport]) -> String {
    let cols = columns(reports);
    let mut header = vec!["Problem".to_string(), "nc".into(), "n".into(), "Opt.val.".into()];
    header.extend(cols.iter().map(|a| a.name().to_string()));
    let mut rows = vec![header];
    for r in reports {
        let mut row = vec![
            r.problem.clone(),
            r.nc.to_string(),
            r.n.to_string(),
            r.optimum.map_or("n/a".into(), |o| o.to_string()),
        ];
        if let Some(e) = &r.error {
            row.push(format!("error: {e}"));
            rows.push(row);
            continue;
        }
        let values: Vec<Option<f64>> = cols
            .iter()
            .map(|&a| r.result(a).and_then(AlgorithmResult::display_value))
            .collect();
        let best = values.iter().flatten().copied().fold(f64::INFINITY, f64::min);
        for (&a, v) in cols.iter().zip(&values) {
            row.push(match (r.result(a), v) {
                (None, _) => String::new(),
                (Some(_), None) => "—".into(),
                (Some(_), Some(v)) if *v == best => format!("{}*", fmt_value(*v)),
                (Some(_), Some(v)) => fmt_value(*v),
            });
        }
        rows.push(row);
    }
    let ncols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..ncols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for (ri, row) in rows.iter().enumerate() {
        let cells: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(c, s)| {
                let pad = widths[c] - s.chars().count();
                if c == 0 {
                    format!("{s}{}", " ".repeat(pad))
                } else {
                    format!("{}{s}", " ".repeat(pad))
                }
            })
            .collect();
        writeln!(out, "{}", cells.join("  ").trim_end()).unwrap();
        if ri == 0 {
            let total = widths.iter().sum::<usize>() + 2 * widths.len().saturating_sub(1);
            writeln!(out, "{}", "-".repeat(total)).unwrap();
        }
    }
    out
}

/// One CSV row per instance × algorithm.
pub fn render_csv(reports: &[RunReport]) -> Result<String, BenchError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "problem", "nc", "n", "optimum", "algorithm", "status", "best", "mean", "runs", "seeds",
        "mean_iterations", "mean_elapsed_seconds", "is_best",
    ])?;
    let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
    for r in reports {
        let opt = r.optimum.map_or(String::new(), |o| o.to_string());
        if let Some(e) = &r.error {
            w.write_record([&r.problem, "", "", &opt, "", &format!("error: {e}"), "", "", "", "", "", "", ""])?;
            continue;
        }
        let best = r
            .results
            .iter()
            .filter_map(AlgorithmResult::display_value)
            .fold(f64::INFINITY, f64::min);
        for a in &r.results {
            let status = match &a.status {
                CellStatus::Ok => "ok".to_string(),
                CellStatus::Refused(m) => format!("refused: {m}"),
                CellStatus::Failed(m) => format!("failed: {m}"),
            };
            w.write_record([
                r.problem.clone(),
                r.nc.to_string(),
                r.n.to_string(),
                opt.clone(),
                a.algorithm.name().to_string(),
                status,
                a.best.map_or(String::new(), |b| b.to_string()),
                a.mean.map_or(String::new(), |m| m.to_string()),
                join(&a.runs),
                join(&a.seeds),
                a.mean_iterations.map_or(String::new(), |m| m.to_string()),
                a.mean_elapsed_seconds.to_string(),
                (a.display_value() == Some(best)).to_string(),
            ])?;
        }
    }
    let bytes = w.into_inner().map_err(|e| BenchError::Config(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv writer emits utf-8"))
}

pub fn render_json(reports: &[RunReport]) -> Result<String, BenchError> {
    Ok(serde_json::to_string_pretty(reports)? + "\n")
}

/// Writes `<prefix>.csv` and `<prefix>.json` (when a prefix is given) and
/// returns the text table.
pub fn emit_table(reports: &[RunReport], prefix: Option<&Path>) -> Result<String, BenchError> {
    if reports.is_empty() {
        return Err(BenchError::Config("no reports to emit".into()));
    }
    if let Some(prefix) = prefix {
        for (ext, body) in [("csv", render_csv(reports)?), ("json", render_json(reports)?)] {
            let path = prefix.with_extension(ext);
            std::fs::write(&path, body).map_err(|source| BenchError::Io { path, source })?;
        }
    }
    Ok(render_text(reports))
}
