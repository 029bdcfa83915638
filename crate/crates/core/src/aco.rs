//! Ant Colony System and Reinforcing Ant Colony System for the GTSP.
//!
//! Both engines share tour construction: an ant sits on a node, keeps a tabu
//! list of visited clusters, and moves to a node of an unvisited cluster
//! either greedily (`q ≤ q0`) or by roulette over `τ·η^β`. They differ in the
//! per-transition correction rule and in the `τ_max` re-initialization step,
//! which only RACS applies.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::construct::{nn_reference_cost, Tour};
use crate::instance::{Cost, GtspInstance, INFINITE_COST};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AcoError {
    #[error("invalid parameter: {0}")]
    InvalidParams(String),
    #[error("no finite tour: every candidate edge from node {0} is missing")]
    NoFiniteTour(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Variant {
    Acs,
    Racs,
}

/// What happens when an entry exceeds `τ_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReinitMode {
    /// Reset only the offending entries to `τ0`.
    #[default]
    Entry,
    /// Reset the whole matrix to `τ0`.
    Matrix,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcoParams {
    pub beta: f64,
    pub rho: f64,
    pub q0: f64,
    pub num_ants: usize,
    /// Wall-clock budget in seconds; `None` for no time limit.
    pub time_max: Option<f64>,
    pub max_iterations: Option<u64>,
    pub seed: u64,
    pub variant: Variant,
    #[serde(default)]
    pub reinit: ReinitMode,
}

impl Default for AcoParams {
    fn default() -> Self {
        Self {
            beta: 5.0,
            rho: 0.5,
            q0: 0.5,
            num_ants: 10,
            time_max: Some(600.0),
            max_iterations: None,
            seed: 0,
            variant: Variant::Racs,
            reinit: ReinitMode::Entry,
        }
    }
}

impl AcoParams {
    pub fn racs() -> Self {
        Self::default()
    }

    pub fn acs() -> Self {
        Self {
            variant: Variant::Acs,
            ..Self::default()
        }
    }

    /// Iteration-bounded run without a time limit.
    pub fn with_iterations(mut self, iterations: u64) -> Self {
        self.max_iterations = Some(iterations);
        self.time_max = None;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<(), AcoError> {
        let bad = |m: String| Err(AcoError::InvalidParams(m));
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return bad(format!("beta must be finite and >= 0, got {}", self.beta));
        }
        if !(self.rho > 0.0 && self.rho < 1.0) {
            return bad(format!("rho must lie in (0, 1), got {}", self.rho));
        }
        if !(0.0..=1.0).contains(&self.q0) {
            return bad(format!("q0 must lie in [0, 1], got {}", self.q0));
        }
        if self.num_ants == 0 {
            return bad("num_ants must be positive".into());
        }
        if let Some(t) = self.time_max {
            if t.is_nan() || t < 0.0 {
                return bad(format!("time_max must be >= 0, got {t}"));
            }
        }
        if self.time_max.is_none() && self.max_iterations.is_none() {
            return bad("either time_max or max_iterations must be set".into());
        }
        Ok(())
    }
}

/// Per-edge trail intensities with the initial value `τ0` and the cap `τ_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct PheromoneMatrix {
    n: usize,
    tau: Vec<f64>,
    tau0: f64,
    tau_max: f64,
}

impl PheromoneMatrix {
    /// `τ0 = 1/(n·L_nn)`, `τ_max = 1/((1−ρ)·L_nn)`, every entry at `τ0`.
    pub fn new(n: usize, l_nn: Cost, rho: f64) -> Self {
        let l = l_nn.max(1) as f64;
        Self::with_bounds(n, 1.0 / (n as f64 * l), 1.0 / ((1.0 - rho) * l))
    }

    pub fn with_bounds(n: usize, tau0: f64, tau_max: f64) -> Self {
        Self {
            n,
            tau: vec![tau0; n * n],
            tau0,
            tau_max,
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.tau[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.tau[i * self.n + j] = value;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tau0(&self) -> f64 {
        self.tau0
    }

    pub fn tau_max(&self) -> f64 {
        self.tau_max
    }

    /// Off-diagonal entries; the diagonal is never traversed.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let n = self.n;
        (0..n * n)
            .filter(move |k| k / n != k % n)
            .map(move |k| (k / n, k % n, self.tau[k]))
    }

    fn blend(&mut self, i: usize, j: usize, rho: f64, deposit: f64, symmetric: bool) {
        let v = (1.0 - rho) * self.get(i, j) + rho * deposit;
        self.set(i, j, v);
        if symmetric {
            self.set(j, i, v);
        }
    }
}

/// Visibility `η^β` with `η = 1/c`. Costs are clamped to at least 1 and
/// missing edges get zero visibility.
#[inline]
pub fn visibility(cost: Cost, beta: f64) -> f64 {
    if cost == INFINITE_COST {
        0.0
    } else {
        (1.0 / cost.max(1) as f64).powf(beta)
    }
}

/// One ant: current node, tabu list of visited clusters, partial path and
/// its own random stream.
#[derive(Debug, Clone)]
pub struct AntState {
    pub current: usize,
    pub visited_clusters: Vec<bool>,
    pub path: Vec<usize>,
    rng: ChaCha8Rng,
}

impl AntState {
    /// Ant `index` of a colony seeded with `seed`; each ant draws from its
    /// own ChaCha stream.
    pub fn new(seed: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        Self {
            current: 0,
            visited_clusters: Vec::new(),
            path: Vec::new(),
            rng,
        }
    }

    /// Clears the tabu list and places the ant on `node`.
    pub fn start_at(&mut self, instance: &GtspInstance, node: usize) {
        self.visited_clusters.clear();
        self.visited_clusters.resize(instance.p(), false);
        self.visited_clusters[instance.cluster_of(node)] = true;
        self.path.clear();
        self.path.push(node);
        self.current = node;
    }

    /// Random cluster, then a random node of that cluster.
    pub fn place_randomly(&mut self, instance: &GtspInstance) {
        let k = self.rng.gen_range(0..instance.p());
        let members = instance.cluster(k);
        let node = members[self.rng.gen_range(0..members.len())];
        self.start_at(instance, node);
    }

    pub fn move_to(&mut self, instance: &GtspInstance, node: usize) {
        debug_assert!(!self.visited_clusters[instance.cluster_of(node)]);
        self.visited_clusters[instance.cluster_of(node)] = true;
        self.path.push(node);
        self.current = node;
    }

    pub fn is_complete(&self) -> bool {
        self.visited_clusters.iter().all(|&v| v)
    }

    /// Nodes of unvisited clusters in ascending id order.
    pub fn candidates<'a>(&'a self, instance: &'a GtspInstance) -> impl Iterator<Item = usize> + 'a {
        (0..instance.n()).filter(move |&v| !self.visited_clusters[instance.cluster_of(v)])
    }

    /// Uniform draw used by the exploitation test, in `(0, 1]` so that
    /// `q0 = 0` never exploits and `q0 = 1` always does.
    fn draw_q(&mut self) -> f64 {
        1.0 - self.rng.gen::<f64>()
    }
}

fn weighted_candidates(
    state: &AntState,
    pheromone: &PheromoneMatrix,
    instance: &GtspInstance,
    vis: impl Fn(usize, usize) -> f64,
) -> Vec<(usize, f64)> {
    let i = state.current;
    state
        .candidates(instance)
        .map(|u| (u, pheromone.get(i, u) * vis(i, u)))
        .collect()
}

/// Transition probabilities `p_iu = τ_iu·η_iu^β / Σ_o τ_io·η_io^β` over the
/// nodes of all unvisited clusters, ascending by node id.
pub fn transition_distribution(
    state: &AntState,
    pheromone: &PheromoneMatrix,
    instance: &GtspInstance,
    beta: f64,
) -> Vec<(usize, f64)> {
    let mut w = weighted_candidates(state, pheromone, instance, |i, j| {
        visibility(instance.cost(i, j), beta)
    });
    let total: f64 = w.iter().map(|(_, x)| x).sum();
    if total > 0.0 {
        for (_, x) in &mut w {
            *x /= total;
        }
    }
    w
}

fn choose_with(
    state: &mut AntState,
    pheromone: &PheromoneMatrix,
    instance: &GtspInstance,
    q0: f64,
    vis: impl Fn(usize, usize) -> f64,
) -> Result<usize, AcoError> {
    let w = weighted_candidates(state, pheromone, instance, vis);
    assert!(!w.is_empty(), "choose_next called on a complete tour");
    let total: f64 = w.iter().map(|(_, x)| x).sum();
    if total <= 0.0 || !total.is_finite() {
        // weights underflowed or every edge is missing
        return w
            .iter()
            .filter(|&&(u, _)| instance.cost(state.current, u) != INFINITE_COST)
            .min_by_key(|&&(u, _)| (instance.cost(state.current, u), u))
            .map(|&(u, _)| u)
            .ok_or(AcoError::NoFiniteTour(state.current));
    }
    let q = state.draw_q();
    if q <= q0 {
        let mut best = w[0];
        for &c in &w[1..] {
            if c.1 > best.1 {
                best = c;
            }
        }
        return Ok(best.0);
    }
    let target = state.rng.gen::<f64>() * total;
    let mut acc = 0.0;
    for &(u, x) in &w {
        acc += x;
        if acc > target {
            return Ok(u);
        }
    }
    // rounding left the target past the last bucket
    Ok(w.iter().rev().find(|c| c.1 > 0.0).expect("total > 0").0)
}

/// Next node for `state`: argmax of `τ·η^β` when `q ≤ q0` (lowest id on
/// ties), otherwise a roulette draw from [`transition_distribution`].
/// Consumes one draw for `q` and one more when exploring.
pub fn choose_next(
    state: &mut AntState,
    pheromone: &PheromoneMatrix,
    instance: &GtspInstance,
    params: &AcoParams,
) -> Result<usize, AcoError> {
    let beta = params.beta;
    choose_with(state, pheromone, instance, params.q0, |i, j| {
        visibility(instance.cost(i, j), beta)
    })
}

/// Per-transition correction on edge `(i, j)`.
///
/// RACS: `τ ← (1−ρ)·τ + ρ/(n·L⁺)`; ACS: `τ ← (1−ρ)·τ + ρ·τ0`.
#[allow(clippy::too_many_arguments)]
pub fn local_update(
    pheromone: &mut PheromoneMatrix,
    edge: (usize, usize),
    rho: f64,
    l_plus: Cost,
    n: usize,
    variant: Variant,
    symmetric: bool,
) {
    let deposit = match variant {
        Variant::Racs => 1.0 / (n as f64 * l_plus.max(1) as f64),
        Variant::Acs => pheromone.tau0,
    };
    pheromone.blend(edge.0, edge.1, rho, deposit, symmetric);
}

/// Reinforces the edges of `best` (closing edge included):
/// `τ ← (1−ρ)·τ + ρ/cost(best)`.
pub fn global_update(pheromone: &mut PheromoneMatrix, best: &Tour, rho: f64, symmetric: bool) {
    let deposit = 1.0 / best.cost.max(1) as f64;
    for (i, j) in best.edges() {
        pheromone.blend(i, j, rho, deposit, symmetric);
    }
}

/// Resets entries strictly above `τ_max` to `τ0`. Returns the number of
/// entries that exceeded the bound.
pub fn evaporation_reinit(pheromone: &mut PheromoneMatrix, mode: ReinitMode) -> usize {
    let (tau0, cap) = (pheromone.tau0, pheromone.tau_max);
    let over = pheromone.tau.iter().filter(|&&t| t > cap).count();
    match mode {
        ReinitMode::Entry => {
            for t in pheromone.tau.iter_mut().filter(|t| **t > cap) {
                *t = tau0;
            }
        }
        ReinitMode::Matrix if over > 0 => pheromone.tau.fill(tau0),
        ReinitMode::Matrix => {}
    }
    over
}

/// Outcome of one colony iteration.
#[derive(Debug, Clone)]
pub struct Iteration {
    pub ant_tours: Vec<Tour>,
    pub improved: bool,
    pub reinitialized: usize,
}

/// Mutable state of one ACS/RACS run.
#[derive(Debug, Clone)]
pub struct Colony<'a> {
    instance: &'a GtspInstance,
    params: AcoParams,
    pheromone: PheromoneMatrix,
    visibility: Vec<f64>,
    ants: Vec<AntState>,
    best: Tour,
    l_nn: Cost,
    iteration: u64,
    trace: Vec<Cost>,
}

impl<'a> Colony<'a> {
    /// `τ ← τ0` everywhere and the Nearest-Neighbor tour as incumbent.
    pub fn new(instance: &'a GtspInstance, params: AcoParams) -> Result<Self, AcoError> {
        params.validate()?;
        let n = instance.n();
        let (l_nn, nn) = nn_reference_cost(instance);
        let pheromone = PheromoneMatrix::new(n, l_nn, params.rho);
        let visibility = (0..n * n)
            .map(|k| visibility(instance.cost(k / n, k % n), params.beta))
            .collect();
        let ants = (0..params.num_ants as u64)
            .map(|a| AntState::new(params.seed, a))
            .collect();
        Ok(Self {
            instance,
            params,
            pheromone,
            visibility,
            ants,
            best: nn,
            l_nn,
            iteration: 0,
            trace: Vec::new(),
        })
    }

    pub fn pheromone(&self) -> &PheromoneMatrix {
        &self.pheromone
    }

    pub fn best(&self) -> &Tour {
        &self.best
    }

    pub fn l_nn(&self) -> Cost {
        self.l_nn
    }

    pub fn iteration(&self) -> u64 {
        self.iteration
    }

    /// Best-so-far cost after each completed iteration.
    pub fn trace(&self) -> &[Cost] {
        &self.trace
    }

    /// One iteration: ants are placed at random and advance in lockstep, one
    /// transition each per step, with a local update after every transition
    /// and on the closing edge. The best-so-far tour then receives the
    /// global update, followed by `τ_max` re-initialization (RACS only).
    pub fn step(&mut self) -> Result<Iteration, AcoError> {
        let inst = self.instance;
        let n = inst.n();
        let p = inst.p();
        let symmetric = inst.is_symmetric();
        let (rho, q0, variant) = (self.params.rho, self.params.q0, self.params.variant);
        let l_plus = self.best.cost;

        for ant in &mut self.ants {
            ant.place_randomly(inst);
        }
        for _ in 1..p {
            for ant in &mut self.ants {
                let vis = &self.visibility;
                let from = ant.current;
                let next = choose_with(ant, &self.pheromone, inst, q0, |i, j| vis[i * n + j])?;
                ant.move_to(inst, next);
                local_update(&mut self.pheromone, (from, next), rho, l_plus, n, variant, symmetric);
            }
        }
        for ant in &self.ants {
            let edge = (ant.current, ant.path[0]);
            local_update(&mut self.pheromone, edge, rho, l_plus, n, variant, symmetric);
        }

        let ant_tours: Vec<Tour> = self
            .ants
            .iter()
            .map(|a| Tour {
                cost: crate::construct::cycle_cost(inst, &a.path),
                nodes: a.path.clone(),
            })
            .collect();
        let iteration_best = ant_tours
            .iter()
            .reduce(|b, t| if t.cost < b.cost { t } else { b })
            .expect("num_ants > 0");
        let improved = iteration_best.cost < self.best.cost;
        if improved {
            self.best = iteration_best.clone();
        }

        global_update(&mut self.pheromone, &self.best, rho, symmetric);
        let reinitialized = match variant {
            Variant::Racs => evaporation_reinit(&mut self.pheromone, self.params.reinit),
            Variant::Acs => 0,
        };
        self.iteration += 1;
        self.trace.push(self.best.cost);
        Ok(Iteration {
            ant_tours,
            improved,
            reinitialized,
        })
    }
}

/// Result of one ACS/RACS run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub variant: Variant,
    pub best_tour: Tour,
    pub cost: Cost,
    pub l_nn: Cost,
    pub iterations: u64,
    pub elapsed_seconds: f64,
    pub seed: u64,
    pub params: AcoParams,
    /// Best-so-far cost after each iteration.
    pub trace: Vec<Cost>,
}

impl RunResult {
    /// Copy with timing zeroed, for reproducibility comparisons.
    pub fn without_timing(&self) -> Self {
        Self {
            elapsed_seconds: 0.0,
            ..self.clone()
        }
    }
}

/// Runs the colony until `max_iterations` or `time_max` is reached,
/// whichever comes first. With `max_iterations = Some(0)` the
/// Nearest-Neighbor incumbent is returned.
pub fn run(instance: &GtspInstance, params: &AcoParams) -> Result<RunResult, AcoError> {
    let started = Instant::now();
    let mut colony = Colony::new(instance, params.clone())?;
    loop {
        if params.max_iterations.is_some_and(|m| colony.iteration >= m) {
            break;
        }
        if params
            .time_max
            .is_some_and(|t| started.elapsed().as_secs_f64() >= t)
        {
            break;
        }
        colony.step()?;
    }
    Ok(RunResult {
        variant: params.variant,
        cost: colony.best.cost,
        best_tour: colony.best.clone(),
        l_nn: colony.l_nn,
        iterations: colony.iteration,
        elapsed_seconds: started.elapsed().as_secs_f64(),
        seed: params.seed,
        params: params.clone(),
        trace: colony.trace,
    })
}
