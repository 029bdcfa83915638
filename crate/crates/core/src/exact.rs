//! Exact GTSP solver.
//!
//! For a fixed cluster order the best tour is a shortest path in a layered
//! network: layer `l` holds the nodes of the `l`-th cluster of the order and
//! a final layer duplicates the first cluster. A closed tour starting at `v`
//! is a path from `v` to its duplicate `v'`. Enumerating all `(p-1)!` orders
//! with the smallest cluster fixed first yields the global optimum.
//!
//! The network is a DAG, so shortest paths are computed by forward dynamic
//! programming over layers: `O(Σ_l |L_l|·|L_{l+1}|)` per start node.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use thiserror::Error;

use crate::construct::Tour;
use crate::instance::{Cost, GtspInstance, INFINITE_COST};

/// Largest number of cluster orders `exact_solve` enumerates by default:
/// `10!`, i.e. instances with up to 11 clusters.
pub const DEFAULT_SEQUENCE_CAP: u64 = 3_628_800;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("refusing exact solve: {}! = {sequences} cluster sequences exceeds cap {cap}", .clusters - 1)]
    CapExceeded {
        clusters: usize,
        sequences: u128,
        cap: u64,
    },
    #[error("no finite tour")]
    NoFiniteTour,
    #[error("invalid cluster sequence: {0}")]
    InvalidSequence(String),
}

/// `(p-1)!`, saturating.
pub fn sequence_count(p: usize) -> u128 {
    (1..p as u128).fold(1u128, |acc, k| acc.saturating_mul(k))
}

/// Order in which the clusters are visited.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterSequence {
    order: Vec<usize>,
}

impl ClusterSequence {
    pub fn new(instance: &GtspInstance, order: Vec<usize>) -> Result<Self, ExactError> {
        let p = instance.p();
        if order.len() != p {
            return Err(ExactError::InvalidSequence(format!(
                "length {} but {p} clusters",
                order.len()
            )));
        }
        let mut seen = vec![false; p];
        for &k in &order {
            if k >= p || std::mem::replace(&mut seen[k], true) {
                return Err(ExactError::InvalidSequence(format!(
                    "cluster {k} is out of range or repeated"
                )));
            }
        }
        Ok(Self { order })
    }

    /// Identity order rotated so the minimum-cardinality cluster comes first.
    pub fn canonical(instance: &GtspInstance) -> Self {
        let first = instance.min_cardinality_cluster();
        let mut order = vec![first];
        order.extend((0..instance.p()).filter(|&k| k != first));
        Self { order }
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn first(&self) -> usize {
        self.order[0]
    }
}

/// Layered network for one cluster sequence. Layers `0..p` are the clusters
/// in order; layer `p` holds the duplicates `v'` of the first layer.
#[derive(Debug, Clone)]
pub struct LayeredNetwork<'a> {
    instance: &'a GtspInstance,
    layers: Vec<&'a [usize]>,
}

impl<'a> LayeredNetwork<'a> {
    pub fn new(instance: &'a GtspInstance, seq: &ClusterSequence) -> Self {
        let mut layers: Vec<&[usize]> = seq.order().iter().map(|&k| instance.cluster(k)).collect();
        layers.push(instance.cluster(seq.first()));
        Self { instance, layers }
    }

    pub fn num_layers(&self) -> usize {
        self.layers.len()
    }

    /// Nodes of layer `l`; for the last layer these are the duplicates of
    /// layer 0, identified by their original ids.
    pub fn layer(&self, l: usize) -> &[usize] {
        self.layers[l]
    }

    /// Arc cost between consecutive layers; arcs only go from layer `l` to
    /// layer `l + 1`.
    pub fn arc_cost(&self, from: usize, to: usize) -> Cost {
        self.instance.cost(from, to)
    }

    /// Shortest path from `start` (in layer 0) to its duplicate in the last
    /// layer. Returns the path cost and the tour nodes (without the
    /// duplicate). Ties go to the lowest-index predecessor.
    pub fn shortest_cycle_from(&self, start: usize) -> (Cost, Vec<usize>) {
        let p = self.layers.len() - 1;
        let mut dist = vec![0 as Cost];
        let mut prev_layer: &[usize] = &[start];
        // pred[l][j] = index into layer l-1 of the best predecessor of layer l's node j
        let mut pred: Vec<Vec<usize>> = Vec::with_capacity(p);
        for l in 1..p {
            let layer = self.layers[l];
            let mut next = vec![INFINITE_COST; layer.len()];
            let mut back = vec![0usize; layer.len()];
            for (j, &w) in layer.iter().enumerate() {
                for (i, &u) in prev_layer.iter().enumerate() {
                    let d = dist[i].saturating_add(self.arc_cost(u, w));
                    if d < next[j] {
                        next[j] = d;
                        back[j] = i;
                    }
                }
            }
            pred.push(back);
            dist = next;
            prev_layer = layer;
        }
        let mut best = INFINITE_COST;
        let mut last = 0;
        for (i, &u) in prev_layer.iter().enumerate() {
            let d = dist[i].saturating_add(self.arc_cost(u, start));
            if d < best {
                best = d;
                last = i;
            }
        }
        let mut nodes = vec![0; p];
        nodes[0] = start;
        let mut idx = last;
        for l in (1..p).rev() {
            nodes[l] = self.layers[l][idx];
            idx = pred[l - 1][idx];
        }
        (best, nodes)
    }
}

/// Cheapest tour visiting the clusters in the order `seq`.
pub fn best_tour_for_sequence(
    instance: &GtspInstance,
    seq: &ClusterSequence,
) -> Result<Tour, ExactError> {
    let net = LayeredNetwork::new(instance, seq);
    let (cost, nodes) = net
        .layer(0)
        .iter()
        .map(|&v| net.shortest_cycle_from(v))
        .reduce(|best, c| if c.0 < best.0 { c } else { best })
        .expect("clusters are non-empty");
    if cost == INFINITE_COST {
        return Err(ExactError::NoFiniteTour);
    }
    Ok(Tour { nodes, cost })
}

/// Depth-first enumeration of cluster orders sharing the layer DP across
/// common prefixes. `dist` is row-major `starts × current layer`.
struct SequenceSearch<'a> {
    instance: &'a GtspInstance,
    starts: &'a [usize],
    shared_bound: &'a AtomicU64,
    used: Vec<bool>,
    order: Vec<usize>,
    best: Option<(Cost, Vec<usize>)>,
}

impl SequenceSearch<'_> {
    fn local_bound(&self) -> Cost {
        self.best.as_ref().map_or(INFINITE_COST, |b| b.0)
    }

    fn extend(&self, dist: &[Cost], from: &[usize], to: &[usize]) -> Vec<Cost> {
        let s = self.starts.len();
        let mut next = vec![INFINITE_COST; s * to.len()];
        for si in 0..s {
            let row = &dist[si * from.len()..(si + 1) * from.len()];
            for (j, &w) in to.iter().enumerate() {
                let mut m = INFINITE_COST;
                for (i, &u) in from.iter().enumerate() {
                    m = m.min(row[i].saturating_add(self.instance.cost(u, w)));
                }
                next[si * to.len() + j] = m;
            }
        }
        next
    }

    fn pruned(&self, dist: &[Cost]) -> bool {
        let lb = dist.iter().copied().min().unwrap_or(INFINITE_COST);
        // non-negative costs: a prefix already at the bound cannot win, and
        // equal-cost completions lose the lexicographic tie anyway
        lb >= self.local_bound() || lb > self.shared_bound.load(Ordering::Relaxed)
    }

    fn dfs(&mut self, dist: &[Cost]) {
        let p = self.instance.p();
        let last_cluster = *self.order.last().expect("order starts non-empty");
        let from = self.instance.cluster(last_cluster);
        if self.order.len() == p {
            let mut cost = INFINITE_COST;
            for (si, &v) in self.starts.iter().enumerate() {
                for (i, &u) in from.iter().enumerate() {
                    cost = cost.min(dist[si * from.len() + i].saturating_add(self.instance.cost(u, v)));
                }
            }
            if cost < self.local_bound() {
                self.best = Some((cost, self.order.clone()));
                self.shared_bound.fetch_min(cost, Ordering::Relaxed);
            }
            return;
        }
        for k in 0..p {
            if self.used[k] {
                continue;
            }
            let next = self.extend(dist, from, self.instance.cluster(k));
            if self.pruned(&next) {
                continue;
            }
            self.used[k] = true;
            self.order.push(k);
            self.dfs(&next);
            self.order.pop();
            self.used[k] = false;
        }
    }
}

/// Global optimum by enumerating every cluster order with the smallest
/// cluster first. Orders are explored lexicographically and the first
/// optimal order wins, independent of the number of worker threads.
pub fn exact_solve(instance: &GtspInstance, sequence_cap: u64) -> Result<Tour, ExactError> {
    let p = instance.p();
    let sequences = sequence_count(p);
    if sequences > sequence_cap as u128 {
        return Err(ExactError::CapExceeded {
            clusters: p,
            sequences,
            cap: sequence_cap,
        });
    }
    let first = instance.min_cardinality_cluster();
    let starts = instance.cluster(first);
    let shared_bound = AtomicU64::new(INFINITE_COST);
    // start layer: each start node reaches only itself
    let s = starts.len();
    let mut root = vec![INFINITE_COST; s * s];
    for si in 0..s {
        root[si * s + si] = 0;
    }

    let branches: Vec<usize> = (0..p).filter(|&k| k != first).collect();
    let results: Vec<Option<(Cost, Vec<usize>)>> = branches
        .par_iter()
        .map(|&second| {
            let mut search = SequenceSearch {
                instance,
                starts,
                shared_bound: &shared_bound,
                used: vec![false; p],
                order: vec![first, second],
                best: None,
            };
            search.used[first] = true;
            search.used[second] = true;
            let dist = search.extend(&root, starts, instance.cluster(second));
            if !search.pruned(&dist) {
                search.dfs(&dist);
            }
            search.best
        })
        .collect();

    let (_, order) = results
        .into_iter()
        .flatten()
        .reduce(|best, r| if r.0 < best.0 { r } else { best })
        .ok_or(ExactError::NoFiniteTour)?;
    let seq = ClusterSequence::new(instance, order).expect("search builds permutations");
    best_tour_for_sequence(instance, &seq)
}
