//! Tours, tour validation and the generalized Nearest-Neighbor constructor.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::instance::{Cost, GtspInstance};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TourError {
    #[error("tour has {found} nodes, instance has {expected} clusters")]
    WrongLength { expected: usize, found: usize },
    #[error("node {0} does not exist")]
    UnknownNode(usize),
    #[error("cluster {cluster} visited {count} times")]
    ClusterRepeated { cluster: usize, count: usize },
    #[error("cluster {0} not visited")]
    ClusterMissing(usize),
}

/// A closed tour through exactly one node per cluster. `cost` includes the
/// closing edge back to `nodes[0]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tour {
    pub nodes: Vec<usize>,
    pub cost: Cost,
}

impl Tour {
    /// Validates `nodes` and computes its cost.
    pub fn new(instance: &GtspInstance, nodes: Vec<usize>) -> Result<Self, TourError> {
        let cost = tour_cost(instance, &nodes)?;
        Ok(Self { nodes, cost })
    }

    /// Checks the one-per-cluster property and that `cost` matches the
    /// recomputed edge sum.
    pub fn is_valid_for(&self, instance: &GtspInstance) -> bool {
        tour_cost(instance, &self.nodes).is_ok_and(|c| c == self.cost)
    }

    /// Directed edges of the tour, closing edge last.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let p = self.nodes.len();
        (0..p).map(move |i| (self.nodes[i], self.nodes[(i + 1) % p]))
    }
}

pub fn validate_tour(instance: &GtspInstance, nodes: &[usize]) -> Result<(), TourError> {
    if nodes.len() != instance.p() {
        // report the offending cluster when we can find one
        if nodes.len() > instance.p() || nodes.iter().any(|&v| v >= instance.n()) {
            check_clusters(instance, nodes)?;
        }
        return Err(TourError::WrongLength {
            expected: instance.p(),
            found: nodes.len(),
        });
    }
    check_clusters(instance, nodes)
}

fn check_clusters(instance: &GtspInstance, nodes: &[usize]) -> Result<(), TourError> {
    let mut seen = vec![0usize; instance.p()];
    for &v in nodes {
        if v >= instance.n() {
            return Err(TourError::UnknownNode(v));
        }
        seen[instance.cluster_of(v)] += 1;
    }
    if let Some(cluster) = seen.iter().position(|&c| c > 1) {
        return Err(TourError::ClusterRepeated {
            cluster,
            count: seen[cluster],
        });
    }
    if let Some(cluster) = seen.iter().position(|&c| c == 0) {
        return Err(TourError::ClusterMissing(cluster));
    }
    Ok(())
}

/// Sum of consecutive edge costs plus the closing edge. Sums involving a
/// missing edge saturate at [`crate::instance::INFINITE_COST`].
pub fn tour_cost(instance: &GtspInstance, nodes: &[usize]) -> Result<Cost, TourError> {
    validate_tour(instance, nodes)?;
    Ok(cycle_cost(instance, nodes))
}

pub(crate) fn cycle_cost(instance: &GtspInstance, nodes: &[usize]) -> Cost {
    let p = nodes.len();
    (0..p).fold(0 as Cost, |acc, i| {
        acc.saturating_add(instance.cost(nodes[i], nodes[(i + 1) % p]))
    })
}

/// Greedy tour from `start`: repeatedly move to the cheapest node of any
/// unvisited cluster (lowest id on ties), then close the cycle.
///
/// Panics if `start` is not a node of `instance`.
pub fn nn_tour(instance: &GtspInstance, start: usize) -> Tour {
    assert!(start < instance.n(), "start node {start} out of range");
    let p = instance.p();
    let mut visited = vec![false; p];
    visited[instance.cluster_of(start)] = true;
    let mut nodes = Vec::with_capacity(p);
    nodes.push(start);
    let mut current = start;
    for _ in 1..p {
        let next = (0..instance.n())
            .filter(|&v| !visited[instance.cluster_of(v)])
            .min_by_key(|&v| (instance.cost(current, v), v))
            .expect("an unvisited cluster remains");
        visited[instance.cluster_of(next)] = true;
        nodes.push(next);
        current = next;
    }
    let cost = cycle_cost(instance, &nodes);
    Tour { nodes, cost }
}

/// `L_nn`: the best Nearest-Neighbor tour over all starts in the smallest
/// cluster (lowest cluster index on ties). Earlier starts win ties.
pub fn nn_reference_cost(instance: &GtspInstance) -> (Cost, Tour) {
    let first = instance.min_cardinality_cluster();
    let tour = instance
        .cluster(first)
        .iter()
        .map(|&v| nn_tour(instance, v))
        .reduce(|best, t| if t.cost < best.cost { t } else { best })
        .expect("clusters are non-empty");
    (tour.cost, tour)
}
