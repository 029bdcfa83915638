//! Seeded random instance generators for oracle tests and the `gen` command.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::instance::{
    cluster_instance, euc2d_costs, Cost, CostMatrix, GtspInstance, InstanceError, NodeCoords,
};

/// `n` integer points on a 100×100 grid, clustered around `p` farthest
/// centers.
pub fn random_euclidean(n: usize, p: usize, seed: u64) -> Result<GtspInstance, InstanceError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..n)
        .map(|_| (rng.gen_range(0..100) as f64, rng.gen_range(0..100) as f64))
        .collect();
    let coords = NodeCoords::new(format!("gen{n}s{seed}"), points)?;
    let costs = euc2d_costs(&coords);
    let mut inst = cluster_instance(&coords, &costs, Some(p))?;
    inst.name = format!("{p}GEN{n}");
    Ok(inst)
}

/// Symmetric integer costs drawn uniformly from `1..=max_cost` and a random
/// partition into `p` non-empty clusters.
pub fn random_costs(
    n: usize,
    p: usize,
    max_cost: Cost,
    seed: u64,
) -> Result<GtspInstance, InstanceError> {
    if p < 2 || p > n || max_cost == 0 {
        return Err(InstanceError::InvalidArgument(format!(
            "need 2 <= p <= n and max_cost >= 1 (n = {n}, p = {p}, max_cost = {max_cost})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cost = vec![0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let c = rng.gen_range(1..=max_cost);
            cost[i * n + j] = c;
            cost[j * n + i] = c;
        }
    }
    let mut nodes: Vec<usize> = (0..n).collect();
    nodes.shuffle(&mut rng);
    let mut clusters = vec![Vec::new(); p];
    for (idx, &v) in nodes.iter().enumerate() {
        let k = if idx < p { idx } else { rng.gen_range(0..p) };
        clusters[k].push(v);
    }
    GtspInstance::new(
        format!("{p}RND{n}"),
        CostMatrix::from_flat(n, cost)?,
        clusters,
    )
}
