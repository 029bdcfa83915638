//! Brute-force oracles shared by the integration tests. Nothing here calls
//! into the solvers under test.

#![allow(dead_code)]

use gtsp_core::instance::{Cost, GtspInstance};

/// Cost of the closed cycle through `nodes`, computed directly from the
/// matrix.
pub fn cycle(instance: &GtspInstance, nodes: &[usize]) -> Cost {
    let p = nodes.len();
    (0..p).map(|i| instance.cost(nodes[i], nodes[(i + 1) % p])).sum()
}

/// Every way of picking one node per cluster, clusters in index order.
pub fn selections(instance: &GtspInstance) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for k in 0..instance.p() {
        let mut next = Vec::new();
        for partial in &out {
            for &v in instance.cluster(k) {
                let mut s = partial.clone();
                s.push(v);
                next.push(s);
            }
        }
        out = next;
    }
    out
}

/// All permutations of `items` (Heap's algorithm).
pub fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    fn heap(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(a.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, a, out);
            let j = if k.is_multiple_of(2) { i } else { 0 };
            a.swap(j, k - 1);
        }
    }
    let mut a = items.to_vec();
    let mut out = Vec::new();
    heap(a.len(), &mut a, &mut out);
    out
}

/// Minimum over all node selections of the cycle visiting the clusters in
/// `order`.
pub fn brute_force_sequence(instance: &GtspInstance, order: &[usize]) -> Cost {
    selections(instance)
        .iter()
        .map(|sel| {
            let nodes: Vec<usize> = order.iter().map(|&k| sel[k]).collect();
            cycle(instance, &nodes)
        })
        .min()
        .unwrap()
}

/// Global optimum: every selection × every cyclic order (cluster 0 fixed in
/// front).
pub fn brute_force_optimum(instance: &GtspInstance) -> Cost {
    let rest: Vec<usize> = (1..instance.p()).collect();
    let perms = permutations(&rest);
    let mut best = Cost::MAX;
    for sel in selections(instance) {
        for perm in &perms {
            let mut nodes = vec![sel[0]];
            nodes.extend(perm.iter().map(|&k| sel[k]));
            best = best.min(cycle(instance, &nodes));
        }
    }
    best
}

/// True iff `nodes` holds exactly one node of every cluster.
pub fn one_per_cluster(instance: &GtspInstance, nodes: &[usize]) -> bool {
    let mut seen = vec![0; instance.p()];
    for &v in nodes {
        if v >= instance.n() {
            return false;
        }
        seen[instance.cluster_of(v)] += 1;
    }
    nodes.len() == instance.p() && seen.iter().all(|&c| c == 1)
}

/// Deterministic small-corpus parameters for case `i`: `(n, p)` with
/// `2 ≤ p ≤ max_p` and `p ≤ n ≤ max_n`.
pub fn corpus_shape(i: u64, max_n: usize, max_p: usize) -> (usize, usize) {
    let p = 2 + (i as usize * 7 + 3) % (max_p - 1);
    let n = p + (i as usize * 13 + 5) % (max_n - p + 1);
    (n, p)
}
