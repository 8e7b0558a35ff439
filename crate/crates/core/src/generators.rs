//! Small graph families used by tests, benchmarks and the CLI.

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::Graph;

pub fn path(n: usize) -> Graph {
    Graph::new(n, (1..n).map(|i| (i - 1, i))).expect("path with n >= 2 is valid")
}

pub fn cycle(n: usize) -> Graph {
    Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle with n >= 3 is valid")
}

pub fn complete(n: usize) -> Graph {
    Graph::new(n, (0..n).tuple_combinations()).expect("complete graph with n >= 2 is valid")
}

/// Node 0 joined to leaves `1..n`.
pub fn star(n: usize) -> Graph {
    Graph::new(n, (1..n).map(|i| (0, i))).expect("star with n >= 2 is valid")
}

/// A uniformly shuffled random spanning tree plus every other pair with
/// probability `extra_edge_prob`.
pub fn random_connected<R: Rng + ?Sized>(n: usize, extra_edge_prob: f64, rng: &mut R) -> Graph {
    assert!(n >= 2, "need at least two nodes");
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for i in 1..n {
        let parent = order[rng.random_range(0..i)];
        edges.push((order[i], parent));
    }
    for (u, v) in (0..n).tuple_combinations() {
        if rng.random_bool(extra_edge_prob) {
            edges.push((u, v));
        }
    }
    Graph::new(n, edges).expect("spanning tree keeps the graph connected")
}

/// One representative of every isomorphism class of connected graphs on `n`
/// nodes (`2 <= n <= 7`), in increasing order of edge bitmask.
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    assert!((2..=7).contains(&n), "exhaustive generation is limited to 2..=7 nodes");
    let pairs: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
    let mut pair_index = vec![vec![usize::MAX; n]; n];
    for (k, &(u, v)) in pairs.iter().enumerate() {
        pair_index[u][v] = k;
        pair_index[v][u] = k;
    }
    // bit k of the mask maps to bit relabel[p][k] under permutation p
    let relabel: Vec<Vec<usize>> = (0..n)
        .permutations(n)
        .map(|perm| pairs.iter().map(|&(u, v)| pair_index[perm[u]][perm[v]]).collect())
        .collect();

    let mut out = Vec::new();
    for mask in 1u32..(1u32 << pairs.len()) {
        let is_canonical = relabel.iter().all(|map| {
            let mut image = 0u32;
            for (k, &target) in map.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    image |= 1 << target;
                }
            }
            image >= mask
        });
        if !is_canonical {
            continue;
        }
        let edges = pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &e)| e);
        if let Ok(g) = Graph::new(n, edges) {
            out.push(g);
        }
    }
    out
}

/// Every connected graph on `2..=max_nodes` nodes up to isomorphism.
pub fn connected_graphs_up_to(max_nodes: usize) -> Vec<Graph> {
    (2..=max_nodes).flat_map(connected_graphs).collect()
}
