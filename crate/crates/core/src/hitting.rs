//! Expected hitting times and the spread objective.
//!
//! For a target set `A`, the vector `H` of expected first-arrival times from
//! the nodes outside `A` solves `(I - P_A) H = 1`, where `P_A` is the
//! transition matrix with the rows and columns of `A` removed. The objective
//! `F(A)` is the sum of `H`.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, TransitionMatrix};
use crate::nodeset::NodeSet;

/// Maximum allowed `‖(I - P_A) H - 1‖∞` after a solve.
pub const RESIDUAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HittingProfile {
    pub target: NodeSet,
    /// `(node, h(node, target))` for every node outside the target, by node id.
    pub times: Vec<(usize, f64)>,
    pub objective: f64,
}

impl HittingProfile {
    pub fn time(&self, node: usize) -> Option<f64> {
        self.times.iter().find(|&&(i, _)| i == node).map(|&(_, h)| h)
    }
}

/// Solves for the hitting times of `target` under `chain`.
pub fn hitting_times(chain: &TransitionMatrix, target: &NodeSet) -> Result<HittingProfile> {
    if target.is_empty() {
        return Err(Error::EmptyTarget);
    }
    let n = chain.node_count();
    if let Some(bad) = target.iter().find(|&x| x >= n) {
        return Err(Error::NodeOutOfRange { node: bad, node_count: n });
    }
    let free: Vec<usize> = (0..n).filter(|&i| !target.contains(i)).collect();
    let k = free.len();
    if k == 0 {
        return Ok(HittingProfile { target: target.clone(), times: Vec::new(), objective: 0.0 });
    }

    let system = DMatrix::from_fn(k, k, |r, c| {
        let p = chain.get(free[r], free[c]);
        if r == c {
            1.0 - p
        } else {
            -p
        }
    });
    let ones = DVector::from_element(k, 1.0);
    let solution = system
        .clone()
        .lu()
        .solve(&ones)
        .ok_or_else(|| Error::Solver(format!("singular system for target {target}")))?;
    let residual = (&system * &solution - &ones).amax();
    if !(residual <= RESIDUAL_TOL) {
        return Err(Error::Solver(format!("residual {residual:e} for target {target}")));
    }

    let times: Vec<(usize, f64)> = free.iter().copied().zip(solution.iter().copied()).collect();
    let objective = times.iter().map(|&(_, h)| h).sum();
    Ok(HittingProfile { target: target.clone(), times, objective })
}

/// The spread objective on a fixed graph, memoized per target set.
#[derive(Debug)]
pub struct SpreadObjective {
    graph: Graph,
    chain: TransitionMatrix,
    cache: Mutex<HashMap<NodeSet, f64>>,
    solves: AtomicU64,
}

impl SpreadObjective {
    /// Uniform-neighbor random walk on `graph`.
    pub fn new(graph: &Graph) -> Self {
        let chain = graph.transition_matrix();
        Self::with_chain(graph, chain)
    }

    /// A custom chain; it must already have been validated against `graph`
    /// (see [`TransitionMatrix::from_rows`]).
    pub fn with_chain(graph: &Graph, chain: TransitionMatrix) -> Self {
        assert_eq!(graph.node_count(), chain.node_count());
        SpreadObjective {
            graph: graph.clone(),
            chain,
            cache: Mutex::new(HashMap::new()),
            solves: AtomicU64::new(0),
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn chain(&self) -> &TransitionMatrix {
        &self.chain
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    /// Number of linear solves performed so far (cache misses).
    pub fn solve_count(&self) -> u64 {
        self.solves.load(Ordering::Relaxed)
    }

    pub fn profile(&self, target: &NodeSet) -> Result<HittingProfile> {
        hitting_times(&self.chain, target)
    }

    /// `F(target)`.
    pub fn value(&self, target: &NodeSet) -> Result<f64> {
        if let Some(&f) = self.cache.lock().expect("cache lock").get(target) {
            return Ok(f);
        }
        let f = hitting_times(&self.chain, target)?.objective;
        self.solves.fetch_add(1, Ordering::Relaxed);
        self.cache.lock().expect("cache lock").insert(target.clone(), f);
        Ok(f)
    }

    /// `F` of a set that is known to be nonempty and in range.
    pub(crate) fn eval(&self, target: &NodeSet) -> f64 {
        self.value(target).expect("objective of a nonempty in-range set")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub walks_per_node: u64,
}

/// Simulates `walks_per_node` walks from every node outside `target` and
/// sums the per-node sample means of the hitting time.
///
/// The random stream of walk `w` from start node `s` is the ChaCha8 stream
/// `s` of `seed`, positioned at block `w · 2^32`, so results do not depend on
/// evaluation order.
pub fn monte_carlo_objective(
    chain: &TransitionMatrix,
    target: &NodeSet,
    walks_per_node: u64,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    if target.is_empty() {
        return Err(Error::EmptyTarget);
    }
    assert!(walks_per_node >= 1 && walks_per_node <= u32::MAX as u64);
    let n = chain.node_count();
    // (neighbor, cumulative probability) per row
    let rows: Vec<Vec<(usize, f64)>> = (0..n)
        .map(|i| {
            let mut acc = 0.0;
            chain
                .row(i)
                .iter()
                .enumerate()
                .filter(|&(_, &p)| p > 0.0)
                .map(|(j, &p)| {
                    acc += p;
                    (j, acc)
                })
                .collect()
        })
        .collect();
    let in_target: Vec<bool> = (0..n).map(|i| target.contains(i)).collect();
    let base = ChaCha8Rng::seed_from_u64(seed);

    let mut estimate = 0.0;
    let mut variance = 0.0;
    for start in (0..n).filter(|&i| !in_target[i]) {
        let mut stream = base.clone();
        stream.set_stream(start as u64);
        let (mut sum, mut sum_sq) = (0.0f64, 0.0f64);
        for walk in 0..walks_per_node {
            let mut rng = stream.clone();
            rng.set_word_pos((walk as u128) << 36);
            let mut node = start;
            let mut steps = 0u64;
            loop {
                let u: f64 = rng.random();
                let row = &rows[node];
                let pick = row.partition_point(|&(_, c)| c <= u).min(row.len() - 1);
                node = row[pick].0;
                steps += 1;
                if in_target[node] {
                    break;
                }
            }
            let t = steps as f64;
            sum += t;
            sum_sq += t * t;
        }
        let w = walks_per_node as f64;
        let mean = sum / w;
        let sample_var = if walks_per_node > 1 { (sum_sq - w * mean * mean).max(0.0) / (w - 1.0) } else { 0.0 };
        estimate += mean;
        variance += sample_var / w;
    }
    Ok(MonteCarloEstimate { estimate, std_error: variance.sqrt(), walks_per_node })
}
