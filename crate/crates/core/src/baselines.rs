//! Reference algorithms: exhaustive search, the supermodular greedy
//! algorithm with its `(1 - 1/e)` guarantee, and Two-Opt maximal matching.

use std::cmp::Ordering;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hitting::SpreadObjective;
use crate::nodeset::NodeSet;
use crate::{approx_eq, cmp_objective, strictly_less};

/// `C(n, k)`, saturating.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Number of subsets of an `n`-set with cardinality in `1..=max_k`.
pub fn count_nonempty_up_to(n: usize, max_k: usize) -> u128 {
    (1..=max_k.min(n)).map(|k| binomial(n, k)).fold(0u128, u128::saturating_add)
}

pub(crate) fn check_budget(needed: u128, budget: u64) -> Result<()> {
    if needed > budget as u128 {
        Err(Error::BudgetExceeded { needed, budget })
    } else {
        Ok(())
    }
}

/// All minimizers found by an exhaustive sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Optimum {
    pub value: f64,
    /// Every set attaining `value` (within the tie tolerance), canonical order.
    pub argmin: Vec<NodeSet>,
    pub evaluated: u64,
}

fn sweep(obj: &SpreadObjective, candidates: impl Iterator<Item = NodeSet>) -> Optimum {
    let mut best = f64::INFINITY;
    let mut argmin: Vec<NodeSet> = Vec::new();
    let mut evaluated = 0;
    for set in candidates {
        evaluated += 1;
        let f = obj.eval(&set);
        match cmp_objective(f, best) {
            Ordering::Less => {
                best = f;
                argmin.clear();
                argmin.push(set);
            }
            Ordering::Equal => {
                best = best.min(f);
                argmin.push(set);
            }
            Ordering::Greater => {}
        }
    }
    argmin.sort();
    Optimum { value: best, argmin, evaluated }
}

fn check_cardinality(m: usize, min: usize, max: usize) -> Result<()> {
    if m < min || m > max {
        Err(Error::Cardinality { requested: m, min, max })
    } else {
        Ok(())
    }
}

/// Exact minimum of `F` over nonempty sets of cardinality at most `m`.
pub fn brute_force_optimal(obj: &SpreadObjective, m: usize, budget: u64) -> Result<Optimum> {
    let n = obj.node_count();
    check_cardinality(m, 1, n)?;
    check_budget(count_nonempty_up_to(n, m), budget)?;
    let candidates = (1..=m).flat_map(move |k| (0..n).combinations(k).map(NodeSet::from_sorted));
    Ok(sweep(obj, candidates))
}

/// Exact minimum of `F` over sets of cardinality at most `m` that contain
/// `anchor`.
pub fn brute_force_containing(obj: &SpreadObjective, anchor: usize, m: usize, budget: u64) -> Result<Optimum> {
    let n = obj.node_count();
    check_cardinality(m, 1, n)?;
    if anchor >= n {
        return Err(Error::NodeOutOfRange { node: anchor, node_count: n });
    }
    let needed = (0..m).map(|k| binomial(n - 1, k)).fold(0u128, u128::saturating_add);
    check_budget(needed, budget)?;
    let others: Vec<usize> = (0..n).filter(|&i| i != anchor).collect();
    let candidates = (0..m).flat_map(move |k| {
        others.clone().into_iter().combinations(k).map(move |rest| NodeSet::from(rest).with(anchor))
    });
    Ok(sweep(obj, candidates))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GreedyStep {
    pub added: usize,
    pub set: NodeSet,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GreedyTrace {
    pub seed: NodeSet,
    pub steps: Vec<GreedyStep>,
    pub final_set: NodeSet,
    /// `F(final_set)`; `None` only when the final set is empty.
    pub final_value: Option<f64>,
}

/// Best single-node extension of `current` among `candidates`, ties to the
/// lowest id.
pub(crate) fn best_extension(
    obj: &SpreadObjective,
    current: &NodeSet,
    candidates: impl Iterator<Item = usize>,
) -> Option<(usize, NodeSet, f64)> {
    let mut best: Option<(usize, NodeSet, f64)> = None;
    for node in candidates.filter(|&v| !current.contains(v)) {
        let next = current.with(node);
        let f = obj.eval(&next);
        if best.as_ref().map_or(true, |(_, _, bf)| strictly_less(f, *bf)) {
            best = Some((node, next, f));
        }
    }
    best
}

/// Grows `seed` one node at a time, always taking the extension with the
/// smallest `F`, until it has `m` members.
pub fn greedy_select(obj: &SpreadObjective, m: usize, seed: &NodeSet) -> Result<GreedyTrace> {
    let n = obj.node_count();
    check_cardinality(m, seed.len(), n)?;
    if let Some(bad) = seed.iter().find(|&x| x >= n) {
        return Err(Error::NodeOutOfRange { node: bad, node_count: n });
    }
    let mut current = seed.clone();
    let mut steps = Vec::with_capacity(m - seed.len());
    while current.len() < m {
        let (added, next, value) = best_extension(obj, &current, 0..n).expect("m <= n leaves a free node");
        steps.push(GreedyStep { added, set: next.clone(), value });
        current = next;
    }
    let final_value = if current.is_empty() { None } else { Some(obj.eval(&current)) };
    Ok(GreedyTrace { seed: seed.clone(), steps, final_set: current, final_value })
}

/// Both sides of the anchored greedy guarantee
/// `F({a}) - F(A_M(a)) >= (1 - 1/e) (F({a}) - F*_a)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GreedyGap {
    pub anchor: usize,
    pub m: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub greedy_set: NodeSet,
    pub greedy_value: f64,
    /// Best value over sets of size `<= m` containing the anchor.
    pub anchored_optimum: f64,
    pub holds: bool,
}

pub fn greedy_bound_gap(obj: &SpreadObjective, anchor: usize, m: usize, budget: u64) -> Result<GreedyGap> {
    let optimum = brute_force_containing(obj, anchor, m, budget)?;
    let single = NodeSet::singleton(anchor);
    let trace = greedy_select(obj, m, &single)?;
    let f_anchor = obj.eval(&single);
    let greedy_value = trace.final_value.expect("greedy set contains the anchor");
    let lhs = f_anchor - greedy_value;
    let rhs = (1.0 - (-1.0f64).exp()) * (f_anchor - optimum.value);
    let holds = lhs >= rhs || approx_eq(lhs, rhs);
    Ok(GreedyGap {
        anchor,
        m,
        lhs,
        rhs,
        greedy_set: trace.final_set,
        greedy_value,
        anchored_optimum: optimum.value,
        holds,
    })
}

/// A maximal matching and its endpoint set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matching {
    pub edges: Vec<(usize, usize)>,
    pub vertices: NodeSet,
}

impl Matching {
    pub fn is_matching(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.edges.iter().all(|&(u, v)| seen.insert(u) && seen.insert(v))
    }

    pub fn is_maximal_in(&self, g: &Graph) -> bool {
        g.edges().iter().all(|&(u, v)| self.vertices.contains(u) || self.vertices.contains(v))
    }
}

/// Two-Opt: scan edges in canonical order, keep each edge whose endpoints are
/// both still unmatched.
pub fn two_opt_matching(g: &Graph) -> Matching {
    two_opt_matching_in_order(g, g.edges())
}

/// Two-Opt over a caller-supplied scan order.
pub fn two_opt_matching_in_order(g: &Graph, order: &[(usize, usize)]) -> Matching {
    let mut matched = vec![false; g.node_count()];
    let mut edges = Vec::new();
    for &(u, v) in order {
        if !matched[u] && !matched[v] {
            matched[u] = true;
            matched[v] = true;
            edges.push((u.min(v), u.max(v)));
        }
    }
    let vertices = (0..g.node_count()).filter(|&i| matched[i]).collect();
    Matching { edges, vertices }
}

/// The canonical edge list shuffled by `seed`; seed 0 keeps canonical order.
pub fn edge_order(g: &Graph, seed: u64) -> Vec<(usize, usize)> {
    let mut order = g.edges().to_vec();
    if seed != 0 {
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    order
}

/// A smallest vertex cover, first in canonical order.
pub fn minimum_vertex_cover(g: &Graph, budget: u64) -> Result<NodeSet> {
    let n = g.node_count();
    let mut spent: u128 = 0;
    for k in 1..=n {
        spent = spent.saturating_add(binomial(n, k));
        check_budget(spent, budget)?;
        if let Some(cover) = (0..n).combinations(k).map(NodeSet::from_sorted).find(|s| g.is_vertex_cover(s)) {
            return Ok(cover);
        }
    }
    unreachable!("the full node set is a vertex cover")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverRatio {
    /// Number of matched vertices.
    pub matched: usize,
    /// Size of a minimum vertex cover.
    pub opt: usize,
}

impl CoverRatio {
    pub fn within_factor_two(&self) -> bool {
        self.opt <= self.matched && self.matched <= 2 * self.opt
    }
}

pub fn cover_approximation_ratio(g: &Graph, matching: &Matching, budget: u64) -> Result<CoverRatio> {
    let opt = minimum_vertex_cover(g, budget)?.len();
    Ok(CoverRatio { matched: matching.vertices.len(), opt })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, cycle, path, star};
    use crate::DEFAULT_BUDGET;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(60, 30), 118264581564861424);
        assert_eq!(count_nonempty_up_to(4, 4), 15);
    }

    #[test]
    fn brute_force_path() {
        let obj = SpreadObjective::new(&path(3));
        let best = brute_force_optimal(&obj, 1, DEFAULT_BUDGET).unwrap();
        assert!((best.value - 2.0).abs() < 1e-9);
        assert_eq!(best.argmin, vec![NodeSet::from([1])]);
    }

    #[test]
    fn brute_force_cycle_pairs() {
        let obj = SpreadObjective::new(&cycle(4));
        let best = brute_force_optimal(&obj, 2, DEFAULT_BUDGET).unwrap();
        assert!((best.value - 2.0).abs() < 1e-9);
        assert_eq!(best.argmin, vec![NodeSet::from([0, 2]), NodeSet::from([1, 3])]);
    }

    #[test]
    fn brute_force_full_set() {
        let obj = SpreadObjective::new(&star(5));
        let best = brute_force_optimal(&obj, 5, DEFAULT_BUDGET).unwrap();
        assert_eq!(best.value, 0.0);
        assert_eq!(best.argmin, vec![NodeSet::full(5)]);
    }

    #[test]
    fn brute_force_budget_and_range() {
        let obj = SpreadObjective::new(&path(6));
        assert!(matches!(brute_force_optimal(&obj, 3, 10), Err(Error::BudgetExceeded { needed: 41, budget: 10 })));
        assert!(matches!(brute_force_optimal(&obj, 0, DEFAULT_BUDGET), Err(Error::Cardinality { .. })));
        assert!(matches!(brute_force_optimal(&obj, 7, DEFAULT_BUDGET), Err(Error::Cardinality { .. })));
    }

    #[test]
    fn greedy_examples() {
        let obj = SpreadObjective::new(&path(3));
        let t = greedy_select(&obj, 1, &NodeSet::empty()).unwrap();
        assert_eq!(t.final_set, NodeSet::from([1]));
        assert_eq!(t.steps.len(), 1);

        let obj = SpreadObjective::new(&complete(4));
        let t = greedy_select(&obj, 2, &NodeSet::empty()).unwrap();
        assert_eq!(t.final_set, NodeSet::from([0, 1]));
        assert_eq!(t.steps.iter().map(|s| s.added).collect::<Vec<_>>(), vec![0, 1]);

        let seed = NodeSet::from([2]);
        let t = greedy_select(&obj, 1, &seed).unwrap();
        assert!(t.steps.is_empty());
        assert_eq!(t.final_set, seed);

        assert!(greedy_select(&obj, 5, &NodeSet::empty()).is_err());
    }

    #[test]
    fn greedy_steps_extend_by_one() {
        let obj = SpreadObjective::new(&cycle(7));
        let t = greedy_select(&obj, 4, &NodeSet::empty()).unwrap();
        let mut prev = NodeSet::empty();
        for step in &t.steps {
            assert_eq!(step.set, prev.with(step.added));
            assert!(!prev.contains(step.added));
            prev = step.set.clone();
        }
    }

    #[test]
    fn gap_examples() {
        let obj = SpreadObjective::new(&path(3));
        let gap = greedy_bound_gap(&obj, 1, 1, DEFAULT_BUDGET).unwrap();
        assert_eq!((gap.lhs, gap.rhs), (0.0, 0.0));
        assert!(gap.holds);

        // F({0}) = 7; best pair with 0 is {0,1} or {0,2} at F = 1; greedy from {0} finds F = 1
        let gap = greedy_bound_gap(&obj, 0, 2, DEFAULT_BUDGET).unwrap();
        assert!((gap.lhs - 6.0).abs() < 1e-9);
        assert!((gap.rhs - 6.0 * (1.0 - (-1.0f64).exp())).abs() < 1e-9);
        assert!(gap.holds);
    }

    #[test]
    fn two_opt_examples() {
        let m = two_opt_matching(&path(3));
        assert_eq!(m.edges, vec![(0, 1)]);
        assert_eq!(m.vertices, NodeSet::from([0, 1]));

        let m = two_opt_matching(&path(2));
        assert_eq!(m.edges, vec![(0, 1)]);

        let m = two_opt_matching(&cycle(4));
        // canonical edges: (0,1),(0,3),(1,2),(2,3)
        assert_eq!(m.edges, vec![(0, 1), (2, 3)]);
        assert_eq!(m.vertices, NodeSet::full(4));
    }

    #[test]
    fn cover_ratio_examples() {
        for (g, expected) in [(path(3), (2, 1)), (path(2), (2, 1)), (cycle(4), (4, 2))] {
            let r = cover_approximation_ratio(&g, &two_opt_matching(&g), DEFAULT_BUDGET).unwrap();
            assert_eq!((r.matched, r.opt), expected);
            assert!(r.within_factor_two());
        }
    }

    #[test]
    fn shuffled_orders_still_give_maximal_matchings() {
        let g = complete(6);
        for seed in 0..10 {
            let m = two_opt_matching_in_order(&g, &edge_order(&g, seed));
            assert!(m.is_matching());
            assert!(m.is_maximal_in(&g));
            assert!(g.is_vertex_cover(&m.vertices));
        }
    }
}
