//! The rank `ρ(A) = (F_max - F(A)) / (F_max - F_min)` and the family of
//! optimal and near-optimal sets `{A : 0 < |A| <= K, ρ(A) >= c}`, stratified
//! by cardinality.

use std::collections::BTreeMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::baselines::{check_budget, count_nonempty_up_to, two_opt_matching};
use crate::error::{Error, Result};
use crate::hitting::SpreadObjective;
use crate::nodeset::NodeSet;
use crate::approx_eq;

/// Slack when comparing a rank against the threshold `c`.
pub const RHO_TOL: f64 = 1e-12;

/// Normalization constants for the rank.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankContext {
    /// Size of the vertex cover the family is anchored to.
    pub k: usize,
    pub cover: NodeSet,
    /// Largest `F` over singletons.
    pub f_max: f64,
    /// `F(cover)`, which is `N - K`.
    pub f_min: f64,
}

impl RankContext {
    pub fn new(k: usize, cover: NodeSet, f_max: f64, f_min: f64) -> Result<Self> {
        if f_max <= f_min || approx_eq(f_max, f_min) {
            return Err(Error::Degenerate(f_min));
        }
        Ok(RankContext { k, cover, f_max, f_min })
    }

    /// `ρ` of an objective value. Values outside `[F_min, F_max]` can only
    /// come from sets outside the ranked domain and are rejected.
    pub fn rank(&self, value: f64) -> Result<f64> {
        let slack = 1e-9 * 1f64.max(self.f_max.abs());
        if value < self.f_min - slack || value > self.f_max + slack {
            return Err(Error::OutOfRankDomain { value, f_min: self.f_min, f_max: self.f_max });
        }
        let rho = (self.f_max - value) / (self.f_max - self.f_min);
        Ok(rho.clamp(0.0, 1.0))
    }

    /// The objective level `c̄` with `ρ >= c  ⇔  F <= c̄`.
    pub fn value_threshold(&self, c: f64) -> f64 {
        self.f_max - c * (self.f_max - self.f_min)
    }
}

/// Derives the rank constants from a vertex cover.
pub fn build_context(obj: &SpreadObjective, cover: &NodeSet) -> Result<RankContext> {
    let g = obj.graph();
    if !g.is_vertex_cover(cover) {
        return Err(Error::NotVertexCover(cover.clone()));
    }
    let f_min = obj.value(cover)?;
    debug_assert!(approx_eq(f_min, (g.node_count() - cover.len()) as f64));
    let f_max = (0..g.node_count())
        .map(|i| obj.eval(&NodeSet::singleton(i)))
        .fold(f64::NEG_INFINITY, f64::max);
    RankContext::new(cover.len(), cover.clone(), f_max, f_min)
}

/// [`build_context`] on the Two-Opt cover of the graph.
pub fn build_context_two_opt(obj: &SpreadObjective) -> Result<RankContext> {
    let matching = two_opt_matching(obj.graph());
    build_context(obj, &matching.vertices)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedSet {
    pub set: NodeSet,
    pub value: f64,
    pub rho: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedFamily {
    pub context: RankContext,
    pub c: f64,
    /// Smallest cardinality present.
    pub m: usize,
    /// `n ↦ G_n`, each level in canonical order; levels run `m..=K`.
    pub levels: BTreeMap<usize, Vec<RankedSet>>,
}

impl RankedFamily {
    pub fn level(&self, n: usize) -> &[RankedSet] {
        self.levels.get(&n).map_or(&[], Vec::as_slice)
    }

    pub fn get(&self, set: &NodeSet) -> Option<&RankedSet> {
        let level = self.level(set.len());
        level.binary_search_by(|r| r.set.cmp(set)).ok().map(|i| &level[i])
    }

    pub fn contains(&self, set: &NodeSet) -> bool {
        self.get(set).is_some()
    }

    pub fn k(&self) -> usize {
        self.context.k
    }

    pub fn len(&self) -> usize {
        self.levels.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = &RankedSet> {
        self.levels.values().flatten()
    }
}

pub(crate) fn check_threshold(c: f64) -> Result<()> {
    if c > 0.0 && c <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidThreshold(c))
    }
}

/// Enumerates every nonempty set of size at most `K` and keeps those with
/// `ρ >= c`. Ties at `ρ = c` are kept.
pub fn enumerate_family(obj: &SpreadObjective, ctx: &RankContext, c: f64, budget: u64) -> Result<RankedFamily> {
    check_threshold(c)?;
    let n = obj.node_count();
    check_budget(count_nonempty_up_to(n, ctx.k), budget)?;
    let mut levels: BTreeMap<usize, Vec<RankedSet>> = BTreeMap::new();
    for size in 1..=ctx.k {
        for members in (0..n).combinations(size) {
            let set = NodeSet::from_sorted(members);
            let value = obj.eval(&set);
            let rho = ctx.rank(value)?;
            if rho >= c - RHO_TOL {
                levels.entry(size).or_default().push(RankedSet { set, value, rho });
            }
        }
    }
    let m = *levels.keys().next().expect("the cover has rank 1, so the family is nonempty");
    debug_assert!((m..=ctx.k).all(|size| levels.contains_key(&size)));
    Ok(RankedFamily { context: ctx.clone(), c, m, levels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{path, star};
    use crate::DEFAULT_BUDGET;

    fn path_ctx() -> (SpreadObjective, RankContext) {
        let obj = SpreadObjective::new(&path(3));
        let ctx = build_context(&obj, &NodeSet::from([0, 1])).unwrap();
        (obj, ctx)
    }

    #[test]
    fn path_context_and_rank() {
        let (_, ctx) = path_ctx();
        assert_eq!(ctx.k, 2);
        assert!((ctx.f_min - 1.0).abs() < 1e-12);
        assert!((ctx.f_max - 7.0).abs() < 1e-9);
        assert!((ctx.rank(2.0).unwrap() - 5.0 / 6.0).abs() < 1e-12);
        assert_eq!(ctx.rank(ctx.f_min).unwrap(), 1.0);
        assert_eq!(ctx.rank(ctx.f_max).unwrap(), 0.0);
        assert!(matches!(ctx.rank(0.5), Err(Error::OutOfRankDomain { .. })));
        assert!(matches!(ctx.rank(8.0), Err(Error::OutOfRankDomain { .. })));
    }

    #[test]
    fn single_edge_context() {
        let obj = SpreadObjective::new(&path(2));
        let ctx = build_context(&obj, &NodeSet::from([0, 1])).unwrap();
        assert_eq!(ctx.f_min, 0.0);
        assert!((ctx.f_max - 1.0).abs() < 1e-12);
    }

    #[test]
    fn star_context() {
        // Leaf target on the 4-star: h(center) = 1 + (2/3)(1 + h(center)) gives
        // h(center) = 5 and h(other leaf) = 6, so F({leaf}) = 5 + 6 + 6 = 17.
        let obj = SpreadObjective::new(&star(4));
        let ctx = build_context(&obj, &NodeSet::from([0])).unwrap();
        assert_eq!(ctx.k, 1);
        assert!((ctx.f_min - 3.0).abs() < 1e-12);
        assert!((ctx.f_max - 17.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_non_cover_and_degenerate() {
        let obj = SpreadObjective::new(&path(3));
        assert!(matches!(build_context(&obj, &NodeSet::from([0])), Err(Error::NotVertexCover(_))));
        assert!(matches!(RankContext::new(1, NodeSet::from([0]), 3.0, 3.0), Err(Error::Degenerate(_))));
    }

    #[test]
    fn family_at_five_sixths() {
        let (obj, ctx) = path_ctx();
        let fam = enumerate_family(&obj, &ctx, 5.0 / 6.0, DEFAULT_BUDGET).unwrap();
        assert_eq!(fam.m, 1);
        let sets: Vec<NodeSet> = fam.iter().map(|r| r.set.clone()).collect();
        assert_eq!(
            sets,
            vec![NodeSet::from([1]), NodeSet::from([0, 1]), NodeSet::from([0, 2]), NodeSet::from([1, 2])]
        );
        let rhos: Vec<f64> = fam.iter().map(|r| r.rho).collect();
        assert!((rhos[0] - 5.0 / 6.0).abs() < 1e-12);
        assert!(rhos[1..].iter().all(|&r| r == 1.0));
    }

    #[test]
    fn family_at_one_keeps_only_minimizers() {
        let (obj, ctx) = path_ctx();
        let fam = enumerate_family(&obj, &ctx, 1.0, DEFAULT_BUDGET).unwrap();
        assert_eq!(fam.m, 2);
        assert!(fam.iter().all(|r| (r.value - ctx.f_min).abs() < 1e-9));
        assert_eq!(fam.len(), 3);
    }

    #[test]
    fn family_near_zero_drops_only_the_worst_singletons() {
        let (obj, ctx) = path_ctx();
        let fam = enumerate_family(&obj, &ctx, 1e-9, DEFAULT_BUDGET).unwrap();
        // {0} and {2} both attain F_max = 7
        assert_eq!(fam.len(), 6 - 2);
        assert!(!fam.contains(&NodeSet::from([0])));
        assert!(!fam.contains(&NodeSet::from([2])));
    }

    #[test]
    fn invalid_thresholds() {
        let (obj, ctx) = path_ctx();
        for c in [0.0, -0.1, 1.5, f64::NAN] {
            assert!(matches!(enumerate_family(&obj, &ctx, c, DEFAULT_BUDGET), Err(Error::InvalidThreshold(_))));
        }
        assert!(matches!(enumerate_family(&obj, &ctx, 0.5, 2), Err(Error::BudgetExceeded { .. })));
    }
}
