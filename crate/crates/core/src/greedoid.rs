//! Greedoids of optimal and near-optimal sets.
//!
//! The ranked family `L` satisfies the exchange axiom but not accessibility:
//! its smallest members (cardinality `m`) have no feasible one-element
//! deletions. A greedoid is cut out of `L` by choosing a base level
//! `Ĝ_m ⊆ G_m`, adding sub-levels `ĝ_1, …, ĝ_{m-1}` of subsets below it and
//! keeping, above it, only the sets of `G_n` that extend a set of `Ĝ_{n-1}`.
//!
//! Two constructions are provided:
//!
//! - [`build_case1`] picks one base set `H` and takes all of its subsets.
//! - [`build_case2`] keeps the whole of `G_m` as long as the sub-levels
//!   obtained from pairwise intersections admit partners for every set one
//!   level up.
//!
//! Every construction is verified with [`check_axioms`] and [`check_ladder`]
//! before it is returned.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::nodeset::NodeSet;
use crate::ranking::RankedFamily;

/// Why a set was admitted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Provenance {
    /// Case I: a proper subset of the base set.
    SubsetOfBase,
    /// Case I: the base set itself.
    Base,
    /// Case II sub-level: a pairwise intersection whose partners cover the
    /// level above. `extends` is the feasible set one level down it contains.
    PartnerCover { partners: Vec<usize>, extends: Option<NodeSet> },
    /// Case II base level: a member of `G_m` extending a feasible sub-level set.
    BaseLevel { extends: Option<NodeSet> },
    /// Above the base: a member of `G_n` extending a feasible `(n-1)`-set.
    Ladder { extends: NodeSet },
    /// Supplied directly by the caller.
    Declared,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum Construction {
    CaseI { base: NodeSet },
    CaseII,
    Declared,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibleSet {
    pub set: NodeSet,
    pub provenance: Provenance,
}

/// The feasible sets of a greedoid built on a ranked family. The empty set
/// is always feasible and is not stored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibleFamily {
    pub construction: Construction,
    /// Cardinality of the base level.
    pub m: usize,
    /// Largest cardinality allowed.
    pub k: usize,
    /// `ĝ_n` for `1 <= n < m`.
    pub below: BTreeMap<usize, Vec<FeasibleSet>>,
    /// `Ĝ_m = ĝ_m`.
    pub base: Vec<FeasibleSet>,
    /// `Ĝ_n` for `m < n <= k`.
    pub above: BTreeMap<usize, Vec<FeasibleSet>>,
    /// `G_n` for `m <= n <= k`: the ranked sets the family was cut from.
    pub candidates: BTreeMap<usize, Vec<NodeSet>>,
}

impl FeasibleFamily {
    /// A family given level by level, e.g. for checking hand-made examples.
    /// `levels[n]` holds the feasible `n`-sets; `candidates` plays the role of
    /// the ranked levels `G_n`, `n >= m`.
    pub fn declared(m: usize, levels: BTreeMap<usize, Vec<NodeSet>>, candidates: BTreeMap<usize, Vec<NodeSet>>) -> Self {
        let wrap = |sets: &Vec<NodeSet>| -> Vec<FeasibleSet> {
            let mut v: Vec<FeasibleSet> =
                sets.iter().map(|s| FeasibleSet { set: s.clone(), provenance: Provenance::Declared }).collect();
            v.sort_by(|a, b| a.set.cmp(&b.set));
            v
        };
        let k = levels.keys().copied().max().unwrap_or(m).max(m);
        let mut below = BTreeMap::new();
        let mut above = BTreeMap::new();
        let mut base = Vec::new();
        for (&n, sets) in &levels {
            match n.cmp(&m) {
                std::cmp::Ordering::Less if n > 0 => {
                    below.insert(n, wrap(sets));
                }
                std::cmp::Ordering::Equal => base = wrap(sets),
                std::cmp::Ordering::Greater => {
                    above.insert(n, wrap(sets));
                }
                _ => {}
            }
        }
        FeasibleFamily { construction: Construction::Declared, m, k, below, base, above, candidates }
    }

    /// Feasible sets of cardinality `n`; level 0 is `{∅}`.
    pub fn level(&self, n: usize) -> Vec<&NodeSet> {
        if n == 0 {
            return Vec::new();
        }
        let entries = if n < self.m {
            self.below.get(&n).map(Vec::as_slice)
        } else if n == self.m {
            Some(self.base.as_slice())
        } else {
            self.above.get(&n).map(Vec::as_slice)
        };
        entries.unwrap_or(&[]).iter().map(|e| &e.set).collect()
    }

    fn entries(&self) -> impl Iterator<Item = &FeasibleSet> {
        self.below.values().flatten().chain(self.base.iter()).chain(self.above.values().flatten())
    }

    pub fn provenance(&self, set: &NodeSet) -> Option<&Provenance> {
        self.entries().find(|e| &e.set == set).map(|e| &e.provenance)
    }

    /// All feasible sets including `∅`, in canonical order.
    pub fn sets(&self) -> Vec<NodeSet> {
        let mut all: Vec<NodeSet> = std::iter::once(NodeSet::empty()).chain(self.entries().map(|e| e.set.clone())).collect();
        all.sort();
        all
    }

    pub fn contains(&self, set: &NodeSet) -> bool {
        set.is_empty() || self.level(set.len()).into_iter().any(|s| s == set)
    }

    /// Number of feasible sets including `∅`.
    pub fn len(&self) -> usize {
        1 + self.entries().count()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Largest cardinality with at least one feasible set.
    pub fn max_cardinality(&self) -> usize {
        (0..=self.k).rev().find(|&n| n == 0 || !self.level(n).is_empty()).unwrap_or(0)
    }

    /// Membership index for repeated queries.
    pub fn index(&self) -> HashSet<NodeSet> {
        self.sets().into_iter().collect()
    }
}

/// Result of checking the three greedoid axioms on an explicit family.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    /// `∅` is present.
    pub g1: bool,
    /// Nonempty sets with no feasible one-element deletion.
    pub g2_violations: Vec<NodeSet>,
    /// Pairs `(X, Y)`, `|X| > |Y|`, where no `x ∈ X \ Y` makes `Y ∪ {x}` feasible.
    pub g3_violations: Vec<(NodeSet, NodeSet)>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.g1 && self.g2_violations.is_empty() && self.g3_violations.is_empty()
    }
}

/// Exhaustive check of G1 (contains `∅`), G2 (accessibility) and G3
/// (exchange over every pair of different cardinalities).
pub fn check_axioms(family: &[NodeSet]) -> AxiomReport {
    let index: HashSet<&NodeSet> = family.iter().collect();
    let mut sorted: Vec<&NodeSet> = index.iter().copied().collect();
    sorted.sort();

    let g1 = index.contains(&NodeSet::empty());
    let g2_violations = sorted
        .iter()
        .filter(|a| !a.is_empty())
        .filter(|a| !a.iter().any(|x| index.contains(&a.without(x))))
        .map(|a| (*a).clone())
        .collect();

    let mut g3_violations = Vec::new();
    for x in &sorted {
        for y in sorted.iter().take_while(|y| y.len() < x.len()) {
            let ok = x.iter().filter(|&e| !y.contains(e)).any(|e| index.contains(&y.with(e)));
            if !ok {
                g3_violations.push(((*x).clone(), (*y).clone()));
            }
        }
    }
    AxiomReport { g1, g2_violations, g3_violations }
}

/// Witnesses for the four ladder conditions relating sub-levels, base and
/// upper levels.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LadderReport {
    /// Base sets outside `G_m` (or an empty base, reported as `∅`).
    pub t1: Vec<NodeSet>,
    /// Sets of `ĝ_n` containing no set of `ĝ_{n-1}`.
    pub t2: Vec<NodeSet>,
    /// Pairs `(B, A)`, `B ∈ ĝ_{n-1}`, `A ∈ ĝ_n`, with no `p ∈ A \ B` such
    /// that `B ∪ {p} ∈ ĝ_n`.
    pub t3: Vec<(NodeSet, NodeSet)>,
    /// Sets of `Ĝ_n` that are not extensions of `Ĝ_{n-1}` inside `G_n`.
    pub t4_extra: Vec<NodeSet>,
    /// Extensions of `Ĝ_{n-1}` inside `G_n` missing from `Ĝ_n`.
    pub t4_missing: Vec<NodeSet>,
}

impl LadderReport {
    pub fn passed(&self) -> bool {
        self.t1.is_empty() && self.t2.is_empty() && self.t3.is_empty() && self.t4_extra.is_empty() && self.t4_missing.is_empty()
    }
}

fn extends_some(set: &NodeSet, lower: &HashSet<&NodeSet>) -> Option<NodeSet> {
    set.iter().map(|x| set.without(x)).find(|s| lower.contains(s))
}

pub fn check_ladder(f: &FeasibleFamily) -> LadderReport {
    let mut report = LadderReport::default();
    let candidate_level = |n: usize| -> HashSet<&NodeSet> { f.candidates.get(&n).into_iter().flatten().collect() };

    let g_m = candidate_level(f.m);
    if f.base.is_empty() {
        report.t1.push(NodeSet::empty());
    }
    report.t1.extend(f.level(f.m).into_iter().filter(|s| !g_m.contains(s)).cloned());

    // T2 and T3 on the sub-levels, up to and including the base
    for n in 2..=f.m {
        let upper = f.level(n);
        let lower = f.level(n - 1);
        let upper_set: HashSet<&NodeSet> = upper.iter().copied().collect();
        let lower_set: HashSet<&NodeSet> = lower.iter().copied().collect();
        for a in &upper {
            if extends_some(a, &lower_set).is_none() {
                report.t2.push((*a).clone());
            }
        }
        for b in &lower {
            for a in &upper {
                let ok = a.iter().filter(|&p| !b.contains(p)).any(|p| upper_set.contains(&b.with(p)));
                if !ok {
                    report.t3.push(((*b).clone(), (*a).clone()));
                }
            }
        }
    }

    // T4 above the base
    for n in f.m + 1..=f.k {
        let lower: HashSet<&NodeSet> = f.level(n - 1).into_iter().collect();
        let actual: HashSet<&NodeSet> = f.level(n).into_iter().collect();
        let mut expected: Vec<&NodeSet> =
            candidate_level(n).into_iter().filter(|a| extends_some(a, &lower).is_some()).collect();
        expected.sort();
        let expected_set: HashSet<&NodeSet> = expected.iter().copied().collect();
        let mut extra: Vec<NodeSet> = actual.iter().filter(|a| !expected_set.contains(*a)).map(|a| (*a).clone()).collect();
        extra.sort();
        report.t4_extra.extend(extra);
        report.t4_missing.extend(expected.into_iter().filter(|a| !actual.contains(a)).cloned());
    }
    report
}

fn candidate_levels(ranked: &RankedFamily) -> BTreeMap<usize, Vec<NodeSet>> {
    ranked
        .levels
        .iter()
        .map(|(&n, sets)| (n, sets.iter().map(|r| r.set.clone()).collect()))
        .collect()
}

/// Levels above the base: each member of `G_n` extending a feasible
/// `(n-1)`-set, for `m < n <= K`.
fn ladder_levels(ranked: &RankedFamily, base: &[FeasibleSet]) -> BTreeMap<usize, Vec<FeasibleSet>> {
    let mut above = BTreeMap::new();
    let mut previous: Vec<NodeSet> = base.iter().map(|e| e.set.clone()).collect();
    for n in ranked.m + 1..=ranked.k() {
        let lower: HashSet<&NodeSet> = previous.iter().collect();
        let level: Vec<FeasibleSet> = ranked
            .level(n)
            .iter()
            .filter_map(|r| {
                extends_some(&r.set, &lower)
                    .map(|extends| FeasibleSet { set: r.set.clone(), provenance: Provenance::Ladder { extends } })
            })
            .collect();
        previous = level.iter().map(|e| e.set.clone()).collect();
        above.insert(n, level);
    }
    above
}

fn verify(family: FeasibleFamily) -> Result<FeasibleFamily> {
    let axioms = check_axioms(&family.sets());
    if !axioms.passed() {
        let level = axioms
            .g2_violations
            .first()
            .map(NodeSet::len)
            .or_else(|| axioms.g3_violations.first().map(|(_, y)| y.len() + 1))
            .unwrap_or(0);
        return Err(Error::ConditionsNotMet {
            level,
            reason: format!(
                "axiom check failed ({} G2, {} G3 violations)",
                axioms.g2_violations.len(),
                axioms.g3_violations.len()
            ),
        });
    }
    let ladder = check_ladder(&family);
    if !ladder.passed() {
        return Err(Error::ConditionsNotMet { level: family.m, reason: format!("ladder check failed: {ladder:?}") });
    }
    Ok(family)
}

/// Case I: one base set `H ∈ G_m` (the first in canonical order unless
/// given), all proper subsets of `H` below it and the extension ladder above.
pub fn build_case1(ranked: &RankedFamily, base: Option<&NodeSet>) -> Result<FeasibleFamily> {
    let m = ranked.m;
    let h = match base {
        Some(h) => {
            if h.len() != m || !ranked.contains(h) {
                return Err(Error::NotInFamily(h.clone()));
            }
            h.clone()
        }
        None => ranked.level(m).first().map(|r| r.set.clone()).ok_or(Error::ConditionsNotMet {
            level: m,
            reason: "empty base level".into(),
        })?,
    };
    let below = (1..m)
        .map(|n| {
            let subsets = h.subsets_of_size(n).map(|set| FeasibleSet { set, provenance: Provenance::SubsetOfBase }).collect();
            (n, subsets)
        })
        .collect();
    let base_level = vec![FeasibleSet { set: h.clone(), provenance: Provenance::Base }];
    let above = ladder_levels(ranked, &base_level);
    verify(FeasibleFamily {
        construction: Construction::CaseI { base: h },
        m,
        k: ranked.k(),
        below,
        base: base_level,
        above,
        candidates: candidate_levels(ranked),
    })
}

/// Sub-level candidates `g_n`, `1 <= n <= m`, obtained from `g_m = G_m` by
/// intersecting pairs of equal-size sets that differ in exactly one element.
pub fn intersection_levels(ranked: &RankedFamily) -> BTreeMap<usize, Vec<NodeSet>> {
    let mut levels = BTreeMap::new();
    let top: Vec<NodeSet> = ranked.level(ranked.m).iter().map(|r| r.set.clone()).collect();
    levels.insert(ranked.m, top);
    for n in (1..ranked.m).rev() {
        let upper = &levels[&(n + 1)];
        let mut next: Vec<NodeSet> = Vec::new();
        for (i, e) in upper.iter().enumerate() {
            for f in &upper[i + 1..] {
                if e.intersection_len(f) == n {
                    next.push(e.intersection(f));
                }
            }
        }
        next.sort();
        next.dedup();
        levels.insert(n, next);
    }
    levels
}

/// Partner lists for one set relative to the level above.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartnerCover {
    /// Every `p ∉ B` with `B ∪ {p}` one level up.
    pub partners: Vec<usize>,
    /// Partners chosen smallest id first until their parents cover the level
    /// above; `None` when some upper set contains no partner.
    pub covering: Option<Vec<usize>>,
}

/// `X_{p,k}`: members of `upper` containing `p`.
pub fn parents_containing<'a>(upper: &'a [NodeSet], p: usize) -> Vec<&'a NodeSet> {
    upper.iter().filter(|a| a.contains(p)).collect()
}

/// `Y_{p,k}`: members of `lower` whose extension by `p` lies in `upper`.
pub fn partnered<'a>(lower: &'a [NodeSet], upper: &[NodeSet], p: usize) -> Vec<&'a NodeSet> {
    let upper: HashSet<&NodeSet> = upper.iter().collect();
    lower.iter().filter(|w| !w.contains(p) && upper.contains(&w.with(p))).collect()
}

/// Decides whether `b` has partners whose parent sets cover `upper`, which
/// guarantees a one-element extension of `b` into `upper` towards every set
/// of `upper`.
pub fn partner_cover(b: &NodeSet, upper: &[NodeSet]) -> PartnerCover {
    let upper_set: HashSet<&NodeSet> = upper.iter().collect();
    let n = upper.iter().flat_map(|a| a.max()).max().map_or(0, |x| x + 1);
    let partners: Vec<usize> = (0..n).filter(|&p| !b.contains(p) && upper_set.contains(&b.with(p))).collect();
    let mut covered = vec![false; upper.len()];
    let mut chosen = Vec::new();
    for &p in &partners {
        let mut useful = false;
        for (i, a) in upper.iter().enumerate() {
            if !covered[i] && a.contains(p) {
                covered[i] = true;
                useful = true;
            }
        }
        if useful {
            chosen.push(p);
        }
    }
    let covering = covered.iter().all(|&c| c).then_some(chosen);
    PartnerCover { partners, covering }
}

/// Case II: keep all of `G_m` whenever the intersection sub-levels admit
/// partner covers. Fails with [`Error::ConditionsNotMet`] naming the first
/// level that comes out empty or breaks an axiom.
pub fn build_case2(ranked: &RankedFamily) -> Result<FeasibleFamily> {
    let m = ranked.m;
    let g = intersection_levels(ranked);
    let mut below: BTreeMap<usize, Vec<FeasibleSet>> = BTreeMap::new();
    let mut previous: Vec<NodeSet> = Vec::new();
    for n in 1..m {
        let lower: HashSet<&NodeSet> = previous.iter().collect();
        let upper = &g[&(n + 1)];
        let mut level = Vec::new();
        for b in &g[&n] {
            let extends = if n == 1 {
                None
            } else {
                match extends_some(b, &lower) {
                    Some(c) => Some(c),
                    None => continue,
                }
            };
            if let Some(partners) = partner_cover(b, upper).covering {
                level.push(FeasibleSet { set: b.clone(), provenance: Provenance::PartnerCover { partners, extends } });
            }
        }
        if level.is_empty() {
            return Err(Error::ConditionsNotMet {
                level: n,
                reason: format!("no set among {} intersections of level {} has a partner cover", g[&n].len(), n + 1),
            });
        }
        previous = level.iter().map(|e| e.set.clone()).collect();
        below.insert(n, level);
    }

    let lower: HashSet<&NodeSet> = previous.iter().collect();
    let base: Vec<FeasibleSet> = ranked
        .level(m)
        .iter()
        .filter_map(|r| {
            if m == 1 {
                Some(FeasibleSet { set: r.set.clone(), provenance: Provenance::BaseLevel { extends: None } })
            } else {
                extends_some(&r.set, &lower).map(|c| FeasibleSet {
                    set: r.set.clone(),
                    provenance: Provenance::BaseLevel { extends: Some(c) },
                })
            }
        })
        .collect();
    if base.is_empty() {
        return Err(Error::ConditionsNotMet { level: m, reason: "no base set extends the level below".into() });
    }
    let above = ladder_levels(ranked, &base);
    verify(FeasibleFamily {
        construction: Construction::CaseII,
        m,
        k: ranked.k(),
        below,
        base,
        above,
        candidates: candidate_levels(ranked),
    })
}

/// Case II when its conditions hold, Case I on the first base set otherwise.
pub fn build_auto(ranked: &RankedFamily) -> Result<FeasibleFamily> {
    match build_case2(ranked) {
        Ok(f) => Ok(f),
        Err(Error::ConditionsNotMet { .. }) => build_case1(ranked, None),
        Err(e) => Err(e),
    }
}

/// Walks from `set` down to `∅` by feasible one-element deletions, smallest
/// removed id first. Returns the chain starting at `set`, or `None` when some
/// step has no feasible deletion.
pub fn deletion_chain(index: &HashSet<NodeSet>, set: &NodeSet) -> Option<Vec<NodeSet>> {
    let mut chain = vec![set.clone()];
    let mut current = set.clone();
    while !current.is_empty() {
        let next = current.iter().map(|x| current.without(x)).find(|s| index.contains(s))?;
        current = next;
        chain.push(current.clone());
    }
    Some(chain)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverFeasibility {
    pub cover: NodeSet,
    pub feasible: bool,
    /// `|cover| > m`.
    pub exceeds_base: bool,
    /// Feasible subsets of the cover with cardinality at least `m`
    /// (the cover included), in canonical order. Empty when infeasible.
    pub near_optimal_subsets: Vec<NodeSet>,
    /// Every listed subset belongs to the ranked family.
    pub all_ranked: bool,
}

/// Whether a vertex cover is feasible and, if so, which of its feasible
/// subsets of cardinality `>= m` it carries.
pub fn cover_feasibility(g: &Graph, f: &FeasibleFamily, ranked: &RankedFamily, cover: &NodeSet) -> Result<CoverFeasibility> {
    if !g.is_vertex_cover(cover) {
        return Err(Error::NotVertexCover(cover.clone()));
    }
    let feasible = f.contains(cover);
    let near_optimal_subsets: Vec<NodeSet> = if feasible {
        f.sets().into_iter().filter(|s| s.len() >= f.m && s.is_subset(cover)).collect()
    } else {
        Vec::new()
    };
    let all_ranked = near_optimal_subsets.iter().all(|s| ranked.contains(s));
    Ok(CoverFeasibility {
        cover: cover.clone(),
        feasible,
        exceeds_base: cover.len() > f.m,
        near_optimal_subsets,
        all_ranked,
    })
}
