//! The graph on feasible sets and the local searches that walk it.
//!
//! Two feasible sets are adjacent when one is the other plus one element, or
//! when they have equal size and differ in exactly one element (a swap).

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::greedoid::FeasibleFamily;
use crate::hitting::SpreadObjective;
use crate::nodeset::NodeSet;
use crate::{cmp_objective, strictly_less};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveKind {
    Add,
    Delete,
    Swap,
}

/// Adjacency between two sets, if any.
pub fn adjacency(a: &NodeSet, b: &NodeSet) -> Option<MoveKind> {
    let common = a.intersection_len(b);
    match (a.len(), b.len()) {
        (x, y) if y == x + 1 && common == x => Some(MoveKind::Add),
        (x, y) if x == y + 1 && common == y => Some(MoveKind::Delete),
        (x, y) if x == y && x > 0 && common == x - 1 => Some(MoveKind::Swap),
        _ => None,
    }
}

/// All feasible sets with their adjacency.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyGraph {
    pub nodes: Vec<NodeSet>,
    /// Index pairs `(i, j)`, `i < j`, into `nodes`.
    pub edges: Vec<(usize, usize)>,
}

impl FamilyGraph {
    pub fn build(f: &FeasibleFamily) -> Self {
        let nodes = f.sets();
        let mut edges = Vec::new();
        for i in 0..nodes.len() {
            for j in i + 1..nodes.len() {
                if adjacency(&nodes[i], &nodes[j]).is_some() {
                    edges.push((i, j));
                }
            }
        }
        FamilyGraph { nodes, edges }
    }

    pub fn position(&self, set: &NodeSet) -> Option<usize> {
        self.nodes.binary_search(set).ok()
    }

    pub fn has_edge(&self, a: &NodeSet, b: &NodeSet) -> bool {
        match (self.position(a), self.position(b)) {
            (Some(i), Some(j)) => {
                let key = (i.min(j), i.max(j));
                self.edges.binary_search(&key).is_ok()
            }
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Move {
    pub kind: MoveKind,
    pub set: NodeSet,
    /// `F(set)`; absent for the empty set.
    pub value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchTrace {
    pub start: NodeSet,
    pub target_cardinality: usize,
    pub moves: Vec<Move>,
    /// Smallest-`F` set of the target cardinality seen along the trace.
    pub best: Option<(NodeSet, f64)>,
}

impl SearchTrace {
    /// The set the trace ends on.
    pub fn end(&self) -> &NodeSet {
        self.moves.last().map_or(&self.start, |m| &m.set)
    }

    /// Every visited set, starting with `start`.
    pub fn visited(&self) -> impl Iterator<Item = &NodeSet> {
        std::iter::once(&self.start).chain(self.moves.iter().map(|m| &m.set))
    }
}

/// Navigation over a feasible family: neighbor enumeration plus the
/// searches. Holds a membership index so repeated queries stay cheap.
#[derive(Debug)]
pub struct Navigator<'a> {
    family: &'a FeasibleFamily,
    index: HashSet<NodeSet>,
    ground: Vec<usize>,
}

impl<'a> Navigator<'a> {
    pub fn new(family: &'a FeasibleFamily) -> Self {
        let index = family.index();
        let ground = index.iter().fold(NodeSet::empty(), |acc, s| acc.union(s)).iter().collect();
        Navigator { family, index, ground }
    }

    pub fn family(&self) -> &FeasibleFamily {
        self.family
    }

    pub fn is_feasible(&self, set: &NodeSet) -> bool {
        self.index.contains(set)
    }

    fn require_feasible(&self, set: &NodeSet) -> Result<()> {
        if self.is_feasible(set) {
            Ok(())
        } else {
            Err(Error::Infeasible(set.clone()))
        }
    }

    fn adds(&self, a: &NodeSet) -> Vec<NodeSet> {
        self.ground.iter().filter(|&&r| !a.contains(r)).map(|&r| a.with(r)).filter(|s| self.is_feasible(s)).collect()
    }

    fn deletes(&self, a: &NodeSet) -> Vec<NodeSet> {
        a.iter().map(|x| a.without(x)).filter(|s| self.is_feasible(s)).collect()
    }

    fn swaps(&self, a: &NodeSet) -> Vec<NodeSet> {
        let mut out: Vec<NodeSet> = a
            .iter()
            .flat_map(|x| {
                let d = a.without(x);
                self.ground.iter().filter(move |&&y| y != x && !a.contains(y)).map(move |&y| d.with(y))
            })
            .filter(|s| self.is_feasible(s))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Every feasible set adjacent to `a`, in canonical order.
    pub fn neighbors(&self, a: &NodeSet) -> Result<Vec<(MoveKind, NodeSet)>> {
        self.require_feasible(a)?;
        let mut out: Vec<(MoveKind, NodeSet)> = self
            .deletes(a)
            .into_iter()
            .map(|s| (MoveKind::Delete, s))
            .chain(self.swaps(a).into_iter().map(|s| (MoveKind::Swap, s)))
            .chain(self.adds(a).into_iter().map(|s| (MoveKind::Add, s)))
            .collect();
        out.sort_by(|x, y| x.1.cmp(&y.1));
        Ok(out)
    }

    /// Lowest-`F` member of `options` (canonical order breaks ties).
    fn best_of(obj: &SpreadObjective, options: Vec<NodeSet>) -> Option<(NodeSet, f64)> {
        let mut best: Option<(NodeSet, f64)> = None;
        for s in options {
            let f = obj.eval(&s);
            let better = match &best {
                None => true,
                Some((bs, bf)) => cmp_objective(f, *bf).then_with(|| s.cmp(bs)).is_lt(),
            };
            if better {
                best = Some((s, f));
            }
        }
        best
    }

    fn value_of(obj: &SpreadObjective, set: &NodeSet) -> Option<f64> {
        (!set.is_empty()).then(|| obj.eval(set))
    }

    fn check_target(&self, target: usize) -> Result<()> {
        let max = self.family.max_cardinality();
        if target < 1 || target > max {
            return Err(Error::Cardinality { requested: target, min: 1, max });
        }
        Ok(())
    }

    /// Greedy restricted to the greedoid: repeatedly take the feasible add
    /// move with the smallest `F` until `target` is reached.
    pub fn stepwise_extend(&self, obj: &SpreadObjective, base: &NodeSet, target: usize) -> Result<SearchTrace> {
        self.require_feasible(base)?;
        if base.len() > target {
            return Err(Error::Cardinality { requested: target, min: base.len(), max: self.family.k });
        }
        let mut moves = Vec::new();
        let mut current = base.clone();
        while current.len() < target {
            let (next, f) = Self::best_of(obj, self.adds(&current)).ok_or_else(|| Error::DeadEnd(current.clone()))?;
            moves.push(Move { kind: MoveKind::Add, set: next.clone(), value: Some(f) });
            current = next;
        }
        let best = Self::value_of(obj, &current).map(|f| (current.clone(), f));
        Ok(SearchTrace { start: base.clone(), target_cardinality: target, moves, best })
    }

    /// Feasible subsets of `a` reachable by `depth` feasible deletions, each
    /// with the deletion path that reaches it (first found in canonical
    /// order).
    fn deletion_layers(&self, a: &NodeSet) -> Vec<Vec<(NodeSet, Vec<NodeSet>)>> {
        let mut layers = vec![vec![(a.clone(), Vec::new())]];
        loop {
            let mut next: Vec<(NodeSet, Vec<NodeSet>)> = Vec::new();
            let mut seen: HashMap<NodeSet, ()> = HashMap::new();
            for (s, path) in layers.last().expect("nonempty") {
                for d in self.deletes(s) {
                    if seen.insert(d.clone(), ()).is_none() {
                        let mut p = path.clone();
                        p.push(d.clone());
                        next.push((d, p));
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            next.sort_by(|x, y| x.0.cmp(&y.0));
            layers.push(next);
        }
        layers
    }

    /// Steepest descent on `F` over feasible sets, aimed at cardinality
    /// `target`.
    ///
    /// The start is first brought to the target size by best-`F` deletions or
    /// additions. Then, at the target size, the best strictly improving swap
    /// is taken; when there is none, the search backs off by one, two, …
    /// feasible deletions and re-extends greedily, accepting the first depth
    /// whose best re-extension strictly improves `F`. It stops when no depth
    /// improves.
    pub fn local_search(&self, obj: &SpreadObjective, start: &NodeSet, target: usize) -> Result<SearchTrace> {
        self.require_feasible(start)?;
        self.check_target(target)?;
        let mut moves: Vec<Move> = Vec::new();
        let mut current = start.clone();

        while current.len() > target {
            let (next, f) = Self::best_of(obj, self.deletes(&current)).ok_or_else(|| Error::DeadEnd(current.clone()))?;
            moves.push(Move { kind: MoveKind::Delete, set: next.clone(), value: Some(f) });
            current = next;
        }
        while current.len() < target {
            let (next, f) = Self::best_of(obj, self.adds(&current)).ok_or_else(|| Error::DeadEnd(current.clone()))?;
            moves.push(Move { kind: MoveKind::Add, set: next.clone(), value: Some(f) });
            current = next;
        }

        let mut current_f = obj.eval(&current);
        'improve: loop {
            if let Some((next, f)) = Self::best_of(obj, self.swaps(&current)) {
                if strictly_less(f, current_f) {
                    moves.push(Move { kind: MoveKind::Swap, set: next.clone(), value: Some(f) });
                    current = next;
                    current_f = f;
                    continue;
                }
            }
            for layer in self.deletion_layers(&current).into_iter().skip(1) {
                let mut best: Option<(f64, NodeSet, Vec<NodeSet>, SearchTrace)> = None;
                for (subset, path) in layer {
                    let Ok(ext) = self.stepwise_extend(obj, &subset, target) else { continue };
                    let Some((end, f)) = ext.best.clone() else { continue };
                    let better = match &best {
                        None => true,
                        Some((bf, bend, _, _)) => cmp_objective(f, *bf).then_with(|| end.cmp(bend)).is_lt(),
                    };
                    if better {
                        best = Some((f, end, path, ext));
                    }
                }
                if let Some((f, end, path, ext)) = best {
                    if strictly_less(f, current_f) {
                        for d in path {
                            let value = Self::value_of(obj, &d);
                            moves.push(Move { kind: MoveKind::Delete, set: d, value });
                        }
                        moves.extend(ext.moves);
                        current = end;
                        current_f = f;
                        continue 'improve;
                    }
                }
            }
            break;
        }

        let trace = SearchTrace { start: start.clone(), target_cardinality: target, moves, best: None };
        let best = trace
            .visited()
            .filter(|s| s.len() == target)
            .map(|s| (s.clone(), obj.eval(s)))
            .min_by(|a, b| cmp_objective(a.1, b.1).then_with(|| a.0.cmp(&b.0)));
        Ok(SearchTrace { best, ..trace })
    }
}

/// Feasible neighbors of `a` in `f`.
pub fn neighbors(f: &FeasibleFamily, a: &NodeSet) -> Result<Vec<(MoveKind, NodeSet)>> {
    Navigator::new(f).neighbors(a)
}

pub fn local_search(f: &FeasibleFamily, obj: &SpreadObjective, start: &NodeSet, target: usize) -> Result<SearchTrace> {
    Navigator::new(f).local_search(obj, start, target)
}

pub fn stepwise_extend(f: &FeasibleFamily, obj: &SpreadObjective, base: &NodeSet, target: usize) -> Result<SearchTrace> {
    Navigator::new(f).stepwise_extend(obj, base, target)
}

/// Swap pairs `(A, B)` above the base cardinality that do not factor through
/// a feasible `D = A \ {a}` with `B = D ∪ {b}`.
pub fn swap_decomposition_violations(f: &FeasibleFamily) -> Vec<(NodeSet, NodeSet)> {
    let index = f.index();
    let sets = f.sets();
    let mut violations = Vec::new();
    for a in sets.iter().filter(|s| s.len() > f.m) {
        for b in sets.iter().filter(|s| s.len() == a.len() && *s != a) {
            if adjacency(a, b) != Some(MoveKind::Swap) {
                continue;
            }
            let d = a.intersection(b);
            if !index.contains(&d) {
                violations.push((a.clone(), b.clone()));
            }
        }
    }
    violations
}

/// Pairs `(A, C)` of distinct feasible sets of equal cardinality above the
/// base level for which no feasible `D = A \ {a}` extends to a feasible
/// `D ∪ {d}` with `d ∈ C \ A`.
pub fn swap_exchange_violations(f: &FeasibleFamily) -> Vec<(NodeSet, NodeSet)> {
    let index = f.index();
    let sets = f.sets();
    let mut violations = Vec::new();
    for a in sets.iter().filter(|s| s.len() > f.m) {
        for c in sets.iter().filter(|s| s.len() == a.len() && *s != a) {
            let fresh = c.difference(a);
            let ok = a
                .iter()
                .map(|x| a.without(x))
                .filter(|d| index.contains(d))
                .any(|d| fresh.iter().any(|y| index.contains(&d.with(y))));
            if !ok {
                violations.push((a.clone(), c.clone()));
            }
        }
    }
    violations
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::path;
    use crate::greedoid::{build_case1, build_case2};
    use crate::ranking::{build_context, enumerate_family};
    use crate::DEFAULT_BUDGET;

    fn path_family(c: f64) -> (SpreadObjective, FeasibleFamily) {
        let obj = SpreadObjective::new(&path(3));
        let ctx = build_context(&obj, &NodeSet::from([0, 1])).unwrap();
        let fam = enumerate_family(&obj, &ctx, c, DEFAULT_BUDGET).unwrap();
        (obj, build_case1(&fam, None).unwrap())
    }

    #[test]
    fn adjacency_kinds() {
        let s = |v: &[usize]| NodeSet::from(v.to_vec());
        assert_eq!(adjacency(&s(&[0]), &s(&[0, 1])), Some(MoveKind::Add));
        assert_eq!(adjacency(&s(&[0, 1]), &s(&[1])), Some(MoveKind::Delete));
        assert_eq!(adjacency(&s(&[0, 1]), &s(&[1, 2])), Some(MoveKind::Swap));
        assert_eq!(adjacency(&s(&[0, 1]), &s(&[2, 3])), None);
        assert_eq!(adjacency(&s(&[0]), &s(&[0])), None);
        assert_eq!(adjacency(&NodeSet::empty(), &s(&[3])), Some(MoveKind::Add));
    }

    #[test]
    fn neighbors_on_path_case1() {
        let (_, f) = path_family(1.0);
        let nav = Navigator::new(&f);
        let n = nav.neighbors(&NodeSet::from([0])).unwrap();
        assert!(n.contains(&(MoveKind::Delete, NodeSet::empty())));
        assert!(n.contains(&(MoveKind::Add, NodeSet::from([0, 1]))));
        assert!(n.contains(&(MoveKind::Swap, NodeSet::from([1]))));

        let from_empty = nav.neighbors(&NodeSet::empty()).unwrap();
        assert_eq!(from_empty, vec![(MoveKind::Add, NodeSet::from([0])), (MoveKind::Add, NodeSet::from([1]))]);

        let top = nav.neighbors(&NodeSet::from([0, 1])).unwrap();
        assert!(top.iter().all(|(k, _)| *k != MoveKind::Add));

        assert!(matches!(nav.neighbors(&NodeSet::from([2])), Err(Error::Infeasible(_))));
    }

    #[test]
    fn family_graph_edges_match_neighbors() {
        let (_, f) = path_family(1.0);
        let fg = FamilyGraph::build(&f);
        let nav = Navigator::new(&f);
        for a in &fg.nodes {
            for (_, b) in nav.neighbors(a).unwrap() {
                assert!(fg.has_edge(a, &b));
            }
        }
    }

    #[test]
    fn already_optimal_start_does_not_move() {
        let (obj, f) = path_family(1.0);
        let trace = local_search(&f, &obj, &NodeSet::from([0, 1]), 2).unwrap();
        assert!(trace.moves.is_empty());
        assert_eq!(trace.best.unwrap().0, NodeSet::from([0, 1]));
    }

    #[test]
    fn local_search_on_path_reaches_a_cover_pair() {
        let obj = SpreadObjective::new(&path(3));
        let ctx = build_context(&obj, &NodeSet::from([0, 1])).unwrap();
        let fam = enumerate_family(&obj, &ctx, 1.0, DEFAULT_BUDGET).unwrap();
        let f = build_case2(&fam).unwrap();
        let trace = local_search(&f, &obj, &NodeSet::from([0, 2]), 2).unwrap();
        let (_, value) = trace.best.unwrap();
        assert!((value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn local_search_climbs_to_target() {
        let (obj, f) = path_family(1.0);
        let trace = local_search(&f, &obj, &NodeSet::empty(), 2).unwrap();
        assert_eq!(trace.end().len(), 2);
        assert!(trace.moves.iter().take(2).all(|m| m.kind == MoveKind::Add));
    }

    #[test]
    fn stepwise_examples() {
        let (obj, f) = path_family(5.0 / 6.0);
        let t = stepwise_extend(&f, &obj, &NodeSet::empty(), 1).unwrap();
        assert_eq!(t.end(), &NodeSet::from([1]));
        let t = stepwise_extend(&f, &obj, &NodeSet::from([1]), 1).unwrap();
        assert!(t.moves.is_empty());
        let t = stepwise_extend(&f, &obj, &NodeSet::from([1]), 2).unwrap();
        assert_eq!(t.end(), &NodeSet::from([0, 1]));
        assert!(matches!(stepwise_extend(&f, &obj, &NodeSet::from([0, 1]), 3), Err(Error::DeadEnd(_))));
    }
}
