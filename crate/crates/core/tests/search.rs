use consensus_targets::baselines::{brute_force_optimal, greedy_select};
use consensus_targets::greedoid::{build_auto, build_case2, Construction};
use consensus_targets::greedoid_graph::{FamilyGraph, MoveKind, Navigator};
use consensus_targets::ranking::{build_context_two_opt, enumerate_family};
use consensus_targets::{Graph, NodeSet, SpreadObjective, DEFAULT_BUDGET};

// 7 nodes; greedy from the empty set is suboptimal at M = 3
fn improvable() -> Graph {
    Graph::new(7, [(0, 3), (0, 6), (1, 4), (2, 4), (2, 6), (3, 4), (3, 5), (5, 6)]).unwrap()
}

// Case II is refused here, and the Case I fallback is built on a poor base set
fn fallback_instance() -> Graph {
    Graph::new(7, [(0, 2), (0, 4), (1, 2), (2, 4), (2, 5), (3, 5), (3, 6), (4, 5), (4, 6), (5, 6)]).unwrap()
}

#[test]
fn delete_then_add_reaches_the_optimum() {
    let g = improvable();
    let obj = SpreadObjective::new(&g);
    let ctx = build_context_two_opt(&obj).unwrap();
    let fam = enumerate_family(&obj, &ctx, 0.95, DEFAULT_BUDGET).unwrap();
    let f = build_auto(&fam).unwrap();
    assert_eq!(f.construction, Construction::CaseII);
    assert_eq!(f.m, 3);

    let greedy = greedy_select(&obj, 3, &NodeSet::empty()).unwrap();
    let opt = brute_force_optimal(&obj, 3, DEFAULT_BUDGET).unwrap();
    assert!((greedy.final_value.unwrap() - 7.0).abs() < 1e-9);
    assert!((opt.value - 4.0).abs() < 1e-9);

    let nav = Navigator::new(&f);
    let start = NodeSet::from([0, 4, 5]);
    assert!((obj.value(&start).unwrap() - 5.4).abs() < 1e-9);
    let trace = nav.local_search(&obj, &start, 3).unwrap();
    let kinds: Vec<MoveKind> = trace.moves.iter().map(|m| m.kind).collect();
    assert_eq!(kinds, vec![MoveKind::Delete, MoveKind::Delete, MoveKind::Add, MoveKind::Add]);
    assert_eq!(trace.end(), &NodeSet::from([3, 4, 6]));
    assert!(g.is_vertex_cover(trace.end()));
    let (best, value) = trace.best.clone().unwrap();
    assert_eq!(best, NodeSet::from([3, 4, 6]));
    assert!((value - opt.value).abs() < 1e-9);

    let fg = FamilyGraph::build(&f);
    let visited: Vec<&NodeSet> = trace.visited().collect();
    assert!(visited.windows(2).all(|w| fg.has_edge(w[0], w[1])));

    // starting at the optimum there is nothing to do
    let settled = nav.local_search(&obj, &best, 3).unwrap();
    assert!(settled.moves.is_empty());
}

#[test]
fn stepwise_from_the_base_level_beats_greedy() {
    let g = improvable();
    let obj = SpreadObjective::new(&g);
    let ctx = build_context_two_opt(&obj).unwrap();
    let fam = enumerate_family(&obj, &ctx, 0.95, DEFAULT_BUDGET).unwrap();
    let f = build_auto(&fam).unwrap();
    let nav = Navigator::new(&f);
    let greedy = greedy_select(&obj, 3, &NodeSet::empty()).unwrap().final_value.unwrap();
    let best = f
        .level(f.m)
        .into_iter()
        .filter_map(|b| nav.stepwise_extend(&obj, b, 3).ok())
        .filter_map(|t| t.best.map(|(_, v)| v))
        .fold(f64::INFINITY, f64::min);
    assert!(best < greedy - 1e-9);
}

#[test]
fn stepwise_from_a_poor_fallback_base_can_lose_to_greedy() {
    let g = fallback_instance();
    let obj = SpreadObjective::new(&g);
    let ctx = build_context_two_opt(&obj).unwrap();
    let fam = enumerate_family(&obj, &ctx, 0.95, DEFAULT_BUDGET).unwrap();
    assert!(build_case2(&fam).is_err());
    let f = build_auto(&fam).unwrap();
    assert_eq!(f.construction, Construction::CaseI { base: NodeSet::from([0, 1, 5]) });

    let greedy = greedy_select(&obj, 3, &NodeSet::empty()).unwrap();
    assert_eq!(greedy.final_set, NodeSet::from([2, 4, 5]));
    assert!((greedy.final_value.unwrap() - 5.4).abs() < 1e-9);
    let nav = Navigator::new(&f);
    let trace = nav.stepwise_extend(&obj, &NodeSet::from([0, 1, 5]), 3).unwrap();
    let (_, value) = trace.best.unwrap();
    assert!(value > 8.0);
    // the only feasible 3-set is the base itself
    assert_eq!(f.level(3), vec![&NodeSet::from([0, 1, 5])]);
}

#[test]
fn stepwise_from_empty_takes_the_best_singleton() {
    let g = improvable();
    let obj = SpreadObjective::new(&g);
    let ctx = build_context_two_opt(&obj).unwrap();
    let fam = enumerate_family(&obj, &ctx, 0.95, DEFAULT_BUDGET).unwrap();
    let f = build_auto(&fam).unwrap();
    let nav = Navigator::new(&f);
    let trace = nav.stepwise_extend(&obj, &NodeSet::empty(), 1).unwrap();
    let first = &trace.moves[0];
    let best = f.level(1).into_iter().map(|s| obj.value(s).unwrap()).fold(f64::INFINITY, f64::min);
    assert_eq!(first.kind, MoveKind::Add);
    assert!((first.value.unwrap() - best).abs() < 1e-12);
    let same = nav.stepwise_extend(&obj, &first.set, 1).unwrap();
    assert!(same.moves.is_empty());
}
