use std::collections::BTreeMap;
use std::io::Read;
use std::time::Instant;

use anyhow::{Context, Result};
use consensus_targets::baselines::{
    brute_force_optimal, cover_approximation_ratio, edge_order, greedy_bound_gap, greedy_select, minimum_vertex_cover,
    two_opt_matching_in_order,
};
use consensus_targets::graph::{parse_labeled, LabeledGraph};
use consensus_targets::greedoid::{
    build_auto, build_case1, build_case2, check_axioms, check_ladder, Construction, FeasibleFamily, Provenance,
};
use consensus_targets::greedoid_graph::Navigator;
use consensus_targets::hitting::monte_carlo_objective;
use consensus_targets::ranking::{build_context, enumerate_family, RankContext, RankedFamily};
use consensus_targets::{Error, NodeSet, SpreadObjective};

use crate::args::{BuildArgs, CaseChoice, Common, KChoice, RankArgs};
use crate::report::*;

/// A bad command line or input that the library did not flag itself.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct InputError(pub String);

fn input_error(msg: impl Into<String>) -> anyhow::Error {
    InputError(msg.into()).into()
}

pub struct Session {
    pub labeled: LabeledGraph,
    pub obj: SpreadObjective,
}

impl Session {
    pub fn load(common: &Common) -> Result<Self> {
        let path = &common.graph;
        let text = if path.as_os_str() == "-" {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
            s
        } else {
            std::fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?
        };
        let labeled = parse_labeled(&text)?;
        if labeled.graph.is_bipartite() {
            eprintln!("warning: the graph is bipartite, so the walk is periodic; hitting times are still finite");
        }
        let obj = SpreadObjective::new(&labeled.graph);
        Ok(Session { labeled, obj })
    }

    fn n(&self) -> usize {
        self.labeled.graph.node_count()
    }

    fn labels(&self, set: &NodeSet) -> Labels {
        self.labeled.labels_of(set)
    }

    fn set(&self, labels: &[u64]) -> Result<NodeSet> {
        let set = self.labeled.set_from_labels(labels).map_err(|l| input_error(format!("unknown node {l}")))?;
        if set.len() != labels.len() {
            return Err(input_error(format!("repeated node in {}", fmt_set(labels))));
        }
        Ok(set)
    }

    fn check_m(&self, m: usize, max: usize) -> Result<()> {
        if m < 1 || m > max {
            return Err(input_error(format!("M must lie in 1..={max}, got {m}")));
        }
        Ok(())
    }

    pub fn solve(&self, m: usize, budget: u64) -> Result<SolveResult> {
        self.check_m(m, self.n())?;
        let start = Instant::now();
        let opt = brute_force_optimal(&self.obj, m, budget).map_err(|e| match e {
            Error::BudgetExceeded { .. } => anyhow::Error::from(e).context("try the greedy or greedoid commands instead"),
            e => e.into(),
        })?;
        Ok(SolveResult {
            m,
            value: opt.value,
            argmin: opt.argmin.iter().map(|s| self.labels(s)).collect(),
            evaluated: opt.evaluated,
            wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
        })
    }

    pub fn greedy(&self, m: usize, anchor: Option<u64>, budget: u64) -> Result<GreedyResult> {
        self.check_m(m, self.n())?;
        let start = match anchor {
            Some(a) => self.set(&[a])?,
            None => NodeSet::empty(),
        };
        let trace = greedy_select(&self.obj, m, &start)?;
        let mut notices = Vec::new();
        let optimum = match brute_force_optimal(&self.obj, m, budget) {
            Ok(o) => Some(o.value),
            Err(Error::BudgetExceeded { .. }) => {
                notices.push("optimum skipped: budget exceeded");
                None
            }
            Err(e) => return Err(e.into()),
        };
        let anchors: Vec<usize> = match anchor {
            Some(_) => start.iter().collect(),
            None => (0..self.n()).collect(),
        };
        let mut bound = Some(Vec::new());
        for a in anchors {
            match greedy_bound_gap(&self.obj, a, m, budget) {
                Ok(g) => bound.as_mut().expect("set above").push(GapRow {
                    anchor: self.labeled.label(a),
                    lhs: g.lhs,
                    rhs: g.rhs,
                    holds: g.holds,
                    greedy_set: self.labels(&g.greedy_set),
                    anchored_optimum: g.anchored_optimum,
                }),
                Err(Error::BudgetExceeded { .. }) => {
                    notices.push("guarantee check skipped: budget exceeded");
                    bound = None;
                    break;
                }
                Err(e) => return Err(e.into()),
            }
        }
        Ok(GreedyResult {
            m,
            start: self.labels(&start),
            steps: trace
                .steps
                .iter()
                .map(|s| GreedyStepRow { added: self.labeled.label(s.added), set: self.labels(&s.set), value: s.value })
                .collect(),
            final_set: self.labels(&trace.final_set),
            final_value: trace.final_value,
            optimum,
            bound,
            notice: (!notices.is_empty()).then(|| notices.join("; ")),
        })
    }

    pub fn cover(&self, seed: u64, budget: u64) -> Result<CoverResult> {
        let g = &self.labeled.graph;
        let matching = two_opt_matching_in_order(g, &edge_order(g, seed));
        let value = self.obj.value(&matching.vertices)?;
        let k = matching.vertices.len();
        let floor = (self.n() - k) as f64;
        let (opt, within, notice) = match minimum_vertex_cover(g, budget) {
            Ok(_) => {
                let ratio = cover_approximation_ratio(g, &matching, budget)?;
                (Some(ratio.opt), Some(ratio.within_factor_two()), None)
            }
            Err(Error::BudgetExceeded { .. }) => (None, None, Some("OPT skipped: budget exceeded".to_string())),
            Err(e) => return Err(e.into()),
        };
        Ok(CoverResult {
            seed,
            matching: matching.edges.iter().map(|&(u, v)| (self.labeled.label(u), self.labeled.label(v))).collect(),
            cover: self.labels(&matching.vertices),
            k,
            value,
            floor,
            floor_holds: (value - floor).abs() <= 1e-9 * floor.max(1.0),
            maximal: matching.is_maximal_in(g),
            opt,
            within_factor_two: within,
            notice,
        })
    }

    pub fn context(&self, rank: &RankArgs) -> Result<RankContext> {
        let g = &self.labeled.graph;
        let cover = match (rank.k, &rank.cover) {
            (KChoice::Auto, None) => two_opt_matching_in_order(g, &edge_order(g, rank.seed)).vertices,
            (KChoice::Auto, Some(_)) => return Err(input_error("--cover needs an explicit --k")),
            (KChoice::Fixed(_), None) => return Err(input_error("--k <n> needs --cover")),
            (KChoice::Fixed(k), Some(labels)) => {
                let cover = self.set(labels)?;
                if cover.len() != k {
                    return Err(input_error(format!("--k {k} but the cover has {} nodes", cover.len())));
                }
                cover
            }
        };
        Ok(build_context(&self.obj, &cover)?)
    }

    pub fn ranked(&self, rank: &RankArgs, budget: u64) -> Result<(RankContext, RankedFamily)> {
        let ctx = self.context(rank)?;
        let fam = enumerate_family(&self.obj, &ctx, rank.c, budget)?;
        Ok((ctx, fam))
    }

    pub fn family(&self, rank: &RankArgs, budget: u64, limit: usize) -> Result<FamilyResult> {
        let (ctx, fam) = self.ranked(rank, budget)?;
        let sets: Vec<RankedRow> = fam
            .iter()
            .take(limit)
            .map(|r| RankedRow { set: self.labels(&r.set), value: r.value, rho: r.rho })
            .collect();
        Ok(FamilyResult {
            k: ctx.k,
            cover: self.labels(&ctx.cover),
            f_max: ctx.f_max,
            f_min: ctx.f_min,
            c: fam.c,
            c_bar: ctx.value_threshold(fam.c),
            m: fam.m,
            counts: fam.levels.iter().map(|(&n, l)| (n, l.len())).collect(),
            truncated: sets.len() < fam.len(),
            sets,
        })
    }

    pub fn build(&self, fam: &RankedFamily, build: &BuildArgs) -> Result<FeasibleFamily> {
        let base = build.base.as_deref().map(|b| self.set(b)).transpose()?;
        let f = match (build.case, base) {
            (CaseChoice::Case1, base) => build_case1(fam, base.as_ref())?,
            (_, Some(_)) => return Err(input_error("--base applies to --case case1 only")),
            (CaseChoice::Case2, None) => build_case2(fam)?,
            (CaseChoice::Auto, None) => build_auto(fam)?,
        };
        Ok(f)
    }

    fn construction_name(&self, f: &FeasibleFamily) -> (String, Option<Labels>) {
        match &f.construction {
            Construction::CaseI { base } => ("Case I".into(), Some(self.labels(base))),
            Construction::CaseII => ("Case II".into(), None),
            Construction::Declared => ("declared".into(), None),
        }
    }

    pub fn greedoid(&self, rank: &RankArgs, build: &BuildArgs, budget: u64) -> Result<GreedoidResult> {
        let (_, fam) = self.ranked(rank, budget)?;
        let f = self.build(&fam, build)?;
        let (construction, base) = self.construction_name(&f);
        let all = f.sets();
        let sets = all
            .iter()
            .filter(|s| !s.is_empty())
            .map(|s| {
                let (rule, partners, extends) = match f.provenance(s) {
                    Some(Provenance::SubsetOfBase) => ("subset_of_base", None, None),
                    Some(Provenance::Base) => ("base", None, None),
                    Some(Provenance::PartnerCover { partners, extends }) => {
                        ("partner_cover", Some(self.labeled.labels_of(&NodeSet::from(partners.clone()))), extends.as_ref())
                    }
                    Some(Provenance::BaseLevel { extends }) => ("base_level", None, extends.as_ref()),
                    Some(Provenance::Ladder { extends }) => ("ladder", None, Some(extends)),
                    Some(Provenance::Declared) | None => ("declared", None, None),
                };
                FeasibleRow { set: self.labels(s), rule: rule.into(), partners, extends: extends.map(|e| self.labels(e)) }
            })
            .collect();
        let axioms = check_axioms(&all);
        let ladder = check_ladder(&f);
        let pairs = |v: &[(NodeSet, NodeSet)]| v.iter().map(|(a, b)| (self.labels(a), self.labels(b))).collect();
        let singles = |v: &[NodeSet]| v.iter().map(|a| self.labels(a)).collect();
        let verification = Verification {
            g1: axioms.g1,
            g2_violations: singles(&axioms.g2_violations),
            g3_violations: pairs(&axioms.g3_violations),
            t1: singles(&ladder.t1),
            t2: singles(&ladder.t2),
            t3: pairs(&ladder.t3),
            t4_extra: singles(&ladder.t4_extra),
            t4_missing: singles(&ladder.t4_missing),
            passed: axioms.passed() && ladder.passed(),
        };
        Ok(GreedoidResult {
            construction,
            base,
            m: f.m,
            k: f.k,
            counts: all.iter().fold(BTreeMap::new(), |mut acc, s| {
                *acc.entry(s.len()).or_insert(0) += 1;
                acc
            }),
            sets,
            verification,
        })
    }

    pub fn search(
        &self,
        rank: &RankArgs,
        build: &BuildArgs,
        m: usize,
        start: Option<&[u64]>,
        table: bool,
        budget: u64,
    ) -> Result<SearchResult> {
        let (ctx, fam) = self.ranked(rank, budget)?;
        let f = self.build(&fam, build)?;
        self.check_m(m, f.max_cardinality())?;
        let nav = Navigator::new(&f);
        let start = match start {
            Some(labels) => self.set(labels)?,
            None => NodeSet::empty(),
        };
        if !nav.is_feasible(&start) {
            return Err(input_error(format!("start set {} is not feasible", fmt_set(&self.labels(&start)))));
        }
        let (construction, _) = self.construction_name(&f);

        let mut notice = None;
        let optimum = match brute_force_optimal(&self.obj, m, budget) {
            Ok(o) => Some(o.value),
            Err(Error::BudgetExceeded { .. }) => {
                notice = Some("optimality not checked: budget exceeded".to_string());
                None
            }
            Err(e) => return Err(e.into()),
        };

        let extension_table = table.then(|| {
            f.level(f.m)
                .into_iter()
                .map(|b| {
                    let mut row = ExtensionRow {
                        base: self.labels(b),
                        in_cover: b.is_subset(&ctx.cover),
                        steps: vec![(self.labels(b), self.obj.value(b).expect("base sets are nonempty"))],
                        dead_end: false,
                    };
                    let mut current = b.clone();
                    while current.len() < m {
                        match nav.stepwise_extend(&self.obj, &current, current.len() + 1) {
                            Ok(t) => {
                                let (s, v) = t.best.expect("one step lands on a nonempty set");
                                row.steps.push((self.labels(&s), v));
                                current = s;
                            }
                            Err(_) => {
                                row.dead_end = true;
                                break;
                            }
                        }
                    }
                    row
                })
                .collect()
        });

        let result = match nav.local_search(&self.obj, &start, m) {
            Ok(trace) => {
                let best = trace.best.clone().map(|(s, v)| (self.labels(&s), v));
                let confirmed = match (&trace.best, optimum) {
                    (Some((_, v)), Some(opt)) => (v - opt).abs() <= 1e-9 * opt.abs().max(1.0),
                    _ => false,
                };
                SearchResult {
                    construction,
                    family_m: f.m,
                    m,
                    start: self.labels(&start),
                    moves: trace
                        .moves
                        .iter()
                        .map(|mv| MoveRow { kind: format!("{:?}", mv.kind).to_lowercase(), set: self.labels(&mv.set), value: mv.value })
                        .collect(),
                    end: self.labels(trace.end()),
                    best,
                    optimum,
                    outcome: if confirmed { Outcome::Optimal } else { Outcome::LocalOptimum },
                    notice,
                    table: extension_table,
                }
            }
            Err(Error::DeadEnd(stuck)) => SearchResult {
                construction,
                family_m: f.m,
                m,
                start: self.labels(&start),
                moves: Vec::new(),
                end: self.labels(&stuck),
                best: None,
                optimum,
                outcome: Outcome::DeadEnd,
                notice: Some(format!("no feasible move towards M from {}", fmt_set(&self.labels(&stuck)))),
                table: extension_table,
            },
            Err(e) => return Err(e.into()),
        };
        Ok(result)
    }

    pub fn eval(&self, labels: &[u64], walks: u64, seed: u64) -> Result<EvalResult> {
        let set = self.set(labels)?;
        let profile = self.obj.profile(&set)?;
        let monte_carlo = if walks > 0 {
            let mc = monte_carlo_objective(self.obj.chain(), &set, walks, seed)?;
            Some(MonteCarloRow { estimate: mc.estimate, std_error: mc.std_error, walks_per_node: walks, seed })
        } else {
            None
        };
        Ok(EvalResult {
            set: self.labels(&set),
            value: profile.objective,
            times: profile.times.iter().map(|&(i, h)| (self.labeled.label(i), h)).collect(),
            vertex_cover: self.labeled.graph.is_vertex_cover(&set),
            monte_carlo,
        })
    }
}
