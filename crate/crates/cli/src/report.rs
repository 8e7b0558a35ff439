use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::args::RunConfig;

pub const SCHEMA: u32 = 1;

/// Sets in reports use the ids of the input file.
pub type Labels = Vec<u64>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report<T> {
    pub schema: u32,
    pub config: RunConfig,
    pub result: T,
}

impl<T> Report<T> {
    pub fn new(config: RunConfig, result: T) -> Self {
        Report { schema: SCHEMA, config, result }
    }
}

/// Tabular views of a result.
pub trait Render {
    fn csv_header(&self) -> Vec<&'static str>;
    fn csv_rows(&self) -> Vec<Vec<String>>;
    fn table(&self) -> String;
}

/// `{1,2,3}`.
pub fn fmt_set(set: &[u64]) -> String {
    let inner: Vec<String> = set.iter().map(u64::to_string).collect();
    format!("{{{}}}", inner.join(","))
}

/// Six significant digits, trailing zeros trimmed.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-5..15).contains(&magnitude) {
        return format!("{x:.5e}");
    }
    let decimals = (5 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn opt_sig6(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), sig6)
}

/// Left-aligned columns separated by two spaces.
fn columns(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            if i < widths.len() {
                widths[i] = widths[i].max(cell.chars().count());
            } else {
                widths.push(cell.chars().count());
            }
        }
    }
    let mut out = String::new();
    let mut line = |cells: Vec<&str>| {
        let padded: Vec<String> =
            cells.iter().enumerate().map(|(i, c)| format!("{c:<w$}", w = widths[i])).collect();
        let _ = writeln!(out, "{}", padded.join("  ").trim_end());
    };
    line(header.to_vec());
    for row in rows {
        line(row.iter().map(String::as_str).collect());
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub m: usize,
    pub value: f64,
    pub argmin: Vec<Labels>,
    pub evaluated: u64,
    pub wall_time_ms: f64,
}

impl Render for SolveResult {
    fn csv_header(&self) -> Vec<&'static str> {
        vec!["m", "set", "value"]
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        self.argmin.iter().map(|s| vec![self.m.to_string(), fmt_set(s), self.value.to_string()]).collect()
    }

    fn table(&self) -> String {
        let mut out = format!(
            "optimum for M = {}: F = {} ({} sets evaluated in {:.3} ms)\n",
            self.m,
            sig6(self.value),
            self.evaluated,
            self.wall_time_ms
        );
        let rows: Vec<Vec<String>> = self.argmin.iter().map(|s| vec![fmt_set(s), sig6(self.value)]).collect();
        out.push_str(&columns(&["argmin", "F"], &rows));
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GreedyStepRow {
    pub added: u64,
    pub set: Labels,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapRow {
    pub anchor: u64,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    pub greedy_set: Labels,
    pub anchored_optimum: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GreedyResult {
    pub m: usize,
    pub start: Labels,
    pub steps: Vec<GreedyStepRow>,
    pub final_set: Labels,
    pub final_value: Option<f64>,
    /// Exhaustive optimum at cardinality `m`, when affordable.
    pub optimum: Option<f64>,
    /// Anchored guarantee per start node, when affordable.
    pub bound: Option<Vec<GapRow>>,
    pub notice: Option<String>,
}

impl Render for GreedyResult {
    fn csv_header(&self) -> Vec<&'static str> {
        vec!["step", "added", "set", "value"]
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        self.steps
            .iter()
            .enumerate()
            .map(|(i, s)| vec![(i + 1).to_string(), s.added.to_string(), fmt_set(&s.set), s.value.to_string()])
            .collect()
    }

    fn table(&self) -> String {
        let rows: Vec<Vec<String>> = self
            .steps
            .iter()
            .enumerate()
            .map(|(i, s)| vec![(i + 1).to_string(), s.added.to_string(), fmt_set(&s.set), sig6(s.value)])
            .collect();
        let mut out = columns(&["step", "added", "set", "F"], &rows);
        let _ = writeln!(out, "greedy F = {}, optimum F = {}", opt_sig6(self.final_value), opt_sig6(self.optimum));
        if let Some(bound) = &self.bound {
            let rows: Vec<Vec<String>> = bound
                .iter()
                .map(|g| {
                    vec![g.anchor.to_string(), sig6(g.lhs), sig6(g.rhs), if g.holds { "yes" } else { "NO" }.to_string()]
                })
                .collect();
            out.push_str(&columns(&["anchor", "lhs", "rhs", "holds"], &rows));
        }
        if let Some(n) = &self.notice {
            let _ = writeln!(out, "note: {n}");
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverResult {
    pub seed: u64,
    pub matching: Vec<(u64, u64)>,
    pub cover: Labels,
    pub k: usize,
    pub value: f64,
    /// `N - K`.
    pub floor: f64,
    pub floor_holds: bool,
    pub maximal: bool,
    /// Minimum vertex cover size, when affordable.
    pub opt: Option<usize>,
    pub within_factor_two: Option<bool>,
    pub notice: Option<String>,
}

impl Render for CoverResult {
    fn csv_header(&self) -> Vec<&'static str> {
        vec!["u", "v"]
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        self.matching.iter().map(|(u, v)| vec![u.to_string(), v.to_string()]).collect()
    }

    fn table(&self) -> String {
        let edges: Vec<String> = self.matching.iter().map(|(u, v)| format!("{u}-{v}")).collect();
        let mut out = String::new();
        let _ = writeln!(out, "matching: {}", edges.join(" "));
        let _ = writeln!(out, "cover:    {} (K = {})", fmt_set(&self.cover), self.k);
        let _ = writeln!(out, "F(cover) = {} (N - K = {}, {})", sig6(self.value), sig6(self.floor), if self.floor_holds { "equal" } else { "DIFFERENT" });
        match (self.opt, self.within_factor_two) {
            (Some(opt), Some(ok)) => {
                let _ = writeln!(out, "OPT = {opt}, OPT <= K <= 2 OPT: {}", if ok { "yes" } else { "NO" });
            }
            _ => {
                let _ = writeln!(out, "OPT not computed");
            }
        }
        if let Some(n) = &self.notice {
            let _ = writeln!(out, "note: {n}");
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedRow {
    pub set: Labels,
    pub value: f64,
    pub rho: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyResult {
    pub k: usize,
    pub cover: Labels,
    pub f_max: f64,
    pub f_min: f64,
    pub c: f64,
    /// Objective level matching the threshold.
    pub c_bar: f64,
    pub m: usize,
    pub counts: BTreeMap<usize, usize>,
    pub sets: Vec<RankedRow>,
    pub truncated: bool,
}

impl Render for FamilyResult {
    fn csv_header(&self) -> Vec<&'static str> {
        vec!["size", "set", "value", "rho"]
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        self.sets
            .iter()
            .map(|r| vec![r.set.len().to_string(), fmt_set(&r.set), r.value.to_string(), r.rho.to_string()])
            .collect()
    }

    fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "K = {} cover {}  F_max = {}  F_min = {}  c = {}  (F <= {})  m = {}",
            self.k,
            fmt_set(&self.cover),
            sig6(self.f_max),
            sig6(self.f_min),
            sig6(self.c),
            sig6(self.c_bar),
            self.m
        );
        let counts: Vec<String> = self.counts.iter().map(|(n, c)| format!("|G_{n}| = {c}")).collect();
        let _ = writeln!(out, "{}", counts.join("  "));
        let rows: Vec<Vec<String>> =
            self.sets.iter().map(|r| vec![r.set.len().to_string(), fmt_set(&r.set), sig6(r.value), sig6(r.rho)]).collect();
        out.push_str(&columns(&["size", "set", "F", "rho"], &rows));
        if self.truncated {
            let _ = writeln!(out, "(listing truncated)");
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibleRow {
    pub set: Labels,
    pub rule: String,
    pub partners: Option<Labels>,
    pub extends: Option<Labels>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub g1: bool,
    pub g2_violations: Vec<Labels>,
    pub g3_violations: Vec<(Labels, Labels)>,
    pub t1: Vec<Labels>,
    pub t2: Vec<Labels>,
    pub t3: Vec<(Labels, Labels)>,
    pub t4_extra: Vec<Labels>,
    pub t4_missing: Vec<Labels>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GreedoidResult {
    pub construction: String,
    pub base: Option<Labels>,
    pub m: usize,
    pub k: usize,
    pub counts: BTreeMap<usize, usize>,
    pub sets: Vec<FeasibleRow>,
    pub verification: Verification,
}

impl Render for GreedoidResult {
    fn csv_header(&self) -> Vec<&'static str> {
        vec!["size", "set", "rule"]
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        self.sets.iter().map(|r| vec![r.set.len().to_string(), fmt_set(&r.set), r.rule.clone()]).collect()
    }

    fn table(&self) -> String {
        let mut out = String::new();
        let base = self.base.as_ref().map(|b| format!(" on {}", fmt_set(b))).unwrap_or_default();
        let _ = writeln!(out, "{}{}  m = {}  K = {}", self.construction, base, self.m, self.k);
        let counts: Vec<String> = self.counts.iter().map(|(n, c)| format!("{n}: {c}")).collect();
        let _ = writeln!(out, "feasible sets per size  {}", counts.join("  "));
        let rows: Vec<Vec<String>> =
            self.sets.iter().map(|r| vec![r.set.len().to_string(), fmt_set(&r.set), r.rule.clone()]).collect();
        out.push_str(&columns(&["size", "set", "rule"], &rows));
        let v = &self.verification;
        let _ = writeln!(
            out,
            "G1 {}  G2 violations {}  G3 violations {}  T1-T4 violations {}  => {}",
            if v.g1 { "ok" } else { "FAIL" },
            v.g2_violations.len(),
            v.g3_violations.len(),
            v.t1.len() + v.t2.len() + v.t3.len() + v.t4_extra.len() + v.t4_missing.len(),
            if v.passed { "greedoid" } else { "NOT a greedoid" }
        );
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Optimal,
    LocalOptimum,
    DeadEnd,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoveRow {
    pub kind: String,
    pub set: Labels,
    pub value: Option<f64>,
}

/// One base set and its stepwise extension, level by level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtensionRow {
    pub base: Labels,
    /// The base lies inside the vertex cover.
    pub in_cover: bool,
    pub steps: Vec<(Labels, f64)>,
    pub dead_end: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub construction: String,
    pub family_m: usize,
    pub m: usize,
    pub start: Labels,
    pub moves: Vec<MoveRow>,
    pub end: Labels,
    pub best: Option<(Labels, f64)>,
    pub optimum: Option<f64>,
    pub outcome: Outcome,
    pub notice: Option<String>,
    pub table: Option<Vec<ExtensionRow>>,
}

impl Render for SearchResult {
    fn csv_header(&self) -> Vec<&'static str> {
        if self.table.is_some() {
            vec!["base", "in_cover", "size", "set", "value"]
        } else {
            vec!["step", "kind", "set", "value"]
        }
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        if let Some(table) = &self.table {
            return table
                .iter()
                .flat_map(|row| {
                    row.steps.iter().map(move |(s, f)| {
                        vec![fmt_set(&row.base), row.in_cover.to_string(), s.len().to_string(), fmt_set(s), f.to_string()]
                    })
                })
                .collect();
        }
        self.moves
            .iter()
            .enumerate()
            .map(|(i, m)| {
                vec![(i + 1).to_string(), m.kind.clone(), fmt_set(&m.set), m.value.map_or(String::new(), |v| v.to_string())]
            })
            .collect()
    }

    fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} (m = {}), target M = {}, start {}", self.construction, self.family_m, self.m, fmt_set(&self.start));
        let rows: Vec<Vec<String>> = self
            .moves
            .iter()
            .enumerate()
            .map(|(i, m)| vec![(i + 1).to_string(), m.kind.clone(), fmt_set(&m.set), opt_sig6(m.value)])
            .collect();
        out.push_str(&columns(&["step", "move", "set", "F"], &rows));
        let best = self.best.as_ref().map(|(s, f)| format!("{} F = {}", fmt_set(s), sig6(*f))).unwrap_or_else(|| "-".into());
        let outcome = match self.outcome {
            Outcome::Optimal => "optimal (confirmed by exhaustive search)",
            Outcome::LocalOptimum => "local optimum",
            Outcome::DeadEnd => "dead end",
        };
        let _ = writeln!(out, "best {best}; optimum F = {}; {outcome}", opt_sig6(self.optimum));
        if let Some(n) = &self.notice {
            let _ = writeln!(out, "note: {n}");
        }
        if let Some(table) = &self.table {
            let _ = writeln!(out);
            let width = table.iter().map(|r| r.steps.len()).max().unwrap_or(0);
            let rows: Vec<Vec<String>> = table
                .iter()
                .map(|r| {
                    let mut cells = Vec::new();
                    for (i, (s, f)) in r.steps.iter().enumerate() {
                        let star = if i == 0 && r.in_cover { "*" } else { "" };
                        cells.push(format!("{}{star}", fmt_set(s)));
                        cells.push(sig6(*f));
                    }
                    if r.dead_end {
                        cells.push("(dead end)".into());
                    }
                    cells
                })
                .collect();
            let mut header = Vec::new();
            for _ in 0..width {
                header.extend(["set", "F"]);
            }
            out.push_str(&columns(&header, &rows));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloRow {
    pub estimate: f64,
    pub std_error: f64,
    pub walks_per_node: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub set: Labels,
    pub value: f64,
    pub times: Vec<(u64, f64)>,
    pub vertex_cover: bool,
    pub monte_carlo: Option<MonteCarloRow>,
}

impl Render for EvalResult {
    fn csv_header(&self) -> Vec<&'static str> {
        vec!["node", "hitting_time"]
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        self.times.iter().map(|(n, h)| vec![n.to_string(), h.to_string()]).collect()
    }

    fn table(&self) -> String {
        let rows: Vec<Vec<String>> = self.times.iter().map(|(n, h)| vec![n.to_string(), sig6(*h)]).collect();
        let mut out = columns(&["node", "h"], &rows);
        let _ = writeln!(out, "F({}) = {}{}", fmt_set(&self.set), sig6(self.value), if self.vertex_cover { " (vertex cover)" } else { "" });
        if let Some(mc) = &self.monte_carlo {
            let _ = writeln!(out, "Monte Carlo: {} ± {} ({} walks per node)", sig6(mc.estimate), sig6(mc.std_error), mc.walks_per_node);
        }
        out
    }
}
