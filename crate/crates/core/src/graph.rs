//! Undirected graphs, the random-walk transition matrix, and the edge-list
//! text format.
//!
//! The text format is one edge per line as two whitespace-separated
//! nonnegative integers. Blank lines and lines starting with `#` are ignored.
//! An optional `nodes N` line fixes the node count; otherwise it is one more
//! than the largest id seen.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nodeset::NodeSet;

/// Row sums of a transition matrix must be within this of 1.
pub const ROW_SUM_TOL: f64 = 1e-12;

/// A connected, simple, undirected graph on nodes `0..node_count`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct Graph {
    node_count: usize,
    /// Sorted, each pair stored as `(u, v)` with `u < v`.
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    node_count: usize,
    edges: Vec<(usize, usize)>,
}

impl TryFrom<GraphRepr> for Graph {
    type Error = Error;
    fn try_from(r: GraphRepr) -> Result<Self> {
        Graph::new(r.node_count, r.edges)
    }
}

impl From<Graph> for GraphRepr {
    fn from(g: Graph) -> Self {
        GraphRepr { node_count: g.node_count, edges: g.edges }
    }
}

impl Graph {
    /// Validates and canonicalizes an edge list. Duplicate edges, in either
    /// orientation, collapse to one.
    pub fn new(node_count: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut canonical = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            for node in [u, v] {
                if node >= node_count {
                    return Err(Error::NodeOutOfRange { node, node_count });
                }
            }
            canonical.insert((u.min(v), u.max(v)));
        }
        if canonical.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let edges: Vec<(usize, usize)> = canonical.into_iter().collect();
        let mut adjacency = vec![Vec::new(); node_count];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let g = Graph { node_count, edges, adjacency };
        let components = g.component_count();
        if components != 1 {
            return Err(Error::Disconnected { components });
        }
        Ok(g)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.adjacency[node]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.node_count && self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn nodes(&self) -> NodeSet {
        NodeSet::full(self.node_count)
    }

    fn component_count(&self) -> usize {
        let mut seen = vec![false; self.node_count];
        let mut components = 0;
        for root in 0..self.node_count {
            if seen[root] {
                continue;
            }
            components += 1;
            seen[root] = true;
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adjacency[u] {
                    if !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
        }
        components
    }

    /// Bipartite graphs give a periodic chain. Hitting times to nonempty
    /// sets stay finite, so callers only warn about it.
    pub fn is_bipartite(&self) -> bool {
        let mut color = vec![None; self.node_count];
        color[0] = Some(false);
        let mut queue = VecDeque::from([0]);
        while let Some(u) = queue.pop_front() {
            let cu = color[u].expect("queued nodes are colored");
            for &v in &self.adjacency[u] {
                match color[v] {
                    None => {
                        color[v] = Some(!cu);
                        queue.push_back(v);
                    }
                    Some(cv) if cv == cu => return false,
                    Some(_) => {}
                }
            }
        }
        true
    }

    /// True iff every edge has an endpoint in `set`.
    pub fn is_vertex_cover(&self, set: &NodeSet) -> bool {
        self.edges.iter().all(|&(u, v)| set.contains(u) || set.contains(v))
    }

    pub fn transition_matrix(&self) -> TransitionMatrix {
        TransitionMatrix::uniform(self)
    }

    /// Canonical text form: a `nodes N` header followed by sorted `u v` lines.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("nodes {}\n", self.node_count);
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}

#[derive(Debug)]
struct RawEdgeList {
    declared_nodes: Option<usize>,
    edges: Vec<(u64, u64)>,
}

fn parse_raw(text: &str) -> Result<RawEdgeList> {
    let mut declared_nodes = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let err = |message: String| Error::Parse { line: line_no, message };
        if tokens[0] == "nodes" {
            if tokens.len() != 2 || declared_nodes.is_some() {
                return Err(err("expected a single `nodes N` header".into()));
            }
            let n: usize = tokens[1]
                .parse()
                .map_err(|_| err(format!("bad node count `{}`", tokens[1])))?;
            declared_nodes = Some(n);
            continue;
        }
        if tokens.len() != 2 {
            return Err(err(format!("expected two node ids, found {} tokens", tokens.len())));
        }
        let id = |t: &str| t.parse::<u64>().map_err(|_| err(format!("bad node id `{t}`")));
        edges.push((id(tokens[0])?, id(tokens[1])?));
    }
    Ok(RawEdgeList { declared_nodes, edges })
}

fn to_index(id: u64) -> Result<usize> {
    usize::try_from(id).map_err(|_| Error::Parse { line: 0, message: format!("node id {id} too large") })
}

/// Parses the edge-list format with ids taken literally as node indices.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let raw = parse_raw(text)?;
    let mut edges = Vec::with_capacity(raw.edges.len());
    for &(u, v) in &raw.edges {
        edges.push((to_index(u)?, to_index(v)?));
    }
    if edges.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let max_id = edges.iter().map(|&(u, v)| u.max(v)).max().unwrap_or(0);
    let n = raw.declared_nodes.unwrap_or(max_id + 1);
    Graph::new(n, edges)
}

/// A graph whose nodes carry the ids used in the input file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledGraph {
    pub graph: Graph,
    /// `labels[i]` is the file id of internal node `i`; strictly increasing.
    pub labels: Vec<u64>,
}

impl LabeledGraph {
    pub fn label(&self, node: usize) -> u64 {
        self.labels[node]
    }

    pub fn index_of(&self, label: u64) -> Option<usize> {
        self.labels.binary_search(&label).ok()
    }

    pub fn labels_of(&self, set: &NodeSet) -> Vec<u64> {
        set.iter().map(|i| self.labels[i]).collect()
    }

    /// Maps file ids back to a node set; unknown ids are reported as `Err`.
    pub fn set_from_labels(&self, labels: &[u64]) -> std::result::Result<NodeSet, u64> {
        labels
            .iter()
            .map(|&l| self.index_of(l).ok_or(l))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(NodeSet::from)
    }
}

/// Parses the edge-list format keeping the file's own ids.
///
/// Without a `nodes N` header the distinct ids are compacted in increasing
/// order, so a 1-based file yields internal nodes `0..N` labeled `1..=N`.
/// With a header the ids are taken literally, as in [`parse_graph`].
pub fn parse_labeled(text: &str) -> Result<LabeledGraph> {
    let raw = parse_raw(text)?;
    if raw.declared_nodes.is_some() {
        let graph = parse_graph(text)?;
        let labels = (0..graph.node_count() as u64).collect();
        return Ok(LabeledGraph { graph, labels });
    }
    let labels: Vec<u64> = raw
        .edges
        .iter()
        .flat_map(|&(u, v)| [u, v])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let index = |id: u64| labels.binary_search(&id).expect("label collected above");
    let edges: Vec<(usize, usize)> = raw.edges.iter().map(|&(u, v)| (index(u), index(v))).collect();
    if edges.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let graph = Graph::new(labels.len(), edges)?;
    Ok(LabeledGraph { graph, labels })
}

/// Row-stochastic random-walk matrix supported on the graph's edges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionMatrix {
    n: usize,
    /// Row-major `n × n`.
    entries: Vec<f64>,
}

impl TransitionMatrix {
    /// `p(i, j) = 1 / deg(i)` on every edge.
    pub fn uniform(g: &Graph) -> Self {
        let n = g.node_count();
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            let w = 1.0 / g.degree(i) as f64;
            for &j in g.neighbors(i) {
                entries[i * n + j] = w;
            }
        }
        TransitionMatrix { n, entries }
    }

    /// An explicit chain on `g`. Each row must be stochastic and positive
    /// exactly on the node's neighbors.
    pub fn from_rows(g: &Graph, rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = g.node_count();
        if rows.len() != n {
            return Err(Error::InvalidTransition(format!("expected {n} rows, got {}", rows.len())));
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidTransition(format!("row {i} has {} entries", row.len())));
            }
            for (j, &p) in row.iter().enumerate() {
                let ok = if g.has_edge(i, j) { p > 0.0 && p <= 1.0 } else { p == 0.0 };
                if !ok || !p.is_finite() {
                    return Err(Error::InvalidTransition(format!(
                        "entry ({i},{j}) = {p} does not match the edge pattern"
                    )));
                }
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > ROW_SUM_TOL {
                return Err(Error::InvalidTransition(format!("row {i} sums to {sum}")));
            }
            entries.extend(row);
        }
        Ok(TransitionMatrix { n, entries })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        parse_graph("0 1\n1 2").unwrap()
    }

    #[test]
    fn parses_path() {
        let g = path3();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn duplicate_edges_collapse() {
        let g = parse_graph("0 1\n1 0").unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.edges(), &[(0, 1)]);
    }

    #[test]
    fn rejects_disconnected() {
        assert!(matches!(parse_graph("0 1\n2 3"), Err(Error::Disconnected { components: 2 })));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_graph("0 0"), Err(Error::SelfLoop(0))));
        assert!(matches!(parse_graph("0 x"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_graph("0 1 2"), Err(Error::Parse { .. })));
        assert!(matches!(parse_graph("0 -1"), Err(Error::Parse { .. })));
        assert!(matches!(parse_graph("# only a comment\n\n"), Err(Error::EmptyGraph)));
    }

    #[test]
    fn header_sets_node_count() {
        // an isolated node 2 makes the graph disconnected
        assert!(matches!(parse_graph("nodes 3\n0 1"), Err(Error::Disconnected { .. })));
        assert!(matches!(parse_graph("nodes 2\n0 2"), Err(Error::NodeOutOfRange { .. })));
        let g = parse_graph("# header\nnodes 2\n0 1\n").unwrap();
        assert_eq!(g.node_count(), 2);
    }

    #[test]
    fn labeled_parse_compacts_ids() {
        let lg = parse_labeled("1 2\n2 3\n3 10").unwrap();
        assert_eq!(lg.labels, vec![1, 2, 3, 10]);
        assert_eq!(lg.graph.edges(), &[(0, 1), (1, 2), (2, 3)]);
        assert_eq!(lg.labels_of(&NodeSet::from([0, 3])), vec![1, 10]);
        assert_eq!(lg.set_from_labels(&[10, 2]), Ok(NodeSet::from([1, 3])));
        assert_eq!(lg.set_from_labels(&[4]), Err(4));
    }

    #[test]
    fn transition_rows_follow_degree() {
        let p = path3().transition_matrix();
        assert_eq!(p.row(1), &[0.5, 0.0, 0.5]);
        assert_eq!(p.row(0), &[0.0, 1.0, 0.0]);
        assert_eq!(p.row(2), &[0.0, 1.0, 0.0]);

        let k4 = parse_graph("0 1\n0 2\n0 3\n1 2\n1 3\n2 3").unwrap().transition_matrix();
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i == j { 0.0 } else { 1.0 / 3.0 };
                assert_eq!(k4.get(i, j), expected);
            }
        }

        let star = parse_graph("0 1\n0 2\n0 3").unwrap().transition_matrix();
        assert_eq!(star.row(0), &[0.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]);
        for leaf in 1..4 {
            assert_eq!(star.row(leaf), &[1.0, 0.0, 0.0, 0.0]);
        }
    }

    #[test]
    fn explicit_chain_is_validated() {
        let g = path3();
        let ok = TransitionMatrix::from_rows(
            &g,
            vec![vec![0.0, 1.0, 0.0], vec![0.25, 0.0, 0.75], vec![0.0, 1.0, 0.0]],
        );
        assert!(ok.is_ok());
        let off_support = TransitionMatrix::from_rows(
            &g,
            vec![vec![0.0, 0.5, 0.5], vec![0.5, 0.0, 0.5], vec![0.0, 1.0, 0.0]],
        );
        assert!(matches!(off_support, Err(Error::InvalidTransition(_))));
        let not_stochastic = TransitionMatrix::from_rows(
            &g,
            vec![vec![0.0, 1.0, 0.0], vec![0.5, 0.0, 0.4], vec![0.0, 1.0, 0.0]],
        );
        assert!(matches!(not_stochastic, Err(Error::InvalidTransition(_))));
    }

    #[test]
    fn vertex_cover_checks() {
        let g = path3();
        assert!(g.is_vertex_cover(&NodeSet::from([1])));
        assert!(!g.is_vertex_cover(&NodeSet::from([0])));
        assert!(g.is_vertex_cover(&g.nodes()));
    }

    #[test]
    fn bipartite_detection() {
        assert!(path3().is_bipartite());
        assert!(!parse_graph("0 1\n1 2\n2 0").unwrap().is_bipartite());
    }
}
