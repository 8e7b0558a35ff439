use crate::nodeset::NodeSet;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("edge list is empty")]
    EmptyGraph,

    #[error("self-loop at node {0}")]
    SelfLoop(usize),

    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },

    #[error("node {node} out of range for a graph with {node_count} nodes")]
    NodeOutOfRange { node: usize, node_count: usize },

    #[error("invalid transition matrix: {0}")]
    InvalidTransition(String),

    #[error("target set is empty; hitting times are undefined")]
    EmptyTarget,

    #[error("linear solve failed: {0}")]
    Solver(String),

    #[error("enumeration needs {needed} candidate sets, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },

    #[error("cardinality {requested} is out of range (allowed {min}..={max})")]
    Cardinality { requested: usize, min: usize, max: usize },

    #[error("{0} is not a vertex cover")]
    NotVertexCover(NodeSet),

    #[error("degenerate instance: F_max = F_min = {0}, every set is optimal")]
    Degenerate(f64),

    #[error("threshold c = {0} must lie in (0, 1]")]
    InvalidThreshold(f64),

    #[error("objective value {value} lies outside [{f_min}, {f_max}]")]
    OutOfRankDomain { value: f64, f_min: f64, f_max: f64 },

    #[error("{0} is not a feasible set")]
    Infeasible(NodeSet),

    #[error("{0} is not in the ranked family")]
    NotInFamily(NodeSet),

    #[error("greedoid conditions not met at level {level}: {reason}")]
    ConditionsNotMet { level: usize, reason: String },

    #[error("no feasible extension of {0}")]
    DeadEnd(NodeSet),
}
