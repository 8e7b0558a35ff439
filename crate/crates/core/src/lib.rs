//! Target-set selection for random-walk information spreading.
//!
//! A walker starting outside an informed set `A` moves to a uniformly chosen
//! neighbor at each step; the spread objective `F(A)` is the sum over all
//! uninformed nodes of the expected number of steps until the walker first
//! lands in `A`. Smaller is better. The crate provides
//!
//! - [`graph`]: undirected graphs, the random-walk transition matrix, and the
//!   edge-list text format,
//! - [`hitting`]: exact hitting times via a dense linear solve plus a
//!   Monte Carlo cross-check,
//! - [`baselines`]: exhaustive optimum, the supermodular greedy algorithm,
//!   Two-Opt maximal matching and the greedy guarantee check,
//! - [`ranking`]: the normalized rank and the family of optimal and
//!   near-optimal sets,
//! - [`greedoid`]: greedoid construction over that family and axiom checks,
//! - [`greedoid_graph`]: add/delete/swap adjacency over feasible sets and the
//!   local searches built on it.

pub mod baselines;
pub mod error;
pub mod generators;
pub mod graph;
pub mod greedoid;
pub mod greedoid_graph;
pub mod hitting;
pub mod nodeset;
pub mod ranking;

pub use error::{Error, Result};
pub use graph::{Graph, TransitionMatrix};
pub use hitting::{HittingProfile, SpreadObjective};
pub use nodeset::NodeSet;

/// Default cap on the number of candidate sets an exhaustive routine may visit.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Relative tolerance used when deciding that two objective values tie.
pub const F_TIE_TOL: f64 = 1e-9;

/// Total order on objective values that treats near-equal values as equal.
pub(crate) fn cmp_objective(a: f64, b: f64) -> std::cmp::Ordering {
    if approx_eq(a, b) {
        std::cmp::Ordering::Equal
    } else {
        a.total_cmp(&b)
    }
}

pub(crate) fn approx_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= F_TIE_TOL * 1f64.max(a.abs()).max(b.abs())
}

/// `a < b` by more than the tie tolerance.
pub(crate) fn strictly_less(a: f64, b: f64) -> bool {
    a < b && !approx_eq(a, b)
}
