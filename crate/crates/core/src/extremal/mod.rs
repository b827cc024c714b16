//! Extremal constructions with their closed-form counts, exhaustive
//! minimization of the semi-simplex YBLM sum, and the graph facts behind
//! the exact k = 2 value.

mod bounds;
mod constructions;
mod graphs;
mod search;

pub use bounds::{exact_k2_minimum, reference_bounds, two_disjoint_edges_closed_form, ReferenceBounds};
pub use constructions::{
    check_construction, construct, expected_count, measured_value, Construction, ConstructionCheck,
    ConstructionId, Expected,
};
pub use graphs::{
    complement_is_balanced_complete_bipartite, count_triangles, triangle_bound_check, triangle_lower_bound,
    turan_k2,
};
pub use search::{
    canonical_form, minimize_semi_simplex_sum, monotonicity_check, Flavor, MonotonicityReport, MonotonicityRow,
    SearchResult, DEFAULT_BUDGET,
};

use thiserror::Error;

use crate::geometry::GeometryError;
use crate::hypergraph::HypergraphError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtremalError {
    #[error("unknown construction {0:?}")]
    UnknownConstruction(String),
    #[error("{id}: {reason}")]
    Infeasible { id: String, reason: String },
    #[error("construction {id} failed its side-condition check: {reason}")]
    ConstructionFailed { id: String, reason: String },
    #[error("search needs about {estimated} candidates, budget is {budget}")]
    Budget { estimated: String, budget: u64 },
    #[error("cannot search n = {n}, k = {k}: {reason}")]
    BadSearch { n: usize, k: usize, reason: String },
    #[error("edge {0} does not have exactly two vertices")]
    NotAGraph(usize),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}
