//! Exact enumeration of minimal linear and affine dependencies, semi-simplex
//! families of q-linear hypergraphs, extremal constructions with closed-form
//! counts, and minimal balanced chemical reactions.
//!
//! All arithmetic is over the rationals; nothing is computed in floating point.

pub mod combinat;
pub mod exactla;
pub mod extremal;
pub mod geometry;
pub mod hypergraph;
pub mod io;
pub mod matroid;
pub mod stoichiometry;
pub mod suites;

pub use combinat::{binomial, binomial_big, k_subsets, SmallSet, MAX_ELEMENTS};
pub use exactla::{parse_rational, Rational, RationalMatrix};
pub use extremal::{ConstructionId, ExtremalError, Flavor, SearchResult};
pub use geometry::{enumerate_affine_simplexes, project_to_affine, GeometryError, PointSet, SimplexReport};
pub use hypergraph::{Hypergraph, HypergraphError, SemiSimplexReport};
pub use matroid::{enumerate_circuits, Circuit, MatroidError, VectorConfiguration};
pub use stoichiometry::{AtomUniverse, Reaction, ReactionSystem, Species, StoichiometryError};
