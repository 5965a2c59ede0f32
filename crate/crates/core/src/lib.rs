//! Overlapping clustering methods on finite metric spaces.
//!
//! Methods take a finite metric space and return a flag cover: a family of
//! possibly overlapping clusters whose blocks are exactly the maximal cliques
//! of their co-membership graph. Sweeping a method over all scales yields a
//! sieve, the overlapping analogue of a dendrogram. The `verify` module checks
//! functoriality and related properties on seeded random instances.

pub mod covers;
pub mod functors;
pub mod graphs;
pub mod io;
pub mod metric;
pub mod sieves;
pub mod verify;

pub use covers::{maximal_linked_sets, Cover, CoverError, FlagCover, Relation, SetFunction, SetMap};
pub use functors::{Budget, FunctorError, Method, MethodSpec, ProbeResult, Steps};
pub use graphs::{threshold_graph, EdgeConvention, Graph, GraphError};
pub use metric::{FiniteMetricSpace, MapError, MetricError, MetricMap, Norm, PathSpaceSpec};
pub use sieves::{build_persistent_cover, build_sieve, check_sieve_axioms, sieve_consistent, Sieve, SieveError};
