//! Strongly-separating path systems for undirected graphs.
//!
//! A path system separates an edge set when every ordered pair (e, f) of distinct
//! edges has a path containing e but not f. This crate builds such systems with a
//! pipeline of expander decompositions, path decompositions, matching families
//! and path-forest completion, and checks every output with an independent verifier.

pub mod connector;
pub mod decomp;
pub mod expander;
pub mod format;
pub mod generate;
pub mod graph;
pub mod oracle;
pub mod rng;
pub mod separation;
pub mod strategies;

pub use decomp::{decompose_into_bounded_paths, decompose_into_paths, PathDecomposition};
pub use generate::{generate, Family, FamilyKind};
pub use graph::{Edge, EdgeSet, Graph, Path, PathForest, Vertex, VertexSet};
pub use oracle::{brute_force_min_system, OracleError};
pub use separation::{
    baseline_nlogn, compose_disjoint, compose_separators, singleton_baseline, verify_separation, Mode, PathSystem,
    SeparationError, SeparationReport, Witness,
};
pub use strategies::{
    iterated_log, one_step, separate_all, separate_all_traced, two_steps, PipelineConfig, RunReport, RunTrace, StageResult,
};
