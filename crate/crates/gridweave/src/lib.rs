//! Crossing-free straight-line drawings of graphs on the integer grid
//! `[m]^3 = {0, ..., m-1}^3`.
//!
//! A drawing places each vertex on a distinct lattice point so that no edge
//! passes through a non-incident vertex and no two edges share an interior
//! point. The crate provides:
//!
//! - [`geometry`]: exact integer predicates (collinearity, coplanarity,
//!   betweenness, segment conflicts) that decide the drawing conditions
//!   with no floating-point anywhere;
//! - [`graph`]: simple graphs, degeneracy orderings, blowups, and seeded
//!   graph-family generators;
//! - [`engine`]: the two randomized drawers — repeated uniform random
//!   embedding sized by a first-moment volume formula, and greedy selection
//!   inside a random embedding of the t-blowup, reaching volume
//!   proportional to `D * k * ln n`;
//! - [`verify`]: an independent auditor for (graph, embedding) pairs;
//! - [`census`]: brute-force and enumeration counters for collinear and
//!   coplanar lattice subsets and hyperplane point bounds, with growth-rate
//!   fitting;
//! - [`formats`], [`render`], [`harness`]: the embedding JSON format, SVG
//!   figures, and the seeded experiment runner behind the CLI.

pub mod census;
pub mod engine;
pub mod formats;
pub mod geometry;
pub mod graph;
pub mod harness;
pub mod render;
pub mod verify;

pub use engine::{
    choose_parameters, draw_blowup_greedy, draw_first_moment, find_conflicts, random_embedding,
    Algorithm, ConflictReport, DrawOutcome, DrawingParams, Embedding, EngineError, TrialStats,
};
pub use geometry::{ConflictKind, GridPoint, Segment};
pub use graph::{DegeneracyOrdering, Graph, GraphError, GraphFamily, VertexId};
pub use verify::{drawing_stats, verify_drawing, DrawingStats, VerificationVerdict, VerifyError};
