//! Graphs, edge paths, graph maps, markings and free-group words.

mod free;
mod graph;
mod map;
mod marking;
mod path;
pub mod text;

use thiserror::Error;

pub use free::{FreeGroupMap, FreeWord, Invertibility};
pub use graph::{oriented_name, Graph, OEdge};
pub use map::{compose, subdivide_at_preimages, GraphMap, Subdivision};
pub use marking::{map_to_automorphism, map_to_automorphism_with_tree, InducedAutomorphism, MarkedGraph, SpanningTree};
pub use path::{reduce, reverse, EdgePath};

/// Errors from graph construction, parsing and map validation.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("duplicate name '{0}'")]
    DuplicateName(String),
    #[error("unknown vertex: {0}")]
    UnknownVertex(String),
    #[error("unknown edge '{0}'")]
    UnknownEdge(String),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("vertex '{0}' has valence at most one")]
    LowValence(String),
    #[error("path is not composable at position {position}")]
    NotComposable { position: usize },
    #[error("empty path has no start vertex")]
    EmptyPath,
    #[error("vertex or edge count does not match the graph")]
    ShapeMismatch,
    #[error("edge '{0}' is collapsed to an empty path")]
    CollapsedEdge(String),
    #[error("image of edge '{0}' is not a path between the images of its endpoints")]
    BadImage(String),
    #[error("codomain of the inner map differs from the domain of the outer map")]
    DomainMismatch,
    #[error("edge set is not a spanning tree")]
    NotATree,
    #[error("invalid marking: {0}")]
    BadMarking(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
