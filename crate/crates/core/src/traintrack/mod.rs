//! Train track certification, transition matrices, eigenmetrics, direction
//! dynamics, ideal Whitehead graphs and the lone-axis decision.

mod matrix;
mod turns;
mod whitehead;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use matrix::{
    eigen_metric, is_expanding, is_irreducible, mat_mul, strong_components, transition_matrix, EigenMetric,
    TransitionMatrix, EIGEN_TOLERANCE,
};
pub use turns::{
    all_turns, direction_map, illegal_turns, is_train_track, periodic_directions, taken_turns, turns_of_path,
    DirectionMap, TrainTrackWitness, Turn,
};
pub use whitehead::{
    ideal_whitehead, lone_axis_check, nielsen_search, rotationless_index, IdealWhiteheadGraph, IwComponent,
    LoneAxisOptions, LoneAxisReport, NielsenPath, NielsenReport, Verdict, NIELSEN_DEFAULT_LEN, NIELSEN_DEFAULT_PERIOD,
};

/// Errors raised when a map violates an operation's preconditions.
#[derive(Debug, Error, Clone, PartialEq, Serialize, Deserialize)]
pub enum TrainTrackError {
    #[error("map is not irreducible")]
    NotIrreducible,
    #[error("map is not expanding")]
    NotExpanding,
    #[error("map is not a train track map: edge {} crosses turn {:?} at position {}", .0.edge, .0.turn, .0.position)]
    NotTrainTrack(TrainTrackWitness),
    #[error("ideal Whitehead graph needs the no-periodic-Nielsen-path flag")]
    NielsenPathsPresent,
    #[error("eigenvector computation failed: {0}")]
    EigenFailure(String),
    #[error("graph error: {0}")]
    Graph(String),
}
