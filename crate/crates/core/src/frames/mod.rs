//! Finite quasi-orders as Aleksandrov spaces, quasi-saws, models and the
//! model transformations used by the decision procedures.

mod constructions;
mod frame;
mod io;
mod model;
mod pointset;
mod quasisaw;

pub use constructions::{broom, connectify, make_fork_frame, subspace_model, ConnectifyMode};
pub use frame::Frame;
pub use model::{fence_cells, FrameClass, Model};
pub use pointset::{FrameId, PointSet};
pub use quasisaw::QuasiSawFrame;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameError {
    #[error("duplicate point '{0}'")]
    DuplicatePoint(String),
    #[error("unknown point '{0}'")]
    UnknownPoint(String),
    #[error("point index out of range")]
    PointOutOfRange,
    #[error("point set belongs to another frame")]
    CrossFrame,
    #[error("valuation of '{0}' belongs to another frame")]
    CrossFrameValuation(String),
    #[error("not a quasi-saw: {0}")]
    NotQuasiSaw(String),
    #[error("depth-1 point '{0}' has no successor")]
    EmptyHub(String),
    #[error("support must consist of depth-0 points")]
    NotSupport,
    #[error("fork arity must be at least 1")]
    BadForkArity,
    #[error("value of '{0}' is not regular closed")]
    NotRegularClosed(String),
    #[error("frame is not connected")]
    Disconnected,
    #[error("not a fence: {0}")]
    NotFence(String),
    #[error("unknown variable '{0}'")]
    UnknownVariable(String),
    #[error("unknown frame class '{0}'")]
    UnknownClass(String),
    #[error("either every point or no point declares a depth")]
    PartialDepths,
    #[error("malformed model file: {0}")]
    Json(String),
}

impl FrameError {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            FrameError::DuplicatePoint(_) => "duplicate_point",
            FrameError::UnknownPoint(_) => "unknown_point",
            FrameError::PointOutOfRange => "point_out_of_range",
            FrameError::CrossFrame | FrameError::CrossFrameValuation(_) => "cross_frame",
            FrameError::NotQuasiSaw(_) => "not_quasi_saw",
            FrameError::EmptyHub(_) => "empty_hub",
            FrameError::NotSupport => "not_support",
            FrameError::BadForkArity => "bad_fork_arity",
            FrameError::NotRegularClosed(_) => "not_regular_closed",
            FrameError::Disconnected => "disconnected",
            FrameError::NotFence(_) => "not_fence",
            FrameError::UnknownVariable(_) => "unknown_variable",
            FrameError::UnknownClass(_) => "unknown_class",
            FrameError::PartialDepths => "partial_depths",
            FrameError::Json(_) => "malformed_json",
        }
    }
}

#[cfg(test)]
mod tests;
