//! Formula families encoding machine computations and tilings, the
//! models witnessing them, and the named example corpus.

mod corpus;
mod machines;
mod modal;
mod tiling;
mod tm;
mod tree;

#[cfg(test)]
mod tests;

pub use corpus::{corpus, CorpusEntry, EntryOutcome, Expected, Query};
pub use machines::{bundled_atm, bundled_machine, bundled_tileset, BUNDLED_ATMS, BUNDLED_MACHINES, BUNDLED_TILESETS};
pub use modal::{parse_modal, Modal};
pub use tiling::{brute_force_tiling, gen_tiling_formula, gen_tiling_witness, TileSet, Tiling};
pub use tm::{gen_tm_formula, gen_tm_witness, Config, Instruction, TileType, TuringMachine};
pub use tree::{
    atm_modal_pair, gen_atm_formula, gen_tree_formula, gen_tree_witness, AlternatingTM, LabeledBinaryTree, Mode, TreeNode,
};

use crate::frames::FrameError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GadgetError {
    #[error("malformed machine: {0}")]
    MalformedMachine(String),
    #[error("bad input word: {0}")]
    BadInput(String),
    #[error("invalid run: {0}")]
    InvalidRun(String),
    #[error("malformed modal formula: {0}")]
    MalformedModal(String),
    #[error("inconsistent tree labelling: {0}")]
    InconsistentLabelling(String),
    #[error("anchor tile '{0}' is not in the tile set")]
    UnknownAnchor(String),
    #[error("malformed tile set: {0}")]
    MalformedTileSet(String),
    #[error("invalid tiling: {0}")]
    InvalidTiling(String),
    #[error("malformed specification: {0}")]
    Json(String),
    #[error(transparent)]
    Frame(#[from] FrameError),
}

impl GadgetError {
    pub fn code(&self) -> &'static str {
        match self {
            GadgetError::MalformedMachine(_) => "malformed_machine",
            GadgetError::BadInput(_) => "bad_input",
            GadgetError::InvalidRun(_) => "invalid_run",
            GadgetError::MalformedModal(_) => "malformed_modal",
            GadgetError::InconsistentLabelling(_) => "inconsistent_labelling",
            GadgetError::UnknownAnchor(_) => "unknown_anchor",
            GadgetError::MalformedTileSet(_) => "malformed_tileset",
            GadgetError::InvalidTiling(_) => "invalid_tiling",
            GadgetError::Json(_) => "malformed_json",
            GadgetError::Frame(e) => e.code(),
        }
    }
}
