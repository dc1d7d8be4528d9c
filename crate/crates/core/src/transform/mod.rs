//! Satisfiability-preserving rewrites and translations between languages.

mod elim;
mod fp;
mod rewrite;

pub use elim::{
    eliminate_contact_neg, eliminate_contact_pos, eliminate_contacts, eliminate_count_pos, epsilon, CountMode,
};
pub use fp::{fp_eval_cells, fp_modelcheck, fp_translate, FpFormula};
pub use rewrite::{dagger, eq_normalize, rcc8_to_c, relativize};

use crate::formula::{Formula, LanguageTag};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("atom occurrence {0} does not exist")]
    NoSuchOccurrence(usize),
    #[error("no eligible atom occurrence")]
    NoEligibleOccurrence,
    #[error("occurrence {0} is not of the required kind")]
    WrongAtom(usize),
    #[error("occurrence {0} does not have positive polarity")]
    NotPositive(usize),
    #[error("occurrence {0} does not have negative polarity")]
    NotNegative(usize),
    #[error("formula mixes regular-closed and set operators")]
    MixedFamily,
    #[error("operation does not apply to {0} formulas")]
    Unsupported(String),
    #[error("variable '{0}' clashes with the fresh-variable scheme")]
    FreshCollision(String),
    #[error("count bound {0} is too large to unfold")]
    CountTooLarge(String),
    #[error("letter '{0}' has no value")]
    UnboundLetter(String),
    #[error("cell {0} is out of range")]
    NoSuchCell(usize),
    #[error("model is not a fence: {0}")]
    NotFence(String),
}

impl TransformError {
    pub fn code(&self) -> &'static str {
        match self {
            TransformError::NoSuchOccurrence(_) | TransformError::NoEligibleOccurrence => "no_occurrence",
            TransformError::WrongAtom(_) => "wrong_atom",
            TransformError::NotPositive(_) => "not_positive",
            TransformError::NotNegative(_) => "not_negative",
            TransformError::MixedFamily => "mixed_family",
            TransformError::Unsupported(_) => "unsupported_language",
            TransformError::FreshCollision(_) => "fresh_collision",
            TransformError::CountTooLarge(_) => "count_too_large",
            TransformError::UnboundLetter(_) => "unbound_letter",
            TransformError::NoSuchCell(_) => "no_such_cell",
            TransformError::NotFence(_) => "not_fence",
        }
    }
}

const FRESH_STEM: &str = "_aux";

/// Source of fresh variables `_aux<N>`.
#[derive(Debug, Clone)]
pub struct Fresh {
    next: usize,
}

fn aux_index(name: &str) -> Option<usize> {
    name.strip_prefix(FRESH_STEM).and_then(|d| d.parse().ok())
}

impl Fresh {
    /// Fails when `f` already uses a name of the fresh scheme.
    pub fn new(f: &Formula) -> Result<Fresh, TransformError> {
        match f.vars().into_iter().find(|v| aux_index(v).is_some()) {
            Some(v) => Err(TransformError::FreshCollision(v)),
            None => Ok(Fresh { next: 1 }),
        }
    }

    /// Continue numbering after every `_aux<N>` already in `f`.
    pub fn after(f: &Formula) -> Fresh {
        let next = f.vars().iter().filter_map(|v| aux_index(v)).max().map_or(1, |m| m + 1);
        Fresh { next }
    }

    pub fn var(&mut self) -> String {
        let v = format!("{FRESH_STEM}{}", self.next);
        self.next += 1;
        v
    }
}

pub(crate) fn unsupported(tag: Option<LanguageTag>) -> TransformError {
    match tag {
        Some(t) => TransformError::Unsupported(t.name().to_string()),
        None => TransformError::MixedFamily,
    }
}

#[cfg(test)]
mod tests;
