//! Opponent-action predictors.
//!
//! [`HypothesisSpace`] is the majority-vote halving predictor over explicit
//! (strategy, matrix, ordering) triples. [`EllipsoidState`] estimates a payoff
//! matrix from the strict preferences revealed by prediction mistakes.

mod ellipsoid;
mod halving;

use thiserror::Error;

pub use ellipsoid::{
    default_margin, CutRecord, EllipsoidState, MistakeConstraint, ScoreContext, ScoreMode,
};
pub use halving::{Hypothesis, HypothesisSpace, HalvingStep, DEFAULT_ENUMERATION_LIMIT};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PredictorError {
    #[error("hypothesis enumeration for n = {n} exceeds the limit of {limit} actions")]
    Capacity { n: usize, limit: usize },
    #[error("no permissible game exists for n = {0}")]
    TooFewActions(usize),
    #[error("no surviving hypothesis: the opponent is not in the modeled family")]
    ModelMismatch,
    #[error("ellipsoid conditioning fault: w'Pw = {0:e}")]
    Conditioning(f64),
    #[error("constraint already holds at the center (slack {0:e}); no cut applied")]
    NotViolated(f64),
}
