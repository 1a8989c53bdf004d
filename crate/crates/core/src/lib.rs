//! Payoff-blind exploitation of deterministic, behaviorally biased opponents
//! in repeated symmetric zero-sum matrix games.
//!
//! The crate is split along the information boundary of the setting:
//!
//! - [`game`] holds the hidden ground truth: permissible payoff matrices,
//!   action orderings and play histories.
//! - [`opponents`] implements the biased strategies. They see the matrix.
//! - [`exploiters`] implements the agents that beat them. They only ever
//!   receive an [`exploiters::Observation`], which carries action sequences
//!   and the action count, never payoffs.
//! - [`predictors`] hosts the halving and ellipsoid opponent-action
//!   predictors used by the exploiters.
//! - [`arena`] runs matches, audits learned tables against the ground truth
//!   and checks per-algorithm loss/tie bounds on transcripts.

pub mod arena;
pub mod cli;
pub mod exploiters;
pub mod game;
pub mod opponents;
pub mod predictors;

/// Index of an action, `0..n`.
pub type Action = usize;
