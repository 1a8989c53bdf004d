use serde::{Deserialize, Serialize};

use crate::Action;

/// One round of play: what the exploiter and the opponent chose.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Round {
    pub ours: Action,
    pub theirs: Action,
}

/// Append-only record of play.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct History {
    rounds: Vec<Round>,
}

impl History {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_rounds(rounds: Vec<Round>) -> Self {
        History { rounds }
    }

    pub fn from_pairs(pairs: &[(Action, Action)]) -> Self {
        History {
            rounds: pairs.iter().map(|&(ours, theirs)| Round { ours, theirs }).collect(),
        }
    }

    pub fn push(&mut self, round: Round) {
        self.rounds.push(round);
    }

    /// A new history extended by one round; `self` is untouched.
    pub fn extended(&self, round: Round) -> History {
        let mut rounds = self.rounds.clone();
        rounds.push(round);
        History { rounds }
    }

    pub fn len(&self) -> usize {
        self.rounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rounds.is_empty()
    }

    pub fn rounds(&self) -> &[Round] {
        &self.rounds
    }

    pub fn last(&self) -> Option<Round> {
        self.rounds.last().copied()
    }

    /// The most recent `window` rounds (all of them if fewer were played).
    pub fn tail(&self, window: usize) -> &[Round] {
        let start = self.rounds.len().saturating_sub(window);
        &self.rounds[start..]
    }

    /// How often the exploiter played each action.
    pub fn our_counts(&self, n: usize) -> Vec<u64> {
        let mut c = vec![0u64; n];
        for r in &self.rounds {
            c[r.ours] += 1;
        }
        c
    }

    pub fn ours(&self) -> Vec<Action> {
        self.rounds.iter().map(|r| r.ours).collect()
    }

    pub fn theirs(&self) -> Vec<Action> {
        self.rounds.iter().map(|r| r.theirs).collect()
    }
}
