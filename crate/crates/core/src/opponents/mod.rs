//! Deterministic biased opponents.
//!
//! Every opponent sees the true matrix, its own action ordering and the full
//! history. Two evaluation paths exist: the free functions in [`rules`]
//! recompute a choice from the whole history, while [`Opponent`] keeps an
//! incremental cache that is advanced one round at a time. The two must agree
//! after every round.
//!
//! Every opponent opens with the first action of its ordering.

pub mod rules;
mod state;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::game::{random_ordering, ActionOrdering, GameError};

pub use rules::{
    choose_from_scratch, ftl_choose, gambler_choose, hap_choose, mbr_choose, mwr_choose,
    wsls_choose,
};
pub use state::{Opponent, OpponentState};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpecError {
    #[error("unknown opponent `{0}` (expected mbr, mwr, gambler, wsls:shift, wsls:stay, ftl, ftl:<r>, hap)")]
    UnknownOpponent(String),
    #[error("history window must be a positive integer, got `{0}`")]
    BadWindow(String),
    #[error("ordering has {got} actions but the game has {n}")]
    OrderingSize { got: usize, n: usize },
    #[error(transparent)]
    Ordering(#[from] GameError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TiePolicy {
    /// A tie counts as a loss: move on.
    Shift,
    /// A tie counts as a win: keep the action.
    Stay,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Window {
    Unlimited,
    /// Only the last `r` rounds, `r >= 1`.
    Last(usize),
}

impl Window {
    pub fn limit(self) -> Option<usize> {
        match self {
            Window::Unlimited => None,
            Window::Last(r) => Some(r),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OpponentKind {
    MyopicBest,
    MyopicWorst,
    GamblersFallacy,
    WinStayLoseShift(TiePolicy),
    FollowTheLeader(Window),
    HighestAverage,
}

impl OpponentKind {
    /// Every kind with the given limited window added to the unlimited FTL.
    pub fn family_with_window(window: Option<usize>) -> Vec<OpponentKind> {
        let mut kinds = vec![
            OpponentKind::MyopicBest,
            OpponentKind::GamblersFallacy,
            OpponentKind::WinStayLoseShift(TiePolicy::Shift),
            OpponentKind::WinStayLoseShift(TiePolicy::Stay),
            OpponentKind::FollowTheLeader(Window::Unlimited),
            OpponentKind::HighestAverage,
        ];
        if let Some(r) = window {
            kinds.push(OpponentKind::FollowTheLeader(Window::Last(r)));
        }
        kinds
    }
}

impl fmt::Display for OpponentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OpponentKind::MyopicBest => write!(f, "mbr"),
            OpponentKind::MyopicWorst => write!(f, "mwr"),
            OpponentKind::GamblersFallacy => write!(f, "gambler"),
            OpponentKind::WinStayLoseShift(TiePolicy::Shift) => write!(f, "wsls:shift"),
            OpponentKind::WinStayLoseShift(TiePolicy::Stay) => write!(f, "wsls:stay"),
            OpponentKind::FollowTheLeader(Window::Unlimited) => write!(f, "ftl"),
            OpponentKind::FollowTheLeader(Window::Last(r)) => write!(f, "ftl:{r}"),
            OpponentKind::HighestAverage => write!(f, "hap"),
        }
    }
}

impl FromStr for OpponentKind {
    type Err = SpecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "mbr" => OpponentKind::MyopicBest,
            "mwr" => OpponentKind::MyopicWorst,
            "gambler" => OpponentKind::GamblersFallacy,
            "wsls:shift" => OpponentKind::WinStayLoseShift(TiePolicy::Shift),
            "wsls:stay" => OpponentKind::WinStayLoseShift(TiePolicy::Stay),
            "ftl" => OpponentKind::FollowTheLeader(Window::Unlimited),
            "hap" => OpponentKind::HighestAverage,
            other => match other.strip_prefix("ftl:") {
                Some(r) => match r.parse::<usize>() {
                    Ok(r) if r >= 1 => OpponentKind::FollowTheLeader(Window::Last(r)),
                    _ => return Err(SpecError::BadWindow(r.to_string())),
                },
                None => return Err(SpecError::UnknownOpponent(other.to_string())),
            },
        })
    }
}

/// Parsed opponent description: a strategy plus an optional fixed ordering.
///
/// Textual form is `<kind>[@<permutation>]`, e.g. `wsls:shift@2,0,1`. Without
/// an explicit permutation the ordering is drawn from the match seed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpponentSpec {
    pub kind: OpponentKind,
    pub ordering: Option<ActionOrdering>,
}

impl OpponentSpec {
    pub fn new(kind: OpponentKind, ordering: ActionOrdering) -> Self {
        OpponentSpec { kind, ordering: Some(ordering) }
    }

    pub fn resolve_ordering(&self, n: usize, seed: u64) -> Result<ActionOrdering, SpecError> {
        match &self.ordering {
            Some(o) if o.len() != n => Err(SpecError::OrderingSize { got: o.len(), n }),
            Some(o) => Ok(o.clone()),
            None => Ok(random_ordering(n, seed)),
        }
    }
}

impl fmt::Display for OpponentSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.ordering {
            Some(o) => write!(f, "{}@{}", self.kind, o),
            None => write!(f, "{}", self.kind),
        }
    }
}

impl FromStr for OpponentSpec {
    type Err = SpecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (kind, ordering) = match s.split_once('@') {
            Some((k, o)) => (k, Some(o.parse::<ActionOrdering>()?)),
            None => (s, None),
        };
        Ok(OpponentSpec { kind: kind.trim().parse()?, ordering })
    }
}
