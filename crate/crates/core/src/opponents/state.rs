use std::collections::VecDeque;

use super::rules::{best_response, worst_response, Average};
use super::{OpponentKind, TiePolicy, Window};
use crate::game::{ActionOrdering, GameMatrix, Round};
use crate::Action;

/// Per-kind cache over the history. Everything here can be rebuilt from the
/// history; it never holds information the history does not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OpponentState {
    Myopic { last_ours: Option<Action> },
    Gambler { counts: Vec<u64> },
    Wsls { next: Option<Action> },
    Leader { scores: Vec<i64>, window: VecDeque<Action> },
    Average { averages: Vec<Average> },
}

impl OpponentState {
    pub fn new(kind: OpponentKind, n: usize) -> Self {
        match kind {
            OpponentKind::MyopicBest | OpponentKind::MyopicWorst => {
                OpponentState::Myopic { last_ours: None }
            }
            OpponentKind::GamblersFallacy => OpponentState::Gambler { counts: vec![0; n] },
            OpponentKind::WinStayLoseShift(_) => OpponentState::Wsls { next: None },
            OpponentKind::FollowTheLeader(_) => {
                OpponentState::Leader { scores: vec![0; n], window: VecDeque::new() }
            }
            OpponentKind::HighestAverage => {
                OpponentState::Average { averages: vec![Average { sum: 0, count: 0 }; n] }
            }
        }
    }
}

/// A biased opponent advanced incrementally round by round.
#[derive(Debug, Clone)]
pub struct Opponent {
    kind: OpponentKind,
    ordering: ActionOrdering,
    state: OpponentState,
}

impl Opponent {
    pub fn new(kind: OpponentKind, ordering: ActionOrdering) -> Self {
        let state = OpponentState::new(kind, ordering.len());
        Opponent { kind, ordering, state }
    }

    pub fn kind(&self) -> OpponentKind {
        self.kind
    }

    pub fn ordering(&self) -> &ActionOrdering {
        &self.ordering
    }

    pub fn state(&self) -> &OpponentState {
        &self.state
    }

    pub fn choose(&self, m: &GameMatrix) -> Action {
        let o = &self.ordering;
        match (&self.state, self.kind) {
            (OpponentState::Myopic { last_ours: None }, _) => o.first(),
            (OpponentState::Myopic { last_ours: Some(a) }, OpponentKind::MyopicWorst) => {
                worst_response(m, o, *a)
            }
            (OpponentState::Myopic { last_ours: Some(a) }, _) => best_response(m, o, *a),
            (OpponentState::Gambler { counts }, _) => {
                let fewest = *counts.iter().min().expect("n >= 1");
                let target = o
                    .earliest((0..counts.len()).filter(|&a| counts[a] == fewest))
                    .expect("minimum exists");
                best_response(m, o, target)
            }
            (OpponentState::Wsls { next }, _) => next.unwrap_or_else(|| o.first()),
            (OpponentState::Leader { scores, window }, _) => {
                if window.is_empty() {
                    o.first()
                } else {
                    o.argmax_by(|b| scores[b])
                }
            }
            (OpponentState::Average { averages }, _) => o.argmax_by(|b| averages[b]),
        }
    }

    pub fn observe(&mut self, m: &GameMatrix, round: Round) {
        let kind = self.kind;
        match &mut self.state {
            OpponentState::Myopic { last_ours } => *last_ours = Some(round.ours),
            OpponentState::Gambler { counts } => counts[round.ours] += 1,
            OpponentState::Wsls { next } => {
                let tie = match kind {
                    OpponentKind::WinStayLoseShift(t) => t,
                    _ => unreachable!("wsls state only built for wsls"),
                };
                let v = m.get(round.theirs, round.ours);
                let stay = v == 1 || (v == 0 && tie == TiePolicy::Stay);
                *next = Some(if stay {
                    round.theirs
                } else {
                    self.ordering.successor(round.theirs)
                });
            }
            OpponentState::Leader { scores, window } => {
                for (b, s) in scores.iter_mut().enumerate() {
                    *s += m.get(b, round.ours) as i64;
                }
                window.push_back(round.ours);
                if let OpponentKind::FollowTheLeader(Window::Last(r)) = kind {
                    if window.len() > r {
                        let dropped = window.pop_front().expect("nonempty");
                        for (b, s) in scores.iter_mut().enumerate() {
                            *s -= m.get(b, dropped) as i64;
                        }
                    }
                }
            }
            OpponentState::Average { averages } => {
                averages[round.theirs].sum += m.get(round.theirs, round.ours) as i64;
                averages[round.theirs].count += 1;
            }
        }
    }
}
