//! Choice rules recomputed from the full history.

use std::cmp::Ordering;

use super::{OpponentKind, TiePolicy, Window};
use crate::game::{ActionOrdering, GameMatrix, History};
use crate::Action;

/// Ordering-earliest action maximizing the payoff against `target`.
pub fn best_response(m: &GameMatrix, o: &ActionOrdering, target: Action) -> Action {
    o.argmax_by(|b| m.get(b, target))
}

/// Ordering-earliest action minimizing the payoff against `target`.
pub fn worst_response(m: &GameMatrix, o: &ActionOrdering, target: Action) -> Action {
    o.argmax_by(|b| -m.get(b, target))
}

pub fn mbr_choose(m: &GameMatrix, o: &ActionOrdering, h: &History) -> Action {
    match h.last() {
        None => o.first(),
        Some(last) => best_response(m, o, last.ours),
    }
}

pub fn mwr_choose(m: &GameMatrix, o: &ActionOrdering, h: &History) -> Action {
    match h.last() {
        None => o.first(),
        Some(last) => worst_response(m, o, last.ours),
    }
}

/// Best response to our least-played action. Ties among the least-played
/// actions are settled by the ordering first, then ties among best responses.
pub fn gambler_choose(m: &GameMatrix, o: &ActionOrdering, h: &History) -> Action {
    let counts = h.our_counts(m.n());
    let fewest = *counts.iter().min().expect("n >= 1");
    let target = o
        .earliest((0..m.n()).filter(|&a| counts[a] == fewest))
        .expect("some action has the minimum count");
    best_response(m, o, target)
}

pub fn wsls_choose(m: &GameMatrix, o: &ActionOrdering, h: &History, tie: TiePolicy) -> Action {
    let Some(last) = h.last() else {
        return o.first();
    };
    let v = m.get(last.theirs, last.ours);
    let stay = v == 1 || (v == 0 && tie == TiePolicy::Stay);
    if stay {
        last.theirs
    } else {
        o.successor(last.theirs)
    }
}

pub fn ftl_choose(m: &GameMatrix, o: &ActionOrdering, h: &History, window: Window) -> Action {
    let rounds = match window {
        Window::Unlimited => h.rounds(),
        Window::Last(r) => h.tail(r),
    };
    if rounds.is_empty() {
        return o.first();
    }
    o.argmax_by(|b| rounds.iter().map(|r| m.get(b, r.ours) as i64).sum::<i64>())
}

/// Exact average as a (sum, count) pair; unplayed actions average 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Average {
    pub sum: i64,
    pub count: i64,
}

impl Average {
    pub fn value(self) -> (i64, i64) {
        if self.count == 0 {
            (0, 1)
        } else {
            (self.sum, self.count)
        }
    }
}

impl PartialOrd for Average {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Average {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = self.value();
        let (c, d) = other.value();
        (a * d).cmp(&(c * b))
    }
}

pub fn hap_choose(m: &GameMatrix, o: &ActionOrdering, h: &History) -> Action {
    let n = m.n();
    let mut avg = vec![Average { sum: 0, count: 0 }; n];
    for r in h.rounds() {
        avg[r.theirs].sum += m.get(r.theirs, r.ours) as i64;
        avg[r.theirs].count += 1;
    }
    o.argmax_by(|b| avg[b])
}

pub fn choose_from_scratch(
    kind: OpponentKind,
    m: &GameMatrix,
    o: &ActionOrdering,
    h: &History,
) -> Action {
    match kind {
        OpponentKind::MyopicBest => mbr_choose(m, o, h),
        OpponentKind::MyopicWorst => mwr_choose(m, o, h),
        OpponentKind::GamblersFallacy => gambler_choose(m, o, h),
        OpponentKind::WinStayLoseShift(tie) => wsls_choose(m, o, h, tie),
        OpponentKind::FollowTheLeader(w) => ftl_choose(m, o, h, w),
        OpponentKind::HighestAverage => hap_choose(m, o, h),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::builtin_game;

    const R: Action = 0;
    const P: Action = 1;
    const S: Action = 2;

    fn rps() -> GameMatrix {
        builtin_game("rps").unwrap()
    }

    fn id3() -> ActionOrdering {
        ActionOrdering::identity(3)
    }

    fn ours(actions: &[Action]) -> History {
        // opponent side is irrelevant for rules that only read our actions
        History::from_pairs(&actions.iter().map(|&a| (a, R)).collect::<Vec<_>>())
    }

    #[test]
    fn mbr_examples() {
        assert_eq!(mbr_choose(&rps(), &id3(), &History::new()), R);
        for o in ActionOrdering::all(3) {
            assert_eq!(mbr_choose(&rps(), &o, &ours(&[R])), P);
        }
        let star = builtin_game("m_star").unwrap();
        let omega = ActionOrdering::identity(6);
        assert_eq!(mbr_choose(&star, &omega, &History::from_pairs(&[(5, 0)])), S);
    }

    #[test]
    fn gambler_examples() {
        assert_eq!(gambler_choose(&rps(), &id3(), &History::new()), P);
        assert_eq!(gambler_choose(&rps(), &id3(), &ours(&[R, P])), R);
        let o: ActionOrdering = "2,0,1".parse().unwrap();
        // equal counts: best response to the ordering's first action (S -> R)
        assert_eq!(gambler_choose(&rps(), &o, &ours(&[R, P, S, S, P, R])), R);
    }

    #[test]
    fn wsls_examples() {
        let win = History::from_pairs(&[(S, R)]);
        let tie = History::from_pairs(&[(R, R)]);
        for policy in [TiePolicy::Shift, TiePolicy::Stay] {
            assert_eq!(wsls_choose(&rps(), &id3(), &win, policy), R);
            assert_eq!(wsls_choose(&rps(), &id3(), &History::new(), policy), R);
        }
        assert_eq!(wsls_choose(&rps(), &id3(), &tie, TiePolicy::Shift), P);
        assert_eq!(wsls_choose(&rps(), &id3(), &tie, TiePolicy::Stay), R);
        // loss from the last action wraps to the first
        let loss = History::from_pairs(&[(R, S)]);
        assert_eq!(wsls_choose(&rps(), &id3(), &loss, TiePolicy::Stay), R);
    }

    /// Scoring oracle for the FTL examples: enumerate every candidate and total
    /// its payoff against each counted round.
    fn ftl_oracle(m: &GameMatrix, o: &ActionOrdering, ours: &[Action]) -> Action {
        if ours.is_empty() {
            return o.first();
        }
        let scores: Vec<i64> = (0..m.n())
            .map(|b| ours.iter().map(|&a| m.get(b, a) as i64).sum())
            .collect();
        let best = *scores.iter().max().unwrap();
        *o.as_slice().iter().find(|&&b| scores[b] == best).unwrap()
    }

    #[test]
    fn ftl_examples() {
        let unlimited = Window::Unlimited;
        assert_eq!(ftl_choose(&rps(), &id3(), &ours(&[R, R, R]), unlimited), P);
        // R scores -1, P scores +1, S scores 0
        assert_eq!(ftl_oracle(&rps(), &id3(), &[R, P]), P);
        assert_eq!(ftl_choose(&rps(), &id3(), &ours(&[R, P]), unlimited), P);
        assert_eq!(ftl_choose(&rps(), &id3(), &ours(&[P, P, P, R]), Window::Last(1)), P);
        assert_eq!(ftl_oracle(&rps(), &id3(), &[R]), P);
    }

    #[test]
    fn hap_examples() {
        let star = builtin_game("m_star").unwrap();
        assert_eq!(hap_choose(&star, &"3,1,0,2,4,5".parse().unwrap(), &History::new()), 3);
        assert_eq!(hap_choose(&rps(), &id3(), &History::from_pairs(&[(P, R)])), P);
        assert_eq!(hap_choose(&rps(), &id3(), &History::from_pairs(&[(S, R)])), R);
    }

    #[test]
    fn mwr_examples() {
        assert_eq!(mwr_choose(&rps(), &id3(), &History::new()), R);
        assert_eq!(mwr_choose(&rps(), &id3(), &ours(&[R])), S);
        let rev = rps().reversed();
        assert_eq!(mwr_choose(&rev, &id3(), &ours(&[R])), P);
    }

    #[test]
    fn average_ordering_is_exact() {
        let a = Average { sum: 1, count: 3 };
        let b = Average { sum: 2, count: 6 };
        assert_eq!(a.cmp(&b), Ordering::Equal);
        assert!(Average { sum: -1, count: 2 } < Average { sum: 0, count: 0 });
        assert!(Average { sum: -1, count: 3 } > Average { sum: -1, count: 2 });
    }
}
