use super::{Decision, ExploitError, Exploiter, ExploiterReport, Observation};
use crate::game::{builtin_game, enumerate_antisymmetric, ActionOrdering, GameMatrix};
use crate::opponents::rules::best_response;
use crate::Action;

/// Plays as if the first (matrix, ordering) pair consistent with a myopic
/// best responder were the truth. Kept as a cautionary baseline: consistency
/// with everything observed is not enough to win.
#[derive(Debug, Clone)]
pub struct LexBaseline {
    candidates: Vec<(GameMatrix, ActionOrdering)>,
    checked: usize,
}

impl LexBaseline {
    /// Candidate pairs are ranked by matrix entries (row-major, -1 < 0 < 1)
    /// and then by ordering.
    pub fn new(mut matrices: Vec<GameMatrix>) -> Self {
        matrices.sort_by(|a, b| a.entries().cmp(b.entries()));
        matrices.dedup_by(|a, b| a.entries() == b.entries());
        let n = matrices.first().map_or(0, GameMatrix::n);
        let orderings = ActionOrdering::all(n);
        let candidates = matrices
            .into_iter()
            .flat_map(|m| orderings.iter().map(move |o| (m.clone(), o.clone())))
            .collect();
        LexBaseline { candidates, checked: 0 }
    }

    /// Every permissible matrix for `n <= 4`; the two built-in six-action
    /// tables for `n = 6`.
    pub fn for_actions(n: usize) -> Result<Self, ExploitError> {
        let matrices = match n {
            3 | 4 => enumerate_antisymmetric(n)
                .into_iter()
                .filter(|m| m.validate().passed())
                .collect(),
            6 => ["m_lex", "m_star"]
                .iter()
                .map(|name| builtin_game(name).expect("built-in game"))
                .collect(),
            _ => return Err(ExploitError::Capacity { what: "lexicographic baseline", n }),
        };
        Ok(Self::new(matrices))
    }

    pub fn survivors(&self) -> usize {
        self.candidates.len()
    }

    pub fn hypothesis(&self) -> Option<&(GameMatrix, ActionOrdering)> {
        self.candidates.first()
    }
}

fn mbr_prediction(m: &GameMatrix, o: &ActionOrdering, own: &[Action], round: usize) -> Action {
    match round {
        0 => o.first(),
        k => best_response(m, o, own[k - 1]),
    }
}

impl Exploiter for LexBaseline {
    fn act(&mut self, obs: &Observation<'_>) -> Result<Decision, ExploitError> {
        let t = obs.rounds();
        let (own, opp) = (obs.own(), obs.opponent());
        for (k, &theirs) in opp.iter().enumerate().skip(self.checked) {
            self.candidates.retain(|(m, o)| mbr_prediction(m, o, own, k) == theirs);
        }
        self.checked = t;
        let (m, o) = self.candidates.first().ok_or(ExploitError::Exhausted)?;
        let predicted = mbr_prediction(m, o, own, t);
        // best response under the hypothesis; equal replies go to the highest index
        // (max_by_key keeps the last of equal maxima)
        let reply = (0..m.n()).max_by_key(|&b| m.get(b, predicted)).expect("n >= 1");
        Ok(Decision::predicted(reply, predicted, "hypothesis", t))
    }

    fn report(&self) -> ExploiterReport {
        ExploiterReport {
            learned_order: self.hypothesis().map(|(_, o)| o.as_slice().to_vec()),
            ..Default::default()
        }
    }
}
