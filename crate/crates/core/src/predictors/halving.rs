use std::sync::Arc;

use rayon::prelude::*;

use super::PredictorError;
use crate::game::{enumerate_antisymmetric, ActionOrdering, GameMatrix, Round};
use crate::opponents::{Opponent, OpponentKind};
use crate::Action;

/// Largest action count enumerated without an explicit override.
pub const DEFAULT_ENUMERATION_LIMIT: usize = 3;

// Below this many survivors the serial path is faster than spawning work.
const PARALLEL_MIN: usize = 2048;

#[derive(Debug, Clone)]
pub struct Hypothesis {
    pub matrix: Arc<GameMatrix>,
    opponent: Opponent,
}

impl Hypothesis {
    pub fn kind(&self) -> OpponentKind {
        self.opponent.kind()
    }

    pub fn ordering(&self) -> &ActionOrdering {
        self.opponent.ordering()
    }

    fn predict(&self) -> Action {
        self.opponent.choose(&self.matrix)
    }

    pub fn is(&self, kind: OpponentKind, m: &GameMatrix, o: &ActionOrdering) -> bool {
        self.kind() == kind && self.matrix.entries() == m.entries() && self.ordering() == o
    }
}

/// What one round did to the space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HalvingStep {
    pub predicted: Action,
    pub observed: Action,
    pub before: usize,
    pub after: usize,
}

impl HalvingStep {
    pub fn mistake(&self) -> bool {
        self.predicted != self.observed
    }
}

/// Every (strategy, matrix, ordering) triple still consistent with play.
///
/// Matrices range over all antisymmetric zero-diagonal tables, since the game
/// is known to be symmetric; that is 3^(n(n-1)/2) tables per strategy and
/// ordering.
#[derive(Debug, Clone)]
pub struct HypothesisSpace {
    n: usize,
    entries: Vec<Hypothesis>,
    initial: usize,
    mistakes: usize,
}

impl HypothesisSpace {
    pub fn new(family: &[OpponentKind], n: usize) -> Result<Self, PredictorError> {
        Self::with_limit(family, n, DEFAULT_ENUMERATION_LIMIT)
    }

    pub fn with_limit(
        family: &[OpponentKind],
        n: usize,
        limit: usize,
    ) -> Result<Self, PredictorError> {
        if n < 3 {
            return Err(PredictorError::TooFewActions(n));
        }
        if n > limit {
            return Err(PredictorError::Capacity { n, limit });
        }
        let matrices: Vec<Arc<GameMatrix>> =
            enumerate_antisymmetric(n).into_iter().map(Arc::new).collect();
        let orderings = ActionOrdering::all(n);
        let mut entries = Vec::with_capacity(family.len() * matrices.len() * orderings.len());
        for &kind in family {
            for m in &matrices {
                for o in &orderings {
                    entries.push(Hypothesis {
                        matrix: Arc::clone(m),
                        opponent: Opponent::new(kind, o.clone()),
                    });
                }
            }
        }
        let initial = entries.len();
        Ok(HypothesisSpace { n, entries, initial, mistakes: 0 })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn initial_len(&self) -> usize {
        self.initial
    }

    pub fn mistakes(&self) -> usize {
        self.mistakes
    }

    /// `ceil(log2(initial size))`.
    pub fn mistake_bound(&self) -> usize {
        (self.initial as f64).log2().ceil() as usize
    }

    pub fn hypotheses(&self) -> &[Hypothesis] {
        &self.entries
    }

    pub fn contains(&self, kind: OpponentKind, m: &GameMatrix, o: &ActionOrdering) -> bool {
        self.entries.iter().any(|h| h.is(kind, m, o))
    }

    fn predictions(&self) -> Vec<Action> {
        if self.entries.len() >= PARALLEL_MIN {
            self.entries.par_iter().map(Hypothesis::predict).collect()
        } else {
            self.entries.iter().map(Hypothesis::predict).collect()
        }
    }

    fn plurality(&self, predictions: &[Action]) -> Result<Action, PredictorError> {
        if predictions.is_empty() {
            return Err(PredictorError::ModelMismatch);
        }
        let mut votes = vec![0usize; self.n];
        for &p in predictions {
            votes[p] += 1;
        }
        let mut best = 0;
        for a in 1..self.n {
            if votes[a] > votes[best] {
                best = a;
            }
        }
        Ok(best)
    }

    /// Plurality vote of the survivors; ties go to the lowest action index.
    pub fn predict(&self) -> Result<Action, PredictorError> {
        self.plurality(&self.predictions())
    }

    /// Drops every hypothesis that mispredicted `round.theirs` and advances the
    /// survivors past the round.
    pub fn update(&mut self, round: Round) -> Result<HalvingStep, PredictorError> {
        let predictions = self.predictions();
        let predicted = self.plurality(&predictions)?;
        let before = self.entries.len();
        let mut keep = predictions.iter().map(|&p| p == round.theirs);
        self.entries.retain(|_| keep.next().expect("one flag per entry"));
        for h in &mut self.entries {
            let m = Arc::clone(&h.matrix);
            h.opponent.observe(&m, round);
        }
        if predicted != round.theirs {
            self.mistakes += 1;
        }
        Ok(HalvingStep { predicted, observed: round.theirs, before, after: self.entries.len() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{builtin_game, random_ordering, History};
    use crate::opponents::choose_from_scratch;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sizes() {
        let mbr = HypothesisSpace::new(&[OpponentKind::MyopicBest], 3).unwrap();
        assert_eq!(mbr.len(), 162);
        assert_eq!(mbr.mistake_bound(), 8);
        let two = HypothesisSpace::new(
            &[OpponentKind::MyopicBest, OpponentKind::GamblersFallacy],
            3,
        )
        .unwrap();
        assert_eq!(two.len(), 324);
    }

    #[test]
    fn size_guards() {
        assert_eq!(
            HypothesisSpace::new(&[OpponentKind::MyopicBest], 2).unwrap_err(),
            PredictorError::TooFewActions(2)
        );
        assert_eq!(
            HypothesisSpace::new(&[OpponentKind::MyopicBest], 4).unwrap_err(),
            PredictorError::Capacity { n: 4, limit: 3 }
        );
        assert_eq!(
            HypothesisSpace::with_limit(&[OpponentKind::MyopicBest], 4, 4).unwrap().len(),
            729 * 24
        );
    }

    #[test]
    fn empty_space_is_a_mismatch() {
        let mut space = HypothesisSpace::new(&[OpponentKind::MyopicBest], 3).unwrap();
        // an MBR answers the same last action the same way every time
        space.update(Round { ours: 0, theirs: 0 }).unwrap();
        space.update(Round { ours: 0, theirs: 1 }).unwrap();
        space.update(Round { ours: 0, theirs: 2 }).unwrap();
        assert!(space.is_empty());
        assert_eq!(space.predict().unwrap_err(), PredictorError::ModelMismatch);
    }

    #[test]
    fn single_survivor_and_unanimity() {
        let rps = builtin_game("rps").unwrap();
        let o = ActionOrdering::identity(3);
        let mut space = HypothesisSpace::new(&[OpponentKind::MyopicBest], 3).unwrap();
        let mut opp = Opponent::new(OpponentKind::MyopicBest, o.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let theirs = opp.choose(&rps);
            let ours = rng.gen_range(0..3);
            space.update(Round { ours, theirs }).unwrap();
            opp.observe(&rps, Round { ours, theirs });
        }
        // the survivors now agree on every possible continuation
        let p = space.predict().unwrap();
        assert!(space.hypotheses().iter().all(|h| h.predict() == p));
        assert!(space.contains(OpponentKind::MyopicBest, &rps, &o));
    }

    #[test]
    fn true_triple_survives_and_mistakes_halve() {
        for seed in 0..10u64 {
            let m = crate::game::generate_permissible(3, seed).unwrap();
            let o = random_ordering(3, seed);
            let family = [OpponentKind::MyopicBest, OpponentKind::GamblersFallacy];
            for kind in family {
                let mut space = HypothesisSpace::new(&family, 3).unwrap();
                let mut h = History::new();
                let mut rng = ChaCha8Rng::seed_from_u64(seed + 100);
                for _ in 0..300 {
                    let theirs = choose_from_scratch(kind, &m, &o, &h);
                    let ours = rng.gen_range(0..3);
                    let step = space.update(Round { ours, theirs }).unwrap();
                    if step.mistake() {
                        assert!(step.after * 2 <= step.before);
                    }
                    assert!(space.contains(kind, &m, &o));
                    h.push(Round { ours, theirs });
                }
                assert!(space.mistakes() <= space.mistake_bound());
            }
        }
    }
}
