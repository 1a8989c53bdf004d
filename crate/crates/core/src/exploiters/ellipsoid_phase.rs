use super::{EllipsoidSummary, ExploitError, Observation};
use crate::predictors::{
    default_margin, CutRecord, EllipsoidState, MistakeConstraint, ScoreContext, ScoreMode,
};
use crate::Action;

/// Cuts allowed per observed round.
const MAX_CUTS_PER_ROUND: usize = 1024;

/// Shared prediction loop for the ellipsoid-driven agents: predict from the
/// current center, then cut with the preferences the opponent's choices
/// revealed.
///
/// The chosen action outscores every other action at the perturbed true
/// matrix, so each pair (chosen, other) is a valid constraint. A wrong
/// prediction always violates the (chosen, predicted) pair. Every revealed
/// pair is kept, and the center is cut until it satisfies all of them again,
/// including on correctly predicted rounds.
#[derive(Debug, Clone)]
pub(crate) struct EllipsoidPhase {
    state: EllipsoidState,
    window: Option<usize>,
    margin: f64,
    pending: Option<(usize, Action, ScoreContext)>,
    /// Every preference revealed so far.
    revealed: Vec<MistakeConstraint>,
    /// The center satisfies every entry of `revealed`.
    consistent: bool,
    constraints: Vec<MistakeConstraint>,
    cuts: Vec<CutRecord>,
}

impl EllipsoidPhase {
    pub fn new(n: usize, mode: ScoreMode, window: Option<usize>, horizon: usize) -> Self {
        EllipsoidPhase {
            state: EllipsoidState::new(n, mode),
            window,
            margin: default_margin(n, mode, horizon),
            pending: None,
            revealed: Vec::new(),
            consistent: true,
            constraints: Vec::new(),
            cuts: Vec::new(),
        }
    }

    /// Settles the previous prediction against what the opponent actually did.
    fn settle(&mut self, obs: &Observation<'_>) -> Result<(), ExploitError> {
        let Some((round, predicted, context)) = self.pending.take() else {
            return Ok(());
        };
        if obs.rounds() != round + 1 {
            return Err(ExploitError::Sequencing(format!(
                "prediction made for round {} settled after {} rounds",
                round + 1,
                obs.rounds()
            )));
        }
        let actual = obs.opponent()[round];
        let n = obs.n();
        let fresh = self.revealed.len();
        self.revealed.extend((0..n)
            .filter(|&k| k != actual)
            .map(|k| MistakeConstraint::new(n, &context, k, actual, self.margin))
            .filter(|c| c.weights.iter().any(|&w| w != 0.0)));
        let pairs = &self.revealed[fresh..];
        if actual != predicted && !pairs.iter().any(|c| c.predicted == predicted) {
            return Err(ExploitError::Sequencing("mistake without a usable constraint".into()));
        }
        // While the center satisfies every older preference only the new ones
        // need checking; after a cut the whole history is rescanned.
        let mut from = if self.consistent { fresh } else { 0 };
        self.consistent = false;
        for _ in 0..MAX_CUTS_PER_ROUND {
            let worst = self.revealed[from..]
                .iter()
                .map(|c| (c.slack(self.state.center()), c))
                .min_by(|a, b| a.0.total_cmp(&b.0));
            match worst {
                Some((slack, c)) if slack < 0.0 => {
                    let c = c.clone();
                    let cut = self.state.update(&c)?;
                    self.constraints.push(c);
                    self.cuts.push(cut);
                    from = 0;
                }
                _ => {
                    self.consistent = true;
                    break;
                }
            }
        }
        Ok(())
    }

    pub fn predict(&mut self, obs: &Observation<'_>) -> Result<Action, ExploitError> {
        self.settle(obs)?;
        let context = ScoreContext::from_play(
            self.state.mode(),
            obs.n(),
            obs.own(),
            obs.opponent(),
            self.window,
        );
        let predicted = self.state.predict(&context);
        self.pending = Some((obs.rounds(), predicted, context));
        Ok(predicted)
    }

    pub fn constraints(&self) -> &[MistakeConstraint] {
        &self.constraints
    }

    pub fn cuts(&self) -> &[CutRecord] {
        &self.cuts
    }

    pub fn summary(&self) -> EllipsoidSummary {
        EllipsoidSummary {
            mode: self.state.mode(),
            center: self.state.center().to_vec(),
            log_volume: self.state.log_volume(),
            mistakes: self.state.mistakes(),
        }
    }
}
