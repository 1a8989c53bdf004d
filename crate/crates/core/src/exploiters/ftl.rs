use super::ellipsoid_phase::EllipsoidPhase;
use super::{BestResponseTable, Decision, ExploitError, Exploiter, ExploiterReport, Observation};
use crate::opponents::Window;
use crate::predictors::ScoreMode;
use crate::Action;

/// Opening for follow-the-leader: hold each action long enough that the
/// leader must become one of its best responses, then predict the leader with
/// the ellipsoid estimator.
#[derive(Debug, Clone)]
pub struct BeatFtl {
    table: BestResponseTable,
    opening: Vec<Action>,
    /// `(round index, action)`: the opponent's play at that round answers `action`.
    probes: Vec<(usize, Action)>,
    predictor: EllipsoidPhase,
}

/// How many times each action is held during the opening.
pub fn opening_holds(n: usize, window: Window) -> Vec<usize> {
    match window {
        // each hold outweighs everything played before it
        Window::Unlimited => (0..n as u32).map(|i| 3usize.pow(i)).collect(),
        Window::Last(r) => vec![r; n],
    }
}

/// Opening length: every hold plus one extra round of the last action.
pub fn opening_len(n: usize, window: Window) -> usize {
    opening_holds(n, window).iter().sum::<usize>() + 1
}

impl BeatFtl {
    pub fn new(n: usize, window: Window, horizon: usize) -> Self {
        let mut opening = Vec::new();
        let mut probes = Vec::new();
        for (a, hold) in opening_holds(n, window).into_iter().enumerate() {
            opening.extend(std::iter::repeat_n(a, hold));
            probes.push((opening.len(), a));
        }
        opening.push(n - 1);
        BeatFtl {
            table: BestResponseTable::new(n),
            opening,
            probes,
            predictor: EllipsoidPhase::new(n, ScoreMode::Net, window.limit(), horizon),
        }
    }
}

impl Exploiter for BeatFtl {
    fn act(&mut self, obs: &Observation<'_>) -> Result<Decision, ExploitError> {
        let t = obs.rounds();
        if t >= 1 {
            if let Some(&(_, a)) = self.probes.iter().find(|&&(round, _)| round == t - 1) {
                self.table.record(a, obs.opponent()[t - 1]);
            }
        }
        if t < self.opening.len() {
            return Ok(Decision::learn(self.opening[t], "opening", t));
        }
        let predicted = self.predictor.predict(obs)?;
        Ok(Decision::predicted(
            self.table.respond(predicted),
            predicted,
            "predict",
            t - self.opening.len(),
        ))
    }

    fn report(&self) -> ExploiterReport {
        ExploiterReport {
            table: self.table.pairs(),
            constraints: self.predictor.constraints().to_vec(),
            cuts: self.predictor.cuts().to_vec(),
            ellipsoid: Some(self.predictor.summary()),
            ..Default::default()
        }
    }
}
