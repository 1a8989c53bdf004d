use super::ellipsoid_phase::EllipsoidPhase;
use super::{BestResponseTable, Decision, ExploitError, Exploiter, ExploiterReport, Observation};
use crate::predictors::ScoreMode;
use crate::Action;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum HapPhase {
    /// Forcing the first `n - 1` switches.
    Responses { switches: usize },
    /// Forcing the switch away from the last action in the opponent's order.
    Last,
    Predict { since: usize },
}

/// Against the highest-average-payoff opponent: drive each of its actions to a
/// negative average in turn, learning a best response from every switch, then
/// predict with the ellipsoid estimator over average scores.
#[derive(Debug, Clone)]
pub struct BeatHap {
    n: usize,
    table: BestResponseTable,
    order: Vec<Action>,
    phase: HapPhase,
    cursor: Action,
    hold_left: usize,
    predictor: EllipsoidPhase,
}

impl BeatHap {
    pub fn new(n: usize, horizon: usize) -> Self {
        BeatHap {
            n,
            table: BestResponseTable::new(n),
            order: Vec::new(),
            phase: HapPhase::Responses { switches: 0 },
            cursor: 0,
            hold_left: 0,
            predictor: EllipsoidPhase::new(n, ScoreMode::Average, None, horizon),
        }
    }

    /// Rounds to hold the next action, given how often the opponent has
    /// already played its current action.
    fn hold_for(&self, count: usize) -> usize {
        match self.phase {
            HapPhase::Responses { .. } => count + 1,
            _ => (3 * count).max(1),
        }
    }
}

impl Exploiter for BeatHap {
    fn act(&mut self, obs: &Observation<'_>) -> Result<Decision, ExploitError> {
        let t = obs.rounds();
        let (own, opp) = (obs.own(), obs.opponent());
        if let HapPhase::Predict { since } = self.phase {
            let predicted = self.predictor.predict(obs)?;
            return Ok(Decision::predicted(self.table.respond(predicted), predicted, "predict", t - since));
        }
        if t == 0 {
            // the opponent's opening action has never been played: hold once
            self.cursor = 0;
            self.hold_left = 0;
            return Ok(Decision::learn(0, "learn-responses", 0));
        }
        if t == 1 {
            self.order.push(opp[0]);
        }
        if t >= 2 && opp[t - 1] != opp[t - 2] {
            // the switch proves our previous action beat its previous one
            self.table.record(opp[t - 2], own[t - 2]);
            self.order.push(opp[t - 1]);
            self.phase = match self.phase {
                HapPhase::Responses { switches } if switches + 2 < self.n => {
                    HapPhase::Responses { switches: switches + 1 }
                }
                HapPhase::Responses { .. } => HapPhase::Last,
                _ => HapPhase::Predict { since: t },
            };
            if let HapPhase::Predict { .. } = self.phase {
                self.order.truncate(self.n);
                let predicted = self.predictor.predict(obs)?;
                return Ok(Decision::predicted(self.table.respond(predicted), predicted, "predict", 0));
            }
            // the round that showed the new action was its first, one-round hold
            self.cursor = own[t - 1];
            self.hold_left = 0;
        }
        if self.hold_left == 0 {
            let current = opp[t - 1];
            let count = opp.iter().filter(|&&b| b == current).count();
            self.cursor = (self.cursor + 1) % self.n;
            self.hold_left = self.hold_for(count);
        }
        self.hold_left -= 1;
        let tag = match self.phase {
            HapPhase::Responses { .. } => "learn-responses",
            _ => "learn-last",
        };
        Ok(Decision::learn(self.cursor, tag, t))
    }

    fn report(&self) -> ExploiterReport {
        ExploiterReport {
            table: self.table.pairs(),
            constraints: self.predictor.constraints().to_vec(),
            cuts: self.predictor.cuts().to_vec(),
            ellipsoid: Some(self.predictor.summary()),
            learned_order: Some(self.order.clone()),
            ..Default::default()
        }
    }
}
