use super::{
    BestResponseTable, Decision, ExploitError, Exploiter, ExploiterReport, HypothesisRecord,
    Observation,
};
use crate::game::Round;
use crate::opponents::OpponentKind;
use crate::predictors::{HypothesisSpace, DEFAULT_ENUMERATION_LIMIT};
use crate::Action;

/// How long each action is held while learning.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Repetition {
    /// Every action `c` times in a row.
    Constant(usize),
    /// The first action `b` times, each later one `b` times the rounds so far.
    Multiple(usize),
}

impl Repetition {
    pub fn holds(self, n: usize) -> Vec<usize> {
        match self {
            Repetition::Constant(c) => vec![c; n],
            Repetition::Multiple(b) => {
                let mut holds = Vec::with_capacity(n);
                let mut total = 0;
                for _ in 0..n {
                    let h = if total == 0 { b } else { b * total };
                    holds.push(h);
                    total += h;
                }
                holds
            }
        }
    }

    /// Most rounds the learning phase can fail to win.
    pub fn learning_bound(self, n: usize) -> usize {
        self.holds(n).iter().sum::<usize>() + 1
    }
}

/// Learns a best response to every action by holding it until the opponent
/// must answer it. Afterwards predicts with the halving algorithm when the
/// hypothesis space is small enough to enumerate, otherwise expects the
/// opponent to repeat itself.
pub struct GenericBrLearner {
    table: BestResponseTable,
    schedule: Vec<Action>,
    probes: Vec<(usize, Action)>,
    space: Option<HypothesisSpace>,
    seen: usize,
}

impl GenericBrLearner {
    pub fn new(n: usize, rule: Repetition) -> Self {
        let mut schedule = Vec::new();
        let mut probes = Vec::new();
        for (a, hold) in rule.holds(n).into_iter().enumerate() {
            schedule.extend(std::iter::repeat_n(a, hold));
            probes.push((schedule.len(), a));
        }
        schedule.push(n - 1);
        let window = match rule {
            Repetition::Constant(c) => Some(c),
            Repetition::Multiple(_) => None,
        };
        let space = if n <= DEFAULT_ENUMERATION_LIMIT {
            HypothesisSpace::new(&OpponentKind::family_with_window(window), n).ok()
        } else {
            None
        };
        GenericBrLearner { table: BestResponseTable::new(n), schedule, probes, space, seen: 0 }
    }

    pub fn learning_len(&self) -> usize {
        self.schedule.len()
    }
}

impl Exploiter for GenericBrLearner {
    fn act(&mut self, obs: &Observation<'_>) -> Result<Decision, ExploitError> {
        let t = obs.rounds();
        let (own, opp) = (obs.own(), obs.opponent());
        if t >= 1 {
            if let Some(&(_, a)) = self.probes.iter().find(|&&(round, _)| round == t - 1) {
                self.table.record(a, opp[t - 1]);
            }
        }
        if let Some(space) = &mut self.space {
            let mut failed = false;
            for k in self.seen..t {
                if space.update(Round { ours: own[k], theirs: opp[k] }).is_err() {
                    failed = true;
                    break;
                }
            }
            if failed || space.is_empty() {
                self.space = None;
            }
        }
        self.seen = t;
        if t < self.schedule.len() {
            return Ok(Decision::learn(self.schedule[t], "hold", t));
        }
        let predicted = match &self.space {
            Some(space) => space.predict()?,
            None => opp[t - 1],
        };
        Ok(Decision::predicted(
            self.table.respond(predicted),
            predicted,
            "predict",
            t - self.schedule.len(),
        ))
    }

    fn report(&self) -> ExploiterReport {
        ExploiterReport {
            table: self.table.pairs(),
            halving_survivors: self.space.as_ref().map(|s| {
                s.hypotheses()
                    .iter()
                    .map(|h| HypothesisRecord {
                        kind: h.kind(),
                        entries: h.matrix.entries().to_vec(),
                        ordering: h.ordering().as_slice().to_vec(),
                    })
                    .collect()
            }),
            ..Default::default()
        }
    }
}
