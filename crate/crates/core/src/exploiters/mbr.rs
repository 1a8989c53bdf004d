use super::{BestResponseTable, Decision, ExploitError, Exploiter, ExploiterReport, Observation};

/// Learns a best response to every action by playing each once, then answers
/// the reply the myopic opponent is about to make.
#[derive(Debug, Clone)]
pub struct BeatMbr {
    n: usize,
    table: BestResponseTable,
}

impl BeatMbr {
    pub fn new(n: usize) -> Self {
        BeatMbr { n, table: BestResponseTable::new(n) }
    }
}

impl Exploiter for BeatMbr {
    fn act(&mut self, obs: &Observation<'_>) -> Result<Decision, ExploitError> {
        let t = obs.rounds();
        let n = self.n;
        // the reply in round t answers our action from round t - 1
        if (2..=n + 1).contains(&t) {
            self.table.record(obs.own()[t - 2], obs.opponent()[t - 1]);
        }
        if t < n {
            return Ok(Decision::learn(t, "learn", t));
        }
        if t == n {
            return Ok(Decision::learn(0, "learn", t));
        }
        let last = *obs.own().last().ok_or_else(|| {
            ExploitError::Sequencing("exploit phase reached without history".into())
        })?;
        let predicted = self.table.respond(last);
        Ok(Decision::predicted(self.table.respond(predicted), predicted, "exploit", t - n - 1))
    }

    fn report(&self) -> ExploiterReport {
        ExploiterReport { table: self.table.pairs(), ..Default::default() }
    }
}
