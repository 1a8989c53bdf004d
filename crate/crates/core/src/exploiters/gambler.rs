use super::{BestResponseTable, Decision, ExploitError, Exploiter, ExploiterReport, Observation};
use crate::Action;

/// Steers the gambler's-fallacy opponent into a fixed counter and then
/// answers that counter forever.
#[derive(Debug, Clone)]
pub struct BeatGambler {
    n: usize,
    table: BestResponseTable,
    br_last: Option<Action>,
    br_br_last: Option<Action>,
}

impl BeatGambler {
    pub fn new(n: usize) -> Self {
        BeatGambler { n, table: BestResponseTable::new(n), br_last: None, br_br_last: None }
    }

    fn second_pass(&self) -> Vec<Action> {
        let mut order: Vec<Action> = (0..self.n).collect();
        if let Some(b) = self.br_last {
            order.swap(b, self.n - 1);
        }
        order
    }
}

impl Exploiter for BeatGambler {
    fn act(&mut self, obs: &Observation<'_>) -> Result<Decision, ExploitError> {
        let t = obs.rounds();
        let n = self.n;
        if t == n {
            let b = obs.opponent()[n - 1];
            self.br_last = Some(b);
            self.table.record(n - 1, b);
        }
        if t == 2 * n {
            let b = obs.opponent()[2 * n - 1];
            self.br_br_last = Some(b);
            let br_last = self.br_last.ok_or_else(|| {
                ExploitError::Sequencing("second pass finished before the first".into())
            })?;
            self.table.record(br_last, b);
        }
        if t < n {
            return Ok(Decision::learn(t, "first-pass", t));
        }
        if t < 2 * n {
            return Ok(Decision::learn(self.second_pass()[t - n], "second-pass", t - n));
        }
        if t < 3 * n - 1 {
            return Ok(Decision::learn(t - 2 * n, "settle", t - 2 * n));
        }
        match (self.br_last, self.br_br_last) {
            (Some(p), Some(a)) => Ok(Decision::predicted(a, p, "exploit", t + 1 - 3 * n)),
            _ => Err(ExploitError::Sequencing("exploit phase reached without a table".into())),
        }
    }

    fn report(&self) -> ExploiterReport {
        ExploiterReport { table: self.table.pairs(), ..Default::default() }
    }
}
