use super::{BestResponseTable, Decision, ExploitError, Exploiter, ExploiterReport, Observation};
use crate::opponents::TiePolicy;
use crate::Action;

/// Cyclic successor in a learned shift order.
fn successor(order: &[Action], a: Action) -> Action {
    match order.iter().position(|&x| x == a) {
        Some(i) => order[(i + 1) % order.len()],
        None => 0,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum ShiftPhase {
    Order,
    Block { action: Action, start: usize },
    Enter,
    Exploit { since: usize },
}

/// Against win-stay lose-shift with ties counted as losses: learn the shift
/// order, then a best response to each action, then stay one step ahead.
#[derive(Debug, Clone)]
pub struct BeatWslsShift {
    n: usize,
    order: Vec<Action>,
    table: BestResponseTable,
    phase: ShiftPhase,
}

impl BeatWslsShift {
    pub fn new(n: usize) -> Self {
        BeatWslsShift {
            n,
            order: Vec::new(),
            table: BestResponseTable::new(n),
            phase: ShiftPhase::Order,
        }
    }

    /// Folds the newest opponent action into the shift order. Once `n - 1`
    /// distinct actions have shown up the last one follows by elimination.
    fn extend_order(&mut self, b: Action) -> bool {
        if self.order.last() != Some(&b) && !self.order.contains(&b) {
            self.order.push(b);
        }
        if self.order.len() + 1 == self.n {
            let missing = (0..self.n).find(|a| !self.order.contains(a)).expect("one left");
            self.order.push(missing);
        }
        self.order.len() == self.n
    }
}

impl Exploiter for BeatWslsShift {
    fn act(&mut self, obs: &Observation<'_>) -> Result<Decision, ExploitError> {
        let t = obs.rounds();
        let opp = obs.opponent();
        if let ShiftPhase::Order = self.phase {
            if t >= 1 && self.extend_order(opp[t - 1]) {
                self.phase = ShiftPhase::Block { action: 0, start: t };
            } else {
                return Ok(Decision::learn(t % self.n, "learn-order", t));
            }
        }
        if let ShiftPhase::Block { action, start } = self.phase {
            let seen = &opp[start..t];
            let k = seen.len();
            let repeat = k >= 2 && seen[k - 1] == seen[k - 2];
            // no repeat so far means every action in the block is distinct
            if repeat || k >= self.n {
                self.table.record(action, seen[k - 1]);
                if action + 1 < self.n {
                    self.phase = ShiftPhase::Block { action: action + 1, start: t };
                } else {
                    self.phase = ShiftPhase::Enter;
                }
            }
        }
        match self.phase {
            ShiftPhase::Order => unreachable!("handled above"),
            ShiftPhase::Block { action, start } => {
                Ok(Decision::learn(action, "learn-responses", t - start))
            }
            ShiftPhase::Enter => {
                // the opponent just won, so it stays
                let b = opp[t - 1];
                self.phase = ShiftPhase::Exploit { since: t + 1 };
                Ok(Decision::predicted(self.table.respond(b), b, "enter", 0))
            }
            ShiftPhase::Exploit { since } => {
                let predicted = successor(&self.order, opp[t - 1]);
                Ok(Decision::predicted(self.table.respond(predicted), predicted, "exploit", t - since))
            }
        }
    }

    fn report(&self) -> ExploiterReport {
        ExploiterReport {
            table: self.table.pairs(),
            learned_order: Some(self.order.clone()),
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum StayPhase {
    Cycle { shifts: usize },
    Hold { action: Action, start: usize },
    Enter,
    Exploit { since: usize },
}

/// Against win-stay lose-shift with ties counted as wins: every shift proves
/// our previous action won, which fills the table on the way round.
#[derive(Debug, Clone)]
pub struct BeatWslsStay {
    n: usize,
    order: Vec<Action>,
    table: BestResponseTable,
    phase: StayPhase,
}

impl BeatWslsStay {
    pub fn new(n: usize) -> Self {
        BeatWslsStay {
            n,
            order: Vec::new(),
            table: BestResponseTable::new(n),
            phase: StayPhase::Cycle { shifts: 0 },
        }
    }
}

impl Exploiter for BeatWslsStay {
    fn act(&mut self, obs: &Observation<'_>) -> Result<Decision, ExploitError> {
        let t = obs.rounds();
        let (own, opp) = (obs.own(), obs.opponent());
        if let StayPhase::Cycle { shifts } = self.phase {
            if t == 1 {
                self.order.push(opp[0]);
            }
            let mut shifts = shifts;
            if t >= 2 && opp[t - 1] != opp[t - 2] {
                self.table.record(opp[t - 2], own[t - 2]);
                if self.order.len() < self.n {
                    self.order.push(opp[t - 1]);
                }
                shifts += 1;
            }
            if shifts == self.n {
                self.phase = StayPhase::Hold { action: own[t - 1], start: t - 1 };
            } else {
                self.phase = StayPhase::Cycle { shifts };
                return Ok(Decision::learn(t % self.n, "learn-cycle", t));
            }
        }
        if let StayPhase::Hold { start, .. } = self.phase {
            if t >= start + 2 && opp[t - 1] == opp[t - 2] {
                self.phase = StayPhase::Enter;
            }
        }
        match self.phase {
            StayPhase::Cycle { .. } => unreachable!("handled above"),
            StayPhase::Hold { action, start } => Ok(Decision::learn(action, "hold", t - start - 1)),
            StayPhase::Enter => {
                let b = opp[t - 1];
                self.phase = StayPhase::Exploit { since: t + 1 };
                Ok(Decision::predicted(self.table.respond(b), b, "enter", 0))
            }
            StayPhase::Exploit { since } => {
                let predicted = successor(&self.order, opp[t - 1]);
                Ok(Decision::predicted(self.table.respond(predicted), predicted, "exploit", t - since))
            }
        }
    }

    fn report(&self) -> ExploiterReport {
        ExploiterReport {
            table: self.table.pairs(),
            learned_order: Some(self.order.clone()),
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Probe {
    /// Playing the probe action and waiting for news.
    Watch,
    /// The opponent showed `b`; one more round tells whether it stayed.
    Confirm(Action),
    /// Playing `b` to force a tie with it.
    Tie(Action),
    /// A tie with `x` just happened; the next opponent action decides.
    Reveal(Action),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum ProbeOutcome {
    Continue(Action),
    Resolved { policy: TiePolicy, rounds: usize },
}

const PROBE_ACTION: Action = 0;

/// Replays the probe over the play so far. The probe holds one action `a`;
/// an opponent action that repeats against `a` (or is the only candidate
/// left) beats `a`, so playing it forces a tie whose aftermath shows the tie
/// policy.
fn run_probe(n: usize, own: &[Action], opp: &[Action]) -> Result<ProbeOutcome, ExploitError> {
    let a = PROBE_ACTION;
    let mut beaten = vec![false; n];
    let mut state = Probe::Watch;
    let watch = |c: Action, beaten: &[bool]| -> Result<Probe, ExploitError> {
        if c == a {
            return Ok(Probe::Reveal(a));
        }
        let candidates: Vec<Action> = (0..n).filter(|&x| x != a && !beaten[x]).collect();
        match candidates.as_slice() {
            [] => Err(ExploitError::ModelMismatch(
                "every action looks beaten by the probe action".into(),
            )),
            [only] if *only == c => Ok(Probe::Tie(c)),
            _ if !candidates.contains(&c) => Err(ExploitError::ModelMismatch(format!(
                "opponent returned to action {c} which already lost"
            ))),
            _ => Ok(Probe::Confirm(c)),
        }
    };
    for k in 0..opp.len() {
        let c = opp[k];
        state = match state {
            Probe::Watch => watch(c, &beaten)?,
            Probe::Confirm(b) if c == b => Probe::Tie(b),
            Probe::Confirm(b) => {
                beaten[b] = true;
                watch(c, &beaten)?
            }
            Probe::Tie(b) if own[k] == b && c == b => Probe::Reveal(b),
            Probe::Tie(b) => {
                return Err(ExploitError::ModelMismatch(format!(
                    "opponent left action {b} before the forced tie"
                )))
            }
            Probe::Reveal(x) => {
                let policy = if c == x { TiePolicy::Stay } else { TiePolicy::Shift };
                return Ok(ProbeOutcome::Resolved { policy, rounds: k + 1 });
            }
        };
    }
    if opp.len() > n + 1 {
        return Err(ExploitError::ModelMismatch("tie policy not revealed in time".into()));
    }
    Ok(ProbeOutcome::Continue(match state {
        Probe::Watch | Probe::Confirm(_) => a,
        Probe::Tie(b) => b,
        Probe::Reveal(x) => x,
    }))
}

/// Finds out which tie policy a win-stay lose-shift opponent uses and hands
/// over to the matching agent.
pub struct WslsAuto {
    n: usize,
    delegate: Option<(usize, TiePolicy, Box<dyn Exploiter>)>,
}

impl WslsAuto {
    pub fn new(n: usize) -> Self {
        WslsAuto { n, delegate: None }
    }
}

impl Exploiter for WslsAuto {
    fn act(&mut self, obs: &Observation<'_>) -> Result<Decision, ExploitError> {
        if self.delegate.is_none() {
            match run_probe(self.n, obs.own(), obs.opponent())? {
                ProbeOutcome::Continue(action) => {
                    return Ok(Decision::learn(action, "probe", obs.rounds()))
                }
                ProbeOutcome::Resolved { policy, rounds } => {
                    let inner: Box<dyn Exploiter> = match policy {
                        TiePolicy::Shift => Box::new(BeatWslsShift::new(self.n)),
                        TiePolicy::Stay => Box::new(BeatWslsStay::new(self.n)),
                    };
                    self.delegate = Some((rounds, policy, inner));
                }
            }
        }
        let (offset, _, inner) = self.delegate.as_mut().expect("set above");
        inner.act(&obs.suffix(*offset))
    }

    fn report(&self) -> ExploiterReport {
        match &self.delegate {
            Some((offset, policy, inner)) => ExploiterReport {
                detected_policy: Some(*policy),
                probe_rounds: Some(*offset),
                ..inner.report()
            },
            None => ExploiterReport::default(),
        }
    }
}
