//! Payoff-blind agents.
//!
//! An agent is built from its spec, the action count and the match length
//! ([`ExploiterSpec::build`]) and then advanced one round at a time through
//! [`Exploiter::act`], which receives an [`Observation`]: our own past actions,
//! the opponent's past actions and `n`. Nothing else about the game ever
//! reaches this module.

mod ellipsoid_phase;
mod ftl;
mod gambler;
mod generic;
mod hap;
mod lex;
mod mbr;
mod scripted;
mod wsls;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::opponents::{OpponentKind, TiePolicy, Window};
use crate::predictors::{CutRecord, MistakeConstraint, PredictorError, ScoreMode};
use crate::Action;

pub use ftl::{opening_holds, opening_len, BeatFtl};
pub use gambler::BeatGambler;
pub use generic::{GenericBrLearner, Repetition};
pub use hap::BeatHap;
pub use lex::LexBaseline;
pub use mbr::BeatMbr;
pub use scripted::{RandomPlay, Scripted};
pub use wsls::{BeatWslsShift, BeatWslsStay, WslsAuto};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExploitError {
    #[error("unknown exploiter `{0}`")]
    UnknownSpec(String),
    #[error("bad parameter in exploiter spec `{0}`")]
    BadParameter(String),
    #[error("internal sequencing error: {0}")]
    Sequencing(String),
    #[error("predictor fault: {0}")]
    Predictor(#[from] PredictorError),
    #[error("model mismatch: {0}")]
    ModelMismatch(String),
    #[error("hypothesis space exhausted: no candidate (matrix, ordering) explains the play")]
    Exhausted,
    #[error("{what} is not available for n = {n}")]
    Capacity { what: &'static str, n: usize },
}

/// Everything an agent is allowed to see.
#[derive(Debug, Clone, Copy)]
pub struct Observation<'a> {
    n: usize,
    own: &'a [Action],
    opponent: &'a [Action],
}

impl<'a> Observation<'a> {
    pub fn new(n: usize, own: &'a [Action], opponent: &'a [Action]) -> Self {
        assert_eq!(own.len(), opponent.len(), "one entry per side per round");
        Observation { n, own, opponent }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Rounds played so far.
    pub fn rounds(&self) -> usize {
        self.own.len()
    }

    pub fn own(&self) -> &'a [Action] {
        self.own
    }

    pub fn opponent(&self) -> &'a [Action] {
        self.opponent
    }

    pub fn last_opponent(&self) -> Option<Action> {
        self.opponent.last().copied()
    }

    /// The same view with the first `offset` rounds dropped.
    pub fn suffix(&self, offset: usize) -> Observation<'a> {
        Observation { n: self.n, own: &self.own[offset..], opponent: &self.opponent[offset..] }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseLabel {
    pub tag: String,
    /// Rounds already spent in this phase before the current one.
    pub step: usize,
    pub learning: bool,
}

impl PhaseLabel {
    pub fn learning(tag: &str, step: usize) -> Self {
        PhaseLabel { tag: tag.to_string(), step, learning: true }
    }

    pub fn exploiting(tag: &str, step: usize) -> Self {
        PhaseLabel { tag: tag.to_string(), step, learning: false }
    }
}

impl fmt::Display for PhaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.tag, self.step)
    }
}

/// What an agent plays this round, and what it expects the opponent to play.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision {
    pub action: Action,
    pub phase: PhaseLabel,
    pub prediction: Option<Action>,
}

impl Decision {
    pub fn learn(action: Action, tag: &str, step: usize) -> Self {
        Decision { action, phase: PhaseLabel::learning(tag, step), prediction: None }
    }

    pub fn predicted(action: Action, prediction: Action, tag: &str, step: usize) -> Self {
        Decision {
            action,
            phase: PhaseLabel::exploiting(tag, step),
            prediction: Some(prediction),
        }
    }
}

/// Responses recorded while learning: `get(a)` is an action that the opponent
/// played in a situation proving it beats `a`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BestResponseTable {
    entries: Vec<Option<Action>>,
}

impl BestResponseTable {
    pub fn new(n: usize) -> Self {
        BestResponseTable { entries: vec![None; n] }
    }

    pub fn record(&mut self, a: Action, response: Action) {
        self.entries[a] = Some(response);
    }

    pub fn get(&self, a: Action) -> Option<Action> {
        self.entries[a]
    }

    /// Recorded response, or action 0 when nothing was learned for `a`; the
    /// fallback only matters when the agent faces an opponent it was not
    /// designed for.
    pub fn respond(&self, a: Action) -> Action {
        self.entries[a].unwrap_or(0)
    }

    pub fn is_total(&self) -> bool {
        self.entries.iter().all(Option::is_some)
    }

    pub fn pairs(&self) -> Vec<(Action, Action)> {
        self.entries
            .iter()
            .enumerate()
            .filter_map(|(a, r)| r.map(|r| (a, r)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EllipsoidSummary {
    pub mode: ScoreMode,
    pub center: Vec<f64>,
    pub log_volume: f64,
    pub mistakes: usize,
}

/// A surviving halving hypothesis in plain data form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypothesisRecord {
    pub kind: OpponentKind,
    pub entries: Vec<i8>,
    pub ordering: Vec<Action>,
}

/// Post-match diagnostics. The arena audits these against the ground truth.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExploiterReport {
    pub table: Vec<(Action, Action)>,
    pub constraints: Vec<MistakeConstraint>,
    pub cuts: Vec<CutRecord>,
    pub ellipsoid: Option<EllipsoidSummary>,
    pub halving_survivors: Option<Vec<HypothesisRecord>>,
    pub learned_order: Option<Vec<Action>>,
    pub detected_policy: Option<TiePolicy>,
    pub probe_rounds: Option<usize>,
}

pub trait Exploiter: Send {
    fn act(&mut self, obs: &Observation<'_>) -> Result<Decision, ExploitError>;

    fn report(&self) -> ExploiterReport {
        ExploiterReport::default()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExploiterSpec {
    BeatMbr,
    BeatGambler,
    BeatWsls(TiePolicy),
    BeatFtl(Window),
    BeatHap,
    LexBaseline,
    GenericBr(Repetition),
    WslsAuto,
    Script(Vec<Action>),
    Random(u64),
}

impl ExploiterSpec {
    /// The only way agents are constructed: from the spec, the action count and
    /// the match length. No matrix, ordering or payoff is available here.
    pub fn build(&self, n: usize, horizon: usize) -> Result<Box<dyn Exploiter>, ExploitError> {
        if let ExploiterSpec::Script(s) = self {
            if let Some(&bad) = s.iter().find(|&&a| a >= n) {
                return Err(ExploitError::BadParameter(format!(
                    "script action {bad} out of range for n = {n}"
                )));
            }
        }
        Ok(match self {
            ExploiterSpec::BeatMbr => Box::new(BeatMbr::new(n)),
            ExploiterSpec::BeatGambler => Box::new(BeatGambler::new(n)),
            ExploiterSpec::BeatWsls(TiePolicy::Shift) => Box::new(BeatWslsShift::new(n)),
            ExploiterSpec::BeatWsls(TiePolicy::Stay) => Box::new(BeatWslsStay::new(n)),
            ExploiterSpec::BeatFtl(w) => Box::new(BeatFtl::new(n, *w, horizon)),
            ExploiterSpec::BeatHap => Box::new(BeatHap::new(n, horizon)),
            ExploiterSpec::LexBaseline => Box::new(LexBaseline::for_actions(n)?),
            ExploiterSpec::GenericBr(rule) => Box::new(GenericBrLearner::new(n, *rule)),
            ExploiterSpec::WslsAuto => Box::new(WslsAuto::new(n)),
            ExploiterSpec::Script(s) => Box::new(Scripted::new(s.clone())),
            ExploiterSpec::Random(seed) => Box::new(RandomPlay::new(n, *seed)),
        })
    }
}

impl fmt::Display for ExploiterSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExploiterSpec::BeatMbr => write!(f, "beat-mbr"),
            ExploiterSpec::BeatGambler => write!(f, "beat-gambler"),
            ExploiterSpec::BeatWsls(TiePolicy::Shift) => write!(f, "beat-wsls-shift"),
            ExploiterSpec::BeatWsls(TiePolicy::Stay) => write!(f, "beat-wsls-stay"),
            ExploiterSpec::BeatFtl(Window::Unlimited) => write!(f, "beat-ftl"),
            ExploiterSpec::BeatFtl(Window::Last(r)) => write!(f, "beat-ftl:{r}"),
            ExploiterSpec::BeatHap => write!(f, "beat-hap"),
            ExploiterSpec::LexBaseline => write!(f, "lex-baseline"),
            ExploiterSpec::GenericBr(Repetition::Constant(c)) => write!(f, "generic-br:{c}"),
            ExploiterSpec::GenericBr(Repetition::Multiple(b)) => write!(f, "generic-br:x{b}"),
            ExploiterSpec::WslsAuto => write!(f, "wsls-auto"),
            ExploiterSpec::Script(s) => {
                let parts: Vec<String> = s.iter().map(|a| a.to_string()).collect();
                write!(f, "script:{}", parts.join(","))
            }
            ExploiterSpec::Random(seed) => write!(f, "random:{seed}"),
        }
    }
}

fn positive(s: &str, whole: &str) -> Result<usize, ExploitError> {
    match s.parse::<usize>() {
        Ok(v) if v >= 1 => Ok(v),
        _ => Err(ExploitError::BadParameter(whole.to_string())),
    }
}

impl FromStr for ExploiterSpec {
    type Err = ExploitError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ExploitError::BadParameter(s.to_string());
        Ok(match s {
            "beat-mbr" => ExploiterSpec::BeatMbr,
            "beat-gambler" => ExploiterSpec::BeatGambler,
            "beat-wsls-shift" => ExploiterSpec::BeatWsls(TiePolicy::Shift),
            "beat-wsls-stay" => ExploiterSpec::BeatWsls(TiePolicy::Stay),
            "beat-ftl" => ExploiterSpec::BeatFtl(Window::Unlimited),
            "beat-hap" => ExploiterSpec::BeatHap,
            "lex-baseline" => ExploiterSpec::LexBaseline,
            "wsls-auto" => ExploiterSpec::WslsAuto,
            _ => {
                let (head, arg) = s.split_once(':').ok_or_else(|| {
                    ExploitError::UnknownSpec(s.to_string())
                })?;
                match head {
                    "beat-ftl" => ExploiterSpec::BeatFtl(Window::Last(positive(arg, s)?)),
                    "generic-br" => match arg.strip_prefix('x') {
                        Some(b) => ExploiterSpec::GenericBr(Repetition::Multiple(positive(b, s)?)),
                        None => ExploiterSpec::GenericBr(Repetition::Constant(positive(arg, s)?)),
                    },
                    "script" => {
                        let actions = arg
                            .split(',')
                            .map(|p| p.trim().parse::<Action>().map_err(|_| bad()))
                            .collect::<Result<Vec<_>, _>>()?;
                        if actions.is_empty() {
                            return Err(bad());
                        }
                        ExploiterSpec::Script(actions)
                    }
                    "random" => ExploiterSpec::Random(arg.parse().map_err(|_| bad())?),
                    _ => return Err(ExploitError::UnknownSpec(s.to_string())),
                }
            }
        })
    }
}
