//! Matches between a biased opponent and a payoff-blind agent.
//!
//! The arena is the only place that holds the true matrix and the opponent's
//! ordering at the same time as an agent. Agents receive [`Observation`]
//! views built from action sequences; payoffs are computed here and recorded
//! in the transcript.

mod audit;
mod bounds;
mod checks;
mod suite;
mod transcript;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use thiserror::Error;

use crate::exploiters::{ExploitError, ExploiterReport, ExploiterSpec, Observation};
use crate::game::{
    builtin_game, generate_permissible, parse_game, ActionOrdering, GameError, GameMatrix, Round,
    BUILTIN_NAMES,
};
use crate::opponents::{Opponent, OpponentKind, OpponentSpec, SpecError};
use crate::Action;

pub use audit::{audit_ground_truth, ghost_point, AuditOutcome, AuditReport};
pub use bounds::{evaluate_expr, verify_bound, BoundReport, BoundSpec, BoundVars};
pub use checks::{
    check_counterexample, check_enumeration_oracle, check_generator, check_halving,
    check_indistinguishable, counterexample_config, indistinguishable_scripts, indistinguishable_streams, CheckResult,
    GOLDEN_COUNTEREXAMPLE_ROUNDS,
};
pub use suite::{
    default_suite, parse_suite, run_suite, CheckName, MatchFailure, RowResult, SuitePlan, SuiteRow,
    SuiteSettings, SuiteSummary, THREADS_VAR,
};
pub use transcript::{MatchTranscript, RoundRecord, TranscriptError, CSV_HEADER};

#[derive(Debug, Error)]
pub enum ArenaError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Opponent(#[from] SpecError),
    #[error(transparent)]
    Exploiter(#[from] ExploitError),
    #[error("cannot read game file {path}: {message}")]
    GameFile { path: String, message: String },
    #[error("rounds must be at least 1")]
    NoRounds,
}

/// Where the match's payoff matrix comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GameSource {
    Builtin(String),
    File(PathBuf),
    /// A random permissible game with `n` actions, drawn from the match seed.
    Random(usize),
}

impl GameSource {
    pub fn load(&self, seed: u64) -> Result<GameMatrix, ArenaError> {
        match self {
            GameSource::Builtin(name) => Ok(builtin_game(name)?),
            GameSource::File(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| ArenaError::GameFile {
                    path: path.display().to_string(),
                    message: e.to_string(),
                })?;
                parse_game(&text).map_err(|e| ArenaError::GameFile {
                    path: path.display().to_string(),
                    message: e.to_string(),
                })
            }
            GameSource::Random(n) => Ok(generate_permissible(*n, seed)?),
        }
    }
}

impl fmt::Display for GameSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GameSource::Builtin(name) => write!(f, "{name}"),
            GameSource::File(path) => write!(f, "{}", path.display()),
            GameSource::Random(n) => write!(f, "random:{n}"),
        }
    }
}

impl FromStr for GameSource {
    type Err = ArenaError;

    /// Built-in names win over paths; `random:N` draws a game.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if BUILTIN_NAMES.contains(&s) {
            return Ok(GameSource::Builtin(s.to_string()));
        }
        if let Some(n) = s.strip_prefix("random:") {
            let n: usize = n.parse().map_err(|_| {
                ArenaError::Game(GameError::Malformed(format!("bad action count in `{s}`")))
            })?;
            if n < 3 {
                return Err(ArenaError::Game(GameError::TooFewActions(n)));
            }
            return Ok(GameSource::Random(n));
        }
        Ok(GameSource::File(PathBuf::from(s)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchConfig {
    pub game: GameSource,
    pub opponent: OpponentSpec,
    pub exploiter: ExploiterSpec,
    pub rounds: usize,
    pub seed: u64,
}

impl MatchConfig {
    pub fn new(
        game: GameSource,
        opponent: OpponentSpec,
        exploiter: ExploiterSpec,
        rounds: usize,
        seed: u64,
    ) -> Self {
        MatchConfig { game, opponent, exploiter, rounds, seed }
    }
}

/// A finished match plus everything needed to audit it.
#[derive(Debug, Clone)]
pub struct MatchOutcome {
    pub transcript: MatchTranscript,
    pub report: ExploiterReport,
    pub matrix: GameMatrix,
    pub ordering: ActionOrdering,
    pub kind: OpponentKind,
}

/// Plays a match against an already resolved game and ordering.
pub fn play_match(
    matrix: &GameMatrix,
    kind: OpponentKind,
    ordering: &ActionOrdering,
    exploiter: &ExploiterSpec,
    rounds: usize,
) -> Result<(MatchTranscript, ExploiterReport), ArenaError> {
    if rounds == 0 {
        return Err(ArenaError::NoRounds);
    }
    let n = matrix.n();
    if ordering.len() != n {
        return Err(SpecError::OrderingSize { got: ordering.len(), n }.into());
    }
    let mut agent = exploiter.build(n, rounds)?;
    let mut opponent = Opponent::new(kind, ordering.clone());
    let mut ours: Vec<Action> = Vec::with_capacity(rounds);
    let mut theirs: Vec<Action> = Vec::with_capacity(rounds);
    let mut transcript = MatchTranscript::new(n, kind, ordering, exploiter, rounds);
    for round in 1..=rounds {
        let decision = match agent.act(&Observation::new(n, &ours, &theirs)) {
            Ok(d) if d.action < n => d,
            Ok(d) => {
                transcript.fault = Some(format!(
                    "round {round}: agent chose action {} outside 0..{n}",
                    d.action
                ));
                break;
            }
            Err(e) => {
                transcript.fault = Some(format!("round {round}: {e}"));
                break;
            }
        };
        // both sides commit before either sees this round
        let reply = opponent.choose(matrix);
        opponent.observe(matrix, Round { ours: decision.action, theirs: reply });
        transcript.push(RoundRecord {
            round,
            ours: decision.action,
            theirs: reply,
            payoff: matrix.get(decision.action, reply),
            phase: decision.phase,
            prediction: decision.prediction,
        });
        ours.push(decision.action);
        theirs.push(reply);
    }
    let report = agent.report();
    transcript.audit = audit_ground_truth(&transcript, &report, matrix, kind, ordering);
    transcript.ellipsoid = report.ellipsoid.clone();
    Ok((transcript, report))
}

/// Resolves the config and plays it. An opponent spec without an ordering gets
/// one drawn from the seed.
pub fn run_match(config: &MatchConfig) -> Result<MatchOutcome, ArenaError> {
    let matrix = config.game.load(config.seed)?;
    let ordering = config.opponent.resolve_ordering(matrix.n(), config.seed)?;
    let kind = config.opponent.kind;
    let (mut transcript, report) =
        play_match(&matrix, kind, &ordering, &config.exploiter, config.rounds)?;
    transcript.game = config.game.to_string();
    transcript.seed = config.seed;
    Ok(MatchOutcome { transcript, report, matrix, ordering, kind })
}

/// The opponent's replies to a fixed sequence of our actions.
pub fn replay_opponent(
    matrix: &GameMatrix,
    kind: OpponentKind,
    ordering: &ActionOrdering,
    ours: &[Action],
) -> Vec<Action> {
    let mut opponent = Opponent::new(kind, ordering.clone());
    ours.iter()
        .map(|&a| {
            let b = opponent.choose(matrix);
            opponent.observe(matrix, Round { ours: a, theirs: b });
            b
        })
        .collect()
}

/// Every record's payoff matches the matrix, both sides' payoffs cancel and
/// the counters add up.
pub fn check_bookkeeping(t: &MatchTranscript, matrix: &GameMatrix) -> Result<(), String> {
    let (mut w, mut d, mut l) = (0, 0, 0);
    for r in &t.records {
        let ours = matrix.get(r.ours, r.theirs);
        let theirs = matrix.get(r.theirs, r.ours);
        if r.payoff != ours || ours + theirs != 0 {
            return Err(format!("round {}: payoff bookkeeping broken", r.round));
        }
        match ours {
            1 => w += 1,
            0 => d += 1,
            _ => l += 1,
        }
    }
    if (w, d, l) != (t.wins, t.ties, t.losses) || w + d + l != t.records.len() {
        return Err("win/tie/loss counters disagree with the records".into());
    }
    Ok(())
}
