//! Permissible games, action orderings and play histories.

mod builtin;
mod format;
mod generate;
mod history;
mod ordering;

use std::fmt;

use thiserror::Error;

use crate::Action;

pub use builtin::{builtin_game, BUILTIN_NAMES};
pub use format::{parse_game, parse_game_with, serialize_game, ParseOptions, FORMAT_VERSION};
pub use generate::{enumerate_antisymmetric, generate_permissible, random_ordering};
pub use history::{History, Round};
pub use ordering::ActionOrdering;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("action {action} out of range for a game with {n} actions")]
    ActionOutOfRange { action: usize, n: usize },
    #[error("no permissible game exists for n < 3 (got n = {0})")]
    TooFewActions(usize),
    #[error("payoff table is not square: row {row} has {len} entries, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("entry out of domain at payoffs[{row}][{col}]: {value} is not one of -1, 0, 1")]
    EntryOutOfDomain { row: usize, col: usize, value: i64 },
    #[error("game is not permissible: {0}")]
    NotPermissible(Violation),
    #[error("expected {n} action names, got {got}")]
    NameCount { n: usize, got: usize },
    #[error("invalid action ordering: {0}")]
    InvalidOrdering(String),
    #[error("unknown builtin game `{0}` (expected one of rps, rps_reverse, m_star, m_lex)")]
    UnknownBuiltin(String),
    #[error("malformed game document: {0}")]
    Malformed(String),
    #[error("unsupported game file version {0}")]
    Version(u64),
}

/// Single payoff value from the point of view of one player.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PayoffOutcome(i8);

impl PayoffOutcome {
    pub const WIN: PayoffOutcome = PayoffOutcome(1);
    pub const TIE: PayoffOutcome = PayoffOutcome(0);
    pub const LOSS: PayoffOutcome = PayoffOutcome(-1);

    pub fn value(self) -> i8 {
        self.0
    }

    pub fn is_win(self) -> bool {
        self.0 == 1
    }

    pub fn negate(self) -> PayoffOutcome {
        PayoffOutcome(-self.0)
    }
}

impl fmt::Display for PayoffOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One failed clause of the permissibility check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    TooFewActions { n: usize },
    NonzeroDiagonal { action: Action, value: i8 },
    AntisymmetryViolated { row: Action, col: Action },
    NoWinningAction { action: Action },
    NoLosingAction { action: Action },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TooFewActions { n } => write!(f, "too few actions: n = {n} < 3"),
            Violation::NonzeroDiagonal { action, value } => {
                write!(f, "nonzero diagonal at payoffs[{action}][{action}] = {value}")
            }
            Violation::AntisymmetryViolated { row, col } => {
                write!(f, "antisymmetry violated at payoffs[{row}][{col}] / payoffs[{col}][{row}]")
            }
            Violation::NoWinningAction { action } => {
                write!(f, "no winning action: row {action} beats nothing")
            }
            Violation::NoLosingAction { action } => {
                write!(f, "no losing action: column {action} is beaten by nothing")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return write!(f, "pass");
        }
        writeln!(f, "fail ({} violations)", self.violations.len())?;
        for v in &self.violations {
            writeln!(f, "  - {v}")?;
        }
        Ok(())
    }
}

/// Square payoff table over {-1, 0, +1}, row player's payoff, row-major.
///
/// Constructed through [`GameMatrix::new`] the matrix is always permissible.
/// [`GameMatrix::from_rows_unchecked`] only enforces shape and entry domain,
/// so that broken tables can still be inspected and reported on.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GameMatrix {
    n: usize,
    payoffs: Vec<i8>,
    action_names: Option<Vec<String>>,
}

impl GameMatrix {
    pub fn new(rows: Vec<Vec<i8>>) -> Result<Self, GameError> {
        let m = Self::from_rows_unchecked(rows)?;
        m.ensure_permissible()?;
        Ok(m)
    }

    pub fn from_rows_unchecked(rows: Vec<Vec<i8>>) -> Result<Self, GameError> {
        let n = rows.len();
        let mut payoffs = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(GameError::NotSquare { row: i, len: row.len(), n });
            }
            for (j, v) in row.into_iter().enumerate() {
                if !(-1..=1).contains(&v) {
                    return Err(GameError::EntryOutOfDomain { row: i, col: j, value: v as i64 });
                }
                payoffs.push(v);
            }
        }
        Ok(GameMatrix { n, payoffs, action_names: None })
    }

    /// Builds a matrix from a strict upper triangle (row-major, `i < j`),
    /// reflecting antisymmetrically. No permissibility check.
    pub fn from_upper_triangle(n: usize, upper: &[i8]) -> Self {
        debug_assert_eq!(upper.len(), n * (n - 1) / 2);
        let mut payoffs = vec![0i8; n * n];
        let mut k = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                payoffs[i * n + j] = upper[k];
                payoffs[j * n + i] = -upper[k];
                k += 1;
            }
        }
        GameMatrix { n, payoffs, action_names: None }
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self, GameError> {
        if names.len() != self.n {
            return Err(GameError::NameCount { n: self.n, got: names.len() });
        }
        self.action_names = Some(names);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn action_names(&self) -> Option<&[String]> {
        self.action_names.as_deref()
    }

    pub fn action_label(&self, a: Action) -> String {
        match &self.action_names {
            Some(names) => names[a].clone(),
            None => a.to_string(),
        }
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[i8] {
        &self.payoffs
    }

    pub fn rows(&self) -> Vec<Vec<i8>> {
        self.payoffs.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    /// Payoff to the player choosing `i` against `j`. Panics when out of range.
    #[inline]
    pub fn get(&self, i: Action, j: Action) -> i8 {
        self.payoffs[i * self.n + j]
    }

    pub fn payoff(&self, i: Action, j: Action) -> Result<PayoffOutcome, GameError> {
        for a in [i, j] {
            if a >= self.n {
                return Err(GameError::ActionOutOfRange { action: a, n: self.n });
            }
        }
        Ok(PayoffOutcome(self.get(i, j)))
    }

    pub fn beats(&self, i: Action, j: Action) -> bool {
        self.get(i, j) == 1
    }

    /// The same game with every win and loss swapped.
    pub fn reversed(&self) -> GameMatrix {
        GameMatrix {
            n: self.n,
            payoffs: self.payoffs.iter().map(|v| -v).collect(),
            action_names: self.action_names.clone(),
        }
    }

    pub fn validate(&self) -> ValidationReport {
        validate_permissible(self)
    }

    fn ensure_permissible(&self) -> Result<(), GameError> {
        match validate_permissible(self).violations.into_iter().next() {
            None => Ok(()),
            Some(Violation::TooFewActions { n }) => Err(GameError::TooFewActions(n)),
            Some(v) => Err(GameError::NotPermissible(v)),
        }
    }

    /// Actions `j` that `i` beats, ascending.
    pub fn beaten_by(&self, i: Action) -> Vec<Action> {
        (0..self.n).filter(|&j| self.beats(i, j)).collect()
    }

    /// Actions that beat `j`, ascending.
    pub fn beaters_of(&self, j: Action) -> Vec<Action> {
        (0..self.n).filter(|&i| self.beats(i, j)).collect()
    }
}

impl fmt::Display for GameMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = (0..self.n).map(|a| self.action_label(a)).collect();
        let w = labels.iter().map(|l| l.len()).max().unwrap_or(1).max(2);
        write!(f, "{:>w$}", "")?;
        for l in &labels {
            write!(f, " {l:>w$}")?;
        }
        writeln!(f)?;
        for (i, l) in labels.iter().enumerate() {
            write!(f, "{l:>w$}")?;
            for j in 0..self.n {
                write!(f, " {:>w$}", self.get(i, j))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Checks every clause of the permissible-game definition and reports all
/// failures, not just the first.
pub fn validate_permissible(m: &GameMatrix) -> ValidationReport {
    let n = m.n();
    let mut violations = Vec::new();
    if n < 3 {
        violations.push(Violation::TooFewActions { n });
    }
    for i in 0..n {
        let d = m.get(i, i);
        if d != 0 {
            violations.push(Violation::NonzeroDiagonal { action: i, value: d });
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if m.get(i, j) != -m.get(j, i) {
                violations.push(Violation::AntisymmetryViolated { row: i, col: j });
            }
        }
    }
    for i in 0..n {
        if !(0..n).any(|j| m.get(i, j) == 1) {
            violations.push(Violation::NoWinningAction { action: i });
        }
    }
    for i in 0..n {
        if !(0..n).any(|j| m.get(j, i) == 1) {
            violations.push(Violation::NoLosingAction { action: i });
        }
    }
    ValidationReport { violations }
}
