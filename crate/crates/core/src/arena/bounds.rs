use std::fmt;

use evalexpr::{eval_number_with_context, ContextWithMutableVariables, HashMapContext, Value};
use serde::{Deserialize, Serialize};

use super::MatchTranscript;

/// A claim about a transcript. Expressions may use `n`, `r` (window or
/// repetition count, when the row has one) and `rounds`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundSpec {
    /// Every round numbered `from` or later is a win.
    SuffixAllWins { from: String },
    /// Ties plus losses over the whole match.
    TotalNonwinsLe { limit: String },
    /// Ties plus losses during the opening learning stretch.
    LearningNonwinsLe { limit: String },
    /// The opening learning stretch lasts exactly this many rounds.
    LearningLenEq { len: String },
    /// After learning, every non-win round carries a wrong prediction.
    PhaseCoupled,
}

impl fmt::Display for BoundSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundSpec::SuffixAllWins { from } => write!(f, "all wins from round {from}"),
            BoundSpec::TotalNonwinsLe { limit } => write!(f, "non-wins <= {limit}"),
            BoundSpec::LearningNonwinsLe { limit } => write!(f, "learning non-wins <= {limit}"),
            BoundSpec::LearningLenEq { len } => write!(f, "learning length = {len}"),
            BoundSpec::PhaseCoupled => write!(f, "post-learning non-wins are flagged mistakes"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundVars {
    pub n: usize,
    pub r: Option<usize>,
    pub rounds: usize,
}

/// Evaluates an integer-valued bound expression.
pub fn evaluate_expr(expr: &str, vars: BoundVars) -> Result<i64, String> {
    let mut ctx = HashMapContext::new();
    let mut set = |name: &str, v: usize| {
        ctx.set_value(name.into(), Value::Int(v as i64)).map_err(|e| e.to_string())
    };
    set("n", vars.n)?;
    set("rounds", vars.rounds)?;
    if let Some(r) = vars.r {
        set("r", r)?;
    }
    let v = eval_number_with_context(expr, &ctx).map_err(|e| format!("`{expr}`: {e}"))?;
    if v.fract() != 0.0 || !v.is_finite() {
        return Err(format!("`{expr}` evaluates to non-integer {v}"));
    }
    Ok(v as i64)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub bound: String,
    pub passed: bool,
    pub first_violation: Option<usize>,
    pub detail: String,
}

impl BoundReport {
    fn pass(bound: &BoundSpec, detail: String) -> Self {
        BoundReport { bound: bound.to_string(), passed: true, first_violation: None, detail }
    }

    fn fail(bound: &BoundSpec, round: Option<usize>, detail: String) -> Self {
        BoundReport { bound: bound.to_string(), passed: false, first_violation: round, detail }
    }
}

pub fn verify_bound(t: &MatchTranscript, bound: &BoundSpec, vars: BoundVars) -> BoundReport {
    let eval = |e: &str| evaluate_expr(e, vars);
    let nth_nonwin = |k: usize, rows: &mut dyn Iterator<Item = &super::RoundRecord>| {
        rows.filter(|r| !r.is_win()).nth(k).map(|r| r.round)
    };
    match bound {
        BoundSpec::SuffixAllWins { from } => match eval(from) {
            Err(e) => BoundReport::fail(bound, None, e),
            Ok(from) => {
                match t.records.iter().find(|r| r.round as i64 >= from && !r.is_win()) {
                    Some(r) => BoundReport::fail(
                        bound,
                        Some(r.round),
                        format!("round {} has payoff {}", r.round, r.payoff),
                    ),
                    None => BoundReport::pass(bound, format!("from round {from}")),
                }
            }
        },
        BoundSpec::TotalNonwinsLe { limit } => match eval(limit) {
            Err(e) => BoundReport::fail(bound, None, e),
            Ok(limit) => {
                let got = t.nonwins();
                if got as i64 <= limit {
                    BoundReport::pass(bound, format!("{got} <= {limit}"))
                } else {
                    let at = nth_nonwin(limit.max(0) as usize, &mut t.records.iter());
                    BoundReport::fail(bound, at, format!("{got} > {limit}"))
                }
            }
        },
        BoundSpec::LearningNonwinsLe { limit } => match eval(limit) {
            Err(e) => BoundReport::fail(bound, None, e),
            Ok(limit) => {
                let got = t.learning_nonwins();
                if got as i64 <= limit {
                    BoundReport::pass(bound, format!("{got} <= {limit}"))
                } else {
                    let mut learning = t.records.iter().take_while(|r| r.phase.learning);
                    let at = nth_nonwin(limit.max(0) as usize, &mut learning);
                    BoundReport::fail(bound, at, format!("{got} > {limit}"))
                }
            }
        },
        BoundSpec::LearningLenEq { len } => match eval(len) {
            Err(e) => BoundReport::fail(bound, None, e),
            Ok(len) => {
                let got = t.learning_len();
                if got as i64 == len {
                    BoundReport::pass(bound, format!("{got}"))
                } else {
                    BoundReport::fail(bound, Some(got + 1), format!("{got} != {len}"))
                }
            }
        },
        BoundSpec::PhaseCoupled => {
            let start = t.learning_len();
            match t.records[start..]
                .iter()
                .find(|r| !r.is_win() && r.correct() != Some(false))
            {
                Some(r) => BoundReport::fail(
                    bound,
                    Some(r.round),
                    format!("round {} is a non-win without a flagged mistake", r.round),
                ),
                None => BoundReport::pass(bound, format!("{} flagged mistakes", t.prediction_mistakes())),
            }
        }
    }
}
