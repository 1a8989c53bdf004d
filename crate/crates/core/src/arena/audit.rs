use serde::{Deserialize, Serialize};

use super::MatchTranscript;
use crate::exploiters::ExploiterReport;
use crate::game::{ActionOrdering, GameMatrix};
use crate::opponents::{OpponentKind, Window};
use crate::predictors::{CutRecord, MistakeConstraint, ScoreMode};
use crate::Action;

// Slack for comparing logged volumes that went through floating point.
const LOG_VOLUME_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", content = "detail", rename_all = "lowercase")]
pub enum AuditOutcome {
    Pass,
    Fail(String),
}

impl AuditOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, AuditOutcome::Pass)
    }

    fn from_failure(failure: Option<String>) -> Self {
        failure.map_or(AuditOutcome::Pass, AuditOutcome::Fail)
    }
}

/// Ground-truth checks attached to a transcript. `None` means the check does
/// not apply to this pairing.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub table: Option<AuditOutcome>,
    pub feasibility: Option<AuditOutcome>,
    pub volume: Option<AuditOutcome>,
    pub halving: Option<AuditOutcome>,
    pub switch_order: Option<AuditOutcome>,
    pub tie_policy: Option<AuditOutcome>,
}

impl AuditReport {
    fn all(&self) -> [(&'static str, &Option<AuditOutcome>); 6] {
        [
            ("table", &self.table),
            ("feasibility", &self.feasibility),
            ("volume", &self.volume),
            ("halving", &self.halving),
            ("switch_order", &self.switch_order),
            ("tie_policy", &self.tie_policy),
        ]
    }

    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }

    pub fn failures(&self) -> Vec<String> {
        self.all()
            .iter()
            .filter_map(|(name, o)| match o {
                Some(AuditOutcome::Fail(why)) => Some(format!("{name} audit: {why}")),
                _ => None,
            })
            .collect()
    }
}

/// Every recorded `a -> b` must have `b` beat `a`.
pub fn audit_table(pairs: &[(Action, Action)], m: &GameMatrix) -> AuditOutcome {
    AuditOutcome::from_failure(pairs.iter().find(|&&(a, b)| m.get(b, a) != 1).map(|&(a, b)| {
        format!("entry {} -> {} does not beat it", m.action_label(a), m.action_label(b))
    }))
}

/// The true matrix with each opponent row raised by `1/(rank * r)` (net
/// scores) or `1/(rank * r^2)` (average scores), rank counted from 1 in the
/// opponent's ordering. Earlier-ranked actions then win every tie strictly,
/// so this point must satisfy every constraint the opponent reveals.
pub fn ghost_point(m: &GameMatrix, o: &ActionOrdering, mode: ScoreMode, r: usize) -> Vec<f64> {
    let n = m.n();
    let r = r.max(1) as f64;
    let scale = match mode {
        ScoreMode::Net => r,
        ScoreMode::Average => r * r,
    };
    let mut x = Vec::with_capacity(n * n);
    for i in 0..n {
        let lift = 1.0 / ((o.rank(i) + 1) as f64 * scale);
        for j in 0..n {
            x.push(m.get(i, j) as f64 + lift);
        }
    }
    x
}

pub fn audit_feasibility(constraints: &[MistakeConstraint], ghost: &[f64]) -> AuditOutcome {
    AuditOutcome::from_failure(constraints.iter().enumerate().find_map(|(k, c)| {
        let s = c.slack(ghost);
        (s < 0.0).then(|| format!("constraint {} (actual {}, predicted {}) has slack {s:e}", k + 1, c.actual, c.predicted))
    }))
}

/// Every cut shrinks the volume by at least `exp(-1/(2(d+1)))`.
pub fn audit_volume(cuts: &[CutRecord], dim: usize) -> AuditOutcome {
    let limit = -1.0 / (2.0 * (dim as f64 + 1.0));
    AuditOutcome::from_failure(cuts.iter().enumerate().find_map(|(k, c)| {
        let step = c.log_volume_after - c.log_volume_before;
        (!(step < 0.0 && step <= limit + LOG_VOLUME_TOLERANCE))
            .then(|| format!("cut {} changed log volume by {step}", k + 1))
    }))
}

/// The opponent's distinct runs during learning follow its ordering.
pub fn audit_switch_order(t: &MatchTranscript, o: &ActionOrdering) -> AuditOutcome {
    let mut runs: Vec<Action> = Vec::new();
    for r in t.records.iter().take_while(|r| r.phase.learning) {
        if runs.last() != Some(&r.theirs) {
            runs.push(r.theirs);
        }
    }
    let n = o.len();
    if runs.len() >= n && runs[..n] == *o.as_slice() {
        AuditOutcome::Pass
    } else {
        AuditOutcome::Fail(format!("learning runs {runs:?} do not start with ordering {o}"))
    }
}

pub fn audit_ground_truth(
    t: &MatchTranscript,
    report: &ExploiterReport,
    m: &GameMatrix,
    kind: OpponentKind,
    o: &ActionOrdering,
) -> AuditReport {
    let mut audit = AuditReport::default();
    if !report.table.is_empty() {
        audit.table = Some(audit_table(&report.table, m));
    }
    if let Some(summary) = &report.ellipsoid {
        let r = match kind {
            OpponentKind::FollowTheLeader(Window::Last(r)) => r,
            _ => t.rounds_requested,
        };
        let ghost = ghost_point(m, o, summary.mode, r);
        audit.feasibility = Some(audit_feasibility(&report.constraints, &ghost));
        audit.volume = Some(audit_volume(&report.cuts, m.n() * m.n()));
    }
    if let Some(survivors) = &report.halving_survivors {
        let found = survivors.iter().any(|h| {
            h.kind == kind && h.entries == m.entries() && h.ordering == o.as_slice()
        });
        audit.halving = Some(if found {
            AuditOutcome::Pass
        } else {
            AuditOutcome::Fail(format!("true ({kind}, matrix, {o}) was eliminated"))
        });
    }
    if kind == OpponentKind::HighestAverage && report.learned_order.is_some() {
        audit.switch_order = Some(audit_switch_order(t, o));
    }
    if let (Some(found), OpponentKind::WinStayLoseShift(truth)) = (report.detected_policy, kind) {
        audit.tie_policy = Some(if found == truth {
            AuditOutcome::Pass
        } else {
            AuditOutcome::Fail(format!("detected {found:?}, opponent uses {truth:?}"))
        });
    }
    audit
}
