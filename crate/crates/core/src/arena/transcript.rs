use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::AuditReport;
use crate::exploiters::{EllipsoidSummary, ExploiterSpec, PhaseLabel};
use crate::game::ActionOrdering;
use crate::opponents::{OpponentKind, OpponentSpec};
use crate::Action;

/// CSV column order. Changing it is a format break.
pub const CSV_HEADER: [&str; 7] =
    ["round", "our_action", "opp_action", "payoff", "phase", "predicted", "correct"];

#[derive(Debug, Error)]
pub enum TranscriptError {
    #[error("transcript line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("transcript is empty")]
    Empty,
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundRecord {
    /// 1-based.
    pub round: usize,
    pub ours: Action,
    pub theirs: Action,
    pub payoff: i8,
    pub phase: PhaseLabel,
    pub prediction: Option<Action>,
}

impl RoundRecord {
    pub fn predicted(&self) -> bool {
        self.prediction.is_some()
    }

    /// `None` when no prediction was declared this round.
    pub fn correct(&self) -> Option<bool> {
        self.prediction.map(|p| p == self.theirs)
    }

    pub fn is_win(&self) -> bool {
        self.payoff == 1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchTranscript {
    pub game: String,
    pub seed: u64,
    pub n: usize,
    pub opponent: String,
    pub exploiter: String,
    pub rounds_requested: usize,
    #[serde(skip)]
    pub records: Vec<RoundRecord>,
    pub wins: usize,
    pub ties: usize,
    pub losses: usize,
    pub audit: AuditReport,
    pub ellipsoid: Option<EllipsoidSummary>,
    /// Set when the match stopped early; the records are then partial.
    pub fault: Option<String>,
}

impl MatchTranscript {
    pub fn new(
        n: usize,
        kind: OpponentKind,
        ordering: &ActionOrdering,
        exploiter: &ExploiterSpec,
        rounds: usize,
    ) -> Self {
        MatchTranscript {
            game: String::new(),
            seed: 0,
            n,
            opponent: OpponentSpec::new(kind, ordering.clone()).to_string(),
            exploiter: exploiter.to_string(),
            rounds_requested: rounds,
            records: Vec::with_capacity(rounds),
            wins: 0,
            ties: 0,
            losses: 0,
            audit: AuditReport::default(),
            ellipsoid: None,
            fault: None,
        }
    }

    pub fn push(&mut self, record: RoundRecord) {
        match record.payoff {
            1 => self.wins += 1,
            0 => self.ties += 1,
            _ => self.losses += 1,
        }
        self.records.push(record);
    }

    pub fn nonwins(&self) -> usize {
        self.ties + self.losses
    }

    pub fn ours(&self) -> Vec<Action> {
        self.records.iter().map(|r| r.ours).collect()
    }

    pub fn theirs(&self) -> Vec<Action> {
        self.records.iter().map(|r| r.theirs).collect()
    }

    /// Length of the opening stretch of learning-labeled rounds.
    pub fn learning_len(&self) -> usize {
        self.records.iter().take_while(|r| r.phase.learning).count()
    }

    pub fn learning_nonwins(&self) -> usize {
        self.records.iter().take_while(|r| r.phase.learning).filter(|r| !r.is_win()).count()
    }

    pub fn prediction_mistakes(&self) -> usize {
        self.records.iter().filter(|r| r.correct() == Some(false)).count()
    }

    /// Header line followed by one JSON record per round.
    pub fn to_text(&self) -> String {
        let mut out = serde_json::to_string(self).expect("transcript serializes");
        out.push('\n');
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("record serializes"));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, TranscriptError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, head) = lines.next().ok_or(TranscriptError::Empty)?;
        let parse_err = |line: usize, e: serde_json::Error| TranscriptError::Parse {
            line: line + 1,
            message: e.to_string(),
        };
        let mut t: MatchTranscript = serde_json::from_str(head).map_err(|e| parse_err(0, e))?;
        for (i, line) in lines {
            t.records.push(serde_json::from_str(line).map_err(|e| parse_err(i, e))?);
        }
        Ok(t)
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(CSV_HEADER).expect("in-memory write");
        for r in &self.records {
            w.write_record([
                r.round.to_string(),
                r.ours.to_string(),
                r.theirs.to_string(),
                r.payoff.to_string(),
                r.phase.to_string(),
                r.prediction.map_or(String::new(), |p| p.to_string()),
                match r.correct() {
                    Some(true) => "1".into(),
                    Some(false) => "0".into(),
                    None => String::new(),
                },
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("ascii output")
    }
}

#[cfg(test)]
mod tests {
    use super::super::{run_match, MatchConfig};

    fn sample() -> super::MatchTranscript {
        let c = MatchConfig::new(
            "rps".parse().unwrap(),
            "ftl".parse().unwrap(),
            "beat-ftl".parse().unwrap(),
            40,
            3,
        );
        run_match(&c).unwrap().transcript
    }

    #[test]
    fn text_round_trip() {
        let t = sample();
        let back = super::MatchTranscript::from_text(&t.to_text()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn csv_layout() {
        let t = sample();
        let csv = t.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("round,our_action,opp_action,payoff,phase,predicted,correct"));
        assert_eq!(lines.next(), Some("1,0,0,0,opening#0,,"));
        assert_eq!(csv.lines().count(), 41);
        let last = csv.lines().last().unwrap();
        assert!(last.starts_with("40,"));
        assert!(last.ends_with(",1") || last.ends_with(",0"));
    }

    #[test]
    fn bad_text() {
        assert!(super::MatchTranscript::from_text("").is_err());
        assert!(super::MatchTranscript::from_text("{\"nope\":1}\n").is_err());
    }
}
