//! Central-cut ellipsoid over candidate payoff matrices.
//!
//! The center is a point in n*n-dimensional space read as a row-major payoff
//! estimate. Predictions take the argmax of modeled scores; every wrong
//! prediction yields a strict inequality "the action actually played scored
//! more than the one predicted", which is fed back as a halfspace cut.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::PredictorError;
use crate::Action;

/// Smallest admissible `w'Pw` before a cut is refused.
const CONDITIONING_FLOOR: f64 = 1e-30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScoreMode {
    /// Opponent ranks actions by net payoff against our counted plays.
    Net,
    /// Opponent ranks actions by the average payoff each earned when played.
    Average,
}

/// Constraint margin keeping the perturbed true matrix strictly feasible:
/// `1 / (2 R (n^2 - n))`, with `R` the horizon for net scores and its square
/// for average scores.
pub fn default_margin(n: usize, mode: ScoreMode, horizon: usize) -> f64 {
    let r = horizon.max(1) as f64;
    let r = match mode {
        ScoreMode::Net => r,
        ScoreMode::Average => r * r,
    };
    1.0 / (2.0 * r * (n * n - n) as f64)
}

/// Play counts that turn a candidate matrix into per-action scores.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScoreContext {
    /// `counts[j]`: how often we played `j` in the counted window.
    Net { counts: Vec<u64> },
    /// `pairs[i * n + j]`: rounds where the opponent played `i` against our `j`.
    Average { pairs: Vec<u64> },
}

impl ScoreContext {
    /// Builds the context from the play so far. `window` limits net counts to
    /// the most recent rounds; it is ignored in average mode.
    pub fn from_play(
        mode: ScoreMode,
        n: usize,
        own: &[Action],
        opponent: &[Action],
        window: Option<usize>,
    ) -> Self {
        match mode {
            ScoreMode::Net => {
                let start = window.map_or(0, |r| own.len().saturating_sub(r));
                let mut counts = vec![0u64; n];
                for &a in &own[start..] {
                    counts[a] += 1;
                }
                ScoreContext::Net { counts }
            }
            ScoreMode::Average => {
                let mut pairs = vec![0u64; n * n];
                for (&ours, &theirs) in own.iter().zip(opponent) {
                    pairs[theirs * n + ours] += 1;
                }
                ScoreContext::Average { pairs }
            }
        }
    }

    pub fn mode(&self) -> ScoreMode {
        match self {
            ScoreContext::Net { .. } => ScoreMode::Net,
            ScoreContext::Average { .. } => ScoreMode::Average,
        }
    }

    /// Linear coefficients of action `i`'s modeled score over the n*n
    /// coordinates. An average-mode action the opponent never played keeps its
    /// initial average of 0, which is the all-zero row.
    pub fn row_weights(&self, n: usize, i: Action) -> Vec<f64> {
        let mut w = vec![0.0; n * n];
        match self {
            ScoreContext::Net { counts } => {
                for j in 0..n {
                    w[i * n + j] = counts[j] as f64;
                }
            }
            ScoreContext::Average { pairs } => {
                let total: u64 = pairs[i * n..(i + 1) * n].iter().sum();
                if total > 0 {
                    for j in 0..n {
                        w[i * n + j] = pairs[i * n + j] as f64 / total as f64;
                    }
                }
            }
        }
        w
    }
}

/// Strict preference revealed by one wrong prediction:
/// `weights . x >= margin`, where `weights` is the actual action's score row
/// minus the predicted action's.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MistakeConstraint {
    pub predicted: Action,
    pub actual: Action,
    pub weights: Vec<f64>,
    pub margin: f64,
}

impl MistakeConstraint {
    pub fn new(
        n: usize,
        context: &ScoreContext,
        predicted: Action,
        actual: Action,
        margin: f64,
    ) -> Self {
        debug_assert_ne!(predicted, actual);
        let plus = context.row_weights(n, actual);
        let minus = context.row_weights(n, predicted);
        let weights = plus.iter().zip(&minus).map(|(p, m)| p - m).collect();
        MistakeConstraint { predicted, actual, weights, margin }
    }

    /// `weights . x - margin`; nonnegative when `x` satisfies the constraint.
    pub fn slack(&self, x: &[f64]) -> f64 {
        self.weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>() - self.margin
    }
}

/// Volumes are reported as log of sqrt(det(shape)), i.e. relative to the
/// unit ball.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutRecord {
    pub log_volume_before: f64,
    pub log_volume_after: f64,
    pub slack_before: f64,
    pub slack_after: f64,
}

impl CutRecord {
    pub fn volume_ratio(&self) -> f64 {
        (self.log_volume_after - self.log_volume_before).exp()
    }
}

#[derive(Debug, Clone)]
pub struct EllipsoidState {
    n: usize,
    mode: ScoreMode,
    center: DVector<f64>,
    shape: DMatrix<f64>,
    mistakes: usize,
    log_volume: f64,
}

impl EllipsoidState {
    /// Ball of radius n around the origin, which contains every matrix with
    /// entries in [-1, 1].
    pub fn new(n: usize, mode: ScoreMode) -> Self {
        let d = n * n;
        let radius_sq = (n * n) as f64;
        let shape = DMatrix::identity(d, d) * radius_sq;
        EllipsoidState {
            n,
            mode,
            center: DVector::zeros(d),
            shape,
            mistakes: 0,
            log_volume: 0.5 * d as f64 * radius_sq.ln(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn mode(&self) -> ScoreMode {
        self.mode
    }

    pub fn center(&self) -> &[f64] {
        self.center.as_slice()
    }

    pub fn shape(&self) -> &DMatrix<f64> {
        &self.shape
    }

    pub fn mistakes(&self) -> usize {
        self.mistakes
    }

    pub fn log_volume(&self) -> f64 {
        self.log_volume
    }

    /// Modeled score of every action at the current center.
    pub fn scores(&self, context: &ScoreContext) -> Vec<f64> {
        debug_assert_eq!(context.mode(), self.mode);
        (0..self.n)
            .map(|i| {
                context
                    .row_weights(self.n, i)
                    .iter()
                    .zip(self.center.iter())
                    .map(|(w, c)| w * c)
                    .sum()
            })
            .collect()
    }

    /// Argmax of the modeled scores; ties go to the lowest index.
    pub fn predict(&self, context: &ScoreContext) -> Action {
        let scores = self.scores(context);
        let mut best = 0;
        for i in 1..scores.len() {
            if scores[i] > scores[best] {
                best = i;
            }
        }
        best
    }

    /// Central cut keeping `{x : w . x >= w . center}`.
    pub fn update(&mut self, constraint: &MistakeConstraint) -> Result<CutRecord, PredictorError> {
        let d = self.dim();
        let df = d as f64;
        let w = DVector::from_column_slice(&constraint.weights);
        let slack_before = constraint.slack(self.center.as_slice());
        if slack_before >= 0.0 {
            return Err(PredictorError::NotViolated(slack_before));
        }
        let pw = &self.shape * &w;
        let wpw = w.dot(&pw);
        if wpw.is_nan() || wpw <= CONDITIONING_FLOOR {
            return Err(PredictorError::Conditioning(wpw));
        }
        let b = pw / wpw.sqrt();
        let center = &self.center + &b * (1.0 / (df + 1.0));
        let mut shape = (&self.shape - (&b * b.transpose()) * (2.0 / (df + 1.0)))
            * (df * df / (df * df - 1.0));
        // re-symmetrize against rounding drift
        shape = (&shape + shape.transpose()) * 0.5;
        let log_volume = log_volume_of(&shape).ok_or(PredictorError::Conditioning(wpw))?;
        let record = CutRecord {
            log_volume_before: self.log_volume,
            log_volume_after: log_volume,
            slack_before,
            slack_after: constraint.slack(center.as_slice()),
        };
        self.center = center;
        self.shape = shape;
        self.log_volume = log_volume;
        self.mistakes += 1;
        Ok(record)
    }

    /// Whether `x` lies inside the current ellipsoid.
    pub fn contains(&self, x: &[f64]) -> bool {
        let diff = DVector::from_column_slice(x) - &self.center;
        match self.shape.clone().cholesky() {
            Some(ch) => diff.dot(&ch.solve(&diff)) <= 1.0 + 1e-9,
            None => false,
        }
    }
}

/// `0.5 * ln det(shape)` via Cholesky; `None` when the shape is not positive
/// definite.
pub fn log_volume_of(shape: &DMatrix<f64>) -> Option<f64> {
    let ch = shape.clone().cholesky()?;
    let l = ch.l();
    Some((0..l.nrows()).map(|i| l[(i, i)].ln()).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn init_is_radius_n_ball() {
        let e = EllipsoidState::new(3, ScoreMode::Net);
        assert_eq!(e.dim(), 9);
        assert!(e.center().iter().all(|&c| c == 0.0));
        assert_eq!(e.shape()[(0, 0)], 9.0);
        assert!(e.contains(&[1.0, -1.0, 1.0, 1.0, 0.0, -1.0, 0.0, 0.0, 1.0]));
        assert!(!e.contains(&[3.1, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]));
        assert!((e.log_volume() - log_volume_of(e.shape()).unwrap()).abs() < 1e-12);
        assert_eq!(e.mode(), ScoreMode::Net);
        assert_eq!(e.mistakes(), 0);
    }

    #[test]
    fn axis_aligned_toy_cut() {
        let mut e = EllipsoidState {
            n: 0,
            mode: ScoreMode::Net,
            center: DVector::zeros(2),
            shape: DMatrix::identity(2, 2),
            mistakes: 0,
            log_volume: 0.0,
        };
        let c = MistakeConstraint { predicted: 0, actual: 1, weights: vec![1.0, 0.0], margin: 1e-3 };
        e.update(&c).unwrap();
        assert!((e.center()[0] - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(e.center()[1], 0.0);
        // d = 2: shape becomes diag(4/3 * 1/3, 4/3)
        assert!((e.shape()[(0, 0)] - 4.0 / 9.0).abs() < 1e-15);
        assert!((e.shape()[(1, 1)] - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn update_shrinks_volume_and_improves_slack() {
        let mut e = EllipsoidState::new(3, ScoreMode::Net);
        let ctx = ScoreContext::Net { counts: vec![2, 0, 0] };
        let c = MistakeConstraint::new(3, &ctx, 2, 1, default_margin(3, ScoreMode::Net, 100));
        let rec = e.update(&c).unwrap();
        let d = 9.0f64;
        assert!(rec.volume_ratio() <= (-1.0 / (2.0 * (d + 1.0))).exp());
        assert!(rec.slack_after > rec.slack_before);
        assert_eq!(e.mistakes(), 1);
        // the cut now holds at the center, so repeating it is refused
        assert!(matches!(e.update(&c), Err(PredictorError::NotViolated(_))));
    }

    #[test]
    fn net_constraint_layout() {
        // ours = [R, R], predicted S, actual P
        let ctx = ScoreContext::from_play(ScoreMode::Net, 3, &[0, 0], &[1, 1], None);
        let c = MistakeConstraint::new(3, &ctx, 2, 1, 0.01);
        let mut expected = vec![0.0; 9];
        expected[3] = 2.0; // m'[P, R]
        expected[6] = -2.0; // m'[S, R]
        assert_eq!(c.weights, expected);
        assert_eq!(c.margin, 0.01);
    }

    #[test]
    fn limited_window_counts_only_recent_rounds() {
        let ctx = ScoreContext::from_play(ScoreMode::Net, 3, &[0, 0, 2], &[0, 1, 1], Some(1));
        assert_eq!(ctx, ScoreContext::Net { counts: vec![0, 0, 1] });
    }

    #[test]
    fn average_rows_are_normalized() {
        let own = [0, 1, 1, 2, 0];
        let opp = [2, 2, 0, 2, 0];
        let ctx = ScoreContext::from_play(ScoreMode::Average, 3, &own, &opp, None);
        for i in [0, 2] {
            let s: f64 = ctx.row_weights(3, i).iter().sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
        // action 1 never played by the opponent: degenerate zero row
        assert!(ctx.row_weights(3, 1).iter().all(|&w| w == 0.0));
        let c = MistakeConstraint::new(3, &ctx, 0, 2, 0.0);
        let pos: f64 = c.weights.iter().filter(|w| **w > 0.0).sum();
        let neg: f64 = c.weights.iter().filter(|w| **w < 0.0).sum();
        assert!((pos - 1.0).abs() < 1e-12 && (neg + 1.0).abs() < 1e-12);
    }

    #[test]
    fn prediction_examples() {
        let mut e = EllipsoidState::new(3, ScoreMode::Net);
        let ctx = ScoreContext::Net { counts: vec![3, 0, 0] };
        assert_eq!(e.predict(&ctx), 0);
        // center at the true RPS matrix predicts exact FTL behavior
        e.center = DVector::from_row_slice(&[0., -1., 1., 1., 0., -1., -1., 1., 0.]);
        assert_eq!(e.predict(&ctx), 1);
    }

    #[test]
    fn zero_weights_are_a_conditioning_fault() {
        let mut e = EllipsoidState::new(3, ScoreMode::Average);
        let ctx = ScoreContext::Average { pairs: vec![0; 9] };
        let c = MistakeConstraint::new(3, &ctx, 0, 1, 1e-4);
        assert!(matches!(e.update(&c), Err(PredictorError::Conditioning(_))));
    }

    #[test]
    fn average_equals_net_when_play_counts_match() {
        // opponent played every action equally often against the same mix
        let own = [0, 1, 0, 1, 0, 1];
        let opp = [0, 0, 1, 1, 2, 2];
        let avg = ScoreContext::from_play(ScoreMode::Average, 3, &own, &opp, None);
        let mut pairs_net = vec![0u64; 3];
        for &a in &own[..2] {
            pairs_net[a] += 1;
        }
        let net = ScoreContext::Net { counts: pairs_net };
        let mut a = EllipsoidState::new(3, ScoreMode::Average);
        let mut b = EllipsoidState::new(3, ScoreMode::Net);
        let x: Vec<f64> = (0..9).map(|k| ((k * 7) % 5) as f64 - 2.0).collect();
        a.center = DVector::from_row_slice(&x);
        b.center = DVector::from_row_slice(&x);
        let sa = a.scores(&avg);
        let sb = b.scores(&net);
        for i in 0..3 {
            assert!((sa[i] * 2.0 - sb[i]).abs() < 1e-12);
        }
        assert_eq!(a.predict(&avg), b.predict(&net));
    }
}
