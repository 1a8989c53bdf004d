use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Decision, ExploitError, Exploiter, Observation};
use crate::Action;

/// Cycles through a fixed list of actions.
#[derive(Debug, Clone)]
pub struct Scripted {
    script: Vec<Action>,
}

impl Scripted {
    pub fn new(script: Vec<Action>) -> Self {
        assert!(!script.is_empty(), "script needs at least one action");
        Scripted { script }
    }
}

impl Exploiter for Scripted {
    fn act(&mut self, obs: &Observation<'_>) -> Result<Decision, ExploitError> {
        let t = obs.rounds();
        Ok(Decision::learn(self.script[t % self.script.len()], "script", t))
    }
}

/// Uniformly random play from a fixed seed.
#[derive(Debug, Clone)]
pub struct RandomPlay {
    n: usize,
    rng: ChaCha8Rng,
}

impl RandomPlay {
    pub fn new(n: usize, seed: u64) -> Self {
        RandomPlay { n, rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

impl Exploiter for RandomPlay {
    fn act(&mut self, obs: &Observation<'_>) -> Result<Decision, ExploitError> {
        Ok(Decision::learn(self.rng.gen_range(0..self.n), "random", obs.rounds()))
    }
}
