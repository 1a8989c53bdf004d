use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{validate_permissible, ActionOrdering, GameError, GameMatrix};

// Separate ChaCha streams keep the game and the ordering independent for a
// shared seed.
const GAME_STREAM: u64 = 0;
const ORDERING_STREAM: u64 = 1;

/// Uniform draw over permissible n-action games: sample every upper-triangle
/// entry from {-1, 0, +1}, reflect, and resample until permissible.
pub fn generate_permissible(n: usize, seed: u64) -> Result<GameMatrix, GameError> {
    if n < 3 {
        return Err(GameError::TooFewActions(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(GAME_STREAM);
    let mut upper = vec![0i8; n * (n - 1) / 2];
    loop {
        for v in upper.iter_mut() {
            *v = rng.gen_range(-1..=1);
        }
        let m = GameMatrix::from_upper_triangle(n, &upper);
        if validate_permissible(&m).passed() {
            return Ok(m);
        }
    }
}

/// Uniformly random opponent ordering for a seed.
pub fn random_ordering(n: usize, seed: u64) -> ActionOrdering {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(ORDERING_STREAM);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    ActionOrdering::new(order).expect("shuffled permutation")
}

/// Every antisymmetric zero-diagonal {-1,0,+1} matrix of size n, in
/// row-major lexicographic order with -1 < 0 < +1.
pub fn enumerate_antisymmetric(n: usize) -> Vec<GameMatrix> {
    let k = n * (n - 1) / 2;
    let total = 3usize.pow(k as u32);
    let mut out = Vec::with_capacity(total);
    let mut upper = vec![-1i8; k];
    for _ in 0..total {
        out.push(GameMatrix::from_upper_triangle(n, &upper));
        // odometer increment, last entry fastest
        for v in upper.iter_mut().rev() {
            if *v < 1 {
                *v += 1;
                break;
            }
            *v = -1;
        }
    }
    out.sort_by(|a, b| a.entries().cmp(b.entries()));
    out
}
