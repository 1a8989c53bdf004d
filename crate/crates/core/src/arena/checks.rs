use serde::{Deserialize, Serialize};

use super::{play_match, ArenaError, GameSource, MatchConfig};
use crate::exploiters::ExploiterSpec;
use crate::game::{
    builtin_game, enumerate_antisymmetric, generate_permissible, random_ordering, ActionOrdering,
    GameMatrix, History, Round,
};
use crate::opponents::{choose_from_scratch, OpponentKind, OpponentSpec};
use crate::predictors::HypothesisSpace;
use crate::Action;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Length of the stored counterexample transcript.
pub const GOLDEN_COUNTEREXAMPLE_ROUNDS: usize = 60;

/// Outcome of a whole-library check that is not a single bounded match.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &str, failure: Option<String>, ok: String) -> Self {
        CheckResult {
            name: name.to_string(),
            passed: failure.is_none(),
            detail: failure.unwrap_or(ok),
        }
    }
}

/// Halving prediction against in-family opponents on random three-action
/// games: mistakes stay within `ceil(log2 |space|)` and the true triple is
/// never dropped.
pub fn check_halving(seeds: std::ops::Range<u64>, rounds: usize) -> CheckResult {
    let families: [&[OpponentKind]; 3] = [
        &[OpponentKind::MyopicBest],
        &[OpponentKind::GamblersFallacy],
        &[OpponentKind::MyopicBest, OpponentKind::GamblersFallacy],
    ];
    let mut worst = 0;
    let mut failure = None;
    'outer: for family in families {
        for &kind in family {
            for seed in seeds.clone() {
                let m = generate_permissible(3, seed).expect("n = 3 is valid");
                let o = random_ordering(3, seed);
                let mut space = HypothesisSpace::new(family, 3).expect("n = 3 is enumerable");
                let bound = space.mistake_bound();
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
                let mut h = History::new();
                for t in 0..rounds {
                    let theirs = choose_from_scratch(kind, &m, &o, &h);
                    let ours = rng.gen_range(0..3);
                    if let Err(e) = space.update(Round { ours, theirs }) {
                        failure = Some(format!("{kind} seed {seed}: {e}"));
                        break 'outer;
                    }
                    if !space.contains(kind, &m, &o) {
                        failure = Some(format!("{kind} seed {seed}: true triple lost in round {}", t + 1));
                        break 'outer;
                    }
                    h.push(Round { ours, theirs });
                }
                worst = worst.max(space.mistakes());
                if space.mistakes() > bound {
                    failure = Some(format!(
                        "{kind} seed {seed}: {} mistakes exceed {bound}",
                        space.mistakes()
                    ));
                    break 'outer;
                }
            }
        }
    }
    CheckResult::new("halving", failure, format!("worst mistake count {worst}"))
}

/// The six-action demonstration: true matrix M*, the consistent but wrong
/// hypothesis M, and an opponent ordering that is the identity.
pub fn counterexample_config(rounds: usize) -> MatchConfig {
    MatchConfig::new(
        GameSource::Builtin("m_star".into()),
        OpponentSpec::new(OpponentKind::MyopicBest, ActionOrdering::identity(6)),
        ExploiterSpec::LexBaseline,
        rounds,
        0,
    )
}

/// Opponent cycles R, S, P; we cycle S', P', R'; we tie once and lose twice
/// per cycle, while the hypothesis expects a win every round.
pub fn check_counterexample(rounds: usize) -> Result<CheckResult, ArenaError> {
    let out = super::run_match(&counterexample_config(rounds))?;
    let hypothesis = builtin_game("m_lex")?;
    let t = &out.transcript;
    let failure = t.records.iter().find_map(|r| {
        let k = (r.round - 1) % 3;
        let expected = ([0, 2, 1][k], [5, 4, 3][k], [0, -1, -1][k]);
        let anticipated = hypothesis.get(r.ours, r.theirs);
        if (r.theirs, r.ours, r.payoff) != expected || anticipated != 1 {
            Some(format!("round {} deviates from the printed cycle", r.round))
        } else {
            None
        }
    });
    let failure = failure.or_else(|| {
        (t.records.len() != rounds).then(|| format!("match stopped: {:?}", t.fault))
    });
    Ok(CheckResult::new("counterexample", failure, format!("{rounds} rounds, cycle intact")))
}

/// Opponent streams for (MBR, rps) and (MWR, rps_reverse) under the same
/// ordering and the same agent.
pub fn indistinguishable_streams(
    agent: &ExploiterSpec,
    ordering: &ActionOrdering,
    rounds: usize,
) -> Result<(Vec<Action>, Vec<Action>), ArenaError> {
    let rps = builtin_game("rps")?;
    let reverse = builtin_game("rps_reverse")?;
    let (a, _) = play_match(&rps, OpponentKind::MyopicBest, ordering, agent, rounds)?;
    let (b, _) = play_match(&reverse, OpponentKind::MyopicWorst, ordering, agent, rounds)?;
    Ok((a.theirs(), b.theirs()))
}

/// The scripts used for the indistinguishability check: a few fixed patterns
/// plus seeded random play.
pub fn indistinguishable_scripts(count: usize) -> Vec<ExploiterSpec> {
    let fixed = [vec![0], vec![0, 1, 2], vec![2, 1, 0], vec![0, 0, 1, 1, 2, 2], vec![1, 2, 2, 0]];
    fixed
        .into_iter()
        .map(ExploiterSpec::Script)
        .chain((0..).map(ExploiterSpec::Random))
        .take(count)
        .collect()
}

pub fn check_indistinguishable(scripts: usize, rounds: usize) -> Result<CheckResult, ArenaError> {
    let mut failure = None;
    for (k, agent) in indistinguishable_scripts(scripts).iter().enumerate() {
        let ordering = random_ordering(3, k as u64);
        let (a, b) = indistinguishable_streams(agent, &ordering, rounds)?;
        if a != b {
            let at = a.iter().zip(&b).position(|(x, y)| x != y).unwrap_or(0);
            failure = Some(format!("{agent}: streams differ at round {}", at + 1));
            break;
        }
    }
    Ok(CheckResult::new(
        "indistinguishable",
        failure,
        format!("{scripts} scripts x {rounds} rounds identical"),
    ))
}

/// Every draw from the generator is permissible.
pub fn check_generator(ns: std::ops::RangeInclusive<usize>, draws: u64) -> CheckResult {
    let failure = ns.clone().find_map(|n| {
        (0..draws).find_map(|seed| match generate_permissible(n, seed) {
            Ok(m) if m.validate().passed() => None,
            Ok(m) => Some(format!("n = {n}, seed {seed}: {}", m.validate())),
            Err(e) => Some(format!("n = {n}, seed {seed}: {e}")),
        })
    });
    CheckResult::new(
        "generator",
        failure,
        format!("{draws} draws per n in {}..={}", ns.start(), ns.end()),
    )
}

/// Independent brute force over all 3^9 sign tables of size three: keep the
/// antisymmetric, zero-diagonal, permissible ones.
fn brute_force_permissible_3() -> Vec<Vec<i8>> {
    let mut out = Vec::new();
    for code in 0..3usize.pow(9) {
        let mut c = code;
        let cells: Vec<i8> = (0..9)
            .map(|_| {
                let v = (c % 3) as i8 - 1;
                c /= 3;
                v
            })
            .collect();
        let at = |i: usize, j: usize| cells[i * 3 + j];
        let antisymmetric = (0..3).all(|i| (0..3).all(|j| at(i, j) == -at(j, i)));
        let permissible = (0..3).all(|i| (0..3).any(|j| at(i, j) == 1) && (0..3).any(|j| at(i, j) == -1));
        if antisymmetric && permissible {
            out.push(cells);
        }
    }
    out.sort();
    out
}

/// Enumeration, validation and generation agree with brute force at n = 3.
pub fn check_enumeration_oracle(draws: u64) -> CheckResult {
    let oracle = brute_force_permissible_3();
    let enumerated: Vec<GameMatrix> = enumerate_antisymmetric(3);
    let mut ours: Vec<Vec<i8>> = enumerated
        .iter()
        .filter(|m| m.validate().passed())
        .map(|m| m.entries().to_vec())
        .collect();
    ours.sort();
    let mut failure = None;
    if enumerated.len() != 27 {
        failure = Some(format!("{} antisymmetric tables, expected 27", enumerated.len()));
    } else if ours != oracle {
        failure = Some(format!("{} permissible by validation, {} by brute force", ours.len(), oracle.len()));
    } else {
        let mut seen = vec![false; oracle.len()];
        for seed in 0..draws {
            let m = generate_permissible(3, seed).expect("n = 3 is valid");
            match oracle.iter().position(|o| o == m.entries()) {
                Some(i) => seen[i] = true,
                None => {
                    failure = Some(format!("seed {seed} drew a table outside the oracle set"));
                    break;
                }
            }
        }
        if failure.is_none() && !seen.iter().all(|&s| s) {
            failure = Some("generator never drew some permissible table".into());
        }
    }
    CheckResult::new(
        "enumeration",
        failure,
        format!("{} permissible tables at n = 3", oracle.len()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_set_is_the_two_cycles() {
        assert_eq!(brute_force_permissible_3().len(), 2);
        assert!(check_enumeration_oracle(50).passed);
    }

    #[test]
    fn counterexample_holds() {
        assert!(check_counterexample(12).unwrap().passed);
    }

    #[test]
    fn indistinguishable_small() {
        let r = check_indistinguishable(3, 30).unwrap();
        assert!(r.passed, "{}", r.detail);
    }

    #[test]
    fn scripts_are_distinct() {
        let s = indistinguishable_scripts(10);
        assert_eq!(s.len(), 10);
        for i in 0..s.len() {
            for j in i + 1..s.len() {
                assert_ne!(s[i], s[j]);
            }
        }
    }
}
