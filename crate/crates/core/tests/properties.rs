use biasbreaker::arena::{
    check_bookkeeping, replay_opponent, run_match, verify_bound, BoundSpec, BoundVars, GameSource,
    MatchConfig, MatchTranscript,
};
use biasbreaker::exploiters::{Decision, ExploitError, Exploiter, ExploiterSpec, Observation};
use biasbreaker::opponents::OpponentSpec;
use biasbreaker::Action;
use proptest::prelude::*;

/// The only way to obtain an exploiter is from its spec, n and the horizon,
/// and the only thing it sees each round is an action-only observation. These
/// coercions stop compiling if either surface grows a matrix or payoff input.
#[test]
fn exploiters_see_only_actions() {
    type Build = fn(&ExploiterSpec, usize, usize) -> Result<Box<dyn Exploiter>, ExploitError>;
    let _build: Build = ExploiterSpec::build;
    let _observe: fn(usize, &'static [Action], &'static [Action]) -> Observation<'static> =
        Observation::new;
    let _act: for<'b> fn(&mut dyn Exploiter, &Observation<'b>) -> Result<Decision, ExploitError> =
        |e, o| e.act(o);
}

const OPPONENTS: [&str; 8] = ["mbr", "mwr", "gambler", "wsls:shift", "wsls:stay", "ftl", "ftl:2", "hap"];

fn config(n: usize, opponent: &str, exploiter: ExploiterSpec, rounds: usize, seed: u64) -> MatchConfig {
    let opponent: OpponentSpec = opponent.parse().unwrap();
    MatchConfig::new(GameSource::Random(n), opponent, exploiter, rounds, seed)
}

fn exploiter() -> impl Strategy<Value = ExploiterSpec> {
    prop_oneof![
        any::<u64>().prop_map(ExploiterSpec::Random),
        proptest::collection::vec(0usize..3, 1..6).prop_map(ExploiterSpec::Script),
        Just(ExploiterSpec::BeatMbr),
        Just(ExploiterSpec::BeatGambler),
        Just(ExploiterSpec::WslsAuto),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn every_match_is_zero_sum_and_replays(
        n in 3usize..7,
        opp in 0usize..OPPONENTS.len(),
        agent in exploiter(),
        rounds in 1usize..150,
        seed in 0u64..1000,
    ) {
        let out = run_match(&config(n, OPPONENTS[opp], agent, rounds, seed)).unwrap();
        let t = &out.transcript;
        prop_assert!(t.fault.is_none(), "{:?}", t.fault);
        prop_assert_eq!(t.records.len(), rounds);
        prop_assert_eq!(check_bookkeeping(t, &out.matrix), Ok(()));
        prop_assert_eq!(replay_opponent(&out.matrix, out.kind, &out.ordering, &t.ours()), t.theirs());

        let text = t.to_text();
        let back = MatchTranscript::from_text(&text).unwrap();
        prop_assert_eq!(back.to_text(), text);
        prop_assert_eq!(back.to_csv(), t.to_csv());
    }

    #[test]
    fn longer_matches_extend_shorter_ones(
        n in 3usize..7,
        opp in 0usize..OPPONENTS.len(),
        script in proptest::collection::vec(0usize..3, 1..6),
        rounds in 1usize..100,
        seed in 0u64..1000,
    ) {
        let spec = ExploiterSpec::Script(script);
        let short = run_match(&config(n, OPPONENTS[opp], spec.clone(), rounds, seed)).unwrap();
        let long = run_match(&config(n, OPPONENTS[opp], spec, rounds * 2, seed)).unwrap();
        prop_assert_eq!(&long.transcript.records[..rounds], &short.transcript.records[..]);
    }

    #[test]
    fn suffix_wins_persist_when_rounds_grow(n in 3usize..8, seed in 0u64..1000, rounds in 20usize..200) {
        for (opp, agent, from) in [("mbr", ExploiterSpec::BeatMbr, "n + 2"), ("gambler", ExploiterSpec::BeatGambler, "3 * n")] {
            let bound = BoundSpec::SuffixAllWins { from: from.into() };
            let short = run_match(&config(n, opp, agent.clone(), rounds, seed)).unwrap();
            let long = run_match(&config(n, opp, agent, rounds * 3, seed)).unwrap();
            let vars = |rounds| BoundVars { n, r: None, rounds };
            let a = verify_bound(&short.transcript, &bound, vars(rounds));
            let b = verify_bound(&long.transcript, &bound, vars(rounds * 3));
            prop_assert!(a.passed && b.passed, "{} / {}", a.detail, b.detail);
        }
    }
}
