use biasbreaker::cli::run;

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("biasbreaker").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn play_mbr_on_rps_writes_summary_with_96_wins() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.jsonl");
    let (code, out, _) = invoke(&[
        "play", "--game", "rps", "--opponent", "mbr", "--exploiter", "beat-mbr",
        "--rounds", "100", "--seed", "0", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("wins=96"), "{out}");
    let t = biasbreaker::arena::MatchTranscript::from_text(&std::fs::read_to_string(&path).unwrap())
        .unwrap();
    assert_eq!(t.wins, 96);
}

#[test]
fn play_gambler_csv_wins_from_round_3n() {
    let (code, out, _) = invoke(&[
        "play", "--game", "random:5", "--opponent", "gambler", "--exploiter", "beat-gambler",
        "--rounds", "200", "--seed", "7", "--format", "csv",
    ]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("round,our_action,opp_action,payoff,phase,predicted,correct"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 200);
    for r in rows.iter().filter(|r| r[0].parse::<usize>().unwrap() >= 15) {
        assert_eq!(r[3], "1", "round {} is not a win", r[0]);
    }
}

#[test]
fn mismatched_pairing_still_plays() {
    let (code, out, _) = invoke(&[
        "play", "--game", "rps", "--opponent", "mbr", "--exploiter", "beat-gambler",
        "--rounds", "50", "--format", "csv",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 51);
}

#[test]
fn play_is_byte_deterministic() {
    let args = [
        "play", "--game", "random:4", "--opponent", "ftl:3", "--exploiter", "beat-ftl:3",
        "--rounds", "300", "--seed", "5",
    ];
    assert_eq!(invoke(&args), invoke(&args));
}

#[test]
fn bad_specs_exit_2_with_message() {
    let (code, _, err) = invoke(&[
        "play", "--game", "rps", "--opponent", "copycat", "--exploiter", "beat-mbr", "--rounds", "5",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("copycat"), "{err}");
    let (code, _, _) = invoke(&["play", "--game", "rps", "--bogus"]);
    assert_eq!(code, 2);
}

#[test]
fn verify_restricted_range_of_passing_rows() {
    let dir = tempfile::tempdir().unwrap();
    let plan = dir.path().join("plan.toml");
    std::fs::write(
        &plan,
        r#"
[[row]]
name = "mbr"
opponent = "mbr"
exploiter = "beat-mbr"
n = [3, 4, 5]
rounds = 200
bounds = [{ kind = "suffix_all_wins", from = "n + 2" }]
"#,
    )
    .unwrap();
    let (code, out, _) =
        invoke(&["verify", "--suite", plan.to_str().unwrap(), "--trials", "3", "--n-range", "3..4"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("PASS mbr"), "{out}");
    assert!(out.contains("6/6"), "{out}");
}

#[test]
fn verify_missing_suite_names_the_path() {
    let (code, _, err) = invoke(&["verify", "--suite", "/no/such/plan.toml"]);
    assert_eq!(code, 2);
    assert!(err.contains("/no/such/plan.toml"), "{err}");
}

#[test]
fn demo_counterexample_prints_the_table() {
    let (code, out, _) = invoke(&["demo", "counterexample"]);
    assert_eq!(code, 0);
    let row = |label: &str| -> Vec<String> {
        let line = out.lines().find(|l| l.starts_with(label)).unwrap();
        line[32..].split_whitespace().map(str::to_string).collect()
    };
    assert_eq!(row("Anticipated"), vec!["1"; 6]);
    assert_eq!(row("Actual"), ["0", "-1", "-1", "0", "-1", "-1"]);
}

#[test]
fn demo_indistinguishable_and_unknown_demo() {
    let (code, out, _) = invoke(&["demo", "indistinguishable", "--rounds", "50"]);
    assert_eq!(code, 0);
    assert!(out.contains("Identical streams"));
    let (code, _, _) = invoke(&["demo", "tournament"]);
    assert_ne!(code, 0);
}

#[test]
fn gen_then_inspect_passes_validation() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.game");
    let p = path.to_str().unwrap();
    assert_eq!(invoke(&["gen", "--n", "4", "--seed", "2", "--out", p]).0, 0);
    let (code, out, _) = invoke(&["inspect", "--game", p]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("validation: pass"), "{out}");
}

#[test]
fn inspect_lists_broken_antisymmetry() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.game");
    std::fs::write(&path, r#"{"version": 1, "n": 3, "payoffs": [[0, 1, -1], [1, 0, 1], [1, -1, 0]]}"#)
        .unwrap();
    let (code, out, _) = invoke(&["inspect", "--game", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.to_lowercase().contains("antisymmetr"), "{out}");
}

#[test]
fn gen_rejects_small_n() {
    let (code, _, err) = invoke(&["gen", "--n", "2"]);
    assert_eq!(code, 2);
    assert!(err.contains("no permissible game exists for n < 3"), "{err}");
}
