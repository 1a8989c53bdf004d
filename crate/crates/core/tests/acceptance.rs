//! End-to-end acceptance run. Plays the default suite over seeds 0..19 and
//! prints one PASS/FAIL line per criterion, then fails if any criterion did.

use std::io::Write;

use biasbreaker::arena::{
    counterexample_config, default_suite, run_match, run_suite, SuiteSettings, SuiteSummary,
    GOLDEN_COUNTEREXAMPLE_ROUNDS,
};
use biasbreaker::exploiters::ExploiterSpec;
use biasbreaker::arena::{GameSource, MatchConfig};
use biasbreaker::opponents::{OpponentKind, OpponentSpec, TiePolicy};
use biasbreaker::predictors::HypothesisSpace;

const TRIALS: u64 = 20;

struct Line {
    id: u32,
    what: &'static str,
    passed: bool,
    detail: String,
}

fn row_line(s: &SuiteSummary, id: u32, what: &'static str, rows: &[&str]) -> Line {
    let mut passed = true;
    let mut detail = Vec::new();
    for name in rows {
        match s.row(name) {
            Some(r) => {
                passed &= r.ok();
                let mut d = format!("{name} {}/{}", r.passed, r.matches);
                if let Some(f) = r.failures.first() {
                    d.push_str(&format!(" (first: n={} seed={} {})", f.n, f.seed, f.reasons.join("; ")));
                }
                detail.push(d);
            }
            None => {
                passed = false;
                detail.push(format!("{name} missing"));
            }
        }
    }
    Line { id, what, passed, detail: detail.join(", ") }
}

fn check_line(s: &SuiteSummary, id: u32, what: &'static str, names: &[&str]) -> Line {
    let mut passed = true;
    let mut detail = Vec::new();
    for name in names {
        match s.checks.iter().find(|c| c.name == *name) {
            Some(c) => {
                passed &= c.passed;
                detail.push(format!("{name}: {}", c.detail));
            }
            None => {
                passed = false;
                detail.push(format!("{name} missing"));
            }
        }
    }
    Line { id, what, passed, detail: detail.join(", ") }
}

/// Failure reasons in the ftl row, split by which property they break.
fn ftl_breakdown(s: &SuiteSummary) -> String {
    let Some(row) = s.row("ftl") else { return String::new() };
    let count = |needle: &str| {
        row.failures.iter().filter(|f| f.reasons.iter().any(|r| r.contains(needle))).count()
    };
    format!(
        "length {} / flagged {} / final half {} / volume {} / feasibility {}",
        count("learning length"),
        count("flagged mistakes"),
        count("all wins from round"),
        count("volume"),
        count("feasibility"),
    )
}

fn golden_counterexample() -> Line {
    let golden = include_str!("golden/counterexample.csv");
    let produced = run_match(&counterexample_config(GOLDEN_COUNTEREXAMPLE_ROUNDS))
        .map(|out| out.transcript.to_csv());
    let (passed, detail) = match produced {
        Ok(csv) if csv == golden => (true, "golden transcript byte-identical".to_string()),
        Ok(csv) => {
            let line = csv.lines().zip(golden.lines()).position(|(a, b)| a != b);
            (false, format!("differs from golden at line {line:?}"))
        }
        Err(e) => (false, e.to_string()),
    };
    Line { id: 9, what: "counterexample golden transcript", passed, detail }
}

fn halving_space_sizes() -> Line {
    let size = HypothesisSpace::new(&[OpponentKind::MyopicBest], 3).map(|s| s.initial_len());
    let passed = size == Ok(162);
    let detail = format!("{{mbr}} at n = 3 has {size:?} hypotheses, bound 8");
    Line { id: 8, what: "halving space size", passed, detail }
}

/// The composite agent names the right tie policy within n + 1 rounds.
fn wsls_detection() -> Line {
    let mut bad = Vec::new();
    let mut total = 0;
    for policy in [TiePolicy::Shift, TiePolicy::Stay] {
        for n in 3..=8 {
            for seed in 0..TRIALS {
                total += 1;
                let config = MatchConfig::new(
                    GameSource::Random(n),
                    OpponentSpec { kind: OpponentKind::WinStayLoseShift(policy), ordering: None },
                    ExploiterSpec::WslsAuto,
                    1000,
                    seed,
                );
                let ok = match run_match(&config) {
                    Ok(out) => {
                        out.report.detected_policy == Some(policy)
                            && out.report.probe_rounds.is_some_and(|p| p <= n + 1)
                    }
                    Err(_) => false,
                };
                if !ok {
                    bad.push(format!("{policy:?} n={n} seed={seed}"));
                }
            }
        }
    }
    Line {
        id: 12,
        what: "tie policy detected within n + 1 rounds",
        passed: bad.is_empty(),
        detail: format!("{}/{total} correct {}", total - bad.len(), bad.join(", ")),
    }
}

/// Playing a configuration twice gives identical transcripts, and the text
/// form reads back to the same transcript.
fn determinism() -> Line {
    let plan = default_suite();
    let mut bad = Vec::new();
    for row in &plan.rows {
        let n = row.n[0];
        let r = row.r.first().copied();
        let fill = |s: &str| {
            let s = s.replace("{n}", &n.to_string());
            r.map_or(s.clone(), |r| s.replace("{r}", &r.to_string()))
        };
        let config = MatchConfig::new(
            fill(&row.game).parse().unwrap(),
            fill(&row.opponent).parse().unwrap(),
            fill(&row.exploiter).parse().unwrap(),
            row.rounds.min(500),
            7,
        );
        let a = run_match(&config).map(|o| o.transcript.to_text());
        let b = run_match(&config).map(|o| o.transcript.to_text());
        let same = matches!((&a, &b), (Ok(x), Ok(y)) if x == y);
        let reread = a.as_ref().ok().and_then(|text| {
            biasbreaker::arena::MatchTranscript::from_text(text).ok().map(|t| t.to_text() == *text)
        });
        if !same || reread != Some(true) {
            bad.push(row.name.clone());
        }
    }
    Line {
        id: 13,
        what: "replay determinism",
        passed: bad.is_empty(),
        detail: if bad.is_empty() { "every row replays identically".into() } else { bad.join(", ") },
    }
}

#[test]
fn acceptance() {
    let summary = run_suite(
        &default_suite(),
        &SuiteSettings { trials: TRIALS, seed: 0, n_range: None, failure_dir: None },
    );

    let mut lines = vec![
        row_line(&summary, 1, "MBR: all wins from round n + 2", &["mbr"]),
        row_line(&summary, 2, "gambler: all wins from round 3n", &["gambler"]),
        row_line(&summary, 3, "WSLS shift: non-wins <= 2n^2 - 2n + 1", &["wsls-shift"]),
        row_line(&summary, 4, "WSLS stay: non-wins <= n^2 - n + 2", &["wsls-stay"]),
        row_line(&summary, 5, "FTL: opening length, flagged losses, final half, volume", &["ftl"]),
        row_line(&summary, 6, "FTL window r: opening length, flagged losses, final half", &["ftl-limited"]),
        row_line(&summary, 7, "HAP: switch order, flagged losses, final half", &["hap"]),
        check_line(&summary, 8, "halving mistakes within log2 of the space", &["halving"]),
        halving_space_sizes(),
        check_line(&summary, 9, "counterexample cycle", &["counterexample"]),
        golden_counterexample(),
        check_line(&summary, 10, "MBR/MWR streams indistinguishable", &["indistinguishable"]),
        row_line(&summary, 11, "generic learner: audit and learning non-wins <= cn + 1", &["generic-br"]),
        row_line(&summary, 12, "WSLS auto: bound plus n + 1", &["wsls-auto-shift", "wsls-auto-stay"]),
        wsls_detection(),
        check_line(&summary, 13, "generator validity and n = 3 oracle", &["generator", "enumeration"]),
        determinism(),
    ];
    if let Some(l) = lines.iter_mut().find(|l| l.id == 5) {
        l.detail = format!("{} [{}]", l.detail, ftl_breakdown(&summary));
    }
    // Bookkeeping and replay run on every suite match; surface them under 13.
    let bookkeeping: Vec<String> = summary
        .rows
        .iter()
        .flat_map(|r| r.failures.iter().map(move |f| (r, f)))
        .filter(|(_, f)| {
            f.reasons.iter().any(|x| x.contains("bookkeeping") || x.contains("counters") || x.contains("replaying"))
        })
        .map(|(r, f)| format!("{} n={} seed={}", r.name, f.n, f.seed))
        .collect();
    lines.push(Line {
        id: 13,
        what: "zero-sum bookkeeping and opponent replay on every suite match",
        passed: bookkeeping.is_empty(),
        detail: if bookkeeping.is_empty() { "clean".into() } else { bookkeeping.join(", ") },
    });
    lines.sort_by_key(|l| l.id);

    // Written straight to stdout so the lines show without --nocapture.
    let mut out = std::io::stdout().lock();
    let mut failed = Vec::new();
    writeln!(out).unwrap();
    for id in 1..=13 {
        let group: Vec<&Line> = lines.iter().filter(|l| l.id == id).collect();
        let ok = group.iter().all(|l| l.passed);
        if !ok {
            failed.push(id);
        }
        let detail: Vec<String> = group
            .iter()
            .map(|l| format!("{}{}: {}", if l.passed { "" } else { "FAILED " }, l.what, l.detail))
            .collect();
        writeln!(out, "criterion {id:>2} {}  {}", if ok { "PASS" } else { "FAIL" }, detail.join(" | ")).unwrap();
    }
    drop(out);
    assert!(failed.is_empty(), "criteria failed: {failed:?}");
}
