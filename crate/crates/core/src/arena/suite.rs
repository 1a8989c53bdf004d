use std::fmt;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::checks::{
    check_counterexample, check_enumeration_oracle, check_generator, check_halving,
    check_indistinguishable, CheckResult, GOLDEN_COUNTEREXAMPLE_ROUNDS,
};
use super::{
    check_bookkeeping, replay_opponent, run_match, verify_bound, BoundSpec, BoundVars, GameSource,
    MatchConfig,
};

/// Environment variable capping suite parallelism.
pub const THREADS_VAR: &str = "BIASBREAKER_THREADS";

/// Library-wide checks a plan can ask for next to its match rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckName {
    Halving,
    Counterexample,
    Indistinguishable,
    Generator,
    Enumeration,
}

/// One family of matches: every `n` (and `r`) crossed with the trial seeds.
/// `{r}` inside the opponent, exploiter or game strings is replaced by the
/// row's window value; `{n}` in the game string by the action count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteRow {
    pub name: String,
    pub opponent: String,
    pub exploiter: String,
    pub n: Vec<usize>,
    #[serde(default)]
    pub r: Vec<usize>,
    pub rounds: usize,
    #[serde(default = "default_game")]
    pub game: String,
    #[serde(default)]
    pub bounds: Vec<BoundSpec>,
}

fn default_game() -> String {
    "random:{n}".to_string()
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuitePlan {
    #[serde(default, rename = "row")]
    pub rows: Vec<SuiteRow>,
    #[serde(default)]
    pub checks: Vec<CheckName>,
}

pub fn parse_suite(text: &str) -> Result<SuitePlan, String> {
    toml::from_str(text).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteSettings {
    pub trials: u64,
    pub seed: u64,
    /// Inclusive action-count filter.
    pub n_range: Option<(usize, usize)>,
    /// Where transcripts of failing matches are written.
    pub failure_dir: Option<PathBuf>,
}

impl Default for SuiteSettings {
    fn default() -> Self {
        SuiteSettings { trials: 20, seed: 0, n_range: None, failure_dir: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchFailure {
    pub n: usize,
    pub r: Option<usize>,
    pub seed: u64,
    pub reasons: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowResult {
    pub name: String,
    pub matches: usize,
    pub passed: usize,
    pub failures: Vec<MatchFailure>,
}

impl RowResult {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub rows: Vec<RowResult>,
    pub checks: Vec<CheckResult>,
}

impl SuiteSummary {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(RowResult::ok) && self.checks.iter().all(|c| c.passed)
    }

    pub fn row(&self, name: &str) -> Option<&RowResult> {
        self.rows.iter().find(|r| r.name == name)
    }
}

impl fmt::Display for SuiteSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            let verdict = if row.ok() { "PASS" } else { "FAIL" };
            writeln!(f, "{verdict} {:<28} {}/{} matches", row.name, row.passed, row.matches)?;
            for fail in row.failures.iter().take(5) {
                let r = fail.r.map_or(String::new(), |r| format!(" r={r}"));
                writeln!(f, "     n={}{r} seed={}: {}", fail.n, fail.seed, fail.reasons.join("; "))?;
            }
        }
        for c in &self.checks {
            let verdict = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "{verdict} {:<28} {}", c.name, c.detail)?;
        }
        let total = self.rows.len() + self.checks.len();
        let failed = self.rows.iter().filter(|r| !r.ok()).count()
            + self.checks.iter().filter(|c| !c.passed).count();
        write!(f, "{} of {total} rows passed", total - failed)
    }
}

fn bound(kind: &str, expr: &str) -> BoundSpec {
    let e = expr.to_string();
    match kind {
        "suffix" => BoundSpec::SuffixAllWins { from: e },
        "total" => BoundSpec::TotalNonwinsLe { limit: e },
        "learning" => BoundSpec::LearningNonwinsLe { limit: e },
        "length" => BoundSpec::LearningLenEq { len: e },
        _ => BoundSpec::PhaseCoupled,
    }
}

fn row(name: &str, opp: &str, agent: &str, n: &[usize], r: &[usize], rounds: usize, bounds: Vec<BoundSpec>) -> SuiteRow {
    SuiteRow {
        name: name.into(),
        opponent: opp.into(),
        exploiter: agent.into(),
        n: n.to_vec(),
        r: r.to_vec(),
        rounds,
        game: default_game(),
        bounds,
    }
}

/// The built-in verification plan.
pub fn default_suite() -> SuitePlan {
    let all = [3, 4, 5, 6, 7, 8];
    let coupled = || bound("coupled", "");
    let final_half = || bound("suffix", "rounds / 2 + 1");
    SuitePlan {
        rows: vec![
            row("mbr", "mbr", "beat-mbr", &all, &[], 1000, vec![bound("suffix", "n + 2"), coupled()]),
            row("gambler", "gambler", "beat-gambler", &all, &[], 1000, vec![bound("suffix", "3 * n"), coupled()]),
            row("wsls-shift", "wsls:shift", "beat-wsls-shift", &all, &[], 1000, vec![bound("total", "2 * n^2 - 2 * n + 1")]),
            row("wsls-stay", "wsls:stay", "beat-wsls-stay", &all, &[], 1000, vec![bound("total", "n^2 - n + 2")]),
            row(
                "ftl",
                "ftl",
                "beat-ftl",
                &[3, 4, 5],
                &[],
                3000,
                vec![bound("length", "(3^n - 1) / 2 + 1"), coupled(), final_half()],
            ),
            row(
                "ftl-limited",
                "ftl:{r}",
                "beat-ftl:{r}",
                &[3, 4, 5],
                &[1, 3, 5],
                3000,
                vec![bound("length", "n * r + 1"), coupled(), final_half()],
            ),
            row(
                "hap",
                "hap",
                "beat-hap",
                &[3, 4],
                &[],
                3000,
                vec![
                    bound("learning", "n * 2^n - 2^n - n + 1 + 4^(n - 1)"),
                    coupled(),
                    final_half(),
                ],
            ),
            row(
                "generic-br",
                "ftl:{r}",
                "generic-br:{r}",
                &all,
                &[1, 3, 5],
                200,
                vec![bound("length", "r * n + 1"), bound("learning", "r * n + 1")],
            ),
            row(
                "wsls-auto-shift",
                "wsls:shift",
                "wsls-auto",
                &all,
                &[],
                1000,
                vec![bound("total", "2 * n^2 - 2 * n + 1 + n + 1")],
            ),
            row(
                "wsls-auto-stay",
                "wsls:stay",
                "wsls-auto",
                &all,
                &[],
                1000,
                vec![bound("total", "n^2 - n + 2 + n + 1")],
            ),
        ],
        checks: vec![
            CheckName::Halving,
            CheckName::Counterexample,
            CheckName::Indistinguishable,
            CheckName::Generator,
            CheckName::Enumeration,
        ],
    }
}

#[derive(Debug, Clone)]
struct Case {
    row: usize,
    n: usize,
    r: Option<usize>,
    seed: u64,
}

fn fill(template: &str, n: usize, r: Option<usize>) -> String {
    let s = template.replace("{n}", &n.to_string());
    match r {
        Some(r) => s.replace("{r}", &r.to_string()),
        None => s,
    }
}

/// Runs one match and every check the row and the arena require. Returns the
/// reasons it failed, if any.
fn run_case(row: &SuiteRow, case: &Case, failure_dir: Option<&PathBuf>) -> Vec<String> {
    let parsed = (|| -> Result<MatchConfig, String> {
        let game: GameSource = fill(&row.game, case.n, case.r).parse().map_err(|e| format!("{e}"))?;
        let opponent = fill(&row.opponent, case.n, case.r).parse().map_err(|e| format!("{e}"))?;
        let exploiter = fill(&row.exploiter, case.n, case.r).parse().map_err(|e| format!("{e}"))?;
        Ok(MatchConfig::new(game, opponent, exploiter, row.rounds, case.seed))
    })();
    let config = match parsed {
        Ok(c) => c,
        Err(e) => return vec![e],
    };
    let out = match run_match(&config) {
        Ok(out) => out,
        Err(e) => return vec![e.to_string()],
    };
    let t = &out.transcript;
    let mut reasons = Vec::new();
    if let Some(fault) = &t.fault {
        reasons.push(format!("fault: {fault}"));
    }
    if out.matrix.n() != case.n {
        reasons.push(format!("game has {} actions, row expects {}", out.matrix.n(), case.n));
    }
    let vars = BoundVars { n: out.matrix.n(), r: case.r, rounds: row.rounds };
    for b in &row.bounds {
        let report = verify_bound(t, b, vars);
        if !report.passed {
            reasons.push(format!("{}: {}", report.bound, report.detail));
        }
    }
    reasons.extend(t.audit.failures());
    if let Err(e) = check_bookkeeping(t, &out.matrix) {
        reasons.push(e);
    }
    if replay_opponent(&out.matrix, out.kind, &out.ordering, &t.ours()) != t.theirs() {
        reasons.push("replaying our actions did not reproduce the opponent".into());
    }
    if !reasons.is_empty() {
        if let Some(dir) = failure_dir {
            let r = case.r.map_or(String::new(), |r| format!("-r{r}"));
            let path = dir.join(format!("{}-n{}{r}-s{}.jsonl", row.name, case.n, case.seed));
            if let Err(e) = std::fs::create_dir_all(dir).and_then(|_| std::fs::write(&path, t.to_text())) {
                reasons.push(format!("could not write {}: {e}", path.display()));
            }
        }
    }
    reasons
}

fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_VAR).ok()?.trim().parse().ok().filter(|&t| t >= 1)
}

fn run_check(name: CheckName, settings: &SuiteSettings) -> CheckResult {
    let seeds = settings.seed..settings.seed + settings.trials.max(1);
    let wrap = |name: &str, r: Result<CheckResult, super::ArenaError>| {
        r.unwrap_or_else(|e| CheckResult { name: name.into(), passed: false, detail: e.to_string() })
    };
    match name {
        CheckName::Halving => check_halving(seeds, 500),
        CheckName::Counterexample => {
            wrap("counterexample", check_counterexample(GOLDEN_COUNTEREXAMPLE_ROUNDS))
        }
        CheckName::Indistinguishable => wrap("indistinguishable", check_indistinguishable(10, 200)),
        CheckName::Generator => check_generator(3..=8, 1000),
        CheckName::Enumeration => check_enumeration_oracle(1000),
    }
}

/// Runs every row and check of the plan. Matches may run in parallel; results
/// come back in plan order.
pub fn run_suite(plan: &SuitePlan, settings: &SuiteSettings) -> SuiteSummary {
    let in_range = |n: usize| settings.n_range.is_none_or(|(lo, hi)| (lo..=hi).contains(&n));
    let mut cases = Vec::new();
    for (i, row) in plan.rows.iter().enumerate() {
        let windows: Vec<Option<usize>> =
            if row.r.is_empty() { vec![None] } else { row.r.iter().copied().map(Some).collect() };
        for &n in row.n.iter().filter(|&&n| in_range(n)) {
            for &r in &windows {
                for seed in settings.seed..settings.seed + settings.trials {
                    cases.push(Case { row: i, n, r, seed });
                }
            }
        }
    }
    let work = || {
        let results: Vec<Vec<String>> = cases
            .par_iter()
            .map(|c| run_case(&plan.rows[c.row], c, settings.failure_dir.as_ref()))
            .collect();
        let checks: Vec<CheckResult> =
            plan.checks.par_iter().map(|&c| run_check(c, settings)).collect();
        (results, checks)
    };
    let (results, checks) = match thread_cap() {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map(|pool| pool.install(work))
            .unwrap_or_else(|_| work()),
        None => work(),
    };
    let mut rows: Vec<RowResult> = plan
        .rows
        .iter()
        .map(|r| RowResult { name: r.name.clone(), matches: 0, passed: 0, failures: Vec::new() })
        .collect();
    for (case, reasons) in cases.iter().zip(results) {
        let row = &mut rows[case.row];
        row.matches += 1;
        if reasons.is_empty() {
            row.passed += 1;
        } else {
            row.failures.push(MatchFailure { n: case.n, r: case.r, seed: case.seed, reasons });
        }
    }
    SuiteSummary { rows, checks }
}
