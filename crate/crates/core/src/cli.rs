//! Command-line front end.
//!
//! Exit status: 0 when the command completed and every requested check
//! passed, 1 when a check failed or a match faulted, 2 for bad input.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::arena::{
    counterexample_config, default_suite, indistinguishable_streams, parse_suite, run_match,
    run_suite, GameSource, MatchConfig, SuitePlan, SuiteSettings,
};
use crate::exploiters::ExploiterSpec;
use crate::game::{
    builtin_game, generate_permissible, parse_game_with, serialize_game, ActionOrdering,
    ParseOptions,
};
use crate::opponents::OpponentSpec;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_BAD_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "biasbreaker", version, about = "Beat biased opponents without seeing payoffs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Demo {
    Counterexample,
    Indistinguishable,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a single match and print its transcript.
    Play {
        /// Built-in name, game file path, or random:N.
        #[arg(long)]
        game: String,
        /// e.g. mbr, wsls:stay, ftl:3, hap@2,0,1
        #[arg(long)]
        opponent: String,
        /// e.g. beat-mbr, beat-ftl:3, generic-br:2, wsls-auto
        #[arg(long)]
        exploiter: String,
        #[arg(long)]
        rounds: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Write the transcript here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite and print the summary.
    Verify {
        /// `default` or a TOML plan file.
        #[arg(long, default_value = "default")]
        suite: String,
        #[arg(long, default_value_t = 20)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Inclusive action-count filter, e.g. 3..4
        #[arg(long)]
        n_range: Option<String>,
        /// Directory for transcripts of failing matches.
        #[arg(long)]
        failures: Option<PathBuf>,
    },
    /// Print one of the built-in demonstrations.
    Demo {
        #[arg(value_enum)]
        which: Demo,
        #[arg(long)]
        rounds: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write a random permissible game file.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a game file with its validation report and who beats whom.
    Inspect {
        #[arg(long)]
        game: String,
    },
}

struct Failure {
    code: i32,
    message: String,
}

fn bad_input(message: impl ToString) -> Failure {
    Failure { code: EXIT_BAD_INPUT, message: message.to_string() }
}

type CmdResult = Result<i32, Failure>;

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_BAD_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.command {
        Command::Play { game, opponent, exploiter, rounds, seed, format, out: path } => {
            play(&game, &opponent, &exploiter, rounds, seed, format, path, out, err)
        }
        Command::Verify { suite, trials, seed, n_range, failures } => {
            verify(&suite, trials, seed, n_range.as_deref(), failures, out)
        }
        Command::Demo { which: Demo::Counterexample, rounds, .. } => {
            counterexample(rounds.unwrap_or(6), out)
        }
        Command::Demo { which: Demo::Indistinguishable, rounds, seed } => {
            indistinguishable(rounds.unwrap_or(50), seed, out)
        }
        Command::Gen { n, seed, out: path } => gen(n, seed, path, out),
        Command::Inspect { game } => inspect(&game, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn io(e: std::io::Error) -> Failure {
    Failure { code: EXIT_CHECK_FAILED, message: e.to_string() }
}

#[allow(clippy::too_many_arguments)]
fn play(
    game: &str,
    opponent: &str,
    exploiter: &str,
    rounds: usize,
    seed: u64,
    format: Format,
    path: Option<PathBuf>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let game: GameSource = game.parse().map_err(bad_input)?;
    let opponent: OpponentSpec = opponent.parse().map_err(bad_input)?;
    let exploiter: ExploiterSpec = exploiter.parse().map_err(bad_input)?;
    if rounds == 0 {
        return Err(bad_input("--rounds must be at least 1"));
    }
    let config = MatchConfig::new(game, opponent, exploiter, rounds, seed);
    let outcome = run_match(&config).map_err(bad_input)?;
    let t = &outcome.transcript;
    let body = match format {
        Format::Text => t.to_text(),
        Format::Csv => t.to_csv(),
    };
    match &path {
        Some(p) => {
            std::fs::write(p, body).map_err(|e| bad_input(format!("{}: {e}", p.display())))?;
            writeln!(out, "wins={} ties={} losses={} rounds={}", t.wins, t.ties, t.losses, t.records.len())
                .map_err(io)?;
        }
        None => out.write_all(body.as_bytes()).map_err(io)?,
    }
    match &t.fault {
        Some(fault) => {
            writeln!(err, "match stopped early: {fault}").map_err(io)?;
            Ok(EXIT_CHECK_FAILED)
        }
        None => Ok(EXIT_OK),
    }
}

fn parse_range(s: &str) -> Result<(usize, usize), Failure> {
    let bad = || bad_input(format!("--n-range expects A..B, got `{s}`"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

fn verify(
    suite: &str,
    trials: u64,
    seed: u64,
    n_range: Option<&str>,
    failures: Option<PathBuf>,
    out: &mut dyn Write,
) -> CmdResult {
    let plan: SuitePlan = if suite == "default" {
        default_suite()
    } else {
        let text = std::fs::read_to_string(suite)
            .map_err(|e| bad_input(format!("cannot read suite file {suite}: {e}")))?;
        parse_suite(&text).map_err(|e| bad_input(format!("malformed suite file {suite}: {e}")))?
    };
    let n_range = n_range.map(parse_range).transpose()?;
    let settings = SuiteSettings { trials, seed, n_range, failure_dir: failures };
    let summary = run_suite(&plan, &settings);
    writeln!(out, "{summary}").map_err(io)?;
    Ok(if summary.passed() { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn counterexample(rounds: usize, out: &mut dyn Write) -> CmdResult {
    let outcome = run_match(&counterexample_config(rounds.max(1))).map_err(bad_input)?;
    let hypothesis = builtin_game("m_lex").map_err(bad_input)?;
    let m = &outcome.matrix;
    let records = &outcome.transcript.records;
    let cell = |s: String| format!("{s:>4}");
    let mut lines = vec![
        format!("{:<32}", "Round"),
        format!("{:<32}", "MBR's action"),
        format!("{:<32}", "Our action"),
        format!("{:<32}", "Anticipated payoff (under M)"),
        format!("{:<32}", "Actual payoff (under M*)"),
    ];
    for r in records {
        lines[0] += &cell(r.round.to_string());
        lines[1] += &cell(m.action_label(r.theirs));
        lines[2] += &cell(m.action_label(r.ours));
        lines[3] += &cell(hypothesis.get(r.ours, r.theirs).to_string());
        lines[4] += &cell(r.payoff.to_string());
    }
    for l in lines {
        writeln!(out, "{}", l.trim_end()).map_err(io)?;
    }
    writeln!(
        out,
        "\nThe hypothesis M agrees with every opponent move, yet best responses under it never win under M*."
    )
    .map_err(io)?;
    let cycle_ok = records.iter().all(|r| {
        let k = (r.round - 1) % 3;
        (r.theirs, r.ours, r.payoff) == ([0, 2, 1][k], [5, 4, 3][k], [0, -1, -1][k])
    });
    Ok(if cycle_ok && outcome.transcript.fault.is_none() { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn indistinguishable(rounds: usize, seed: u64, out: &mut dyn Write) -> CmdResult {
    let agent = ExploiterSpec::Random(seed);
    let ordering = ActionOrdering::identity(3);
    let (a, b) = indistinguishable_streams(&agent, &ordering, rounds.max(1)).map_err(bad_input)?;
    let rps = builtin_game("rps").map_err(bad_input)?;
    writeln!(out, "{:>5}  {:>14}  {:>22}", "round", "mbr on rps", "mwr on rps_reverse").map_err(io)?;
    for (k, (x, y)) in a.iter().zip(&b).enumerate() {
        writeln!(out, "{:>5}  {:>14}  {:>22}", k + 1, rps.action_label(*x), rps.action_label(*y))
            .map_err(io)?;
    }
    if a == b {
        writeln!(
            out,
            "\nIdentical streams: from actions alone the opponent could be either strategy."
        )
        .map_err(io)?;
        Ok(EXIT_OK)
    } else {
        writeln!(out, "\nStreams differ.").map_err(io)?;
        Ok(EXIT_CHECK_FAILED)
    }
}

fn gen(n: usize, seed: u64, path: Option<PathBuf>, out: &mut dyn Write) -> CmdResult {
    if n < 3 {
        return Err(bad_input("no permissible game exists for n < 3"));
    }
    let m = generate_permissible(n, seed).map_err(bad_input)?;
    let text = serialize_game(&m);
    match path {
        Some(p) => std::fs::write(&p, text).map_err(|e| bad_input(format!("{}: {e}", p.display())))?,
        None => out.write_all(text.as_bytes()).map_err(io)?,
    }
    Ok(EXIT_OK)
}

fn inspect(path: &str, out: &mut dyn Write) -> CmdResult {
    let text = std::fs::read_to_string(path)
        .map_err(|e| bad_input(format!("cannot read game file {path}: {e}")))?;
    let m = parse_game_with(&text, ParseOptions { allow_nonpermissible: true })
        .map_err(|e| bad_input(format!("{path}: {e}")))?;
    let report = m.validate();
    writeln!(out, "{m}").map_err(io)?;
    writeln!(out, "validation: {report}").map_err(io)?;
    let names = |v: Vec<usize>| -> String {
        let v: Vec<String> = v.into_iter().map(|a| m.action_label(a)).collect();
        if v.is_empty() { "-".into() } else { v.join(" ") }
    };
    for a in 0..m.n() {
        writeln!(
            out,
            "{:>4} beats: {:<16} loses to: {}",
            m.action_label(a),
            names(m.beaten_by(a)),
            names(m.beaters_of(a))
        )
        .map_err(io)?;
    }
    Ok(if report.passed() { EXIT_OK } else { EXIT_CHECK_FAILED })
}
