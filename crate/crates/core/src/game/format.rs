//! Versioned JSON game files.
//!
//! ```text
//! {
//!   "version": 1,
//!   "n": 3,
//!   "payoffs": [
//!     [0, -1, 1],
//!     [1, 0, -1],
//!     [-1, 1, 0]
//!   ],
//!   "actions": ["R", "P", "S"]
//! }
//! ```
//!
//! `serialize_game` always emits exactly this layout, so a canonical document
//! survives a parse/serialize cycle byte for byte.

use std::fmt::Write as _;

use serde::Deserialize;

use super::{GameError, GameMatrix};

pub const FORMAT_VERSION: u64 = 1;

#[derive(Debug, Clone, Copy, Default)]
pub struct ParseOptions {
    /// Accept tables that are square and in-domain but not permissible.
    pub allow_nonpermissible: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGame {
    version: u64,
    n: usize,
    payoffs: Vec<Vec<i64>>,
    #[serde(default)]
    actions: Option<Vec<String>>,
}

pub fn parse_game(input: &str) -> Result<GameMatrix, GameError> {
    parse_game_with(input, ParseOptions::default())
}

pub fn parse_game_with(input: &str, opts: ParseOptions) -> Result<GameMatrix, GameError> {
    let raw: RawGame =
        serde_json::from_str(input).map_err(|e| GameError::Malformed(e.to_string()))?;
    if raw.version != FORMAT_VERSION {
        return Err(GameError::Version(raw.version));
    }
    if raw.payoffs.len() != raw.n {
        return Err(GameError::Malformed(format!(
            "field `n` is {} but `payoffs` has {} rows",
            raw.n,
            raw.payoffs.len()
        )));
    }
    let mut rows = Vec::with_capacity(raw.n);
    for (i, row) in raw.payoffs.iter().enumerate() {
        if row.len() != raw.n {
            return Err(GameError::NotSquare { row: i, len: row.len(), n: raw.n });
        }
        let mut out = Vec::with_capacity(raw.n);
        for (j, &v) in row.iter().enumerate() {
            if !(-1..=1).contains(&v) {
                return Err(GameError::EntryOutOfDomain { row: i, col: j, value: v });
            }
            out.push(v as i8);
        }
        rows.push(out);
    }
    let m = if opts.allow_nonpermissible {
        GameMatrix::from_rows_unchecked(rows)?
    } else {
        GameMatrix::new(rows)?
    };
    match raw.actions {
        Some(names) => m.with_names(names),
        None => Ok(m),
    }
}

pub fn serialize_game(m: &GameMatrix) -> String {
    let mut s = String::new();
    s.push_str("{\n");
    let _ = writeln!(s, "  \"version\": {FORMAT_VERSION},");
    let _ = writeln!(s, "  \"n\": {},", m.n());
    s.push_str("  \"payoffs\": [\n");
    let rows = m.rows();
    for (i, row) in rows.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        let sep = if i + 1 < rows.len() { "," } else { "" };
        let _ = writeln!(s, "    [{}]{sep}", cells.join(", "));
    }
    match m.action_names() {
        Some(names) => {
            s.push_str("  ],\n");
            let quoted: Vec<String> = names
                .iter()
                .map(|n| serde_json::to_string(n).expect("string serializes"))
                .collect();
            let _ = writeln!(s, "  \"actions\": [{}]", quoted.join(", "));
        }
        None => s.push_str("  ]\n"),
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{builtin_game, generate_permissible, Violation};
    use proptest::prelude::*;

    #[test]
    fn rps_round_trip() {
        let rps = builtin_game("rps").unwrap();
        let text = serialize_game(&rps);
        assert_eq!(parse_game(&text).unwrap(), rps);
        assert_eq!(serialize_game(&parse_game(&text).unwrap()), text);
    }

    #[test]
    fn entry_out_of_domain() {
        let doc = r#"{"version": 1, "n": 3, "payoffs": [[0, 2, -1], [-1, 0, 1], [1, -1, 0]]}"#;
        let err = parse_game(doc).unwrap_err();
        assert_eq!(err, GameError::EntryOutOfDomain { row: 0, col: 1, value: 2 });
        assert!(err.to_string().contains("entry out of domain"));
    }

    #[test]
    fn antisymmetry_violated() {
        let doc = r#"{"version": 1, "n": 3, "payoffs": [[0, 1, -1], [1, 0, 1], [1, -1, 0]]}"#;
        let err = parse_game(doc).unwrap_err();
        assert_eq!(
            err,
            GameError::NotPermissible(Violation::AntisymmetryViolated { row: 0, col: 1 })
        );
        assert!(err.to_string().contains("antisymmetry violated"));
        // the flag lets the broken table through for inspection
        let m = parse_game_with(doc, ParseOptions { allow_nonpermissible: true }).unwrap();
        assert!(!m.validate().passed());
    }

    #[test]
    fn malformed_documents_name_the_field() {
        let err = parse_game(r#"{"version": 1, "n": 3}"#).unwrap_err();
        assert!(err.to_string().contains("payoffs"), "{err}");
        let err = parse_game(r#"{"version": 1, "n": 2, "payoffs": [[0]], "extra": 1}"#)
            .unwrap_err();
        assert!(err.to_string().contains("extra"), "{err}");
        let err = parse_game(r#"{"version": 1, "n": 3, "payoffs": [[0, 1, -1], [0]]}"#)
            .unwrap_err();
        assert!(err.to_string().contains("`n`"), "{err}");
        let err = parse_game(
            r#"{"version": 1, "n": 2, "payoffs": [[0, 1, -1], [0, 1]]}"#,
        )
        .unwrap_err();
        assert!(matches!(err, GameError::NotSquare { row: 0, .. }));
        assert_eq!(
            parse_game(r#"{"version": 2, "n": 0, "payoffs": []}"#).unwrap_err(),
            GameError::Version(2)
        );
    }

    proptest! {
        #[test]
        fn generated_games_round_trip_bit_exact(n in 3usize..8, seed in any::<u64>()) {
            let m = generate_permissible(n, seed).unwrap();
            let text = serialize_game(&m);
            let back = parse_game(&text).unwrap();
            prop_assert_eq!(&back, &m);
            prop_assert_eq!(serialize_game(&back), text);
        }
    }
}
