use super::{GameError, GameMatrix};

pub const BUILTIN_NAMES: [&str; 4] = ["rps", "rps_reverse", "m_star", "m_lex"];

const RPS: [[i8; 3]; 3] = [[0, -1, 1], [1, 0, -1], [-1, 1, 0]];

// Two six-action extensions of rock-paper-scissors that agree on the R/P/S and
// R'/P'/S' blocks and differ in six cross entries. Against a myopic best
// responder with ordering R,P,S,R',P',S' both produce the same opponent play
// when we answer by best responses computed from `M_LEX`.
const M_STAR: [[i8; 6]; 6] = [
    [0, -1, 1, 1, 0, 0],
    [1, 0, -1, 1, 1, 0],
    [-1, 1, 0, 0, 1, 1],
    [-1, -1, 0, 0, -1, 1],
    [0, -1, -1, 1, 0, -1],
    [0, 0, -1, -1, 1, 0],
];

const M_LEX: [[i8; 6]; 6] = [
    [0, -1, 1, 1, 0, -1],
    [1, 0, -1, -1, 1, 0],
    [-1, 1, 0, 0, -1, 1],
    [-1, 1, 0, 0, -1, 1],
    [0, -1, 1, 1, 0, -1],
    [1, 0, -1, -1, 1, 0],
];

fn to_rows<const N: usize>(t: &[[i8; N]; N]) -> Vec<Vec<i8>> {
    t.iter().map(|r| r.to_vec()).collect()
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

pub fn builtin_game(name: &str) -> Result<GameMatrix, GameError> {
    let rps_names = names(&["R", "P", "S"]);
    let six_names = names(&["R", "P", "S", "R'", "P'", "S'"]);
    let m = match name {
        "rps" => GameMatrix::new(to_rows(&RPS))?.with_names(rps_names)?,
        "rps_reverse" => GameMatrix::new(to_rows(&RPS))?.reversed().with_names(rps_names)?,
        "m_star" => GameMatrix::new(to_rows(&M_STAR))?.with_names(six_names)?,
        "m_lex" => GameMatrix::new(to_rows(&M_LEX))?.with_names(six_names)?,
        other => return Err(GameError::UnknownBuiltin(other.to_string())),
    };
    Ok(m)
}
