//! Cube move sequences: words over quarter- and half-turns of the six
//! faces, taken modulo a fixed rewrite system rather than the full cube
//! group. Two sequences are equal exactly when the rewrite rules connect
//! them.
//!
//! Canonical form is the unique fixpoint of two local rules:
//!
//! 1. adjacent turns of the same face merge, quarter-turn counts summed
//!    mod 4, the pair vanishing when the sum is 0 (this subsumes
//!    inverse cancellation);
//! 2. adjacent turns of opposite faces commute and are ordered with the
//!    axis leader first: `R` before `L`, `U` before `D`, `F` before `B`.
//!
//! Termination: rule 1 strictly shortens the word; rule 2 preserves
//! length and strictly lowers the number of follower-before-leader
//! adjacencies. Confluence is checked exhaustively in tests against a
//! rewrite-closure oracle, and soundness against the facelet permutation
//! model in [`super::cube_perm`].

use crate::algebra::{DomainId, Element};
use crate::domains::ParseError;

pub const IDENTITY_TOKEN: &str = "ε";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Face {
    R,
    L,
    U,
    D,
    F,
    B,
}

impl Face {
    pub const ALL: [Face; 6] = [Face::R, Face::L, Face::U, Face::D, Face::F, Face::B];

    pub fn opposite(self) -> Face {
        match self {
            Face::R => Face::L,
            Face::L => Face::R,
            Face::U => Face::D,
            Face::D => Face::U,
            Face::F => Face::B,
            Face::B => Face::F,
        }
    }

    /// Whether this face leads its axis pair in canonical order.
    pub fn is_leader(self) -> bool {
        matches!(self, Face::R | Face::U | Face::F)
    }

    pub fn to_char(self) -> char {
        match self {
            Face::R => 'R',
            Face::L => 'L',
            Face::U => 'U',
            Face::D => 'D',
            Face::F => 'F',
            Face::B => 'B',
        }
    }

    pub fn from_char(c: char) -> Option<Face> {
        match c {
            'R' => Some(Face::R),
            'L' => Some(Face::L),
            'U' => Some(Face::U),
            'D' => Some(Face::D),
            'F' => Some(Face::F),
            'B' => Some(Face::B),
            _ => None,
        }
    }
}

/// Nonzero quarter-turn count. A zero turn is unrepresentable, so every
/// token moves the cube.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Turns {
    One,
    Two,
    Three,
}

impl Turns {
    pub fn as_u8(self) -> u8 {
        match self {
            Turns::One => 1,
            Turns::Two => 2,
            Turns::Three => 3,
        }
    }

    /// `None` when the count is 0 mod 4.
    pub fn from_u8(count: u8) -> Option<Turns> {
        match count % 4 {
            1 => Some(Turns::One),
            2 => Some(Turns::Two),
            3 => Some(Turns::Three),
            _ => None,
        }
    }

    pub fn inverse(self) -> Turns {
        match self {
            Turns::One => Turns::Three,
            Turns::Two => Turns::Two,
            Turns::Three => Turns::One,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CubeToken {
    pub face: Face,
    pub turns: Turns,
}

impl CubeToken {
    pub fn new(face: Face, turns: Turns) -> Self {
        CubeToken { face, turns }
    }

    pub fn inverse(self) -> Self {
        CubeToken { face: self.face, turns: self.turns.inverse() }
    }
}

/// Left-to-right stack pass. The stack is the canonical form of the
/// prefix consumed so far; both rewrite rules only ever fire at the top.
pub(crate) fn canonicalize(tokens: impl IntoIterator<Item = CubeToken>) -> Vec<CubeToken> {
    let mut stack: Vec<CubeToken> = Vec::new();
    for tok in tokens {
        push_canonical(&mut stack, tok);
    }
    stack
}

fn push_canonical(stack: &mut Vec<CubeToken>, tok: CubeToken) {
    match stack.last().copied() {
        Some(top) if top.face == tok.face => {
            stack.pop();
            if let Some(turns) = Turns::from_u8(top.turns.as_u8() + tok.turns.as_u8()) {
                push_canonical(stack, CubeToken::new(tok.face, turns));
            }
        }
        // A leader sinks below its opposite follower, then the follower
        // is re-pushed since the new top may interact with it.
        Some(top) if top.face == tok.face.opposite() && tok.face.is_leader() => {
            stack.pop();
            push_canonical(stack, tok);
            push_canonical(stack, top);
        }
        _ => stack.push(tok),
    }
}

fn err(text: &str, message: impl Into<String>) -> ParseError {
    ParseError::new(DomainId::RubiksCube, text, message)
}

/// Accepts whitespace-separated tokens: a face letter optionally
/// followed by `2` or by `#` (with `'` accepted as an alias for `#`).
/// `ε` and the empty string denote the identity.
pub fn parse(text: &str) -> Result<Element, ParseError> {
    if text.is_empty() || text == IDENTITY_TOKEN {
        return Ok(Element::move_sequence([]));
    }
    let mut tokens = Vec::new();
    for word in text.split_whitespace() {
        let mut chars = word.chars();
        let face = chars
            .next()
            .and_then(Face::from_char)
            .ok_or_else(|| err(text, format!("token '{word}' has no face letter")))?;
        let turns = match chars.as_str() {
            "" => Turns::One,
            "2" => Turns::Two,
            "#" | "'" => Turns::Three,
            suffix => return Err(err(text, format!("bad turn suffix '{suffix}' in '{word}'"))),
        };
        tokens.push(CubeToken::new(face, turns));
    }
    Ok(Element::move_sequence(tokens))
}

/// Canonical notation: `#` marks counter-clockwise turns.
pub fn render(tokens: &[CubeToken]) -> String {
    if tokens.is_empty() {
        return IDENTITY_TOKEN.to_owned();
    }
    let words: Vec<String> = tokens
        .iter()
        .map(|t| {
            let f = t.face.to_char();
            match t.turns {
                Turns::One => f.to_string(),
                Turns::Two => format!("{f}2"),
                Turns::Three => format!("{f}#"),
            }
        })
        .collect();
    words.join(" ")
}
