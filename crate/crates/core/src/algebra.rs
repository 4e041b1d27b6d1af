//! Domain-tagged canonical elements and the group operations shared by
//! all four domains.
//!
//! `Element` construction canonicalizes, so structural equality is
//! exactly group-element equality. Operations never return a
//! non-canonical value.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domains::{self, cube, knitting};

/// The four concrete algebraic systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainId {
    EncryptedHistory,
    Enigma,
    Knitting,
    RubiksCube,
}

impl DomainId {
    pub const ALL: [DomainId; 4] = [
        DomainId::EncryptedHistory,
        DomainId::Enigma,
        DomainId::Knitting,
        DomainId::RubiksCube,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DomainId::EncryptedHistory => "encrypted_history",
            DomainId::Enigma => "enigma",
            DomainId::Knitting => "knitting",
            DomainId::RubiksCube => "rubiks_cube",
        }
    }
}

impl fmt::Display for DomainId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DomainId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        DomainId::ALL
            .into_iter()
            .find(|d| d.as_str() == s)
            .ok_or_else(|| format!("unknown domain '{s}'"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cardinality {
    Finite,
    Infinite,
}

/// Structural facts about one domain's group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlgebraSpec {
    pub domain: DomainId,
    pub cardinality: Cardinality,
    pub commutative: bool,
    /// Human-readable summary of carrier, operation, inverse, identity.
    pub signature: &'static str,
}

impl AlgebraSpec {
    pub fn for_domain(domain: DomainId) -> Self {
        match domain {
            DomainId::EncryptedHistory => AlgebraSpec {
                domain,
                cardinality: Cardinality::Infinite,
                commutative: true,
                signature: "signed offsets over Z in a base-7 letter cipher; \
                            op: addition; inverse: negation; identity: FWD(a)",
            },
            DomainId::Enigma => AlgebraSpec {
                domain,
                cardinality: Cardinality::Finite,
                commutative: true,
                signature: "rotor triples over Z_26^3; op: component-wise addition \
                            mod 26; inverse: component-wise negation; identity: A,A,A",
            },
            DomainId::Knitting => AlgebraSpec {
                domain,
                cardinality: Cardinality::Infinite,
                commutative: false,
                signature: "reduced words over {k,p} and their inverses; op: \
                            concatenation then cancellation; inverse: reversed \
                            inverse letters; identity: ε",
            },
            DomainId::RubiksCube => AlgebraSpec {
                domain,
                cardinality: Cardinality::Infinite,
                commutative: false,
                signature: "canonical face-turn sequences; op: concatenation then \
                            rewrite to canonical form; inverse: reversed inverse \
                            turns; identity: ε",
            },
        }
    }
}

/// A canonical group element tagged with its domain.
///
/// The payload is private: the only way to build an `Element` is through
/// the canonicalizing constructors, so two elements compare equal exactly
/// when they denote the same group element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Element {
    payload: Payload,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) enum Payload {
    Offset(i64),
    Rotors([u8; 3]),
    Word(Vec<knitting::KnitGen>),
    Moves(Vec<cube::CubeToken>),
}

impl Element {
    /// Encrypted-history element: a signed archive offset.
    pub fn offset(value: i64) -> Self {
        Element { payload: Payload::Offset(value) }
    }

    /// Enigma element: a rotor triple, each component reduced mod 26.
    pub fn rotors(a: u8, b: u8, c: u8) -> Self {
        Element { payload: Payload::Rotors([a % 26, b % 26, c % 26]) }
    }

    /// Knitting element: the free-group reduction of the given letters.
    pub fn knit_word(gens: impl IntoIterator<Item = knitting::KnitGen>) -> Self {
        Element { payload: Payload::Word(knitting::reduce(gens)) }
    }

    /// Cube element: the canonical rewrite of the given turn sequence.
    pub fn move_sequence(tokens: impl IntoIterator<Item = cube::CubeToken>) -> Self {
        Element { payload: Payload::Moves(cube::canonicalize(tokens)) }
    }

    pub fn domain(&self) -> DomainId {
        match self.payload {
            Payload::Offset(_) => DomainId::EncryptedHistory,
            Payload::Rotors(_) => DomainId::Enigma,
            Payload::Word(_) => DomainId::Knitting,
            Payload::Moves(_) => DomainId::RubiksCube,
        }
    }

    pub fn is_identity(&self) -> bool {
        match &self.payload {
            Payload::Offset(v) => *v == 0,
            Payload::Rotors(r) => *r == [0, 0, 0],
            Payload::Word(w) => w.is_empty(),
            Payload::Moves(m) => m.is_empty(),
        }
    }

    pub fn as_offset(&self) -> Option<i64> {
        match self.payload {
            Payload::Offset(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_rotors(&self) -> Option<[u8; 3]> {
        match self.payload {
            Payload::Rotors(r) => Some(r),
            _ => None,
        }
    }

    pub fn as_knit_word(&self) -> Option<&[knitting::KnitGen]> {
        match &self.payload {
            Payload::Word(w) => Some(w),
            _ => None,
        }
    }

    pub fn as_move_sequence(&self) -> Option<&[cube::CubeToken]> {
        match &self.payload {
            Payload::Moves(m) => Some(m),
            _ => None,
        }
    }

    pub(crate) fn payload(&self) -> &Payload {
        &self.payload
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&domains::render_element(self))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("domain mismatch: {left} vs {right}")]
    DomainMismatch { left: DomainId, right: DomainId },
    #[error("empty operand chain")]
    EmptyChain,
}

/// Identity element of the given domain.
pub fn identity(domain: DomainId) -> Element {
    match domain {
        DomainId::EncryptedHistory => Element::offset(0),
        DomainId::Enigma => Element::rotors(0, 0, 0),
        DomainId::Knitting => Element::knit_word([]),
        DomainId::RubiksCube => Element::move_sequence([]),
    }
}

/// Group operation `a ∘ b`. Operand order matters for the two
/// non-commutative domains.
pub fn combine(a: &Element, b: &Element) -> Result<Element, AlgebraError> {
    match (a.payload(), b.payload()) {
        (Payload::Offset(x), Payload::Offset(y)) => {
            Ok(Element::offset(x.checked_add(*y).expect("offset overflow")))
        }
        (Payload::Rotors(x), Payload::Rotors(y)) => {
            let [a0, a1, a2] = x;
            let [b0, b1, b2] = y;
            Ok(Element::rotors(a0 + b0, a1 + b1, a2 + b2))
        }
        (Payload::Word(x), Payload::Word(y)) => {
            Ok(Element::knit_word(x.iter().chain(y.iter()).copied()))
        }
        (Payload::Moves(x), Payload::Moves(y)) => {
            Ok(Element::move_sequence(x.iter().chain(y.iter()).copied()))
        }
        _ => Err(AlgebraError::DomainMismatch { left: a.domain(), right: b.domain() }),
    }
}

/// Group inverse.
pub fn inverse(a: &Element) -> Element {
    match a.payload() {
        Payload::Offset(v) => Element::offset(-v),
        Payload::Rotors(r) => {
            let [a0, a1, a2] = r;
            Element::rotors((26 - a0) % 26, (26 - a1) % 26, (26 - a2) % 26)
        }
        Payload::Word(w) => Element::knit_word(w.iter().rev().map(|g| g.inverse())),
        Payload::Moves(m) => Element::move_sequence(m.iter().rev().map(|t| t.inverse())),
    }
}

/// Unique solution of `a ∘ x = b`, namely `a⁻¹ ∘ b`.
pub fn solve_for_x(a: &Element, b: &Element) -> Result<Element, AlgebraError> {
    combine(&inverse(a), b)
}

/// Unique solution of `x ∘ a = b`, namely `b ∘ a⁻¹`.
pub fn solve_for_x_right(a: &Element, b: &Element) -> Result<Element, AlgebraError> {
    combine(b, &inverse(a))
}

/// Left-associative product of a nonempty chain:
/// `((e1 ∘ e2) ∘ e3) ∘ …`.
pub fn fold_chain(operands: &[Element]) -> Result<Element, AlgebraError> {
    let (first, rest) = operands.split_first().ok_or(AlgebraError::EmptyChain)?;
    rest.iter().try_fold(first.clone(), |acc, e| combine(&acc, e))
}
