//! Concrete grammars for the four domains: parsing into canonical
//! elements and rendering back to canonical text.
//!
//! Rendering is injective on canonical elements and `parse ∘ render` is
//! the identity, so string equality of rendered forms coincides with
//! element equality.

pub mod cipher;
pub mod cube;
pub mod cube_perm;
pub mod enigma;
pub mod knitting;

use thiserror::Error;

use crate::algebra::{DomainId, Element, Payload};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{domain}: cannot parse {text:?}: {message}")]
pub struct ParseError {
    pub domain: DomainId,
    pub text: String,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(domain: DomainId, text: &str, message: impl Into<String>) -> Self {
        ParseError { domain, text: text.to_owned(), message: message.into() }
    }
}

/// Parse the canonical (or any accepted equivalent) notation of one
/// element. The grammar is exact: no surrounding whitespace.
pub fn parse_element(domain: DomainId, text: &str) -> Result<Element, ParseError> {
    match domain {
        DomainId::EncryptedHistory => cipher::parse(text),
        DomainId::Enigma => enigma::parse(text),
        DomainId::Knitting => knitting::parse(text),
        DomainId::RubiksCube => cube::parse(text),
    }
}

/// Canonical notation of an element.
pub fn render_element(element: &Element) -> String {
    match element.payload() {
        Payload::Offset(v) => cipher::render(*v),
        Payload::Rotors(r) => enigma::render(*r),
        Payload::Word(w) => knitting::render(w),
        Payload::Moves(m) => cube::render(m),
    }
}
