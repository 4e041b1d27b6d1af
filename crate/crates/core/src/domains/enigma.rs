//! Enigma rotor states: triples over Z_26 written as three
//! comma-separated letters, `A` = 0 through `Z` = 25.

use crate::algebra::{DomainId, Element};
use crate::domains::ParseError;

pub const MODULUS: u8 = 26;

fn err(text: &str, message: impl Into<String>) -> ParseError {
    ParseError::new(DomainId::Enigma, text, message)
}

fn decode(letter: &str) -> Option<u8> {
    let mut chars = letter.chars();
    match (chars.next(), chars.next()) {
        (Some(c @ 'A'..='Z'), None) => Some(c as u8 - b'A'),
        _ => None,
    }
}

/// Accepts exactly `X,Y,Z` with uppercase letters and no spaces.
pub fn parse(text: &str) -> Result<Element, ParseError> {
    let mut rotors = [0u8; 3];
    let mut parts = text.split(',');
    for slot in rotors.iter_mut() {
        let part = parts
            .next()
            .ok_or_else(|| err(text, "expected three comma-separated letters"))?;
        *slot = decode(part)
            .ok_or_else(|| err(text, format!("'{part}' is not a letter A..=Z")))?;
    }
    if parts.next().is_some() {
        return Err(err(text, "expected exactly three rotors"));
    }
    Ok(Element::rotors(rotors[0], rotors[1], rotors[2]))
}

pub fn render(rotors: [u8; 3]) -> String {
    let letters: Vec<String> = rotors
        .iter()
        .map(|r| {
            debug_assert!(*r < MODULUS);
            ((b'A' + r) as char).to_string()
        })
        .collect();
    letters.join(",")
}
