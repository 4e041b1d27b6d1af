//! Encrypted-history offsets: signed integers written `FWD(v)` or
//! `BACK(v)` with the magnitude in a base-7 letter cipher.

use crate::algebra::{DomainId, Element};
use crate::domains::ParseError;

pub const RADIX: u64 = 7;

/// Fixed bijection between base-7 digits 0..=6 and the letters a..=g.
pub struct CipherAlphabet;

impl CipherAlphabet {
    pub fn encode(digit: u8) -> char {
        debug_assert!(digit < 7);
        (b'a' + digit) as char
    }

    pub fn decode(letter: char) -> Option<u8> {
        match letter {
            'a'..='g' => Some(letter as u8 - b'a'),
            _ => None,
        }
    }
}

// Magnitudes above 7^15 are rejected rather than risking overflow in
// long chains of i64 sums.
const MAX_MAGNITUDE: u64 = RADIX.pow(15);

fn err(text: &str, message: impl Into<String>) -> ParseError {
    ParseError::new(DomainId::EncryptedHistory, text, message)
}

/// Accepts `FWD(v)`/`BACK(v)` where `v` is one or more cipher letters.
/// Leading `a` digits are tolerated; `BACK(a)` parses to the identity.
pub fn parse(text: &str) -> Result<Element, ParseError> {
    let (negative, body) = if let Some(rest) = text.strip_prefix("FWD(") {
        (false, rest)
    } else if let Some(rest) = text.strip_prefix("BACK(") {
        (true, rest)
    } else {
        return Err(err(text, "expected FWD(...) or BACK(...)"));
    };
    let digits = body
        .strip_suffix(')')
        .ok_or_else(|| err(text, "missing closing parenthesis"))?;
    if digits.is_empty() {
        return Err(err(text, "empty magnitude"));
    }
    let mut value: u64 = 0;
    for c in digits.chars() {
        let d = CipherAlphabet::decode(c)
            .ok_or_else(|| err(text, format!("letter '{c}' is outside a..=g")))?;
        value = value
            .checked_mul(RADIX)
            .and_then(|v| v.checked_add(u64::from(d)))
            .filter(|v| *v <= MAX_MAGNITUDE)
            .ok_or_else(|| err(text, "magnitude too large"))?;
    }
    let signed = if negative { -(value as i64) } else { value as i64 };
    Ok(Element::offset(signed))
}

/// Canonical notation: zero renders as `FWD(a)`; nonzero magnitudes
/// carry no leading `a`.
pub fn render(value: i64) -> String {
    if value == 0 {
        return "FWD(a)".to_owned();
    }
    let mut magnitude = value.unsigned_abs();
    let mut digits = Vec::new();
    while magnitude > 0 {
        digits.push(CipherAlphabet::encode((magnitude % RADIX) as u8));
        magnitude /= RADIX;
    }
    let body: String = digits.into_iter().rev().collect();
    if value > 0 {
        format!("FWD({body})")
    } else {
        format!("BACK({body})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_values() {
        assert_eq!(parse("FWD(ad)").unwrap().as_offset(), Some(3));
        assert_eq!(parse("BACK(ef)").unwrap().as_offset(), Some(-33));
        assert_eq!(render(-30), "BACK(ec)");
        assert_eq!(render(42), "FWD(ga)");
    }

    #[test]
    fn zero_renders_forward() {
        assert_eq!(render(0), "FWD(a)");
        assert!(parse("BACK(a)").unwrap().is_identity());
        assert_eq!(parse("BACK(a)").unwrap(), parse("FWD(a)").unwrap());
    }

    #[test]
    fn leading_a_digits_are_accepted_not_rendered() {
        assert_eq!(parse("FWD(aad)").unwrap(), parse("FWD(d)").unwrap());
        assert_eq!(render(3), "FWD(d)");
    }

    #[test]
    fn base_seven_carries() {
        assert_eq!(render(7), "FWD(ba)");
        assert_eq!(render(48), "FWD(gg)");
        assert_eq!(render(343), "FWD(baaa)");
    }

    #[test]
    fn rejects_malformed_text() {
        for bad in ["FWD()", "FWD(h)", "FWD(3)", "fwd(a)", "FWD(a", "UP(a)", "", "FWD(a) "] {
            assert!(parse(bad).is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn rejects_oversized_magnitudes() {
        let too_big = format!("FWD({})", "g".repeat(16));
        assert!(parse(&too_big).is_err());
    }

    #[test]
    fn round_trip_on_a_value_sweep() {
        for v in (-2500..=2500).chain([-1_000_000, 1_000_000]) {
            assert_eq!(parse(&render(v)).unwrap().as_offset(), Some(v));
        }
    }
}
