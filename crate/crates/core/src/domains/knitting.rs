//! Knitting words: the free group on the generators `k` and `p`, with
//! `K` and `P` their inverses. The identity renders as `ε`.

use crate::algebra::{DomainId, Element};
use crate::domains::ParseError;

pub const IDENTITY_TOKEN: &str = "ε";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KnitGen {
    Knit,
    Purl,
    UnKnit,
    UnPurl,
}

impl KnitGen {
    pub const ALL: [KnitGen; 4] = [KnitGen::Knit, KnitGen::Purl, KnitGen::UnKnit, KnitGen::UnPurl];

    pub fn inverse(self) -> Self {
        match self {
            KnitGen::Knit => KnitGen::UnKnit,
            KnitGen::Purl => KnitGen::UnPurl,
            KnitGen::UnKnit => KnitGen::Knit,
            KnitGen::UnPurl => KnitGen::Purl,
        }
    }

    pub fn cancels(self, other: Self) -> bool {
        other == self.inverse()
    }

    pub fn to_char(self) -> char {
        match self {
            KnitGen::Knit => 'k',
            KnitGen::Purl => 'p',
            KnitGen::UnKnit => 'K',
            KnitGen::UnPurl => 'P',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'k' => Some(KnitGen::Knit),
            'p' => Some(KnitGen::Purl),
            'K' => Some(KnitGen::UnKnit),
            'P' => Some(KnitGen::UnPurl),
            _ => None,
        }
    }
}

/// Single left-to-right stack pass. The output has no adjacent inverse
/// pair, and the pass computes the same word as cancelling pairs in any
/// order (free-group normal forms are unique).
pub(crate) fn reduce(gens: impl IntoIterator<Item = KnitGen>) -> Vec<KnitGen> {
    let mut stack: Vec<KnitGen> = Vec::new();
    for g in gens {
        match stack.last() {
            Some(&top) if g.cancels(top) => {
                stack.pop();
            }
            _ => stack.push(g),
        }
    }
    stack
}

/// Accepts a string of `k p K P` letters; `ε` and the empty string both
/// denote the identity.
pub fn parse(text: &str) -> Result<Element, ParseError> {
    if text.is_empty() || text == IDENTITY_TOKEN {
        return Ok(Element::knit_word([]));
    }
    let mut gens = Vec::with_capacity(text.len());
    for c in text.chars() {
        let g = KnitGen::from_char(c).ok_or_else(|| {
            ParseError::new(DomainId::Knitting, text, format!("letter '{c}' is not one of k p K P"))
        })?;
        gens.push(g);
    }
    Ok(Element::knit_word(gens))
}

pub fn render(word: &[KnitGen]) -> String {
    if word.is_empty() {
        return IDENTITY_TOKEN.to_owned();
    }
    word.iter().map(|g| g.to_char()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reduced_chars(s: &str) -> String {
        render(&reduce(s.chars().map(|c| KnitGen::from_char(c).unwrap())))
    }

    #[test]
    fn cancellation_cascades() {
        assert_eq!(reduced_chars("kpPK"), "ε");
        assert_eq!(reduced_chars("kKkKk"), "k");
        assert_eq!(reduced_chars("kpKP"), "kpKP");
        assert_eq!(reduced_chars("ppPk"), "pk");
    }

    #[test]
    fn reduce_is_idempotent() {
        for s in ["kpPK", "kKkKk", "kkkPPP", "pKpKpK"] {
            let once: Vec<KnitGen> = s.chars().map(|c| KnitGen::from_char(c).unwrap()).collect();
            let once = reduce(once);
            assert_eq!(reduce(once.clone()), once);
        }
    }

    #[test]
    fn identity_notation() {
        assert!(parse("ε").unwrap().is_identity());
        assert!(parse("").unwrap().is_identity());
        assert_eq!(render(&[]), "ε");
    }

    #[test]
    fn parse_reduces_to_canonical_form() {
        assert_eq!(parse("kpPK").unwrap(), parse("ε").unwrap());
        assert_eq!(parse("kkKp").unwrap().to_string(), "kp");
    }

    #[test]
    fn rejects_foreign_letters() {
        for bad in ["kq", "k p", "knit", "k\n"] {
            assert!(parse(bad).is_err(), "{bad:?} should not parse");
        }
    }

    /// Oracle: reduction as a rewrite closure. Applies single
    /// cancellations in every position until no rule applies, checking
    /// the normal form is unique, then compares with the stack pass.
    #[test]
    fn stack_pass_matches_rewrite_closure_up_to_length_six() {
        fn normal_forms(word: &[KnitGen]) -> Vec<Vec<KnitGen>> {
            let mut cuts = Vec::new();
            for i in 0..word.len().saturating_sub(1) {
                if word[i + 1].cancels(word[i]) {
                    let mut shorter = word.to_vec();
                    shorter.drain(i..=i + 1);
                    cuts.push(shorter);
                }
            }
            if cuts.is_empty() {
                return vec![word.to_vec()];
            }
            let mut out: Vec<Vec<KnitGen>> = Vec::new();
            for cut in cuts {
                for nf in normal_forms(&cut) {
                    if !out.contains(&nf) {
                        out.push(nf);
                    }
                }
            }
            out
        }

        let mut words: Vec<Vec<KnitGen>> = vec![Vec::new()];
        for len in 1..=6 {
            let mut next = Vec::new();
            for w in &words {
                if w.len() == len - 1 {
                    for g in KnitGen::ALL {
                        let mut ext = w.clone();
                        ext.push(g);
                        next.push(ext);
                    }
                }
            }
            for w in &next {
                let nfs = normal_forms(w);
                assert_eq!(nfs.len(), 1, "ambiguous normal form for {}", render(w));
                assert_eq!(reduce(w.iter().copied()), nfs[0]);
            }
            words = next;
        }
    }
}
