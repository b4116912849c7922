use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;

use super::ConstructionError;
use crate::automata::{image_hom, subtract_word, Alphabet, Letter, Nfa, Word};
use crate::demonstrations::Demonstration;
use crate::groups::SharedOracle;

/// Display string of the padding symbol.
pub const PAD: &str = "#pad";

/// The letter `(x|y|z)`, with `None` standing for padding.
pub fn triple_letter(x: Option<&Letter>, y: Option<&Letter>, z: Option<&Letter>) -> Letter {
    fn s(l: Option<&Letter>) -> &str {
        l.map_or(PAD, |l| l.as_str())
    }
    Letter::from_token(&format!("({}|{}|{})", s(x), s(y), s(z)))
}

fn parse_triple(l: &Letter) -> Option<[Option<Letter>; 3]> {
    let body = l.as_str().strip_prefix('(')?.strip_suffix(')')?;
    let parts: Vec<&str> = body.split('|').collect();
    if parts.len() != 3 || parts.iter().any(|p| p.is_empty()) {
        return None;
    }
    let c = |p: &str| (p != PAD).then(|| Letter::from_token(p));
    let t = [c(parts[0]), c(parts[1]), c(parts[2])];
    if t.iter().all(Option::is_none) {
        return None;
    }
    Some(t)
}

/// Padded letter-aligned encoding of a word triple.
pub fn trinary_projection(u: &[Letter], v: &[Letter], w: &[Letter]) -> Word {
    let k = u.len().max(v.len()).max(w.len());
    (0..k)
        .map(|i| triple_letter(u.get(i), v.get(i), w.get(i)))
        .collect()
}

/// An automaton over triple letters `(x|y|z)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyncTripleAutomaton {
    nfa: Nfa,
    triples: Vec<[Option<Letter>; 3]>,
}

impl SyncTripleAutomaton {
    /// Fails if some letter is not a triple or is `(#pad|#pad|#pad)`.
    pub fn new(nfa: Nfa) -> Result<Self, ConstructionError> {
        let triples = nfa
            .alphabet()
            .iter()
            .map(|l| parse_triple(l).ok_or_else(|| ConstructionError::NotTripleLetter(l.clone())))
            .collect::<Result<_, _>>()?;
        Ok(SyncTripleAutomaton { nfa, triples })
    }

    /// Accepts exactly the padded encodings of `triples`.
    pub fn from_triples(triples: &[(Word, Word, Word)]) -> Result<Self, ConstructionError> {
        let words: Vec<Word> = triples
            .iter()
            .map(|(u, v, w)| trinary_projection(u, v, w))
            .collect();
        let alphabet = Alphabet::new(words.iter().flat_map(|w| w.iter().cloned()));
        SyncTripleAutomaton::new(Nfa::from_words(alphabet, &words)?)
    }

    pub fn nfa(&self) -> &Nfa {
        &self.nfa
    }

    /// Checks that in every accepted string, each coordinate stays padded once
    /// padding starts. Explores (state, padded coordinates) pairs of the
    /// trimmed automaton, so every explored move lies on an accepted string.
    pub fn check_padding(&self) -> Result<(), ConstructionError> {
        let t = self.nfa.trim();
        let triples: Vec<[Option<Letter>; 3]> =
            t.alphabet().iter().map(|l| parse_triple(l).expect("checked")).collect();
        let mut seen: BTreeSet<(usize, u8)> = BTreeSet::new();
        let mut stack: Vec<(usize, u8, Word)> = Vec::new();
        for &s in t.initial_states() {
            if seen.insert((s, 0)) {
                stack.push((s, 0, Word::empty()));
            }
        }
        while let Some((s, mask, prefix)) = stack.pop() {
            for e in t.edges(s) {
                let (mask2, prefix2) = match e.label {
                    None => (mask, prefix.clone()),
                    Some(l) => {
                        let tr = &triples[l];
                        let mut p = prefix.clone();
                        p.push(t.alphabet().letter(l).clone());
                        let mut m = mask;
                        for (i, c) in tr.iter().enumerate() {
                            match c {
                                Some(_) if mask & (1 << i) != 0 => {
                                    return Err(ConstructionError::PaddingViolation {
                                        coordinate: i + 1,
                                        word: p,
                                    })
                                }
                                Some(_) => {}
                                None => m |= 1 << i,
                            }
                        }
                        (m, p)
                    }
                };
                if seen.insert((e.target, mask2)) {
                    stack.push((e.target, mask2, prefix2));
                }
            }
        }
        Ok(())
    }

    /// Coordinate letters used by the automaton, excluding padding.
    pub fn base_letters(&self) -> Alphabet {
        Alphabet::new(self.triples.iter().flat_map(|t| t.iter().flatten().cloned()))
    }
}

/// First coordinates of the accepted triples with padding erased.
pub fn autostackable_projection(t: &SyncTripleAutomaton) -> Result<Nfa, ConstructionError> {
    t.check_padding()?;
    let pad = Letter::from_token(PAD);
    let first: BTreeMap<Letter, Word> = t
        .nfa
        .alphabet()
        .iter()
        .zip(&t.triples)
        .map(|(l, tr)| (l.clone(), Word::from(alloc::vec![tr[0].clone().unwrap_or_else(|| pad.clone())])))
        .collect();
    let padded = image_hom(&t.nfa, &first, false)?;
    let erase: BTreeMap<Letter, Word> = padded
        .alphabet()
        .iter()
        .map(|l| {
            let img = if *l == pad { Word::empty() } else { Word::from(alloc::vec![l.clone()]) };
            (l.clone(), img)
        })
        .collect();
    Ok(image_hom(&padded, &erase, true)?.trim())
}

/// Turns a cross section into a demonstration by removing the identity's
/// representative.
pub fn cross_section_to_demo(
    n: &Nfa,
    oracle: SharedOracle,
    identity_rep: &[Letter],
) -> Result<Demonstration, ConstructionError> {
    let rep = Word::from(identity_rep);
    if !n.accepts(identity_rep) {
        return Err(ConstructionError::IdentityRepNotAccepted(rep));
    }
    if !oracle.is_identity(identity_rep)? {
        return Err(ConstructionError::IdentityRepNotIdentity(rep));
    }
    Ok(Demonstration::with_identity_map(oracle, subtract_word(n, identity_rep))?)
}
