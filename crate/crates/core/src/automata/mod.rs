//! Regular languages as ε-NFAs over alphabets of named letters.
//!
//! Closure operations (union, concatenation, product intersection, letter
//! homomorphic images and pullbacks) build new automata; decision procedures
//! run an ε-closed subset simulation on demand. Nothing here minimizes or
//! determinizes eagerly, and language equality in tests is always checked
//! extensionally up to a length bound.

mod bitset;
mod nfa;
mod ops;
mod word;

pub use nfa::{AcceptedWords, Edge, Nfa, NfaBuilder};
pub use ops::{
    concat, embed, image_hom, intersect, inverse_letter_hom, normalize_no_accepting_initial, star,
    subtract_word, union, widen_alphabet,
};
pub use word::{join_letters, Alphabet, Letter, Word};

use alloc::string::String;

/// Display string of the ε label in text formats.
pub const EPSILON: &str = "eps";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AutomatonError {
    #[error("invalid letter {0:?}: letters are non-empty and contain no whitespace")]
    InvalidLetter(String),
    #[error("letter {0} is not in the alphabet")]
    UnknownLetter(Letter),
    #[error("automaton has no initial state")]
    NoInitialState,
    #[error("homomorphism has no image for letter {0}")]
    MissingImage(Letter),
    #[error("letter {0} maps to the empty word but erasing is not allowed")]
    ErasingImage(Letter),
    #[error("the language contains the empty word")]
    AcceptsEmptyWord,
}

/// All words over `alphabet` of length at most `max_len`, length-lex.
pub fn all_words(alphabet: &Alphabet, max_len: usize) -> alloc::vec::Vec<Word> {
    let mut out = alloc::vec![Word::empty()];
    let mut level = alloc::vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = alloc::vec::Vec::with_capacity(level.len() * alphabet.len());
        for w in &level {
            for l in alphabet.iter() {
                let mut w2 = w.clone();
                w2.push(l.clone());
                next.push(w2);
            }
        }
        out.extend(next.iter().cloned());
        level = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn a_plus() -> Nfa {
        let mut b = NfaBuilder::new(Alphabet::parse("a"));
        let p = b.fresh_state();
        let q = b.fresh_state();
        b.set_initial(p);
        b.set_accepting(q, true);
        let a = Letter::new("a").unwrap();
        b.add_letter_edge(p, &a, q).unwrap();
        b.add_letter_edge(q, &a, q).unwrap();
        b.build().unwrap()
    }

    #[test]
    fn a_plus_membership() {
        let n = a_plus();
        assert!(n.accepts(&Word::parse("a a a")));
        assert!(!n.accepts(&Word::empty()));
        assert!(!n.accepts(&Word::parse("b")));
    }

    #[test]
    fn empty_language_enumerates_nothing() {
        let n = Nfa::empty_language(Alphabet::parse("a b"));
        assert!(n.enumerate(5).is_empty());
        assert!(n.is_empty());
        assert!(!a_plus().is_empty());
    }

    #[test]
    fn builder_requires_initial_state() {
        let mut b = NfaBuilder::new(Alphabet::parse("a"));
        b.fresh_state();
        assert_eq!(b.build().unwrap_err(), AutomatonError::NoInitialState);
    }

    #[test]
    fn max_word_len_detects_cycles() {
        assert_eq!(a_plus().max_word_len(), None);
        let f = Nfa::from_words(Alphabet::parse("a b"), &[Word::parse("a b"), Word::parse("b")])
            .unwrap();
        assert_eq!(f.max_word_len(), Some(2));
        // an ε-loop alone keeps the language finite
        let mut b = NfaBuilder::new(Alphabet::parse("a"));
        let p = b.fresh_state();
        let q = b.fresh_state();
        b.set_initial(p);
        b.add_epsilon(p, p);
        b.add_edge(p, Some(0), q);
        b.set_accepting(q, true);
        assert_eq!(b.clone().build().unwrap().max_word_len(), Some(1));
        // an ε-move closing a cycle through a letter does not
        b.add_epsilon(q, p);
        assert_eq!(b.build().unwrap().max_word_len(), None);
    }

    #[test]
    fn all_words_counts() {
        let w = all_words(&Alphabet::parse("a b"), 3);
        assert_eq!(w.len(), 1 + 2 + 4 + 8);
        assert_eq!(w[1], Word::parse("a"));
        let lens: Vec<usize> = w.iter().map(|w| w.len()).collect();
        assert!(lens.windows(2).all(|p| p[0] <= p[1]));
    }
}
