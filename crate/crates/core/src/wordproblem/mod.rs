//! Deciding the word problem from an enumerated demonstration language and
//! an enumeration of the normal closure of the relators, and the converse
//! filtration of cowords from a decidable word problem.

mod decide;
mod enumerator;

pub use decide::{cross_check, decide_word, resume, Frontier, WpVerdict};
pub use enumerator::{
    coword_demo_from_wp, demonstration_enumerator, language_enumerator, normal_closure_enumerator, Enumerator, WordStream,
};

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::automata::{Alphabet, Letter, Word};
use crate::groups::free_reduce_letters;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WpError {
    #[error("letter {0} has no formal inverse in the alphabet")]
    UnpairedLetter(Letter),
    #[error("letter {0} is not in the alphabet")]
    UnknownLetter(Letter),
    #[error("contradictory certificates: g({in_wp}) matches the word, and f({j}) times its inverse matches g({k})")]
    Contradiction { in_wp: usize, j: usize, k: usize },
    #[error("malformed frontier: {0}")]
    BadFrontier(String),
}

/// A freely reduced word: no letter is adjacent to its formal inverse.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FreeWord(Word);

impl FreeWord {
    /// Reduces by formal inverse names, without an alphabet check.
    pub fn reduce(w: &[Letter]) -> FreeWord {
        FreeWord(Word::from(free_reduce_letters(w)))
    }

    pub fn word(&self) -> &Word {
        &self.0
    }

    pub fn into_word(self) -> Word {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord(self.0.formal_inverse())
    }

    pub fn times(&self, other: &FreeWord) -> FreeWord {
        FreeWord::reduce(&self.0.concat(&other.0))
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Checks that every letter of `w` and its formal inverse are in `alphabet`,
/// then reduces.
pub fn free_reduce(alphabet: &Alphabet, w: &[Letter]) -> Result<FreeWord, WpError> {
    for l in w {
        if !alphabet.contains(l) {
            return Err(WpError::UnknownLetter(l.clone()));
        }
        if !alphabet.contains(&l.formal_inverse()) {
            return Err(WpError::UnpairedLetter(l.clone()));
        }
    }
    Ok(FreeWord::reduce(w))
}

/// `⟨X | R⟩` with `X` closed under formal inverses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    generators: Vec<Letter>,
    alphabet: Alphabet,
    relators: Vec<FreeWord>,
}

impl Presentation {
    /// Letters are `x`, `x^-1` for each generator name. Relators are reduced;
    /// those reducing to the empty word are dropped.
    pub fn new(generators: &[&str], relators: &[Word]) -> Result<Self, WpError> {
        let gens: Vec<Letter> = generators.iter().map(|g| Letter::from_token(g)).collect();
        let alphabet = Alphabet::new(gens.iter().flat_map(|x| [x.clone(), x.formal_inverse()]));
        let mut rels = Vec::new();
        for r in relators {
            let f = free_reduce(&alphabet, r)?;
            if !f.is_empty() {
                rels.push(f);
            }
        }
        Ok(Presentation {
            generators: gens,
            alphabet,
            relators: rels,
        })
    }

    pub fn generators(&self) -> &[Letter] {
        &self.generators
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn relators(&self) -> &[FreeWord] {
        &self.relators
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reduction_examples() {
        let al = Alphabet::parse("a a^-1 b b^-1");
        assert!(free_reduce(&al, &Word::parse("a a^-1")).unwrap().is_empty());
        assert_eq!(
            free_reduce(&al, &Word::parse("a b b^-1 a")).unwrap().word(),
            &Word::parse("a a")
        );
        let half = Alphabet::parse("a b");
        assert_eq!(
            free_reduce(&half, &Word::parse("a")),
            Err(WpError::UnpairedLetter(Letter::from_token("a")))
        );
    }

    #[test]
    fn presentation_reduces_relators() {
        let p = Presentation::new(&["a", "b"], &[Word::parse("a b b^-1 a^-1"), Word::parse("a a")])
            .unwrap();
        assert_eq!(p.relators().len(), 1);
        assert!(Presentation::new(&["a"], &[Word::parse("c")]).is_err());
    }

    // Reduction by repeatedly cancelling the leftmost-last inverse pair,
    // independent of the stack pass.
    fn reduce_by_rescanning(mut w: Vec<Letter>) -> Vec<Letter> {
        loop {
            let hit = (0..w.len().saturating_sub(1)).rev().find(|&i| w[i + 1] == w[i].formal_inverse());
            match hit {
                Some(i) => {
                    w.drain(i..i + 2);
                }
                None => return w,
            }
        }
    }

    proptest! {
        #[test]
        fn reduction_order_independent(codes in prop::collection::vec(0usize..4, 0..=10)) {
            let names = ["a", "a^-1", "b", "b^-1"];
            let w: Vec<Letter> = codes.iter().map(|&c| Letter::from_token(names[c])).collect();
            let r = FreeWord::reduce(&w);
            prop_assert_eq!(r.word().letters(), &reduce_by_rescanning(w.clone())[..]);
            prop_assert_eq!(FreeWord::reduce(r.word()), r.clone());
            prop_assert!(r.len() <= w.len());
        }
    }
}
