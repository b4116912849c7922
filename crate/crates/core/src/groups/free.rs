use alloc::format;
use alloc::vec::Vec;

use super::{check_letters, ElementKey, GroupError, GroupOracle};
use crate::automata::{join_letters, Alphabet, Letter};

/// Free reduction by a single left-to-right stack pass, cancelling `x x^-1`
/// and `x^-1 x` pairs under the formal naming convention.
pub fn free_reduce_letters(w: &[Letter]) -> Vec<Letter> {
    let mut stack: Vec<Letter> = Vec::with_capacity(w.len());
    for l in w {
        match stack.last() {
            Some(top) if *top == l.formal_inverse() => {
                stack.pop();
            }
            _ => stack.push(l.clone()),
        }
    }
    stack
}

/// Free group on named generators; letters are `x` and `x^-1` per name.
#[derive(Debug, Clone)]
pub struct FreeGroupOracle {
    alphabet: Alphabet,
    rank: usize,
}

impl FreeGroupOracle {
    pub fn new(names: &[&str]) -> Self {
        FreeGroupOracle {
            alphabet: Alphabet::new(names.iter().flat_map(|n| {
                let x = Letter::from_token(n);
                [x.clone(), x.formal_inverse()]
            })),
            rank: names.len(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Generator names, without inverses.
    pub fn generator_names(&self) -> impl Iterator<Item = &Letter> {
        self.alphabet.iter().step_by(2)
    }
}

impl GroupOracle for FreeGroupOracle {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn evaluate(&self, w: &[Letter]) -> Result<ElementKey, GroupError> {
        check_letters(&self.alphabet, w)?;
        Ok(ElementKey::new(format!(
            "F:{}",
            join_letters(&free_reduce_letters(w))
        )))
    }

    fn identity_key(&self) -> ElementKey {
        ElementKey::new("F:".into())
    }

    fn is_finite(&self) -> bool {
        self.rank == 0
    }

    fn kind(&self) -> &'static str {
        "free"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::Word;
    use proptest::prelude::*;

    #[test]
    fn commutator_is_not_trivial() {
        let f = FreeGroupOracle::new(&["a", "b"]);
        assert!(!f.is_identity(&Word::parse("a b a^-1 b^-1")).unwrap());
        assert!(f.is_identity(&Word::parse("a b b^-1 a^-1")).unwrap());
        assert_eq!(f.alphabet(), &Alphabet::parse("a a^-1 b b^-1"));
    }

    fn arb_word() -> impl Strategy<Value = Vec<Letter>> {
        prop::collection::vec(
            prop::sample::select(alloc::vec!["a", "a^-1", "b", "b^-1"]),
            0..12,
        )
        .prop_map(|v| v.into_iter().map(Letter::from_token).collect())
    }

    proptest! {
        #[test]
        fn identity_iff_reduction_empty(w in arb_word()) {
            let f = FreeGroupOracle::new(&["a", "b"]);
            prop_assert_eq!(f.is_identity(&w).unwrap(), free_reduce_letters(&w).is_empty());
        }

        #[test]
        fn reduction_is_idempotent_and_shortening(w in arb_word()) {
            let r = free_reduce_letters(&w);
            prop_assert!(r.len() <= w.len());
            prop_assert_eq!(free_reduce_letters(&r), r.clone());
            prop_assert!(r.windows(2).all(|p| p[1] != p[0].formal_inverse()));
        }
    }
}
