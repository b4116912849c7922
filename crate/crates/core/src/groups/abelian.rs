use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::{check_letters, ElementKey, GroupError, GroupOracle};
use crate::automata::{Alphabet, Letter};

/// ℤᵏ with each letter mapped to an integer vector.
#[derive(Debug, Clone)]
pub struct FreeAbelianOracle {
    rank: usize,
    alphabet: Alphabet,
    gens: Vec<Vec<i64>>,
}

impl FreeAbelianOracle {
    pub fn new(rank: usize, gens: Vec<(Letter, Vec<i64>)>) -> Result<Self, GroupError> {
        let mut alphabet = Alphabet::default();
        let mut vecs = Vec::new();
        for (l, v) in gens {
            if alphabet.contains(&l) {
                return Err(GroupError::DuplicateGenerator(l));
            }
            if v.len() != rank {
                return Err(GroupError::InvalidGenerator {
                    letter: l,
                    reason: format!("vector of length {} in rank {rank}", v.len()),
                });
            }
            alphabet.insert(l);
            vecs.push(v);
        }
        Ok(FreeAbelianOracle {
            rank,
            alphabet,
            gens: vecs,
        })
    }

    /// Standard basis letters `x` and `x^-1` for each name, in that order.
    pub fn standard(names: &[&str]) -> Self {
        let rank = names.len();
        let mut gens = Vec::new();
        for (i, n) in names.iter().enumerate() {
            let x = Letter::from_token(n);
            let mut e = vec![0; rank];
            e[i] = 1;
            gens.push((x.formal_inverse(), e.iter().map(|c| -c).collect()));
            gens.insert(gens.len() - 1, (x, e));
        }
        FreeAbelianOracle::new(rank, gens).expect("distinct names")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> impl Iterator<Item = (&Letter, &Vec<i64>)> {
        self.alphabet.iter().zip(&self.gens)
    }

    pub fn vector(&self, w: &[Letter]) -> Result<Vec<i64>, GroupError> {
        check_letters(&self.alphabet, w)?;
        let mut acc = vec![0i64; self.rank];
        for l in w {
            let g = &self.gens[self.alphabet.index_of(l).unwrap()];
            for (a, b) in acc.iter_mut().zip(g) {
                *a = a.checked_add(*b).ok_or(GroupError::Overflow)?;
            }
        }
        Ok(acc)
    }

    pub fn key_of(v: &[i64]) -> ElementKey {
        let parts: Vec<String> = v.iter().map(|c| c.to_string()).collect();
        ElementKey::new(format!("Z:{}", parts.join(",")))
    }
}

impl GroupOracle for FreeAbelianOracle {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn evaluate(&self, w: &[Letter]) -> Result<ElementKey, GroupError> {
        Ok(Self::key_of(&self.vector(w)?))
    }

    fn identity_key(&self) -> ElementKey {
        Self::key_of(&vec![0; self.rank])
    }

    fn is_finite(&self) -> bool {
        self.rank == 0
    }

    fn kind(&self) -> &'static str {
        "zk"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::Word;

    #[test]
    fn z_evaluation() {
        let z = FreeAbelianOracle::standard(&["a"]);
        assert_eq!(z.alphabet(), &Alphabet::parse("a a^-1"));
        assert!(z.is_identity(&Word::parse("a a a^-1 a^-1")).unwrap());
        assert_eq!(
            z.evaluate(&Word::parse("a a a^-1")).unwrap(),
            z.evaluate(&Word::parse("a")).unwrap()
        );
        assert_eq!(z.evaluate(&Word::parse("a^-1")).unwrap().as_str(), "Z:-1");
    }

    #[test]
    fn rank_mismatch_rejected() {
        let r = FreeAbelianOracle::new(2, vec![(Letter::new("a").unwrap(), vec![1])]);
        assert!(matches!(r, Err(GroupError::InvalidGenerator { .. })));
    }
}
