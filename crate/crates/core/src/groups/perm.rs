use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{check_letters, ElementKey, GroupError, GroupOracle};
use crate::automata::{Alphabet, Letter};

/// A permutation of `{0, .., n-1}` stored as its image list. Products act on
/// the right: `(p * q)(i) = q(p(i))`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation((0..degree).collect())
    }

    /// From 1-based images.
    pub fn from_images(images: &[usize]) -> Option<Self> {
        let n = images.len();
        let mut seen = alloc::vec![false; n];
        let mut v = Vec::with_capacity(n);
        for &i in images {
            if i == 0 || i > n || seen[i - 1] {
                return None;
            }
            seen[i - 1] = true;
            v.push(i - 1);
        }
        Some(Permutation(v))
    }

    /// From 1-based disjoint or overlapping cycles, composed left to right.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Option<Self> {
        let mut p = Permutation::identity(degree);
        for c in cycles {
            let mut img: Vec<usize> = (0..degree).collect();
            let mut seen = BTreeSet::new();
            for (k, &x) in c.iter().enumerate() {
                if x == 0 || x > degree || !seen.insert(x) {
                    return None;
                }
                img[x - 1] = c[(k + 1) % c.len()] - 1;
            }
            p = p.then(&Permutation(img));
        }
        Some(p)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// Apply `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&i| other.0[i]).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// 1-based image list.
    pub fn images(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }

    /// Cycle notation with 1-based points, e.g. `(1,2,3)`; `()` for identity.
    pub fn cycle_notation(&self) -> String {
        let mut out = String::new();
        let mut seen = alloc::vec![false; self.degree()];
        for start in 0..self.degree() {
            if seen[start] || self.0[start] == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push((i + 1).to_string());
                i = self.0[i];
            }
            out.push('(');
            out.push_str(&cycle.join(","));
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

/// Finite permutation group given by one permutation per letter.
#[derive(Debug, Clone)]
pub struct PermutationOracle {
    degree: usize,
    alphabet: Alphabet,
    gens: Vec<Permutation>,
}

impl PermutationOracle {
    pub fn new(degree: usize, gens: Vec<(Letter, Permutation)>) -> Result<Self, GroupError> {
        let mut alphabet = Alphabet::default();
        let mut perms = Vec::new();
        for (l, p) in gens {
            if alphabet.contains(&l) {
                return Err(GroupError::DuplicateGenerator(l));
            }
            if p.degree() != degree {
                return Err(GroupError::InvalidGenerator {
                    letter: l,
                    reason: format!("degree {} instead of {degree}", p.degree()),
                });
            }
            alphabet.insert(l);
            perms.push(p);
        }
        Ok(PermutationOracle {
            degree,
            alphabet,
            gens: perms,
        })
    }

    /// The group generated by `gens`, re-presented with one letter per
    /// non-identity element, named by its cycle notation. Letters are ordered
    /// by breadth-first discovery from the generators.
    pub fn all_nontrivial(degree: usize, gens: &[Permutation]) -> Result<Self, GroupError> {
        let elements = closure(degree, gens);
        let letters = elements
            .into_iter()
            .filter(|p| !p.is_identity())
            .map(|p| (Letter::from_token(&p.cycle_notation()), p))
            .collect();
        PermutationOracle::new(degree, letters)
    }

    /// S₃ with one letter per non-identity element.
    pub fn s3() -> Self {
        let t = Permutation::from_cycles(3, &[alloc::vec![1, 2]]).unwrap();
        let r = Permutation::from_cycles(3, &[alloc::vec![1, 2, 3]]).unwrap();
        PermutationOracle::all_nontrivial(3, &[t, r]).expect("distinct cycle names")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> impl Iterator<Item = (&Letter, &Permutation)> {
        self.alphabet.iter().zip(&self.gens)
    }

    pub fn permutation(&self, w: &[Letter]) -> Result<Permutation, GroupError> {
        check_letters(&self.alphabet, w)?;
        let mut p = Permutation::identity(self.degree);
        for l in w {
            p = p.then(&self.gens[self.alphabet.index_of(l).unwrap()]);
        }
        Ok(p)
    }

    pub fn key_of(p: &Permutation) -> ElementKey {
        let imgs: Vec<String> = p.images().iter().map(|i| i.to_string()).collect();
        ElementKey::new(format!("P:{}", imgs.join(",")))
    }
}

/// Breadth-first closure of the group generated by `gens`, identity first.
pub(crate) fn closure(degree: usize, gens: &[Permutation]) -> Vec<Permutation> {
    let id = Permutation::identity(degree);
    let mut seen: BTreeMap<Permutation, ()> = BTreeMap::new();
    seen.insert(id.clone(), ());
    let mut order = alloc::vec![id];
    let mut head = 0;
    while head < order.len() {
        let p = order[head].clone();
        head += 1;
        for g in gens {
            let q = p.then(g);
            if seen.insert(q.clone(), ()).is_none() {
                order.push(q);
            }
        }
    }
    order
}

impl GroupOracle for PermutationOracle {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn evaluate(&self, w: &[Letter]) -> Result<ElementKey, GroupError> {
        Ok(Self::key_of(&self.permutation(w)?))
    }

    fn identity_key(&self) -> ElementKey {
        Self::key_of(&Permutation::identity(self.degree))
    }

    fn is_finite(&self) -> bool {
        true
    }

    fn kind(&self) -> &'static str {
        "perm"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::Word;
    use alloc::vec;

    #[test]
    fn cycles_and_products() {
        let t = Permutation::from_cycles(3, &[vec![1, 2]]).unwrap();
        let r = Permutation::from_cycles(3, &[vec![1, 2, 3]]).unwrap();
        assert_eq!(t.images(), vec![2, 1, 3]);
        assert_eq!(r.images(), vec![2, 3, 1]);
        // t then r: 1 -> 2 -> 3, 2 -> 1 -> 2, 3 -> 3 -> 1
        assert_eq!(t.then(&r).images(), vec![3, 2, 1]);
        assert_eq!(r.cycle_notation(), "(1,2,3)");
        assert!(Permutation::from_cycles(3, &[vec![1, 1]]).is_none());
        assert!(Permutation::from_images(&[1, 1, 2]).is_none());
    }

    #[test]
    fn s3_has_five_distinct_nontrivial_letters() {
        let s3 = PermutationOracle::s3();
        assert_eq!(s3.alphabet().len(), 5);
        let keys: BTreeSet<ElementKey> = s3
            .alphabet()
            .iter()
            .map(|l| s3.evaluate(core::slice::from_ref(l)).unwrap())
            .collect();
        assert_eq!(keys.len(), 5);
        assert!(!keys.contains(&s3.identity_key()));
    }

    #[test]
    fn unknown_letter_is_an_error() {
        let s3 = PermutationOracle::s3();
        assert!(matches!(
            s3.evaluate(&Word::parse("x")),
            Err(GroupError::UnknownLetter(_))
        ));
        assert!(s3.is_identity(&Word::empty()).unwrap());
    }
}
