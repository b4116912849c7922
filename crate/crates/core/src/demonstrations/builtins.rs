use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use alloc::format;

use super::{DemoError, Demonstration};
use crate::automata::{concat, subtract_word, union, Alphabet, Letter, Nfa, NfaBuilder, Word};
use crate::groups::{FreeAbelianOracle, FreeGroupOracle, GroupOracle, PermutationOracle};

#[derive(Debug, Clone)]
pub enum BuiltinKind {
    /// Length-one words over the letters of a finite group.
    Finite(PermutationOracle),
    Z,
    Free(usize),
    Zk(usize),
}

/// Generator names `a`, `b`, ... and `g26`, `g27`, ... past the alphabet.
pub fn default_names(k: usize) -> Vec<String> {
    (0..k)
        .map(|i| {
            if i < 26 {
                String::from(char::from(b'a' + i as u8))
            } else {
                format!("g{i}")
            }
        })
        .collect()
}

fn as_strs(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

pub fn builtin_demo(kind: BuiltinKind) -> Result<Demonstration, DemoError> {
    match kind {
        BuiltinKind::Finite(o) => finite_demo(o),
        BuiltinKind::Z => Ok(z_demo("a")),
        BuiltinKind::Free(k) => Ok(free_demo(&as_strs(&default_names(k)))),
        BuiltinKind::Zk(k) => Ok(zk_demo(&as_strs(&default_names(k)))),
    }
}

fn finite_demo(o: PermutationOracle) -> Result<Demonstration, DemoError> {
    let mut words = Vec::new();
    for l in o.alphabet().iter() {
        let w = Word::from(alloc::vec![l.clone()]);
        if o.is_identity(&w)? {
            return Err(DemoError::IdentityLetter(l.clone()));
        }
        words.push(w);
    }
    let lang = Nfa::from_words(o.alphabet().clone(), &words)?;
    Demonstration::with_identity_map(Arc::new(o), lang)
}

/// `x⁺ ∪ (x^-1)⁺` over the letters `x`, `x^-1`.
pub fn z_language(name: &str) -> Nfa {
    let x = Letter::from_token(name);
    let xi = x.formal_inverse();
    let mut b = NfaBuilder::new(Alphabet::new([x.clone(), xi.clone()]));
    let s = b.add_state("start");
    let p = b.add_state("pos");
    let m = b.add_state("neg");
    b.set_initial(s);
    b.set_accepting(p, true);
    b.set_accepting(m, true);
    for (l, t) in [(&x, p), (&xi, m)] {
        b.add_letter_edge(s, l, t).unwrap();
        b.add_letter_edge(t, l, t).unwrap();
    }
    b.build().unwrap()
}

pub fn z_demo(name: &str) -> Demonstration {
    let o = FreeAbelianOracle::standard(&[name]);
    Demonstration::with_identity_map(Arc::new(o), z_language(name)).expect("letters match")
}

/// Non-empty freely reduced words over `x`, `x^-1` for each name.
pub fn free_language(names: &[&str]) -> Nfa {
    let letters: Vec<Letter> = names
        .iter()
        .flat_map(|n| {
            let x = Letter::from_token(n);
            [x.clone(), x.formal_inverse()]
        })
        .collect();
    let mut b = NfaBuilder::new(Alphabet::new(letters.iter().cloned()));
    let start = b.add_state("start");
    b.set_initial(start);
    let last: Vec<usize> = letters
        .iter()
        .map(|l| {
            let s = b.add_state(format!("after {l}"));
            b.set_accepting(s, true);
            s
        })
        .collect();
    for (i, l) in letters.iter().enumerate() {
        b.add_letter_edge(start, l, last[i]).unwrap();
        for (j, prev) in letters.iter().enumerate() {
            if *l != prev.formal_inverse() {
                b.add_letter_edge(last[j], l, last[i]).unwrap();
            }
        }
    }
    b.build().unwrap()
}

pub fn free_demo(names: &[&str]) -> Demonstration {
    let o = FreeGroupOracle::new(names);
    Demonstration::with_identity_map(Arc::new(o), free_language(names)).expect("letters match")
}

/// Sorted sign-consistent blocks `x₁^{n₁} … x_k^{n_k}`, not all empty.
pub fn zk_language(names: &[&str]) -> Nfa {
    let mut acc = Nfa::from_words(Alphabet::default(), &[Word::empty()]).unwrap();
    for n in names {
        let block = union(
            &Nfa::from_words(Alphabet::default(), &[Word::empty()]).unwrap(),
            &z_language(n),
        );
        acc = concat(&acc, &block);
    }
    subtract_word(&acc, &[])
}

pub fn zk_demo(names: &[&str]) -> Demonstration {
    let o = FreeAbelianOracle::standard(names);
    Demonstration::with_identity_map(Arc::new(o), zk_language(names)).expect("letters match")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demonstrations::{verify_coverage, verify_no_identity};

    #[test]
    fn free_language_membership() {
        let d = builtin_demo(BuiltinKind::Free(2)).unwrap();
        assert!(d.language().accepts(&Word::parse("a b a^-1")));
        assert!(!d.language().accepts(&Word::parse("a a^-1")));
        assert!(!d.language().accepts(&Word::empty()));
    }

    #[test]
    fn zk_covers_mixed_signs_with_sorted_blocks() {
        let d = builtin_demo(BuiltinKind::Zk(2)).unwrap();
        let r = verify_coverage(&d, 3, 3).unwrap();
        assert!(r.is_complete());
        let k = FreeAbelianOracle::key_of(&[1, -1]);
        assert_eq!(r.covered[&k], Word::parse("a b^-1"));
        assert!(!d.language().accepts(&Word::parse("b a")));
    }

    #[test]
    fn finite_demo_rejects_identity_letter() {
        let id = crate::groups::Permutation::identity(2);
        let o = PermutationOracle::new(2, alloc::vec![(Letter::from_token("e"), id)]).unwrap();
        assert!(matches!(
            builtin_demo(BuiltinKind::Finite(o)),
            Err(DemoError::IdentityLetter(_))
        ));
    }

    #[test]
    fn builtins_pass_small_bounds() {
        for kind in [
            BuiltinKind::Z,
            BuiltinKind::Free(2),
            BuiltinKind::Zk(2),
            BuiltinKind::Zk(3),
            BuiltinKind::Finite(PermutationOracle::s3()),
        ] {
            let d = builtin_demo(kind).unwrap();
            assert!(verify_no_identity(&d, 6).unwrap().is_empty());
            assert!(verify_coverage(&d, 3, 3).unwrap().is_complete());
        }
    }
}
