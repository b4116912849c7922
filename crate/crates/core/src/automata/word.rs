use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Deref;

use super::AutomatonError;

/// A symbol of an alphabet, identified by its display string.
///
/// Two letters are the same letter exactly when their display strings agree,
/// which is also how letters are matched across automata and groups.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(Arc<str>);

impl Letter {
    pub fn new(display: &str) -> Result<Self, AutomatonError> {
        if display.is_empty() || display.chars().any(char::is_whitespace) {
            return Err(AutomatonError::InvalidLetter(display.into()));
        }
        Ok(Letter(display.into()))
    }

    /// Builds a letter from a token that is already known to be non-empty and
    /// whitespace-free, e.g. one produced by `split_whitespace`.
    pub(crate) fn from_token(token: &str) -> Self {
        debug_assert!(!token.is_empty() && !token.contains(char::is_whitespace));
        Letter(token.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The formal inverse under the `x` / `x^-1` naming convention.
    pub fn formal_inverse(&self) -> Letter {
        match self.0.strip_suffix("^-1") {
            Some(base) if !base.is_empty() => Letter::from_token(base),
            _ => Letter(alloc::format!("{}^-1", self.0).into()),
        }
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A finite string of letters. The empty word is ε.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Parses whitespace-separated letters; `eps`, `ε` and blank input give ε.
    pub fn parse(text: &str) -> Self {
        Word(
            text.split_whitespace()
                .filter(|t| *t != "eps" && *t != "ε")
                .map(Letter::from_token)
                .collect(),
        )
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn push(&mut self, letter: Letter) {
        self.0.push(letter);
    }

    pub fn concat(&self, other: &[Letter]) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(other);
        Word(v)
    }

    /// Formal inverse: reversed, each letter replaced by its formal inverse.
    pub fn formal_inverse(&self) -> Word {
        Word(self.0.iter().rev().map(Letter::formal_inverse).collect())
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }
}

impl Deref for Word {
    type Target = [Letter];
    fn deref(&self) -> &[Letter] {
        &self.0
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

impl From<&[Letter]> for Word {
    fn from(v: &[Letter]) -> Self {
        Word(v.to_vec())
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{}\"", self)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("eps");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(l.as_str())?;
        }
        Ok(())
    }
}

/// An ordered set of letters. Declaration order fixes the lexicographic
/// order used for enumeration.
#[derive(Clone, Default)]
pub struct Alphabet {
    letters: Vec<Letter>,
    index: BTreeMap<Letter, usize>,
}

impl Alphabet {
    pub fn new<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut a = Alphabet::default();
        for l in letters {
            a.insert(l);
        }
        a
    }

    /// Parses whitespace-separated letter names.
    pub fn parse(text: &str) -> Self {
        Alphabet::new(text.split_whitespace().map(Letter::from_token))
    }

    /// Inserts a letter if absent and returns its index.
    pub fn insert(&mut self, letter: Letter) -> usize {
        if let Some(&i) = self.index.get(&letter) {
            return i;
        }
        let i = self.letters.len();
        self.index.insert(letter.clone(), i);
        self.letters.push(letter);
        i
    }

    pub fn index_of(&self, letter: &Letter) -> Option<usize> {
        self.index.get(letter).copied()
    }

    pub fn contains(&self, letter: &Letter) -> bool {
        self.index.contains_key(letter)
    }

    pub fn letter(&self, i: usize) -> &Letter {
        &self.letters[i]
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Letter> {
        self.letters.iter()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// Merges `other` after `self`, keeping first occurrences.
    pub fn merged(&self, other: &Alphabet) -> Alphabet {
        let mut a = self.clone();
        for l in other.iter() {
            a.insert(l.clone());
        }
        a
    }

    /// Letter indices of `w`, or `None` if some letter is foreign.
    pub(crate) fn encode(&self, w: &[Letter]) -> Option<Vec<usize>> {
        w.iter().map(|l| self.index_of(l)).collect()
    }

    /// Compares two words length-lex with respect to declaration order.
    /// Foreign letters sort after all declared letters, by display string.
    pub fn cmp_length_lex(&self, a: &[Letter], b: &[Letter]) -> core::cmp::Ordering {
        a.len().cmp(&b.len()).then_with(|| {
            for (x, y) in a.iter().zip(b) {
                let kx = (self.index_of(x).unwrap_or(usize::MAX), x);
                let ky = (self.index_of(y).unwrap_or(usize::MAX), y);
                match kx.cmp(&ky) {
                    core::cmp::Ordering::Equal => continue,
                    o => return o,
                }
            }
            core::cmp::Ordering::Equal
        })
    }
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.letters == other.letters
    }
}

impl Eq for Alphabet {}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.letters.iter()).finish()
    }
}

impl<'a> IntoIterator for &'a Alphabet {
    type Item = &'a Letter;
    type IntoIter = core::slice::Iter<'a, Letter>;
    fn into_iter(self) -> Self::IntoIter {
        self.letters.iter()
    }
}

/// Display string helper for a list of letters.
pub fn join_letters(letters: &[Letter]) -> String {
    let mut s = String::new();
    for (i, l) in letters.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        s.push_str(l.as_str());
    }
    s
}
