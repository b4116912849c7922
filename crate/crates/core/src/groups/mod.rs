//! Exact group backends behind one oracle interface.
//!
//! An oracle turns a word over its generating letters into an [`ElementKey`],
//! a canonical string that is equal for two words exactly when they represent
//! the same group element. Keys start with a backend tag, so keys coming from
//! different kinds of oracle never collide.

mod abelian;
mod free;
mod graph_product;
mod matrix;
mod perm;

pub use abelian::FreeAbelianOracle;
pub use free::{free_reduce_letters, FreeGroupOracle};
pub use graph_product::{
    decompose, prune, GraphProductOracle, LocalDecomposition, Pruned, Syllable, VertexGraph,
};
pub use matrix::IntegerMatrixOracle;
pub use perm::{Permutation, PermutationOracle};

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::automata::{Alphabet, Letter, Word};

/// Canonical encoding of a group element.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementKey(String);

impl ElementKey {
    pub(crate) fn new(s: String) -> Self {
        ElementKey(s)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn as_bytes(&self) -> &[u8] {
        self.0.as_bytes()
    }
}

impl fmt::Debug for ElementKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

impl fmt::Display for ElementKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("letter {0} is not a generator of this group")]
    UnknownLetter(Letter),
    #[error("invalid generator {letter}: {reason}")]
    InvalidGenerator { letter: Letter, reason: String },
    #[error("duplicate generator {0}")]
    DuplicateGenerator(Letter),
    #[error("vertex alphabets overlap on letter {0}")]
    AlphabetCollision(Letter),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("integer overflow while evaluating")]
    Overflow,
}

/// Exact evaluation of words in a finitely generated group.
pub trait GroupOracle: fmt::Debug + Send + Sync {
    /// The monoid generating set.
    fn alphabet(&self) -> &Alphabet;

    fn evaluate(&self, w: &[Letter]) -> Result<ElementKey, GroupError>;

    fn identity_key(&self) -> ElementKey;

    fn is_identity(&self, w: &[Letter]) -> Result<bool, GroupError> {
        Ok(self.evaluate(w)? == self.identity_key())
    }

    /// Whether the group is known to be finite.
    fn is_finite(&self) -> bool {
        false
    }

    /// Short backend name used in reports.
    fn kind(&self) -> &'static str;
}

pub type SharedOracle = Arc<dyn GroupOracle>;

pub(crate) fn check_letters(alphabet: &Alphabet, w: &[Letter]) -> Result<(), GroupError> {
    match w.iter().find(|l| !alphabet.contains(l)) {
        Some(l) => Err(GroupError::UnknownLetter(l.clone())),
        None => Ok(()),
    }
}

/// All elements with a representative of length ≤ `radius`, each with its
/// length-lex-least representative.
///
/// Breadth-first over words: the frontier of each length is kept in
/// length-lex order of its witnesses, and length-lex-least representatives
/// are prefix closed, so the first word reaching a key is its least witness.
pub fn ball(o: &dyn GroupOracle, radius: usize) -> Result<BTreeMap<ElementKey, Word>, GroupError> {
    let mut found = BTreeMap::new();
    let id = o.identity_key();
    found.insert(id, Word::empty());
    let mut frontier = alloc::vec![Word::empty()];
    for _ in 0..radius {
        let mut next = Vec::new();
        for w in &frontier {
            for x in o.alphabet().iter() {
                let w2 = w.concat(core::slice::from_ref(x));
                let k = o.evaluate(&w2)?;
                if let alloc::collections::btree_map::Entry::Vacant(e) = found.entry(k) {
                    e.insert(w2.clone());
                    next.push(w2);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(found)
}

/// For each letter, another letter of the alphabet evaluating to its inverse,
/// preferring the formal `x^-1` partner. `None` if some letter has no inverse
/// in the alphabet.
pub fn inverse_pairing(o: &dyn GroupOracle) -> Result<Option<BTreeMap<Letter, Letter>>, GroupError> {
    let mut pairing = BTreeMap::new();
    for x in o.alphabet().iter() {
        let formal = x.formal_inverse();
        let mut candidates: Vec<&Letter> = Vec::new();
        if o.alphabet().contains(&formal) {
            candidates.push(o.alphabet().letter(o.alphabet().index_of(&formal).unwrap()));
        }
        candidates.extend(o.alphabet().iter());
        let mut found = None;
        for y in candidates {
            if o.is_identity(&[x.clone(), y.clone()])? {
                found = Some(y.clone());
                break;
            }
        }
        match found {
            Some(y) => {
                pairing.insert(x.clone(), y);
            }
            None => return Ok(None),
        }
    }
    Ok(Some(pairing))
}

/// Inverse word using a pairing from [`inverse_pairing`].
pub fn invert_word(w: &[Letter], pairing: &BTreeMap<Letter, Letter>) -> Option<Word> {
    w.iter().rev().map(|l| pairing.get(l).cloned()).collect()
}
