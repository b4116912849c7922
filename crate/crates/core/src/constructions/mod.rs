//! Transformations that build new demonstrations from old ones: generator
//! changes, extensions, finite-index over- and subgroups, graph products,
//! and projections of synchronously regular stacking data.

mod admissible;
mod coset;
mod extensions;
mod glue;
mod stackable;

pub use admissible::admissible_automaton;
pub use coset::{CosetTable, EdgeLetter};
pub use extensions::{change_generators, extension, fi_overgroup, fi_subgroup, representative_words};
pub use glue::graph_product;
pub use stackable::{
    trinary_projection,
    autostackable_projection, cross_section_to_demo, triple_letter, SyncTripleAutomaton, PAD,
};
pub use crate::groups::VertexGraph;

use alloc::string::String;

use crate::automata::{AutomatonError, Letter, Word};
use crate::demonstrations::DemoError;
use crate::groups::GroupError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConstructionError {
    #[error(transparent)]
    Demo(#[from] DemoError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error("letter {0} maps to the empty word")]
    EmptyImage(Letter),
    #[error("letter {0} has no image word")]
    MissingImage(Letter),
    #[error("image of {letter} evaluates to a different element")]
    EvaluationMismatch { letter: Letter },
    #[error("no word of length at most {max_len} over the target letters represents {letter}")]
    NoRepresentative { letter: Letter, max_len: usize },
    #[error("letter {0} is used by both inputs")]
    AlphabetCollision(Letter),
    #[error("letter {0} does not evaluate into the normal subgroup")]
    OutsideNormalSubgroup(Letter),
    #[error("quotient word {0} evaluates into the normal subgroup")]
    QuotientHitsNormal(Word),
    #[error("transversal letter {0} evaluates into the subgroup")]
    TransversalInSubgroup(Letter),
    #[error("transversal letters {0} and {1} represent the same coset")]
    TransversalRepeatsCoset(Letter, Letter),
    #[error("generating set is not closed under inverses")]
    NotInverseClosed,
    #[error("demonstration letters must be the group generators themselves")]
    NotOverGenerators,
    #[error("inconsistent coset table: {0}")]
    InconsistentTable(String),
    #[error("graph has {0} vertices but {1} local demonstrations were given")]
    LocalCount(usize, usize),
    #[error("local demonstration at vertex {0} accepts the empty word")]
    LocalAcceptsEmpty(String),
    #[error("too many vertices for the admissible automaton: {0}")]
    TooManyVertices(usize),
    #[error("{0} is not a triple letter")]
    NotTripleLetter(Letter),
    #[error("padding symbol is followed by a letter in coordinate {coordinate} of {word}")]
    PaddingViolation { coordinate: usize, word: Word },
    #[error("identity representative {0} is not accepted")]
    IdentityRepNotAccepted(Word),
    #[error("identity representative {0} does not evaluate to the identity")]
    IdentityRepNotIdentity(Word),
}
