//! Demonstrations: a regular language over letters that evaluate into a
//! group, claimed to hit every non-identity element and never the identity.
//! The checks here are bounded; a pass is evidence at the stated bounds.

mod builtins;

pub use builtins::{
    builtin_demo, default_names, free_demo, free_language, z_demo, z_language, zk_demo, zk_language,
    BuiltinKind,
};

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::automata::{AutomatonError, Letter, Nfa, Word};
use crate::constructions::CosetTable;
use crate::groups::{ball, ElementKey, GroupError, GroupOracle, SharedOracle};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DemoError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error("language letter {0} has no evaluation word")]
    MissingEvaluation(Letter),
    #[error("evaluation map has an entry for {0}, which is not a language letter")]
    ExtraEvaluation(Letter),
    #[error("evaluation word for {letter} uses {used}, which the group does not know")]
    ForeignLetter { letter: Letter, used: Letter },
    #[error("letter {0} evaluates to the identity")]
    IdentityLetter(Letter),
    #[error("subgroup table letters do not match the group alphabet")]
    TableMismatch,
}

/// A language together with the group it is claimed to demonstrate.
#[derive(Clone)]
pub struct Demonstration {
    oracle: SharedOracle,
    eval_map: BTreeMap<Letter, Word>,
    language: Nfa,
    subgroup: Option<Arc<CosetTable>>,
}

impl fmt::Debug for Demonstration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Demonstration")
            .field("group", &self.oracle.kind())
            .field("letters", &self.language.alphabet().len())
            .field("states", &self.language.state_count())
            .field("subgroup", &self.subgroup.is_some())
            .finish()
    }
}

impl Demonstration {
    pub fn new(
        oracle: SharedOracle,
        eval_map: BTreeMap<Letter, Word>,
        language: Nfa,
    ) -> Result<Self, DemoError> {
        for l in language.alphabet().iter() {
            if !eval_map.contains_key(l) {
                return Err(DemoError::MissingEvaluation(l.clone()));
            }
        }
        for (l, w) in &eval_map {
            if !language.alphabet().contains(l) {
                return Err(DemoError::ExtraEvaluation(l.clone()));
            }
            if let Some(u) = w.iter().find(|u| !oracle.alphabet().contains(u)) {
                return Err(DemoError::ForeignLetter {
                    letter: l.clone(),
                    used: u.clone(),
                });
            }
        }
        Ok(Demonstration {
            oracle,
            eval_map,
            language,
            subgroup: None,
        })
    }

    /// Each language letter evaluates as the oracle generator of the same name.
    pub fn with_identity_map(oracle: SharedOracle, language: Nfa) -> Result<Self, DemoError> {
        let eval_map = language
            .alphabet()
            .iter()
            .map(|l| (l.clone(), Word::from(alloc::vec![l.clone()])))
            .collect();
        Demonstration::new(oracle, eval_map, language)
    }

    /// Restrict coverage to the subgroup given by `table`'s distinguished coset.
    pub fn with_subgroup(mut self, table: CosetTable) -> Result<Self, DemoError> {
        if table.alphabet() != self.oracle.alphabet() {
            return Err(DemoError::TableMismatch);
        }
        self.subgroup = Some(Arc::new(table));
        Ok(self)
    }

    pub fn oracle(&self) -> &SharedOracle {
        &self.oracle
    }

    pub fn eval_map(&self) -> &BTreeMap<Letter, Word> {
        &self.eval_map
    }

    pub fn language(&self) -> &Nfa {
        &self.language
    }

    pub fn subgroup(&self) -> Option<&CosetTable> {
        self.subgroup.as_deref()
    }

    /// True when every letter evaluates as the same-named generator.
    pub fn has_identity_map(&self) -> bool {
        self.eval_map
            .iter()
            .all(|(l, w)| w.len() == 1 && w[0] == *l)
    }

    /// The oracle word obtained by substituting evaluation words.
    pub fn image_word(&self, w: &[Letter]) -> Result<Word, DemoError> {
        let mut out = Word::empty();
        for l in w {
            let img = self
                .eval_map
                .get(l)
                .ok_or_else(|| DemoError::MissingEvaluation(l.clone()))?;
            out = out.concat(img);
        }
        Ok(out)
    }

    pub fn evaluate(&self, w: &[Letter]) -> Result<ElementKey, DemoError> {
        Ok(self.oracle.evaluate(&self.image_word(w)?)?)
    }
}

/// Outcome of a bounded coverage check. Keys are sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageReport {
    pub radius: usize,
    pub search_len: usize,
    pub covered: BTreeMap<ElementKey, Word>,
    pub missing: BTreeSet<ElementKey>,
    pub identity_violations: Vec<Word>,
}

impl CoverageReport {
    pub fn is_complete(&self) -> bool {
        self.missing.is_empty()
    }

    /// Misses only count as failures for finite groups once the search
    /// length reaches `complete_bound`.
    pub fn fails(&self, finite: bool, complete_bound: Option<usize>) -> bool {
        if !self.identity_violations.is_empty() {
            return true;
        }
        match complete_bound {
            Some(b) if finite && self.search_len >= b => !self.missing.is_empty(),
            _ => false,
        }
    }
}

/// Accepted words of length at most `max_len` that evaluate to the identity,
/// in length-lex order.
pub fn verify_no_identity(d: &Demonstration, max_len: usize) -> Result<Vec<Word>, DemoError> {
    let id = d.oracle.identity_key();
    let mut bad = Vec::new();
    for w in d.language.enumerate(max_len) {
        if d.evaluate(&w)? == id {
            bad.push(w);
        }
    }
    Ok(bad)
}

/// Non-identity elements of the ball of `radius` that the language reaches
/// with words of length at most `search_len`. For a demonstration carrying a
/// subgroup table only ball elements in the subgroup are targets.
pub fn verify_coverage(
    d: &Demonstration,
    radius: usize,
    search_len: usize,
) -> Result<CoverageReport, DemoError> {
    let id = d.oracle.identity_key();
    let mut targets: BTreeSet<ElementKey> = BTreeSet::new();
    for (k, w) in ball(d.oracle.as_ref(), radius)? {
        if k == id {
            continue;
        }
        if let Some(t) = &d.subgroup {
            if !t.in_subgroup(&w) {
                continue;
            }
        }
        targets.insert(k);
    }
    let mut covered = BTreeMap::new();
    let mut identity_violations = Vec::new();
    for w in d.language.enumerate(search_len) {
        let k = d.evaluate(&w)?;
        if k == id {
            identity_violations.push(w);
        } else if targets.contains(&k) && !covered.contains_key(&k) {
            covered.insert(k, w);
        }
    }
    let missing = targets
        .into_iter()
        .filter(|k| !covered.contains_key(k))
        .collect();
    Ok(CoverageReport {
        radius,
        search_len,
        covered,
        missing,
        identity_violations,
    })
}

/// The set of elements hit by accepted words of length at most `max_len`.
pub fn evaluation_image(d: &Demonstration, max_len: usize) -> Result<BTreeSet<ElementKey>, DemoError> {
    d.language
        .enumerate(max_len)
        .iter()
        .map(|w| d.evaluate(w))
        .collect()
}

/// Convenience for oracles held by value.
pub fn shared<O: GroupOracle + 'static>(o: O) -> SharedOracle {
    Arc::new(o)
}
