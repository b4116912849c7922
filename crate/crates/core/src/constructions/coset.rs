use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::ConstructionError;
use crate::automata::{Alphabet, Letter, Word};
use crate::groups::{ball, inverse_pairing, invert_word, ElementKey, GroupOracle};

/// Right action of a group on the cosets of a finite-index subgroup `H`.
///
/// Coset `0` is `H` itself. Each coset carries a transversal word over the
/// group's letters, with the empty word for `H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetTable {
    names: Vec<String>,
    transversal: Vec<Word>,
    alphabet: Alphabet,
    action: Vec<Vec<usize>>,
}

/// An edge `(C₁, x, C₂)` of the coset graph, with `C₁ · x = C₂`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct EdgeLetter {
    pub source: usize,
    pub generator: Letter,
    pub target: usize,
}

fn bad(msg: String) -> ConstructionError {
    ConstructionError::InconsistentTable(msg)
}

impl CosetTable {
    /// `action[c][i]` is the coset reached from `c` by the `i`-th letter.
    pub fn new(
        names: Vec<String>,
        transversal: Vec<Word>,
        alphabet: Alphabet,
        action: Vec<Vec<usize>>,
    ) -> Result<Self, ConstructionError> {
        let n = names.len();
        if n == 0 {
            return Err(bad("no cosets".into()));
        }
        if transversal.len() != n || action.len() != n {
            return Err(bad("every coset needs a representative and an action row".into()));
        }
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(bad(format!("coset {a} listed twice")));
            }
        }
        for (c, row) in action.iter().enumerate() {
            if row.len() != alphabet.len() {
                return Err(bad(format!("action of coset {} is not total", names[c])));
            }
            if row.iter().any(|&d| d >= n) {
                return Err(bad(format!("coset {} acts to an unknown coset", names[c])));
            }
        }
        for x in 0..alphabet.len() {
            let mut hit = vec![false; n];
            for row in &action {
                if core::mem::replace(&mut hit[row[x]], true) {
                    return Err(bad(format!(
                        "letter {} does not permute the cosets",
                        alphabet.letter(x)
                    )));
                }
            }
        }
        if !transversal[0].is_empty() {
            return Err(bad(format!("the subgroup {} must have the empty representative", names[0])));
        }
        let t = CosetTable {
            names,
            transversal,
            alphabet,
            action,
        };
        for c in 0..n {
            if t.coset_of(&t.transversal[c]) != Some(c) {
                return Err(bad(format!(
                    "representative {} does not lead from {} to {}",
                    t.transversal[c], t.names[0], t.names[c]
                )));
            }
        }
        Ok(t)
    }

    /// Builds a table from named cosets (the first is the subgroup) and
    /// action triples `(from, letter, to)`.
    pub fn from_entries(
        alphabet: Alphabet,
        cosets: Vec<(String, Word)>,
        actions: &[(String, Letter, String)],
    ) -> Result<Self, ConstructionError> {
        let names: Vec<String> = cosets.iter().map(|(n, _)| n.clone()).collect();
        let idx = |name: &str| {
            names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| bad(format!("unknown coset {name}")))
        };
        let mut action: Vec<Vec<Option<usize>>> = vec![vec![None; alphabet.len()]; names.len()];
        for (from, l, to) in actions {
            let x = alphabet
                .index_of(l)
                .ok_or_else(|| bad(format!("letter {l} is not a group letter")))?;
            let (f, t) = (idx(from)?, idx(to)?);
            match action[f][x] {
                Some(prev) if prev != t => {
                    return Err(bad(format!("coset {from} has two images under {l}")))
                }
                _ => action[f][x] = Some(t),
            }
        }
        let mut total = Vec::with_capacity(names.len());
        for (c, row) in action.into_iter().enumerate() {
            let mut r = Vec::with_capacity(row.len());
            for (x, d) in row.into_iter().enumerate() {
                r.push(d.ok_or_else(|| {
                    bad(format!("no action of {} on coset {}", alphabet.letter(x), names[c]))
                })?);
            }
            total.push(r);
        }
        let transversal = cosets.into_iter().map(|(_, w)| w).collect();
        CosetTable::new(names, transversal, alphabet, total)
    }

    /// Enumerates the cosets of the subgroup `{g : in_h(g)}` by breadth-first
    /// search from the subgroup, comparing `t_C x t_D⁻¹` against `in_h`.
    /// Needs an inverse-closed alphabet.
    pub fn from_subgroup_membership(
        oracle: &dyn GroupOracle,
        in_h: &dyn Fn(&ElementKey) -> bool,
        max_index: usize,
    ) -> Result<Self, ConstructionError> {
        let pairing = inverse_pairing(oracle)?.ok_or(ConstructionError::NotInverseClosed)?;
        let alphabet = oracle.alphabet().clone();
        let mut reps: Vec<Word> = vec![Word::empty()];
        let mut inverses: Vec<Word> = vec![Word::empty()];
        let mut action: Vec<Vec<usize>> = Vec::new();
        let mut c = 0;
        while c < reps.len() {
            let mut row = Vec::with_capacity(alphabet.len());
            for x in alphabet.iter() {
                let tx = reps[c].concat(core::slice::from_ref(x));
                let mut found = None;
                for (d, inv) in inverses.iter().enumerate() {
                    if in_h(&oracle.evaluate(&tx.concat(inv))?) {
                        found = Some(d);
                        break;
                    }
                }
                let d = match found {
                    Some(d) => d,
                    None => {
                        if reps.len() == max_index {
                            return Err(bad(format!("index exceeds {max_index}")));
                        }
                        inverses.push(invert_word(&tx, &pairing).expect("paired alphabet"));
                        reps.push(tx);
                        reps.len() - 1
                    }
                };
                row.push(d);
            }
            action.push(row);
            c += 1;
        }
        let names = (0..reps.len())
            .map(|i| if i == 0 { "H".to_string() } else { format!("C{i}") })
            .collect();
        CosetTable::new(names, reps, alphabet, action)
    }

    pub fn index(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, c: usize) -> &str {
        &self.names[c]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn coset_named(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn transversal(&self, c: usize) -> &Word {
        &self.transversal[c]
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn act(&self, c: usize, x: &Letter) -> Option<usize> {
        Some(self.action[c][self.alphabet.index_of(x)?])
    }

    /// The coset `H · w`, or `None` for a foreign letter.
    pub fn coset_of(&self, w: &[Letter]) -> Option<usize> {
        w.iter().try_fold(0, |c, x| self.act(c, x))
    }

    pub fn in_subgroup(&self, w: &[Letter]) -> bool {
        self.coset_of(w) == Some(0)
    }

    /// All coset-graph edges, by source coset and then letter order.
    pub fn edges(&self) -> Vec<EdgeLetter> {
        let mut out = Vec::new();
        for c in 0..self.index() {
            for (x, l) in self.alphabet.iter().enumerate() {
                out.push(EdgeLetter {
                    source: c,
                    generator: l.clone(),
                    target: self.action[c][x],
                });
            }
        }
        out
    }

    /// Display letter `[C1,x,C2]` of an edge.
    pub fn edge_letter(&self, e: &EdgeLetter) -> Letter {
        Letter::from_token(&format!(
            "[{},{},{}]",
            self.names[e.source], e.generator, self.names[e.target]
        ))
    }

    /// Checks that equal group elements in the ball of `radius` lie in equal
    /// cosets, and that membership agrees with `in_h` when given.
    pub fn validate(
        &self,
        oracle: &dyn GroupOracle,
        radius: usize,
        in_h: Option<&dyn Fn(&ElementKey) -> bool>,
    ) -> Result<(), ConstructionError> {
        if &self.alphabet != oracle.alphabet() {
            return Err(bad("table letters differ from the group letters".into()));
        }
        let b: BTreeMap<ElementKey, Word> = ball(oracle, radius)?;
        for (k, w) in &b {
            let c = self.coset_of(w).expect("group letters");
            if let Some(p) = in_h {
                if p(k) != (c == 0) {
                    return Err(bad(format!("membership of {w} disagrees with the subgroup")));
                }
            }
            for x in self.alphabet.iter() {
                let wx = w.concat(core::slice::from_ref(x));
                if let Some(w2) = b.get(&oracle.evaluate(&wx)?) {
                    if self.coset_of(w2) != self.act(c, x) {
                        return Err(bad(format!("{wx} and {w2} are equal but lie in different cosets")));
                    }
                }
            }
        }
        Ok(())
    }
}
