use alloc::collections::BTreeMap;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::admissible::{admissible_automaton, state_vertex};
use super::ConstructionError;
use crate::automata::{embed, normalize_no_accepting_initial, Alphabet, AutomatonError, NfaBuilder};
use crate::demonstrations::Demonstration;
use crate::groups::{GraphProductOracle, GroupError, SharedOracle, VertexGraph};

/// Demonstration for the graph product of the local groups, obtained by
/// substituting a copy of the local automaton for every state of the
/// admissible automaton. `locals` is indexed like the vertices of `g`.
pub fn graph_product(g: &VertexGraph, locals: &[Demonstration]) -> Result<Demonstration, ConstructionError> {
    if locals.len() != g.len() {
        return Err(ConstructionError::LocalCount(g.len(), locals.len()));
    }
    let oracles: Vec<SharedOracle> = locals.iter().map(|d| d.oracle().clone()).collect();
    let oracle = GraphProductOracle::new(g.clone(), oracles).map_err(|e| match e {
        GroupError::AlphabetCollision(l) => ConstructionError::AlphabetCollision(l),
        e => e.into(),
    })?;
    let mut alphabet = Alphabet::default();
    let mut eval = BTreeMap::new();
    let mut normalized = Vec::with_capacity(locals.len());
    for (v, d) in locals.iter().enumerate() {
        for l in d.language().alphabet().iter() {
            if alphabet.contains(l) {
                return Err(ConstructionError::AlphabetCollision(l.clone()));
            }
            alphabet.insert(l.clone());
        }
        eval.extend(d.eval_map().iter().map(|(k, w)| (k.clone(), w.clone())));
        normalized.push(normalize_no_accepting_initial(d.language()).map_err(|e| match e {
            AutomatonError::AcceptsEmptyWord => ConstructionError::LocalAcceptsEmpty(g.name(v).into()),
            e => e.into(),
        })?);
    }
    let adm = admissible_automaton(g)?;
    let mut b = NfaBuilder::new(alphabet);
    let start = b.add_state("start");
    b.set_initial(start);
    // copies[q] = state map of the local automaton placed at admissible state q
    let mut copies: Vec<Option<(usize, Vec<usize>)>> = alloc::vec![None; adm.state_count()];
    for q in 0..adm.state_count() {
        if let Some(v) = state_vertex(&adm, q) {
            let map = embed(&mut b, &normalized[v], &format!("{}.", adm.state_name(q)));
            copies[q] = Some((v, map));
        }
    }
    for p in 0..adm.state_count() {
        for e in adm.edges(p) {
            let (v, to) = copies[e.target].as_ref().expect("non-initial target");
            let entries: Vec<usize> = normalized[*v].initial_states().iter().map(|&s| to[s]).collect();
            match &copies[p] {
                None => {
                    for &t in &entries {
                        b.add_epsilon(start, t);
                    }
                }
                Some((u, from)) => {
                    for s in normalized[*u].accepting_states() {
                        for &t in &entries {
                            b.add_epsilon(from[s], t);
                        }
                    }
                }
            }
        }
    }
    let lang = b.build()?.trim();
    Ok(Demonstration::new(Arc::new(oracle), eval, lang)?)
}
