use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::ConstructionError;
use crate::automata::{Alphabet, Letter, Nfa, NfaBuilder};
use crate::groups::VertexGraph;

/// Scan state over a type string.
///
/// `up[a]` is `None` until `a` occurs; afterwards it is the set of vertices
/// read since the last `a` that depend on it through a chain of
/// non-commuting letters. An empty set means the next `a` could be shuffled
/// onto the last one. `late[b]` records that the trailing run of letters
/// commuting with `b` contains a vertex later than `b`, so `b` could be
/// shuffled to an earlier position.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Scan {
    last: Option<usize>,
    up: Vec<Option<u64>>,
    late: u64,
}

impl Scan {
    fn step(&self, g: &VertexGraph, c: usize) -> Option<Scan> {
        if self.up[c] == Some(0) || self.late & (1 << c) != 0 {
            return None;
        }
        let n = g.len();
        let mut up = self.up.clone();
        for x in 0..n {
            if let Some(u) = up[x] {
                let hit = g.dependent(x, c) || (0..n).any(|z| u & (1 << z) != 0 && g.dependent(z, c));
                if hit {
                    up[x] = Some(u | (1 << c));
                }
            }
        }
        up[c] = Some(0);
        let mut late = 0u64;
        for b in 0..n {
            if g.adjacent(b, c) && (self.late & (1 << b) != 0 || c > b) {
                late |= 1 << b;
            }
        }
        Some(Scan {
            last: Some(c),
            up,
            late,
        })
    }
}

/// Deterministic automaton over the vertex names accepting the non-empty
/// pruned type strings of graph-product words: no two occurrences of a
/// vertex can be shuffled together, and the string is lexicographically
/// least in its shuffle class. The initial state rejects; every other state
/// accepts and is named after the vertex read last.
pub fn admissible_automaton(g: &VertexGraph) -> Result<Nfa, ConstructionError> {
    let n = g.len();
    if n > 64 {
        return Err(ConstructionError::TooManyVertices(n));
    }
    let alphabet = Alphabet::new(g.names().iter().map(|v| Letter::from_token(v)));
    let mut b = NfaBuilder::new(alphabet);
    let start = Scan {
        last: None,
        up: alloc::vec![None; n],
        late: 0,
    };
    let mut index: BTreeMap<Scan, usize> = BTreeMap::new();
    let mut queue = alloc::vec![start.clone()];
    index.insert(start, b.add_state("init"));
    let mut head = 0;
    while head < queue.len() {
        let s = queue[head].clone();
        head += 1;
        let from = index[&s];
        for c in 0..n {
            let Some(t) = s.step(g, c) else { continue };
            let to = match index.get(&t) {
                Some(&q) => q,
                None => {
                    let q = b.add_state(alloc::format!("{}{}", g.name(c), index.len()));
                    b.set_accepting(q, true);
                    index.insert(t.clone(), q);
                    queue.push(t);
                    q
                }
            };
            b.add_edge(from, Some(c), to);
        }
    }
    b.set_initial(0);
    Ok(b.build()?)
}

/// The vertex read last on entering state `q` of an admissible automaton, or
/// `None` for the initial state.
pub(crate) fn state_vertex(a: &Nfa, q: usize) -> Option<usize> {
    (0..a.state_count())
        .flat_map(|s| a.edges(s).iter())
        .find(|e| e.target == q)
        .and_then(|e| e.label)
}
