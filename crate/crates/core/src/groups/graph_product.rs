//! Graph products of groups and the pruning procedure on local strings.
//!
//! A word over the disjoint union of vertex alphabets splits into maximal
//! single-vertex runs (syllables). Pruning shuffles syllables across edges of
//! the graph, merges same-vertex syllables that can be brought together, and
//! drops syllables that evaluate trivially in their vertex group. What
//! remains is reordered to the ShortLex-least type in its shuffle class.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{ElementKey, GroupError, GroupOracle, SharedOracle};
use crate::automata::{Alphabet, Letter, Word};

/// Finite simple graph whose vertex order is declaration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexGraph {
    names: Vec<String>,
    adjacent: Vec<Vec<bool>>,
}

impl VertexGraph {
    pub fn new(names: &[&str], edges: &[(&str, &str)]) -> Result<Self, GroupError> {
        let n = names.len();
        for (i, a) in names.iter().enumerate() {
            if a.is_empty() || a.contains(char::is_whitespace) {
                return Err(GroupError::InvalidGraph(format!("bad vertex name {a:?}")));
            }
            if names[..i].contains(a) {
                return Err(GroupError::InvalidGraph(format!("duplicate vertex {a}")));
            }
        }
        let mut g = VertexGraph {
            names: names.iter().map(|s| String::from(*s)).collect(),
            adjacent: vec![vec![false; n]; n],
        };
        for (a, b) in edges {
            let i = g.index(a).ok_or_else(|| GroupError::InvalidGraph(format!("unknown vertex {a}")))?;
            let j = g.index(b).ok_or_else(|| GroupError::InvalidGraph(format!("unknown vertex {b}")))?;
            if i == j {
                return Err(GroupError::InvalidGraph(format!("loop at {a}")));
            }
            if g.adjacent[i][j] {
                return Err(GroupError::InvalidGraph(format!("repeated edge {a} {b}")));
            }
            g.adjacent[i][j] = true;
            g.adjacent[j][i] = true;
        }
        Ok(g)
    }

    /// Graph from an adjacency predicate on vertex indices.
    pub fn from_adjacency(names: &[&str], adjacent: impl Fn(usize, usize) -> bool) -> Result<Self, GroupError> {
        let mut edges = Vec::new();
        for i in 0..names.len() {
            for j in i + 1..names.len() {
                if adjacent(i, j) {
                    edges.push((names[i], names[j]));
                }
            }
        }
        VertexGraph::new(names, &edges)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adjacent[u][v]
    }

    /// Syllables of these vertices can never be reordered past each other.
    pub fn dependent(&self, u: usize, v: usize) -> bool {
        u == v || !self.adjacent[u][v]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.len();
        (0..n).flat_map(move |i| (i + 1..n).filter(move |&j| self.adjacent[i][j]).map(move |j| (i, j)))
    }

    pub fn is_complete(&self) -> bool {
        self.edges().count() == self.len() * self.len().saturating_sub(1) / 2
    }
}

/// A maximal run of letters from one vertex alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Syllable {
    pub vertex: usize,
    pub word: Word,
}

/// The maximal local strings of a word, in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalDecomposition {
    pub parts: Vec<Syllable>,
}

impl LocalDecomposition {
    pub fn type_string(&self) -> Vec<usize> {
        self.parts.iter().map(|p| p.vertex).collect()
    }

    pub fn global_length(&self) -> usize {
        self.parts.len()
    }
}

/// Result of pruning a word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pruned {
    pub syllables: Vec<Syllable>,
    /// Canonical vertex-group key of each syllable.
    pub local_keys: Vec<ElementKey>,
}

impl Pruned {
    pub fn word(&self) -> Word {
        self.syllables
            .iter()
            .flat_map(|s| s.word.iter().cloned())
            .collect()
    }

    pub fn type_string(&self) -> Vec<usize> {
        self.syllables.iter().map(|s| s.vertex).collect()
    }
}

/// Graph product of vertex groups over a [`VertexGraph`].
#[derive(Debug, Clone)]
pub struct GraphProductOracle {
    graph: VertexGraph,
    vertices: Vec<SharedOracle>,
    alphabet: Alphabet,
    owner: Vec<usize>,
}

impl GraphProductOracle {
    pub fn new(graph: VertexGraph, vertices: Vec<SharedOracle>) -> Result<Self, GroupError> {
        if vertices.len() != graph.len() {
            return Err(GroupError::InvalidGraph(format!(
                "{} vertex groups for {} vertices",
                vertices.len(),
                graph.len()
            )));
        }
        let mut alphabet = Alphabet::default();
        let mut owner = Vec::new();
        for (v, o) in vertices.iter().enumerate() {
            for l in o.alphabet().iter() {
                if alphabet.contains(l) {
                    return Err(GroupError::AlphabetCollision(l.clone()));
                }
                alphabet.insert(l.clone());
                owner.push(v);
            }
        }
        Ok(GraphProductOracle {
            graph,
            vertices,
            alphabet,
            owner,
        })
    }

    pub fn graph(&self) -> &VertexGraph {
        &self.graph
    }

    pub fn vertex_oracle(&self, v: usize) -> &SharedOracle {
        &self.vertices[v]
    }

    /// Vertex owning a letter.
    pub fn vertex_of(&self, l: &Letter) -> Option<usize> {
        self.alphabet.index_of(l).map(|i| self.owner[i])
    }
}

/// Splits `w` into maximal local strings.
pub fn decompose(o: &GraphProductOracle, w: &[Letter]) -> Result<LocalDecomposition, GroupError> {
    let mut parts: Vec<Syllable> = Vec::new();
    for l in w {
        let v = o
            .vertex_of(l)
            .ok_or_else(|| GroupError::UnknownLetter(l.clone()))?;
        match parts.last_mut() {
            Some(p) if p.vertex == v => p.word.push(l.clone()),
            _ => parts.push(Syllable {
                vertex: v,
                word: Word::from(vec![l.clone()]),
            }),
        }
    }
    Ok(LocalDecomposition { parts })
}

struct Work {
    vertex: usize,
    word: Word,
    key: ElementKey,
}

/// Prunes `w`: the returned syllables are non-trivial in their vertex
/// groups, no two of the same vertex can be shuffled together, and their
/// type is the ShortLex-least in its shuffle class.
pub fn prune(o: &GraphProductOracle, w: &[Letter]) -> Result<Pruned, GroupError> {
    let g = &o.graph;
    let mut syl: Vec<Work> = Vec::new();
    for p in decompose(o, w)?.parts {
        let vo = &o.vertices[p.vertex];
        let key = vo.evaluate(&p.word)?;
        if key != vo.identity_key() {
            syl.push(Work {
                vertex: p.vertex,
                word: p.word,
                key,
            });
        }
    }
    loop {
        merge_adjacent(o, &mut syl)?;
        let verts: Vec<usize> = syl.iter().map(|s| s.vertex).collect();
        let Some((i, j)) = find_mergeable(g, &verts) else {
            break;
        };
        // Nothing strictly between i and j lies above i, so the whole block
        // can move in front of i, leaving i and j adjacent.
        let between: Vec<Work> = syl.drain(i + 1..j).collect();
        let head = syl.remove(i);
        let mut tail = syl.split_off(i);
        syl.extend(between);
        syl.push(head);
        syl.append(&mut tail);
    }
    let order = least_linear_extension(g, &syl.iter().map(|s| s.vertex).collect::<Vec<_>>());
    let mut slots: Vec<Option<Work>> = syl.into_iter().map(Some).collect();
    let mut syllables = Vec::with_capacity(order.len());
    let mut local_keys = Vec::with_capacity(order.len());
    for i in order {
        let s = slots[i].take().expect("each syllable placed once");
        syllables.push(Syllable {
            vertex: s.vertex,
            word: s.word,
        });
        local_keys.push(s.key);
    }
    Ok(Pruned {
        syllables,
        local_keys,
    })
}

/// First pair `(i, j)` of same-vertex positions, `j` the next occurrence
/// after `i`, such that no position strictly between them is forced after `i`
/// by a chain of dependent vertices.
pub(crate) fn find_mergeable(g: &VertexGraph, verts: &[usize]) -> Option<(usize, usize)> {
    for i in 0..verts.len() {
        let v = verts[i];
        let mut above = vec![false; verts.len()];
        for j in i + 1..verts.len() {
            if verts[j] == v {
                if (i + 1..j).all(|k| !above[k]) {
                    return Some((i, j));
                }
                break;
            }
            above[j] = g.dependent(v, verts[j])
                || (i + 1..j).any(|k| above[k] && g.dependent(verts[k], verts[j]));
        }
    }
    None
}

/// Merges neighbouring syllables of the same vertex, dropping trivial results,
/// until no two neighbours share a vertex.
fn merge_adjacent(o: &GraphProductOracle, syl: &mut Vec<Work>) -> Result<(), GroupError> {
    let mut i = 0;
    while i + 1 < syl.len() {
        if syl[i].vertex != syl[i + 1].vertex {
            i += 1;
            continue;
        }
        let next = syl.remove(i + 1);
        let vo = &o.vertices[syl[i].vertex];
        let word = syl[i].word.concat(&next.word);
        let key = vo.evaluate(&word)?;
        if key == vo.identity_key() {
            syl.remove(i);
            i = i.saturating_sub(1);
        } else {
            syl[i].word = word;
            syl[i].key = key;
        }
    }
    Ok(())
}

/// Lexicographically least linear extension of the dependence order on a
/// sequence of vertices: repeatedly emit the smallest vertex among the
/// positions whose dependent predecessors are all emitted.
pub(crate) fn least_linear_extension(g: &VertexGraph, verts: &[usize]) -> Vec<usize> {
    let n = verts.len();
    let mut placed = vec![false; n];
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let mut best: Option<usize> = None;
        for p in 0..n {
            if placed[p] {
                continue;
            }
            let blocked = (0..p).any(|q| !placed[q] && g.dependent(verts[q], verts[p]));
            if !blocked && best.is_none_or(|b| verts[p] < verts[b]) {
                best = Some(p);
            }
        }
        let b = best.expect("some minimal element exists");
        placed[b] = true;
        out.push(b);
    }
    out
}

impl GroupOracle for GraphProductOracle {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn evaluate(&self, w: &[Letter]) -> Result<ElementKey, GroupError> {
        let p = prune(self, w)?;
        let mut s = String::from("G:");
        for (syl, k) in p.syllables.iter().zip(&p.local_keys) {
            // length prefix keeps the encoding injective
            s.push_str(&format!("{}={}:{};", self.graph.name(syl.vertex), k.as_str().len(), k.as_str()));
        }
        Ok(ElementKey::new(s))
    }

    fn identity_key(&self) -> ElementKey {
        ElementKey::new("G:".into())
    }

    fn is_finite(&self) -> bool {
        self.graph.is_complete() && self.vertices.iter().all(|v| v.is_finite())
    }

    fn kind(&self) -> &'static str {
        "graphproduct"
    }
}
