//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use epic_core::automata::{Alphabet, Letter, Nfa, NfaBuilder, Word};
use rand::Rng;

pub fn w(s: &str) -> Word {
    Word::parse(s)
}

pub fn l(s: &str) -> Letter {
    Letter::new(s).unwrap()
}

/// An automaton kept as plain transition data, with its own membership test.
#[derive(Debug, Clone)]
pub struct RawNfa {
    pub letters: Vec<String>,
    pub states: usize,
    pub trans: Vec<(usize, Option<usize>, usize)>,
    pub initial: Vec<usize>,
    pub accepting: Vec<bool>,
}

impl RawNfa {
    pub fn random(rng: &mut impl Rng, letters: &[&str], max_states: usize) -> RawNfa {
        let states = rng.gen_range(1..=max_states);
        let mut trans = Vec::new();
        for s in 0..states {
            for t in 0..states {
                for x in 0..letters.len() {
                    if rng.gen_bool(0.25) {
                        trans.push((s, Some(x), t));
                    }
                }
                if s != t && rng.gen_bool(0.1) {
                    trans.push((s, None, t));
                }
            }
        }
        let mut initial: Vec<usize> = (0..states).filter(|_| rng.gen_bool(0.3)).collect();
        if initial.is_empty() {
            initial.push(0);
        }
        let accepting = (0..states).map(|_| rng.gen_bool(0.4)).collect();
        RawNfa {
            letters: letters.iter().map(|s| s.to_string()).collect(),
            states,
            trans,
            initial,
            accepting,
        }
    }

    pub fn to_nfa(&self) -> Nfa {
        let alphabet = Alphabet::new(self.letters.iter().map(|s| l(s)));
        let mut b = NfaBuilder::new(alphabet);
        for s in 0..self.states {
            b.add_state(format!("q{s}"));
        }
        for &(s, x, t) in &self.trans {
            b.add_edge(s, x, t);
        }
        for &s in &self.initial {
            b.set_initial(s);
        }
        for s in 0..self.states {
            b.set_accepting(s, self.accepting[s]);
        }
        b.build().unwrap()
    }

    fn closure(&self, set: &mut BTreeSet<usize>) {
        let mut stack: Vec<usize> = set.iter().copied().collect();
        while let Some(s) = stack.pop() {
            for &(a, x, b) in &self.trans {
                if a == s && x.is_none() && set.insert(b) {
                    stack.push(b);
                }
            }
        }
    }

    pub fn accepts(&self, word: &[String]) -> bool {
        let mut cur: BTreeSet<usize> = self.initial.iter().copied().collect();
        self.closure(&mut cur);
        for sym in word {
            let Some(x) = self.letters.iter().position(|y| y == sym) else {
                return false;
            };
            let mut next = BTreeSet::new();
            for &(a, lab, b) in &self.trans {
                if cur.contains(&a) && lab == Some(x) {
                    next.insert(b);
                }
            }
            self.closure(&mut next);
            cur = next;
        }
        cur.iter().any(|&s| self.accepting[s])
    }
}

/// Every word over `letters` of length at most `max_len`.
pub fn all_strings(letters: &[&str], max_len: usize) -> Vec<Vec<String>> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Vec<String>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for p in &layer {
            for x in letters {
                let mut q = p.clone();
                q.push(x.to_string());
                next.push(q);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

pub fn to_word(s: &[String]) -> Word {
    s.iter().map(|x| l(x)).collect()
}

pub fn strings(v: &[Word]) -> BTreeSet<Vec<String>> {
    v.iter()
        .map(|w| w.iter().map(|x| x.as_str().to_string()).collect())
        .collect()
}

/// Pruned types over vertices `0..n` (as strings of vertex indices) up to
/// `max_len`, found by exploring shuffle classes: a word is a pruned type
/// when no word in its class has two equal neighbours and it is the
/// lexicographically least word of its class.
pub fn brute_pruned_types(n: usize, edges: &[(usize, usize)], max_len: usize) -> BTreeSet<Vec<usize>> {
    let adj = |a: usize, b: usize| edges.contains(&(a, b)) || edges.contains(&(b, a));
    let mut out = BTreeSet::new();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for p in &layer {
            for v in 0..n {
                let mut q = p.clone();
                q.push(v);
                next.push(q);
            }
        }
        for word in &next {
            if seen.contains(word) {
                continue;
            }
            let mut class = BTreeSet::from([word.clone()]);
            let mut queue = VecDeque::from([word.clone()]);
            let mut reduced = true;
            while let Some(u) = queue.pop_front() {
                for i in 0..u.len() - 1 {
                    if u[i] == u[i + 1] {
                        reduced = false;
                    } else if adj(u[i], u[i + 1]) {
                        let mut s = u.clone();
                        s.swap(i, i + 1);
                        if class.insert(s.clone()) {
                            queue.push_back(s);
                        }
                    }
                }
            }
            if reduced {
                out.insert(class.iter().next().unwrap().clone());
            }
            seen.extend(class);
        }
        layer = next;
    }
    out
}

/// Heisenberg elements as `(a, b, c)` for the matrix `[[1,a,c],[0,1,b],[0,0,1]]`.
pub fn heis_mul(p: (i64, i64, i64), q: (i64, i64, i64)) -> (i64, i64, i64) {
    (p.0 + q.0, p.1 + q.1, p.2 + q.2 + p.0 * q.1)
}

pub fn heis_key(p: (i64, i64, i64)) -> String {
    format!("M:1,{},{};0,1,{};0,0,1", p.0, p.2, p.1)
}

/// Ball of the given radius in a group presented by generator elements and
/// a multiplication, as a set of elements.
pub fn brute_ball<T: Ord + Clone>(id: T, gens: &[T], mul: impl Fn(&T, &T) -> T, radius: usize) -> BTreeSet<T> {
    let mut seen = BTreeSet::from([id.clone()]);
    let mut layer = vec![id];
    for _ in 0..radius {
        let mut next = Vec::new();
        for p in &layer {
            for g in gens {
                let q = mul(p, g);
                if seen.insert(q.clone()) {
                    next.push(q);
                }
            }
        }
        layer = next;
    }
    seen
}

pub fn keys_of<K: Ord + Clone, V>(m: &BTreeMap<K, V>) -> BTreeSet<K> {
    m.keys().cloned().collect()
}
