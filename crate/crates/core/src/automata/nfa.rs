use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::bitset::StateSet;
use super::{Alphabet, AutomatonError, Letter, Word};

/// A transition out of a state. `label == None` is an ε-move.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Edge {
    pub label: Option<usize>,
    pub target: usize,
}

/// Nondeterministic finite automaton with ε-moves.
///
/// Letters are stored as indices into the automaton's [`Alphabet`]. Values are
/// immutable once built; every operation returns a fresh automaton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nfa {
    alphabet: Alphabet,
    names: Vec<String>,
    edges: Vec<Vec<Edge>>,
    initial: Vec<usize>,
    accepting: Vec<bool>,
}

/// Incremental constructor for [`Nfa`].
#[derive(Clone, Debug)]
pub struct NfaBuilder {
    alphabet: Alphabet,
    names: Vec<String>,
    edges: Vec<Vec<Edge>>,
    initial: Vec<usize>,
    accepting: Vec<bool>,
}

impl NfaBuilder {
    pub fn new(alphabet: Alphabet) -> Self {
        NfaBuilder {
            alphabet,
            names: Vec::new(),
            edges: Vec::new(),
            initial: Vec::new(),
            accepting: Vec::new(),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.names.len()
    }

    pub fn add_state(&mut self, name: impl Into<String>) -> usize {
        self.names.push(name.into());
        self.edges.push(Vec::new());
        self.accepting.push(false);
        self.names.len() - 1
    }

    /// Adds a state named `q<index>`.
    pub fn fresh_state(&mut self) -> usize {
        let n = self.names.len();
        self.add_state(format!("q{n}"))
    }

    pub fn add_edge(&mut self, from: usize, label: Option<usize>, to: usize) {
        debug_assert!(label.is_none_or(|l| l < self.alphabet.len()));
        let e = Edge { label, target: to };
        if !self.edges[from].contains(&e) {
            self.edges[from].push(e);
        }
    }

    /// Adds a transition labelled by a letter, which must be in the alphabet.
    pub fn add_letter_edge(
        &mut self,
        from: usize,
        letter: &Letter,
        to: usize,
    ) -> Result<(), AutomatonError> {
        let l = self
            .alphabet
            .index_of(letter)
            .ok_or_else(|| AutomatonError::UnknownLetter(letter.clone()))?;
        self.add_edge(from, Some(l), to);
        Ok(())
    }

    pub fn add_epsilon(&mut self, from: usize, to: usize) {
        self.add_edge(from, None, to);
    }

    pub fn set_initial(&mut self, s: usize) {
        if !self.initial.contains(&s) {
            self.initial.push(s);
        }
    }

    pub fn set_accepting(&mut self, s: usize, accepting: bool) {
        self.accepting[s] = accepting;
    }

    pub fn build(mut self) -> Result<Nfa, AutomatonError> {
        if self.initial.is_empty() {
            return Err(AutomatonError::NoInitialState);
        }
        self.initial.sort_unstable();
        for out in &mut self.edges {
            out.sort_unstable();
        }
        Ok(Nfa {
            alphabet: self.alphabet,
            names: self.names,
            edges: self.edges,
            initial: self.initial,
            accepting: self.accepting,
        })
    }
}

impl Nfa {
    /// The automaton with one non-accepting state and no transitions.
    pub fn empty_language(alphabet: Alphabet) -> Nfa {
        let mut b = NfaBuilder::new(alphabet);
        let q = b.fresh_state();
        b.set_initial(q);
        b.build().expect("initial state set")
    }

    /// Accepts exactly the given words.
    pub fn from_words(alphabet: Alphabet, words: &[Word]) -> Result<Nfa, AutomatonError> {
        let mut b = NfaBuilder::new(alphabet);
        let start = b.fresh_state();
        b.set_initial(start);
        for w in words {
            let mut cur = start;
            for l in w.iter() {
                let next = b.fresh_state();
                b.add_letter_edge(cur, l, next)?;
                cur = next;
            }
            b.set_accepting(cur, true);
        }
        b.build()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.names.len()
    }

    pub fn state_name(&self, s: usize) -> &str {
        &self.names[s]
    }

    pub fn edges(&self, s: usize) -> &[Edge] {
        &self.edges[s]
    }

    pub fn initial_states(&self) -> &[usize] {
        &self.initial
    }

    pub fn is_accepting(&self, s: usize) -> bool {
        self.accepting[s]
    }

    pub fn accepting_states(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.state_count()).filter(|&s| self.accepting[s])
    }

    pub fn transition_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    pub(crate) fn closure(&self, set: &mut StateSet) {
        let mut stack: Vec<usize> = set.iter().collect();
        while let Some(s) = stack.pop() {
            for e in &self.edges[s] {
                if e.label.is_none() && set.insert(e.target) {
                    stack.push(e.target);
                }
            }
        }
    }

    pub(crate) fn initial_set(&self) -> StateSet {
        let mut set = StateSet::new(self.state_count());
        for &s in &self.initial {
            set.insert(s);
        }
        self.closure(&mut set);
        set
    }

    /// ε-closed successor set on letter index `l`.
    pub(crate) fn step(&self, set: &StateSet, l: usize) -> StateSet {
        let mut next = StateSet::new(self.state_count());
        for s in set.iter() {
            for e in &self.edges[s] {
                if e.label == Some(l) {
                    next.insert(e.target);
                }
            }
        }
        self.closure(&mut next);
        next
    }

    pub(crate) fn accepting_set(&self) -> StateSet {
        let mut set = StateSet::new(self.state_count());
        for s in self.accepting_states() {
            set.insert(s);
        }
        set
    }

    /// Membership by ε-closed subset simulation. Letters outside the
    /// alphabet never match.
    pub fn accepts(&self, w: &[Letter]) -> bool {
        let Some(codes) = self.alphabet.encode(w) else {
            return false;
        };
        let mut cur = self.initial_set();
        for l in codes {
            cur = self.step(&cur, l);
            if cur.is_empty() {
                return false;
            }
        }
        let hit = cur.iter().any(|s| self.accepting[s]);
        hit
    }

    /// States reachable from an initial state.
    pub(crate) fn reachable(&self) -> StateSet {
        let mut seen = StateSet::new(self.state_count());
        let mut stack = Vec::new();
        for &s in &self.initial {
            if seen.insert(s) {
                stack.push(s);
            }
        }
        while let Some(s) = stack.pop() {
            for e in &self.edges[s] {
                if seen.insert(e.target) {
                    stack.push(e.target);
                }
            }
        }
        seen
    }

    /// States from which an accepting state is reachable.
    pub(crate) fn coreachable(&self) -> StateSet {
        let n = self.state_count();
        let mut rev = vec![Vec::new(); n];
        for (s, out) in self.edges.iter().enumerate() {
            for e in out {
                rev[e.target].push(s);
            }
        }
        let mut seen = StateSet::new(n);
        let mut stack: Vec<usize> = self.accepting_states().collect();
        for &s in &stack {
            seen.insert(s);
        }
        while let Some(s) = stack.pop() {
            for &p in &rev[s] {
                if seen.insert(p) {
                    stack.push(p);
                }
            }
        }
        seen
    }

    /// True iff no accepting state is reachable from an initial state.
    pub fn is_empty(&self) -> bool {
        !self.reachable().intersects(&self.accepting_set())
    }

    /// All accepted words of length at most `max_len`, sorted length-lex by
    /// alphabet declaration order.
    pub fn enumerate(&self, max_len: usize) -> Vec<Word> {
        AcceptedWords::new(self.clone(), Some(max_len)).collect()
    }

    /// Lazy length-lex stream of accepted words, optionally bounded in length.
    /// The stream ends on its own when the language is finite.
    pub fn accepted_words(&self, max_len: Option<usize>) -> AcceptedWords {
        AcceptedWords::new(self.clone(), max_len)
    }

    pub(crate) fn decode(&self, codes: &[usize]) -> Word {
        codes.iter().map(|&l| self.alphabet.letter(l).clone()).collect()
    }

    /// Removes states that are unreachable or cannot reach acceptance.
    /// The result always keeps at least one initial state.
    pub fn trim(&self) -> Nfa {
        let mut useful = self.reachable();
        let live = self.coreachable();
        {
            let mut keep = StateSet::new(self.state_count());
            for s in useful.iter().filter(|&s| live.contains(s)) {
                keep.insert(s);
            }
            useful = keep;
        }
        if !self.initial.iter().any(|&s| useful.contains(s)) {
            return Nfa::empty_language(self.alphabet.clone());
        }
        let mut map = vec![usize::MAX; self.state_count()];
        let mut b = NfaBuilder::new(self.alphabet.clone());
        for s in useful.iter() {
            map[s] = b.add_state(self.names[s].clone());
            b.set_accepting(map[s], self.accepting[s]);
        }
        for s in useful.iter() {
            for e in &self.edges[s] {
                if useful.contains(e.target) {
                    b.add_edge(map[s], e.label, map[e.target]);
                }
            }
        }
        for &s in &self.initial {
            if useful.contains(s) {
                b.set_initial(map[s]);
            }
        }
        b.build().expect("trimmed automaton keeps an initial state")
    }

    /// Length of the longest accepted word, or `None` when the language is
    /// infinite. An empty language reports `Some(0)`.
    pub fn max_word_len(&self) -> Option<usize> {
        let t = self.trim();
        if t.is_empty() {
            return Some(0);
        }
        t.max_word_len_collapsed()
    }

    fn max_word_len_collapsed(&self) -> Option<usize> {
        // Work on the ε-free automaton whose states are the original states
        // and whose edges go to ε-closures; ε-cycles disappear.
        let n = self.state_count();
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
        for s in 0..n {
            let mut one = StateSet::new(n);
            one.insert(s);
            self.closure(&mut one);
            for l in 0..self.alphabet.len() {
                let nx = self.step(&one, l);
                succ[s].extend(nx.iter());
            }
            succ[s].sort_unstable();
            succ[s].dedup();
        }
        let live = self.coreachable();
        let mut color = vec![0u8; n];
        let mut best = vec![0usize; n];
        fn visit(
            s: usize,
            succ: &[Vec<usize>],
            live: &StateSet,
            color: &mut [u8],
            best: &mut [usize],
        ) -> bool {
            color[s] = 1;
            let mut b = 0;
            for &t in &succ[s] {
                if !live.contains(t) {
                    continue;
                }
                match color[t] {
                    1 => return false,
                    0 => {
                        if !visit(t, succ, live, color, best) {
                            return false;
                        }
                    }
                    _ => {}
                }
                b = b.max(best[t] + 1);
            }
            best[s] = b;
            color[s] = 2;
            true
        }
        let start = self.initial_set();
        let mut longest = 0;
        for s in start.iter() {
            if !live.contains(s) {
                continue;
            }
            if color[s] == 0 && !visit(s, &succ, &live, &mut color, &mut best) {
                return None;
            }
            longest = longest.max(best[s]);
        }
        Some(longest)
    }
}


/// Iterator behind [`Nfa::accepted_words`]. Words are produced one length
/// level at a time; prefixes that cannot reach acceptance are dropped.
#[derive(Clone, Debug)]
pub struct AcceptedWords {
    nfa: Nfa,
    live: StateSet,
    accepting: StateSet,
    level: Vec<(Vec<usize>, StateSet)>,
    len: usize,
    max_len: Option<usize>,
    pos: usize,
}

impl AcceptedWords {
    fn new(nfa: Nfa, max_len: Option<usize>) -> Self {
        let live = nfa.coreachable();
        let accepting = nfa.accepting_set();
        let start = nfa.initial_set();
        let level = if start.intersects(&live) {
            vec![(Vec::new(), start)]
        } else {
            Vec::new()
        };
        AcceptedWords {
            nfa,
            live,
            accepting,
            level,
            len: 0,
            max_len,
            pos: 0,
        }
    }

    fn advance_level(&mut self) -> bool {
        if self.max_len.is_some_and(|m| self.len >= m) {
            self.level.clear();
            return false;
        }
        let mut next = Vec::new();
        for (w, set) in &self.level {
            for l in 0..self.nfa.alphabet.len() {
                let s = self.nfa.step(set, l);
                if s.intersects(&self.live) {
                    let mut w2 = w.clone();
                    w2.push(l);
                    next.push((w2, s));
                }
            }
        }
        self.level = next;
        self.len += 1;
        self.pos = 0;
        !self.level.is_empty()
    }
}

impl Iterator for AcceptedWords {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        loop {
            while self.pos < self.level.len() {
                let (w, set) = &self.level[self.pos];
                self.pos += 1;
                if set.intersects(&self.accepting) {
                    return Some(self.nfa.decode(w));
                }
            }
            if self.level.is_empty() || !self.advance_level() {
                return None;
            }
        }
    }
}
