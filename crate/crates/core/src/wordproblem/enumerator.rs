use alloc::boxed::Box;
use alloc::vec::Vec;

use super::{FreeWord, Presentation};
use crate::automata::{AcceptedWords, Alphabet, Nfa, Word};
use crate::demonstrations::Demonstration;
use crate::groups::SharedOracle;

/// A deterministic source of words. Returning `None` declares the stream
/// finite; `restart` rewinds it to the first word.
pub trait WordStream: Send {
    fn next_word(&mut self) -> Option<Word>;
    fn restart(&mut self);
}

/// Indexed access to a word stream, with every emitted word cached so that
/// index `i` always denotes the same word.
pub struct Enumerator {
    stream: Box<dyn WordStream>,
    cache: Vec<Word>,
    ended: bool,
    cursor: usize,
}

impl core::fmt::Debug for Enumerator {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Enumerator")
            .field("cached", &self.cache.len())
            .field("ended", &self.ended)
            .finish()
    }
}

impl Enumerator {
    pub fn new(stream: Box<dyn WordStream>) -> Self {
        Enumerator {
            stream,
            cache: Vec::new(),
            ended: false,
            cursor: 0,
        }
    }

    /// The `i`-th word, or `None` if the stream ends before it.
    pub fn get(&mut self, i: usize) -> Option<&Word> {
        while self.cache.len() <= i && !self.ended {
            match self.stream.next_word() {
                Some(w) => self.cache.push(w),
                None => self.ended = true,
            }
        }
        self.cache.get(i)
    }

    /// Next `(index, word)` pair from the cursor.
    pub fn next_indexed(&mut self) -> Option<(usize, Word)> {
        let i = self.cursor;
        let w = self.get(i)?.clone();
        self.cursor += 1;
        Some((i, w))
    }

    pub fn restart(&mut self) {
        self.cursor = 0;
    }

    /// Words `0..n`, fewer if the stream ends.
    pub fn prefix(&mut self, n: usize) -> Vec<Word> {
        if n > 0 {
            self.get(n - 1);
        }
        self.cache.iter().take(n).cloned().collect()
    }

    /// True once the stream has been seen to end; `len` is then exact.
    pub fn has_ended(&self) -> bool {
        self.ended
    }

    pub fn cached_len(&self) -> usize {
        self.cache.len()
    }

    /// Rebuilds the stream from scratch and drops the cache.
    pub fn reset(&mut self) {
        self.stream.restart();
        self.cache.clear();
        self.ended = false;
        self.cursor = 0;
    }
}

struct LanguageStream {
    nfa: Nfa,
    words: AcceptedWords,
}

impl WordStream for LanguageStream {
    fn next_word(&mut self) -> Option<Word> {
        self.words.next()
    }

    fn restart(&mut self) {
        self.words = self.nfa.accepted_words(None);
    }
}

/// 𝓛(a) in length-lex order; finite exactly when the language is.
pub fn language_enumerator(a: &Nfa) -> Enumerator {
    let nfa = a.trim();
    let words = nfa.accepted_words(nfa.max_word_len());
    Enumerator::new(Box::new(LanguageStream { nfa, words }))
}

struct ImageStream {
    demo: Demonstration,
    inner: Enumerator,
    pos: usize,
}

impl WordStream for ImageStream {
    fn next_word(&mut self) -> Option<Word> {
        let w = self.inner.get(self.pos)?.clone();
        self.pos += 1;
        Some(self.demo.image_word(&w).expect("language letters have evaluations"))
    }

    fn restart(&mut self) {
        self.pos = 0;
    }
}

/// The language of `d` in length-lex order, each word replaced by its
/// evaluation word over the group's letters.
pub fn demonstration_enumerator(d: &Demonstration) -> Enumerator {
    Enumerator::new(Box::new(ImageStream {
        demo: d.clone(),
        inner: language_enumerator(d.language()),
        pos: 0,
    }))
}

/// Length-lex odometer over all words of an alphabet.
struct AllWords {
    alphabet: Alphabet,
    digits: Option<Vec<usize>>,
}

impl AllWords {
    fn new(alphabet: Alphabet) -> Self {
        AllWords {
            alphabet,
            digits: Some(Vec::new()),
        }
    }

    fn next(&mut self) -> Option<Word> {
        let d = self.digits.as_mut()?;
        let w: Word = d.iter().map(|&i| self.alphabet.letter(i).clone()).collect();
        let n = self.alphabet.len();
        if n == 0 {
            self.digits = None;
            return Some(w);
        }
        let mut pos = d.len();
        loop {
            if pos == 0 {
                d.iter_mut().for_each(|x| *x = 0);
                d.push(0);
                break;
            }
            pos -= 1;
            d[pos] += 1;
            if d[pos] < n {
                break;
            }
            d[pos] = 0;
        }
        Some(w)
    }
}

struct CowordStream {
    oracle: SharedOracle,
    words: AllWords,
    trivial: bool,
}

impl WordStream for CowordStream {
    fn next_word(&mut self) -> Option<Word> {
        if self.trivial {
            return None;
        }
        loop {
            let w = self.words.next()?;
            if !self.oracle.is_identity(&w).expect("oracle evaluates its own letters") {
                return Some(w);
            }
        }
    }

    fn restart(&mut self) {
        self.words = AllWords::new(self.oracle.alphabet().clone());
    }
}

/// All non-identity words over the oracle's letters in length-lex order.
/// Empty and finite when every letter evaluates to the identity.
pub fn coword_demo_from_wp(o: SharedOracle) -> Enumerator {
    let trivial = o
        .alphabet()
        .iter()
        .all(|l| o.is_identity(core::slice::from_ref(l)).expect("own letter"));
    let words = AllWords::new(o.alphabet().clone());
    Enumerator::new(Box::new(CowordStream {
        oracle: o,
        words,
        trivial,
    }))
}

struct NormalClosureStream {
    presentation: Presentation,
    reduced_by_len: Vec<Vec<FreeWord>>,
    size: usize,
    batch: Vec<Word>,
    pos: usize,
}

impl NormalClosureStream {
    fn new(presentation: Presentation) -> Self {
        NormalClosureStream {
            presentation,
            reduced_by_len: alloc::vec![alloc::vec![FreeWord::default()]],
            size: 0,
            batch: alloc::vec![Word::empty()],
            pos: 0,
        }
    }

    /// Reduced words of length `n` in length-lex order.
    fn reduced(&mut self, n: usize) -> &[FreeWord] {
        while self.reduced_by_len.len() <= n {
            let prev = self.reduced_by_len.last().unwrap();
            let mut next = Vec::new();
            for w in prev {
                for l in self.presentation.alphabet().iter() {
                    if w.word().last() != Some(&l.formal_inverse()) {
                        let mut v = w.word().clone();
                        v.push(l.clone());
                        next.push(FreeWord(v));
                    }
                }
            }
            self.reduced_by_len.push(next);
        }
        &self.reduced_by_len[n]
    }

    /// All factors `u r^{±1} u⁻¹` whose weight `|u| + |r|` equals `weight`,
    /// ordered by relator index, then sign (positive first), then conjugator.
    fn factors(&mut self, weight: usize) -> Vec<FreeWord> {
        let mut out = Vec::new();
        let rels: Vec<FreeWord> = self.presentation.relators().to_vec();
        for r in &rels {
            if r.len() > weight {
                continue;
            }
            let us: Vec<FreeWord> = self.reduced(weight - r.len()).to_vec();
            for rr in [r.clone(), r.inverse()] {
                for u in &us {
                    out.push(u.times(&rr).times(&u.inverse()));
                }
            }
        }
        out
    }

    /// Products with total size `size = m + Σ weights`, for `m = 1, 2, …`,
    /// weights composed in lexicographic order, first factor varying slowest.
    fn build_batch(&mut self, size: usize) -> Vec<Word> {
        let min_w = self
            .presentation
            .relators()
            .iter()
            .map(FreeWord::len)
            .min()
            .unwrap_or(0);
        let mut out = Vec::new();
        let mut m = 1;
        while m * (1 + min_w) <= size {
            let total = size - m;
            let mut comps = Vec::new();
            compositions(total, m, min_w, &mut Vec::new(), &mut comps);
            for comp in comps {
                let lists: Vec<Vec<FreeWord>> = comp.iter().map(|&w| self.factors(w)).collect();
                if lists.iter().any(Vec::is_empty) {
                    continue;
                }
                let mut idx = alloc::vec![0usize; m];
                'product: loop {
                    let mut acc = FreeWord::default();
                    for (f, &i) in lists.iter().zip(&idx) {
                        acc = acc.times(&f[i]);
                    }
                    out.push(acc.into_word());
                    let mut p = m;
                    loop {
                        if p == 0 {
                            break 'product;
                        }
                        p -= 1;
                        idx[p] += 1;
                        if idx[p] < lists[p].len() {
                            break;
                        }
                        idx[p] = 0;
                    }
                }
            }
            m += 1;
        }
        out
    }
}

/// Compositions of `total` into `parts` parts, each at least `min`, in
/// lexicographic order.
fn compositions(total: usize, parts: usize, min: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if parts == 0 {
        if total == 0 {
            out.push(cur.clone());
        }
        return;
    }
    if total < min * parts {
        return;
    }
    for first in min..=total - min * (parts - 1) {
        cur.push(first);
        compositions(total - first, parts - 1, min, cur, out);
        cur.pop();
    }
}

impl WordStream for NormalClosureStream {
    fn next_word(&mut self) -> Option<Word> {
        loop {
            if self.pos < self.batch.len() {
                self.pos += 1;
                return Some(self.batch[self.pos - 1].clone());
            }
            if self.presentation.relators().is_empty() {
                return None;
            }
            self.size += 1;
            self.batch = self.build_batch(self.size);
            self.pos = 0;
        }
    }

    fn restart(&mut self) {
        self.size = 0;
        self.batch = alloc::vec![Word::empty()];
        self.pos = 0;
    }
}

/// Reduced forms of products of conjugates of relators and their inverses,
/// dovetailed by total size. The empty product comes first. With no
/// relators the stream is just the empty word.
pub fn normal_closure_enumerator(p: &Presentation) -> Enumerator {
    Enumerator::new(Box::new(NormalClosureStream::new(p.clone())))
}

/// Exposed for tests of the odometer.
#[cfg(test)]
pub(crate) fn all_words_prefix(alphabet: &Alphabet, n: usize) -> Vec<Word> {
    let mut a = AllWords::new(alphabet.clone());
    (0..n).map_while(|_| a.next()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::all_words;
    use crate::demonstrations::z_language;
    use crate::groups::{FreeAbelianOracle, GroupOracle, PermutationOracle};
    use alloc::sync::Arc;

    fn commutator() -> Presentation {
        Presentation::new(&["a", "b"], &[Word::parse("a b a^-1 b^-1")]).unwrap()
    }

    #[test]
    fn odometer_matches_all_words() {
        let al = Alphabet::parse("a b c");
        assert_eq!(all_words_prefix(&al, 40), all_words(&al, 3)[..40].to_vec());
    }

    #[test]
    fn language_stream_is_length_lex() {
        let mut e = language_enumerator(&z_language("a"));
        assert_eq!(e.prefix(4), [Word::parse("a"), Word::parse("a^-1"), Word::parse("a a"), Word::parse("a^-1 a^-1")]);
        let mut empty = language_enumerator(&Nfa::empty_language(Alphabet::parse("a")));
        assert!(empty.get(0).is_none());
        assert!(empty.has_ended());
    }

    #[test]
    fn normal_closure_examples() {
        let mut g = normal_closure_enumerator(&commutator());
        assert_eq!(g.get(0), Some(&Word::empty()));
        let target = Word::parse("a b a^-1 b^-1");
        assert!((0..=10_000).any(|i| g.get(i) == Some(&target)));
        let mut trivial = normal_closure_enumerator(&Presentation::new(&["a"], &[Word::parse("a")]).unwrap());
        assert!((0..=100).any(|i| trivial.get(i) == Some(&Word::parse("a"))));
        let mut none = normal_closure_enumerator(&Presentation::new(&["a"], &[]).unwrap());
        assert_eq!(none.prefix(5), [Word::empty()]);
    }

    #[test]
    fn normal_closure_words_abelianize_to_zero() {
        let mut g = normal_closure_enumerator(&commutator());
        let z2 = FreeAbelianOracle::standard(&["a", "b"]);
        for w in g.prefix(3000) {
            assert!(z2.is_identity(&w).unwrap(), "{w}");
        }
    }

    #[test]
    fn cowords_skip_identity() {
        let z = Arc::new(FreeAbelianOracle::standard(&["a"]));
        let mut e = coword_demo_from_wp(z.clone());
        let first = e.prefix(5);
        assert_eq!(first[..4], [Word::parse("a"), Word::parse("a^-1"), Word::parse("a a"), Word::parse("a^-1 a^-1")]);
        assert_eq!(first[4], Word::parse("a a a"));
        let s3 = Arc::new(PermutationOracle::s3());
        let mut e = coword_demo_from_wp(s3.clone());
        let singles: Vec<Word> = s3.alphabet().iter().map(|l| Word::from(alloc::vec![l.clone()])).collect();
        assert_eq!(e.prefix(5), singles);
        e.reset();
        assert_eq!(e.get(0), Some(&singles[0]));
    }
}
