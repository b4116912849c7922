use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::bitset::StateSet;
use super::{Alphabet, AutomatonError, Letter, Nfa, NfaBuilder, Word};

/// Copies every state and edge of `src` into `b`, translating letters through
/// `b`'s alphabet, which must contain every letter of `src`. Initial states
/// are not marked. Returns the state map.
pub fn embed(b: &mut NfaBuilder, src: &Nfa, prefix: &str) -> Vec<usize> {
    let remap: Vec<usize> = src
        .alphabet()
        .iter()
        .map(|l| b.alphabet().index_of(l).expect("merged alphabet"))
        .collect();
    let map: Vec<usize> = (0..src.state_count())
        .map(|s| b.add_state(format!("{prefix}{}", src.state_name(s))))
        .collect();
    for s in 0..src.state_count() {
        b.set_accepting(map[s], src.is_accepting(s));
        for e in src.edges(s) {
            b.add_edge(map[s], e.label.map(|l| remap[l]), map[e.target]);
        }
    }
    map
}

/// The same language over a larger alphabet, whose letter order is kept.
pub fn widen_alphabet(a: &Nfa, alphabet: &Alphabet) -> Result<Nfa, AutomatonError> {
    if let Some(l) = a.alphabet().iter().find(|l| !alphabet.contains(l)) {
        return Err(AutomatonError::UnknownLetter(l.clone()));
    }
    let mut b = NfaBuilder::new(alphabet.clone());
    let map = embed(&mut b, a, "");
    for &s in a.initial_states() {
        b.set_initial(map[s]);
    }
    b.build()
}

/// 𝓛(a) ∪ 𝓛(b). Alphabets are merged by display string.
pub fn union(a: &Nfa, b: &Nfa) -> Nfa {
    let mut out = NfaBuilder::new(a.alphabet().merged(b.alphabet()));
    let ma = embed(&mut out, a, "l.");
    let mb = embed(&mut out, b, "r.");
    for &s in a.initial_states() {
        out.set_initial(ma[s]);
    }
    for &s in b.initial_states() {
        out.set_initial(mb[s]);
    }
    out.build().expect("operands have initial states")
}

/// 𝓛(a)·𝓛(b).
pub fn concat(a: &Nfa, b: &Nfa) -> Nfa {
    let mut out = NfaBuilder::new(a.alphabet().merged(b.alphabet()));
    let ma = embed(&mut out, a, "l.");
    let mb = embed(&mut out, b, "r.");
    for s in a.accepting_states() {
        out.set_accepting(ma[s], false);
        for &t in b.initial_states() {
            out.add_epsilon(ma[s], mb[t]);
        }
    }
    for &s in a.initial_states() {
        out.set_initial(ma[s]);
    }
    out.build().expect("operands have initial states")
}

/// Kleene star 𝓛(a)*.
pub fn star(a: &Nfa) -> Nfa {
    let mut out = NfaBuilder::new(a.alphabet().clone());
    let hub = out.add_state("star");
    let m = embed(&mut out, a, "s.");
    out.set_initial(hub);
    out.set_accepting(hub, true);
    for &s in a.initial_states() {
        out.add_epsilon(hub, m[s]);
    }
    for s in a.accepting_states() {
        out.add_epsilon(m[s], hub);
    }
    out.build().expect("hub is initial")
}

/// ε-free view of an automaton: per-state closures and accepting flags.
struct Closed<'a> {
    nfa: &'a Nfa,
    closures: Vec<StateSet>,
    accepting: Vec<bool>,
}

impl<'a> Closed<'a> {
    fn new(nfa: &'a Nfa) -> Self {
        let n = nfa.state_count();
        let closures: Vec<StateSet> = (0..n)
            .map(|s| {
                let mut c = StateSet::new(n);
                c.insert(s);
                nfa.closure(&mut c);
                c
            })
            .collect();
        let accepting = closures
            .iter()
            .map(|c| c.iter().any(|t| nfa.is_accepting(t)))
            .collect();
        Closed {
            nfa,
            closures,
            accepting,
        }
    }

    /// Targets of letter-`l` moves out of the closure of `s`. The targets are
    /// not closed: closure is accounted for when they are themselves expanded.
    fn successors(&self, s: usize, l: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for t in self.closures[s].iter() {
            for e in self.nfa.edges(t) {
                if e.label == Some(l) && !out.contains(&e.target) {
                    out.push(e.target);
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// 𝓛(a) ∩ 𝓛(b) by the product of the ε-removed automata, restricted to
/// reachable pairs.
pub fn intersect(a: &Nfa, b: &Nfa) -> Nfa {
    let alphabet = a.alphabet().merged(b.alphabet());
    let ca = Closed::new(a);
    let cb = Closed::new(b);
    // letters shared by both operands, as (merged, in a, in b)
    let shared: Vec<(usize, usize, usize)> = a
        .alphabet()
        .iter()
        .enumerate()
        .filter_map(|(ia, l)| {
            let ib = b.alphabet().index_of(l)?;
            Some((alphabet.index_of(l).expect("merged"), ia, ib))
        })
        .collect();
    let mut out = NfaBuilder::new(alphabet);
    let mut ids: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut queue = Vec::new();
    let mut intern = |out: &mut NfaBuilder, p: (usize, usize), queue: &mut Vec<(usize, usize)>| {
        *ids.entry(p).or_insert_with(|| {
            let id = out.add_state(format!("{}&{}", a.state_name(p.0), b.state_name(p.1)));
            out.set_accepting(id, ca.accepting[p.0] && cb.accepting[p.1]);
            queue.push(p);
            id
        })
    };
    for &sa in a.initial_states() {
        for &sb in b.initial_states() {
            let id = intern(&mut out, (sa, sb), &mut queue);
            out.set_initial(id);
        }
    }
    let mut head = 0;
    while head < queue.len() {
        let p = queue[head];
        head += 1;
        let from = intern(&mut out, p, &mut queue);
        for &(l, la, lb) in &shared {
            let ta = ca.successors(p.0, la);
            if ta.is_empty() {
                continue;
            }
            let tb = cb.successors(p.1, lb);
            for &x in &ta {
                for &y in &tb {
                    let to = intern(&mut out, (x, y), &mut queue);
                    out.add_edge(from, Some(l), to);
                }
            }
        }
    }
    out.build().expect("initial pairs exist")
}

/// Image of 𝓛(a) under the monoid homomorphism extending `phi`.
///
/// Each `x`-transition is replaced by a fresh path spelling `phi(x)`; an
/// erased letter becomes an ε-move, which is only allowed with
/// `allow_erasing`.
pub fn image_hom(
    a: &Nfa,
    phi: &BTreeMap<Letter, Word>,
    allow_erasing: bool,
) -> Result<Nfa, AutomatonError> {
    let mut alphabet = Alphabet::default();
    let mut images: Vec<Vec<usize>> = Vec::with_capacity(a.alphabet().len());
    for x in a.alphabet().iter() {
        let w = phi
            .get(x)
            .ok_or_else(|| AutomatonError::MissingImage(x.clone()))?;
        if w.is_empty() && !allow_erasing {
            return Err(AutomatonError::ErasingImage(x.clone()));
        }
        images.push(w.iter().map(|l| alphabet.insert(l.clone())).collect());
    }
    let mut out = NfaBuilder::new(alphabet);
    let map: Vec<usize> = (0..a.state_count())
        .map(|s| out.add_state(a.state_name(s)))
        .collect();
    for s in 0..a.state_count() {
        out.set_accepting(map[s], a.is_accepting(s));
    }
    for s in 0..a.state_count() {
        for e in a.edges(s) {
            let Some(l) = e.label else {
                out.add_epsilon(map[s], map[e.target]);
                continue;
            };
            let img = &images[l];
            if img.is_empty() {
                out.add_epsilon(map[s], map[e.target]);
                continue;
            }
            let mut cur = map[s];
            for (i, &y) in img.iter().enumerate() {
                let next = if i + 1 == img.len() {
                    map[e.target]
                } else {
                    out.fresh_state()
                };
                out.add_edge(cur, Some(y), next);
                cur = next;
            }
        }
    }
    for &s in a.initial_states() {
        out.set_initial(map[s]);
    }
    out.build()
}

/// { w ∈ domain* : h*(w) ∈ 𝓛(a) } for a letter-to-letter map `h`.
pub fn inverse_letter_hom(
    a: &Nfa,
    h: &BTreeMap<Letter, Letter>,
    domain: &Alphabet,
) -> Result<Nfa, AutomatonError> {
    // for each target letter index in `a`, the domain letters mapping to it
    let mut preimages: Vec<Vec<usize>> = vec![Vec::new(); a.alphabet().len()];
    for (i, e) in domain.iter().enumerate() {
        let y = h
            .get(e)
            .ok_or_else(|| AutomatonError::MissingImage(e.clone()))?;
        if let Some(j) = a.alphabet().index_of(y) {
            preimages[j].push(i);
        }
    }
    let mut out = NfaBuilder::new(domain.clone());
    let map: Vec<usize> = (0..a.state_count())
        .map(|s| out.add_state(a.state_name(s)))
        .collect();
    for s in 0..a.state_count() {
        out.set_accepting(map[s], a.is_accepting(s));
        for e in a.edges(s) {
            match e.label {
                None => out.add_epsilon(map[s], map[e.target]),
                Some(l) => {
                    for &d in &preimages[l] {
                        out.add_edge(map[s], Some(d), map[e.target]);
                    }
                }
            }
        }
    }
    for &s in a.initial_states() {
        out.set_initial(map[s]);
    }
    out.build()
}

/// 𝓛(a) ∖ {w}.
pub fn subtract_word(a: &Nfa, w: &[Letter]) -> Nfa {
    if !a.accepts(w) {
        return a.clone();
    }
    // DFA for Σ* ∖ {w}: states 0..=|w| track the matched prefix, `off` is the
    // sink for words that left the prefix.
    let alphabet = a.alphabet().clone();
    let codes = alphabet.encode(w).expect("accepted words use alphabet letters");
    let mut b = NfaBuilder::new(alphabet.clone());
    let track: Vec<usize> = (0..=codes.len()).map(|i| b.add_state(format!("p{i}"))).collect();
    let off = b.add_state("off");
    b.set_initial(track[0]);
    for (i, &t) in track.iter().enumerate() {
        b.set_accepting(t, i != codes.len());
        for l in 0..alphabet.len() {
            if i < codes.len() && codes[i] == l {
                b.add_edge(t, Some(l), track[i + 1]);
            } else {
                b.add_edge(t, Some(l), off);
            }
        }
    }
    b.set_accepting(off, true);
    for l in 0..alphabet.len() {
        b.add_edge(off, Some(l), off);
    }
    let complement = b.build().expect("initial set");
    intersect(a, &complement).trim()
}

/// Language-equivalent automaton with a single initial state that is not
/// accepting and has no outgoing ε-moves, so no accepting state is reachable
/// without reading a letter. Fails if ε ∈ 𝓛(a).
pub fn normalize_no_accepting_initial(a: &Nfa) -> Result<Nfa, AutomatonError> {
    if a.accepts(&[]) {
        return Err(AutomatonError::AcceptsEmptyWord);
    }
    let mut out = NfaBuilder::new(a.alphabet().clone());
    let start = out.add_state("init");
    let map: Vec<usize> = (0..a.state_count())
        .map(|s| out.add_state(a.state_name(s)))
        .collect();
    for s in 0..a.state_count() {
        out.set_accepting(map[s], a.is_accepting(s));
        for e in a.edges(s) {
            out.add_edge(map[s], e.label, map[e.target]);
        }
    }
    let start_set = a.initial_set();
    for s in start_set.iter() {
        for e in a.edges(s) {
            if e.label.is_some() {
                out.add_edge(start, e.label, map[e.target]);
            }
        }
    }
    out.set_initial(start);
    Ok(out.build().expect("start is initial").trim())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::all_words;
    use alloc::string::ToString;

    fn w(s: &str) -> Word {
        Word::parse(s)
    }

    fn lang(words: &[&str], alphabet: &str) -> Nfa {
        let ws: Vec<Word> = words.iter().map(|s| w(s)).collect();
        Nfa::from_words(Alphabet::parse(alphabet), &ws).unwrap()
    }

    fn letters(n: &Nfa, max: usize) -> Vec<alloc::string::String> {
        n.enumerate(max).iter().map(|w| w.to_string()).collect()
    }

    fn a_plus(letter: &str) -> Nfa {
        let mut b = NfaBuilder::new(Alphabet::parse(letter));
        let p = b.fresh_state();
        let q = b.fresh_state();
        b.set_initial(p);
        b.set_accepting(q, true);
        b.add_edge(p, Some(0), q);
        b.add_edge(q, Some(0), q);
        b.build().unwrap()
    }

    #[test]
    fn union_of_singletons() {
        let u = union(&lang(&["a"], "a"), &lang(&["b"], "b"));
        assert_eq!(letters(&u, 3), ["a", "b"]);
        let e = Nfa::empty_language(Alphabet::parse("a"));
        assert_eq!(letters(&union(&a_plus("a"), &e), 3), ["a", "a a", "a a a"]);
    }

    #[test]
    fn concat_identities() {
        let c = concat(&lang(&["a"], "a"), &lang(&["b"], "b"));
        assert_eq!(letters(&c, 4), ["a b"]);
        let eps = lang(&[""], "a");
        assert_eq!(letters(&concat(&a_plus("a"), &eps), 3), ["a", "a a", "a a a"]);
    }

    #[test]
    fn intersect_even_powers() {
        let mut b = NfaBuilder::new(Alphabet::parse("a"));
        let p = b.fresh_state();
        let q = b.fresh_state();
        let r = b.fresh_state();
        b.set_initial(p);
        b.add_edge(p, Some(0), q);
        b.add_edge(q, Some(0), r);
        b.add_epsilon(r, p);
        b.set_accepting(r, true);
        let aa_plus = b.build().unwrap();
        let i = intersect(&a_plus("a"), &aa_plus);
        assert_eq!(letters(&i, 6), ["a a", "a a a a", "a a a a a a"]);
        let e = Nfa::empty_language(Alphabet::parse("a"));
        assert!(intersect(&a_plus("a"), &e).is_empty());
    }

    #[test]
    fn image_hom_examples() {
        let l = lang(&["a", "a a"], "a");
        let mut phi = BTreeMap::new();
        phi.insert(Letter::new("a").unwrap(), w("b b"));
        assert_eq!(letters(&image_hom(&l, &phi, false).unwrap(), 5), ["b b", "b b b b"]);

        let l = lang(&["x #pad", "#pad x #pad"], "x #pad");
        let mut phi = BTreeMap::new();
        phi.insert(Letter::new("x").unwrap(), w("x"));
        phi.insert(Letter::new("#pad").unwrap(), Word::empty());
        assert_eq!(
            image_hom(&l, &phi, false).unwrap_err(),
            AutomatonError::ErasingImage(Letter::new("#pad").unwrap())
        );
        assert_eq!(letters(&image_hom(&l, &phi, true).unwrap(), 4), ["x"]);
    }

    #[test]
    fn image_hom_identity_and_missing() {
        let l = lang(&["a b", "b"], "a b");
        let id: BTreeMap<Letter, Word> = l
            .alphabet()
            .iter()
            .map(|x| (x.clone(), Word::from(alloc::vec![x.clone()])))
            .collect();
        assert_eq!(image_hom(&l, &id, false).unwrap().enumerate(3), l.enumerate(3));
        let mut partial = id.clone();
        partial.remove(&Letter::new("b").unwrap());
        assert!(matches!(
            image_hom(&l, &partial, false),
            Err(AutomatonError::MissingImage(_))
        ));
    }

    #[test]
    fn inverse_letter_hom_pullback() {
        let l = lang(&["a"], "a");
        let mut h = BTreeMap::new();
        h.insert(Letter::new("e1").unwrap(), Letter::new("a").unwrap());
        h.insert(Letter::new("e2").unwrap(), Letter::new("a").unwrap());
        let p = inverse_letter_hom(&l, &h, &Alphabet::parse("e1 e2")).unwrap();
        assert_eq!(letters(&p, 3), ["e1", "e2"]);
    }

    #[test]
    fn subtract_word_cases() {
        let l = lang(&["", "a"], "a");
        assert_eq!(letters(&subtract_word(&l, &[]), 3), ["a"]);
        let l2 = a_plus("a");
        let s = subtract_word(&l2, &w("b"));
        assert_eq!(s.enumerate(3), l2.enumerate(3));
        let s = subtract_word(&l2, &w("a a"));
        assert_eq!(letters(&s, 3), ["a", "a a a"]);
    }

    #[test]
    fn normalize_rejects_epsilon_language() {
        let l = lang(&["", "a"], "a");
        assert_eq!(
            normalize_no_accepting_initial(&l).unwrap_err(),
            AutomatonError::AcceptsEmptyWord
        );
    }

    #[test]
    fn normalize_drops_initial_epsilon_loop() {
        let mut b = NfaBuilder::new(Alphabet::parse("a"));
        let p = b.fresh_state();
        let q = b.fresh_state();
        b.set_initial(p);
        b.add_epsilon(p, p);
        b.add_edge(p, Some(0), q);
        b.add_edge(q, Some(0), q);
        b.set_accepting(q, true);
        let n = normalize_no_accepting_initial(&b.build().unwrap()).unwrap();
        assert_eq!(n.initial_states().len(), 1);
        let s = n.initial_states()[0];
        assert!(!n.is_accepting(s));
        assert!(n.edges(s).iter().all(|e| e.label.is_some()));
        for x in all_words(n.alphabet(), 5) {
            assert_eq!(n.accepts(&x), !x.is_empty());
        }
    }

    #[test]
    fn star_contains_epsilon() {
        let s = star(&lang(&["a b"], "a b"));
        assert_eq!(letters(&s, 4), ["eps", "a b", "a b a b"]);
    }
}
