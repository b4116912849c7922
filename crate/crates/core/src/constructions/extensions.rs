use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use super::{ConstructionError, CosetTable};
use crate::automata::{
    concat, image_hom, intersect, inverse_letter_hom, subtract_word, union, widen_alphabet,
    Alphabet, Letter, Nfa, NfaBuilder, Word,
};
use crate::demonstrations::Demonstration;
use crate::groups::{inverse_pairing, invert_word, ElementKey, SharedOracle};

fn substitute(map: &BTreeMap<Letter, Word>, w: &[Letter]) -> Result<Word, ConstructionError> {
    let mut out = Word::empty();
    for l in w {
        let img = map
            .get(l)
            .ok_or_else(|| ConstructionError::MissingImage(l.clone()))?;
        out = out.concat(img);
    }
    Ok(out)
}

/// Re-expresses `d` over a new set of letters. `target` lists the new letters
/// with their oracle words; `phi` sends each old letter to a non-empty word
/// over the new letters representing the same element.
pub fn change_generators(
    d: &Demonstration,
    target: &[(Letter, Word)],
    phi: &BTreeMap<Letter, Word>,
) -> Result<Demonstration, ConstructionError> {
    let alphabet = Alphabet::new(target.iter().map(|(l, _)| l.clone()));
    let target_eval: BTreeMap<Letter, Word> = target.iter().cloned().collect();
    let oracle = d.oracle();
    let mut trivial = true;
    for (_, w) in target {
        trivial &= oracle.is_identity(w)?;
    }
    if trivial {
        let out = Demonstration::new(oracle.clone(), target_eval, Nfa::empty_language(alphabet))?;
        return Ok(out);
    }
    let mut restricted = BTreeMap::new();
    for x in d.language().alphabet().iter() {
        let img = phi
            .get(x)
            .ok_or_else(|| ConstructionError::MissingImage(x.clone()))?;
        if img.is_empty() {
            return Err(ConstructionError::EmptyImage(x.clone()));
        }
        let before = d.evaluate(core::slice::from_ref(x))?;
        let after = oracle.evaluate(&substitute(&target_eval, img)?)?;
        if before != after {
            return Err(ConstructionError::EvaluationMismatch { letter: x.clone() });
        }
        restricted.insert(x.clone(), img.clone());
    }
    let image = image_hom(d.language(), &restricted, false)?;
    let lang = widen_alphabet(&image, &alphabet)?;
    let out = Demonstration::new(oracle.clone(), target_eval, lang)?;
    Ok(match d.subgroup() {
        Some(t) => out.with_subgroup(t.clone())?,
        None => out,
    })
}

/// For each language letter of `d`, the length-lex least non-empty word over
/// `target` of length at most `max_len` representing the same element.
pub fn representative_words(
    d: &Demonstration,
    target: &[(Letter, Word)],
    max_len: usize,
) -> Result<BTreeMap<Letter, Word>, ConstructionError> {
    let oracle = d.oracle();
    let mut wanted: BTreeMap<ElementKey, Vec<Letter>> = BTreeMap::new();
    for x in d.language().alphabet().iter() {
        wanted
            .entry(d.evaluate(core::slice::from_ref(x))?)
            .or_default()
            .push(x.clone());
    }
    let mut found: BTreeMap<Letter, Word> = BTreeMap::new();
    let mut seen: BTreeSet<ElementKey> = BTreeSet::new();
    // frontier entries: (word over target letters, the same word over oracle letters)
    let mut frontier: Vec<(Word, Word)> = alloc::vec![(Word::empty(), Word::empty())];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (w, img) in &frontier {
            for (l, lw) in target {
                let img2 = img.concat(lw);
                let k = oracle.evaluate(&img2)?;
                if !seen.insert(k.clone()) {
                    continue;
                }
                let mut w2 = w.clone();
                w2.push(l.clone());
                if let Some(xs) = wanted.get(&k) {
                    for x in xs {
                        found.insert(x.clone(), w2.clone());
                    }
                }
                next.push((w2, img2));
            }
        }
        frontier = next;
    }
    for x in d.language().alphabet().iter() {
        if !found.contains_key(x) {
            return Err(ConstructionError::NoRepresentative {
                letter: x.clone(),
                max_len,
            });
        }
    }
    Ok(found)
}

fn disjoint(a: &Alphabet, b: &Alphabet) -> Result<(), ConstructionError> {
    match a.iter().find(|l| b.contains(l)) {
        Some(l) => Err(ConstructionError::AlphabetCollision(l.clone())),
        None => Ok(()),
    }
}

fn merged_eval(a: &Demonstration, b: &BTreeMap<Letter, Word>) -> BTreeMap<Letter, Word> {
    let mut m = a.eval_map().clone();
    m.extend(b.iter().map(|(k, v)| (k.clone(), v.clone())));
    m
}

/// Demonstration for `E` from one for a normal subgroup `N` and one for the
/// quotient, over the union of their letters: `L₁ ∪ L₂ ∪ L₁L₂`.
///
/// The evaluation words of both inputs are read in `oracle_e`. Letters of
/// `d_n` must evaluate into `N`, and no word of `d_q` up to `check_len` may.
pub fn extension(
    d_n: &Demonstration,
    d_q: &Demonstration,
    oracle_e: SharedOracle,
    in_n: &dyn Fn(&ElementKey) -> bool,
    check_len: usize,
) -> Result<Demonstration, ConstructionError> {
    let (l1, l2) = (d_n.language(), d_q.language());
    disjoint(l1.alphabet(), l2.alphabet())?;
    let eval = merged_eval(d_n, d_q.eval_map());
    let lang = union(&union(l1, l2), &concat(l1, l2));
    let out = Demonstration::new(oracle_e.clone(), eval, lang)?;
    for x in l1.alphabet().iter() {
        if !in_n(&out.evaluate(core::slice::from_ref(x))?) {
            return Err(ConstructionError::OutsideNormalSubgroup(x.clone()));
        }
    }
    for w in l2.enumerate(check_len) {
        if in_n(&out.evaluate(&w)?) {
            return Err(ConstructionError::QuotientHitsNormal(w));
        }
    }
    Ok(out)
}

/// Demonstration for a group `H` containing `G` with finite index, from one
/// for `G` and letters for the non-trivial cosets of a right transversal:
/// `L_G ∪ T′ ∪ L_G T′`.
pub fn fi_overgroup(
    d_g: &Demonstration,
    oracle_h: SharedOracle,
    transversal: &[(Letter, Word)],
    in_g: &dyn Fn(&ElementKey) -> bool,
) -> Result<Demonstration, ConstructionError> {
    let t_alpha = Alphabet::new(transversal.iter().map(|(l, _)| l.clone()));
    disjoint(d_g.language().alphabet(), &t_alpha)?;
    let t_eval: BTreeMap<Letter, Word> = transversal.iter().cloned().collect();
    let singles: Vec<Word> = transversal
        .iter()
        .map(|(l, _)| Word::from(alloc::vec![l.clone()]))
        .collect();
    let t_lang = Nfa::from_words(t_alpha, &singles)?;
    let lg = d_g.language();
    let lang = union(&union(lg, &t_lang), &concat(lg, &t_lang));
    let out = Demonstration::new(oracle_h.clone(), merged_eval(d_g, &t_eval), lang)?;
    for (l, w) in transversal {
        if in_g(&oracle_h.evaluate(w)?) {
            return Err(ConstructionError::TransversalInSubgroup(l.clone()));
        }
    }
    if let Some(pairing) = inverse_pairing(oracle_h.as_ref())? {
        for (i, (l1, w1)) in transversal.iter().enumerate() {
            for (l2, w2) in &transversal[..i] {
                let q = w1.concat(&invert_word(w2, &pairing).expect("paired alphabet"));
                if in_g(&oracle_h.evaluate(&q)?) {
                    return Err(ConstructionError::TransversalRepeatsCoset(l2.clone(), l1.clone()));
                }
            }
        }
    }
    Ok(out)
}

/// Demonstration for a finite-index subgroup `H` of `G`, over the edges of
/// the coset graph. Accepted edge words are the non-empty `H`-to-`H` paths
/// whose label lies in `d_g`'s language; each edge `(C₁, x, C₂)` evaluates
/// as `t_{C₁} x t_{C₂}⁻¹`.
pub fn fi_subgroup(d_g: &Demonstration, table: &CosetTable) -> Result<Demonstration, ConstructionError> {
    let oracle = d_g.oracle();
    let x = oracle.alphabet();
    let lang_letters: BTreeSet<&Letter> = d_g.language().alphabet().iter().collect();
    if !d_g.has_identity_map() || lang_letters != x.iter().collect() {
        return Err(ConstructionError::NotOverGenerators);
    }
    let pairing = inverse_pairing(oracle.as_ref())?.ok_or(ConstructionError::NotInverseClosed)?;
    if table.alphabet() != x {
        return Err(ConstructionError::InconsistentTable(
            "table letters differ from the group letters".into(),
        ));
    }
    let edges = table.edges();
    let edge_alpha = Alphabet::new(edges.iter().map(|e| table.edge_letter(e)));
    let mut b = NfaBuilder::new(edge_alpha.clone());
    let states: Vec<usize> = (0..table.index()).map(|c| b.add_state(table.name(c))).collect();
    b.set_initial(states[0]);
    b.set_accepting(states[0], true);
    let mut h = BTreeMap::new();
    let mut eval = BTreeMap::new();
    for e in &edges {
        let l = table.edge_letter(e);
        b.add_letter_edge(states[e.source], &l, states[e.target])?;
        h.insert(l.clone(), e.generator.clone());
        let back = invert_word(table.transversal(e.target), &pairing).expect("paired alphabet");
        let w = table
            .transversal(e.source)
            .concat(core::slice::from_ref(&e.generator))
            .concat(&back);
        eval.insert(l, w);
    }
    let paths = subtract_word(&b.build()?, &[]);
    let pullback = inverse_letter_hom(d_g.language(), &h, &edge_alpha)?;
    let lang = widen_alphabet(&intersect(&paths, &pullback).trim(), &edge_alpha)?;
    Ok(Demonstration::new(oracle.clone(), eval, lang)?.with_subgroup(table.clone())?)
}
