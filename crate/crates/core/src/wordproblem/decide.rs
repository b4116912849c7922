use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{Enumerator, FreeWord, WpError};
use crate::automata::Word;

/// Resumable position of a word-problem search.
///
/// At `index` i the search first compares `g(i)` with the word (`step` 0) and
/// then the pairs `(j, k)` with `max(j, k) = i`: steps `1..=i` are
/// `(0, i), …, (i-1, i)` and steps `i+1..=2i+1` are `(i, 0), …, (i, i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frontier {
    pub word: Word,
    pub index: usize,
    pub step: usize,
    pub spent: u64,
}

impl Frontier {
    pub fn start(word: Word) -> Self {
        Frontier {
            word,
            index: 0,
            step: 0,
            spent: 0,
        }
    }

    pub fn to_text(&self) -> String {
        format!(
            "frontier\n  word {}\n  index {}\n  step {}\n  spent {}\nend\n",
            self.word, self.index, self.step, self.spent
        )
    }

    pub fn parse(text: &str) -> Result<Self, WpError> {
        let bad = |m: &str| WpError::BadFrontier(m.to_string());
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        if lines.next() != Some("frontier") {
            return Err(bad("expected `frontier`"));
        }
        let (mut word, mut index, mut step, mut spent) = (None, None, None, None);
        for line in lines.by_ref() {
            if line == "end" {
                let fr = Frontier {
                    word: word.ok_or_else(|| bad("missing word"))?,
                    index: index.ok_or_else(|| bad("missing index"))?,
                    step: step.ok_or_else(|| bad("missing step"))?,
                    spent: spent.ok_or_else(|| bad("missing spent"))?,
                };
                if fr.step > 2 * fr.index + 1 {
                    return Err(bad("step out of range"));
                }
                return Ok(fr);
            }
            let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let rest = rest.trim();
            let num = |s: &str| s.parse::<u64>().map_err(|_| bad(&format!("bad number {s:?}")));
            match key {
                "word" => word = Some(Word::parse(rest)),
                "index" => index = Some(num(rest)? as usize),
                "step" => step = Some(num(rest)? as usize),
                "spent" => spent = Some(num(rest)?),
                _ => return Err(bad(&format!("unknown field {key:?}"))),
            }
        }
        Err(bad("missing `end`"))
    }

    fn pair(&self) -> (usize, usize) {
        let (i, t) = (self.index, self.step - 1);
        if t < i {
            (t, i)
        } else {
            (i, t - i)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WpVerdict {
    /// `g(index)` reduces to the word.
    InWp { index: usize },
    /// `f(j) · w⁻¹` reduces to `g(k)`.
    NotInWp { j: usize, k: usize },
    BudgetExceeded(Frontier),
}

impl WpVerdict {
    /// Rechecks a certificate against the enumerators.
    pub fn replay(&self, w: &Word, f: &mut Enumerator, g: &mut Enumerator) -> bool {
        let red = FreeWord::reduce(w);
        match *self {
            WpVerdict::InWp { index } => g.get(index).is_some_and(|x| FreeWord::reduce(x) == red),
            WpVerdict::NotInWp { j, k } => {
                let Some(fj) = f.get(j).cloned() else { return false };
                let lhs = FreeWord::reduce(&fj).times(&red.inverse());
                g.get(k).is_some_and(|x| FreeWord::reduce(x) == lhs)
            }
            WpVerdict::BudgetExceeded(_) => true,
        }
    }
}

/// Reduced values of enumerator entries, computed on first use.
struct Reduced {
    values: Vec<Option<FreeWord>>,
}

impl Reduced {
    fn new() -> Self {
        Reduced { values: Vec::new() }
    }

    fn get(&mut self, e: &mut Enumerator, i: usize, right: &FreeWord) -> Option<&FreeWord> {
        if self.values.len() <= i {
            self.values.resize(i + 1, None);
        }
        if self.values[i].is_none() {
            let w = e.get(i)?;
            self.values[i] = Some(FreeWord::reduce(&w.concat(right.word())));
        }
        self.values[i].as_ref()
    }
}

struct Hits {
    in_wp: Option<usize>,
    not_in_wp: Option<(usize, usize)>,
}

/// Runs the search from `fr` for at most `budget` comparisons. With
/// `stop_early` the first certificate ends the run.
fn scan(
    mut fr: Frontier,
    f: &mut Enumerator,
    g: &mut Enumerator,
    budget: u64,
    stop_early: bool,
) -> (Hits, Frontier) {
    let w = FreeWord::reduce(&fr.word);
    let w_inv = w.inverse();
    let none = FreeWord::default();
    let mut fs = Reduced::new();
    let mut gs = Reduced::new();
    let mut hits = Hits {
        in_wp: None,
        not_in_wp: None,
    };
    let mut used = 0u64;
    loop {
        if stop_early && (hits.in_wp.is_some() || hits.not_in_wp.is_some()) {
            return (hits, fr);
        }
        let i = fr.index;
        if fr.step == 0 {
            if f.get(i).is_none() && g.get(i).is_none() {
                return (hits, fr);
            }
            if let Some(gi) = gs.get(g, i, &none).cloned() {
                if used == budget {
                    return (hits, fr);
                }
                used += 1;
                fr.spent += 1;
                if gi == w && hits.in_wp.is_none() {
                    hits.in_wp = Some(i);
                }
            }
            fr.step = 1;
        } else if fr.step <= 2 * i + 1 {
            let (j, k) = fr.pair();
            let lhs = fs.get(f, j, &w_inv).cloned();
            let rhs = gs.get(g, k, &none).cloned();
            if let (Some(lhs), Some(rhs)) = (lhs, rhs) {
                if used == budget {
                    return (hits, fr);
                }
                used += 1;
                fr.spent += 1;
                if lhs == rhs && hits.not_in_wp.is_none() {
                    hits.not_in_wp = Some((j, k));
                }
            }
            fr.step += 1;
        } else {
            fr.index += 1;
            fr.step = 0;
        }
    }
}

/// Dovetails `g(i) = w` against `f(j) · w⁻¹ = g(k)` over `i = 0, 1, …` with
/// `j, k ≤ i`, all equalities taken after free reduction. `f` should
/// enumerate a language avoiding the word problem and hitting every other
/// element; `g` should enumerate words of the word problem. Certificates are
/// the least found in sequential order.
pub fn decide_word(w: &Word, f: &mut Enumerator, g: &mut Enumerator, budget: u64) -> WpVerdict {
    resume(Frontier::start(w.clone()), f, g, budget)
}

/// Continues a search that ran out of budget.
pub fn resume(fr: Frontier, f: &mut Enumerator, g: &mut Enumerator, budget: u64) -> WpVerdict {
    let (hits, fr) = scan(fr, f, g, budget, true);
    match (hits.in_wp, hits.not_in_wp) {
        (Some(index), _) => WpVerdict::InWp { index },
        (None, Some((j, k))) => WpVerdict::NotInWp { j, k },
        (None, None) => WpVerdict::BudgetExceeded(fr),
    }
}

/// Like [`decide_word`], but spends the whole budget and fails if both kinds
/// of certificate turn up, which means `f` or `g` is not what it claims.
pub fn cross_check(
    w: &Word,
    f: &mut Enumerator,
    g: &mut Enumerator,
    budget: u64,
) -> Result<WpVerdict, WpError> {
    let (hits, fr) = scan(Frontier::start(w.clone()), f, g, budget, false);
    match (hits.in_wp, hits.not_in_wp) {
        (Some(in_wp), Some((j, k))) => Err(WpError::Contradiction { in_wp, j, k }),
        (Some(index), None) => Ok(WpVerdict::InWp { index }),
        (None, Some((j, k))) => Ok(WpVerdict::NotInWp { j, k }),
        (None, None) => Ok(WpVerdict::BudgetExceeded(fr)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demonstrations::{zk_language, z_language};
    use crate::wordproblem::{language_enumerator, normal_closure_enumerator, Presentation};

    fn setup() -> (Enumerator, Enumerator) {
        let p = Presentation::new(&["a", "b"], &[Word::parse("a b a^-1 b^-1")]).unwrap();
        (language_enumerator(&zk_language(&["a", "b"])), normal_closure_enumerator(&p))
    }

    #[test]
    fn frontier_round_trip() {
        let fr = Frontier {
            word: Word::parse("a b"),
            index: 7,
            step: 3,
            spent: 99,
        };
        assert_eq!(Frontier::parse(&fr.to_text()).unwrap(), fr);
        let e = Frontier::start(Word::empty());
        assert_eq!(Frontier::parse(&e.to_text()).unwrap(), e);
        assert!(Frontier::parse("frontier\n word a\nend").is_err());
    }

    #[test]
    fn empty_word_is_immediate() {
        let (mut f, mut g) = setup();
        assert_eq!(decide_word(&Word::empty(), &mut f, &mut g, 1), WpVerdict::InWp { index: 0 });
    }

    #[test]
    fn resumed_search_matches_uninterrupted() {
        let w = Word::parse("b a^-1 b^-1 a");
        let (mut f, mut g) = setup();
        let direct = decide_word(&w, &mut f, &mut g, 1_000_000);
        assert!(matches!(direct, WpVerdict::InWp { .. }));
        let (mut f, mut g) = setup();
        let mut v = decide_word(&w, &mut f, &mut g, 3);
        let mut rounds = 0;
        while let WpVerdict::BudgetExceeded(fr) = v {
            let fr = Frontier::parse(&fr.to_text()).unwrap();
            v = resume(fr, &mut f, &mut g, 3);
            rounds += 1;
        }
        assert!(rounds > 0);
        assert_eq!(v, direct);
    }

    #[test]
    fn wrong_enumerator_raises_contradiction() {
        // f claims to avoid the word problem but its language contains a
        // relator conjugate, so some word gets both certificates.
        let p = Presentation::new(&["a"], &[Word::parse("a a")]).unwrap();
        let mut f = language_enumerator(&z_language("a"));
        let mut g = normal_closure_enumerator(&p);
        let r = cross_check(&Word::parse("a a"), &mut f, &mut g, 10_000);
        assert!(matches!(r, Err(WpError::Contradiction { .. })), "{r:?}");
    }
}
