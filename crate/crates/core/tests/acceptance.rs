mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::{all_strings, brute_ball, brute_pruned_types, heis_key, heis_mul, l, to_word, w, RawNfa};
use epic_core::automata::{concat, image_hom, intersect, inverse_letter_hom, union, Alphabet, Nfa, NfaBuilder, Word};
use epic_core::constructions::{
    admissible_automaton, autostackable_projection, change_generators, cross_section_to_demo, extension,
    fi_overgroup, fi_subgroup, graph_product, representative_words, CosetTable, SyncTripleAutomaton, VertexGraph,
};
use epic_core::demonstrations::{
    builtin_demo, evaluation_image, verify_coverage, verify_no_identity, z_demo, z_language, zk_language,
    BuiltinKind, CoverageReport, Demonstration,
};
use epic_core::groups::{
    ElementKey, IntegerMatrixOracle, Permutation, PermutationOracle, SharedOracle,
};
use epic_core::wordproblem::{decide_word, language_enumerator, normal_closure_enumerator, Presentation, WpVerdict};
use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Debug>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| format!("{e:?}"))
}

/// Zero identity violations up to `len` and zero misses in the ball.
fn sound_and_covering(d: &Demonstration, len: usize, radius: usize, search: usize) -> Result<CoverageReport, String> {
    let bad = ok(verify_no_identity(d, len))?;
    ensure!(bad.is_empty(), "identity words: {bad:?}");
    let r = ok(verify_coverage(d, radius, search))?;
    ensure!(r.identity_violations.is_empty(), "identity words in coverage search");
    ensure!(r.missing.is_empty(), "{} missing keys, first {:?}", r.missing.len(), r.missing.iter().next());
    Ok(r)
}

fn s3_demo() -> Demonstration {
    builtin_demo(BuiltinKind::Finite(PermutationOracle::s3())).unwrap()
}

fn is_even(k: &ElementKey) -> bool {
    let imgs: Vec<usize> = k.as_str()[2..].split(',').map(|x| x.parse().unwrap()).collect();
    let inversions = (0..imgs.len())
        .flat_map(|i| (i + 1..imgs.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| imgs[i] > imgs[j])
        .count();
    inversions % 2 == 0
}

fn cyclic2(name: &str) -> Demonstration {
    let o: SharedOracle = Arc::new(
        PermutationOracle::new(2, vec![(l(name), Permutation::from_cycles(2, &[vec![1, 2]]).unwrap())]).unwrap(),
    );
    Demonstration::with_identity_map(o, Nfa::from_words(Alphabet::new([l(name)]), &[w(name)]).unwrap()).unwrap()
}

fn integer_keys(ns: impl IntoIterator<Item = i64>) -> BTreeSet<String> {
    ns.into_iter().map(|n| format!("Z:{n}")).collect()
}

fn covered_strings(r: &CoverageReport) -> BTreeSet<String> {
    r.covered.keys().map(|k| k.as_str().to_string()).collect()
}

fn integers() -> Outcome {
    let d = z_demo("a");
    let r = sound_and_covering(&d, 12, 12, 12)?;
    ensure!(
        covered_strings(&r) == integer_keys((-12..=12).filter(|&n| n != 0)),
        "covered keys differ from the nonzero integers in [-12, 12]"
    );
    Ok(format!("{} elements covered", r.covered.len()))
}

fn symmetric_group() -> Outcome {
    let d = s3_demo();
    let r = sound_and_covering(&d, 3, 3, 1)?;
    let mut all = BTreeSet::new();
    for a in 1..=3 {
        for b in 1..=3 {
            let c = 6 - a - b;
            if a != b && (a, b) != (1, 2) && c != a && c != b {
                all.insert(format!("P:{a},{b},{c}"));
            }
        }
    }
    ensure!(all.len() == 5 && covered_strings(&r) == all, "covered {:?}", covered_strings(&r));
    ensure!(d.language().enumerate(4).iter().all(|x| x.len() == 1), "language has words of length > 1");
    Ok("5 of 5 non-identity elements".into())
}

fn automata_operations() -> Outcome {
    const AB: [&str; 2] = ["a", "b"];
    const XYZ: [&str; 3] = ["x", "y", "z"];
    const PQR: [&str; 3] = ["p", "q", "r"];
    let mut rng = StdRng::seed_from_u64(2024);
    let mut checked = 0usize;
    for pair in 0..200 {
        let ra = RawNfa::random(&mut rng, &AB, 5);
        let rb = RawNfa::random(&mut rng, &AB, 5);
        let (a, b) = (ra.to_nfa(), rb.to_nfa());
        let (u, c, i) = (union(&a, &b), concat(&a, &b), intersect(&a, &b));
        for s in all_strings(&AB, 5) {
            let x = to_word(&s);
            let split = (0..=s.len()).any(|k| ra.accepts(&s[..k]) && rb.accepts(&s[k..]));
            ensure!(u.accepts(&x) == (ra.accepts(&s) || rb.accepts(&s)), "union, pair {pair}, {s:?}");
            ensure!(c.accepts(&x) == split, "concat, pair {pair}, {s:?}");
            ensure!(i.accepts(&x) == (ra.accepts(&s) && rb.accepts(&s)), "intersect, pair {pair}, {s:?}");
            checked += 3;
        }

        let mut phi = BTreeMap::new();
        let mut raw_phi: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for x in AB {
            let n = rng.gen_range(1..=2);
            let img: Vec<String> = (0..n).map(|_| XYZ[rng.gen_range(0..3)].to_string()).collect();
            phi.insert(l(x), to_word(&img));
            raw_phi.insert(x.to_string(), img);
        }
        let image = ok(image_hom(&b, &phi, false))?;
        let mut expected = BTreeSet::new();
        for s in all_strings(&AB, 5) {
            if rb.accepts(&s) {
                let img: Vec<String> = s.iter().flat_map(|x| raw_phi[x].clone()).collect();
                expected.insert(img);
            }
        }
        for v in all_strings(&XYZ, 5) {
            ensure!(image.accepts(&to_word(&v)) == expected.contains(&v), "image_hom, pair {pair}, {v:?}");
            checked += 1;
        }

        let h: BTreeMap<_, _> = PQR.iter().map(|d| (l(d), l(AB[rng.gen_range(0..2)]))).collect();
        let back = ok(inverse_letter_hom(&a, &h, &Alphabet::new(PQR.iter().map(|d| l(d)))))?;
        for v in all_strings(&PQR, 5) {
            let mapped: Vec<String> = v.iter().map(|d| h[&l(d)].as_str().to_string()).collect();
            ensure!(back.accepts(&to_word(&v)) == ra.accepts(&mapped), "inverse_letter_hom, pair {pair}, {v:?}");
            checked += 1;
        }
    }
    Ok(format!("{checked} membership checks, 0 mismatches"))
}

fn heisenberg_extension() -> Outcome {
    let heis: SharedOracle = Arc::new(IntegerMatrixOracle::heisenberg());
    let center_eval = BTreeMap::from([(l("c"), w("z")), (l("c^-1"), w("z^-1"))]);
    let d_n = ok(Demonstration::new(heis.clone(), center_eval, z_language("c")))?;
    let d_q = ok(Demonstration::with_identity_map(heis.clone(), zk_language(&["x", "y"])))?;
    let in_center = |k: &ElementKey| {
        let m = IntegerMatrixOracle::entries_of(k).expect("matrix key");
        m[0][1] == BigInt::from(0) && m[1][2] == BigInt::from(0)
    };
    let d = ok(extension(&d_n, &d_q, heis, &in_center, 8))?;
    let r = sound_and_covering(&d, 8, 3, 10)?;
    let gens: Vec<(i64, i64, i64)> =
        vec![(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)];
    let mut ball: BTreeSet<String> = brute_ball((0, 0, 0), &gens, |p, q| heis_mul(*p, *q), 3)
        .into_iter()
        .map(heis_key)
        .collect();
    ball.remove(&heis_key((0, 0, 0)));
    ensure!(covered_strings(&r) == ball, "covered keys differ from the radius-3 ball");
    Ok(format!("{} elements of the radius-3 ball covered", ball.len()))
}

fn dihedral_overgroup() -> Outcome {
    let dinf: SharedOracle = Arc::new(IntegerMatrixOracle::infinite_dihedral());
    let d_g = ok(Demonstration::with_identity_map(dinf.clone(), z_language("a")))?;
    let in_g = |k: &ElementKey| IntegerMatrixOracle::entries_of(k).expect("matrix key")[0][0] == BigInt::from(1);
    let d = ok(fi_overgroup(&d_g, dinf, &[(l("t"), w("s"))], &in_g))?;
    let r = sound_and_covering(&d, 10, 4, 10)?;
    let affine = |p: &(i64, i64), q: &(i64, i64)| (p.0 * q.0, p.0 * q.1 + p.1);
    let mut ball: BTreeSet<String> = brute_ball((1, 0), &[(1, 1), (1, -1), (-1, 0)], affine, 4)
        .into_iter()
        .map(|(e, k)| format!("M:{e},{k};0,1"))
        .collect();
    ball.remove("M:1,0;0,1");
    ensure!(covered_strings(&r) == ball, "covered keys differ from the radius-4 ball of {} elements", ball.len());
    Ok(format!("{} elements covered", r.covered.len()))
}

fn edge_identity(dg: &Demonstration, table: &CosetTable, d: &Demonstration, len: usize) -> Result<usize, String> {
    let h: BTreeMap<_, _> = table.edges().iter().map(|e| (table.edge_letter(e), e.generator.clone())).collect();
    let words = d.language().enumerate(len);
    for x in &words {
        let label: Word = x.iter().map(|e| h[e].clone()).collect();
        ensure!(
            ok(d.evaluate(x))? == ok(dg.oracle().evaluate(&label))?,
            "edge word {x} evaluates differently from its label {label}"
        );
    }
    Ok(words.len())
}

fn finite_index_subgroup() -> Outcome {
    let dz = z_demo("a");
    let entry = |s: &str, x: &str, t: &str| (s.to_string(), l(x), t.to_string());
    let even = ok(CosetTable::from_entries(
        dz.oracle().alphabet().clone(),
        vec![("H".into(), w("")), ("C1".into(), w("a"))],
        &[entry("H", "a", "C1"), entry("C1", "a", "H"), entry("H", "a^-1", "C1"), entry("C1", "a^-1", "H")],
    ))?;
    let d_even = ok(fi_subgroup(&dz, &even))?;
    let r = sound_and_covering(&d_even, 6, 6, 6)?;
    ensure!(covered_strings(&r) == integer_keys([-6, -4, -2, 2, 4, 6]), "(a) covered {:?}", covered_strings(&r));

    let ds3 = s3_demo();
    let a3 = ok(CosetTable::from_subgroup_membership(ds3.oracle().as_ref(), &is_even, 6))?;
    ensure!(a3.index() == 2, "(b) index {}", a3.index());
    let d_a3 = ok(fi_subgroup(&ds3, &a3))?;
    let r = sound_and_covering(&d_a3, 6, 3, 6)?;
    ensure!(r.covered.len() == 2 && r.covered.keys().all(is_even), "(b) covered {:?}", r.covered.keys());

    let n = edge_identity(&dz, &even, &d_even, 6)? + edge_identity(&ds3, &a3, &d_a3, 6)?;
    Ok(format!("(a) exact, (b) 2 of 2, (c) {n} edge words"))
}

fn admissible_languages() -> Outcome {
    let mut graphs = 0;
    for n in 1..=4usize {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        for mask in 0..(1u32 << pairs.len()) {
            let edges: Vec<(usize, usize)> =
                pairs.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, &p)| p).collect();
            let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
            let refs: Vec<&str> = names.iter().map(String::as_str).collect();
            let g = ok(VertexGraph::from_adjacency(&refs, |a, b| edges.contains(&(a.min(b), a.max(b)))))?;
            let got: BTreeSet<Vec<usize>> = ok(admissible_automaton(&g))?
                .enumerate(8)
                .iter()
                .map(|x| x.iter().map(|v| g.index(v.as_str()).unwrap()).collect())
                .collect();
            let mut brute = brute_pruned_types(n, &edges, 8);
            brute.remove(&Vec::new());
            ensure!(got == brute, "{n} vertices, edges {edges:?}: {} vs {}", got.len(), brute.len());
            graphs += 1;
        }
    }
    Ok(format!("{graphs} labelled graphs agree"))
}

fn graph_products() -> Outcome {
    let joined = ok(VertexGraph::new(&["u", "v"], &[("u", "v")]))?;
    let apart = ok(VertexGraph::new(&["u", "v"], &[]))?;

    let klein = ok(graph_product(&joined, &[cyclic2("a"), cyclic2("b")]))?;
    let words = klein.language().enumerate(10);
    ensure!(words == vec![w("a"), w("b"), w("a b")], "C2xC2 language {words:?}");
    let r = sound_and_covering(&klein, 10, 2, 3)?;
    ensure!(r.covered.len() == 3, "C2xC2 covered {}", r.covered.len());

    let dihedral = ok(graph_product(&apart, &[cyclic2("a"), cyclic2("b")]))?;
    let r = sound_and_covering(&dihedral, 10, 5, 10)?;
    ensure!(r.covered.len() == 10, "C2*C2 covered {}", r.covered.len());

    let plane = ok(graph_product(&joined, &[z_demo("a"), z_demo("b")]))?;
    let r = sound_and_covering(&plane, 8, 4, 8)?;
    ensure!(r.covered.len() == 40, "ZxZ covered {}", r.covered.len());
    Ok("C2xC2 3/3, C2*C2 10/10, ZxZ 40/40".into())
}

fn stacking_fixture() -> Result<SyncTripleAutomaton, String> {
    let letters = ["(#pad|x|x)", "(a|x|x)", "(a|#pad|#pad)", "(a^-1|x|x)", "(a^-1|#pad|#pad)"];
    let mut b = NfaBuilder::new(Alphabet::new(letters.iter().map(|s| l(s))));
    let start = b.add_state("start");
    let fin = b.add_state("final");
    let p = b.add_state("p");
    let n = b.add_state("n");
    b.set_initial(start);
    for s in [fin, p, n] {
        b.set_accepting(s, true);
    }
    for (from, x, to) in [(start, 0, fin), (start, 1, p), (p, 2, p), (start, 3, n), (n, 4, n)] {
        ok(b.add_letter_edge(from, &l(letters[x]), to))?;
    }
    ok(SyncTripleAutomaton::new(ok(b.build())?))
}

fn autostackable() -> Outcome {
    let n = ok(autostackable_projection(&stacking_fixture()?))?;
    let mut expected = vec![Word::empty()];
    for k in 1..=10 {
        expected.push(w(&vec!["a"; k].join(" ")));
        expected.push(w(&vec!["a^-1"; k].join(" ")));
    }
    ensure!(n.enumerate(10) == expected, "projection differs at length <= 10");
    let reference = z_demo("a");
    let d = ok(cross_section_to_demo(&n, reference.oracle().clone(), &[]))?;
    ensure!(
        d.language().enumerate(10) == reference.language().enumerate(10),
        "cross-section language differs from the integer demonstration"
    );
    Ok(format!("{} normal forms, demonstration reproduced", expected.len()))
}

fn word_problem() -> Outcome {
    let p = ok(Presentation::new(&["a", "b"], &[w("a b a^-1 b^-1")]))?;
    let mut report = Vec::new();
    for (s, want_in) in [("a b a^-1 b^-1", true), ("a b", false)] {
        let x = w(s);
        let mut f = language_enumerator(&zk_language(&["a", "b"]));
        let mut g = normal_closure_enumerator(&p);
        let v = decide_word(&x, &mut f, &mut g, 1_000_000);
        let right = match v {
            WpVerdict::InWp { .. } => want_in,
            WpVerdict::NotInWp { .. } => !want_in,
            WpVerdict::BudgetExceeded(_) => false,
        };
        ensure!(right, "{s}: {v:?}");
        let mut f = language_enumerator(&zk_language(&["a", "b"]));
        let mut g = normal_closure_enumerator(&p);
        ensure!(v.replay(&x, &mut f, &mut g), "{s}: certificate {v:?} does not replay");
        report.push(format!("{s}: {v:?}"));
    }
    Ok(report.join("; "))
}

fn image_contained(d: &Demonstration, out: &Demonstration, phi: &BTreeMap<epic_core::automata::Letter, Word>, n: usize) -> Result<(), String> {
    let longest = phi.values().map(|x| x.len()).max().unwrap_or(1);
    let before = ok(evaluation_image(d, n))?;
    let after = ok(evaluation_image(out, n * longest))?;
    ensure!(before.is_subset(&after), "evaluation image not contained at length {n}");
    Ok(())
}

fn generating_set_change() -> Outcome {
    let dz = z_demo("a");
    let relabel = [(l("b"), w("a")), (l("b^-1"), w("a^-1"))];
    let phi = BTreeMap::from([(l("a"), w("b")), (l("a^-1"), w("b^-1"))]);
    let out = ok(change_generators(&dz, &relabel, &phi))?;
    sound_and_covering(&out, 12, 12, 12)?;
    image_contained(&dz, &out, &phi, 12)?;

    let square = [(l("a"), w("a")), (l("a^-1"), w("a^-1")), (l("c"), w("a a"))];
    let phi = ok(representative_words(&dz, &square, 2))?;
    let out = ok(change_generators(&dz, &square, &phi))?;
    sound_and_covering(&out, 12, 6, 12)?;
    image_contained(&dz, &out, &phi, 12)?;

    let ds3 = s3_demo();
    let two = [(l("t"), w("(1,2)")), (l("r"), w("(1,2,3)"))];
    let phi = ok(representative_words(&ds3, &two, 6))?;
    let longest = phi.values().map(|x| x.len()).max().unwrap();
    let out = ok(change_generators(&ds3, &two, &phi))?;
    let r = sound_and_covering(&out, 3 * longest, 3, longest)?;
    ensure!(r.covered.len() == 5, "S3 covered {}", r.covered.len());
    image_contained(&ds3, &out, &phi, 3)?;
    Ok("Z relabelled, Z with a square letter, S3 over (t, r)".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn() -> Outcome); 11] = [
        ("integer demonstration", 1, integers),
        ("S3 length-one demonstration", 1, symmetric_group),
        ("automata operations vs brute force", 60, automata_operations),
        ("Heisenberg extension", 60, heisenberg_extension),
        ("infinite dihedral overgroup", 30, dihedral_overgroup),
        ("finite-index subgroups", 30, finite_index_subgroup),
        ("admissible automata", 300, admissible_languages),
        ("graph products", 120, graph_products),
        ("autostackable projection", 5, autostackable),
        ("word problem", 300, word_problem),
        ("generating-set change", 10, generating_set_change),
    ];
    let mut failures = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let result = match result {
            Ok(_) if elapsed > Duration::from_secs(*limit) => Err(format!("took {elapsed:.2?}, limit {limit} s")),
            r => r,
        };
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({elapsed:.2?}): {detail}", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name} ({elapsed:.2?}): {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
