use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use epic_core::automata::{Letter, Nfa, Word};
use epic_core::constructions::{
    admissible_automaton, autostackable_projection, change_generators, cross_section_to_demo, extension,
    fi_overgroup, fi_subgroup, graph_product, representative_words, SyncTripleAutomaton, VertexGraph,
};
use epic_core::demonstrations::{verify_coverage, verify_no_identity, Demonstration};
use epic_core::groups::{ball, ElementKey, SharedOracle};
use epic_core::wordproblem::{
    demonstration_enumerator, free_reduce, normal_closure_enumerator, resume, Frontier, WpVerdict,
};

use crate::workspace::{render_automaton, DemoDef, GroupDef, Workspace};

pub const DEFAULT_MAX_STATES: usize = 1_000_000;

#[derive(Parser, Debug)]
#[command(name = "epic", version, about = "Build and check demonstrations of groups by regular languages")]
struct Cli {
    /// Block file to load; repeatable.
    #[arg(short = 'w', long = "workspace", global = true)]
    workspace: Vec<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a demonstration for identity words and ball coverage.
    Verify(VerifyArgs),
    /// List accepted words in length-lex order.
    Enumerate(EnumerateArgs),
    /// List the ball of a group with a shortest witness per element.
    Ball(BallArgs),
    /// Build a new demonstration or automaton.
    #[command(subcommand)]
    Construct(Construct),
    /// Word-problem procedures.
    #[command(subcommand)]
    Wp(Wp),
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    demo: String,
    #[arg(long)]
    max_len: usize,
    #[arg(long)]
    ball: usize,
    /// Defaults to --max-len.
    #[arg(long)]
    search_len: Option<usize>,
    /// For finite groups, misses fail once --search-len reaches this bound.
    #[arg(long)]
    complete_bound: Option<usize>,
    #[arg(long)]
    porcelain: bool,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false, id = "source")]
struct Source {
    #[arg(long)]
    automaton: Option<String>,
    #[arg(long)]
    demo: Option<String>,
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long)]
    max_len: usize,
    #[arg(long)]
    porcelain: bool,
}

#[derive(Args, Debug)]
struct BallArgs {
    #[arg(long)]
    group: String,
    #[arg(long)]
    radius: usize,
    #[arg(long)]
    porcelain: bool,
}

#[derive(Args, Debug)]
struct Output {
    /// Name of the constructed object.
    #[arg(long, default_value = "result")]
    name: String,
    /// Write the block file here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Construct {
    /// Re-express a demonstration over new generator letters
    ChangeGens {
        #[arg(long)]
        demo: String,
        /// New letter and its word over the group letters, `L=WORD`.
        #[arg(long = "gen", required = true)]
        gens: Vec<String>,
        /// Image of an old letter, `L=WORD`.
        #[arg(long = "map")]
        maps: Vec<String>,
        /// Search for images up to this length when --map is absent.
        #[arg(long, default_value_t = 6)]
        search_len: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Demonstration of an extension from a normal subgroup and its quotient
    Extension {
        #[arg(long)]
        normal: String,
        #[arg(long)]
        quotient: String,
        #[arg(long)]
        group: String,
        /// `closure[:MAX]` or `entries:R,C[=V];...`.
        #[arg(long, default_value = "closure")]
        in_normal: String,
        #[arg(long, default_value_t = 8)]
        check_len: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Demonstration of a finite-index overgroup from a transversal
    FiOvergroup {
        #[arg(long)]
        demo: String,
        #[arg(long)]
        group: String,
        /// Transversal letter and its word, `s=WORD`.
        #[arg(long = "transversal", required = true)]
        transversal: Vec<String>,
        #[arg(long, default_value = "closure")]
        in_subgroup: String,
        #[command(flatten)]
        output: Output,
    },
    /// Demonstration of a finite-index subgroup from a coset table
    FiSubgroup {
        #[arg(long)]
        demo: String,
        #[arg(long)]
        table: String,
        #[command(flatten)]
        output: Output,
    },
    /// Glue vertex demonstrations over a graph
    GraphProduct {
        /// `VERTEX=DEMO`, in vertex order.
        #[arg(long = "vertex", required = true)]
        vertices: Vec<String>,
        /// `U V` or `U,V`.
        #[arg(long = "edge")]
        edges: Vec<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Project a padded triple automaton to its first coordinate
    AutostackableProject {
        #[arg(long)]
        automaton: String,
        #[command(flatten)]
        output: Output,
    },
    /// Turn a cross-section automaton into a demonstration
    CrossSection {
        #[arg(long)]
        automaton: String,
        #[arg(long)]
        group: String,
        #[arg(long, default_value = "eps")]
        identity_rep: String,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Subcommand, Debug)]
enum Wp {
    Decide {
        #[arg(long)]
        presentation: String,
        #[arg(long)]
        demo: String,
        #[arg(long)]
        word: String,
        #[arg(long)]
        budget: u64,
        #[arg(long)]
        resume: Option<PathBuf>,
        /// Where to write the frontier if the budget runs out.
        #[arg(long)]
        save: Option<PathBuf>,
    },
}

/// Exit code and captured output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: 0, stdout, stderr: String::new() }
    }

    fn usage(message: impl std::fmt::Display) -> Self {
        Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        }
    }
}

type CmdResult = Result<Outcome, String>;

/// Runs one command line (without the program name) with the state cap
/// taken from `EPIC_MAX_STATES`.
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let limit = match std::env::var("EPIC_MAX_STATES") {
        Ok(v) => match v.trim().parse() {
            Ok(n) => n,
            Err(_) => return Outcome::usage(format!("EPIC_MAX_STATES must be a number, found {v:?}")),
        },
        Err(_) => DEFAULT_MAX_STATES,
    };
    run_with_limit(args, limit)
}

pub fn run_with_limit<I, S>(args: I, max_states: usize) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv = std::iter::once(std::ffi::OsString::from("epic")).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Outcome::ok(text),
                _ => Outcome { code: 2, stdout: String::new(), stderr: text },
            };
        }
    };
    let mut ws = match Workspace::load(&cli.workspace) {
        Ok(ws) => ws,
        Err(e) => return Outcome::usage(e),
    };
    let result = match cli.command {
        Command::Verify(a) => verify(&mut ws, a),
        Command::Enumerate(a) => enumerate(&mut ws, a),
        Command::Ball(a) => ball_cmd(&mut ws, a),
        Command::Construct(c) => construct(&mut ws, c, max_states),
        Command::Wp(Wp::Decide { presentation, demo, word, budget, resume, save }) => {
            wp_decide(&mut ws, &presentation, &demo, &word, budget, resume, save)
        }
    };
    result.unwrap_or_else(Outcome::usage)
}

fn verify(ws: &mut Workspace, a: VerifyArgs) -> CmdResult {
    let d = ws.demo(&a.demo)?.demo.clone();
    let search_len = a.search_len.unwrap_or(a.max_len);
    let violations = verify_no_identity(&d, a.max_len).map_err(|e| e.to_string())?;
    let mut report = verify_coverage(&d, a.ball, search_len).map_err(|e| e.to_string())?;
    let finite = d.oracle().is_finite();
    let mut all_violations: BTreeSet<Word> = violations.iter().cloned().collect();
    all_violations.extend(report.identity_violations.iter().cloned());
    let mut ordered: Vec<Word> = all_violations.into_iter().collect();
    let alpha = d.language().alphabet().clone();
    ordered.sort_by(|x, y| alpha.cmp_length_lex(x.letters(), y.letters()));
    report.identity_violations = ordered.clone();
    let failed = report.fails(finite, a.complete_bound);
    let verdict = if failed { "FAIL" } else { "PASS" };
    let mut out = String::new();
    if a.porcelain {
        for w in &ordered {
            let _ = writeln!(out, "violation\t{w}");
        }
        for (k, w) in &report.covered {
            let _ = writeln!(out, "covered\t{}\t{w}", k.as_str());
        }
        for k in &report.missing {
            let _ = writeln!(out, "missing\t{}", k.as_str());
        }
        let _ = writeln!(
            out,
            "summary\tviolations={}\tmissing={}\tresult={verdict}",
            ordered.len(),
            report.missing.len()
        );
    } else {
        let _ = writeln!(out, "demonstration {}", a.demo);
        let _ = writeln!(out, "identity check: accepted words up to length {}", a.max_len);
        let _ = writeln!(
            out,
            "coverage: ball radius {}, search length {}, covered {}",
            a.ball,
            search_len,
            report.covered.len()
        );
        for w in &ordered {
            let _ = writeln!(out, "  identity word: {w}");
        }
        for k in &report.missing {
            let _ = writeln!(out, "  missing: {}", k.as_str());
        }
        if !report.missing.is_empty() && !failed {
            let _ = writeln!(out, "note: missing elements are reported, not failed, without a reached --complete-bound");
        }
        let _ = writeln!(out, "identity violations: {}, missing: {}", ordered.len(), report.missing.len());
        let _ = writeln!(out, "result: {verdict}");
    }
    Ok(Outcome { code: i32::from(failed), stdout: out, stderr: String::new() })
}

fn enumerate(ws: &mut Workspace, a: EnumerateArgs) -> CmdResult {
    let mut out = String::new();
    if let Some(name) = a.source.automaton {
        let nfa = ws.automata.get(&name).ok_or_else(|| format!("unknown automaton {name}"))?;
        for w in nfa.enumerate(a.max_len) {
            let _ = writeln!(out, "{w}");
        }
    } else if let Some(name) = a.source.demo {
        let d = ws.demo(&name)?.demo.clone();
        for w in d.language().enumerate(a.max_len) {
            let k = d.evaluate(&w).map_err(|e| e.to_string())?;
            if a.porcelain {
                let _ = writeln!(out, "{w}\t{}", k.as_str());
            } else {
                let _ = writeln!(out, "{w}  ->  {}", k.as_str());
            }
        }
    }
    Ok(Outcome::ok(out))
}

fn ball_cmd(ws: &mut Workspace, a: BallArgs) -> CmdResult {
    let o = ws.group(&a.group)?.oracle.clone();
    let b = ball(o.as_ref(), a.radius).map_err(|e| e.to_string())?;
    let mut rows: Vec<(&ElementKey, &Word)> = b.iter().collect();
    let alpha = o.alphabet().clone();
    rows.sort_by(|x, y| alpha.cmp_length_lex(x.1.letters(), y.1.letters()));
    let mut out = String::new();
    if !a.porcelain {
        let _ = writeln!(out, "ball of {} radius {}: {} elements", a.group, a.radius, rows.len());
    }
    for (k, w) in rows {
        if a.porcelain {
            let _ = writeln!(out, "{}\t{w}", k.as_str());
        } else {
            let _ = writeln!(out, "  {w}  ->  {}", k.as_str());
        }
    }
    Ok(Outcome::ok(out))
}

fn split_assignment(s: &str) -> Result<(Letter, Word), String> {
    let (l, w) = s.split_once('=').ok_or_else(|| format!("expected LETTER=WORD, found {s:?}"))?;
    let l = Letter::new(l.trim()).map_err(|e| e.to_string())?;
    Ok((l, Word::parse(w)))
}

/// Key predicate from `closure[:MAX]` (keys hit by `closure_of` up to MAX,
/// plus the identity) or `entries:R,C[=V];...` (entry tests on the key).
fn membership(spec: &str, oracle: &SharedOracle, closure_of: &Demonstration) -> Result<Box<dyn Fn(&ElementKey) -> bool>, String> {
    if let Some(rest) = spec.strip_prefix("closure") {
        let max: usize = match rest.strip_prefix(':') {
            Some(n) => n.parse().map_err(|_| format!("bad closure bound {n:?}"))?,
            None if rest.is_empty() => 8,
            None => return Err(format!("bad membership spec {spec:?}")),
        };
        let mut keys = BTreeSet::from([oracle.identity_key()]);
        for w in closure_of.language().enumerate(max) {
            let img = closure_of.image_word(&w).map_err(|e| e.to_string())?;
            keys.insert(oracle.evaluate(&img).map_err(|e| e.to_string())?);
        }
        return Ok(Box::new(move |k| keys.contains(k)));
    }
    if let Some(rest) = spec.strip_prefix("entries:") {
        let mut tests = Vec::new();
        for part in rest.split(';').filter(|p| !p.is_empty()) {
            let (pos, val) = part.split_once('=').unwrap_or((part, "0"));
            let (r, c) = pos.split_once(',').ok_or_else(|| format!("bad entry {part:?}"))?;
            let bad = || format!("bad entry {part:?}");
            let r: usize = r.trim().parse().map_err(|_| bad())?;
            let c: usize = c.trim().parse().map_err(|_| bad())?;
            let v: i64 = val.trim().parse().map_err(|_| bad())?;
            tests.push((r, c, v.to_string()));
        }
        return Ok(Box::new(move |k: &ElementKey| {
            let body = k.as_str().split_once(':').map_or("", |(_, b)| b);
            let rows: Vec<Vec<&str>> = body.split(';').map(|r| r.split(',').collect()).collect();
            tests
                .iter()
                .all(|(r, c, v)| rows.get(*r).and_then(|row| row.get(*c)).is_some_and(|x| x == v))
        }));
    }
    Err(format!("bad membership spec {spec:?}"))
}

fn fresh(ws: &Workspace, demo: Option<&str>, automaton: Option<&str>, group: Option<&str>) -> Result<(), String> {
    if let Some(d) = demo.filter(|d| ws.demos.contains_key(*d)) {
        return Err(format!("demonstration {d} already exists"));
    }
    if let Some(a) = automaton.filter(|a| ws.automata.contains_key(*a)) {
        return Err(format!("automaton {a} already exists"));
    }
    if let Some(g) = group.filter(|g| ws.groups.contains_key(*g)) {
        return Err(format!("group {g} already exists"));
    }
    Ok(())
}

fn check_size(a: &Nfa, max_states: usize) -> Result<(), String> {
    if a.state_count() > max_states {
        return Err(format!(
            "constructed automaton has {} states, above the cap of {max_states} (EPIC_MAX_STATES)",
            a.state_count()
        ));
    }
    Ok(())
}

/// Stores a constructed demonstration and its language under `name`.
fn store_demo(ws: &mut Workspace, name: &str, group: &str, d: &Demonstration, subgroup: Option<String>) -> Result<(), String> {
    let aut = format!("{name}_lang");
    ws.automata.insert(aut.clone(), d.language().clone());
    let letters = if d.has_identity_map() {
        Vec::new()
    } else {
        d.language()
            .alphabet()
            .iter()
            .map(|l| (l.clone(), d.eval_map()[l].clone()))
            .collect()
    };
    let def = DemoDef { group: group.to_string(), letters, automaton: aut, subgroup };
    ws.insert_demo(name, def)
}

fn emit(text: String, out: &Option<PathBuf>, summary: String) -> CmdResult {
    match out {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display()))?;
            Ok(Outcome::ok(format!("{summary}\nwrote {}\n", p.display())))
        }
        None => Ok(Outcome::ok(text)),
    }
}

fn construct(ws: &mut Workspace, c: Construct, max_states: usize) -> CmdResult {
    let err = |e: epic_core::constructions::ConstructionError| e.to_string();
    let (name, out, group_name, d, subgroup) = match c {
        Construct::ChangeGens { demo, gens, maps, search_len, output } => {
            let entry = ws.demo(&demo)?.clone();
            let target = gens.iter().map(|g| split_assignment(g)).collect::<Result<Vec<_>, _>>()?;
            let phi: BTreeMap<Letter, Word> = if maps.is_empty() {
                representative_words(&entry.demo, &target, search_len).map_err(err)?
            } else {
                maps.iter().map(|m| split_assignment(m)).collect::<Result<_, _>>()?
            };
            let d = change_generators(&entry.demo, &target, &phi).map_err(err)?;
            (output.name, output.out, entry.def.group, d, entry.def.subgroup)
        }
        Construct::Extension { normal, quotient, group, in_normal, check_len, output } => {
            let oracle = ws.group(&group)?.oracle.clone();
            let dn = ws.demo(&normal)?.demo.clone();
            let dq = ws.demo(&quotient)?.demo.clone();
            let in_n = membership(&in_normal, &oracle, &dn)?;
            let d = extension(&dn, &dq, oracle, &*in_n, check_len).map_err(err)?;
            (output.name, output.out, group, d, None)
        }
        Construct::FiOvergroup { demo, group, transversal, in_subgroup, output } => {
            let oracle = ws.group(&group)?.oracle.clone();
            let dg = ws.demo(&demo)?.demo.clone();
            let t = transversal.iter().map(|s| split_assignment(s)).collect::<Result<Vec<_>, _>>()?;
            let in_g = membership(&in_subgroup, &oracle, &dg)?;
            let d = fi_overgroup(&dg, oracle, &t, &*in_g).map_err(err)?;
            (output.name, output.out, group, d, None)
        }
        Construct::FiSubgroup { demo, table, output } => {
            let entry = ws.demo(&demo)?.clone();
            let te = ws.tables.get(&table).ok_or_else(|| format!("unknown coset table {table}"))?;
            if te.group != entry.def.group {
                return Err(format!("coset table {table} belongs to group {}, not {}", te.group, entry.def.group));
            }
            let d = fi_subgroup(&entry.demo, &te.table).map_err(err)?;
            (output.name, output.out, entry.def.group, d, Some(table))
        }
        Construct::GraphProduct { vertices, edges, output } => {
            let mut names = Vec::new();
            let mut locals = Vec::new();
            let mut uses = Vec::new();
            for v in &vertices {
                let (n, demo) = v.split_once('=').ok_or_else(|| format!("expected VERTEX=DEMO, found {v:?}"))?;
                let entry = ws.demo(demo.trim())?.clone();
                names.push(n.trim().to_string());
                uses.push(entry.def.group.clone());
                locals.push(entry.demo);
            }
            let mut pairs = Vec::new();
            for e in &edges {
                let parts: Vec<&str> = e.split([' ', ',']).filter(|s| !s.is_empty()).collect();
                if parts.len() != 2 {
                    return Err(format!("expected an edge `U V`, found {e:?}"));
                }
                pairs.push((parts[0].to_string(), parts[1].to_string()));
            }
            let v: Vec<&str> = names.iter().map(String::as_str).collect();
            let ed: Vec<(&str, &str)> = pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
            let graph = VertexGraph::new(&v, &ed).map_err(|e| e.to_string())?;
            let adm = admissible_automaton(&graph).map_err(err)?;
            let local_max = locals.iter().map(|d| d.language().state_count()).max().unwrap_or(0);
            check_size_estimate(adm.state_count(), local_max, max_states)?;
            let d = graph_product(&graph, &locals).map_err(err)?;
            let group = format!("{}_group", output.name);
            fresh(ws, None, None, Some(&group))?;
            ws.insert_group(&group, GroupDef::GraphProduct { vertices: names, edges: pairs, uses })?;
            (output.name, output.out, group, d, None)
        }
        Construct::AutostackableProject { automaton, output } => {
            let nfa = ws.automata.get(&automaton).ok_or_else(|| format!("unknown automaton {automaton}"))?;
            let t = SyncTripleAutomaton::new(nfa.clone()).map_err(err)?;
            let p = autostackable_projection(&t).map_err(err)?;
            check_size(&p, max_states)?;
            fresh(ws, None, Some(&output.name), None)?;
            let summary = format!("automaton {}: {} states", output.name, p.state_count());
            let text = render_automaton(&output.name, &p);
            ws.automata.insert(output.name.clone(), p);
            return emit(text, &output.out, summary);
        }
        Construct::CrossSection { automaton, group, identity_rep, output } => {
            let nfa = ws.automata.get(&automaton).ok_or_else(|| format!("unknown automaton {automaton}"))?.clone();
            let oracle = ws.group(&group)?.oracle.clone();
            let d = cross_section_to_demo(&nfa, oracle, &Word::parse(&identity_rep)).map_err(err)?;
            (output.name, output.out, group, d, None)
        }
    };
    check_size(d.language(), max_states)?;
    fresh(ws, Some(&name), Some(&format!("{name}_lang")), None)?;
    store_demo(ws, &name, &group_name, &d, subgroup)?;
    let summary = format!(
        "demonstration {name}: {} letters, {} states",
        d.language().alphabet().len(),
        d.language().state_count()
    );
    emit(ws.render_demo_closure(&name), &out, summary)
}

fn check_size_estimate(admissible: usize, local_max: usize, max_states: usize) -> Result<(), String> {
    let estimate = admissible.saturating_mul(local_max).saturating_add(1);
    if estimate > max_states {
        return Err(format!(
            "graph product would need about {estimate} states, above the cap of {max_states} (EPIC_MAX_STATES)"
        ));
    }
    Ok(())
}

fn wp_decide(
    ws: &mut Workspace,
    presentation: &str,
    demo: &str,
    word: &str,
    budget: u64,
    resume_from: Option<PathBuf>,
    save: Option<PathBuf>,
) -> CmdResult {
    let p = ws
        .presentations
        .get(presentation)
        .ok_or_else(|| format!("unknown presentation {presentation}"))?
        .clone();
    let d = ws.demo(demo)?.demo.clone();
    let w = Word::parse(word);
    free_reduce(p.alphabet(), &w).map_err(|e| e.to_string())?;
    let frontier = match resume_from {
        Some(path) => {
            let text = std::fs::read_to_string(&path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            let fr = Frontier::parse(&text).map_err(|e| e.to_string())?;
            if fr.word != w {
                return Err(format!("frontier in {} is for the word {}, not {w}", path.display(), fr.word));
            }
            fr
        }
        None => Frontier::start(w.clone()),
    };
    let mut f = demonstration_enumerator(&d);
    let mut g = normal_closure_enumerator(&p);
    let verdict = resume(frontier, &mut f, &mut g, budget);
    let mut out = format!("word: {w}\n");
    let code = match &verdict {
        WpVerdict::InWp { index } => {
            let gi = g.get(*index).cloned().unwrap_or_default();
            let _ = writeln!(out, "verdict: IN_WP");
            let _ = writeln!(out, "certificate: g({index}) = {gi}");
            0
        }
        WpVerdict::NotInWp { j, k } => {
            let fj = f.get(*j).cloned().unwrap_or_default();
            let gk = g.get(*k).cloned().unwrap_or_default();
            let _ = writeln!(out, "verdict: NOT_IN_WP");
            let _ = writeln!(out, "certificate: f({j}) = {fj}, g({k}) = {gk}");
            0
        }
        WpVerdict::BudgetExceeded(fr) => {
            let _ = writeln!(out, "verdict: BUDGET_EXCEEDED");
            let _ = writeln!(out, "frontier: index {}, step {}, spent {}", fr.index, fr.step, fr.spent);
            if let Some(path) = &save {
                std::fs::write(path, fr.to_text()).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
                let _ = writeln!(out, "saved frontier to {}", path.display());
            }
            1
        }
    };
    if !matches!(verdict, WpVerdict::BudgetExceeded(_)) {
        let replayed = verdict.replay(&w, &mut f, &mut g);
        let _ = writeln!(out, "replay: {}", if replayed { "ok" } else { "FAILED" });
        if !replayed {
            return Ok(Outcome { code: 1, stdout: out, stderr: String::new() });
        }
    }
    Ok(Outcome { code, stdout: out, stderr: String::new() })
}
