//! Named groups, automata, coset tables, demonstrations and presentations
//! loaded from block files, linked, and rendered back.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use epic_core::automata::{Alphabet, Letter, Nfa, NfaBuilder, Word, EPSILON};
use epic_core::constructions::{CosetTable, VertexGraph};
use epic_core::demonstrations::{builtin_demo, default_names, BuiltinKind, free_language, z_language, zk_language, Demonstration};
use epic_core::groups::{
    FreeAbelianOracle, FreeGroupOracle, GraphProductOracle, IntegerMatrixOracle, Permutation,
    PermutationOracle, SharedOracle,
};
use epic_core::wordproblem::Presentation;
use num_bigint::BigInt;

use crate::blocks::{parse_blocks, Block, Line, LoadError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupDef {
    Perm {
        degree: usize,
        gens: Vec<(Letter, Permutation)>,
    },
    Matrix {
        dim: usize,
        gens: Vec<(Letter, Vec<Vec<BigInt>>)>,
    },
    Zk {
        rank: usize,
        gens: Vec<(Letter, Vec<i64>)>,
    },
    Free {
        names: Vec<String>,
    },
    GraphProduct {
        vertices: Vec<String>,
        edges: Vec<(String, String)>,
        uses: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemoDef {
    pub group: String,
    pub letters: Vec<(Letter, Word)>,
    pub automaton: String,
    pub subgroup: Option<String>,
}

#[derive(Debug, Clone)]
pub struct GroupEntry {
    pub def: GroupDef,
    pub oracle: SharedOracle,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableEntry {
    pub group: String,
    pub table: CosetTable,
}

#[derive(Debug, Clone)]
pub struct DemoEntry {
    pub def: DemoDef,
    pub demo: Demonstration,
}

#[derive(Debug, Clone, Default)]
pub struct Workspace {
    pub groups: BTreeMap<String, GroupEntry>,
    pub automata: BTreeMap<String, Nfa>,
    pub tables: BTreeMap<String, TableEntry>,
    pub demos: BTreeMap<String, DemoEntry>,
    pub presentations: BTreeMap<String, Presentation>,
}

impl PartialEq for Workspace {
    fn eq(&self, other: &Self) -> bool {
        let groups = |w: &Workspace| -> Vec<(String, GroupDef)> {
            w.groups.iter().map(|(k, v)| (k.clone(), v.def.clone())).collect()
        };
        let demos = |w: &Workspace| -> Vec<(String, DemoDef)> {
            w.demos.iter().map(|(k, v)| (k.clone(), v.def.clone())).collect()
        };
        groups(self) == groups(other)
            && self.automata == other.automata
            && self.tables == other.tables
            && demos(self) == demos(other)
            && self.presentations == other.presentations
    }
}

// ---------------------------------------------------------------- parsing

fn letter(b: &Block, line: usize, s: &str) -> Result<Letter, LoadError> {
    Letter::new(s).map_err(|e| b.error(line, e.to_string()))
}

fn number<T: std::str::FromStr>(b: &Block, line: usize, s: &str) -> Result<T, LoadError> {
    s.parse().map_err(|_| b.error(line, format!("expected a number, found {s:?}")))
}

/// `(1 2)(3,4,5)`, `()` for the identity.
fn parse_cycles(b: &Block, line: usize, degree: usize, s: &str) -> Result<Permutation, LoadError> {
    let mut cycles = Vec::new();
    let mut cur: Option<Vec<usize>> = None;
    let mut num = String::new();
    let bad = || b.error(line, format!("malformed cycle notation {s:?}"));
    for ch in s.chars().chain(std::iter::once(' ')) {
        if ch.is_ascii_digit() {
            num.push(ch);
            continue;
        }
        if !num.is_empty() {
            cur.as_mut().ok_or_else(bad)?.push(num.parse().map_err(|_| bad())?);
            num.clear();
        }
        match ch {
            '(' if cur.is_none() => cur = Some(Vec::new()),
            ')' => cycles.push(cur.take().ok_or_else(bad)?),
            ',' | ' ' => {}
            _ => return Err(bad()),
        }
    }
    if cur.is_some() {
        return Err(bad());
    }
    Permutation::from_cycles(degree, &cycles)
        .ok_or_else(|| b.error(line, format!("{s} is not a permutation of degree {degree}")))
}

fn parse_vector<T: std::str::FromStr>(b: &Block, line: usize, s: &str) -> Result<Vec<T>, LoadError> {
    let inner = s
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| b.error(line, format!("expected [..], found {s:?}")))?;
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    inner.split(',').map(|c| number(b, line, c)).collect()
}

fn parse_matrix(b: &Block, line: usize, s: &str) -> Result<Vec<Vec<BigInt>>, LoadError> {
    let inner = s
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| b.error(line, format!("expected [[..],..], found {s:?}")))?;
    let mut rows = Vec::new();
    let mut depth = 0;
    let mut start = 0;
    for (i, ch) in inner.char_indices() {
        match ch {
            '[' => {
                depth += 1;
                start = i;
            }
            ']' => {
                depth -= 1;
                rows.push(parse_vector(b, line, &inner[start..=i])?);
            }
            _ => {}
        }
        if depth > 1 || depth < 0 {
            return Err(b.error(line, format!("malformed matrix {s:?}")));
        }
    }
    Ok(rows)
}

/// `gen L = VALUE` with VALUE re-joined (`join` decides the separator).
fn gen_line<'a>(b: &Block, l: &'a Line, join: &str) -> Result<(Letter, String), LoadError> {
    if l.tokens.len() < 4 || l.tokens[2] != "=" {
        return Err(b.error(l.number, "expected `gen LETTER = VALUE`"));
    }
    Ok((letter(b, l.number, &l.tokens[1])?, l.tokens[3..].join(join)))
}

fn header_number(b: &Block, key: &str) -> Result<usize, LoadError> {
    let h = &b.header;
    if h.tokens.len() != 5 || h.tokens[3] != key {
        return Err(b.error(h.number, format!("expected `group NAME {} {key} N`", h.tokens.get(2).map_or("", |s| s.as_str()))));
    }
    number(b, h.number, &h.tokens[4])
}

struct GroupRefs {
    def: GroupDef,
    lines: Vec<usize>,
}

fn parse_group(b: &Block) -> Result<GroupRefs, LoadError> {
    let kind = b
        .header
        .tokens
        .get(2)
        .ok_or_else(|| b.error(b.header.number, "group block needs a kind"))?
        .as_str();
    let mut lines = Vec::new();
    let expect_gen = |l: &Line| -> Result<(), LoadError> {
        if l.tokens[0] != "gen" {
            return Err(b.error(l.number, format!("unexpected {:?} in {kind} group", l.tokens[0])));
        }
        Ok(())
    };
    let def = match kind {
        "perm" => {
            let degree = header_number(b, "degree")?;
            let mut gens = Vec::new();
            for l in &b.body {
                expect_gen(l)?;
                let (x, v) = gen_line(b, l, " ")?;
                gens.push((x, parse_cycles(b, l.number, degree, &v)?));
            }
            GroupDef::Perm { degree, gens }
        }
        "matrix" => {
            let dim = header_number(b, "dim")?;
            let mut gens = Vec::new();
            for l in &b.body {
                expect_gen(l)?;
                let (x, v) = gen_line(b, l, "")?;
                gens.push((x, parse_matrix(b, l.number, &v)?));
            }
            GroupDef::Matrix { dim, gens }
        }
        "zk" => {
            let rank = header_number(b, "rank")?;
            let mut gens = Vec::new();
            for l in &b.body {
                expect_gen(l)?;
                let (x, v) = gen_line(b, l, "")?;
                gens.push((x, parse_vector(b, l.number, &v)?));
            }
            GroupDef::Zk { rank, gens }
        }
        "free" => {
            let rank = header_number(b, "rank")?;
            let mut names = Vec::new();
            for l in &b.body {
                expect_gen(l)?;
                if l.tokens.len() != 2 || l.tokens[1].ends_with("^-1") {
                    return Err(b.error(l.number, "expected `gen NAME`"));
                }
                names.push(l.tokens[1].clone());
            }
            if names.is_empty() {
                names = default_names(rank);
            }
            if names.len() != rank {
                return Err(b.error(b.header.number, format!("rank {rank} but {} generators", names.len())));
            }
            GroupDef::Free { names }
        }
        "graphproduct" => {
            if b.header.tokens.len() != 3 {
                return Err(b.error(b.header.number, "expected `group NAME graphproduct`"));
            }
            let mut vertices = Vec::new();
            let mut edges = Vec::new();
            let mut uses: BTreeMap<String, (String, usize)> = BTreeMap::new();
            for l in &b.body {
                match l.tokens[0].as_str() {
                    "vertices" => vertices.extend(l.tokens[1..].iter().cloned()),
                    "edge" if l.tokens.len() == 3 => edges.push((l.tokens[1].clone(), l.tokens[2].clone())),
                    "vertex" if l.tokens.len() == 4 && l.tokens[2] == "uses" => {
                        if uses.insert(l.tokens[1].clone(), (l.tokens[3].clone(), l.number)).is_some() {
                            return Err(b.error(l.number, format!("vertex {} has two groups", l.tokens[1])));
                        }
                    }
                    _ => return Err(b.error(l.number, "expected `vertices`, `edge U V` or `vertex V uses GROUP`")),
                }
            }
            let mut order = Vec::new();
            for v in &vertices {
                let (g, line) = uses
                    .remove(v)
                    .ok_or_else(|| b.error(b.header.number, format!("vertex {v} has no group")))?;
                order.push(g);
                lines.push(line);
            }
            if let Some((v, (_, line))) = uses.into_iter().next() {
                return Err(b.error(line, format!("{v} is not a declared vertex")));
            }
            GroupDef::GraphProduct {
                vertices,
                edges,
                uses: order,
            }
        }
        other => return Err(b.error(b.header.number, format!("unknown group kind {other:?}"))),
    };
    Ok(GroupRefs { def, lines })
}

fn parse_automaton(b: &Block) -> Result<Nfa, LoadError> {
    if b.header.tokens.len() != 2 {
        return Err(b.error(b.header.number, "expected `automaton NAME`"));
    }
    let mut alphabet = Alphabet::default();
    let mut states: Vec<String> = Vec::new();
    for l in &b.body {
        match l.tokens[0].as_str() {
            "alphabet" => {
                for t in &l.tokens[1..] {
                    if t == EPSILON {
                        return Err(b.error(l.number, "`eps` is reserved"));
                    }
                    let x = letter(b, l.number, t)?;
                    if alphabet.contains(&x) {
                        return Err(b.error(l.number, format!("letter {x} declared twice")));
                    }
                    alphabet.insert(x);
                }
            }
            "states" => {
                for t in &l.tokens[1..] {
                    if states.contains(t) {
                        return Err(b.error(l.number, format!("state {t} declared twice")));
                    }
                    states.push(t.clone());
                }
            }
            "initial" | "accept" | "trans" => {}
            other => return Err(b.error(l.number, format!("unexpected {other:?} in automaton"))),
        }
    }
    let mut nb = NfaBuilder::new(alphabet);
    for s in &states {
        nb.add_state(s.clone());
    }
    let state = |l: &Line, s: &str| {
        states
            .iter()
            .position(|t| t == s)
            .ok_or_else(|| b.error(l.number, format!("undeclared state {s}")))
    };
    for l in &b.body {
        match l.tokens[0].as_str() {
            "initial" => {
                for t in &l.tokens[1..] {
                    nb.set_initial(state(l, t)?);
                }
            }
            "accept" => {
                for t in &l.tokens[1..] {
                    nb.set_accepting(state(l, t)?, true);
                }
            }
            "trans" => {
                if l.tokens.len() != 4 {
                    return Err(b.error(l.number, "expected `trans FROM LETTER TO`"));
                }
                let (from, to) = (state(l, &l.tokens[1])?, state(l, &l.tokens[3])?);
                if l.tokens[2] == EPSILON || l.tokens[2] == "ε" {
                    nb.add_epsilon(from, to);
                } else {
                    let x = letter(b, l.number, &l.tokens[2])?;
                    nb.add_letter_edge(from, &x, to)
                        .map_err(|e| b.error(l.number, e.to_string()))?;
                }
            }
            _ => {}
        }
    }
    nb.build().map_err(|e| b.error(b.header.number, e.to_string()))
}

struct DemoRefs {
    def: DemoDef,
    group_line: usize,
    automaton_line: usize,
    subgroup_line: usize,
}

fn parse_demo(b: &Block) -> Result<DemoRefs, LoadError> {
    let (mut group, mut automaton, mut subgroup) = (None, None, None);
    let mut letters: Vec<(Letter, Word)> = Vec::new();
    let single = |l: &Line, slot: &mut Option<(String, usize)>| -> Result<(), LoadError> {
        if l.tokens.len() != 2 {
            return Err(b.error(l.number, format!("expected `{} NAME`", l.tokens[0])));
        }
        if slot.is_some() {
            return Err(b.error(l.number, format!("`{}` given twice", l.tokens[0])));
        }
        *slot = Some((l.tokens[1].clone(), l.number));
        Ok(())
    };
    for l in &b.body {
        match l.tokens[0].as_str() {
            "group" => single(l, &mut group)?,
            "automaton" => single(l, &mut automaton)?,
            "subgroup" => single(l, &mut subgroup)?,
            "letter" => {
                if l.tokens.len() < 4 || l.tokens[2] != "=" {
                    return Err(b.error(l.number, "expected `letter LETTER = WORD`"));
                }
                let x = letter(b, l.number, &l.tokens[1])?;
                if letters.iter().any(|(y, _)| *y == x) {
                    return Err(b.error(l.number, format!("letter {x} mapped twice")));
                }
                letters.push((x, Word::parse(&l.rest(3))));
            }
            other => return Err(b.error(l.number, format!("unexpected {other:?} in demonstration"))),
        }
    }
    let (group, group_line) = group.ok_or_else(|| b.error(b.header.number, "demonstration needs `group`"))?;
    let (automaton, automaton_line) =
        automaton.ok_or_else(|| b.error(b.header.number, "demonstration needs `automaton`"))?;
    let subgroup_line = subgroup.as_ref().map_or(0, |s| s.1);
    Ok(DemoRefs {
        def: DemoDef {
            group,
            letters,
            automaton,
            subgroup: subgroup.map(|s| s.0),
        },
        group_line,
        automaton_line,
        subgroup_line,
    })
}

struct TableRefs {
    group: String,
    index: usize,
    cosets: Vec<(String, Word)>,
    actions: Vec<(String, Letter, String)>,
}

fn parse_table(b: &Block) -> Result<TableRefs, LoadError> {
    let h = &b.header;
    if h.tokens.len() != 6 || h.tokens[2] != "group" || h.tokens[4] != "subgroupof" {
        return Err(b.error(h.number, "expected `cosettable NAME group GROUP subgroupof INDEX`"));
    }
    let mut cosets = Vec::new();
    let mut actions = Vec::new();
    for l in &b.body {
        match l.tokens[0].as_str() {
            "coset" if l.tokens.len() >= 4 && l.tokens[2] == "rep" => {
                cosets.push((l.tokens[1].clone(), Word::parse(&l.rest(3))));
            }
            "action" if l.tokens.len() == 4 => {
                actions.push((l.tokens[1].clone(), letter(b, l.number, &l.tokens[2])?, l.tokens[3].clone()));
            }
            _ => return Err(b.error(l.number, "expected `coset NAME rep WORD` or `action FROM LETTER TO`")),
        }
    }
    Ok(TableRefs {
        group: h.tokens[3].clone(),
        index: number(b, h.number, &h.tokens[5])?,
        cosets,
        actions,
    })
}

fn parse_presentation(b: &Block) -> Result<Presentation, LoadError> {
    let mut gens: Vec<String> = Vec::new();
    let mut rels = Vec::new();
    for l in &b.body {
        match l.tokens[0].as_str() {
            "alphabet" => gens.extend(l.tokens[1..].iter().cloned()),
            "relator" => rels.push(Word::parse(&l.rest(1))),
            other => return Err(b.error(l.number, format!("unexpected {other:?} in presentation"))),
        }
    }
    let names: Vec<&str> = gens.iter().map(String::as_str).collect();
    Presentation::new(&names, &rels).map_err(|e| b.error(b.header.number, e.to_string()))
}

// ---------------------------------------------------------------- linking

pub fn build_oracle(def: &GroupDef, vertex_oracles: &[SharedOracle]) -> Result<SharedOracle, String> {
    let e = |e: epic_core::groups::GroupError| e.to_string();
    Ok(match def {
        GroupDef::Perm { degree, gens } => Arc::new(PermutationOracle::new(*degree, gens.clone()).map_err(e)?),
        GroupDef::Matrix { dim, gens } => Arc::new(IntegerMatrixOracle::new(*dim, gens.clone()).map_err(e)?),
        GroupDef::Zk { rank, gens } => Arc::new(FreeAbelianOracle::new(*rank, gens.clone()).map_err(e)?),
        GroupDef::Free { names } => {
            let n: Vec<&str> = names.iter().map(String::as_str).collect();
            Arc::new(FreeGroupOracle::new(&n))
        }
        GroupDef::GraphProduct { vertices, edges, .. } => {
            let v: Vec<&str> = vertices.iter().map(String::as_str).collect();
            let ed: Vec<(&str, &str)> = edges.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
            let g = VertexGraph::new(&v, &ed).map_err(e)?;
            Arc::new(GraphProductOracle::new(g, vertex_oracles.to_vec()).map_err(e)?)
        }
    })
}

impl Workspace {
    pub fn new() -> Self {
        Workspace::default()
    }

    pub fn load(paths: &[impl AsRef<Path>]) -> Result<Workspace, LoadError> {
        let mut sources = Vec::new();
        for p in paths {
            let p = p.as_ref();
            let text = std::fs::read_to_string(p).map_err(|e| LoadError {
                file: p.display().to_string(),
                line: 0,
                message: e.to_string(),
            })?;
            sources.push((p.display().to_string(), text));
        }
        let refs: Vec<(&str, &str)> = sources.iter().map(|(f, t)| (f.as_str(), t.as_str())).collect();
        Workspace::load_sources(&refs)
    }

    pub fn load_str(file: &str, text: &str) -> Result<Workspace, LoadError> {
        Workspace::load_sources(&[(file, text)])
    }

    pub fn load_sources(sources: &[(&str, &str)]) -> Result<Workspace, LoadError> {
        let mut blocks = Vec::new();
        for (f, t) in sources {
            blocks.extend(parse_blocks(f, t)?);
        }
        let mut seen: BTreeSet<(String, String)> = BTreeSet::new();
        for b in &blocks {
            if !seen.insert((b.kind().to_string(), b.name().to_string())) {
                return Err(b.error(b.header.number, format!("duplicate {} name {}", b.kind(), b.name())));
            }
        }
        let mut ws = Workspace::new();
        let mut groups: BTreeMap<String, (GroupRefs, &Block)> = BTreeMap::new();
        let mut tables = Vec::new();
        let mut demos = Vec::new();
        for b in &blocks {
            let name = b.name().to_string();
            match b.kind() {
                "group" => {
                    groups.insert(name, (parse_group(b)?, b));
                }
                "automaton" => {
                    ws.automata.insert(name, parse_automaton(b)?);
                }
                "presentation" => {
                    ws.presentations.insert(name, parse_presentation(b)?);
                }
                "cosettable" => tables.push((name, parse_table(b)?, b)),
                "demonstration" => demos.push((name, parse_demo(b)?, b)),
                _ => unreachable!("checked by the block parser"),
            }
        }
        let mut referenced: Vec<String> = Vec::new();
        for (g, _) in groups.values() {
            if let GroupDef::GraphProduct { uses, .. } = &g.def {
                referenced.extend(uses.iter().cloned());
            }
        }
        referenced.extend(tables.iter().map(|t| t.1.group.clone()));
        referenced.extend(demos.iter().map(|d| d.1.def.group.clone()));
        for r in referenced {
            if !groups.contains_key(&r) && !ws.groups.contains_key(&r) {
                if let Some(def) = builtin_group(&r) {
                    ws.insert_group(&r, def).map_err(|m| LoadError { file: String::new(), line: 0, message: m })?;
                }
            }
        }
        let names: Vec<String> = groups.keys().cloned().collect();
        for n in names {
            link_group(&mut ws, &groups, &n, &mut Vec::new())?;
        }
        for (name, t, b) in tables {
            let g = ws
                .groups
                .get(&t.group)
                .ok_or_else(|| b.error(b.header.number, format!("undefined group {}", t.group)))?;
            if t.cosets.len() != t.index {
                return Err(b.error(b.header.number, format!("index {} but {} cosets", t.index, t.cosets.len())));
            }
            let table = CosetTable::from_entries(g.oracle.alphabet().clone(), t.cosets, &t.actions)
                .map_err(|e| b.error(b.header.number, e.to_string()))?;
            ws.tables.insert(name, TableEntry { group: t.group, table });
        }
        for (name, d, b) in demos {
            let demo = ws.link_demo(&d.def).map_err(|(which, msg)| {
                let line = match which {
                    Ref::Group => d.group_line,
                    Ref::Automaton => d.automaton_line,
                    Ref::Subgroup => d.subgroup_line,
                    Ref::Block => b.header.number,
                };
                b.error(line, msg)
            })?;
            ws.demos.insert(name, DemoEntry { def: d.def, demo });
        }
        Ok(ws)
    }

    fn link_demo(&self, def: &DemoDef) -> Result<Demonstration, (Ref, String)> {
        let g = self
            .groups
            .get(&def.group)
            .ok_or_else(|| (Ref::Group, format!("undefined group {}", def.group)))?;
        let a = self
            .automata
            .get(&def.automaton)
            .ok_or_else(|| (Ref::Automaton, format!("undefined automaton {}", def.automaton)))?;
        let demo = if def.letters.is_empty() {
            Demonstration::with_identity_map(g.oracle.clone(), a.clone())
        } else {
            Demonstration::new(g.oracle.clone(), def.letters.iter().cloned().collect(), a.clone())
        }
        .map_err(|e| (if def.letters.is_empty() { Ref::Automaton } else { Ref::Block }, e.to_string()))?;
        match &def.subgroup {
            None => Ok(demo),
            Some(t) => {
                let te = self
                    .tables
                    .get(t)
                    .ok_or_else(|| (Ref::Subgroup, format!("undefined coset table {t}")))?;
                if te.group != def.group {
                    return Err((Ref::Subgroup, format!("coset table {t} belongs to group {}", te.group)));
                }
                demo.with_subgroup(te.table.clone()).map_err(|e| (Ref::Subgroup, e.to_string()))
            }
        }
    }

    /// Adds a demonstration whose dependencies are already present.
    pub fn insert_demo(&mut self, name: &str, def: DemoDef) -> Result<(), String> {
        let demo = self.link_demo(&def).map_err(|(_, m)| m)?;
        self.demos.insert(name.to_string(), DemoEntry { def, demo });
        Ok(())
    }

    pub fn insert_group(&mut self, name: &str, def: GroupDef) -> Result<(), String> {
        let vertex_oracles = match &def {
            GroupDef::GraphProduct { uses, .. } => uses
                .iter()
                .map(|u| {
                    self.groups
                        .get(u)
                        .map(|g| g.oracle.clone())
                        .ok_or_else(|| format!("undefined group {u}"))
                })
                .collect::<Result<Vec<_>, _>>()?,
            _ => Vec::new(),
        };
        let oracle = build_oracle(&def, &vertex_oracles)?;
        self.groups.insert(name.to_string(), GroupEntry { def, oracle });
        Ok(())
    }

    /// A group by name, falling back to the builtin groups.
    pub fn group(&mut self, name: &str) -> Result<&GroupEntry, String> {
        if !self.groups.contains_key(name) {
            let def = builtin_group(name).ok_or_else(|| format!("unknown group {name}"))?;
            self.insert_group(name, def)?;
        }
        Ok(&self.groups[name])
    }

    /// A demonstration by name, falling back to the builtin demonstrations
    /// `z`, `s3`, `freeK` and `zkK`, matched without regard to case.
    pub fn demo(&mut self, name: &str) -> Result<&DemoEntry, String> {
        if !self.demos.contains_key(name) {
            let key = name.to_ascii_lowercase();
            let (group, lang) = builtin_demo_parts(&key).ok_or_else(|| format!("unknown demonstration {name}"))?;
            let aut = format!("{key}_lang");
            if self.automata.get(&aut).is_some_and(|a| *a != lang) {
                return Err(format!("automaton {aut} clashes with the builtin demonstration {key}"));
            }
            if self.groups.get(&key).is_some_and(|g| g.def != group) {
                return Err(format!("group {key} clashes with the builtin demonstration {key}"));
            }
            if !self.groups.contains_key(&key) {
                self.insert_group(&key, group)?;
            }
            self.automata.insert(aut.clone(), lang);
            self.insert_demo(
                name,
                DemoDef {
                    group: key,
                    letters: Vec::new(),
                    automaton: aut,
                    subgroup: None,
                },
            )?;
        }
        Ok(&self.demos[name])
    }

    // ------------------------------------------------------------ rendering

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (n, g) in &self.groups {
            out += &render_group(n, &g.def);
        }
        for (n, a) in &self.automata {
            out += &render_automaton(n, a);
        }
        for (n, t) in &self.tables {
            out += &render_table(n, t);
        }
        for (n, d) in &self.demos {
            out += &render_demo(n, &d.def);
        }
        for (n, p) in &self.presentations {
            out += &render_presentation(n, p);
        }
        out
    }

    /// A demonstration block preceded by every block it depends on.
    pub fn render_demo_closure(&self, name: &str) -> String {
        let d = &self.demos[name].def;
        let mut out = String::new();
        let mut done = BTreeSet::new();
        self.render_group_closure(&d.group, &mut done, &mut out);
        out += &render_automaton(&d.automaton, &self.automata[&d.automaton]);
        if let Some(t) = &d.subgroup {
            out += &render_table(t, &self.tables[t]);
        }
        out += &render_demo(name, d);
        out
    }

    fn render_group_closure(&self, name: &str, done: &mut BTreeSet<String>, out: &mut String) {
        if !done.insert(name.to_string()) {
            return;
        }
        let g = &self.groups[name];
        if let GroupDef::GraphProduct { uses, .. } = &g.def {
            for u in uses {
                self.render_group_closure(u, done, out);
            }
        }
        *out += &render_group(name, &g.def);
    }
}

enum Ref {
    Group,
    Automaton,
    Subgroup,
    Block,
}

fn link_group(
    ws: &mut Workspace,
    groups: &BTreeMap<String, (GroupRefs, &Block)>,
    name: &str,
    stack: &mut Vec<String>,
) -> Result<(), LoadError> {
    if ws.groups.contains_key(name) {
        return Ok(());
    }
    let (refs, b) = &groups[name];
    if stack.iter().any(|s| s == name) {
        return Err(b.error(b.header.number, format!("group {name} depends on itself")));
    }
    stack.push(name.to_string());
    let mut oracles = Vec::new();
    if let GroupDef::GraphProduct { uses, .. } = &refs.def {
        for (u, &line) in uses.iter().zip(&refs.lines) {
            if !groups.contains_key(u) && !ws.groups.contains_key(u) {
                return Err(b.error(line, format!("undefined group {u}")));
            }
            link_group(ws, groups, u, stack)?;
            oracles.push(ws.groups[u].oracle.clone());
        }
    }
    stack.pop();
    let oracle = build_oracle(&refs.def, &oracles).map_err(|m| b.error(b.header.number, m))?;
    ws.groups.insert(
        name.to_string(),
        GroupEntry {
            def: refs.def.clone(),
            oracle,
        },
    );
    Ok(())
}

fn parse_count(key: &str, prefix: &str) -> Option<usize> {
    key.strip_prefix(prefix)?.parse().ok().filter(|&k| k > 0)
}

fn standard_zk(names: &[String]) -> GroupDef {
    let rank = names.len();
    let mut gens = Vec::new();
    for (i, n) in names.iter().enumerate() {
        let x = Letter::new(n).expect("generated name");
        let mut e = vec![0; rank];
        e[i] = 1;
        gens.push((x.clone(), e.clone()));
        gens.push((x.formal_inverse(), e.iter().map(|c| -c).collect()));
    }
    GroupDef::Zk { rank, gens }
}

fn matrix_def(o: &IntegerMatrixOracle) -> GroupDef {
    GroupDef::Matrix {
        dim: o.dim(),
        gens: o.generators().map(|(l, m)| (l.clone(), m.clone())).collect(),
    }
}

/// Builtin groups: `z`, `s3`, `freeK`, `zkK`, `heisenberg`, `dinf`.
pub fn builtin_group(name: &str) -> Option<GroupDef> {
    let key = name.to_ascii_lowercase();
    Some(match key.as_str() {
        "z" => standard_zk(&["a".to_string()]),
        "s3" => {
            let o = PermutationOracle::s3();
            GroupDef::Perm {
                degree: 3,
                gens: o.generators().map(|(l, p)| (l.clone(), p.clone())).collect(),
            }
        }
        "heisenberg" => matrix_def(&IntegerMatrixOracle::heisenberg()),
        "dinf" => matrix_def(&IntegerMatrixOracle::infinite_dihedral()),
        _ => {
            if let Some(k) = parse_count(&key, "free") {
                GroupDef::Free { names: default_names(k) }
            } else if let Some(k) = parse_count(&key, "zk") {
                standard_zk(&default_names(k))
            } else {
                return None;
            }
        }
    })
}

fn builtin_demo_parts(key: &str) -> Option<(GroupDef, Nfa)> {
    let group = builtin_group(key)?;
    let lang = match key {
        "z" => z_language("a"),
        "s3" => builtin_demo(BuiltinKind::Finite(PermutationOracle::s3())).ok()?.language().clone(),
        _ => {
            let names = if let Some(k) = parse_count(key, "free") {
                (default_names(k), true)
            } else {
                (default_names(parse_count(key, "zk")?), false)
            };
            let n: Vec<&str> = names.0.iter().map(String::as_str).collect();
            if names.1 {
                free_language(&n)
            } else {
                zk_language(&n)
            }
        }
    };
    Some((group, lang))
}

// ---------------------------------------------------------------- rendering

fn state_names(a: &Nfa) -> Vec<String> {
    let names: Vec<String> = (0..a.state_count()).map(|s| a.state_name(s).to_string()).collect();
    let unique: BTreeSet<&String> = names.iter().collect();
    let ok = unique.len() == names.len()
        && names.iter().all(|n| {
            !n.is_empty() && !n.chars().any(char::is_whitespace) && n != EPSILON && !n.starts_with('#')
        });
    if ok {
        names
    } else {
        (0..a.state_count()).map(|s| format!("s{s}")).collect()
    }
}

pub fn render_automaton(name: &str, a: &Nfa) -> String {
    let names = state_names(a);
    let mut out = format!("automaton {name}\n");
    let letters: Vec<&str> = a.alphabet().iter().map(|l| l.as_str()).collect();
    let _ = writeln!(out, "  alphabet {}", letters.join(" ")).map(|_| ());
    let _ = writeln!(out, "  states {}", names.join(" "));
    let init: Vec<&str> = a.initial_states().iter().map(|&s| names[s].as_str()).collect();
    let _ = writeln!(out, "  initial {}", init.join(" "));
    let acc: Vec<&str> = a.accepting_states().map(|s| names[s].as_str()).collect();
    let _ = writeln!(out, "  accept {}", acc.join(" "));
    for s in 0..a.state_count() {
        for e in a.edges(s) {
            let label = e.label.map_or(EPSILON, |l| a.alphabet().letter(l).as_str());
            let _ = writeln!(out, "  trans {} {} {}", names[s], label, names[e.target]);
        }
    }
    out.push_str("end\n\n");
    out.replace(" \n", "\n")
}

fn join<T: std::fmt::Display>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

pub fn render_group(name: &str, def: &GroupDef) -> String {
    let mut out = String::new();
    match def {
        GroupDef::Perm { degree, gens } => {
            let _ = writeln!(out, "group {name} perm degree {degree}");
            for (l, p) in gens {
                let _ = writeln!(out, "  gen {l} = {}", p.cycle_notation());
            }
        }
        GroupDef::Matrix { dim, gens } => {
            let _ = writeln!(out, "group {name} matrix dim {dim}");
            for (l, m) in gens {
                let rows: Vec<String> = m.iter().map(|r| format!("[{}]", join(r))).collect();
                let _ = writeln!(out, "  gen {l} = [{}]", rows.join(","));
            }
        }
        GroupDef::Zk { rank, gens } => {
            let _ = writeln!(out, "group {name} zk rank {rank}");
            for (l, v) in gens {
                let _ = writeln!(out, "  gen {l} = [{}]", join(v));
            }
        }
        GroupDef::Free { names } => {
            let _ = writeln!(out, "group {name} free rank {}", names.len());
            for n in names {
                let _ = writeln!(out, "  gen {n}");
            }
        }
        GroupDef::GraphProduct { vertices, edges, uses } => {
            let _ = writeln!(out, "group {name} graphproduct");
            let _ = writeln!(out, "  vertices {}", vertices.join(" "));
            for (a, b) in edges {
                let _ = writeln!(out, "  edge {a} {b}");
            }
            for (v, g) in vertices.iter().zip(uses) {
                let _ = writeln!(out, "  vertex {v} uses {g}");
            }
        }
    }
    out.push_str("end\n\n");
    out
}

pub fn render_table(name: &str, t: &TableEntry) -> String {
    let tb = &t.table;
    let mut out = format!("cosettable {name} group {} subgroupof {}\n", t.group, tb.index());
    for c in 0..tb.index() {
        let _ = writeln!(out, "  coset {} rep {}", tb.name(c), tb.transversal(c));
    }
    for c in 0..tb.index() {
        for x in tb.alphabet().iter() {
            let d = tb.act(c, x).expect("total action");
            let _ = writeln!(out, "  action {} {x} {}", tb.name(c), tb.name(d));
        }
    }
    out.push_str("end\n\n");
    out
}

pub fn render_demo(name: &str, d: &DemoDef) -> String {
    let mut out = format!("demonstration {name}\n  group {}\n", d.group);
    for (l, w) in &d.letters {
        let _ = writeln!(out, "  letter {l} = {w}");
    }
    let _ = writeln!(out, "  automaton {}", d.automaton);
    if let Some(t) = &d.subgroup {
        let _ = writeln!(out, "  subgroup {t}");
    }
    out.push_str("end\n\n");
    out
}

pub fn render_presentation(name: &str, p: &Presentation) -> String {
    let gens: Vec<&str> = p.generators().iter().map(|l| l.as_str()).collect();
    let mut out = format!("presentation {name}\n  alphabet {}\n", gens.join(" "));
    for r in p.relators() {
        let _ = writeln!(out, "  relator {r}");
    }
    out.push_str("end\n\n");
    out
}
