//! Line-oriented text format for gamblers, description modes and processes.
//!
//! ```text
//! # comment
//! [automaton]
//! kind = gambler            # gambler | mode | process
//! lookahead = 1             # gambler only
//! valence = 2               # mode only
//!
//! [states]
//! s0 start                  # one name per line; `start` marks the start
//! s1
//!
//! [bet]                     # gambler: state window q next0 next1
//! s0 01 1/2 s0 s1
//!
//! [edges]                   # mode: from to io p, io = "ab" or "-", p = 0|1|-
//! s0 s1 10 -
//!
//! [emit]                    # process: state inbit q=num/den next0=s next1=s
//! s0 1 q=1/3 next0=s0 next1=s1
//! ```
//!
//! Any field of a `[bet]` line may be `-` to leave it undefined, so partial
//! gamblers can be written and then rejected by validation. Without a
//! `start` marker the first state is the start.

use std::collections::HashMap;

use crate::apriori::ProbProcess;
use crate::autocomplexity::{DescriptionMode, Edge};
use crate::gambler::GamblerSpec;
use crate::ratio::{format_rational, parse_rational, Rational};
use crate::{BitString, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Automaton {
    Gambler(GamblerSpec),
    Mode(DescriptionMode),
    Process(ProbProcess),
}

impl Automaton {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Gambler(_) => "gambler",
            Self::Mode(_) => "mode",
            Self::Process(_) => "process",
        }
    }
}

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

struct Parsed {
    header: HashMap<String, (usize, String)>,
    states: Vec<String>,
    start: Option<usize>,
    body: Vec<(usize, String, Vec<String>)>,
}

fn split_sections(text: &str) -> Result<Parsed> {
    let mut section = String::new();
    let mut parsed = Parsed {
        header: HashMap::new(),
        states: Vec::new(),
        start: None,
        body: Vec::new(),
    };
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            section = name.trim().to_string();
            if !["automaton", "states", "bet", "edges", "emit"].contains(&section.as_str()) {
                return Err(perr(ln, format!("unknown section [{section}]")));
            }
            continue;
        }
        let fields: Vec<String> = line.split_whitespace().map(str::to_string).collect();
        match section.as_str() {
            "" => return Err(perr(ln, "content before the first section")),
            "automaton" => {
                let (k, v) = line
                    .split_once('=')
                    .ok_or_else(|| perr(ln, "expected key = value"))?;
                let key = k.trim().to_string();
                if parsed
                    .header
                    .insert(key.clone(), (ln, v.trim().to_string()))
                    .is_some()
                {
                    return Err(perr(ln, format!("duplicate key {key}")));
                }
            }
            "states" => {
                let name = fields[0].clone();
                match fields.get(1).map(String::as_str) {
                    None => {}
                    Some("start") if fields.len() == 2 => {
                        if parsed.start.replace(parsed.states.len()).is_some() {
                            return Err(perr(ln, "more than one start state"));
                        }
                    }
                    Some(_) => return Err(perr(ln, "expected a state name and optional `start`")),
                }
                if parsed.states.contains(&name) {
                    return Err(perr(ln, format!("duplicate state {name}")));
                }
                parsed.states.push(name);
            }
            s => parsed.body.push((ln, s.to_string(), fields)),
        }
    }
    Ok(parsed)
}

fn header_usize(p: &Parsed, key: &str) -> Result<Option<usize>> {
    match p.header.get(key) {
        None => Ok(None),
        Some((ln, v)) => v
            .parse()
            .map(Some)
            .map_err(|_| perr(*ln, format!("{key} must be a non-negative integer"))),
    }
}

fn lookup(index: &HashMap<&str, usize>, name: &str, ln: usize) -> Result<usize> {
    index
        .get(name)
        .copied()
        .ok_or_else(|| perr(ln, format!("unknown state {name}")))
}

fn optional(s: &str) -> Option<&str> {
    (s != "-").then_some(s)
}

fn parse_bit(s: &str, ln: usize) -> Result<u8> {
    match s {
        "0" => Ok(0),
        "1" => Ok(1),
        _ => Err(perr(ln, format!("expected a bit, found {s:?}"))),
    }
}

fn parse_q(s: &str, ln: usize) -> Result<Rational> {
    parse_rational(s).ok_or_else(|| perr(ln, format!("bad rational {s:?}")))
}

/// Parses any of the three automaton kinds.
pub fn parse_automaton(text: &str) -> Result<Automaton> {
    let p = split_sections(text)?;
    let (kind_line, kind) = p
        .header
        .get("kind")
        .cloned()
        .ok_or_else(|| perr(1, "missing `kind` in [automaton]"))?;
    if p.states.is_empty() {
        return Err(perr(1, "no states"));
    }
    let index: HashMap<&str, usize> = p
        .states
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();
    let start = p.start.unwrap_or(0);
    let expect_section = |want: &str| -> Result<()> {
        match p.body.iter().find(|(_, s, _)| s != want) {
            Some((ln, s, _)) => Err(perr(
                *ln,
                format!("section [{s}] does not belong to a {kind}"),
            )),
            None => Ok(()),
        }
    };
    match kind.as_str() {
        "gambler" => {
            expect_section("bet")?;
            let c = header_usize(&p, "lookahead")?.unwrap_or(0);
            let mut g = GamblerSpec::new(p.states.clone(), start, c)
                .map_err(|e| perr(kind_line, e.to_string()))?;
            let mut seen = std::collections::HashSet::new();
            for (ln, _, f) in &p.body {
                if f.len() != 5 {
                    return Err(perr(*ln, "expected: state window q next0 next1"));
                }
                let s = lookup(&index, &f[0], *ln)?;
                let w: BitString = f[1]
                    .parse()
                    .map_err(|_| perr(*ln, "window must be a bit string"))?;
                if w.len() != c + 1 {
                    return Err(perr(*ln, format!("window must have {} bits", c + 1)));
                }
                if !seen.insert((s, w.code())) {
                    return Err(perr(*ln, "duplicate rule"));
                }
                if let Some(q) = optional(&f[2]) {
                    g.set_stake(s, w.code(), parse_q(q, *ln)?);
                }
                for bit in 0..2u8 {
                    if let Some(n) = optional(&f[3 + bit as usize]) {
                        g.set_next(s, w.code(), bit, lookup(&index, n, *ln)?);
                    }
                }
            }
            Ok(Automaton::Gambler(g))
        }
        "mode" => {
            expect_section("edges")?;
            let valence = header_usize(&p, "valence")?
                .ok_or_else(|| perr(kind_line, "mode needs `valence`"))?;
            let mut edges = Vec::new();
            for (ln, _, f) in &p.body {
                if f.len() != 4 {
                    return Err(perr(*ln, "expected: from to io p"));
                }
                let io = match optional(&f[2]) {
                    None => None,
                    Some(s) if s.len() == 2 => {
                        Some((parse_bit(&s[..1], *ln)?, parse_bit(&s[1..], *ln)?))
                    }
                    Some(s) => {
                        return Err(perr(*ln, format!("io must be two bits or -, found {s:?}")))
                    }
                };
                let bit = optional(&f[3]).map(|s| parse_bit(s, *ln)).transpose()?;
                edges.push(Edge::new(
                    lookup(&index, &f[0], *ln)?,
                    lookup(&index, &f[1], *ln)?,
                    io,
                    bit,
                ));
            }
            DescriptionMode::new(p.states.clone(), edges, valence)
                .map(Automaton::Mode)
                .map_err(|e| perr(kind_line, e.to_string()))
        }
        "process" => {
            expect_section("emit")?;
            let mut m = ProbProcess::new(p.states.clone(), start)
                .map_err(|e| perr(kind_line, e.to_string()))?;
            for (ln, _, f) in &p.body {
                if f.len() != 5 {
                    return Err(perr(*ln, "expected: state inbit q=n/d next0=s next1=s"));
                }
                let s = lookup(&index, &f[0], *ln)?;
                let b = parse_bit(&f[1], *ln)?;
                if m.emit(s, b).is_some() {
                    return Err(perr(*ln, "duplicate rule"));
                }
                let field = |i: usize, key: &str| {
                    f[i].strip_prefix(key)
                        .and_then(|r| r.strip_prefix('='))
                        .ok_or_else(|| perr(*ln, format!("expected {key}=...")))
                };
                let q = parse_q(field(2, "q")?, *ln)?;
                let n0 = lookup(&index, field(3, "next0")?, *ln)?;
                let n1 = lookup(&index, field(4, "next1")?, *ln)?;
                m.set_emit(s, b, q, n0, n1);
            }
            Ok(Automaton::Process(m))
        }
        other => Err(perr(kind_line, format!("unknown kind {other:?}"))),
    }
}

fn write_states(out: &mut String, states: &[String], start: Option<usize>) {
    out.push_str("\n[states]\n");
    for (i, s) in states.iter().enumerate() {
        out.push_str(s);
        if Some(i) == start {
            out.push_str(" start");
        }
        out.push('\n');
    }
}

/// Canonical text form; `parse_automaton` inverts it.
pub fn to_text(a: &Automaton) -> String {
    let mut out = format!("[automaton]\nkind = {}\n", a.kind());
    match a {
        Automaton::Gambler(g) => {
            out.push_str(&format!("lookahead = {}\n", g.lookahead()));
            write_states(&mut out, g.states(), Some(g.start()));
            out.push_str("\n[bet]\n");
            let names = g.states();
            let name = |n: Option<usize>| n.map_or("-", |i| names[i].as_str()).to_string();
            for (s, state) in names.iter().enumerate() {
                for w in 0..g.num_windows() as u64 {
                    let q = g.stake(s, w).map_or("-".to_string(), format_rational);
                    out.push_str(&format!(
                        "{} {} {} {} {}\n",
                        state,
                        BitString::from_code(w, g.lookahead() + 1),
                        q,
                        name(g.next_state(s, w, 0)),
                        name(g.next_state(s, w, 1))
                    ));
                }
            }
        }
        Automaton::Mode(d) => {
            out.push_str(&format!("valence = {}\n", d.declared_valence()));
            write_states(&mut out, d.vertices(), None);
            out.push_str("\n[edges]\n");
            let names = d.vertices();
            for e in d.edges() {
                let io = e.io.map_or("-".to_string(), |(a, b)| format!("{a}{b}"));
                let p = e.p.map_or("-".to_string(), |p| p.to_string());
                out.push_str(&format!("{} {} {} {}\n", names[e.from], names[e.to], io, p));
            }
        }
        Automaton::Process(m) => {
            write_states(&mut out, m.states(), Some(m.start()));
            out.push_str("\n[emit]\n");
            let names = m.states();
            for s in 0..m.num_states() {
                for b in 0..2u8 {
                    if let Some(e) = m.emit(s, b) {
                        out.push_str(&format!(
                            "{} {} q={} next0={} next1={}\n",
                            names[s],
                            b,
                            format_rational(&e.q),
                            names[e.next[0]],
                            names[e.next[1]]
                        ));
                    }
                }
            }
        }
    }
    out
}

pub fn read_automaton(path: impl AsRef<std::path::Path>) -> Result<Automaton> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_automaton(&text)
}
