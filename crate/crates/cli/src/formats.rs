//! File formats: presentation text, `agraph v1`, and the JSON/CSV reports.

use std::fmt::Write as _;

use genacc_core::agraph::{canonical_form, AGraph, Edge};
use genacc_core::cancel::Presentation;
use genacc_core::chains::ChainReport;
use genacc_core::generic::{GenericityParams, GenericityStats};
use genacc_core::words::{Letter, Word};
use genacc_core::Rational;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Parses a word; `1` and the empty string denote the identity.
pub fn parse_word(s: &str, m: usize) -> Result<Word, CliError> {
    let t = s.trim();
    if t.is_empty() || t == "1" {
        return Ok(Word::empty());
    }
    Word::parse(t, m).map_err(|e| CliError::Usage(format!("word {t:?}: {e}")))
}

pub fn format_word(w: &Word) -> String {
    if w.is_empty() {
        "1".into()
    } else {
        w.to_string()
    }
}

/// Exact rational from `p/q`, an integer, or a terminating decimal.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let t = s.trim();
    let bad = || format!("{t:?} is not a rational (use p/q)");
    if let Some((int, frac)) = t.split_once('.') {
        if frac.is_empty() || frac.len() > 15 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = int.starts_with('-');
        let whole: i64 = if int.is_empty() || int == "-" {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let den = 10i64.pow(frac.len() as u32);
        let num: i64 = frac.parse().map_err(|_| bad())?;
        let num = whole.abs() * den + num;
        return Ok(Rational::new(if neg { -num } else { num }, den));
    }
    match t.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => t
            .parse::<i64>()
            .map(Rational::from_integer)
            .map_err(|_| bad()),
    }
}

pub fn format_rational(r: Rational) -> String {
    r.to_string()
}

fn parse_err(path: &str, line: usize, col: usize, msg: impl Into<String>) -> CliError {
    CliError::Parse {
        path: path.into(),
        line,
        col,
        msg: msg.into(),
    }
}

/// Presentation text: an `m=<int>` header, then one relator per line.
/// `#` starts a comment; blank lines are ignored.
pub fn parse_presentation(text: &str, path: &str) -> Result<Presentation, CliError> {
    let mut m = None;
    let mut relators = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let Some(m) = m else {
            let t = body.trim();
            let col = raw.find(|c: char| !c.is_whitespace()).unwrap_or(0) + 1;
            let value = t
                .strip_prefix("m")
                .map(str::trim_start)
                .and_then(|s| s.strip_prefix('='))
                .ok_or_else(|| parse_err(path, line_no, col, "expected header `m=<rank>`"))?;
            let rank: usize = value.trim().parse().map_err(|_| {
                parse_err(path, line_no, col, format!("bad rank {:?}", value.trim()))
            })?;
            if !(2..=26).contains(&rank) {
                return Err(parse_err(
                    path,
                    line_no,
                    col,
                    format!("rank must be between 2 and 26, got {rank}"),
                ));
            }
            m = Some(rank);
            continue;
        };
        let mut letters: Vec<(Letter, usize)> = Vec::new();
        for (c_idx, c) in body.chars().enumerate() {
            let col = c_idx + 1;
            if c.is_whitespace() {
                continue;
            }
            let l = Letter::from_char(c)
                .map_err(|_| parse_err(path, line_no, col, format!("invalid character {c:?}")))?;
            if l.generator() >= m {
                return Err(parse_err(
                    path,
                    line_no,
                    col,
                    format!("letter {c:?} is outside the alphabet of rank {m}"),
                ));
            }
            if letters.last().is_some_and(|&(p, _)| p == l.inverse()) {
                return Err(parse_err(
                    path,
                    line_no,
                    col,
                    "relator is not freely reduced",
                ));
            }
            letters.push((l, col));
        }
        if letters.len() >= 2 && letters[0].0 == letters[letters.len() - 1].0.inverse() {
            return Err(parse_err(
                path,
                line_no,
                letters[letters.len() - 1].1,
                "relator is not cyclically reduced",
            ));
        }
        relators.push(Word::reduce_from(letters.into_iter().map(|(l, _)| l)));
    }
    let m = m.ok_or_else(|| parse_err(path, 1, 1, "missing header `m=<rank>`"))?;
    Ok(Presentation::new(m, relators)?)
}

pub fn write_presentation(p: &Presentation, comment: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(c) = comment {
        for line in c.lines() {
            let _ = writeln!(out, "# {line}");
        }
    }
    let _ = writeln!(out, "m={}", p.rank());
    for r in p.relators() {
        let _ = writeln!(out, "{r}");
    }
    out
}

/// Reads an `agraph v1` block: header `agraph v1 m=<m> base=<b>`, then
/// `<from> <to> <label>` lines with lowercase labels.
pub fn parse_agraph(text: &str, path: &str) -> Result<AGraph, CliError> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines
        .next()
        .ok_or_else(|| parse_err(path, 1, 1, "empty agraph"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let bad_header = || parse_err(path, 1, 1, "expected `agraph v1 m=<m> base=<b>`");
    if fields.len() != 4 || fields[0] != "agraph" || fields[1] != "v1" {
        return Err(bad_header());
    }
    let m: usize = fields[2]
        .strip_prefix("m=")
        .and_then(|s| s.parse().ok())
        .ok_or_else(bad_header)?;
    let base: usize = fields[3]
        .strip_prefix("base=")
        .and_then(|s| s.parse().ok())
        .ok_or_else(bad_header)?;
    let mut edges = Vec::new();
    let mut n = base + 1;
    for (i, line) in lines {
        let parts: Vec<&str> = line.split_whitespace().collect();
        let bad = |msg: &str| parse_err(path, i + 1, 1, msg);
        if parts.len() != 3 {
            return Err(bad("expected `<from> <to> <label>`"));
        }
        let from: usize = parts[0].parse().map_err(|_| bad("bad vertex"))?;
        let to: usize = parts[1].parse().map_err(|_| bad("bad vertex"))?;
        let mut chars = parts[2].chars();
        let label = match (chars.next(), chars.next()) {
            (Some(c @ 'a'..='z'), None) => c,
            _ => return Err(bad("label must be a single lowercase letter")),
        };
        let gen = label as usize - 'a' as usize;
        if gen >= m {
            return Err(bad("label outside the alphabet"));
        }
        n = n.max(from + 1).max(to + 1);
        edges.push(Edge { from, to, gen });
    }
    Ok(AGraph::from_edges(m, n, edges, base)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsJson {
    pub m: usize,
    pub t: usize,
    pub k: usize,
    pub lambda: String,
    pub mu: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub density: Option<String>,
}

impl ParamsJson {
    pub fn from_params(gp: &GenericityParams) -> ParamsJson {
        ParamsJson {
            m: gp.m,
            t: gp.t,
            k: gp.k,
            lambda: format_rational(gp.lambda),
            mu: format_rational(gp.mu),
            density: gp.density.map(format_rational),
        }
    }

    pub fn to_params(&self) -> Result<GenericityParams, CliError> {
        let r = |s: &str| parse_rational(s).map_err(CliError::Usage);
        Ok(GenericityParams {
            m: self.m,
            t: self.t,
            k: self.k,
            lambda: r(&self.lambda)?,
            mu: r(&self.mu)?,
            density: self.density.as_deref().map(r).transpose()?,
        })
    }
}

pub fn relator_strings(p: &Presentation) -> Vec<String> {
    p.relators().iter().map(|r| r.to_string()).collect()
}

pub fn presentation_from_strings(m: usize, relators: &[String]) -> Result<Presentation, CliError> {
    let words = relators
        .iter()
        .map(|r| parse_word(r, m))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Presentation::new(m, words)?)
}

/// Stats table as CSV; clauses that were not evaluated leave empty cells.
pub fn stats_csv(stats: &GenericityStats) -> String {
    let mut out = String::from("n,samples,pass1,pass2,pass3,pass_all,indeterminate,ci_lo,ci_hi\n");
    let opt = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in &stats.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{:.6},{:.6}",
            r.n,
            r.samples,
            opt(r.pass1),
            opt(r.pass2),
            opt(r.pass3),
            r.pass_all,
            r.indeterminate,
            r.ci_lo,
            r.ci_hi
        );
    }
    out
}

#[derive(Serialize)]
struct StatsRowJson {
    n: usize,
    samples: u64,
    pass1: Option<u64>,
    pass2: Option<u64>,
    pass3: Option<u64>,
    pass_all: u64,
    indeterminate: u64,
    fraction: f64,
    ci_lo: f64,
    ci_hi: f64,
}

#[derive(Serialize)]
struct StatsJson<'a> {
    format: &'static str,
    params: ParamsJson,
    clauses: &'a [u8],
    seed: u64,
    rows: Vec<StatsRowJson>,
}

pub fn stats_json(
    stats: &GenericityStats,
    gp: &GenericityParams,
    clauses: &[u8],
    seed: u64,
) -> String {
    let rows = stats
        .rows
        .iter()
        .map(|r| StatsRowJson {
            n: r.n,
            samples: r.samples,
            pass1: r.pass1,
            pass2: r.pass2,
            pass3: r.pass3,
            pass_all: r.pass_all,
            indeterminate: r.indeterminate,
            fraction: r.fraction(),
            ci_lo: r.ci_lo,
            ci_hi: r.ci_hi,
        })
        .collect();
    to_json(&StatsJson {
        format: "stats v1",
        params: ParamsJson::from_params(gp),
        clauses,
        seed,
        rows,
    })
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct ChainStepJson {
    pub index: usize,
    pub generators: Vec<String>,
    pub strict: bool,
    pub finite_index: bool,
    pub graph: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct ChainJson {
    pub format: String,
    pub m: usize,
    pub k: usize,
    pub relators: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub params: Option<ParamsJson>,
    pub strategy: String,
    pub seed: u64,
    pub budget: usize,
    pub word_cap: usize,
    pub outcome: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reason: Option<String>,
    pub stabilization_index: Option<usize>,
    pub steps: Vec<ChainStepJson>,
}

impl ChainJson {
    pub fn from_report(c: &ChainReport, gp: Option<&GenericityParams>) -> ChainJson {
        ChainJson {
            format: "chain v1".into(),
            m: c.m,
            k: c.k,
            relators: c.relators.iter().map(format_word).collect(),
            params: gp.map(ParamsJson::from_params),
            strategy: c.strategy.name().into(),
            seed: c.seed,
            budget: c.budget,
            word_cap: c.word_cap,
            outcome: c.outcome.name().into(),
            reason: match &c.outcome {
                genacc_core::chains::Outcome::Indeterminate(r) => Some(r.clone()),
                _ => None,
            },
            stabilization_index: c.stabilization_index,
            steps: c
                .steps
                .iter()
                .map(|s| ChainStepJson {
                    index: s.index,
                    generators: s.generators.iter().map(format_word).collect(),
                    strict: s.strict,
                    finite_index: s.finite_index,
                    graph: s.canonical.clone(),
                })
                .collect(),
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report types serialize");
    s.push('\n');
    s
}

pub fn graph_block(g: &AGraph) -> Result<String, CliError> {
    Ok(canonical_form(g)?)
}
