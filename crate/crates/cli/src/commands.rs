//! Command dispatch. Every command yields a list of records, each with a
//! human-readable line and a JSON object.

use artin_morse::bar::{self, Grade};
use artin_morse::coxeter::{CoxeterError, CoxeterSystem, Gen, GenSet};
use artin_morse::homology::{abelianized_presentation_h1, homology_groups, HomologyError, HomologyGroup};
use artin_morse::matching::{self, MatchingError};
use artin_morse::monoid::{ArtinMonoid, Lcm, MonElem, MonoidError};
use artin_morse::morse::{self, Letter, MorseError};
use artin_morse::salvetti::{self, SalvettiError};
use serde_json::{json, Value};
use thiserror::Error;

use crate::system_file::SystemFileError;

/// Largest `max l(Delta_T)` for which `homology --verify` also builds the
/// truncated bar complex.
const VERIFY_MAX_LENGTH: usize = 6;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    System(#[from] SystemFileError),
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error(transparent)]
    Monoid(#[from] MonoidError),
    #[error(transparent)]
    Matching(#[from] MatchingError),
    #[error(transparent)]
    Morse(#[from] MorseError),
    #[error(transparent)]
    Salvetti(#[from] SalvettiError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error("{0}")]
    Usage(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "io",
            CliError::System(SystemFileError::Parse { .. }) => "parse_error",
            CliError::System(SystemFileError::ConflictingEntry { .. }) => "conflicting_entry",
            CliError::System(SystemFileError::UnknownGenerator { .. }) => "unknown_generator",
            CliError::System(SystemFileError::Matrix(e)) | CliError::Coxeter(e) => coxeter_code(e),
            CliError::Monoid(e) => monoid_code(e),
            CliError::Matching(MatchingError::NotMu1Essential(_)) => "not_mu1_essential",
            CliError::Matching(MatchingError::NotFiniteType(_)) => "infinite_type",
            CliError::Matching(MatchingError::Monoid(e)) => monoid_code(e),
            CliError::Matching(MatchingError::Audit(_)) => "audit_failed",
            CliError::Morse(MorseError::InfiniteM(..)) | CliError::Salvetti(SalvettiError::InfiniteM(..)) => "infinite_m",
            CliError::Morse(MorseError::NonAcyclicInput(_)) => "non_acyclic",
            CliError::Morse(MorseError::IrregularMatch(..)) => "irregular_match",
            CliError::Morse(MorseError::NotEssential(_)) => "not_essential",
            CliError::Morse(MorseError::Matching(_)) => "matching_error",
            CliError::Morse(MorseError::Homology(_)) | CliError::Salvetti(SalvettiError::Homology(_)) | CliError::Homology(_) => {
                "not_a_complex"
            }
            CliError::Salvetti(SalvettiError::InfiniteType) => "infinite_type",
            CliError::Salvetti(SalvettiError::CheckFailed(_)) => "check_failed",
            CliError::Salvetti(SalvettiError::Coxeter(e)) => coxeter_code(e),
            CliError::Usage(_) => "usage",
            CliError::Verification(_) => "verification_failed",
        }
    }

    /// 2 for failed audits and verifications, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self.code() {
            "audit_failed" | "check_failed" | "verification_failed" | "non_acyclic" | "irregular_match" | "not_a_complex" => 2,
            _ => 1,
        }
    }
}

fn coxeter_code(e: &CoxeterError) -> &'static str {
    match e {
        CoxeterError::UnknownGenerator(_) => "unknown_generator",
        CoxeterError::InfiniteType(_) => "infinite_type",
        _ => "bad_matrix",
    }
}

fn monoid_code(e: &MonoidError) -> &'static str {
    match e {
        MonoidError::Coxeter(e) => coxeter_code(e),
        MonoidError::Undecided { .. } => "undecided",
        MonoidError::NotAChain => "not_a_chain",
        MonoidError::EmptySet => "empty_set",
        MonoidError::Internal(_) => "internal",
    }
}

/// One output record.
#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub text: String,
    pub json: Value,
}

fn record(text: impl Into<String>, json: Value) -> Record {
    Record { text: text.into(), json }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    fn name(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    Nf { word: String },
    Delta { set: Vec<String> },
    Lcm { words: Vec<String>, side: Side },
    Gcd { words: Vec<String>, side: Side },
    Divides { x: String, y: String, side: Side },
    Sf,
    MorseCells,
    Homology { verify: bool },
    MatchingAudit { max_len: usize },
    SalvettiStats,
    Boundary2 { s: String, t: String },
}

pub struct Context<'a> {
    pub sys: &'a CoxeterSystem,
    pub lcm_bound: usize,
}

fn set_names(sys: &CoxeterSystem, t: GenSet) -> Value {
    json!(t.iter().map(|g| sys.name(g)).collect::<Vec<_>>())
}

fn parse_elems(monoid: &ArtinMonoid, words: &[String]) -> Result<Vec<MonElem>, CliError> {
    words.iter().map(|w| monoid.parse(w).map_err(CliError::from)).collect()
}

fn format_letters(sys: &CoxeterSystem, word: &[Letter]) -> String {
    word.iter()
        .map(|l| if l.inverse { format!("{}^-1", sys.name(l.gen)) } else { sys.name(l.gen).to_string() })
        .collect::<Vec<_>>()
        .join(" ")
}

fn letters_json(sys: &CoxeterSystem, word: &[Letter]) -> Value {
    json!(word.iter().map(|l| json!([sys.name(l.gen), if l.inverse { -1 } else { 1 }])).collect::<Vec<_>>())
}

fn homology_json(h: &[HomologyGroup]) -> Value {
    json!(h
        .iter()
        .map(|g| json!({"rank": g.rank, "torsion": g.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>()}))
        .collect::<Vec<_>>())
}

fn trimmed(h: &[HomologyGroup]) -> Vec<HomologyGroup> {
    let mut v = h.to_vec();
    while v.last().is_some_and(HomologyGroup::is_zero) {
        v.pop();
    }
    v
}

pub fn run(ctx: &Context, cmd: &Command) -> Result<Vec<Record>, CliError> {
    let sys = ctx.sys;
    let monoid = ArtinMonoid::new(sys);
    match cmd {
        Command::Nf { word } => {
            let x = monoid.parse(word)?;
            let nf = monoid.normal_form(&x)?;
            // Product order: Delta_{T_k} ... Delta_{T_1}.
            let sets: Vec<GenSet> = nf.parts.iter().rev().copied().collect();
            let factors: Vec<String> =
                sets.iter().map(|&t| monoid.delta(t).map(|d| monoid.format(&d))).collect::<Result<_, _>>()?;
            let text = if sets.is_empty() {
                "1".to_string()
            } else {
                sets.iter().map(|&t| format!("D{}", sys.format_set(t))).collect::<Vec<_>>().join(" ")
            };
            Ok(vec![record(
                format!("{text}  = {}", if factors.is_empty() { "1".to_string() } else { factors.join(".") }),
                json!({
                    "command": "nf",
                    "input": monoid.format(&x),
                    "sets": sets.iter().map(|&t| set_names(sys, t)).collect::<Vec<_>>(),
                    "factors": factors,
                }),
            )])
        }
        Command::Delta { set } => {
            let t = sys.parse_set(&set.join(","))?;
            let d = monoid.delta(t)?;
            Ok(vec![record(
                monoid.format(&d),
                json!({"command": "delta", "set": set_names(sys, t), "delta": monoid.format(&d), "length": d.length()}),
            )])
        }
        Command::Lcm { words, side } => {
            let elems = parse_elems(&monoid, words)?;
            let lcm = match side {
                Side::Left => monoid.left_lcm(&elems, ctx.lcm_bound)?,
                Side::Right => monoid.right_lcm(&elems, ctx.lcm_bound)?,
            };
            let value = match &lcm {
                Lcm::Found(x) => Some(monoid.format(x)),
                Lcm::None => None,
            };
            Ok(vec![record(
                value.clone().unwrap_or_else(|| "none".into()),
                json!({"command": "lcm", "side": side.name(), "lcm": value}),
            )])
        }
        Command::Gcd { words, side } => {
            let elems = parse_elems(&monoid, words)?;
            let g = match side {
                Side::Left => monoid.left_gcd(&elems)?,
                Side::Right => monoid.right_gcd(&elems)?,
            };
            Ok(vec![record(monoid.format(&g), json!({"command": "gcd", "side": side.name(), "gcd": monoid.format(&g)}))])
        }
        Command::Divides { x, y, side } => {
            let (x, y) = (monoid.parse(x)?, monoid.parse(y)?);
            let quotient = match side {
                Side::Left => monoid.left_quotient(&x, &y),
                Side::Right => monoid.right_quotient(&y, &x),
            };
            let q = quotient.as_ref().map(|q| monoid.format(q));
            let text = match &q {
                Some(q) => format!("true  (quotient {q})"),
                None => "false".into(),
            };
            Ok(vec![record(text, json!({"command": "divides", "side": side.name(), "divides": q.is_some(), "quotient": q}))])
        }
        Command::Sf => sys
            .sf_enumerate()
            .into_iter()
            .map(|t| {
                let d = monoid.delta(t)?;
                Ok(record(
                    format!("{}  dim {}  Delta = {}", sys.format_set(t), t.len(), monoid.format(&d)),
                    json!({"command": "sf", "set": set_names(sys, t), "dim": t.len(), "delta": monoid.format(&d)}),
                ))
            })
            .collect(),
        Command::MorseCells => {
            let y = morse::y_complex(&monoid)?;
            let mut out = Vec::new();
            for (sets, cells) in y.sets.iter().zip(&y.cells) {
                for (t, c) in sets.iter().zip(cells) {
                    out.push(record(
                        format!("e{}  dim {}  length {}  cell {}", sys.format_set(*t), t.len(), c.length(), c.display(&monoid)),
                        json!({"command": "morse-cells", "set": set_names(sys, *t), "dim": t.len(),
                               "length": c.length(), "cell": c.display(&monoid)}),
                    ));
                }
            }
            let census = y.census();
            out.push(record(
                format!("census {}", census.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")),
                json!({"command": "morse-cells", "census": census}),
            ));
            Ok(out)
        }
        Command::Homology { verify } => homology(sys, &monoid, *verify),
        Command::MatchingAudit { max_len } => {
            let mut out = Vec::new();
            for length in 0..=*max_len {
                for flag in 0..=1 {
                    let g = Grade { length, flag };
                    let r = matching::audit_grade(&monoid, g)?;
                    out.push(record(
                        format!(
                            "grade ({length},{flag})  cells {}  edges {}  essential {}  ok",
                            r.summary.cells, r.summary.edges, r.summary.essential
                        ),
                        json!({"command": "matching-audit", "length": length, "flag": flag, "cells": r.summary.cells,
                               "edges": r.summary.edges, "essential": r.summary.essential, "ok": true}),
                    ));
                }
            }
            Ok(out)
        }
        Command::SalvettiStats => {
            let poset = salvetti::sal_poset(sys)?;
            salvetti::check_partial_order(sys, &poset)?;
            let orbits = salvetti::check_action(sys, &poset)?;
            for i in 0..poset.len() {
                salvetti::cell_pair_check(sys, &poset, i)?;
            }
            let census = poset.census();
            let quotient = salvetti::quotient_census(sys);
            Ok(vec![
                record(
                    format!("cells {}  by dimension {:?}", poset.len(), census),
                    json!({"command": "salvetti-stats", "cells": poset.len(), "census": census}),
                ),
                record("partial order ok", json!({"command": "salvetti-stats", "partial_order": true})),
                record(
                    format!("free W-action ok  orbits {orbits:?}"),
                    json!({"command": "salvetti-stats", "free_action": true, "orbits": orbits}),
                ),
                record(
                    format!("cell pair checks ok ({})", poset.len()),
                    json!({"command": "salvetti-stats", "pair_checks": poset.len()}),
                ),
                record(format!("quotient census {quotient:?}"), json!({"command": "salvetti-stats", "quotient_census": quotient})),
            ])
        }
        Command::Boundary2 { s, t } => {
            let (s, t) = (sys.gen_by_name(s)?, sys.gen_by_name(t)?);
            boundary2(sys, &monoid, s, t)
        }
    }
}

fn boundary2(sys: &CoxeterSystem, monoid: &ArtinMonoid, s: Gen, t: Gen) -> Result<Vec<Record>, CliError> {
    let word = morse::boundary_word_2cell(monoid, s, t)?;
    let m = sys.m(s, t).finite().expect("boundary word needs finite m");
    let expected = morse::expected_boundary_word(s, t, m);
    let ok = morse::same_cyclic_word(&word, &expected);
    let rec = record(
        format!("{}  expected {}  {}", format_letters(sys, &word), format_letters(sys, &expected), if ok { "match" } else { "MISMATCH" }),
        json!({"command": "boundary2", "m": m, "word": letters_json(sys, &word),
               "expected": letters_json(sys, &expected), "match": ok}),
    );
    if !ok {
        return Err(CliError::Verification(rec.text));
    }
    Ok(vec![rec])
}

fn homology(sys: &CoxeterSystem, monoid: &ArtinMonoid, verify: bool) -> Result<Vec<Record>, CliError> {
    let y = morse::y_complex(monoid)?;
    let h = homology_groups(&y.complex)?;
    let mut out: Vec<Record> = h
        .iter()
        .enumerate()
        .map(|(k, g)| record(format!("H_{k} = {g}"), json!({"command": "homology", "degree": k, "group": g.to_string(), "rank": g.rank,
                "torsion": g.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>()})))
        .collect();
    if !verify {
        return Ok(out);
    }
    let check = |name: &str, ok: bool, detail: String| -> Result<Record, CliError> {
        if ok {
            Ok(record(format!("verify {name} ok"), json!({"command": "homology", "check": name, "ok": true})))
        } else {
            Err(CliError::Verification(format!("{name}: {detail}")))
        }
    };
    out.push(check("boundary_squared", y.complex.verify().is_ok(), "d o d != 0".into())?);
    out.push(check("h0", h.first() == Some(&HomologyGroup::free(1)), format!("H_0 = {:?}", h.first()))?);
    let predicted = abelianized_presentation_h1(sys);
    let h1 = h.get(1).cloned().unwrap_or_default();
    out.push(check("h1_presentation", h1 == predicted, format!("H_1 = {h1}, presentation gives {predicted}"))?);
    let n = morse::max_essential_length(monoid)?;
    if n <= VERIFY_MAX_LENGTH {
        let z = bar::truncated_complex(monoid, n)?;
        let hz = homology_groups(&z.complex)?;
        let ok = trimmed(&hz) == trimmed(&h);
        let mut r = check("bar_truncation", ok, format!("bar complex up to length {n} gives {:?}", trimmed(&hz)))?;
        r.json["max_length"] = json!(n);
        r.json["bar_homology"] = homology_json(&hz);
        out.push(r);
    } else {
        out.push(record(
            format!("verify bar_truncation skipped (length {n} > {VERIFY_MAX_LENGTH})"),
            json!({"command": "homology", "check": "bar_truncation", "skipped": true, "max_length": n}),
        ));
    }
    Ok(out)
}
