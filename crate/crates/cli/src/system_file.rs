//! Coxeter matrix files.
//!
//! ```text
//! # comment
//! gens: a b c
//! m a b 3
//! m b c inf
//! ```
//!
//! Pairs without an `m` line commute (`m = 2`).

use std::collections::HashMap;

use artin_morse::coxeter::{CoxeterError, CoxeterSystem};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SystemFileError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: m({s}, {t}) already given on line {first}")]
    ConflictingEntry { line: usize, first: usize, s: String, t: String },
    #[error("line {line}: unknown generator {name:?}")]
    UnknownGenerator { line: usize, name: String },
    #[error(transparent)]
    Matrix(#[from] CoxeterError),
}

fn parse_err(line: usize, message: impl Into<String>) -> SystemFileError {
    SystemFileError::Parse { line, message: message.into() }
}

pub fn parse_system_file(text: &str) -> Result<CoxeterSystem, SystemFileError> {
    let mut names: Option<Vec<String>> = None;
    let mut entries: Vec<(usize, usize, Option<i64>)> = Vec::new();
    let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some(rest) = body.strip_prefix("gens:") {
            if names.is_some() {
                return Err(parse_err(line, "generators declared twice"));
            }
            let gens: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
            names = Some(gens);
            continue;
        }
        let Some(gens) = names.as_ref() else {
            return Err(parse_err(line, "expected `gens:` before any other line"));
        };
        let tokens: Vec<&str> = body.split_whitespace().collect();
        if tokens[0] != "m" {
            return Err(parse_err(line, format!("unrecognised line {body:?}")));
        }
        let [_, s, t, v] = tokens[..] else {
            return Err(parse_err(line, "expected `m <s> <t> <value>`"));
        };
        let index = |name: &str| {
            gens.iter()
                .position(|g| g == name)
                .ok_or_else(|| SystemFileError::UnknownGenerator { line, name: name.to_string() })
        };
        let (i, j) = (index(s)?, index(t)?);
        let value = if v == "inf" {
            None
        } else {
            Some(v.parse::<i64>().map_err(|_| parse_err(line, format!("bad value {v:?}, expected an integer or inf")))?)
        };
        let key = (i.min(j), i.max(j));
        if let Some(&first) = seen.get(&key) {
            return Err(SystemFileError::ConflictingEntry { line, first, s: s.into(), t: t.into() });
        }
        seen.insert(key, line);
        entries.push((i, j, value));
    }
    let names = names.ok_or_else(|| parse_err(0, "missing `gens:` line"))?;
    let n = names.len();
    let mut matrix: Vec<Vec<Option<i64>>> =
        (0..n).map(|i| (0..n).map(|j| Some(if i == j { 1 } else { 2 })).collect()).collect();
    for (i, j, v) in entries {
        matrix[i][j] = v;
        matrix[j][i] = v;
    }
    Ok(CoxeterSystem::from_matrix(names, matrix)?)
}
