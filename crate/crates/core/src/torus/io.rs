//! The plain-text grid format: a header line `"m n"`, then `m` lines of exactly
//! `n` characters from `{0,1}`, every line terminated by LF, nothing after.

use super::grid::{Cell, TorusConfig};
use crate::error::{Error, Result};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_dim(s: &str, line: usize) -> Result<usize> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(parse_err(line, format!("bad dimension {s:?}")));
    }
    s.parse().map_err(|_| parse_err(line, format!("bad dimension {s:?}")))
}

/// Parses a grid, rejecting anything outside the format.
pub fn parse_grid(text: &str) -> Result<TorusConfig> {
    let body = text.strip_suffix('\n').ok_or_else(|| parse_err(1, "missing final LF"))?;
    let mut lines = body.split('\n');
    let header = lines.next().unwrap_or_default();
    let (ms, ns) = header.split_once(' ').ok_or_else(|| parse_err(1, "header must be \"m n\""))?;
    let (m, n) = (parse_dim(ms, 1)?, parse_dim(ns, 1)?);
    let mut sigma = TorusConfig::zeros(m, n).map_err(|e| parse_err(1, e.to_string()))?;
    let mut rows = 0;
    for (i, line) in lines.enumerate() {
        if i >= m {
            return Err(parse_err(i + 2, "trailing content after last row"));
        }
        if line.len() != n {
            return Err(parse_err(i + 2, format!("expected {n} columns, found {}", line.len())));
        }
        for (j, b) in line.bytes().enumerate() {
            match b {
                b'0' => {}
                b'1' => sigma.set(Cell::new(i, j), true),
                _ => return Err(parse_err(i + 2, format!("bad character {:?}", b as char))),
            }
        }
        rows += 1;
    }
    if rows != m {
        return Err(parse_err(rows + 2, format!("expected {m} rows, found {rows}")));
    }
    Ok(sigma)
}

pub fn format_grid(sigma: &TorusConfig) -> String {
    let mut s = String::with_capacity((sigma.n() + 1) * (sigma.m() + 1) + 16);
    s.push_str(&format!("{} {}\n", sigma.m(), sigma.n()));
    for i in 0..sigma.m() {
        s.push_str(&sigma.row_string(i));
        s.push('\n');
    }
    s
}
