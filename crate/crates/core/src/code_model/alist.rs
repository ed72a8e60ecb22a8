//! MacKay "alist" text format for sparse parity-check matrices.
//!
//! ```text
//! n m
//! max_col_weight max_row_weight
//! col weights (n values)
//! row weights (m values)
//! n lines of 1-based row indices, one line per column
//! m lines of 1-based column indices, one line per row
//! ```
//!
//! Lists shorter than the maximum weight are padded with zeros on write; the
//! reader accepts both padded and unpadded lists.

use std::fmt::Write as _;

use super::BinaryParityCheck;
use crate::error::{Error, Result};

fn join(values: impl Iterator<Item = usize>) -> String {
    values.map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn write_alist(h: &BinaryParityCheck) -> String {
    let max_col = h.col_weights().max().unwrap_or(0);
    let max_row = h.row_weights().max().unwrap_or(0);
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", h.col_count(), h.row_count());
    let _ = writeln!(out, "{max_col} {max_row}");
    let _ = writeln!(out, "{}", join(h.col_weights()));
    let _ = writeln!(out, "{}", join(h.row_weights()));
    for c in 0..h.col_count() {
        let col = h.col(c);
        let padded = col
            .iter()
            .map(|r| r + 1)
            .chain(std::iter::repeat(0))
            .take(max_col);
        let _ = writeln!(out, "{}", join(padded));
    }
    for r in 0..h.row_count() {
        let row = h.row(r);
        let padded = row
            .iter()
            .map(|c| c + 1)
            .chain(std::iter::repeat(0))
            .take(max_row);
        let _ = writeln!(out, "{}", join(padded));
    }
    out
}

fn numbers(line: &str) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|e| Error::Alist(format!("bad token {t:?}: {e}")))
        })
        .collect()
}

pub fn read_alist(text: &str) -> Result<BinaryParityCheck> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let mut next = |what: &str| -> Result<Vec<usize>> {
        let line = lines
            .next()
            .ok_or_else(|| Error::Alist(format!("missing {what}")))?;
        numbers(line)
    };

    let header = next("header")?;
    let [n, m] = header[..] else {
        return Err(Error::Alist("header must be `n m`".into()));
    };
    let maxima = next("maximum weights")?;
    if maxima.len() != 2 {
        return Err(Error::Alist(
            "second line must hold two maximum weights".into(),
        ));
    }
    let col_weights = next("column weights")?;
    let row_weights = next("row weights")?;
    if col_weights.len() != n || row_weights.len() != m {
        return Err(Error::Alist(
            "weight list lengths disagree with the header".into(),
        ));
    }

    let mut positions = Vec::new();
    for (c, &w) in col_weights.iter().enumerate() {
        let rows: Vec<usize> = next("column list")?
            .into_iter()
            .filter(|&r| r != 0)
            .collect();
        if rows.len() != w {
            return Err(Error::Alist(format!(
                "column {} lists {} rows, weight says {w}",
                c + 1,
                rows.len()
            )));
        }
        for r in rows {
            if r > m {
                return Err(Error::Alist(format!("row index {r} exceeds {m}")));
            }
            positions.push((r - 1, c));
        }
    }
    let h = BinaryParityCheck::from_positions(m, n, positions)?;
    for (r, &w) in row_weights.iter().enumerate() {
        let cols: Vec<usize> = next("row list")?
            .into_iter()
            .filter(|&c| c != 0)
            .map(|c| c - 1)
            .collect();
        if cols.len() != w || h.row(r) != sorted(cols).as_slice() {
            return Err(Error::Alist(format!(
                "row {} list disagrees with column lists",
                r + 1
            )));
        }
    }
    Ok(h)
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}
