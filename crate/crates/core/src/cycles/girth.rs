use std::fmt;

use serde::{Deserialize, Serialize};

use super::relation::{cached_relations, CycleRelation};
use crate::code_model::{ConvCodeSpec, ExponentMatrix};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CycleKind {
    NotACycle,
    Avoidable,
    StrictlyAvoidable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleClass {
    pub kind: CycleKind,
    pub sum: i64,
    /// `|sum| / N` for avoidable cycles.
    pub beta: Option<i64>,
}

/// Classifies a relation sum. Without a lifting degree only exact zero counts
/// as a cycle.
pub fn classify_sum(sum: i64, lifting_degree: Option<u64>) -> CycleClass {
    if sum == 0 {
        return CycleClass {
            kind: CycleKind::StrictlyAvoidable,
            sum,
            beta: None,
        };
    }
    match lifting_degree {
        Some(n) if sum.rem_euclid(n as i64) == 0 => CycleClass {
            kind: CycleKind::Avoidable,
            sum,
            beta: Some(sum.abs() / n as i64),
        },
        _ => CycleClass {
            kind: CycleKind::NotACycle,
            sum,
            beta: None,
        },
    }
}

pub fn classify(p: &ExponentMatrix, r: &CycleRelation) -> Result<CycleClass> {
    Ok(classify_sum(r.sum(p)?, p.lifting_degree()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Girth {
    Exact(usize),
    /// No cycle up to the checked bound; the girth is at least this value.
    AtLeast(usize),
    Acyclic,
}

impl Girth {
    /// `min(girth, bound)`, treating lower bounds and acyclic graphs as
    /// reaching the bound.
    pub fn capped(self, bound: usize) -> usize {
        match self {
            Girth::Exact(g) => g.min(bound),
            Girth::AtLeast(b) => b.min(bound),
            Girth::Acyclic => bound,
        }
    }

    /// True when the girth is known to be at least `g`.
    pub fn at_least(self, g: usize) -> bool {
        match self {
            Girth::Exact(x) | Girth::AtLeast(x) => x >= g,
            Girth::Acyclic => true,
        }
    }
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Exact(g) => write!(f, "{g}"),
            Girth::AtLeast(g) => write!(f, ">= {g}"),
            Girth::Acyclic => f.write_str("acyclic"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GirthReport {
    pub girth: Girth,
    /// A shortest cycle when one was found below the bound.
    pub witness: Option<CycleRelation>,
}

fn scan(
    p: &ExponentMatrix,
    max_half: usize,
    is_cycle: impl Fn(i64) -> bool,
) -> Result<GirthReport> {
    let set = cached_relations(p.rows(), p.cols(), max_half)?;
    for r in set.iter() {
        if is_cycle(r.sum_unchecked(p)) {
            return Ok(GirthReport {
                girth: Girth::Exact(r.length()),
                witness: Some(r.clone()),
            });
        }
    }
    Ok(GirthReport {
        girth: Girth::AtLeast(2 * max_half + 2),
        witness: None,
    })
}

/// Girth of the lifted QC-LDPC code: the shortest relation that vanishes mod
/// `N`, searching lengths up to `2 * max_half`.
pub fn girth_qc(p: &ExponentMatrix, max_half: usize) -> Result<GirthReport> {
    let n = p.lifting_degree().ok_or(Error::MissingLiftingDegree)? as i64;
    scan(p, max_half, |s| s.rem_euclid(n) == 0)
}

/// Girth of the convolutional code: the shortest relation of the unreduced
/// exponents with an exactly zero sum.
pub fn girth_conv(spec: &ConvCodeSpec, max_half: usize) -> Result<GirthReport> {
    scan(spec.exponents(), max_half, |s| s == 0)
}

/// Same as [`girth_conv`] for a bare grid, ignoring any lifting degree.
pub fn girth_exact(p: &ExponentMatrix, max_half: usize) -> Result<GirthReport> {
    scan(p, max_half, |s| s == 0)
}
